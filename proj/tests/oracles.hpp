#pragma once
// Reference computations used only by the tests. Each one avoids the library
// algorithm it checks: dense linear algebra instead of recurrences, brute
// force instead of dynamic programming, exact integers instead of reals.

#include "opuc/measure.hpp"
#include "opuc/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using opuc::Complex;
using opuc::Real;

/// m_k of a density by a plain periodic trapezoid sum in long double.
inline std::vector<std::complex<long double>> trapezoid_moments(const std::function<long double(long double)>& w,
                                                               std::size_t grid, std::size_t order) {
  std::vector<std::complex<long double>> m(order + 1);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t k = 0; k <= order; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t g = 0; g < grid; ++g) {
      const long double t = two_pi * static_cast<long double>(g) / static_cast<long double>(grid);
      acc += w(t) * std::polar(1.0L, static_cast<long double>(k) * t);
    }
    m[k] = acc / static_cast<long double>(grid);
  }
  return m;
}

/// Determinant of the (n+1)x(n+1) Toeplitz matrix T[i][j] = m_{i-j} by
/// Gaussian elimination with partial pivoting.
inline Real toeplitz_determinant(const opuc::MomentSequence& m, std::size_t n) {
  const std::size_t size = n + 1;
  std::vector<std::vector<Complex>> a(size, std::vector<Complex>(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) a[i][j] = m.at(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j));
  }
  Complex det(Real(1), Real(0));
  for (std::size_t c = 0; c < size; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < size; ++r) {
      if (opuc::norm(a[r][c]) > opuc::norm(a[pivot][c])) pivot = r;
    }
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det = det * a[c][c];
    for (std::size_t r = c + 1; r < size; ++r) {
      const Complex factor = a[r][c] / a[c][c];
      for (std::size_t j = c; j < size; ++j) a[r][j] -= factor * a[c][j];
    }
  }
  return det.re;  // Hermitian positive definite: the imaginary part is rounding
}

/// min_x ||A x - b||_2 for a dense complex tall matrix by Householder QR.
inline Real least_squares_residual(std::vector<std::vector<Complex>> a, std::vector<Complex> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && c < rows; ++c) {
    Real col_norm_sq = 0;
    for (std::size_t r = c; r < rows; ++r) col_norm_sq += opuc::norm(a[r][c]);
    const Real col_norm = sqrt(col_norm_sq);
    if (col_norm == 0) continue;
    // alpha = -e^{i arg a_cc} ||x||, v = x - alpha e_1
    const Real head_abs = opuc::abs(a[c][c]);
    const Complex phase = head_abs > 0 ? a[c][c] / head_abs : Complex(Real(1), Real(0));
    const Complex alpha = -(phase * col_norm);
    std::vector<Complex> v(rows - c);
    for (std::size_t r = c; r < rows; ++r) v[r - c] = a[r][c];
    v[0] -= alpha;
    Real v_norm_sq = 0;
    for (const auto& x : v) v_norm_sq += opuc::norm(x);
    if (v_norm_sq == 0) continue;
    auto reflect = [&](auto&& get) {
      Complex dot;
      for (std::size_t r = c; r < rows; ++r) dot += opuc::conj(v[r - c]) * get(r);
      const Complex scale = dot * (Real(2) / v_norm_sq);
      for (std::size_t r = c; r < rows; ++r) get(r) -= v[r - c] * scale;
    };
    for (std::size_t j = c; j < cols; ++j) reflect([&](std::size_t r) -> Complex& { return a[r][j]; });
    reflect([&](std::size_t r) -> Complex& { return b[r]; });
  }
  Real residual_sq = 0;
  for (std::size_t r = cols; r < rows; ++r) residual_sq += opuc::norm(b[r]);
  return sqrt(residual_sq);
}

/// dist(z^target, span{z^s}) in L^2 of an atomic measure, in atom coordinates.
inline Real atomic_span_distance(const std::vector<opuc::Atom>& atoms, std::int64_t target,
                                 const std::vector<std::int64_t>& exponents) {
  Real total = 0;
  for (const auto& a : atoms) total += Real(a.weight);
  std::vector<std::vector<Complex>> mat;
  std::vector<Complex> rhs;
  for (const auto& a : atoms) {
    const Real sw = sqrt(Real(a.weight) / total);
    const Real theta = a.angle;
    std::vector<Complex> row;
    for (auto s : exponents) row.push_back(Complex::unit(theta * Real(static_cast<long>(s))) * sw);
    mat.push_back(std::move(row));
    rhs.push_back(Complex::unit(theta * Real(static_cast<long>(target))) * sw);
  }
  return least_squares_residual(std::move(mat), std::move(rhs));
}

/// First `count` atoms of the geometric measure (1-p) sum p^n delta_{n theta0},
/// renormalized to unit mass.
inline std::vector<opuc::Atom> zhedanov_atoms(double p, double theta0, std::size_t count) {
  std::vector<opuc::Atom> atoms;
  double total = 0.0;
  for (std::size_t n = 0; n < count; ++n) total += (1 - p) * std::pow(p, static_cast<double>(n));
  for (std::size_t n = 0; n < count; ++n) {
    atoms.push_back({theta0 * static_cast<double>(n), (1 - p) * std::pow(p, static_cast<double>(n)) / total});
  }
  return atoms;
}

/// Sum over all tuples (j_1..j_i), i >= 1, 1 <= j_s <= n+1, sum <= k-1, of
/// prod a_{j_s}, plus 1; by explicit enumeration.
inline Real composition_bracket_brute(const std::vector<Real>& a, std::size_t k) {
  Real total = 1;
  std::function<void(std::size_t, const Real&)> walk = [&](std::size_t budget, const Real& product) {
    for (std::size_t j = 1; j <= a.size() && j <= budget; ++j) {
      const Real next = product * a[j - 1];
      total += next;
      walk(budget - j, next);
    }
  };
  walk(k - 1, Real(1));
  return total;
}

using Int = boost::multiprecision::cpp_int;

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Int r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
