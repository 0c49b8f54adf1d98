#pragma once

#include "opuc/measure.hpp"
#include "opuc/numeric.hpp"

#include <optional>
#include <span>
#include <vector>

namespace opuc {

/// Monic orthogonal polynomial Phi_n in the monomial basis together with its
/// squared L^2(mu) norm, carried through the recurrence rather than
/// recomputed from a Gram matrix.
class MonicPolynomial {
 public:
  /// Phi_0 = 1 with norm 1.
  MonicPolynomial();
  /// Coefficients b_0..b_n with b_n == 1.
  MonicPolynomial(std::vector<Complex> coefficients, Real norm_sq);

  std::size_t degree() const { return coefficients_.size() - 1; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  const Complex& operator[](std::size_t i) const { return coefficients_[i]; }
  const Real& norm_sq() const { return norm_sq_; }

 private:
  std::vector<Complex> coefficients_;
  Real norm_sq_;
};

/// Phi_{n+1} = z Phi_n - conj(alpha) Phi_n^*. Throws DomainError if |alpha| >= 1.
MonicPolynomial szego_step(const MonicPolynomial& phi, const Complex& alpha);

/// Coefficients of Phi^*(z) = z^n conj(Phi(1/conj z)): entry i is conj(b_{n-i}).
std::vector<Complex> reversed(std::span<const Complex> coefficients);

/// ||Phi_n||^2 = prod_{i<n} (1 - |alpha_i|^2).
Real monic_norm_sq(const VerblunskySequence& alphas, std::size_t n);

/// Phi_0..Phi_{degree} from a Verblunsky prefix of length >= degree.
std::vector<MonicPolynomial> monic_family(const VerblunskySequence& alphas, std::size_t degree);

/// <Phi, z^n> computed from moments, which equals ||Phi||^2 for the orthogonal
/// Phi_n. Used as the consistency residual against the product form.
Real gram_norm_sq(const MonicPolynomial& phi, const MomentSequence& moments);

/// <p, q> = sum_{i,j} p_i conj(q_j) m_{i-j}; the slow Gram route.
Complex inner_product(std::span<const Complex> p, std::span<const Complex> q,
                      const MomentSequence& moments);

struct SzegoConstant {
  /// partial_products[n] = prod_{i=0}^{n} (1 - |alpha_i|^2)
  std::vector<Real> partial_products;
  /// exp(\int log w dm) from the density samples, weight_function specs only.
  std::optional<Real> quadrature;
};

/// Partial products up to n_max, plus exp of the uniform-grid mean of log w
/// when the spec is a weight function. Throws DomainError on a
/// nonpositive sample in the quadrature branch. The products are computed at
/// doubled precision (up to 4096 bits) when the Toeplitz system degenerates
/// numerically.
SzegoConstant szego_constant(const MeasureSpec& spec, std::size_t n_max);

}  // namespace opuc
