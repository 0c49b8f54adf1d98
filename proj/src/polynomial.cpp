#include "opuc/polynomial.hpp"

#include "opuc/errors.hpp"

#include <cmath>

namespace opuc {

MonicPolynomial::MonicPolynomial() : coefficients_{Complex(Real(1), Real(0))}, norm_sq_(1) {}

MonicPolynomial::MonicPolynomial(std::vector<Complex> coefficients, Real norm_sq)
    : coefficients_(std::move(coefficients)), norm_sq_(std::move(norm_sq)) {
  if (coefficients_.empty() || coefficients_.back().re != 1 || coefficients_.back().im != 0) {
    throw DomainError("monic polynomial must have leading coefficient 1");
  }
}

MonicPolynomial szego_step(const MonicPolynomial& phi, const Complex& alpha) {
  const Real a2 = norm(alpha);
  if (a2 >= 1) throw DomainError("Szego step needs |alpha| < 1");
  const std::size_t n = phi.degree();
  const Complex alpha_bar = conj(alpha);
  std::vector<Complex> next(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    // z Phi contributes b_{i-1}; conj(alpha) Phi^* contributes conj(alpha) conj(b_{n-i}).
    Complex t = i > 0 ? phi[i - 1] : Complex();
    const Complex& b = phi[n - i];
    t.re -= alpha_bar.re * b.re + alpha_bar.im * b.im;
    t.im -= alpha_bar.im * b.re - alpha_bar.re * b.im;
    next[i] = std::move(t);
  }
  next[n + 1] = Complex(Real(1), Real(0));
  return MonicPolynomial(std::move(next), phi.norm_sq() * (1 - a2));
}

std::vector<Complex> reversed(std::span<const Complex> coefficients) {
  const std::size_t n = coefficients.size();
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(conj(coefficients[n - 1 - i]));
  return out;
}

Real monic_norm_sq(const VerblunskySequence& alphas, std::size_t n) {
  if (alphas.size() < n) throw DomainError("monic_norm_sq: need " + std::to_string(n) + " coefficients");
  Real product = 1;
  for (std::size_t i = 0; i < n; ++i) product *= 1 - norm(alphas[i]);
  return product;
}

std::vector<MonicPolynomial> monic_family(const VerblunskySequence& alphas, std::size_t degree) {
  if (alphas.size() < degree) throw DomainError("monic_family: need " + std::to_string(degree) + " coefficients");
  std::vector<MonicPolynomial> family;
  family.reserve(degree + 1);
  family.emplace_back();
  for (std::size_t n = 0; n < degree; ++n) family.push_back(szego_step(family.back(), alphas[n]));
  return family;
}

Real gram_norm_sq(const MonicPolynomial& phi, const MomentSequence& moments) {
  const std::size_t n = phi.degree();
  Real acc = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const Complex& m = moments[n - i];
    acc += phi[i].re * m.re + phi[i].im * m.im;
  }
  return acc;
}

Complex inner_product(std::span<const Complex> p, std::span<const Complex> q, const MomentSequence& moments) {
  Complex acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const Complex pq = p[i] * conj(q[j]);
      acc.add_product(pq, moments.at(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j)));
    }
  }
  return acc;
}

SzegoConstant szego_constant(const MeasureSpec& spec, std::size_t n_max) {
  SzegoConstant out;
  if (spec.kind == MeasureKind::weight_function) {
    Real total = 0;
    Real log_total = 0;
    for (std::size_t g = 0; g < spec.samples.size(); ++g) {
      if (!(spec.samples[g] > 0.0)) {
        throw DomainError("log of density sample " + std::to_string(g) + " is undefined");
      }
      const Real w = spec.samples[g];
      total += w;
      log_total += log(w);
    }
    const auto grid = static_cast<unsigned long>(spec.samples.size());
    // mean(log(w / mean(w)))
    out.quadrature = exp(log_total / grid - log(total / grid));
  }
  // Non-Szego products fall below the Levinson floor at fixed precision;
  // retry at doubled precision like the distance engine does.
  std::optional<CompiledMeasure> compiled;
  for (unsigned bits = current_precision_bits();; bits *= 2) {
    try {
      PrecisionScope scope(bits);
      compiled = compile_measure(spec, n_max + 1, n_max + 1);
      break;
    } catch (const DegeneracyError&) {
      if (spec.kind == MeasureKind::atomic || bits * 2 > kMaxPrecisionBits) throw;
    } catch (const PrecisionError&) {
      if (bits * 2 > kMaxPrecisionBits) throw;
    }
  }
  PrecisionScope scope(compiled->precision_bits);
  Real product = 1;
  for (std::size_t i = 0; i < compiled->alphas.size(); ++i) {
    product *= 1 - norm(compiled->alphas[i]);
    out.partial_products.push_back(product);
  }
  return out;
}

}  // namespace opuc
