#include "opuc/markoff.hpp"

#include "opuc/errors.hpp"

#include <cmath>
#include <random>

namespace opuc {

void validate(const MarkoffParams& params) {
  if (!(params.eps > 0.0 && params.eps < 1.0)) throw DomainError("markoff: eps must lie in (0, 1)");
}

MembershipVerdict markoff_membership_prefix(std::span<const Complex> alphas, const MarkoffParams& params) {
  validate(params);
  const std::size_t window = params.ell + 1;
  if (alphas.size() < window) {
    throw DomainError("markoff: prefix of length " + std::to_string(alphas.size()) + " is shorter than one window");
  }
  const Real eps2 = Real(params.eps) * Real(params.eps);
  std::vector<bool> large(alphas.size());
  for (std::size_t j = 0; j < alphas.size(); ++j) large[j] = norm(alphas[j]) >= eps2;

  MembershipVerdict verdict{true, std::nullopt, 0};
  // Sliding count of large coefficients in [n, n+ell].
  std::size_t in_window = 0;
  for (std::size_t j = 0; j < window; ++j) in_window += large[j] ? 1 : 0;
  for (std::size_t n = 0; n + window <= alphas.size(); ++n) {
    if (n > 0) {
      in_window -= large[n - 1] ? 1 : 0;
      in_window += large[n + window - 1] ? 1 : 0;
    }
    ++verdict.windows_checked;
    if (in_window == 0 && verdict.member) {
      verdict.member = false;
      verdict.failing_window = n;
    }
  }
  return verdict;
}

double markoff_norm_bound(const MarkoffParams& params, std::size_t n) {
  validate(params);
  if (n < 1) throw DomainError("markoff_norm_bound: n must be at least 1");
  const double exponent = (static_cast<double>(n) - 1.0) / static_cast<double>(params.ell + 1) - 1.0;
  return std::pow(1.0 - params.eps * params.eps, exponent);
}

Real zhedanov_alpha_modulus(double p, double theta0, std::size_t n) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("zhedanov: p must lie in (0, 1)");
  const Real pr = p;
  const Real c = cos(Real(theta0) * static_cast<unsigned long>(n + 1));
  return (1 - pr) / sqrt(1 + pr * pr - 2 * pr * c);
}

void validate(const GeneratorSpec& g) {
  switch (g.name) {
    case GeneratorName::lebesgue:
    case GeneratorName::factorial:
      break;
    case GeneratorName::constant:
      if (!(std::hypot(g.a_re, g.a_im) < 1.0)) throw DomainError("constant: |a| must be below 1");
      break;
    case GeneratorName::poisson:
      if (!(std::abs(g.r) < 1.0)) throw DomainError("poisson: |r| must be below 1");
      break;
    case GeneratorName::zhedanov:
      if (!(g.p > 0.0 && g.p < 1.0)) throw DomainError("zhedanov: p must lie in (0, 1)");
      if (!std::isfinite(g.theta0)) throw DomainError("zhedanov: theta0 must be finite");
      break;
    case GeneratorName::ell2_szego:
      if (!(std::abs(g.c) < 1.0)) throw DomainError("ell2_szego: |c| must be below 1");
      if (!(g.rho >= 0.0 && g.rho < 1.0)) throw DomainError("ell2_szego: rho must lie in [0, 1)");
      break;
    case GeneratorName::random_rotinv: {
      if (g.profile.empty()) throw DomainError("random_rotinv: profile is empty");
      double total = 0.0;
      for (double v : g.profile) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("random_rotinv: profile entries must be nonnegative");
        total += v;
      }
      if (!(total > 0.0)) throw DomainError("random_rotinv: profile has zero mass");
      break;
    }
  }
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double canonical(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Complex> random_rotinv_alphas(const GeneratorSpec& g, std::size_t n) {
  std::mt19937_64 rng(g.seed);
  std::vector<double> cumulative;
  double total = 0.0;
  for (double v : g.profile) cumulative.push_back(total += v);
  const double bins = static_cast<double>(g.profile.size());
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = canonical(rng) * total;
    std::size_t bin = 0;
    while (bin + 1 < cumulative.size() && !(u < cumulative[bin])) ++bin;
    double r = (static_cast<double>(bin) + canonical(rng)) / bins;
    if (r >= 1.0) r = std::nextafter(1.0, 0.0);
    const double phase = 2.0 * M_PI * canonical(rng);
    out.push_back(Complex::polar(Real(r), Real(phase)));
  }
  return out;
}

}  // namespace

GeneratedMeasure build_measure(const GeneratorSpec& g, std::size_t n) {
  validate(g);
  std::vector<Complex> alphas(n);
  switch (g.name) {
    case GeneratorName::lebesgue:
      break;
    case GeneratorName::constant:
      for (auto& a : alphas) a = Complex(Real(g.a_re), Real(g.a_im));
      break;
    case GeneratorName::poisson:
      if (n > 0) alphas[0] = Complex(Real(g.r), Real(0));
      break;
    case GeneratorName::zhedanov: {
      // Only |alpha_n| has a closed form; the phases come from the moments.
      auto computed = alphas_from_moments(zhedanov_moments(g.p, g.theta0, n), n);
      alphas.assign(computed.values().begin(), computed.values().end());
      break;
    }
    case GeneratorName::factorial: {
      // k starts at 2: 1/sqrt(0) is undefined and 1/sqrt(1) leaves the disk.
      std::size_t index = 2;
      for (unsigned long k = 2; index < n; ++k) {
        alphas[index] = Complex(1 / sqrt(Real(k)), Real(0));
        if (index > n / (k + 1)) break;
        index *= k + 1;
      }
      break;
    }
    case GeneratorName::ell2_szego: {
      Real power = g.c;
      const Real rho = g.rho;
      for (auto& a : alphas) {
        a = Complex(power, Real(0));
        power *= rho;
      }
      break;
    }
    case GeneratorName::random_rotinv:
      alphas = random_rotinv_alphas(g, n);
      break;
  }
  GeneratedMeasure out;
  out.spec = MeasureSpec::from_generator(g);
  out.alphas = VerblunskySequence(std::move(alphas), g);
  return out;
}

}  // namespace opuc
