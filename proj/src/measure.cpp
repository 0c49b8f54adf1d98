#include "opuc/measure.hpp"

#include "opuc/errors.hpp"
#include "opuc/markoff.hpp"
#include "opuc/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace opuc {

const char* to_string(GeneratorName name) {
  switch (name) {
    case GeneratorName::lebesgue: return "lebesgue";
    case GeneratorName::constant: return "constant";
    case GeneratorName::poisson: return "poisson";
    case GeneratorName::zhedanov: return "zhedanov";
    case GeneratorName::factorial: return "factorial";
    case GeneratorName::ell2_szego: return "ell2_szego";
    case GeneratorName::random_rotinv: return "random_rotinv";
  }
  return "?";
}

std::optional<GeneratorName> generator_from_string(const std::string& name) {
  for (auto g : {GeneratorName::lebesgue, GeneratorName::constant, GeneratorName::poisson,
                 GeneratorName::zhedanov, GeneratorName::factorial, GeneratorName::ell2_szego,
                 GeneratorName::random_rotinv}) {
    if (name == to_string(g)) return g;
  }
  return std::nullopt;
}

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::alpha_defined: return "alpha_defined";
    case MeasureKind::atomic: return "atomic";
    case MeasureKind::weight_function: return "weight_function";
  }
  return "?";
}

GeneratorSpec GeneratorSpec::lebesgue() { return {}; }

GeneratorSpec GeneratorSpec::constant(double re, double im) {
  GeneratorSpec g;
  g.name = GeneratorName::constant;
  g.a_re = re;
  g.a_im = im;
  return g;
}

GeneratorSpec GeneratorSpec::poisson(double r) {
  GeneratorSpec g;
  g.name = GeneratorName::poisson;
  g.r = r;
  return g;
}

GeneratorSpec GeneratorSpec::zhedanov(double p, double theta0) {
  GeneratorSpec g;
  g.name = GeneratorName::zhedanov;
  g.p = p;
  g.theta0 = theta0;
  return g;
}

GeneratorSpec GeneratorSpec::factorial() {
  GeneratorSpec g;
  g.name = GeneratorName::factorial;
  return g;
}

GeneratorSpec GeneratorSpec::ell2_szego(double c, double rho) {
  GeneratorSpec g;
  g.name = GeneratorName::ell2_szego;
  g.c = c;
  g.rho = rho;
  return g;
}

GeneratorSpec GeneratorSpec::random_rotinv(std::vector<double> profile, std::uint64_t seed) {
  GeneratorSpec g;
  g.name = GeneratorName::random_rotinv;
  g.profile = std::move(profile);
  g.seed = seed;
  return g;
}

MeasureSpec MeasureSpec::from_generator(GeneratorSpec g, std::string label) {
  MeasureSpec m;
  m.kind = MeasureKind::alpha_defined;
  m.generator = std::move(g);
  m.label = std::move(label);
  return m;
}

MeasureSpec MeasureSpec::atomic(std::vector<Atom> atoms, std::string label) {
  MeasureSpec m;
  m.kind = MeasureKind::atomic;
  m.atoms = std::move(atoms);
  m.label = std::move(label);
  return m;
}

MeasureSpec MeasureSpec::weight_function(std::vector<double> samples, std::string label) {
  MeasureSpec m;
  m.kind = MeasureKind::weight_function;
  m.samples = std::move(samples);
  m.label = std::move(label);
  return m;
}

namespace {

void validate_atoms(std::span<const Atom> atoms) {
  if (atoms.empty()) throw DomainError("atomic measure needs at least one atom");
  double total = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (!std::isfinite(atoms[j].angle)) throw DomainError("atom " + std::to_string(j) + ": angle is not finite");
    if (!(atoms[j].weight > 0.0)) throw DomainError("atom " + std::to_string(j) + ": weight must be positive");
    total += atoms[j].weight;
  }
  if (std::abs(total - 1.0) > kAtomWeightTolerance) {
    throw DomainError("atom weights sum to " + std::to_string(total) + ", not 1");
  }
}

double validate_samples(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("weight function needs samples");
  double total = 0.0;
  for (std::size_t g = 0; g < samples.size(); ++g) {
    if (!std::isfinite(samples[g]) || samples[g] < 0.0) {
      throw DomainError("density sample " + std::to_string(g) + " is negative or not finite");
    }
    total += samples[g];
  }
  const double mean = total / static_cast<double>(samples.size());
  if (std::abs(mean - 1.0) > kWeightMeanTolerance) {
    throw DomainError("density mean is " + std::to_string(mean) + ", not 1");
  }
  return mean;
}

// Largest DFT magnitude of the samples in the top eighth of the band below
// Nyquist, relative to the mean. Anything visible there will alias.
double nyquist_content(std::span<const double> samples) {
  const std::size_t grid = samples.size();
  const std::size_t lo = (3 * grid) / 8;
  const std::size_t hi = grid / 2;
  double total = 0.0;
  for (double w : samples) total += w;
  double worst = 0.0;
  for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
    std::complex<double> acc = 0.0;
    for (std::size_t g = 0; g < grid; ++g) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * g) % grid) / static_cast<double>(grid);
      acc += samples[g] * std::polar(1.0, angle);
    }
    worst = std::max(worst, std::abs(acc) / total);
  }
  return worst;
}

constexpr double kNyquistTolerance = 1e-8;

}  // namespace

void validate(const MeasureSpec& spec) {
  switch (spec.kind) {
    case MeasureKind::alpha_defined:
      if (!spec.generator) throw DomainError("alpha_defined measure needs a generator");
      validate(*spec.generator);
      break;
    case MeasureKind::atomic:
      validate_atoms(spec.atoms);
      break;
    case MeasureKind::weight_function:
      validate_samples(spec.samples);
      break;
  }
}

std::optional<std::size_t> atomic_rank(const MeasureSpec& spec) {
  if (spec.kind != MeasureKind::atomic) return std::nullopt;
  std::vector<double> reduced;
  reduced.reserve(spec.atoms.size());
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& a : spec.atoms) {
    double t = std::fmod(a.angle, two_pi);
    if (t < 0) t += two_pi;
    if (two_pi - t < 1e-12) t = 0.0;
    reduced.push_back(t);
  }
  std::sort(reduced.begin(), reduced.end());
  std::size_t distinct = 0;
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    if (j == 0 || reduced[j] - reduced[j - 1] > 1e-12) ++distinct;
  }
  return distinct;
}

MomentSequence::MomentSequence(std::vector<Complex> values, unsigned precision_bits)
    : values_(std::move(values)), precision_bits_(precision_bits) {
  if (values_.empty()) throw DomainError("moment sequence is empty");
  if (values_[0].re != 1 || values_[0].im != 0) throw DomainError("moment sequence must have m_0 = 1");
}

Complex MomentSequence::at(std::int64_t k) const {
  const auto index = static_cast<std::size_t>(k < 0 ? -k : k);
  if (index >= values_.size()) {
    throw DomainError("moment index " + std::to_string(k) + " beyond order " + std::to_string(order()));
  }
  return k < 0 ? conj(values_[index]) : values_[index];
}

VerblunskySequence::VerblunskySequence(std::vector<Complex> values, std::optional<GeneratorSpec> generator)
    : values_(std::move(values)), generator_(std::move(generator)) {
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (norm(values_[j]) >= 1) {
      throw DomainError("Verblunsky coefficient " + std::to_string(j) + " is not inside the unit disk");
    }
  }
}

VerblunskySequence VerblunskySequence::extended(std::size_t n) const {
  if (values_.size() >= n) return *this;
  if (!generator_) {
    throw DomainError("cannot extend an untagged Verblunsky prefix of length " + std::to_string(values_.size()));
  }
  return build_measure(*generator_, n).alphas;
}

MomentSequence moments_from_alphas(const VerblunskySequence& alphas, std::size_t order) {
  if (alphas.size() < order) {
    throw DomainError("need " + std::to_string(order) + " coefficients, have " + std::to_string(alphas.size()));
  }
  const unsigned bits = current_precision_bits();
  const Real tol = escalation_tolerance(bits);
  std::vector<Complex> m;
  m.reserve(order + 1);
  m.emplace_back(Real(1), Real(0));
  MonicPolynomial phi;
  for (std::size_t n = 0; n < order; ++n) {
    phi = szego_step(phi, alphas[n]);
    Complex next;
    for (std::size_t i = 0; i <= n; ++i) next.add_product(phi[i], m[i]);
    m.push_back(-next);
    // <Phi_{n+1}, z^{n+1}> must reproduce the product-form norm.
    Real gram = 0;
    for (std::size_t i = 0; i <= n + 1; ++i) {
      const Complex& mm = m[n + 1 - i];
      gram += phi[i].re * mm.re + phi[i].im * mm.im;
    }
    if (abs(gram - phi.norm_sq()) > tol * phi.norm_sq()) {
      throw PrecisionError("moment recurrence lost positive definiteness at order " + std::to_string(n + 1),
                           n + 1, bits);
    }
  }
  return MomentSequence(std::move(m), bits);
}

VerblunskySequence alphas_from_moments(const MomentSequence& moments, std::optional<std::size_t> count) {
  const std::size_t n_alphas = count.value_or(moments.order());
  if (n_alphas > moments.order()) {
    throw DomainError("need moments through order " + std::to_string(n_alphas));
  }
  const unsigned bits = std::min(current_precision_bits(), moments.precision_bits());
  const Real floor = pow2(-static_cast<long>(bits / 2));
  std::vector<Complex> alphas;
  alphas.reserve(n_alphas);
  MonicPolynomial phi;
  for (std::size_t n = 0; n < n_alphas; ++n) {
    // conj(alpha_n) ||Phi_n||^2 = <z Phi_n, 1>
    Complex s;
    for (std::size_t i = 0; i <= n; ++i) s.add_product(phi[i], moments[i + 1]);
    Complex alpha = conj(s) / phi.norm_sq();
    if (1 - norm(alpha) <= floor) {
      throw DegeneracyError("moment Toeplitz matrix is not positive definite at order " + std::to_string(n + 1),
                            n + 1);
    }
    phi = szego_step(phi, alpha);
    alphas.push_back(std::move(alpha));
  }
  return VerblunskySequence(std::move(alphas));
}

MomentSequence moments_from_atoms(std::span<const Atom> atoms, std::size_t order) {
  validate_atoms(atoms);
  Real total = 0;
  for (const auto& a : atoms) total += Real(a.weight);
  std::vector<Complex> m(order + 1);
  m[0] = Complex(Real(1), Real(0));
  for (const auto& a : atoms) {
    const Real w = Real(a.weight) / total;
    const Real theta = a.angle;
    for (std::size_t k = 1; k <= order; ++k) {
      const Real angle = theta * static_cast<unsigned long>(k);
      m[k].re += w * cos(angle);
      m[k].im += w * sin(angle);
    }
  }
  return MomentSequence(std::move(m), current_precision_bits());
}

MomentSequence moments_from_weight(std::span<const double> samples, std::size_t order) {
  validate_samples(samples);
  const std::size_t grid = samples.size();
  if (grid < 4 * order) {
    throw ResolutionError("grid of " + std::to_string(grid) + " points is below 4N = " + std::to_string(4 * order));
  }
  if (grid >= 8 && nyquist_content(samples) > kNyquistTolerance) {
    throw ResolutionError("density has significant content near the Nyquist index of a " + std::to_string(grid) +
                          "-point grid");
  }
  const Real step = 2 * pi() / static_cast<unsigned long>(grid);
  std::vector<Complex> roots;
  roots.reserve(grid);
  for (std::size_t g = 0; g < grid; ++g) roots.push_back(Complex::unit(step * static_cast<unsigned long>(g)));
  std::vector<Real> w;
  w.reserve(grid);
  Real total = 0;
  for (double s : samples) {
    w.emplace_back(s);
    total += w.back();
  }
  std::vector<Complex> m(order + 1);
  m[0] = Complex(Real(1), Real(0));
  for (std::size_t k = 1; k <= order; ++k) {
    Complex acc;
    for (std::size_t g = 0; g < grid; ++g) {
      const Complex& root = roots[(k * g) % grid];
      acc.re += w[g] * root.re;
      acc.im += w[g] * root.im;
    }
    m[k] = acc / total;
  }
  return MomentSequence(std::move(m), current_precision_bits());
}

MomentSequence zhedanov_moments(double p, double theta0, std::size_t order) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("zhedanov: p must lie in (0, 1)");
  const Real pr = p;
  const Real theta = theta0;
  std::vector<Complex> m;
  m.reserve(order + 1);
  m.emplace_back(Real(1), Real(0));
  for (std::size_t k = 1; k <= order; ++k) {
    const Complex qk = Complex::unit(theta * static_cast<unsigned long>(k));
    const Complex denom(1 - pr * qk.re, -pr * qk.im);
    m.push_back(Complex(1 - pr, Real(0)) / denom);
  }
  return MomentSequence(std::move(m), current_precision_bits());
}

std::vector<double> poisson_density_samples(double r, std::size_t grid) {
  if (!(std::abs(r) < 1.0)) throw DomainError("poisson: |r| must be below 1");
  std::vector<double> w(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid);
    w[g] = (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(t) + r * r);
  }
  return w;
}

CompiledMeasure compile_measure(const MeasureSpec& spec, std::size_t moment_order, std::size_t alpha_count) {
  validate(spec);
  CompiledMeasure out;
  out.precision_bits = current_precision_bits();
  switch (spec.kind) {
    case MeasureKind::alpha_defined: {
      const GeneratorSpec& g = *spec.generator;
      if (g.name == GeneratorName::zhedanov) {
        out.moments = zhedanov_moments(g.p, g.theta0, std::max(moment_order, alpha_count));
        auto alphas = alphas_from_moments(out.moments, alpha_count);
        out.alphas = VerblunskySequence({alphas.values().begin(), alphas.values().end()}, g);
      } else {
        out.alphas = build_measure(g, std::max(moment_order, alpha_count)).alphas;
        out.moments = moments_from_alphas(out.alphas, moment_order);
      }
      break;
    }
    case MeasureKind::atomic: {
      out.rank = atomic_rank(spec);
      const std::size_t count = std::min(alpha_count, *out.rank - 1);
      out.moments = moments_from_atoms(spec.atoms, std::max(moment_order, count));
      out.alphas = alphas_from_moments(out.moments, count);
      break;
    }
    case MeasureKind::weight_function: {
      out.moments = moments_from_weight(spec.samples, std::max(moment_order, alpha_count));
      out.alphas = alphas_from_moments(out.moments, alpha_count);
      break;
    }
  }
  return out;
}

}  // namespace opuc
