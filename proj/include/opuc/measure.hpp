#pragma once

#include "opuc/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opuc {

enum class GeneratorName { lebesgue, constant, poisson, zhedanov, factorial, ell2_szego, random_rotinv };

const char* to_string(GeneratorName name);
std::optional<GeneratorName> generator_from_string(const std::string& name);

/// Named Verblunsky-coefficient (or density) generator. Only the fields that
/// belong to `name` are meaningful; see the factory functions.
struct GeneratorSpec {
  GeneratorName name = GeneratorName::lebesgue;
  double a_re = 0.0;  // constant
  double a_im = 0.0;  // constant
  double r = 0.0;     // poisson
  double p = 0.0;     // zhedanov
  double theta0 = 0.0;
  double c = 0.0;     // ell2_szego: alpha_n = c * rho^n
  double rho = 0.0;
  std::vector<double> profile;  // random_rotinv radial density on equal bins of [0, 1)
  std::uint64_t seed = 0;

  static GeneratorSpec lebesgue();
  static GeneratorSpec constant(double re, double im = 0.0);
  static GeneratorSpec poisson(double r);
  static GeneratorSpec zhedanov(double p, double theta0);
  static GeneratorSpec factorial();
  static GeneratorSpec ell2_szego(double c, double rho);
  static GeneratorSpec random_rotinv(std::vector<double> profile, std::uint64_t seed);
};

enum class MeasureKind { alpha_defined, atomic, weight_function };

const char* to_string(MeasureKind kind);

struct Atom {
  double angle;
  double weight;
};

/// Declarative description of a probability measure on the circle.
///   alpha_defined    -> `generator` produces the Verblunsky coefficients
///   atomic           -> `atoms`, weights renormalized to sum to one
///   weight_function  -> `samples` of the density on a uniform grid of [0, 2pi)
struct MeasureSpec {
  MeasureKind kind = MeasureKind::alpha_defined;
  std::optional<GeneratorSpec> generator;
  std::vector<Atom> atoms;
  std::vector<double> samples;
  std::string label;

  static MeasureSpec from_generator(GeneratorSpec g, std::string label = {});
  static MeasureSpec atomic(std::vector<Atom> atoms, std::string label = {});
  static MeasureSpec weight_function(std::vector<double> samples, std::string label = {});
};

/// Atomic weights within this distance of summing to one are renormalized.
inline constexpr double kAtomWeightTolerance = 1e-9;
/// Density samples must average to one within this tolerance.
inline constexpr double kWeightMeanTolerance = 1e-6;

/// Checks the MeasureSpec invariants; throws DomainError.
void validate(const MeasureSpec& spec);

/// Number of distinct support points of an atomic spec, nullopt otherwise.
std::optional<std::size_t> atomic_rank(const MeasureSpec& spec);

/// Trigonometric moments m_0..m_N of a probability measure, m_k = \int z^k dmu.
/// Negative indices are served as conjugates and never stored.
class MomentSequence {
 public:
  MomentSequence() = default;
  MomentSequence(std::vector<Complex> values, unsigned precision_bits);

  /// Highest stored index N.
  std::size_t order() const { return values_.size() - 1; }
  const Complex& operator[](std::size_t k) const { return values_[k]; }
  /// m_k for any k with |k| <= order(), using m_{-k} = conj(m_k).
  Complex at(std::int64_t k) const;
  std::span<const Complex> values() const { return values_; }
  unsigned precision_bits() const { return precision_bits_; }

 private:
  std::vector<Complex> values_;
  unsigned precision_bits_ = kDefaultPrecisionBits;
};

/// Finite prefix alpha_0..alpha_{N-1} of a Verblunsky sequence, every entry in
/// the open unit disk. A generator tag allows regenerating a longer prefix.
class VerblunskySequence {
 public:
  VerblunskySequence() = default;
  explicit VerblunskySequence(std::vector<Complex> values,
                              std::optional<GeneratorSpec> generator = std::nullopt);

  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t j) const { return values_[j]; }
  std::span<const Complex> values() const { return values_; }
  const std::optional<GeneratorSpec>& generator() const { return generator_; }

  /// A prefix of length at least n: this one, or one regenerated from the tag.
  VerblunskySequence extended(std::size_t n) const;

 private:
  std::vector<Complex> values_;
  std::optional<GeneratorSpec> generator_;
};

/// Moments m_0..m_N of the measure with the given Verblunsky coefficients,
/// by running the Szego recurrence and solving <Phi_{n+1}, 1> = 0 for m_{n+1}.
MomentSequence moments_from_alphas(const VerblunskySequence& alphas, std::size_t order);

/// Inverse map: Levinson-type forward recurrence on the moment Toeplitz system.
/// Produces alpha_0..alpha_{count-1}; count defaults to the moment order.
/// Throws DegeneracyError when positive definiteness fails.
VerblunskySequence alphas_from_moments(const MomentSequence& moments,
                                       std::optional<std::size_t> count = std::nullopt);

MomentSequence moments_from_atoms(std::span<const Atom> atoms, std::size_t order);

/// Uniform-grid (periodic trapezoidal) quadrature of the density samples.
MomentSequence moments_from_weight(std::span<const double> samples, std::size_t order);

/// Closed form m_k = (1-p) / (1 - p q^k), q = e^{i theta0}, of the geometric
/// point measure (1-p) sum_n p^n delta_{q^n}. The requirement that theta0/2pi
/// be irrational is not checked.
MomentSequence zhedanov_moments(double p, double theta0, std::size_t order);

/// Samples of the Poisson kernel (1-r^2)/(1 - 2r cos t + r^2) on `grid` points.
std::vector<double> poisson_density_samples(double r, std::size_t grid);

/// A measure reduced to the canonical interchange form: moments through
/// `moments.order()` plus the Verblunsky prefix recoverable from them.
struct CompiledMeasure {
  MomentSequence moments;
  VerblunskySequence alphas;
  /// Number of support points for atomic measures; L^2(mu) has this dimension.
  std::optional<std::size_t> rank;
  unsigned precision_bits = kDefaultPrecisionBits;
};

/// Compiles a spec at the current precision. `alpha_count` coefficients are
/// produced (fewer for atomic measures, whose recurrence ends at rank - 1).
CompiledMeasure compile_measure(const MeasureSpec& spec, std::size_t moment_order,
                                std::size_t alpha_count);

}  // namespace opuc
