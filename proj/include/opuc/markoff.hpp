#pragma once

#include "opuc/measure.hpp"
#include "opuc/numeric.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace opuc {

/// Window parameters of the class Mar_{eps,ell}: every window of ell+1
/// consecutive coefficients holds one of modulus >= eps.
struct MarkoffParams {
  double eps;
  std::size_t ell;
};

void validate(const MarkoffParams& params);

struct MembershipVerdict {
  bool member;
  /// Start of the first window with all moduli below eps.
  std::optional<std::size_t> failing_window;
  std::size_t windows_checked;
};

/// Prefix-only test: every window [n, n+ell] inside [0, N-1] is checked.
/// Says nothing about coefficients past the prefix.
MembershipVerdict markoff_membership_prefix(std::span<const Complex> alphas, const MarkoffParams& params);

/// (1 - eps^2)^{(n-1)/(ell+1) - 1}, the floor-free form of the norm bound.
/// Values above one are vacuous since ||Phi_n|| <= 1.
double markoff_norm_bound(const MarkoffParams& params, std::size_t n);

/// |alpha_n| = (1-p) / sqrt(1 + p^2 - 2p cos((n+1) theta0)).
Real zhedanov_alpha_modulus(double p, double theta0, std::size_t n);

/// Throws DomainError naming the offending parameter.
void validate(const GeneratorSpec& spec);

struct GeneratedMeasure {
  MeasureSpec spec;
  VerblunskySequence alphas;
};

/// Verblunsky prefix of length n for a named generator, at the current
/// precision. The factorial generator places 1/sqrt(k) at index k! for k >= 2.
GeneratedMeasure build_measure(const GeneratorSpec& spec, std::size_t n);

}  // namespace opuc
