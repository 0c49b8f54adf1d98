#pragma once

#include "opuc/measure.hpp"
#include "opuc/numeric.hpp"
#include "opuc/polynomial.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace opuc {

struct BetaOptions {
  unsigned precision_bits = kDefaultPrecisionBits;
  /// Escalation doubles the precision up to this ceiling, then gives up.
  unsigned max_precision_bits = kMaxPrecisionBits;
};

/// beta(k, n) = min over polynomials p of degree <= n of ||z^{-k} - p|| in L^2(mu).
/// A norm, not its square.
struct BetaResult {
  std::size_t k = 0;
  std::size_t n = 0;
  Real value;
  unsigned precision_bits = 0;
  Real residual;
  /// L^2(mu) is finite dimensional and already spanned: value is exactly 0.
  bool rank_deficient = false;
};

struct SpanDistance {
  Real value;
  unsigned precision_bits = 0;
  /// max_t |sum_s x_s <z^s, z^t> - <z^target, z^t>| for the fitted coefficients.
  Real residual;
  bool rank_deficient = false;
  /// Basis monomials skipped as numerically dependent (atomic measures only).
  std::size_t dropped = 0;
};

struct MinDegree {
  /// Smallest n <= n_max with beta(k, n) <= tol; empty when none exists.
  std::optional<std::size_t> n;
  bool overflow() const { return !n.has_value(); }
};

/// Incremental Gram-Schmidt projection of z^target onto span{z^s} using only
/// the moment Toeplitz entries <z^s, z^t> = m_{s-t}. Exponents may be
/// negative and are appended one at a time; distance() never increases.
class SpanProjector {
 public:
  /// With allow_drop, a basis vector whose new pivot falls below the drop
  /// threshold is skipped as dependent; otherwise it signals lost precision.
  SpanProjector(const MomentSequence& moments, std::int64_t target, bool allow_drop);

  /// Returns false when the exponent was dropped as dependent.
  bool add(std::int64_t exponent);
  Real distance() const;
  Real distance_sq() const;
  Real residual() const;
  std::size_t dropped() const { return dropped_; }
  std::size_t size() const { return basis_.size(); }

 private:
  const MomentSequence& moments_;
  std::int64_t target_;
  bool allow_drop_;
  Real drop_threshold_;
  std::vector<std::int64_t> basis_;
  std::vector<std::vector<Complex>> coupling_;  // <v_i, e_j>, j < i
  std::vector<Real> pivot_;                     // ||v_i - projection||
  std::vector<Complex> target_coef_;            // <target, e_j>
  Real captured_;                               // sum_j |<target, e_j>|^2
  std::size_t dropped_ = 0;
};

/// Computes beta and related distances for one measure, caching the moments
/// and the monic family and escalating precision when residuals exceed
/// 2^{-(bits/4)}.
class BetaEngine {
 public:
  explicit BetaEngine(MeasureSpec spec, BetaOptions options = {});

  const MeasureSpec& spec() const { return spec_; }
  /// Current working precision; grows after escalation.
  unsigned precision_bits() const { return bits_; }
  std::optional<std::size_t> rank() const;

  /// Prefetch moments through `moment_order` and Phi_0..Phi_degree.
  void reserve(std::size_t moment_order, std::size_t degree);

  /// Orthonormal-projection route:
  /// beta^2 = 1 - sum_{j<=n} |<z^{-k}, Phi_j>|^2 / ||Phi_j||^2.
  BetaResult beta(std::size_t k, std::size_t n);
  /// beta(k, 0..n_max) in a single pass.
  std::vector<BetaResult> beta_row(std::size_t k, std::size_t n_max);
  /// Direct Toeplitz-Gram route; slow verification path for beta.
  BetaResult beta_gram(std::size_t k, std::size_t n);

  /// dist(z^target, span{z^s : s in exponents}).
  SpanDistance span_distance(std::int64_t target, std::span<const std::int64_t> exponents);
  /// Span distance for a prefix of exponents, reported at each checkpoint
  /// (number of exponents consumed). Distances are nonincreasing.
  std::vector<SpanDistance> span_distance_curve(std::int64_t target, std::span<const std::int64_t> exponents,
                                                std::span<const std::size_t> checkpoints);

  /// ||Phi_n|| from the product of (1 - |alpha_i|^2).
  Real phi_norm(std::size_t n);
  /// ||Phi_{n+1}|| times the composition sum over the moduli of the top
  /// coefficients of Phi_{n+1}; see composition_bracket.
  Real composition_bound(std::size_t k, std::size_t n);
  /// ||Phi_{n+1}|| (2n+2)^{k-1}.
  Real binomial_bound(std::size_t k, std::size_t n);
  /// Coefficients of Phi_n.
  MonicPolynomial monic(std::size_t n);
  /// alpha_0..alpha_{count-1}.
  VerblunskySequence alphas(std::size_t count);
  MomentSequence moments(std::size_t order);

  /// Binary search over the nonincreasing sequence beta(k, 0..n_max).
  MinDegree find_min_degree(std::size_t k, const Real& tol, std::size_t n_max);

 private:
  template <typename Fn>
  auto escalating(Fn&& fn) -> decltype(fn());
  void ensure(std::size_t moment_order, std::size_t degree);
  void clear_cache();
  bool rank_covers(std::size_t n) const;

  MeasureSpec spec_;
  BetaOptions options_;
  unsigned bits_;
  std::optional<std::size_t> rank_;
  std::optional<CompiledMeasure> compiled_;
  std::vector<MonicPolynomial> family_;
  std::vector<Real> residual_prefix_;  // max relative Gram mismatch over Phi_0..Phi_j
};

/// 1 + sum over tuples (j_1..j_i), j_s in [1, n+1], sum <= k-1, of
/// prod a_{j_s}, computed as sum_{t<k} F(t) with F(0) = 1 and
/// F(t) = sum_{j=1}^{min(n+1,t)} a_j F(t-j). `a` holds a_1..a_{n+1}.
Real composition_bracket(std::span<const Real> a, std::size_t k);

struct ApproxRow {
  std::size_t k;
  std::size_t f_k;
  std::optional<BetaResult> beta;
  std::string error;
};

struct ApproxFunctionReport {
  std::vector<ApproxRow> rows;
  Real threshold;
  /// f strictly increasing over the range.
  bool monotone = false;
  /// beta(k, f(k)) <= threshold for every k in the top quartile of the range.
  bool verdict = false;
};

/// Empirical check that f drives beta(k, f(k)) below `threshold`; the top
/// quartile is the last ceil(count/4) values of k in [k_lo, k_hi].
ApproxFunctionReport approximating_check(BetaEngine& engine, const std::function<std::size_t(std::size_t)>& f,
                                         std::size_t k_lo, std::size_t k_hi, const Real& threshold);

}  // namespace opuc
