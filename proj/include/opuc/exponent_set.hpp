#pragma once

#include "opuc/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opuc {

struct Interval {
  Index lo;
  Index hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Subset of the nonnegative integers stored as sorted, disjoint,
/// non-adjacent closed intervals.
class ExponentSet {
 public:
  ExponentSet() = default;
  /// Merges overlapping and adjacent inputs. Throws DomainError on lo > hi or
  /// a negative endpoint.
  explicit ExponentSet(std::vector<Interval> intervals, std::string provenance = {});

  const std::vector<Interval>& intervals() const { return intervals_; }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }
  bool empty() const { return intervals_.empty(); }

  bool contains(const Index& x) const;
  /// |set ∩ [[1, n]]|
  Index count_up_to(const Index& n) const;
  /// |set ∩ [[lo, hi]]|
  Index count_in(const Index& lo, const Index& hi) const;
  bool disjoint_from(const ExponentSet& other) const;
  /// Elements in [[lo, hi]], ascending. Throws DomainError beyond `limit` elements.
  std::vector<std::int64_t> elements(std::int64_t lo, std::int64_t hi, std::size_t limit = 1u << 20) const;

  friend bool operator==(const ExponentSet& a, const ExponentSet& b) { return a.intervals_ == b.intervals_; }

 private:
  std::vector<Interval> intervals_;
  std::string provenance_;
};

/// Degree map k -> f(k) used by the block constructions.
struct DegreeMap {
  std::function<Index(const Index&)> eval;
  std::string name;
  Index operator()(const Index& k) const { return eval(k); }
};

/// f(k) = k
DegreeMap linear_map();
/// f(k) = floor(k^t), t > 0
DegreeMap power_map(double t);
/// f(k) = floor(tau * C * log(k) * k) with C = markoff_block_constant(eps, ell)
DegreeMap log_linear_map(double eps, std::size_t ell, double tau);

/// Block starts k_j and lengths l_j; the set is the union of [[k_j, k_j + l_j]].
struct BlockSequence {
  std::vector<Index> k;
  std::vector<Index> ell;
  /// The start k_{J+1} the recursion would produce next, when defined.
  std::optional<Index> next_k;
  ExponentSet set;
};

/// Union of [[k_j, k_j + l_j]] for j < J. k must be strictly increasing.
ExponentSet lambda_from_blocks(std::span<const Index> k, std::span<const Index> ell, std::size_t J);

/// k_1 = 1, l_j = f(k_j) + j, k_{j+1} = (k_j + f(k_j) + j) j + 1 (1-based j).
/// Density at N = k_{j+1} - 1 is at most 1/j.
BlockSequence density_zero_blocks(const DegreeMap& f, std::size_t J);

/// Blocks [[k_j, k_j + floor(k_j^s)]] for the given starts; s > 1.
BlockSequence power_blocks(double s, std::span<const Index> k);

/// power_blocks with k_1 = 1 and k_{j+1} = (k_j + floor(k_j^s)) j + 1.
BlockSequence power_blocks_auto(double s, std::size_t J);

/// -ell / log(1 - eps^2)
Real markoff_block_constant(double eps, std::size_t ell);

/// Blocks of length floor(t C log(k_j) k_j); eps in (0,1), ell >= 1, t > 2,
/// every k_j >= 2.
BlockSequence log_linear_blocks(double eps, std::size_t ell, double t, std::span<const Index> k);

/// k_1 = max(gamma) + 1 (1 when gamma is empty), l_j = f(k_j) + j,
/// k_{j+1} = k_j + f(k_j) + j. The union is [[max(gamma) + 1, k_J + l_J]].
BlockSequence cofinite_blocks(std::span<const Index> gamma, const DegreeMap& f, std::size_t J);

/// Gap set Gamma = union_j [[floor(e^{t^j}), floor(e^{t^j}) + floor(C e^{tt^j})]]
/// for j = 1..J and the exponent set avoiding it:
/// blocks [[k_j, k_j + floor(k_j^s)]], k_j = floor(e^{t^j}) + floor(C e^{tt^j}) + 1,
/// for n_start <= j <= J - 1, where n_start is the least N with
/// floor(e^{t^{j+1}}) >= 2 k_j^s for every j in [N, J - 1].
struct GapConstruction {
  ExponentSet gamma;
  ExponentSet lambda;
  /// Empty when no j <= J - 1 qualifies; lambda is then empty.
  std::optional<std::size_t> n_start;
  std::vector<Index> gap_start;  // floor(e^{t^j}), j = 1..J
  std::vector<Index> k;          // k_j, j = 1..J
  double s = 0.0;
};

/// t >= tt > 1, C > 0, 1 < s < t (default (1 + t) / 2). Throws RangeError
/// with the largest representable j when e^{t^j} leaves the Index range.
GapConstruction double_exponential_gaps(double t, double t_tilde, double C, std::size_t J,
                                        std::optional<double> s = std::nullopt);

struct DensityCheckpoint {
  Index n;
  Index count;
  double ratio;
};

struct DensityReport {
  std::vector<DensityCheckpoint> checkpoints;
  double lower_estimate = 0.0;
  double upper_estimate = 0.0;
};

/// Exact counts |set ∩ [[1, N]]| at positive increasing checkpoints.
DensityReport density_report(const ExponentSet& set, std::span<const Index> checkpoints);

/// count * j <= N at N = k_{j+1} - 1 for every emitted j (1-based), exact.
struct DensityBoundCheck {
  std::vector<DensityCheckpoint> checkpoints;
  bool holds = true;
};
DensityBoundCheck check_density_bound(const BlockSequence& blocks);

/// Margins l_j - f(k_j) for the emitted blocks.
struct DivergenceAudit {
  std::vector<Index> margins;
  /// margin_j >= j (1-based) for every j.
  bool at_least_index = true;
  bool strictly_increasing = true;
};
DivergenceAudit divergence_audit(const BlockSequence& blocks, const DegreeMap& f);

}  // namespace opuc
