#pragma once

#include "opuc/beta.hpp"
#include "opuc/exponent_set.hpp"
#include "opuc/measure.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opuc {

/// One checked inequality or identity with both sides as printed values.
struct Verdict {
  std::string name;
  std::string relation;  // e.g. "beta <= composition_bound"
  std::string lhs;
  std::string rhs;
  bool pass = true;
};

/// Rows are preformatted cells in `columns` order, so the CSV and JSON
/// renderings are byte-stable for a fixed configuration.
struct ExperimentReport {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<Verdict> verdicts;
  std::vector<std::string> warnings;
  /// decreasing-below-tol, floor-reached or inconclusive-budget; empty when
  /// the experiment does not classify.
  std::string classification;
  bool incomplete = false;
  unsigned precision_bits = 0;
  double wall_seconds = 0.0;
  /// Structured payload (exponent sets, checkpoints) for the JSON rendering.
  nlohmann::json extra = nlohmann::json::object();

  bool passed() const;
};

/// Schema version written into the CSV header comment.
inline constexpr int kCsvSchemaVersion = 1;

/// "# opuc-<experiment> v1" header, column line, then rows.
std::string to_csv(const ExperimentReport& report);
/// Rows, verdicts, warnings and telemetry (wall clock appears only here).
nlohmann::json to_json(const ExperimentReport& report);

/// Relative tolerance for identities checked at 256 bits.
inline constexpr double kIdentityTolerance = 1e-12;

/// beta, composition_bound and binomial_bound over 1 <= k <= k_max,
/// 1 <= n <= n_max with the sandwich ordering checked per cell. A cell that
/// fails to compute is marked and the report is flagged incomplete.
ExperimentReport run_bound_table(BetaEngine& engine, std::size_t k_max, std::size_t n_max);

struct WitnessConfig {
  /// Target exponents m; each block must contain [[m + k_j, m + k_j + f(k_j)]].
  std::vector<std::int64_t> targets{0};
  double tol = 0.1;
  std::size_t blocks = 4;
  /// Degree budget for the empirical f.
  std::size_t n_max = 200;
  std::size_t k_first = 1;
};

/// Builds blocks [[k_j, k_j + l_j]] with f(k_j) the smallest degree reaching
/// beta <= tol (made strictly increasing across blocks),
/// l_j = f(k_j) + j + max target and k_{j+1} = k_j + l_j + 2. Per block and
/// target it reports the witness beta(k_j, f(k_j)), the distance from z^m to
/// the single shifted block, and the distance to the union of all blocks so
/// far.
ExperimentReport run_witness(BetaEngine& engine, const WitnessConfig& config);

/// dist(z^target, span{z^s : s in set, s <= N}) at each N of the schedule.
ExperimentReport run_density_curve(BetaEngine& engine, const ExponentSet& set, std::int64_t target,
                                   const std::vector<std::int64_t>& schedule);

}  // namespace opuc
