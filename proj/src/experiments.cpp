#include "opuc/experiments.hpp"

#include "opuc/errors.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace opuc {

using nlohmann::json;

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "# opuc-" << report.experiment << " v" << kCsvSchemaVersion << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

json to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size() && i < report.columns.size(); ++i) obj[report.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"name", v.name}, {"relation", v.relation}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"pass", v.pass}});
  }
  json out{{"experiment", report.experiment},
           {"schema_version", kCsvSchemaVersion},
           {"columns", report.columns},
           {"rows", rows},
           {"verdicts", verdicts},
           {"warnings", report.warnings},
           {"incomplete", report.incomplete},
           {"passed", report.passed()},
           {"precision_bits", report.precision_bits},
           {"wall_seconds", report.wall_seconds}};
  if (!report.classification.empty()) out["classification"] = report.classification;
  for (const auto& item : report.extra.items()) out[item.key()] = item.value();
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const Real& x) { return format_real(x, 20); }

// |a - b| <= tol * max(|a|, |b|); two exact zeros agree.
bool close_relative(const Real& a, const Real& b, double tol) {
  const Real scale = max(abs(a), abs(b));
  return abs(a - b) <= Real(tol) * scale;
}

// Tracks the cell where lhs / rhs is largest, so an aggregated verdict can
// cite concrete values on both sides.
struct WorstCell {
  std::string where;
  Real lhs;
  Real rhs;
  Real ratio = -1;
  std::size_t violations = 0;
  std::size_t cells = 0;

  void offer(const std::string& at, const Real& l, const Real& r, bool ok) {
    ++cells;
    if (!ok) ++violations;
    const Real q = r > 0 ? Real(l / r) : (l > 0 ? Real(1e300) : Real(0));
    if (q > ratio) {
      ratio = q;
      where = at;
      lhs = l;
      rhs = r;
    }
  }

  Verdict verdict(const std::string& name, const std::string& relation) const {
    Verdict v;
    v.name = name;
    v.relation = relation + " at tightest cell " + where + "; violations " + std::to_string(violations) + " of " +
                 std::to_string(cells);
    v.lhs = cells ? fmt(lhs) : "n/a";
    v.rhs = cells ? fmt(rhs) : "n/a";
    v.pass = violations == 0;
    return v;
  }
};

}  // namespace

ExperimentReport run_bound_table(BetaEngine& engine, std::size_t k_max, std::size_t n_max) {
  if (k_max < 1 || n_max < 1) throw DomainError("bound table needs k_max >= 1 and n_max >= 1");
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "bounds";
  report.columns = {"k", "n", "beta", "composition_bound", "binomial_bound", "precision_bits", "status"};
  WorstCell lower;
  WorstCell upper;
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<BetaResult> row;
    std::string row_error;
    try {
      row = engine.beta_row(k, n_max);
    } catch (const Error& e) {
      row_error = e.what();
    }
    for (std::size_t n = 1; n <= n_max; ++n) {
      std::vector<std::string> cells{std::to_string(k), std::to_string(n)};
      if (!row_error.empty()) {
        report.incomplete = true;
        report.warnings.push_back("k=" + std::to_string(k) + ": " + row_error);
        report.rows.push_back({cells[0], cells[1], "", "", "", std::to_string(engine.precision_bits()), "error"});
        continue;
      }
      try {
        const Real b37 = engine.composition_bound(k, n);
        const Real b38 = engine.binomial_bound(k, n);
        PrecisionScope scope(engine.precision_bits());
        const Real slack = 1 + escalation_tolerance(engine.precision_bits());
        const Real& beta = row[n].value;
        const bool ok_lower = beta <= b37 * slack;
        const bool ok_upper = b37 <= b38 * slack;
        const std::string at = "k=" + std::to_string(k) + ",n=" + std::to_string(n);
        lower.offer(at, beta, b37, ok_lower);
        upper.offer(at, b37, b38, ok_upper);
        report.rows.push_back({cells[0], cells[1], fmt(beta), fmt(b37), fmt(b38),
                               std::to_string(engine.precision_bits()),
                               ok_lower && ok_upper ? "ok" : "violation"});
      } catch (const Error& e) {
        report.incomplete = true;
        report.warnings.push_back("k=" + std::to_string(k) + ",n=" + std::to_string(n) + ": " + e.what());
        report.rows.push_back({cells[0], cells[1], fmt(row[n].value), "", "", std::to_string(engine.precision_bits()),
                               "error"});
      }
    }
  }
  report.verdicts.push_back(lower.verdict("sandwich_lower", "beta <= composition_bound"));
  report.verdicts.push_back(upper.verdict("sandwich_upper", "composition_bound <= binomial_bound"));
  report.precision_bits = engine.precision_bits();
  report.wall_seconds = seconds_since(start);
  return report;
}

ExperimentReport run_witness(BetaEngine& engine, const WitnessConfig& config) {
  if (config.targets.empty()) throw DomainError("witness experiment needs at least one target");
  if (!(config.tol > 0.0 && config.tol < 1.0)) throw DomainError("tol must lie in (0, 1)");
  if (config.blocks < 1 || config.k_first < 1) throw DomainError("need blocks >= 1 and k_first >= 1");
  for (auto m : config.targets) {
    if (m < 0) throw DomainError("targets must be nonnegative");
  }
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "thm33";
  report.columns = {"target",         "j",          "k_j",          "f_k_j",          "ell_j",
                    "block_lo",       "block_hi",   "witness_beta", "block_distance", "cumulative_n",
                    "cumulative_distance", "precision_bits", "f_capped"};
  const Real tol = config.tol;
  const std::int64_t max_target = *std::max_element(config.targets.begin(), config.targets.end());

  try {
    const Real floor = engine.phi_norm(config.n_max);
    if (floor * floor >= tol * tol) {
      report.warnings.push_back("prod (1 - |alpha_i|^2) over " + std::to_string(config.n_max) +
                                " coefficients is " + fmt(floor * floor) +
                                " >= tol^2: the measure looks Szego at this budget");
    }
  } catch (const Error& e) {
    report.warnings.push_back(std::string("Szego diagnostic failed: ") + e.what());
  }

  struct Block {
    std::size_t j;
    std::size_t k;
    std::size_t f;
    std::size_t ell;
    bool capped;
    BetaResult witness;
  };
  std::vector<Block> blocks;
  bool any_capped = false;
  bool failed = false;
  try {
    std::size_t k = config.k_first;
    std::optional<std::size_t> previous;
    for (std::size_t j = 1; j <= config.blocks; ++j) {
      const MinDegree md = engine.find_min_degree(k, tol, config.n_max);
      std::size_t f = md.n.value_or(config.n_max);
      if (previous) f = std::max(f, *previous + 1);
      previous = f;
      const BetaResult witness = engine.beta(k, f);
      const std::size_t ell = f + j + static_cast<std::size_t>(max_target);
      blocks.push_back({j, k, f, ell, md.overflow(), witness});
      any_capped = any_capped || md.overflow();
      k += ell + 2;
    }
  } catch (const Error& e) {
    failed = true;
    report.warnings.push_back(std::string("block construction stopped: ") + e.what());
  }

  std::vector<std::int64_t> exponents;
  std::vector<std::size_t> checkpoints;
  for (const auto& b : blocks) {
    for (std::size_t s = b.k; s <= b.k + b.ell; ++s) exponents.push_back(static_cast<std::int64_t>(s));
    checkpoints.push_back(exponents.size());
  }

  bool last_below = false;
  for (auto m : config.targets) {
    std::vector<SpanDistance> cumulative;
    try {
      cumulative = engine.span_distance_curve(m, exponents, checkpoints);
    } catch (const Error& e) {
      failed = true;
      report.warnings.push_back("target " + std::to_string(m) + ": cumulative distance failed: " + e.what());
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Block& blk = blocks[b];
      const std::string at = "target=" + std::to_string(m) + ",j=" + std::to_string(blk.j);
      std::vector<std::string> row{std::to_string(m), std::to_string(blk.j), std::to_string(blk.k),
                                   std::to_string(blk.f), std::to_string(blk.ell), std::to_string(blk.k),
                                   std::to_string(blk.k + blk.ell), fmt(blk.witness.value)};
      std::optional<SpanDistance> single;
      try {
        std::vector<std::int64_t> window;
        const auto lo = m + static_cast<std::int64_t>(blk.k);
        for (std::size_t i = 0; i <= blk.f; ++i) window.push_back(lo + static_cast<std::int64_t>(i));
        single = engine.span_distance(m, window);
      } catch (const Error& e) {
        failed = true;
        report.warnings.push_back(at + ": single-block distance failed: " + e.what());
      }
      row.push_back(single ? fmt(single->value) : "");
      row.push_back(std::to_string(checkpoints[b]));
      row.push_back(cumulative.empty() ? "" : fmt(cumulative[b].value));
      row.push_back(std::to_string(engine.precision_bits()));
      row.push_back(blk.capped ? "1" : "0");
      report.rows.push_back(std::move(row));

      if (single) {
        report.verdicts.push_back({"witness_identity:" + at, "block_distance == witness_beta (relative 1e-12)",
                                   fmt(single->value), fmt(blk.witness.value),
                                   close_relative(single->value, blk.witness.value, kIdentityTolerance)});
      }
      if (!cumulative.empty()) {
        const Real bound = blk.witness.value * (1 + Real(kIdentityTolerance));
        report.verdicts.push_back({"cumulative_below_witness:" + at, "cumulative_distance <= witness_beta",
                                   fmt(cumulative[b].value), fmt(blk.witness.value), cumulative[b].value <= bound});
      }
      if (!blk.capped) {
        report.verdicts.push_back({"witness_below_tol:" + at, "witness_beta <= tol", fmt(blk.witness.value),
                                   fmt(tol), blk.witness.value <= tol});
      }
    }
    if (!blocks.empty() && !cumulative.empty()) {
      last_below = blocks.back().witness.value <= tol && cumulative.back().value <= tol;
    }
  }

  report.incomplete = failed || blocks.size() < config.blocks;
  if (report.incomplete) {
    report.classification = "inconclusive-budget";
  } else if (any_capped) {
    report.classification = "floor-reached";
  } else if (last_below) {
    report.classification = "decreasing-below-tol";
  } else {
    report.classification = "inconclusive-budget";
  }
  report.precision_bits = engine.precision_bits();
  report.wall_seconds = seconds_since(start);
  return report;
}

ExperimentReport run_density_curve(BetaEngine& engine, const ExponentSet& set, std::int64_t target,
                                   const std::vector<std::int64_t>& schedule) {
  if (schedule.empty()) throw DomainError("density curve needs a nonempty N schedule");
  if (target < 0) throw DomainError("target exponent must be nonnegative");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 0 || (i > 0 && schedule[i] <= schedule[i - 1])) {
      throw DomainError("N schedule must be nonnegative and increasing");
    }
  }
  const auto start = Clock::now();
  ExperimentReport report;
  report.experiment = "density-curve";
  report.columns = {"N", "distance", "precision_bits"};

  const std::vector<std::int64_t> exponents = set.elements(0, schedule.back());
  std::vector<std::size_t> checkpoints;
  for (auto n : schedule) {
    checkpoints.push_back(static_cast<std::size_t>(
        std::upper_bound(exponents.begin(), exponents.end(), n) - exponents.begin()));
  }
  std::vector<SpanDistance> curve;
  try {
    curve = engine.span_distance_curve(target, exponents, checkpoints);
  } catch (const Error& e) {
    report.incomplete = true;
    report.warnings.push_back(e.what());
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    report.rows.push_back({std::to_string(schedule[i]), fmt(curve[i].value), std::to_string(curve[i].precision_bits)});
  }
  if (!curve.empty()) {
    Verdict mono{"nonincreasing", "distance(N_{i+1}) <= distance(N_i)", "", "", true};
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].value > curve[i - 1].value && mono.pass) {
        mono.pass = false;
        mono.relation += " at N=" + std::to_string(schedule[i]);
        mono.lhs = fmt(curve[i].value);
        mono.rhs = fmt(curve[i - 1].value);
      }
    }
    if (mono.pass) {
      mono.lhs = fmt(curve.back().value);
      mono.rhs = fmt(curve.front().value);
      mono.relation += " (last vs first shown)";
    }
    report.verdicts.push_back(mono);
    if (set.contains(Index(target))) {
      Verdict zero{"zero_after_target", "distance == 0 for N >= target", "", "0", true};
      Real worst = 0;
      for (std::size_t i = 0; i < curve.size(); ++i) {
        if (schedule[i] >= target) worst = max(worst, curve[i].value);
      }
      zero.lhs = fmt(worst);
      zero.pass = worst == 0;
      report.verdicts.push_back(zero);
    }
  }
  report.precision_bits = engine.precision_bits();
  report.wall_seconds = seconds_since(start);
  return report;
}

}  // namespace opuc
