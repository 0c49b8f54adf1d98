// Command-line driver: measure ingestion, experiments, CSV/JSON output.
#include "opuc/beta.hpp"
#include "opuc/errors.hpp"
#include "opuc/experiments.hpp"
#include "opuc/exponent_set.hpp"
#include "opuc/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <limits>

namespace {

using namespace opuc;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string measure;
  unsigned precision = kDefaultPrecisionBits;
  unsigned max_precision = kMaxPrecisionBits;
  std::string out;
  std::string format = "csv";
};

struct ConstructionArgs {
  std::string construction = "power_auto";
  std::size_t J = 4;
  std::string f = "linear";
  double s = 1.5;
  std::vector<long long> k;
  std::vector<long long> lengths;
  std::vector<long long> gamma;
  double eps = 1.0 / 3.0;
  std::size_t ell = 1;
  double t = 3.0;
  double t_tilde = 2.0;
  double C = 1.0;
  std::optional<double> inner_s;
};

// Thrown for inconsistent options; maps to the configuration exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* app, Common& c, bool needs_measure) {
  auto* m = app->add_option("--measure", c.measure, "Measure-spec document (JSON)");
  if (needs_measure) m->required();
  app->add_option("--precision", c.precision, "Starting precision in mantissa bits")
      ->check(CLI::Range(kMinPrecisionBits, kMaxPrecisionBits));
  app->add_option("--max-precision", c.max_precision, "Escalation ceiling in bits")
      ->check(CLI::Range(kMinPrecisionBits, kMaxPrecisionBits));
  app->add_option("--out", c.out, "Output path (default stdout)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_construction(CLI::App* app, ConstructionArgs& a) {
  app->add_option("--construction", a.construction,
                  "blocks | density_zero | power | power_auto | log_linear | cofinite | double_exponential")
      ->check(CLI::IsMember(
          {"blocks", "density_zero", "power", "power_auto", "log_linear", "cofinite", "double_exponential"}));
  app->add_option("--J", a.J, "Number of blocks");
  app->add_option("--f", a.f, "Degree map: linear | power:<t> | log_linear:<eps>:<ell>:<tau>");
  app->add_option("--s", a.s, "Block-length exponent for power constructions");
  app->add_option("--k", a.k, "Block starts")->delimiter(',');
  app->add_option("--lengths", a.lengths, "Block lengths (blocks construction)")->delimiter(',');
  app->add_option("--gamma", a.gamma, "Finite gap set (cofinite construction)")->delimiter(',');
  app->add_option("--eps", a.eps, "Window threshold eps (log_linear)");
  app->add_option("--ell", a.ell, "Window length ell (log_linear)");
  app->add_option("--t", a.t, "Growth parameter t (log_linear, double_exponential)");
  app->add_option("--t-tilde", a.t_tilde, "Gap width parameter (double_exponential)");
  app->add_option("--C", a.C, "Gap width factor (double_exponential)");
  app->add_option("--inner-s", a.inner_s, "Block exponent for double_exponential (default (1+t)/2)");
}

DegreeMap parse_degree_map(const std::string& text) {
  if (text == "linear") return linear_map();
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  try {
    if (parts.size() == 2 && parts[0] == "power") return power_map(std::stod(parts[1]));
    if (parts.size() == 4 && parts[0] == "log_linear") {
      return log_linear_map(std::stod(parts[1]), std::stoul(parts[2]), std::stod(parts[3]));
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("unrecognized degree map '" + text + "'");
}

std::vector<Index> to_indices(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

std::string idx(const Index& x) { return format_index(x); }

// Builds the exponent set and the construction-specific verdicts.
ExponentSet build_construction(const ConstructionArgs& a, ExperimentReport& report) {
  const auto k = to_indices(a.k);
  auto density_verdict = [&](const BlockSequence& blocks) {
    const DensityBoundCheck check = check_density_bound(blocks);
    Verdict v{"density_bound", "count(N) * j <= N at N = k_{j+1} - 1", "", "", check.holds};
    json cps = json::array();
    for (std::size_t j = 0; j < check.checkpoints.size(); ++j) {
      const auto& cp = check.checkpoints[j];
      cps.push_back({{"j", j + 1}, {"N", index_to_json(cp.n)}, {"count", index_to_json(cp.count)}, {"ratio", cp.ratio}});
      if (j + 1 == check.checkpoints.size() || (!check.holds && cp.count * Index(j + 1) > cp.n)) {
        v.lhs = idx(cp.count * Index(j + 1));
        v.rhs = idx(cp.n);
        if (!check.holds) break;
      }
    }
    report.extra["density_checkpoints"] = cps;
    report.verdicts.push_back(v);
  };
  auto audit_verdict = [&](const BlockSequence& blocks, const DegreeMap& f) {
    const DivergenceAudit audit = divergence_audit(blocks, f);
    json margins = json::array();
    for (const auto& m : audit.margins) margins.push_back(index_to_json(m));
    report.extra["divergence_margins"] = margins;
    report.verdicts.push_back({"divergence_audit", "ell_j - f(k_j) >= j and strictly increasing",
                               audit.margins.empty() ? "n/a" : idx(audit.margins.back()),
                               std::to_string(audit.margins.size()), audit.at_least_index && audit.strictly_increasing});
  };
  auto record_blocks = [&](const BlockSequence& blocks) {
    json starts = json::array();
    json lengths = json::array();
    for (const auto& x : blocks.k) starts.push_back(index_to_json(x));
    for (const auto& x : blocks.ell) lengths.push_back(index_to_json(x));
    report.extra["k"] = starts;
    report.extra["ell"] = lengths;
  };

  if (a.construction == "blocks") {
    const auto l = to_indices(a.lengths);
    return lambda_from_blocks(k, l, std::min(k.size(), l.size()));
  }
  if (a.construction == "density_zero") {
    const DegreeMap f = parse_degree_map(a.f);
    const BlockSequence b = density_zero_blocks(f, a.J);
    record_blocks(b);
    density_verdict(b);
    audit_verdict(b, f);
    return b.set;
  }
  if (a.construction == "power") {
    const BlockSequence b = power_blocks(a.s, k);
    record_blocks(b);
    return b.set;
  }
  if (a.construction == "power_auto") {
    const BlockSequence b = power_blocks_auto(a.s, a.J);
    record_blocks(b);
    density_verdict(b);
    return b.set;
  }
  if (a.construction == "log_linear") {
    const BlockSequence b = log_linear_blocks(a.eps, a.ell, a.t, k);
    record_blocks(b);
    report.extra["block_constant"] = format_real(markoff_block_constant(a.eps, a.ell), 20);
    return b.set;
  }
  if (a.construction == "cofinite") {
    const DegreeMap f = parse_degree_map(a.f);
    const auto gamma = to_indices(a.gamma);
    const BlockSequence b = cofinite_blocks(gamma, f, a.J);
    record_blocks(b);
    audit_verdict(b, f);
    if (a.J > 0) {
      Index top = 0;
      for (const auto& g : gamma) top = std::max(top, g);
      const ExponentSet expected({{top + 1, b.k.back() + b.ell.back()}});
      report.verdicts.push_back({"tiles_interval", "union of blocks == [[max(gamma) + 1, k_J + ell_J]]",
                                 std::to_string(b.set.intervals().size()) + " interval(s)",
                                 "[" + idx(top + 1) + ", " + idx(b.k.back() + b.ell.back()) + "]",
                                 b.set == expected});
    }
    return b.set;
  }
  // double_exponential
  const GapConstruction g = double_exponential_gaps(a.t, a.t_tilde, a.C, a.J, a.inner_s);
  report.extra["gamma"] = to_json(g.gamma);
  report.extra["n_start"] = g.n_start ? json(*g.n_start) : json(nullptr);
  report.extra["s"] = g.s;
  if (!g.n_start) report.warnings.push_back("J too small: no block index satisfies the spacing inequality");
  report.verdicts.push_back({"disjoint_from_gaps", "lambda ∩ gamma == ∅",
                             std::to_string(g.lambda.intervals().size()) + " block(s)",
                             std::to_string(g.gamma.intervals().size()) + " gap(s)", g.lambda.disjoint_from(g.gamma)});
  return g.lambda;
}

std::unique_ptr<BetaEngine> make_engine(const Common& c) {
  if (c.precision > c.max_precision) throw ConfigError("--precision exceeds --max-precision");
  return std::make_unique<BetaEngine>(load_measure_spec(c.measure), BetaOptions{c.precision, c.max_precision});
}

int emit(const Common& c, ExperimentReport& report) {
  const std::string text = c.format == "json" ? to_json(report).dump(2) + "\n" : to_csv(report);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.out, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + c.out);
    out << text;
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& v : report.verdicts) {
    if (!v.pass) std::cerr << "FAIL " << v.name << ": " << v.relation << " (" << v.lhs << " vs " << v.rhs << ")\n";
  }
  return report.passed() ? kExitPass : kExitVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials on the unit circle: moments, distances, bounds and exponent sets"};
  app.require_subcommand(1);

  Common common;
  ConstructionArgs construction;
  std::size_t order = 10;
  std::size_t count = 10;
  std::vector<std::size_t> beta_k{1};
  std::size_t n_max = 10;
  std::string route = "projection";
  std::size_t k_max = 6;
  std::size_t bound_n_max = 60;
  std::int64_t target = 0;
  std::vector<std::int64_t> schedule;
  WitnessConfig witness;

  auto* moments = app.add_subcommand("moments", "Trigonometric moments m_0..m_N");
  add_common(moments, common, true);
  moments->add_option("--order", order, "Highest moment index N");

  auto* alphas = app.add_subcommand("alphas", "Verblunsky coefficients alpha_0..alpha_{N-1}");
  add_common(alphas, common, true);
  alphas->add_option("--count", count, "Number of coefficients");

  auto* beta = app.add_subcommand("beta", "Distance from z^{-k} to polynomials of degree <= n");
  add_common(beta, common, true);
  beta->add_option("--k", beta_k, "Target exponents k")->delimiter(',');
  beta->add_option("--n-max", n_max, "Largest degree cap");
  beta->add_option("--route", route, "projection or gram")->check(CLI::IsMember({"projection", "gram"}));

  auto* bounds = app.add_subcommand("bounds", "beta against the composition and binomial upper bounds");
  add_common(bounds, common, true);
  bounds->add_option("--k-max", k_max, "Largest k");
  bounds->add_option("--n-max", bound_n_max, "Largest n");

  auto* lambda = app.add_subcommand("lambda", "Build an exponent set and audit it");
  add_common(lambda, common, false);
  add_construction(lambda, construction);

  auto* curve = app.add_subcommand("density-curve", "Distance from z^m to the span of a growing exponent section");
  add_common(curve, common, true);
  add_construction(curve, construction);
  curve->add_option("--target", target, "Target exponent m");
  curve->add_option("--schedule", schedule, "Increasing section ends N")->delimiter(',')->required();

  auto* thm33 = app.add_subcommand("thm33", "Block-witness mechanics for exponent sets built from an empirical f");
  add_common(thm33, common, true);
  thm33->add_option("--targets", witness.targets, "Target exponents m")->delimiter(',');
  thm33->add_option("--tol", witness.tol, "Distance threshold defining f");
  thm33->add_option("--blocks", witness.blocks, "Number of blocks");
  thm33->add_option("--n-max", witness.n_max, "Degree budget for f");
  thm33->add_option("--k-first", witness.k_first, "First block start");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    ExperimentReport report;
    if (*moments) {
      auto engine = make_engine(common);
      const MomentSequence m = engine->moments(order);
      report.experiment = "moments";
      report.columns = {"k", "re", "im"};
      for (std::size_t k = 0; k <= m.order(); ++k) {
        report.rows.push_back({std::to_string(k), format_real(m[k].re, 30), format_real(m[k].im, 30)});
      }
      report.precision_bits = engine->precision_bits();
    } else if (*alphas) {
      auto engine = make_engine(common);
      const VerblunskySequence a = engine->alphas(count);
      report.experiment = "alphas";
      report.columns = {"j", "re", "im", "modulus"};
      for (std::size_t j = 0; j < a.size(); ++j) {
        report.rows.push_back(
            {std::to_string(j), format_real(a[j].re, 30), format_real(a[j].im, 30), format_real(abs(a[j]), 30)});
      }
      if (a.size() < count) report.warnings.push_back("atomic measure: recurrence ends after " + std::to_string(a.size()));
      report.precision_bits = engine->precision_bits();
    } else if (*beta) {
      auto engine = make_engine(common);
      report.experiment = "beta";
      report.columns = {"k", "n", "value", "precision_bits", "residual"};
      for (std::size_t k : beta_k) {
        std::vector<BetaResult> rows;
        if (route == "gram") {
          for (std::size_t n = 0; n <= n_max; ++n) rows.push_back(engine->beta_gram(k, n));
        } else {
          rows = engine->beta_row(k, n_max);
        }
        for (const auto& r : rows) {
          report.rows.push_back({std::to_string(r.k), std::to_string(r.n), format_real(r.value, 20),
                                 std::to_string(r.precision_bits), format_real(r.residual, 6)});
        }
      }
      report.precision_bits = engine->precision_bits();
    } else if (*bounds) {
      auto engine = make_engine(common);
      report = run_bound_table(*engine, k_max, bound_n_max);
    } else if (*lambda) {
      report.experiment = "lambda";
      report.columns = {"lo", "hi"};
      const ExponentSet set = build_construction(construction, report);
      for (const auto& iv : set.intervals()) report.rows.push_back({idx(iv.lo), idx(iv.hi)});
      report.extra["set"] = to_json(set);
    } else if (*curve) {
      auto engine = make_engine(common);
      ExperimentReport build;
      const ExponentSet set = build_construction(construction, build);
      report = run_density_curve(*engine, set, target, schedule);
      report.extra["set"] = to_json(set);
    } else if (*thm33) {
      auto engine = make_engine(common);
      report = run_witness(*engine, witness);
    }
    return emit(common, report);
  } catch (const SpecError& e) {
    std::cerr << "error[" << to_string(e.code()) << "] " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error[config] " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error[domain] " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "] " << e.what() << '\n';
    return kExitVerdictFailure;
  }
}
