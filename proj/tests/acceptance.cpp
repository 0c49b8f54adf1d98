// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include "opuc/beta.hpp"
#include "opuc/errors.hpp"
#include "opuc/experiments.hpp"
#include "opuc/exponent_set.hpp"
#include "opuc/markoff.hpp"
#include "opuc/measure.hpp"
#include "opuc/polynomial.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace opuc;

namespace {

// Pinned tolerances.
constexpr double kBaseCaseRel = 1e-12;
constexpr double kZhedanovRel = 1e-15;
constexpr double kSzegoAbs = 1e-10;
constexpr double kOracleAbs = 1e-20;
constexpr double kWitnessRel = 1e-12;
constexpr double kWitnessTol = 0.1;
constexpr double kFloorSlack = 1e-12;
constexpr unsigned kBits = 256;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(const Real& x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << to_double(x);
  return os.str();
}

Real rel_err(const Real& a, const Real& b) {
  Real scale = abs(b);
  if (scale == 0) scale = 1;
  return Real(abs(a - b) / scale);
}

MeasureSpec gen(GeneratorSpec g) { return MeasureSpec::from_generator(std::move(g)); }

/// |alpha_n|^2 of each fixture straight from its defining formula.
struct Fixture {
  std::string name;
  GeneratorSpec spec;
  std::function<Real(std::size_t)> alpha_sq;
};

std::vector<Fixture> fixtures() {
  return {
      {"poisson(0.5)", GeneratorSpec::poisson(0.5), [](std::size_t n) -> Real { return n == 0 ? Real(0.25) : Real(0); }},
      {"zhedanov(0.5,1)", GeneratorSpec::zhedanov(0.5, 1.0),
       [](std::size_t n) -> Real {
         const Real p = 0.5;
         return (1 - p) * (1 - p) / (1 + p * p - 2 * p * cos(Real(static_cast<long>(n + 1))));
       }},
      {"constant(0.6)", GeneratorSpec::constant(0.6), [](std::size_t) -> Real { return Real(0.6) * Real(0.6); }},
      {"ell2_szego(0.5,0.5)", GeneratorSpec::ell2_szego(0.5, 0.5),
       [](std::size_t n) -> Real {
         const Real a = Real(0.5) * pow(Real(0.5), static_cast<long>(n));
         return a * a;
       }},
  };
}

Outcome base_case_identity() {
  Real worst = 0;
  for (const auto& fx : fixtures()) {
    BetaEngine engine(gen(fx.spec));
    const auto row = engine.beta_row(1, 60);
    Real product = 1;
    for (std::size_t n = 0; n <= 60; ++n) {
      product *= 1 - fx.alpha_sq(n);
      worst = max(worst, rel_err(row[n].value, sqrt(product)));
    }
  }
  return {worst <= kBaseCaseRel, "max relative error " + sci(worst) + " over 4 measures, n <= 60"};
}

Outcome zhedanov_formula() {
  Real worst = 0;
  bool strict = true;
  for (double pd : {0.3, 0.5, 0.7}) {
    const Real p = pd;
    const auto a = alphas_from_moments(zhedanov_moments(pd, 1.0, 101), 101);
    const Real lower = (1 - p) / (1 + p);
    for (std::size_t n = 0; n <= 100; ++n) {
      const Real expected = (1 - p) * (1 - p) / (1 + p * p - 2 * p * cos(Real(static_cast<long>(n + 1))));
      const Real got = norm(a[n]);
      worst = max(worst, rel_err(got, expected));
      const Real modulus = sqrt(got);
      strict = strict && modulus > lower && modulus < 1;
    }
  }
  return {worst <= kZhedanovRel && strict,
          "max relative error in |alpha_n|^2 " + sci(worst) + ", strict bounds " + (strict ? "hold" : "violated")};
}

Outcome szego_cross_check() {
  const double r = 0.5;
  const auto s = szego_constant(MeasureSpec::weight_function(poisson_density_samples(r, 4096)), 40);
  const Real closed = exp(log(1 - Real(r) * Real(r)));
  if (!s.quadrature) return {false, "no quadrature value"};
  const Real e_prod = abs(s.partial_products.back() - closed);
  const Real e_quad = abs(*s.quadrature - closed);
  const Real e_pair = abs(*s.quadrature - s.partial_products.back());
  const Real worst = max(max(e_prod, e_quad), e_pair);
  return {worst <= kSzegoAbs,
          "product error " + sci(e_prod) + ", quadrature error " + sci(e_quad) + ", mutual " + sci(e_pair)};
}

Outcome bound_sandwich() {
  std::size_t violations = 0;
  std::size_t cells = 0;
  std::size_t failed = 0;
  for (const auto& fx : fixtures()) {
    BetaEngine engine(gen(fx.spec));
    const auto report = run_bound_table(engine, 6, 60);
    const std::size_t status = report.columns.size() - 1;
    for (const auto& row : report.rows) {
      ++cells;
      if (row[status] == "violation") ++violations;
      if (row[status] != "ok" && row[status] != "violation") ++failed;
    }
  }
  return {violations == 0 && failed == 0 && cells == 4 * 6 * 60,
          std::to_string(cells) + " cells, " + std::to_string(violations) + " violations, " + std::to_string(failed) +
              " not computed"};
}

Outcome combinatorial_checks() {
  std::size_t identity_failures = 0;
  for (unsigned k = 2; k <= 31; ++k) {
    for (unsigned i = 1; i <= k - 1; ++i) {
      oracle::Int lhs = 0;
      for (unsigned l = i; l <= k - 1; ++l) lhs += oracle::binomial(l - 1, i - 1);
      if (lhs != oracle::binomial(k - 1, i)) ++identity_failures;
    }
  }
  std::size_t coefficient_failures = 0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> a;
    for (int j = 0; j < 60; ++j) {
      // Push some coefficients close to the circle, where the bound is tight.
      const double r = trial % 2 ? std::min(radius(rng), 0.999999) : 1 - 1e-6 * (1e-3 + radius(rng));
      a.push_back(Complex::polar(Real(r), Real(phase(rng))));
    }
    const auto family = monic_family(VerblunskySequence(std::move(a)), 60);
    for (std::size_t n = 0; n <= 60; ++n) {
      for (std::size_t k = 0; k <= n; ++k) {
        const Real bound(oracle::binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)).str());
        if (abs(family[n][k]) > bound * (1 + pow(Real(2), -200))) ++coefficient_failures;
      }
    }
  }
  return {identity_failures == 0 && coefficient_failures == 0,
          "hockey-stick identity failures " + std::to_string(identity_failures) + " (k-1 <= 30), coefficient bound " +
              "failures " + std::to_string(coefficient_failures) + " (50 sequences, n <= 60)"};
}

Outcome oracle_equivalence() {
  Real worst = 0;
  std::size_t checks = 0;
  for (std::size_t count : {8u, 16u, 32u}) {
    const auto atoms = oracle::zhedanov_atoms(0.5, 1.0, count);
    BetaEngine engine(MeasureSpec::atomic(atoms));
    for (std::size_t k = 1; k <= 5; ++k) {
      for (std::size_t n = 0; n <= 10; ++n) {
        std::vector<std::int64_t> exps;
        for (std::size_t s = 0; s <= n; ++s) exps.push_back(static_cast<std::int64_t>(s));
        const Real expected = oracle::atomic_span_distance(atoms, -static_cast<std::int64_t>(k), exps);
        worst = max(worst, abs(engine.beta(k, n).value - expected));
        // Gap distance: z^0 against a shifted window [[k, k+n]].
        std::vector<std::int64_t> window;
        for (std::size_t s = 0; s <= n; ++s) window.push_back(static_cast<std::int64_t>(k + s));
        worst = max(worst, abs(engine.span_distance(0, window).value - oracle::atomic_span_distance(atoms, 0, window)));
        checks += 2;
      }
    }
  }
  return {worst <= kOracleAbs, "max absolute difference " + sci(worst) + " over " + std::to_string(checks) +
                                   " distances (8, 16, 32 atoms)"};
}

Outcome witness_mechanics() {
  BetaEngine engine(gen(GeneratorSpec::zhedanov(0.6, 1.0)));
  WitnessConfig config;
  config.tol = kWitnessTol;
  config.blocks = 4;
  const auto report = run_witness(engine, config);
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(report.columns.begin(), report.columns.end(), name) -
                                    report.columns.begin());
  };
  Real worst = 0;
  Real largest_witness = 0;
  bool capped = false;
  for (const auto& row : report.rows) {
    const Real witness(row[col("witness_beta")]);
    const Real single(row[col("block_distance")]);
    worst = max(worst, rel_err(single, witness));
    largest_witness = max(largest_witness, witness);
    capped = capped || row[col("f_capped")] == "1";
  }
  // Independent recomputation of each witness through the Gram route.
  for (const auto& row : report.rows) {
    const std::size_t k = std::stoul(row[col("k_j")]);
    const std::size_t f = std::stoul(row[col("f_k_j")]);
    worst = max(worst, rel_err(engine.beta_gram(k, f).value, Real(row[col("witness_beta")])));
  }
  const bool pass = report.rows.size() == 4 && !capped && !report.incomplete && worst <= kWitnessRel &&
                    largest_witness <= kWitnessTol;
  return {pass, std::to_string(report.rows.size()) + " blocks, max relative mismatch " + sci(worst) +
                    ", largest witness " + sci(largest_witness)};
}

Outcome construction_audits() {
  bool ok = true;
  std::string detail;
  auto audit = [&](const std::string& name, const BlockSequence& b) {
    const auto check = check_density_bound(b);
    // Recount with plain integer comparisons: count * j <= N.
    bool exact = check.checkpoints.size() == 6;
    for (std::size_t j = 1; j <= check.checkpoints.size(); ++j) {
      const auto& c = check.checkpoints[j - 1];
      const Index n = (j < b.k.size() ? b.k[j] : *b.next_k) - 1;
      exact = exact && c.n == n && c.count == b.set.count_up_to(n) && c.count * Index(static_cast<long long>(j)) <= n;
    }
    ok = ok && check.holds && exact;
    detail += name + (check.holds && exact ? " ok; " : " FAILED; ");
  };
  audit("density_zero(f=k)", density_zero_blocks(linear_map(), 6));
  audit("density_zero(f=k^2)", density_zero_blocks(power_map(2.0), 6));
  audit("power_auto(s=1.5)", power_blocks_auto(1.5, 6));
  audit("power_auto(s=2)", power_blocks_auto(2.0, 6));

  const auto g = double_exponential_gaps(2.0, 2.0, 1.0, 4);
  const bool first = !g.gamma.empty() && g.gamma.intervals().front() == Interval{Index(7), Index(14)};
  const bool disjoint = g.gamma.disjoint_from(g.lambda) && !g.lambda.empty();
  ok = ok && first && disjoint;
  detail += std::string("gap j=1 ") + (first ? "[7, 14]" : "wrong") + ", Gamma/Lambda " +
            (disjoint ? "disjoint" : "NOT disjoint");
  return {ok, detail};
}

Outcome negative_control() {
  // Infinite product of (1 - c^2 rho^{2i}) truncated once the factors stop moving at 256 bits.
  Real floor_sq = 1;
  for (std::size_t i = 0; i < 400; ++i) {
    const Real a = Real(0.5) * pow(Real(0.5), static_cast<long>(i));
    floor_sq *= 1 - a * a;
  }
  const Real floor = sqrt(floor_sq);
  BetaEngine engine(gen(GeneratorSpec::ell2_szego(0.5, 0.5)));
  const auto row = engine.beta_row(1, 200);
  Real lowest = 1;
  for (const auto& r : row) lowest = min(lowest, r.value);
  return {row.size() == 201 && lowest >= floor - kFloorSlack,
          "min beta(1, n) over n <= 200 is " + sci(lowest) + ", floor " + sci(floor)};
}

}  // namespace

int main() {
  PrecisionScope scope(kBits);
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "beta(1,n) equals the product of (1-|alpha_i|^2)^(1/2)", base_case_identity},
      {2, "Zhedanov |alpha_n|^2 closed form and strict bounds", zhedanov_formula},
      {3, "Szego constant of the Poisson kernel r=0.5", szego_cross_check},
      {4, "beta <= composition bound <= binomial bound", bound_sandwich},
      {5, "hockey-stick identity and monic coefficient bound", combinatorial_checks},
      {6, "atomic least-squares oracle agreement", oracle_equivalence},
      {7, "witness blocks on zhedanov(0.6,1)", witness_mechanics},
      {8, "density and disjointness of the constructions", construction_audits},
      {9, "Szego negative control on ell2_szego(0.5,0.5)", negative_control},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("%s criterion %d: %s | %s | %.2fs\n", out.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
