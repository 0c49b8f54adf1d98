#include "opuc/errors.hpp"
#include "opuc/markoff.hpp"
#include "opuc/polynomial.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace opuc;

using Membership = Precise;

TEST_F(Membership, ConstantSequencePasses) {
  const std::vector<Complex> a(30, Complex(0.5, 0.0));
  for (std::size_t ell : {0u, 3u, 10u}) {
    const auto v = markoff_membership_prefix(a, {0.5, ell});
    EXPECT_TRUE(v.member);
    EXPECT_FALSE(v.failing_window);
    EXPECT_EQ(v.windows_checked, 30 - ell);
  }
}

TEST_F(Membership, ZhedanovPassesWithLowerBound) {
  const auto g = build_measure(GeneratorSpec::zhedanov(0.5, 1.0), 200);
  const auto v = markoff_membership_prefix(g.alphas.values(), {1.0 / 3.0, 0});
  EXPECT_TRUE(v.member);
  EXPECT_EQ(v.windows_checked, 200u);
}

TEST_F(Membership, FactorialFailsInsideAGap) {
  const auto g = build_measure(GeneratorSpec::factorial(), 200);
  const auto v = markoff_membership_prefix(g.alphas.values(), {0.1, 10});
  EXPECT_FALSE(v.member);
  ASSERT_TRUE(v.failing_window);
  // Nonzero coefficients sit at 2, 6, 24, 120; the first free window starts at 7.
  EXPECT_EQ(*v.failing_window, 7u);
}

TEST_F(Membership, ShortPrefixIsRejected) {
  const std::vector<Complex> a(3, Complex(0.5, 0.0));
  EXPECT_THROW(markoff_membership_prefix(a, {0.5, 3}), DomainError);
  EXPECT_THROW(markoff_membership_prefix(a, {0.0, 0}), DomainError);
  EXPECT_THROW(markoff_membership_prefix(a, {1.0, 0}), DomainError);
}

TEST(MarkoffNormBound, Examples) {
  EXPECT_NEAR(markoff_norm_bound({1e-9, 0}, 50), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(markoff_norm_bound({1.0 / 3.0, 0}, 1), 9.0 / 8.0);
  EXPECT_NEAR(markoff_norm_bound({1.0 / 3.0, 0}, 21), std::pow(8.0 / 9.0, 19), 1e-15);
  EXPECT_THROW(markoff_norm_bound({0.5, 0}, 0), DomainError);
}

TEST_F(Membership, NormBoundHoldsForConstantSequence) {
  const VerblunskySequence a(std::vector<Complex>(21, Complex(Real(1) / 3, Real(0))));
  EXPECT_LE(to_double(monic_norm_sq(a, 21)), markoff_norm_bound({1.0 / 3.0, 0}, 21));
}

TEST_F(Membership, NormBoundHoldsOnPassingGenerators) {
  PrecisionScope wide(512);
  struct Case {
    GeneratorSpec g;
    MarkoffParams params;
  };
  const std::vector<Case> cases{{GeneratorSpec::zhedanov(0.5, 1.0), {1.0 / 3.0, 0}},
                                {GeneratorSpec::zhedanov(0.7, 1.0), {0.3 / 1.7, 0}},
                                {GeneratorSpec::constant(0.2, 0.1), {0.2, 2}},
                                {GeneratorSpec::random_rotinv({0.0, 0.0, 1.0, 1.0}, 4), {0.5, 0}}};
  for (const auto& c : cases) {
    const auto g = build_measure(c.g, 150);
    const auto v = markoff_membership_prefix(g.alphas.values(), c.params);
    ASSERT_TRUE(v.member) << to_string(c.g.name);
    for (std::size_t n = 1; n <= 150; ++n) {
      const double bound = markoff_norm_bound(c.params, n);
      if (bound <= 1.0) EXPECT_LE(to_double(monic_norm_sq(g.alphas, n)), bound) << to_string(c.g.name) << " " << n;
    }
    // Partial sums of |alpha|^2 grow at least linearly in the window count.
    Real sum = 0;
    for (std::size_t j = 0; j < 150; ++j) sum += norm(g.alphas[j]);
    const double eps = c.params.eps;
    EXPECT_GE(to_double(sum), eps * eps * static_cast<double>(150 / (c.params.ell + 1)) * (1 - 1e-12));
  }
}

using ZhedanovModulus = Precise;

TEST_F(ZhedanovModulus, ExtremesAndDirectValue) {
  const double p = 0.5;
  // theta0 = pi puts q^{n+1} at -1 for even n; theta0 = 2pi at +1.
  EXPECT_NEAR(to_double(zhedanov_alpha_modulus(p, std::numbers::pi, 0)), (1 - p) / (1 + p), 1e-15);
  EXPECT_NEAR(to_double(zhedanov_alpha_modulus(p, 2 * std::numbers::pi, 0)), 1.0, 1e-15);
  const Real a0 = zhedanov_alpha_modulus(p, 1.0, 0);
  EXPECT_TRUE(near_relative(a0 * a0, Real(0.25) / (Real(1.25) - cos(Real(1))), 1e-60));
  const auto computed = alphas_from_moments(zhedanov_moments(p, 1.0, 1), 1);
  EXPECT_TRUE(near_relative(abs(computed[0]), a0, 1e-60));
  EXPECT_THROW(zhedanov_alpha_modulus(1.0, 1.0, 0), DomainError);
}

TEST_F(ZhedanovModulus, ConsistencyAndStrictBounds) {
  for (double p : {0.3, 0.5, 0.7}) {
    const auto a = alphas_from_moments(zhedanov_moments(p, 1.0, 100), 100);
    const Real lower = Real(1 - p) / Real(1 + p);
    for (std::size_t n = 0; n < 100; ++n) {
      const Real expected = zhedanov_alpha_modulus(p, 1.0, n);
      EXPECT_LT(to_double(abs(abs(a[n]) - expected) / expected), 1e-20) << p << ":" << n;
      EXPECT_GT(abs(a[n]), lower);
      EXPECT_LT(abs(a[n]), 1);
    }
  }
}

using BuildMeasure = Precise;

TEST_F(BuildMeasure, FixedGenerators) {
  const auto leb = build_measure(GeneratorSpec::lebesgue(), 5);
  ASSERT_EQ(leb.alphas.size(), 5u);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(norm(leb.alphas[j]), 0);

  const auto poi = build_measure(GeneratorSpec::poisson(0.5), 4);
  EXPECT_EQ(poi.alphas[0].re, 0.5);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_EQ(norm(poi.alphas[j]), 0);

  const auto fac = build_measure(GeneratorSpec::factorial(), 10);
  for (std::size_t j = 0; j < 10; ++j) {
    if (j == 2) {
      EXPECT_EQ(fac.alphas[j].re, 1 / sqrt(Real(2)));
    } else if (j == 6) {
      EXPECT_EQ(fac.alphas[j].re, 1 / sqrt(Real(3)));
    } else {
      EXPECT_EQ(norm(fac.alphas[j]), 0) << j;
    }
  }

  const auto ell2 = build_measure(GeneratorSpec::ell2_szego(0.5, 0.5), 4);
  EXPECT_EQ(ell2.alphas[3].re, 0.0625);
}

TEST_F(BuildMeasure, RejectsInvalidParameters) {
  EXPECT_THROW(build_measure(GeneratorSpec::constant(1.0, 0.0), 3), DomainError);
  EXPECT_THROW(build_measure(GeneratorSpec::poisson(-1.0), 3), DomainError);
  EXPECT_THROW(build_measure(GeneratorSpec::zhedanov(1.2, 1.0), 3), DomainError);
  EXPECT_THROW(build_measure(GeneratorSpec::ell2_szego(0.5, 1.0), 3), DomainError);
  EXPECT_THROW(build_measure(GeneratorSpec::random_rotinv({}, 1), 3), DomainError);
  EXPECT_THROW(build_measure(GeneratorSpec::random_rotinv({0.0, 0.0}, 1), 3), DomainError);
}

TEST_F(BuildMeasure, RandomGeneratorIsDeterministicAndRotationInvariant) {
  const auto spec = GeneratorSpec::random_rotinv({0.0, 1.0}, 42);
  const auto a = build_measure(spec, 4000);
  const auto b = build_measure(spec, 4000);
  constexpr std::size_t kBins = 8;
  std::vector<double> counts(kBins, 0.0);
  for (std::size_t j = 0; j < a.alphas.size(); ++j) {
    EXPECT_EQ(a.alphas[j].re, b.alphas[j].re);
    EXPECT_EQ(a.alphas[j].im, b.alphas[j].im);
    const double r = to_double(abs(a.alphas[j]));
    EXPECT_GE(r, 0.5);
    EXPECT_LT(r, 1.0);
    double phase = std::atan2(to_double(a.alphas[j].im), to_double(a.alphas[j].re));
    if (phase < 0) phase += 2 * std::numbers::pi;
    counts[std::min(kBins - 1, static_cast<std::size_t>(phase / (2 * std::numbers::pi) * kBins))] += 1;
  }
  const double expected = 4000.0 / kBins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 7 degrees of freedom; 30 is far in the tail.
  EXPECT_LT(chi2, 30.0);
  const auto other = build_measure(GeneratorSpec::random_rotinv({0.0, 1.0}, 43), 4);
  EXPECT_NE(other.alphas[0].re, a.alphas[0].re);
}

TEST_F(BuildMeasure, ExtendedPrefixUsesTag) {
  const auto g = build_measure(GeneratorSpec::ell2_szego(0.5, 0.5), 3);
  const auto longer = g.alphas.extended(6);
  ASSERT_EQ(longer.size(), 6u);
  EXPECT_EQ(longer[5].re, Real(0.5) / 32);
  EXPECT_THROW(VerblunskySequence(std::vector<Complex>(2)).extended(3), DomainError);
}
