#include "opuc/errors.hpp"
#include "opuc/polynomial.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <numbers>
#include <random>

using namespace opuc;

namespace {

VerblunskySequence random_alphas(std::mt19937_64& rng, std::size_t n, double max_radius) {
  std::uniform_real_distribution<double> radius(0.0, max_radius);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  std::vector<Complex> v;
  for (std::size_t j = 0; j < n; ++j) v.push_back(Complex::polar(Real(radius(rng)), Real(phase(rng))));
  return VerblunskySequence(std::move(v));
}

}  // namespace

using SzegoStep = Precise;

TEST_F(SzegoStep, HandComputedSteps) {
  const MonicPolynomial phi0;
  const auto z = szego_step(phi0, Complex());
  ASSERT_EQ(z.degree(), 1u);
  EXPECT_EQ(z[0].re, 0);
  EXPECT_EQ(z[1].re, 1);

  const auto phi1 = szego_step(phi0, Complex(0.5, 0.0));
  EXPECT_EQ(phi1[0].re, -0.5);
  EXPECT_EQ(phi1.norm_sq(), 0.75);

  const auto phi3 = szego_step(szego_step(phi1, Complex()), Complex());
  ASSERT_EQ(phi3.degree(), 3u);
  EXPECT_EQ(phi3[0].re, 0);
  EXPECT_EQ(phi3[1].re, 0);
  EXPECT_EQ(phi3[2].re, -0.5);
  EXPECT_EQ(phi3[3].re, 1);
  EXPECT_EQ(phi3.norm_sq(), 0.75);
}

TEST_F(SzegoStep, RejectsCoefficientOutsideDisk) {
  EXPECT_THROW(szego_step(MonicPolynomial(), Complex(1.0, 0.0)), DomainError);
  EXPECT_THROW(szego_step(MonicPolynomial(), Complex(0.8, 0.8)), DomainError);
}

TEST_F(SzegoStep, MonicAndNormTrackedForRandomSequences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto alphas = random_alphas(rng, 100, 0.95);
    const auto family = monic_family(alphas, 100);
    for (std::size_t n = 0; n <= 100; ++n) {
      EXPECT_EQ(family[n][n].re, 1);
      EXPECT_EQ(family[n][n].im, 0);
      EXPECT_TRUE(near_relative(family[n].norm_sq(), monic_norm_sq(alphas, n), 1e-60)) << n;
    }
  }
}

TEST_F(SzegoStep, CoefficientsBoundedByBinomials) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto family = monic_family(random_alphas(rng, 40, 0.999), 40);
    for (std::size_t n = 0; n <= 40; ++n) {
      for (std::size_t k = 0; k <= n; ++k) {
        const Real bound(oracle::binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)).str());
        EXPECT_LE(abs(family[n][k]), bound) << n << "," << k;
      }
    }
  }
}

TEST_F(SzegoStep, GramConsistencyAgainstMoments) {
  const auto m = zhedanov_moments(0.5, 1.0, 15);
  const auto family = monic_family(alphas_from_moments(m, 15), 15);
  for (std::size_t n = 0; n <= 15; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const Complex ip = inner_product(family[n].coefficients(), family[k].coefficients(), m);
      if (k < n) {
        EXPECT_LT(to_double(abs(ip)), 1e-60) << n << "," << k;
      } else {
        EXPECT_TRUE(near_relative(ip.re, family[n].norm_sq(), 1e-60)) << n;
        EXPECT_TRUE(near_relative(gram_norm_sq(family[n], m), family[n].norm_sq(), 1e-60)) << n;
      }
    }
  }
}

using Reversed = Precise;

TEST_F(Reversed, Examples) {
  const std::vector<Complex> z{Complex(), Complex(1.0, 0.0)};
  const auto zs = reversed(z);
  EXPECT_EQ(zs[0].re, 1);
  EXPECT_EQ(zs[1].re, 0);

  const std::vector<Complex> p{Complex(-0.5, 0.25), Complex(1.0, 0.0)};
  const auto ps = reversed(p);
  EXPECT_EQ(ps[0].re, 1);
  EXPECT_EQ(ps[1].re, -0.5);
  EXPECT_EQ(ps[1].im, -0.25);

  const auto back = reversed(ps);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(back[i].re, p[i].re);
    EXPECT_EQ(back[i].im, p[i].im);
  }
}

TEST_F(Reversed, ConstantTermOfReversedMonicIsOne) {
  std::mt19937_64 rng(5);
  const auto family = monic_family(random_alphas(rng, 10, 0.9), 10);
  for (const auto& phi : family) EXPECT_EQ(reversed(phi.coefficients())[0].re, 1);
}

using MonicNorm = Precise;

TEST_F(MonicNorm, Products) {
  const VerblunskySequence zeros(std::vector<Complex>(5));
  EXPECT_EQ(monic_norm_sq(zeros, 5), 1);
  const VerblunskySequence one({Complex(0.5, 0.0), Complex(), Complex()});
  EXPECT_EQ(monic_norm_sq(one, 3), 0.75);
  const VerblunskySequence halves(std::vector<Complex>(4, Complex(0.5, 0.0)));
  EXPECT_EQ(monic_norm_sq(halves, 4), Real(81) / 256);
  EXPECT_THROW(monic_norm_sq(halves, 5), DomainError);
}

TEST_F(MonicNorm, NonincreasingInN) {
  std::mt19937_64 rng(3);
  const auto alphas = random_alphas(rng, 50, 0.9);
  for (std::size_t n = 1; n <= 50; ++n) EXPECT_LE(monic_norm_sq(alphas, n), monic_norm_sq(alphas, n - 1));
}

using SzegoConstantTest = Precise;

TEST_F(SzegoConstantTest, Lebesgue) {
  const auto lebesgue = szego_constant(MeasureSpec::from_generator(GeneratorSpec::lebesgue()), 10);
  for (const auto& p : lebesgue.partial_products) EXPECT_EQ(p, 1);
  EXPECT_FALSE(lebesgue.quadrature);

  const auto flat = szego_constant(MeasureSpec::weight_function(std::vector<double>(64, 1.0)), 10);
  ASSERT_TRUE(flat.quadrature);
  EXPECT_EQ(*flat.quadrature, 1);
}

TEST_F(SzegoConstantTest, PoissonKernel) {
  const auto s = szego_constant(MeasureSpec::weight_function(poisson_density_samples(0.5, 4096)), 20);
  ASSERT_TRUE(s.quadrature);
  const Real closed = exp(log(Real(0.75)));
  EXPECT_LT(to_double(abs(s.partial_products.back() - 0.75)), 1e-10);
  EXPECT_LT(to_double(abs(*s.quadrature - closed)), 1e-10);
  EXPECT_LT(to_double(abs(*s.quadrature - s.partial_products.back())), 1e-10);
}

TEST_F(SzegoConstantTest, ZhedanovProductsDecay) {
  const auto s = szego_constant(MeasureSpec::from_generator(GeneratorSpec::zhedanov(0.5, 1.0)), 300);
  for (std::size_t n = 1; n < s.partial_products.size(); ++n) {
    EXPECT_LT(s.partial_products[n], s.partial_products[n - 1]);
  }
  // Each factor is below 8/9.
  for (std::size_t n = 0; n < s.partial_products.size(); ++n) {
    EXPECT_LT(s.partial_products[n], pow(Real(8) / 9, static_cast<long>(n + 1)));
  }
  EXPECT_LT(s.partial_products.back(), 1e-6);
}

TEST_F(SzegoConstantTest, RejectsZeroSampleInQuadrature) {
  std::vector<double> w(64, 1.0);
  w[0] = 0.0;
  w[1] = 2.0;
  EXPECT_THROW(szego_constant(MeasureSpec::weight_function(w), 5), DomainError);
}
