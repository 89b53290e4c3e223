#include <gtest/gtest.h>

#include <cmath>

#include "hypermatch/extremal.hpp"
#include "hypermatch/optmatch.hpp"
#include "hypermatch/samuels.hpp"
#include "support.hpp"

using namespace hypermatch;

namespace {

SamuelsQuery uniform(std::size_t l, long p, long q) { return SamuelsQuery::uniform(l, make_rational(p, q)); }

}  // namespace

TEST(QueryValidation, RejectsInadmissibleExpectations) {
  EXPECT_THROW(SamuelsQuery({}), std::invalid_argument);
  EXPECT_THROW(SamuelsQuery({Rational(-1)}), std::invalid_argument);
  EXPECT_THROW(SamuelsQuery({make_rational(1, 2), make_rational(1, 3)}), std::invalid_argument);
  EXPECT_THROW(SamuelsQuery({make_rational(1, 2), make_rational(1, 2)}), std::invalid_argument);
  EXPECT_THROW(q_t(uniform(3, 1, 5), 3), std::invalid_argument);
}

TEST(Qt, KnownValues) {
  EXPECT_EQ(q_t(uniform(3, 1, 5), 0), make_rational(64, 125));
  EXPECT_EQ(q_t(uniform(3, 1, 5), 2), make_rational(2, 3));
  const SamuelsQuery mixed({make_rational(1, 10), make_rational(1, 5), make_rational(3, 10)});
  EXPECT_EQ(q_t(mixed, 1), make_rational(14, 27));
}

TEST(Qt, MatchesDirectProductFormula) {
  // Independent evaluation of prod_{i>t} (1 - mu_i / (1 - prefix)).
  const std::vector<Rational> mus{make_rational(1, 20), make_rational(1, 10), make_rational(1, 7), make_rational(1, 5)};
  const SamuelsQuery q(mus);
  for (std::size_t t = 0; t < mus.size(); ++t) {
    Rational prefix(0);
    for (std::size_t j = 0; j < t; ++j) prefix += mus[j];
    Rational expected(1);
    for (std::size_t i = t; i < mus.size(); ++i) expected *= 1 - mus[i] / (1 - prefix);
    EXPECT_EQ(q_t(q, t), expected) << "t=" << t;
  }
}

TEST(QMin, KnownValues) {
  const auto a = q_min(uniform(3, 1, 5));
  EXPECT_EQ(a.value, make_rational(64, 125));
  EXPECT_EQ(a.argmin, 0u);
  const auto b = q_min(uniform(3, 3, 10));
  EXPECT_EQ(b.value, make_rational(1, 4));
  EXPECT_EQ(b.argmin, 2u);
  const auto c = q_min(SamuelsQuery({make_rational(2, 5)}));
  EXPECT_EQ(c.value, make_rational(3, 5));
  EXPECT_EQ(c.argmin, 0u);
}

TEST(UniformMinimizer, KnownValues) {
  EXPECT_TRUE(prop23_check(3, make_rational(1, 4)));
  EXPECT_FALSE(prop23_check(3, make_rational(3, 10)));
  EXPECT_TRUE(prop23_check(4, make_rational(1, 5)));
  EXPECT_THROW(prop23_check(1, make_rational(1, 4)), std::invalid_argument);
  EXPECT_THROW(prop23_check(3, make_rational(1, 3)), std::invalid_argument);
  EXPECT_THROW(prop23_check(3, Rational(0)), std::invalid_argument);
}

TEST(UniformMinimizer, HoldsOnGridBelowOneOverLPlusOne) {
  for (std::size_t l = 2; l <= 6; ++l) {
    for (long j = 1; j * static_cast<long>(l + 1) <= 200; ++j) {
      EXPECT_TRUE(prop23_check(l, make_rational(j, 200))) << "l=" << l << " x=" << j << "/200";
    }
  }
}

TEST(BoundaryScan, KnownValues) {
  EXPECT_NEAR(boundary_scan(3, 1e-6).x_star, 0.277, 0.002);
  EXPECT_NEAR(boundary_scan(4, 1e-6).x_star, 0.217, 0.002);
  EXPECT_NEAR(boundary_scan(2, 1e-6).x_star, (3.0 - std::sqrt(5.0)) / 2.0, 0.001);
  for (std::size_t l = 2; l <= 5; ++l) EXPECT_FALSE(boundary_scan(l, 1e-6).anomaly);
}

TEST(BoundaryScan, AgreesWithExactCheckOnEitherSide) {
  for (std::size_t l = 2; l <= 5; ++l) {
    const double x = boundary_scan(l, 1e-7).x_star;
    const long below = static_cast<long>(std::floor((x - 1e-4) * 1e6));
    const long above = static_cast<long>(std::ceil((x + 1e-4) * 1e6));
    EXPECT_TRUE(prop23_check(l, make_rational(below, 1000000))) << l;
    EXPECT_FALSE(prop23_check(l, make_rational(above, 1000000))) << l;
  }
}

TEST(BoundaryScan, RejectsBadArguments) {
  EXPECT_THROW(boundary_scan(1, 1e-6), std::invalid_argument);
  EXPECT_THROW(boundary_scan(3, 0.0), std::invalid_argument);
}

TEST(TwoPointFamily, MeansAreExact) {
  const SamuelsQuery q({make_rational(1, 10), make_rational(1, 5), make_rational(3, 10)});
  for (std::size_t t = 0; t < 3; ++t) {
    const TwoPointFamily f(q, t);
    EXPECT_EQ(f.high_value(), 1 - q.prefix_sum(t));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.mean(i), q[i]);
  }
}

TEST(MonteCarlo, KnownValues) {
  EXPECT_NEAR(monte_carlo_small_sum(TwoPointFamily(uniform(3, 1, 5), 0), 100000, 0), 0.512, 0.01);
  EXPECT_NEAR(monte_carlo_small_sum(TwoPointFamily(uniform(3, 3, 10), 2), 100000, 0), 0.25, 0.01);
  EXPECT_EQ(monte_carlo_small_sum(TwoPointFamily(uniform(3, 0, 1), 0), 1000, 0), 1.0);
  EXPECT_THROW(monte_carlo_small_sum(TwoPointFamily(uniform(3, 1, 5), 0), 0, 0), std::invalid_argument);
}

TEST(MonteCarlo, DeterministicAndIndependentOfJobs) {
  const TwoPointFamily f(uniform(4, 1, 6), 1);
  const double a = monte_carlo_small_sum(f, 20001, 17);
  EXPECT_EQ(a, monte_carlo_small_sum(f, 20001, 17));
  EXPECT_EQ(a, monte_carlo_small_sum(f, 20001, 17, default_mc_shards, 4));
  EXPECT_NE(a, monte_carlo_small_sum(f, 20001, 18));
}

TEST(MonteCarlo, WithinFourSigmaAcrossSeeds) {
  const TwoPointFamily f(uniform(3, 3, 10), 1);
  const double exact = q_t(f.query(), 1).get_d();
  const std::uint64_t samples = 20000;
  const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(samples));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_LE(std::abs(monte_carlo_small_sum(f, samples, seed) - exact), 4 * sigma) << seed;
  }
}

TEST(EdgeCountBound, KnownValues) {
  const auto a = edge_count_bound(
      VertexWeighting({make_rational(1, 2), make_rational(1, 2), make_rational(1, 2), make_rational(1, 5)}), 2);
  EXPECT_EQ(a.light_sets, 3u);
  EXPECT_EQ(a.bound, 3u);
  const auto b = edge_count_bound(VertexWeighting::uniform(5, make_rational(1, 5)), 3);
  EXPECT_EQ(b.light_sets, 10u);
  EXPECT_EQ(b.bound, 0u);
  const auto c = edge_count_bound(VertexWeighting({Rational(1), 0, 0, 0, 0, 0}), 3);
  EXPECT_EQ(c.light_sets, 10u);
  EXPECT_EQ(c.bound, 10u);
  EXPECT_EQ(c.bound, construct_h1(3, 6, 2).edge_count());
  EXPECT_THROW(edge_count_bound(VertexWeighting::uniform(3, Rational(0)), 4), std::invalid_argument);
  EXPECT_THROW(edge_count_bound(VertexWeighting::uniform(3, Rational(0)), 0), std::invalid_argument);
}

TEST(EdgeCountBound, TightOnThresholdHypergraphsAndCoversThem) {
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 3 + rng.below(6);
    const std::size_t l = 1 + rng.below(std::min<std::size_t>(n, 4));
    std::vector<Rational> w;
    for (std::size_t v = 0; v < n; ++v) w.push_back(make_rational(static_cast<long>(rng.below(9)), 8));
    const VertexWeighting weights(w);
    const auto h = threshold_hypergraph(weights, l);
    EXPECT_EQ(edge_count_bound(weights, l).bound, oracle::threshold_edges(w, l).size());
    EXPECT_EQ(edge_count_bound(weights, l).bound, h.edge_count());
    EXPECT_LE(solve_fractional_matching(h).value, weights.total());
  }
}
