#include <gtest/gtest.h>

#include "hypermatch/extremal.hpp"
#include "hypermatch/optmatch.hpp"
#include "support.hpp"

using namespace hypermatch;

TEST(H0, KnownValues) {
  const auto h36 = construct_h0(3, 6);
  EXPECT_EQ(h0_side_size(3, 6), 3u);
  EXPECT_EQ(h36.edge_count(), 10u);
  std::size_t singles = 0, triples = 0;
  for (const auto& e : h36.edges()) {
    const auto inside = std::count_if(e.begin(), e.end(), [](Vertex v) { return v < 3; });
    singles += inside == 1;
    triples += inside == 3;
  }
  EXPECT_EQ(singles, 9u);
  EXPECT_EQ(triples, 1u);
  EXPECT_FALSE(has_perfect_matching(h36));

  const auto h26 = construct_h0(2, 6);
  EXPECT_EQ(h0_side_size(2, 6), 2u);
  EXPECT_EQ(h26.edge_count(), 8u);
  for (const auto& e : h26.edges()) EXPECT_TRUE(e[0] < 2 && e[1] >= 2);
  EXPECT_FALSE(has_perfect_matching(h26));
}

TEST(H0, SideSizeRule) {
  // n/k odd needs an even side, n/k even an odd side, as close to n/2 as possible.
  EXPECT_EQ(h0_side_size(2, 4), 1u);
  EXPECT_EQ(h0_side_size(3, 9), 4u);
  EXPECT_EQ(h0_side_size(4, 8), 3u);
  EXPECT_EQ(h0_side_size(2, 8), 3u);
  EXPECT_THROW(h0_side_size(3, 7), std::invalid_argument);
  EXPECT_THROW(h0_side_size(1, 4), std::invalid_argument);
}

TEST(H0, NeverHasAPerfectMatching) {
  for (std::size_t k = 2; k <= 4; ++k) {
    for (std::size_t n = k; n <= 12; n += k) {
      EXPECT_FALSE(has_perfect_matching(construct_h0(k, n))) << "k=" << k << " n=" << n;
    }
  }
}

TEST(H1, KnownValues) {
  const auto h = construct_h1(3, 6, 2);
  EXPECT_EQ(h.edge_count(), 10u);
  EXPECT_EQ(matching_number(h).size, 1u);
  EXPECT_EQ(solve_fractional_matching(h).value, Rational(1));
  const auto star = construct_h1(2, 5, 2);
  EXPECT_EQ(star, Hypergraph(5, 2, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
}

TEST(H1, IsCompleteMinusClique) {
  for (std::size_t s = 1; s <= 3; ++s) {
    const auto h = construct_h1(3, 9, s);
    const auto expected = binomial(9, 3) - binomial(9 - (s - 1), 3);
    EXPECT_EQ(Integer(static_cast<unsigned long>(h.edge_count())), expected);
  }
  EXPECT_THROW(construct_h1(3, 6, 4), std::invalid_argument);
  EXPECT_THROW(construct_h1(3, 6, 0), std::invalid_argument);
}

TEST(H1, MatchingNumbersAndDegreeClosedForm) {
  for (std::size_t k = 2; k <= 3; ++k) {
    for (std::size_t n = k; n <= 12; ++n) {
      for (std::size_t s = 1; k * s <= n; ++s) {
        const auto h = construct_h1(k, n, s);
        EXPECT_EQ(matching_number(h).size, s - 1);
        EXPECT_EQ(solve_fractional_matching(h).value, Rational(static_cast<long>(s - 1)));
      }
      if (n % k) continue;
      const auto h = construct_h1(k, n, n / k);
      for (std::size_t d = 0; d < k; ++d) {
        const auto closed = binomial_signed(static_cast<long>(n - d), static_cast<long>(k - d)) -
                            binomial_signed(static_cast<long>(n - d - n / k + 1), static_cast<long>(k - d));
        EXPECT_EQ(Integer(static_cast<unsigned long>(oracle::min_d_degree(h, d))), closed);
      }
    }
  }
}

TEST(Clique, KnownValues) {
  const auto a = construct_clique_plus_isolated(3, 6, 2);
  EXPECT_EQ(a.edge_count(), 10u);
  EXPECT_EQ(matching_number(a).size, 1u);
  const auto b = construct_clique_plus_isolated(2, 6, 3);
  EXPECT_EQ(b.edge_count(), 10u);
  EXPECT_EQ(matching_number(b).size, 2u);
  EXPECT_EQ(degree(b, Edge{5}), 0u);
  const auto c = construct_clique_plus_isolated(3, 9, 3);
  EXPECT_EQ(c.edge_count(), 56u);
  EXPECT_EQ(matching_number(c).size, 2u);
  EXPECT_THROW(construct_clique_plus_isolated(3, 6, 3), std::invalid_argument);
}

TEST(Conjecture, ProvenRangeCoefficients) {
  auto coef = [](std::size_t k, std::size_t d) {
    return *conjecture_values(ConjectureContext::cor_1_7, {k, d, std::nullopt, std::nullopt}).coefficient;
  };
  EXPECT_EQ(coef(4, 1), make_rational(37, 64));
  EXPECT_EQ(coef(5, 1), make_rational(369, 625));
  EXPECT_EQ(coef(6, 2), make_rational(671, 1296));
  EXPECT_EQ(coef(3, 2), make_rational(1, 2));
  EXPECT_EQ(coef(5, 2), make_rational(1, 2));
  EXPECT_EQ(coef(7, 3), make_rational(1, 2));
  EXPECT_THROW(coef(6, 1), std::invalid_argument);
  EXPECT_THROW(coef(2, 1), std::invalid_argument);
}

TEST(Conjecture, ErdosMatchingCount) {
  const auto v = conjecture_values(ConjectureContext::conj_1_8, {3, std::nullopt, 6, Rational(2)});
  EXPECT_EQ(*v.count, 11);
  EXPECT_FALSE(v.coefficient);
  // Star side wins for small s on many vertices; clique side when ks is close to n.
  EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_8, {2, std::nullopt, 10, Rational(2)}).count, 10);
  EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_8, {2, std::nullopt, 6, Rational(3)}).count, 11);
  EXPECT_THROW(conjecture_values(ConjectureContext::conj_1_8, {3, std::nullopt, 6, make_rational(3, 2)}),
               std::invalid_argument);
  EXPECT_THROW(conjecture_values(ConjectureContext::conj_1_8, {3, std::nullopt, 6, Rational(3)}),
               std::invalid_argument);
}

TEST(Conjecture, FractionalErdosCount) {
  // l = 2, m = 5, s = 2: max{C(3,2), C(5,2) - C(4,2)} + 1 = 5.
  EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_9, {2, std::nullopt, 5, Rational(2)}).count, 5);
  // s = 5/2: ceil(ls) - 1 = 4 gives C(4,2) = 6; ceil(s) = 3 gives C(5,2) - C(3,2) = 7.
  EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_9, {2, std::nullopt, 5, make_rational(5, 2)}).count, 8);
  EXPECT_THROW(conjecture_values(ConjectureContext::conj_1_9, {2, std::nullopt, 5, Rational(3)}),
               std::invalid_argument);
}

TEST(Conjecture, Eq3AndRelations) {
  EXPECT_EQ(*conjecture_values(ConjectureContext::eq3, {3, 2, std::nullopt, std::nullopt}).coefficient,
            make_rational(1, 2));
  for (std::size_t k = 2; k <= 7; ++k) {
    for (std::size_t d = 1; d < k; ++d) {
      const ConjectureParameters p{k, d, std::nullopt, std::nullopt};
      const Rational second = h1_coefficient(k, d);
      EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_2, p).coefficient,
                *conjecture_values(ConjectureContext::eq3, p).coefficient);
      EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_2, p).coefficient, std::max(make_rational(1, 2), second));
      EXPECT_EQ(*conjecture_values(ConjectureContext::conj_1_5, p).coefficient, second);
      EXPECT_EQ(*conjecture_values(ConjectureContext::eq4, p).coefficient, second);
      const Rational c = *conjecture_values(ConjectureContext::conj_1_2, p).coefficient;
      EXPECT_GE(c, 0);
      EXPECT_LE(c, 1);
    }
  }
}

TEST(Conjecture, FiniteCounts) {
  // Integral lower-bound count at (3,6,d=1): max(delta_1(H0), delta_1(H1(2))) + 1 = max(4, 4) + 1.
  EXPECT_EQ(*conjecture_values(ConjectureContext::eq3, {3, 1, 6, std::nullopt}).count, 5);
  EXPECT_EQ(*conjecture_values(ConjectureContext::eq4, {3, 1, 6, std::nullopt}).count, 5);
  EXPECT_EQ(*conjecture_values(ConjectureContext::f_top_exact, {3, 2, 7, std::nullopt}).count, 3);
  EXPECT_THROW(conjecture_values(ConjectureContext::eq3, {3, 1, 7, std::nullopt}), std::invalid_argument);
}

TEST(Conjecture, MissingParametersAndNames) {
  EXPECT_THROW(conjecture_values(ConjectureContext::conj_1_2, {3, std::nullopt, std::nullopt, std::nullopt}),
               std::invalid_argument);
  EXPECT_THROW(conjecture_values(ConjectureContext::conj_1_5, {3, 3, std::nullopt, std::nullopt}),
               std::invalid_argument);
  for (auto c : {ConjectureContext::eq3, ConjectureContext::eq4, ConjectureContext::conj_1_2,
                 ConjectureContext::conj_1_5, ConjectureContext::conj_1_8, ConjectureContext::conj_1_9,
                 ConjectureContext::cor_1_7, ConjectureContext::f_top_exact}) {
    EXPECT_EQ(parse_context(context_name(c)), c);
  }
  EXPECT_THROW(parse_context("Conj9.9"), std::invalid_argument);
}
