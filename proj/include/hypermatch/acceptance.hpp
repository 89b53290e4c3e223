#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hypermatch/hypermatch.hpp"

namespace hypermatch::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0 means no runtime limit
};

struct Options {
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

namespace detail {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail << "FAILED: " << what << "; ";
    }
  }
};

inline CriterionResult timed(int id, std::string title, double limit, const std::function<void(Outcome&)>& body) {
  CriterionResult out;
  out.id = id;
  out.title = std::move(title);
  out.limit_seconds = limit;
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& err) {
    o.ok = false;
    o.detail << "exception: " << err.what() << "; ";
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.passed = o.ok;
  if (limit > 0 && out.seconds >= limit) {
    out.passed = false;
    o.detail << "runtime " << out.seconds << " s over limit " << limit << " s; ";
  }
  out.detail = o.detail.str();
  while (!out.detail.empty() && (out.detail.back() == ' ' || out.detail.back() == ';')) out.detail.pop_back();
  return out;
}

}  // namespace detail

/// 500 random hypergraphs: nu <= nu* = tau* <= tau, with valid certificates.
inline CriterionResult duality_chain(const Options& opt) {
  return detail::timed(1, "duality chain on 500 random hypergraphs", 60.0, [&](detail::Outcome& o) {
    const std::size_t ks[] = {2, 3, 4};
    const double densities[] = {0.2, 0.5, 0.8};
    const Rng root(opt.seed);
    std::size_t strict_gaps = 0;
    for (std::size_t i = 0; i < 500; ++i) {
      Rng rng = root.split(i);
      const std::size_t k = ks[i % 3];
      const double density = densities[(i / 3) % 3];
      const std::size_t n = k + rng.below(12 - k + 1);
      const Hypergraph h = random_hypergraph(n, k, density, rng);
      const DualityReport r = fractional_optimum(h);
      o.require(r.chain_holds(), "chain on instance " + std::to_string(i));
      o.require(r.nu_star == r.tau_star, "nu* != tau* on instance " + std::to_string(i));
      o.require(certificates_valid(h, r), "certificates on instance " + std::to_string(i));
      strict_gaps += Rational(static_cast<long>(r.nu)) < r.nu_star;
    }
    o.detail << "500 instances, " << strict_gaps << " with nu < nu*";
  });
}

/// Boundary of the t = 0 regime for l = 2, 3, 4.
inline CriterionResult samuels_boundary(const Options&) {
  return detail::timed(2, "Samuels boundary scan", 5.0, [&](detail::Outcome& o) {
    const double golden = (3.0 - std::sqrt(5.0)) / 2.0;
    const BoundaryScan s2 = boundary_scan(2, 1e-6);
    const BoundaryScan s3 = boundary_scan(3, 1e-6);
    const BoundaryScan s4 = boundary_scan(4, 1e-6);
    o.require(std::abs(s2.x_star - golden) <= 1e-3, "l=2 boundary");
    o.require(s3.x_star >= 0.275 && s3.x_star <= 0.279, "l=3 boundary");
    o.require(s4.x_star >= 0.215 && s4.x_star <= 0.219, "l=4 boundary");
    o.detail << "x*(2)=" << s2.x_star << " x*(3)=" << s3.x_star << " x*(4)=" << s4.x_star;
  });
}

/// Uniform means x <= 1/(l+1) on a 1/1000 grid: argmin is t = 0 with value (1-x)^l.
inline CriterionResult uniform_argmin(const Options&) {
  return detail::timed(3, "t = 0 minimizes Q_t below 1/(l+1)", 5.0, [&](detail::Outcome& o) {
    std::size_t points = 0;
    for (std::size_t l = 2; l <= 8; ++l) {
      for (long j = 1; make_rational(j, 1000) * static_cast<long>(l + 1) <= 1; ++j) {
        o.require(prop23_check(l, make_rational(j, 1000)), "l=" + std::to_string(l) + " x=" + std::to_string(j) + "/1000");
        ++points;
      }
    }
    o.detail << points << " grid points";
  });
}

/// Exhaustive thresholds with known exact values.
inline CriterionResult exhaustive_thresholds(const Options& opt) {
  return detail::timed(4, "exhaustive thresholds", 600.0, [&](detail::Outcome& o) {
    ThresholdBudget budget;
    budget.jobs = opt.jobs;
    const auto m0 = brute_force_threshold({3, 6, 0, Rational(2), ThresholdMode::integral}, budget).value;
    const auto formula = conjecture_values(ConjectureContext::conj_1_8, {3, 0, 6, Rational(2)}).count;
    const auto f2 = brute_force_threshold({3, 6, 2, Rational(2), ThresholdMode::fractional}, budget).value;
    const auto m24 = brute_force_threshold({2, 4, 1, Rational(2), ThresholdMode::integral}, budget).value;
    const auto m26 = brute_force_threshold({2, 6, 1, Rational(3), ThresholdMode::integral}, budget).value;
    o.require(m0 == 11, "m_0^2(3,6)");
    o.require(formula && *formula == 11, "Erdos matching formula for (3,6,2)");
    o.require(f2 == 2, "f_2(3,6)");
    o.require(m24 == 2, "m_1(2,4)");
    o.require(m26 == 3, "m_1(2,6)");
    o.detail << "m0^2(3,6)=" << m0 << " f2(3,6)=" << f2 << " m1(2,4)=" << m24 << " m1(2,6)=" << m26;
  });
}

/// f <= m, construction bounds <= brute-forced values, and the link reduction.
inline CriterionResult inequality_web(const Options& opt) {
  return detail::timed(5, "inequality web on brute-forced instances", 0.0, [&](detail::Outcome& o) {
    ThresholdBudget budget;
    budget.jobs = opt.jobs;
    struct Case {
      std::size_t k, n, d;
      long s;
    };
    const Case cases[] = {{2, 4, 0, 2}, {2, 4, 1, 2}, {2, 6, 0, 3}, {2, 6, 1, 3}, {3, 6, 0, 2},
                          {3, 6, 1, 2}, {3, 6, 2, 2}, {2, 5, 0, 2}, {2, 6, 0, 2}, {3, 6, 0, 1}};
    std::size_t compared = 0;
    for (const auto& c : cases) {
      for (auto mode : {ThresholdMode::integral, ThresholdMode::fractional}) {
        const ThresholdQuery q{c.k, c.n, c.d, Rational(c.s), mode};
        const ThresholdComparison cmp = compare_with_conjecture(q, budget);
        const std::string tag = std::string(mode_name(mode)) + " (" + std::to_string(c.k) + "," +
                                std::to_string(c.n) + ") d=" + std::to_string(c.d) + " s=" + std::to_string(c.s);
        o.require(cmp.fractional_below_integral.value_or(false), "f <= m for " + tag);
        o.require(cmp.constructions_below_value, "construction bound for " + tag);
        if (cmp.link_reduction_holds) o.require(*cmp.link_reduction_holds, "link reduction for " + tag);
        ++compared;
      }
    }
    const auto f1 = brute_force_threshold({3, 6, 1, Rational(2), ThresholdMode::fractional}, budget).value;
    const auto f0 = brute_force_threshold({2, 5, 0, Rational(2), ThresholdMode::fractional}, budget).value;
    o.require(f1 <= f0, "f_1(3,6) <= f_0^2(2,5)");
    o.detail << compared << " comparisons; f1(3,6)=" << f1 << " <= f0^2(2,5)=" << f0;
  });
}

/// H0 has no perfect matching; H1 matching numbers and its d-degree closed form.
inline CriterionResult construction_invariants(const Options&) {
  return detail::timed(6, "construction invariants", 0.0, [&](detail::Outcome& o) {
    const std::pair<std::size_t, std::size_t> h0_cases[] = {{2, 4}, {2, 6}, {3, 6}, {3, 9}, {4, 8}};
    for (auto [k, n] : h0_cases) {
      o.require(!has_perfect_matching(construct_h0(k, n)), "H0(" + std::to_string(k) + "," + std::to_string(n) + ")");
    }
    std::size_t instances = 0;
    for (std::size_t k = 2; k <= 3; ++k) {
      for (std::size_t n = k; n <= 12; ++n) {
        for (std::size_t s = 1; k * s <= n; ++s) {
          const Hypergraph h = construct_h1(k, n, s);
          const std::string tag = "H1(" + std::to_string(k) + "," + std::to_string(n) + "," + std::to_string(s) + ")";
          o.require(matching_number(h).size == s - 1, "nu of " + tag);
          o.require(solve_fractional_matching(h).value == Rational(static_cast<long>(s - 1)), "nu* of " + tag);
          ++instances;
        }
        if (n % k != 0) continue;
        const std::size_t s = n / k;
        const Hypergraph h = construct_h1(k, n, s);
        for (std::size_t d = 0; d < k; ++d) {
          const Integer closed = binomial_signed(static_cast<long>(n - d), static_cast<long>(k - d)) -
                                 binomial_signed(static_cast<long>(n - d - s + 1), static_cast<long>(k - d));
          o.require(Integer(static_cast<unsigned long>(min_d_degree(h, d))) == closed,
                    "d-degree closed form for H1(" + std::to_string(k) + "," + std::to_string(n) + "), d=" +
                        std::to_string(d));
        }
      }
    }
    o.detail << instances << " H1 instances";
  });
}

/// Random rational weightings: threshold hypergraph size equals the counting
/// bound, and its fractional matching number is at most the total weight.
inline CriterionResult counting_mechanics(const Options& opt) {
  return detail::timed(7, "threshold hypergraph counting", 0.0, [&](detail::Outcome& o) {
    const Rng root(derive_seed(opt.seed, 7));
    for (std::size_t i = 0; i < 100; ++i) {
      Rng rng = root.split(i);
      const std::size_t m = 2 + rng.below(11);
      const std::size_t l = 1 + rng.below(std::min<std::size_t>(m, 5));
      std::vector<Rational> w;
      for (std::size_t v = 0; v < m; ++v) {
        const long den = 1 + static_cast<long>(rng.below(12));
        w.push_back(make_rational(static_cast<long>(rng.below(static_cast<std::uint64_t>(den) + 1)), den));
      }
      const VertexWeighting weights(w);
      const Hypergraph hw = threshold_hypergraph(weights, l);
      const EdgeCountBound bound = edge_count_bound(weights, l);
      const std::string tag = "weighting " + std::to_string(i);
      o.require(hw.edge_count() == bound.bound, "edge count for " + tag);
      o.require(binomial_u64(m, l) - bound.light_sets == hw.edge_count(), "complement count for " + tag);
      o.require(solve_fractional_matching(hw).value <= weights.total(), "nu* bound for " + tag);
    }
    o.detail << "100 weightings";
  });
}

/// Monte Carlo estimate of the small-sum probability against exact Q_t.
inline CriterionResult monte_carlo(const Options& opt) {
  return detail::timed(8, "Monte Carlo against exact Q_t", 10.0, [&](detail::Outcome& o) {
    struct Case {
      std::size_t l;
      Rational x;
      std::size_t t;
    };
    const Case cases[] = {{3, make_rational(1, 5), 0}, {3, make_rational(3, 10), 2}, {4, make_rational(1, 5), 0}};
    for (const auto& c : cases) {
      const SamuelsQuery query = SamuelsQuery::uniform(c.l, c.x);
      const TwoPointFamily family(query, c.t);
      const double exact = q_t(query, c.t).get_d();
      std::size_t passes = 0;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double estimate = monte_carlo_small_sum(family, 100000, opt.seed + seed, default_mc_shards, opt.jobs);
        passes += std::abs(estimate - exact) <= 0.01;
      }
      o.require(passes >= 19, "l=" + std::to_string(c.l) + " t=" + std::to_string(c.t));
      o.detail << "(l=" << c.l << ",x=" << c.x.get_d() << ",t=" << c.t << "): " << passes << "/20  ";
    }
  });
}

/// Two-round construction on the complete 3-graph with 60 vertices.
inline CriterionResult randomized_construction(const Options& opt) {
  return detail::timed(9, "two-round randomized construction", 300.0, [&](detail::Outcome& o) {
    constexpr std::size_t n = 60, reps = 200;
    RoundOnePlan plan;
    plan.base = std::make_shared<const Hypergraph>(Hypergraph::complete(n, 3));
    plan.rounds = 40;
    plan.p = 0.5;
    plan.seed = opt.seed;
    const RoundOneOutcome outcome = sample_rounds(plan);
    const std::vector<RoundMatching> matchings = solve_round_matchings(outcome, opt.jobs);

    const RepetitionSummary sum =
        repeat_round_two(outcome, matchings, opt.seed, reps, OverlapPolicy::overlapping);
    o.require(sum.rounds_skipped == 0, "every sampled set has a perfect fractional matching");
    o.require(sum.vertices_within * 100 >= 95 * n, "vertex degrees within 3 sigma");
    o.require(sum.pair_failures == 0, "pair degrees below |I_u cap I_v| + 3 sigma");
    o.detail << sum.vertices_within << "/" << n << " vertices within 3 sigma, " << sum.pair_failures
             << " pair failures, " << sum.rounds_used << " rounds used, edge-in-one-set check "
             << (outcome.checks[2].passed ? "passed" : "failed (overlapping policy)");
  });
}

/// Storage allocation values, candidate closed forms and the sandwich.
inline CriterionResult storage(const Options& opt) {
  return detail::timed(10, "storage allocations", 120.0, [&](detail::Outcome& o) {
    struct GridCase {
      std::size_t n, r;
      long t;
      std::uint32_t q;
      std::uint64_t expected;
    };
    GridBudget grid;
    grid.jobs = opt.jobs;
    for (const auto& c : {GridCase{4, 2, 1, 4, 3}, GridCase{5, 2, 2, 4, 7}, GridCase{4, 2, 2, 4, 6}}) {
      const auto got = optimize_grid(c.n, c.r, c.t, c.q, grid).best.phi;
      o.require(got == c.expected, "grid optimum (" + std::to_string(c.n) + "," + std::to_string(c.r) + "," +
                                       std::to_string(c.t) + "," + std::to_string(c.q) + ")");
      o.detail << "F(" << c.n << "," << c.r << "," << c.t << ")=" << got << " ";
    }
    for (const auto& cand : candidate_allocations(10, 2, 4)) {
      const std::uint64_t expected = cand.name == "spread" ? 30 : 28;
      o.require(cand.report.phi == expected, cand.name + " candidate");
      o.detail << cand.name << "=" << cand.report.phi << " ";
    }
    ThresholdBudget budget;
    budget.jobs = opt.jobs;
    for (long t = 1; t <= 2; ++t) {
      const StorageSandwich s = storage_sandwich(5, 2, t, default_grid_denominator(2), budget);
      o.require(s.holds, "sandwich at T=" + std::to_string(t));
      o.detail << "T=" << t << ": " << s.lower << "<=" << s.value << "<=" << s.upper << " ";
    }
  });
}

inline std::vector<std::function<CriterionResult(const Options&)>> criteria() {
  return {duality_chain, samuels_boundary,        uniform_argmin,     exhaustive_thresholds,   inequality_web,
          construction_invariants, counting_mechanics, monte_carlo, randomized_construction, storage};
}

inline std::vector<CriterionResult> run_all(const Options& opt) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) out.push_back(c(opt));
  return out;
}

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream line;
  line << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << " (" << std::fixed;
  line.precision(2);
  line << r.seconds << " s";
  if (r.limit_seconds > 0) line << " / limit " << r.limit_seconds << " s";
  line << ")";
  if (!r.detail.empty()) line << "  " << r.detail;
  return line.str();
}

}  // namespace hypermatch::acceptance
