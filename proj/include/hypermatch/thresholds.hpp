#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hypermatch/errors.hpp"
#include "hypermatch/extremal.hpp"
#include "hypermatch/hypergraph.hpp"
#include "hypermatch/optmatch.hpp"
#include "hypermatch/rational.hpp"

namespace hypermatch {

enum class ThresholdMode { integral, fractional };

inline std::string_view mode_name(ThresholdMode m) { return m == ThresholdMode::integral ? "integral" : "fractional"; }

/// Asks for m_d^s(k,n) (integral) or f_d^s(k,n) (fractional).
struct ThresholdQuery {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  Rational s;
  ThresholdMode mode = ThresholdMode::integral;

  void validate() const {
    if (k < 1 || k > n) throw std::invalid_argument("threshold query requires 1 <= k <= n");
    if (d >= k) throw std::invalid_argument("threshold query requires 0 <= d <= k-1");
    if (mode == ThresholdMode::integral) {
      if (!is_integer(s) || s < 1 || s * static_cast<long>(k) > Rational(static_cast<long>(n))) {
        throw std::invalid_argument("integral threshold requires an integer 1 <= s <= n/k");
      }
    } else if (sgn(s) <= 0) {
      throw std::invalid_argument("fractional threshold requires s > 0");
    }
  }
};

struct ThresholdBudget {
  /// Largest admissible C(n,k); the search visits 2^C(n,k) edge sets.
  std::size_t max_universe = 24;
  std::size_t jobs = 1;
};

struct ThresholdResult {
  std::uint64_t value = 0;
  /// An extremal hypergraph with min d-degree value - 1 satisfying the constraint.
  Hypergraph witness;
  std::uint64_t witness_index = 0;
  std::uint64_t instances_examined = 0;
  std::uint64_t constraint_checks = 0;
  std::uint64_t lp_solves = 0;
  std::chrono::duration<double> runtime{};
};

namespace detail {

/// Whether `count` pairwise-disjoint edges exist among `edges` (lex order).
inline bool packing_at_least(const std::uint64_t* edges, std::size_t size, std::uint64_t used, std::size_t free_vertices,
                             std::size_t k, int count) {
  if (count <= 0) return true;
  if (static_cast<int>(free_vertices / k) < count) return false;
  for (std::size_t i = 0; i < size; ++i) {
    if ((edges[i] & used) == 0 &&
        packing_at_least(edges + i + 1, size - i - 1, used | edges[i], free_vertices - k, k, count - 1)) {
      return true;
    }
  }
  return false;
}

inline Hypergraph hypergraph_from_index(std::uint64_t index, const std::vector<Edge>& universe, std::size_t n,
                                        std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (index >> i & 1) edges.push_back(universe[i]);
  }
  return Hypergraph(n, k, std::move(edges));
}

/// Whether h satisfies the defining constraint (nu <= s-1, or nu* < s).
inline bool satisfies_constraint(const Hypergraph& h, const ThresholdQuery& q) {
  if (q.mode == ThresholdMode::integral) {
    return Rational(static_cast<unsigned long>(matching_number(h).size)) <= q.s - 1;
  }
  return solve_fractional_matching(h).value < q.s;
}

}  // namespace detail

/// Exhaustive threshold: 1 + max min-d-degree over all k-graphs on n labeled
/// vertices that satisfy the constraint. Edge sets are enumerated as integers
/// over the lexicographic universe of k-sets; shards cover contiguous ranges
/// and merge by (max value, smallest index), so the result does not depend on
/// the number of jobs.
inline ThresholdResult brute_force_threshold(const ThresholdQuery& q, const ThresholdBudget& budget = {}) {
  q.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t universe_size = binomial_u64(q.n, q.k);
  if (universe_size > budget.max_universe || universe_size > 62 || q.n > 64) {
    throw BudgetExceeded("threshold search over 2^" + std::to_string(universe_size) + " edge sets exceeds budget",
                         1, binomial_u64(q.n - q.d, q.k - q.d) + 1);
  }
  const auto universe = all_combinations(q.n, q.k);
  std::vector<std::uint64_t> vertex_masks;
  for (const auto& e : universe) vertex_masks.push_back(vertex_mask(e));

  // For each d-set, the universe edges containing it.
  std::vector<std::uint64_t> containing;
  if (q.d > 0) {
    for_each_combination(q.n, q.d, [&](std::span<const Vertex> s) {
      const std::uint64_t sm = vertex_mask(s);
      std::uint64_t m = 0;
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if ((vertex_masks[i] & sm) == sm) m |= std::uint64_t{1} << i;
      }
      containing.push_back(m);
    });
  }

  const long integral_target = to_long(ceil(q.s));
  const std::uint64_t total = std::uint64_t{1} << universe_size;
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(budget.jobs, total));
  std::atomic<long long> global_best{-1};

  struct ShardResult {
    long long best = -1;
    std::uint64_t index = 0;
    std::uint64_t checks = 0;
    std::uint64_t lps = 0;
  };
  std::vector<ShardResult> results(jobs);

  auto run = [&](std::size_t shard) {
    const std::uint64_t lo = total / jobs * shard;
    const std::uint64_t hi = shard + 1 == jobs ? total : total / jobs * (shard + 1);
    ShardResult& r = results[shard];
    std::uint64_t present[64];
    for (std::uint64_t set = lo; set < hi; ++set) {
      long long delta;
      if (q.d == 0) {
        delta = std::popcount(set);
      } else {
        delta = std::numeric_limits<long long>::max();
        for (std::uint64_t m : containing) delta = std::min<long long>(delta, std::popcount(set & m));
      }
      if (delta <= r.best || delta < global_best.load(std::memory_order_relaxed)) continue;

      ++r.checks;
      std::size_t count = 0;
      for (std::uint64_t rest = set; rest != 0; rest &= rest - 1) {
        present[count++] = vertex_masks[std::countr_zero(rest)];
      }
      bool satisfied;
      if (q.mode == ThresholdMode::integral) {
        satisfied = !detail::packing_at_least(present, count, 0, q.n, q.k, static_cast<int>(integral_target));
      } else if (detail::packing_at_least(present, count, 0, q.n, q.k, static_cast<int>(integral_target))) {
        satisfied = false;  // an integral matching of size ceil(s) already gives nu* >= s
      } else {
        ++r.lps;
        satisfied = solve_fractional_matching(detail::hypergraph_from_index(set, universe, q.n, q.k)).value < q.s;
      }
      if (!satisfied) continue;
      r.best = delta;
      r.index = set;
      long long seen = global_best.load(std::memory_order_relaxed);
      while (seen < delta && !global_best.compare_exchange_weak(seen, delta, std::memory_order_relaxed)) {
      }
    }
  };

  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t s = 0; s < jobs; ++s) workers.emplace_back(run, s);
  }

  ShardResult merged;
  for (const auto& r : results) {
    merged.checks += r.checks;
    merged.lps += r.lps;
    if (r.best > merged.best || (r.best == merged.best && r.best >= 0 && r.index < merged.index)) {
      merged.best = r.best;
      merged.index = r.index;
    }
  }
  if (merged.best < 0) {
    throw std::logic_error("threshold search found no admissible hypergraph");
  }

  ThresholdResult out{static_cast<std::uint64_t>(merged.best + 1),
                      detail::hypergraph_from_index(merged.index, universe, q.n, q.k),
                      merged.index,
                      total,
                      merged.checks,
                      merged.lps,
                      std::chrono::steady_clock::now() - start};
  if (min_d_degree(out.witness, q.d) + 1 != out.value || !detail::satisfies_constraint(out.witness, q)) {
    throw std::logic_error("threshold witness failed re-verification");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fractional-cover reduction: smallest-weight d-set and the linear remap.

struct FractionalReduction {
  VertexSet link_set;           // L, the d lightest vertices (ties by index)
  VertexWeighting averaged;     // w with the weights on L replaced by their mean
  Rational base_weight;         // w0 = the common weight on L after averaging
  VertexWeighting remapped;     // w' = (w - w0) / (1 - k w0), capped at 1
  VertexWeighting link_cover;   // w' restricted to V \ L, relabeled order-preservingly
};

inline FractionalReduction reduce_fractional_instance(const VertexWeighting& w, std::size_t k, std::size_t d) {
  const std::size_t n = w.size();
  if (k < 2 || k > n || d < 1 || d > k - 1) {
    throw std::invalid_argument("reduction requires 2 <= k <= n and 1 <= d <= k-1");
  }
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w[a] < w[b]; });

  FractionalReduction out;
  out.link_set.assign(order.begin(), order.begin() + static_cast<long>(d));
  std::sort(out.link_set.begin(), out.link_set.end());
  Rational mean(0);
  for (Vertex v : out.link_set) mean += w[v];
  mean /= static_cast<long>(d);

  std::vector<Rational> averaged = w.values();
  for (Vertex v : out.link_set) averaged[v] = mean;
  out.averaged = VertexWeighting(averaged);
  out.base_weight = mean;
  if (mean * static_cast<long>(k) >= 1) {
    throw ReductionInfeasible("lightest weight " + to_string(mean) + " is not below 1/k; no fractional cover of size < n/k");
  }
  const Rational scale = Rational(1) - mean * static_cast<long>(k);
  std::vector<Rational> remapped(n);
  std::vector<Rational> restricted;
  for (Vertex v = 0; v < n; ++v) {
    remapped[v] = (averaged[v] - mean) / scale;
    if (remapped[v] > 1) remapped[v] = 1;
    if (!std::binary_search(out.link_set.begin(), out.link_set.end(), v)) restricted.push_back(remapped[v]);
  }
  out.remapped = VertexWeighting(std::move(remapped));
  out.link_cover = VertexWeighting(std::move(restricted));
  return out;
}

/// Link of L in the threshold hypergraph of w'; its fractional cover is link_cover.
inline Hypergraph reduction_link(const FractionalReduction& r, std::size_t k) {
  return link(threshold_hypergraph(r.remapped, k), r.link_set);
}

// ---------------------------------------------------------------------------
// Brute-forced values against constructions and formulas.

struct ConstructionBound {
  std::string name;
  std::uint64_t value = 0;   // min d-degree of the construction plus one
  bool admissible = false;   // the construction satisfies the query's constraint
};

struct ThresholdComparison {
  ThresholdQuery query;
  std::uint64_t brute_forced = 0;
  std::vector<ConstructionBound> constructions;
  std::vector<ConjectureValue> formulas;

  std::optional<std::uint64_t> fractional_value;  // f_d^s(k,n)
  std::optional<std::uint64_t> integral_value;    // m_d^{ceil s}(k,n)
  std::optional<std::uint64_t> link_problem_value;  // f_0^{n/k}(k-d, n-d)

  std::optional<bool> fractional_below_integral;  // f <= m
  bool constructions_below_value = true;          // every admissible construction bound <= brute-forced
  std::optional<bool> link_reduction_holds;       // f_d(k,n) <= f_0^{n/k}(k-d, n-d)
  std::optional<bool> matches_formula_count;      // brute-forced equals the exact-count formula, when one applies
};

inline ThresholdComparison compare_with_conjecture(const ThresholdQuery& q, const ThresholdBudget& budget = {}) {
  q.validate();
  ThresholdComparison out;
  out.query = q;
  out.brute_forced = brute_force_threshold(q, budget).value;
  const Rational n_over_k = make_rational(static_cast<long>(q.n), static_cast<long>(q.k));
  const bool perfect = q.s == n_over_k;
  const long s_up = to_long(ceil(q.s));

  // Counterpart threshold for f <= m.
  if (q.mode == ThresholdMode::integral) {
    out.integral_value = out.brute_forced;
    ThresholdQuery f = q;
    f.mode = ThresholdMode::fractional;
    out.fractional_value = brute_force_threshold(f, budget).value;
  } else {
    out.fractional_value = out.brute_forced;
    if (s_up >= 1 && Rational(s_up) * static_cast<long>(q.k) <= Rational(static_cast<long>(q.n))) {
      ThresholdQuery m = q;
      m.mode = ThresholdMode::integral;
      m.s = s_up;
      out.integral_value = brute_force_threshold(m, budget).value;
    }
  }
  if (out.fractional_value && out.integral_value) {
    out.fractional_below_integral = *out.fractional_value <= *out.integral_value;
  }

  auto add_bound = [&](std::string name, const Hypergraph& h) {
    ConstructionBound b{std::move(name), min_d_degree(h, q.d) + 1, detail::satisfies_constraint(h, q)};
    if (b.admissible && b.value > out.brute_forced) out.constructions_below_value = false;
    out.constructions.push_back(std::move(b));
  };
  if (q.mode == ThresholdMode::integral && perfect && q.k >= 2 && q.n % q.k == 0) {
    add_bound("H0", construct_h0(q.k, q.n));
  }
  if (q.k * static_cast<std::size_t>(s_up - 1) <= q.n) {
    add_bound("H1(" + std::to_string(s_up) + ")", construct_h1(q.k, q.n, static_cast<std::size_t>(s_up)));
  }
  {
    // Clique on ceil(ks) - 1 vertices plus isolated vertices.
    const long clique = to_long(ceil(q.s * static_cast<long>(q.k))) - 1;
    if (clique >= 0 && static_cast<std::size_t>(clique) <= q.n) {
      std::vector<Edge> edges;
      for_each_combination(static_cast<std::size_t>(clique), q.k,
                           [&](std::span<const Vertex> c) { edges.emplace_back(c.begin(), c.end()); });
      add_bound("clique(" + std::to_string(clique) + ")", Hypergraph(q.n, q.k, std::move(edges)));
    }
  }

  if (q.d >= 1 && q.k >= 2) {
    out.formulas.push_back(conjecture_values(ConjectureContext::conj_1_2, {q.k, q.d, q.n, std::nullopt}));
    out.formulas.push_back(conjecture_values(ConjectureContext::conj_1_5, {q.k, q.d, q.n, std::nullopt}));
  }
  if (perfect && q.k >= 2) {
    if (q.mode == ThresholdMode::integral) {
      out.formulas.push_back(conjecture_values(ConjectureContext::eq3, {q.k, q.d, q.n, std::nullopt}));
    } else {
      out.formulas.push_back(conjecture_values(ConjectureContext::eq4, {q.k, q.d, q.n, std::nullopt}));
    }
  }
  if (q.d == 0 && q.k >= 2 && q.s * static_cast<long>(q.k) <= Rational(static_cast<long>(q.n))) {
    if (q.mode == ThresholdMode::integral) {
      auto v = conjecture_values(ConjectureContext::conj_1_8, {q.k, q.d, q.n, q.s});
      out.matches_formula_count = Integer(static_cast<unsigned long>(out.brute_forced)) == *v.count;
      out.formulas.push_back(std::move(v));
    } else {
      auto v = conjecture_values(ConjectureContext::conj_1_9, {q.k, q.d, q.n, q.s});
      out.matches_formula_count = Integer(static_cast<unsigned long>(out.brute_forced)) == *v.count;
      out.formulas.push_back(std::move(v));
    }
  }
  if (q.mode == ThresholdMode::fractional && perfect && q.k >= 2 && q.d == q.k - 1) {
    auto v = conjecture_values(ConjectureContext::f_top_exact, {q.k, q.d, q.n, std::nullopt});
    out.matches_formula_count = Integer(static_cast<unsigned long>(out.brute_forced)) == *v.count;
    out.formulas.push_back(std::move(v));
  }

  if (q.mode == ThresholdMode::fractional && perfect && q.d >= 1) {
    ThresholdQuery reduced{q.k - q.d, q.n - q.d, 0, q.s, ThresholdMode::fractional};
    try {
      out.link_problem_value = brute_force_threshold(reduced, budget).value;
      out.link_reduction_holds = out.brute_forced <= *out.link_problem_value;
    } catch (const BudgetExceeded&) {
      // reported as absent
    }
  }
  return out;
}

}  // namespace hypermatch
