#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypermatch/errors.hpp"
#include "hypermatch/hypergraph.hpp"
#include "hypermatch/rational.hpp"
#include "hypermatch/samuels.hpp"
#include "hypermatch/thresholds.hpp"

namespace hypermatch {

/// Amount x_i stored on each of n nodes, recovered from r random nodes, with
/// total budget T.
struct Allocation {
  VertexWeighting x;
  std::size_t r = 1;
  long budget = 0;

  void validate() const {
    if (r < 1 || r > x.size()) throw std::invalid_argument("allocation requires 1 <= r <= n");
    if (budget < 0) throw std::invalid_argument("allocation budget must be nonnegative");
    if (x.total() > Rational(budget)) {
      throw std::invalid_argument("allocation total " + to_string(x.total()) + " exceeds budget " +
                                  std::to_string(budget));
    }
  }
};

struct AllocationReport {
  std::uint64_t phi = 0;
  Rational success_probability;
  Allocation allocation;
};

/// Number of r-subsets whose stored amounts sum to at least one.
inline AllocationReport phi(const Allocation& a) {
  a.validate();
  const EdgeCountBound counts = edge_count_bound(a.x, a.r);
  AllocationReport out;
  out.phi = counts.bound;
  out.success_probability = Rational(Integer(static_cast<unsigned long>(out.phi)), binomial(a.x.size(), a.r));
  out.success_probability.canonicalize();
  out.allocation = a;
  return out;
}

struct CandidateAllocation {
  std::string name;  // "clique" or "spread"
  AllocationReport report;
  Integer closed_form;
};

/// The clique allocation (1/r on rT nodes, Phi = C(rT, r)) and the spread
/// allocation (1 on T nodes, Phi = C(n,r) - C(n-T,r)), each evaluated by phi.
inline std::vector<CandidateAllocation> candidate_allocations(std::size_t n, std::size_t r, long budget) {
  if (r < 1 || r > n || budget < 0) throw std::invalid_argument("candidates require 1 <= r <= n and T >= 0");
  std::vector<CandidateAllocation> out;
  const std::size_t t = static_cast<std::size_t>(budget);
  auto add = [&](std::string name, std::vector<Rational> x, Integer closed) {
    Allocation a{VertexWeighting(std::move(x)), r, budget};
    AllocationReport rep = phi(a);
    if (Integer(static_cast<unsigned long>(rep.phi)) != closed) {
      throw std::logic_error(name + " allocation disagrees with its closed form");
    }
    out.push_back({std::move(name), std::move(rep), std::move(closed)});
  };
  if (r * t <= n) {
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = 0; i < r * t; ++i) x[i] = make_rational(1, static_cast<long>(r));
    add("clique", std::move(x), binomial(r * t, r));
  }
  if (t <= n) {
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = 0; i < t; ++i) x[i] = 1;
    add("spread", std::move(x), binomial(n, r) - binomial_signed(static_cast<long>(n - t), static_cast<long>(r)));
  }
  return out;
}

struct GridBudget {
  std::uint64_t max_candidates = 5'000'000;
  std::size_t jobs = 1;
};

struct GridOptimum {
  AllocationReport best;
  std::uint64_t denominator = 0;
  Integer compositions;            // C(qT + n - 1, n - 1), the unrestricted grid
  std::uint64_t candidates_searched = 0;  // nonincreasing grid points actually scored
};

namespace detail {

/// Number of nonincreasing sequences of `parts` values in [0, cap] summing to `total`.
inline Integer count_partitions(std::size_t parts, std::size_t cap, std::size_t total) {
  // ways[c][s]: sequences using values <= c; iterate parts.
  std::vector<std::vector<Integer>> ways(cap + 1, std::vector<Integer>(total + 1, Integer(0)));
  for (std::size_t c = 0; c <= cap; ++c) ways[c][0] = 1;
  for (std::size_t p = 0; p < parts; ++p) {
    std::vector<std::vector<Integer>> next(cap + 1, std::vector<Integer>(total + 1, Integer(0)));
    // next[c][s] = sum_{v<=c} ways[v][s-v]  (first value v, rest bounded by v)
    for (std::size_t c = 0; c <= cap; ++c) {
      for (std::size_t s = 0; s <= total; ++s) {
        next[c][s] = c > 0 ? next[c - 1][s] : Integer(0);
        if (s >= c) next[c][s] += ways[c][s - c];
      }
    }
    ways = std::move(next);
  }
  return ways[cap][total];
}

inline std::uint64_t phi_units(const std::vector<std::uint32_t>& units, std::size_t r, std::uint32_t one) {
  std::uint64_t count = 0;
  for_each_combination(units.size(), r, [&](std::span<const Vertex> c) {
    std::uint64_t sum = 0;
    for (Vertex v : c) sum += units[v];
    count += (sum >= one);
  });
  return count;
}

}  // namespace detail

/// Exhaustive maximum of Phi over allocations in multiples of 1/q, each in
/// [0,1], using the budget fully. Phi is symmetric, so only nonincreasing
/// allocations are scored; they are visited in decreasing lexicographic order
/// and the first maximizer (the lexicographically greatest) is kept.
inline GridOptimum optimize_grid(std::size_t n, std::size_t r, long budget, std::uint32_t q,
                                 const GridBudget& limits = {}) {
  if (r < 1 || r > n || budget < 0 || q < 1) {
    throw std::invalid_argument("optimize_grid requires 1 <= r <= n, T >= 0 and q >= 1");
  }
  const std::size_t total = std::min<std::size_t>(static_cast<std::size_t>(budget) * q, n * q);
  GridOptimum out;
  out.denominator = q;
  out.compositions = binomial(static_cast<std::uint64_t>(budget) * q + n - 1, n - 1);
  const Integer searched = detail::count_partitions(n, q, total);
  if (searched > Integer(static_cast<unsigned long>(limits.max_candidates))) {
    throw BudgetExceeded("grid search over " + searched.get_str() + " allocations exceeds budget", 0,
                         binomial_u64(n, r));
  }

  struct Best {
    std::uint64_t phi = 0;
    std::vector<std::uint32_t> units;
    std::uint64_t searched = 0;
  };
  auto search_first = [&](std::uint32_t first) {
    Best best;
    std::vector<std::uint32_t> units(n, 0);
    units[0] = first;
    // Fill positions 1..n-1 nonincreasingly, largest values first.
    auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
      if (pos == n) {
        if (remaining != 0) return;
        ++best.searched;
        const std::uint64_t value = detail::phi_units(units, r, q);
        if (best.units.empty() || value > best.phi) {
          best.phi = value;
          best.units = units;
        }
        return;
      }
      const std::size_t cap = std::min<std::size_t>(units[pos - 1], remaining);
      if (cap * (n - pos) < remaining) return;
      for (std::size_t v = cap + 1; v-- > 0;) {
        units[pos] = static_cast<std::uint32_t>(v);
        self(self, pos + 1, remaining - v);
      }
      units[pos] = 0;
    };
    if (n == 1) {
      if (first == total) {
        best.searched = 1;
        best.units = units;
        best.phi = detail::phi_units(units, r, q);
      }
    } else {
      rec(rec, 1, total - first);
    }
    return best;
  };

  const std::uint32_t hi = static_cast<std::uint32_t>(std::min<std::size_t>(q, total));
  const std::uint32_t lo = static_cast<std::uint32_t>((total + n - 1) / n);
  std::vector<Best> parts;
  if (limits.jobs <= 1) {
    for (std::uint32_t f = hi + 1; f-- > lo;) parts.push_back(search_first(f));
  } else {
    std::vector<std::future<Best>> futures;
    for (std::uint32_t f = hi + 1; f-- > lo;) futures.push_back(std::async(std::launch::async, search_first, f));
    for (auto& f : futures) parts.push_back(f.get());
  }
  Best merged;
  for (auto& p : parts) {  // decreasing first coordinate, so strict > keeps the lex-greatest
    merged.searched += p.searched;
    if (p.units.empty()) continue;
    if (merged.units.empty() || p.phi > merged.phi) {
      merged.phi = p.phi;
      merged.units = p.units;
    }
  }
  out.candidates_searched = merged.searched;

  std::vector<Rational> x;
  for (auto u : merged.units) x.push_back(make_rational(static_cast<long>(u), static_cast<long>(q)));
  if (x.empty()) x.assign(n, Rational(0));
  for (auto& v : x) v.canonicalize();
  out.best = phi(Allocation{VertexWeighting(std::move(x)), r, budget});
  if (out.best.phi != merged.phi) throw std::logic_error("grid optimum failed re-evaluation");
  return out;
}

inline std::uint32_t default_grid_denominator(std::size_t r) { return static_cast<std::uint32_t>(2 * r); }

/// f_0^T(r,n) <= F^T(r,n) <= f_0^{T+1}(r,n), with F^T from the grid optimum.
struct StorageSandwich {
  std::uint64_t lower = 0;   // f_0^T(r,n)
  std::uint64_t value = 0;   // F^T(r,n) on the grid
  std::uint64_t upper = 0;   // f_0^{T+1}(r,n)
  bool holds = false;
};

inline StorageSandwich storage_sandwich(std::size_t n, std::size_t r, long budget, std::uint32_t q,
                                        const ThresholdBudget& threshold_budget = {}) {
  if (budget < 1) throw std::invalid_argument("sandwich requires T >= 1");
  StorageSandwich out;
  out.value = optimize_grid(n, r, budget, q).best.phi;
  out.lower = brute_force_threshold({r, n, 0, Rational(budget), ThresholdMode::fractional}, threshold_budget).value;
  out.upper =
      brute_force_threshold({r, n, 0, Rational(budget + 1), ThresholdMode::fractional}, threshold_budget).value;
  out.holds = out.lower <= out.value && out.value <= out.upper;
  return out;
}

}  // namespace hypermatch
