#pragma once

// Slow, obviously-correct oracles used to cross-check the solvers.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <vector>

#include "hypermatch/hypermatch.hpp"

namespace oracle {

using namespace hypermatch;

/// Largest set of pairwise-disjoint edges, by trying every edge subset.
inline std::size_t matching_number(const Hypergraph& h) {
  const std::size_t m = h.edge_count();
  std::size_t best = 0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << m); ++set) {
    std::uint64_t used = 0;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(set >> i & 1)) continue;
      const std::uint64_t e = vertex_mask(h.edge(i));
      ok = (used & e) == 0;
      used |= e;
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(set)));
  }
  return best;
}

/// Smallest vertex set meeting every edge, by trying every vertex subset.
inline std::size_t cover_number(const Hypergraph& h) {
  std::size_t best = h.n();
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << h.n()); ++set) {
    const bool covers = std::all_of(h.edges().begin(), h.edges().end(),
                                    [&](const Edge& e) { return (vertex_mask(e) & set) != 0; });
    if (covers) best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(set)));
  }
  return best;
}

/// Minimum over d-sets of the number of edges containing them.
inline std::uint64_t min_d_degree(const Hypergraph& h, std::size_t d) {
  std::uint64_t best = UINT64_MAX;
  for (const auto& s : all_combinations(h.n(), d)) {
    std::uint64_t count = 0;
    for (const auto& e : h.edges()) count += std::includes(e.begin(), e.end(), s.begin(), s.end());
    best = std::min(best, count);
  }
  return best;
}

/// k-sets whose weights, added as doubles-free rationals one by one, reach one.
inline std::vector<Edge> threshold_edges(const std::vector<Rational>& w, std::size_t k) {
  std::vector<Edge> out;
  for (const auto& c : all_combinations(w.size(), k)) {
    Rational sum(0);
    for (Vertex v : c) sum += w[v];
    if (sum >= 1) out.push_back(c);
  }
  return out;
}

/// Exhaustive integral threshold using the subset oracle above; tiny cases only.
inline std::uint64_t integral_threshold(std::size_t k, std::size_t n, std::size_t d, std::size_t s) {
  const auto universe = all_combinations(n, k);
  std::uint64_t best = 0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << universe.size()); ++set) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (set >> i & 1) edges.push_back(universe[i]);
    }
    const Hypergraph h(n, k, edges);
    if (oracle::matching_number(h) <= s - 1) best = std::max(best, oracle::min_d_degree(h, d));
  }
  return best + 1;
}

inline Hypergraph parse(const std::string& text) {
  std::istringstream in(text);
  return read_hypergraph(in);
}

}  // namespace oracle
