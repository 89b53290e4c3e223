#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hypermatch/hypergraph.hpp"
#include "hypermatch/rational.hpp"

namespace hypermatch {

namespace detail {

inline void require_masks(const Hypergraph& h, const char* who) {
  if (!h.has_masks()) {
    throw std::invalid_argument(std::string(who) + " supports at most 64 vertices");
  }
}

/// Maximum set packing over vertex bitmasks. Branches on the lowest
/// available vertex: either it stays unmatched or one of the edges whose
/// minimum it is gets taken. Edges are tried in lexicographic order.
class PackingSearch {
 public:
  PackingSearch(std::span<const std::uint64_t> edges, std::size_t n, std::size_t k) : k_(k), by_min_(n) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i] == 0) continue;
      by_min_[std::countr_zero(edges[i])].push_back({edges[i], i});
    }
  }

  /// Exact maximum over the vertices in `avail`, memoized on the mask.
  int solve(std::uint64_t avail) {
    if (static_cast<std::size_t>(std::popcount(avail)) < k_) return 0;
    if (auto it = memo_.find(avail); it != memo_.end()) return it->second;
    const int bound = static_cast<int>(std::popcount(avail) / k_);
    const unsigned v = static_cast<unsigned>(std::countr_zero(avail));
    const std::uint64_t rest = avail & ~(std::uint64_t{1} << v);
    int best = -1;
    for (const auto& [mask, idx] : by_min_[v]) {
      if ((mask & avail) != mask) continue;
      best = std::max(best, 1 + solve(avail & ~mask));
      if (best == bound) break;
    }
    if (best < bound) best = std::max(best, solve(rest));
    memo_.emplace(avail, best);
    return best;
  }

  /// Edge indices of a maximum packing, lexicographically first in search order.
  std::vector<std::size_t> witness(std::uint64_t avail) {
    std::vector<std::size_t> out;
    int target = solve(avail);
    while (target > 0) {
      const unsigned v = static_cast<unsigned>(std::countr_zero(avail));
      bool taken = false;
      for (const auto& [mask, idx] : by_min_[v]) {
        if ((mask & avail) != mask) continue;
        if (1 + solve(avail & ~mask) == target) {
          out.push_back(idx);
          avail &= ~mask;
          --target;
          taken = true;
          break;
        }
      }
      if (!taken) avail &= ~(std::uint64_t{1} << v);
    }
    return out;
  }

  /// Whether a packing of at least `target` edges exists. Unmemoized
  /// depth-first search with the bound taken + |avail|/k.
  bool at_least(std::uint64_t avail, int target) const {
    if (target <= 0) return true;
    if (static_cast<int>(std::popcount(avail) / k_) < target) return false;
    const unsigned v = static_cast<unsigned>(std::countr_zero(avail));
    for (const auto& [mask, idx] : by_min_[v]) {
      if ((mask & avail) == mask && at_least(avail & ~mask, target - 1)) return true;
    }
    return at_least(avail & ~(std::uint64_t{1} << v), target);
  }

 private:
  struct Entry {
    std::uint64_t mask;
    std::size_t index;
  };
  std::size_t k_;
  std::vector<std::vector<Entry>> by_min_;
  std::unordered_map<std::uint64_t, int> memo_;
};

inline std::uint64_t full_mask(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

/// Minimum vertex cover by branching on the first uncovered edge. Vertices
/// rejected in earlier branches of the same edge are forbidden later on.
class CoverSearch {
 public:
  CoverSearch(std::span<const std::uint64_t> edges, std::size_t n) : edges_(edges.begin(), edges.end()) {
    best_size_ = static_cast<int>(n) + 1;
  }

  std::uint64_t run() {
    dfs(0, 0, 0);
    return best_;
  }

 private:
  int disjoint_uncovered(std::uint64_t chosen) const {
    std::uint64_t used = 0;
    int count = 0;
    for (std::uint64_t e : edges_) {
      if ((e & chosen) == 0 && (e & used) == 0) {
        used |= e;
        ++count;
      }
    }
    return count;
  }

  void dfs(std::uint64_t chosen, std::uint64_t forbidden, int size) {
    const std::uint64_t* open = nullptr;
    for (const auto& e : edges_) {
      if ((e & chosen) == 0) {
        open = &e;
        break;
      }
    }
    if (open == nullptr) {
      if (size < best_size_) {
        best_size_ = size;
        best_ = chosen;
      }
      return;
    }
    if (size + disjoint_uncovered(chosen) >= best_size_) return;
    std::uint64_t tried = 0;
    for (std::uint64_t rest = *open; rest != 0; rest &= rest - 1) {
      const std::uint64_t bit = rest & (~rest + 1);
      if ((bit & forbidden) == 0) dfs(chosen | bit, forbidden | tried, size + 1);
      tried |= bit;
    }
  }

  std::vector<std::uint64_t> edges_;
  int best_size_;
  std::uint64_t best_ = 0;
};

}  // namespace detail

struct MatchingResult {
  std::size_t size = 0;
  std::vector<Edge> edges;
};

/// Matching number with a witnessing set of pairwise-disjoint edges.
/// Requires n <= 64.
inline MatchingResult matching_number(const Hypergraph& h) {
  detail::require_masks(h, "matching_number");
  detail::PackingSearch search(h.masks(), h.n(), h.k());
  MatchingResult out;
  for (std::size_t idx : search.witness(detail::full_mask(h.n()))) out.edges.push_back(h.edge(idx));
  out.size = out.edges.size();
  return out;
}

/// True iff k divides n and the matching number is n/k.
inline bool has_perfect_matching(const Hypergraph& h) {
  if (h.n() % h.k() != 0) return false;
  detail::require_masks(h, "has_perfect_matching");
  detail::PackingSearch search(h.masks(), h.n(), h.k());
  return search.at_least(detail::full_mask(h.n()), static_cast<int>(h.n() / h.k()));
}

struct CoverResult {
  std::size_t size = 0;
  VertexSet vertices;
};

/// Cover number with a witnessing vertex set. Requires n <= 64.
inline CoverResult cover_number(const Hypergraph& h) {
  detail::require_masks(h, "cover_number");
  detail::CoverSearch search(h.masks(), h.n());
  const std::uint64_t chosen = search.run();
  CoverResult out;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (chosen >> v & 1) out.vertices.push_back(v);
  }
  out.size = out.vertices.size();
  return out;
}

// ---------------------------------------------------------------------------
// Fractional matching LP
//
//   maximize  sum_e x_e   subject to  sum_{e ∋ v} x_e <= 1 (every v),  x >= 0
//
// solved by a revised primal simplex over exact rationals. The slack basis is
// feasible, so no phase one is needed. Entering and leaving variables follow
// Bland's rule (edges are indexed before slacks), which rules out cycling.
// The optimal duals y = c_B B^{-1} form a minimum fractional vertex cover.

struct LpSolution {
  Rational value;
  EdgeWeighting matching;
  VertexWeighting cover;
  std::size_t pivots = 0;
};

inline LpSolution solve_fractional_matching(const Hypergraph& h) {
  const std::size_t rows = h.n();
  const std::size_t m = h.edge_count();
  const std::size_t cols = m + rows;

  std::vector<std::size_t> basis(rows);
  std::vector<bool> is_basic(cols, false);
  for (std::size_t r = 0; r < rows; ++r) {
    basis[r] = m + r;
    is_basic[m + r] = true;
  }
  std::vector<Rational> inverse(rows * rows, Rational(0));
  for (std::size_t r = 0; r < rows; ++r) inverse[r * rows + r] = 1;
  std::vector<Rational> x_basic(rows, Rational(1));
  std::vector<Rational> dual(rows);
  std::vector<Rational> column(rows);
  Rational reduced, ratio, best_ratio, factor;
  std::size_t pivots = 0;

  auto compute_duals = [&] {
    for (std::size_t v = 0; v < rows; ++v) dual[v] = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (basis[r] >= m) continue;  // slack cost is zero
      const Rational* row = &inverse[r * rows];
      for (std::size_t v = 0; v < rows; ++v) {
        if (sgn(row[v]) != 0) dual[v] += row[v];
      }
    }
  };

  while (true) {
    compute_duals();
    std::size_t entering = cols;
    for (std::size_t j = 0; j < cols && entering == cols; ++j) {
      if (is_basic[j]) continue;
      if (j < m) {
        reduced = 1;
        for (Vertex v : h.edge(j)) reduced -= dual[v];
      } else {
        reduced = -dual[j - m];
      }
      if (sgn(reduced) > 0) entering = j;
    }
    if (entering == cols) break;

    for (std::size_t r = 0; r < rows; ++r) {
      const Rational* row = &inverse[r * rows];
      if (entering < m) {
        column[r] = 0;
        for (Vertex v : h.edge(entering)) column[r] += row[v];
      } else {
        column[r] = row[entering - m];
      }
    }
    std::size_t leave = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      if (sgn(column[r]) <= 0) continue;
      ratio = x_basic[r] / column[r];
      if (leave == rows || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == rows) {
      throw std::logic_error("fractional matching LP reported unbounded");
    }

    const Rational pivot = column[leave];
    Rational* prow = &inverse[leave * rows];
    for (std::size_t v = 0; v < rows; ++v) {
      if (sgn(prow[v]) != 0) prow[v] /= pivot;
    }
    x_basic[leave] /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || sgn(column[r]) == 0) continue;
      factor = column[r];
      Rational* row = &inverse[r * rows];
      for (std::size_t v = 0; v < rows; ++v) {
        if (sgn(prow[v]) != 0) row[v] -= factor * prow[v];
      }
      x_basic[r] -= factor * x_basic[leave];
    }
    is_basic[basis[leave]] = false;
    is_basic[entering] = true;
    basis[leave] = entering;
    ++pivots;
  }

  compute_duals();
  std::vector<Rational> x(m, Rational(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < m) x[basis[r]] = x_basic[r];
  }
  LpSolution out;
  out.matching = EdgeWeighting(std::move(x));
  out.cover = VertexWeighting(dual);
  out.value = out.matching.total();
  out.pivots = pivots;
  if (out.cover.total() != out.value) {
    throw std::logic_error("simplex terminated without primal/dual agreement");
  }
  return out;
}

/// The full chain nu <= nu* = tau* <= tau with a certificate for each value.
struct DualityReport {
  std::size_t nu = 0;
  Rational nu_star;
  Rational tau_star;
  std::size_t tau = 0;
  std::vector<Edge> matching_certificate;
  EdgeWeighting fractional_matching;
  VertexWeighting fractional_cover;
  VertexSet cover_certificate;
  std::size_t pivots = 0;

  bool chain_holds() const { return Rational(nu) <= nu_star && nu_star == tau_star && tau_star <= Rational(tau); }
};

inline DualityReport fractional_optimum(const Hypergraph& h) {
  DualityReport out;
  LpSolution lp = solve_fractional_matching(h);
  out.nu_star = lp.matching.total();
  out.tau_star = lp.cover.total();
  out.fractional_matching = std::move(lp.matching);
  out.fractional_cover = std::move(lp.cover);
  out.pivots = lp.pivots;
  MatchingResult nu = matching_number(h);
  out.nu = nu.size;
  out.matching_certificate = std::move(nu.edges);
  CoverResult tau = cover_number(h);
  out.tau = tau.size;
  out.cover_certificate = std::move(tau.vertices);
  if (!out.chain_holds()) {
    throw std::logic_error("duality chain violated");
  }
  return out;
}

/// Checks every certificate of a report against `h` exactly.
inline bool certificates_valid(const Hypergraph& h, const DualityReport& r) {
  // Integral matching: edges of h, pairwise disjoint, count nu.
  if (r.matching_certificate.size() != r.nu) return false;
  std::vector<bool> used(h.n(), false);
  for (const auto& e : r.matching_certificate) {
    if (!h.contains(e)) return false;
    for (Vertex v : e) {
      if (used[v]) return false;
      used[v] = true;
    }
  }
  // Fractional matching: loads <= 1, total nu*.
  if (r.fractional_matching.size() != h.edge_count() || !r.fractional_matching.is_fractional_matching(h) ||
      r.fractional_matching.total() != r.nu_star) {
    return false;
  }
  // Fractional cover: every edge weighs at least one, total tau*.
  if (r.fractional_cover.size() != h.n() || r.fractional_cover.total() != r.tau_star) return false;
  for (const auto& e : h.edges()) {
    if (r.fractional_cover.sum_over(e) < 1) return false;
  }
  // Integral cover: meets every edge, size tau.
  if (r.cover_certificate.size() != r.tau) return false;
  std::vector<bool> in_cover(h.n(), false);
  for (Vertex v : r.cover_certificate) in_cover[v] = true;
  for (const auto& e : h.edges()) {
    if (std::none_of(e.begin(), e.end(), [&](Vertex v) { return in_cover[v]; })) return false;
  }
  return true;
}

}  // namespace hypermatch
