#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hypermatch/rational.hpp"
#include "hypermatch/rng.hpp"

namespace hypermatch {

using Vertex = std::uint32_t;
using Edge = std::vector<Vertex>;
using VertexSet = std::vector<Vertex>;

/// Visits every r-subset of {0..n-1} in lexicographic order. The callback
/// receives a sorted span; returning false from a bool-returning callback
/// stops the walk early.
template <class Fn>
void for_each_combination(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<Vertex> c(r);
  for (std::size_t i = 0; i < r; ++i) c[i] = static_cast<Vertex>(i);
  while (true) {
    if constexpr (std::is_same_v<decltype(fn(std::span<const Vertex>(c))), bool>) {
      if (!fn(std::span<const Vertex>(c))) return;
    } else {
      fn(std::span<const Vertex>(c));
    }
    std::size_t i = r;
    while (i > 0 && c[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < r; ++j) c[j] = c[j - 1] + 1;
  }
}

inline std::vector<Edge> all_combinations(std::size_t n, std::size_t r) {
  std::vector<Edge> out;
  for_each_combination(n, r, [&](std::span<const Vertex> c) { out.emplace_back(c.begin(), c.end()); });
  return out;
}

/// Pascal triangle of 64-bit binomials, C(i, j) for i <= n, j <= r.
class BinomialTable {
 public:
  BinomialTable(std::size_t n, std::size_t r) : r_(r), table_((n + 1) * (r + 1), 0) {
    for (std::size_t i = 0; i <= n; ++i) {
      at(i, 0) = 1;
      for (std::size_t j = 1; j <= std::min(i, r); ++j) {
        at(i, j) = (j == i ? 1 : at(i - 1, j - 1) + at(i - 1, j));
      }
    }
  }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return table_[i * (r_ + 1) + j]; }

 private:
  std::uint64_t& at(std::size_t i, std::size_t j) { return table_[i * (r_ + 1) + j]; }
  std::size_t r_;
  std::vector<std::uint64_t> table_;
};

/// Colexicographic rank of a sorted subset; a bijection onto [0, C(n, |S|)).
inline std::uint64_t colex_rank(std::span<const Vertex> sorted, const BinomialTable& binom) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) rank += binom(sorted[i], i + 1);
  return rank;
}

inline std::uint64_t vertex_mask(std::span<const Vertex> vs) {
  std::uint64_t m = 0;
  for (Vertex v : vs) m |= std::uint64_t{1} << v;
  return m;
}

/// A k-uniform hypergraph on vertices 0..n-1. Edges are sorted tuples kept in
/// lexicographic order without duplicates; instances are immutable.
class Hypergraph {
 public:
  Hypergraph(std::size_t n, std::size_t k) : n_(n), k_(k) { check_shape(); }

  Hypergraph(std::size_t n, std::size_t k, std::vector<Edge> edges) : n_(n), k_(k), edges_(std::move(edges)) {
    check_shape();
    for (auto& e : edges_) {
      std::sort(e.begin(), e.end());
      if (e.size() != k_) {
        throw std::invalid_argument("edge has " + std::to_string(e.size()) + " vertices, expected " +
                                    std::to_string(k_));
      }
      if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
        throw std::invalid_argument("edge repeats a vertex");
      }
      if (e.back() >= n_) {
        throw std::invalid_argument("edge vertex " + std::to_string(e.back()) + " out of range");
      }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw std::invalid_argument("duplicate edge");
    }
    build_masks();
  }

  static Hypergraph complete(std::size_t n, std::size_t k) { return Hypergraph(n, k, all_combinations(n, k)); }

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }

  /// Vertex bitmasks of the edges; available only when n <= 64.
  bool has_masks() const { return n_ <= 64; }
  std::span<const std::uint64_t> masks() const { return masks_; }

  std::optional<std::size_t> index_of(std::span<const Vertex> sorted_edge) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), sorted_edge,
                               [](const Edge& a, std::span<const Vertex> b) {
                                 return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                               });
    if (it != edges_.end() && std::equal(it->begin(), it->end(), sorted_edge.begin(), sorted_edge.end())) {
      return static_cast<std::size_t>(it - edges_.begin());
    }
    return std::nullopt;
  }
  bool contains(std::span<const Vertex> sorted_edge) const { return index_of(sorted_edge).has_value(); }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.edges_ == b.edges_;
  }

 private:
  void check_shape() const {
    if (k_ < 1 || k_ > n_) {
      throw std::invalid_argument("uniformity must satisfy 1 <= k <= n (k=" + std::to_string(k_) +
                                  ", n=" + std::to_string(n_) + ")");
    }
  }
  void build_masks() {
    if (n_ > 64) return;
    masks_.reserve(edges_.size());
    for (const auto& e : edges_) masks_.push_back(vertex_mask(e));
  }

  std::size_t n_;
  std::size_t k_;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> masks_;
};

/// Exact weight in [0,1] per vertex.
class VertexWeighting {
 public:
  VertexWeighting() = default;
  explicit VertexWeighting(std::vector<Rational> weights) : weights_(std::move(weights)) {
    for (const auto& w : weights_) {
      if (w < 0 || w > 1) {
        throw std::invalid_argument("vertex weight " + to_string(w) + " outside [0,1]");
      }
    }
  }
  static VertexWeighting uniform(std::size_t n, const Rational& value) {
    return VertexWeighting(std::vector<Rational>(n, value));
  }

  std::size_t size() const { return weights_.size(); }
  const Rational& operator[](std::size_t v) const { return weights_[v]; }
  const std::vector<Rational>& values() const { return weights_; }

  Rational total() const {
    Rational sum(0);
    for (const auto& w : weights_) sum += w;
    return sum;
  }
  Rational sum_over(std::span<const Vertex> vs) const {
    Rational sum(0);
    for (Vertex v : vs) sum += weights_[v];
    return sum;
  }

  friend bool operator==(const VertexWeighting&, const VertexWeighting&) = default;

 private:
  std::vector<Rational> weights_;
};

/// Exact weight in [0,1] per edge of an associated hypergraph (same order as
/// Hypergraph::edges()).
class EdgeWeighting {
 public:
  EdgeWeighting() = default;
  explicit EdgeWeighting(std::vector<Rational> weights) : weights_(std::move(weights)) {
    for (const auto& w : weights_) {
      if (w < 0 || w > 1) {
        throw std::invalid_argument("edge weight " + to_string(w) + " outside [0,1]");
      }
    }
  }

  std::size_t size() const { return weights_.size(); }
  const Rational& operator[](std::size_t e) const { return weights_[e]; }
  const std::vector<Rational>& values() const { return weights_; }

  Rational total() const {
    Rational sum(0);
    for (const auto& w : weights_) sum += w;
    return sum;
  }

  /// Per-vertex sums of incident edge weights.
  std::vector<Rational> loads(const Hypergraph& h) const {
    if (h.edge_count() != weights_.size()) {
      throw std::invalid_argument("edge weighting does not match hypergraph");
    }
    std::vector<Rational> load(h.n(), Rational(0));
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] == 0) continue;
      for (Vertex v : h.edge(i)) load[v] += weights_[i];
    }
    return load;
  }

  /// True when every vertex load is at most one.
  bool is_fractional_matching(const Hypergraph& h) const {
    for (const auto& l : loads(h)) {
      if (l > 1) return false;
    }
    return true;
  }

 private:
  std::vector<Rational> weights_;
};

namespace detail {

inline VertexSet checked_subset(const Hypergraph& h, std::span<const Vertex> s) {
  VertexSet out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw std::invalid_argument("vertex subset repeats a vertex");
  }
  if (!out.empty() && out.back() >= h.n()) {
    throw std::invalid_argument("vertex " + std::to_string(out.back()) + " out of range");
  }
  return out;
}

}  // namespace detail

/// Number of edges containing S.
inline std::uint64_t degree(const Hypergraph& h, std::span<const Vertex> s) {
  if (s.size() > h.k()) {
    throw std::invalid_argument("degree: |S| exceeds the uniformity");
  }
  const VertexSet sorted = detail::checked_subset(h, s);
  if (h.has_masks()) {
    const std::uint64_t m = vertex_mask(sorted);
    std::uint64_t count = 0;
    for (std::uint64_t e : h.masks()) count += ((e & m) == m);
    return count;
  }
  std::uint64_t count = 0;
  for (const auto& e : h.edges()) {
    count += std::includes(e.begin(), e.end(), sorted.begin(), sorted.end());
  }
  return count;
}

/// deg(S) for every d-set S, indexed by colex rank.
inline std::vector<std::uint64_t> d_degree_table(const Hypergraph& h, std::size_t d) {
  if (d >= h.k()) {
    throw std::invalid_argument("d must lie in [0, k-1]");
  }
  const BinomialTable binom(h.n(), d);
  std::vector<std::uint64_t> table(binom(h.n(), d), 0);
  for (const auto& e : h.edges()) {
    for_each_combination(h.k(), d, [&](std::span<const Vertex> pos) {
      std::uint64_t rank = 0;
      for (std::size_t i = 0; i < pos.size(); ++i) rank += binom(e[pos[i]], i + 1);
      ++table[rank];
    });
  }
  return table;
}

/// Minimum d-degree; d = 0 gives the edge count.
inline std::uint64_t min_d_degree(const Hypergraph& h, std::size_t d) {
  if (d >= h.k()) {
    throw std::invalid_argument("min_d_degree: d must lie in [0, k-1]");
  }
  if (d == 0) return h.edge_count();
  const auto table = d_degree_table(h, d);
  return *std::min_element(table.begin(), table.end());
}

/// The (k-|L|)-graph of edge remainders over L on V \ L. Surviving vertices
/// keep their relative order: the i-th smallest vertex outside L becomes i.
inline Hypergraph link(const Hypergraph& h, std::span<const Vertex> l) {
  if (l.empty() || l.size() >= h.k()) {
    throw std::invalid_argument("link: |L| must lie in [1, k-1]");
  }
  const VertexSet sorted = detail::checked_subset(h, l);
  std::vector<Vertex> relabel(h.n(), std::numeric_limits<Vertex>::max());
  Vertex next = 0;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (!std::binary_search(sorted.begin(), sorted.end(), v)) relabel[v] = next++;
  }
  std::vector<Edge> edges;
  for (const auto& e : h.edges()) {
    if (!std::includes(e.begin(), e.end(), sorted.begin(), sorted.end())) continue;
    Edge rest;
    rest.reserve(e.size() - sorted.size());
    for (Vertex v : e) {
      if (relabel[v] != std::numeric_limits<Vertex>::max()) rest.push_back(relabel[v]);
    }
    edges.push_back(std::move(rest));
  }
  return Hypergraph(h.n() - sorted.size(), h.k() - sorted.size(), std::move(edges));
}

/// Sub-hypergraph induced on `vertices`, relabeled order-preservingly to
/// 0..|vertices|-1. Requires |vertices| >= k.
inline Hypergraph induced_subhypergraph(const Hypergraph& h, std::span<const Vertex> vertices) {
  const VertexSet sorted = detail::checked_subset(h, vertices);
  std::vector<Vertex> relabel(h.n(), std::numeric_limits<Vertex>::max());
  for (std::size_t i = 0; i < sorted.size(); ++i) relabel[sorted[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (const auto& e : h.edges()) {
    bool inside = std::all_of(e.begin(), e.end(), [&](Vertex v) { return relabel[v] != std::numeric_limits<Vertex>::max(); });
    if (!inside) continue;
    Edge mapped;
    mapped.reserve(e.size());
    for (Vertex v : e) mapped.push_back(relabel[v]);
    edges.push_back(std::move(mapped));
  }
  return Hypergraph(sorted.size(), h.k(), std::move(edges));
}

/// All k-sets whose weight reaches one.
inline Hypergraph threshold_hypergraph(const VertexWeighting& w, std::size_t k) {
  // Scale to a common denominator so the comparison is an integer sum.
  Integer common(1);
  for (const auto& x : w.values()) {
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), x.get_den_mpz_t());
  }
  std::vector<Integer> units;
  units.reserve(w.size());
  for (const auto& x : w.values()) units.push_back(x.get_num() * (common / x.get_den()));

  std::vector<Edge> edges;
  Integer sum;
  for_each_combination(w.size(), k, [&](std::span<const Vertex> c) {
    sum = 0;
    for (Vertex v : c) sum += units[v];
    if (sum >= common) edges.emplace_back(c.begin(), c.end());
  });
  return Hypergraph(w.size(), k, std::move(edges));
}

/// Each k-subset of {0..n-1} becomes an edge independently with probability `density`.
inline Hypergraph random_hypergraph(std::size_t n, std::size_t k, double density, Rng& rng) {
  std::vector<Edge> edges;
  for_each_combination(n, k, [&](std::span<const Vertex> c) {
    if (rng.bernoulli(density)) edges.emplace_back(c.begin(), c.end());
  });
  return Hypergraph(n, k, std::move(edges));
}

// ---------------------------------------------------------------------------
// Text formats.
//
// .hg: first non-comment line "k n", then one edge per line as k 0-based
// vertex indices. Lines starting with '#' and blank lines are ignored.
// .wt: one rational per line ("p/q" or a decimal literal). Writers emit
// reduced "p/q".

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace detail

inline Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!detail::next_content_line(in, line, line_no)) {
    throw std::invalid_argument("hypergraph file: missing 'k n' header");
  }
  std::size_t k = 0, n = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> k >> n) || (header >> extra)) {
      throw std::invalid_argument("hypergraph file: malformed header on line " + std::to_string(line_no));
    }
  }
  std::vector<Edge> edges;
  while (detail::next_content_line(in, line, line_no)) {
    std::istringstream row(line);
    Edge e;
    long long v;
    while (row >> v) {
      if (v < 0) throw std::invalid_argument("hypergraph file: negative vertex on line " + std::to_string(line_no));
      e.push_back(static_cast<Vertex>(v));
    }
    if (!row.eof()) {
      throw std::invalid_argument("hypergraph file: non-numeric token on line " + std::to_string(line_no));
    }
    if (e.size() != k) {
      throw std::invalid_argument("hypergraph file: line " + std::to_string(line_no) + " has " +
                                  std::to_string(e.size()) + " vertices, expected " + std::to_string(k));
    }
    edges.push_back(std::move(e));
  }
  return Hypergraph(n, k, std::move(edges));
}

inline void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.k() << ' ' << h.n() << '\n';
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

inline std::vector<Rational> read_rationals(std::istream& in) {
  std::vector<Rational> out;
  std::string line;
  std::size_t line_no = 0;
  while (detail::next_content_line(in, line, line_no)) {
    try {
      out.push_back(parse_rational(line));
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument("weighting file line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return out;
}

inline VertexWeighting read_weighting(std::istream& in) { return VertexWeighting(read_rationals(in)); }

inline void write_weighting(std::ostream& out, std::span<const Rational> weights) {
  for (const auto& w : weights) out << to_string(w) << '\n';
}

inline void write_weighting(std::ostream& out, const VertexWeighting& w) { write_weighting(out, w.values()); }

}  // namespace hypermatch
