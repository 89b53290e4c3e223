#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypermatch/errors.hpp"
#include "hypermatch/hypergraph.hpp"
#include "hypermatch/rational.hpp"

namespace hypermatch {

/// Size of the odd-intersection side A used by construct_h0: among sizes a
/// with |a - (n - a)| <= 2 whose parity differs from n/k, the one closest to
/// n/2, then the smaller.
inline std::size_t h0_side_size(std::size_t k, std::size_t n) {
  if (k < 2 || n < k || n % k != 0) {
    throw std::invalid_argument("construct_h0 requires k >= 2, n >= k and k | n");
  }
  const std::size_t parts = n / k;
  std::optional<std::size_t> best;
  for (std::size_t a = 0; a <= n; ++a) {
    const long gap = std::labs(static_cast<long>(2 * a) - static_cast<long>(n));
    if (gap > 2 || a % 2 == parts % 2) continue;
    if (!best || std::labs(static_cast<long>(2 * a) - static_cast<long>(n)) <
                     std::labs(static_cast<long>(2 * *best) - static_cast<long>(n))) {
      best = a;
    }
  }
  if (!best) {
    throw ConstructionInfeasible("construct_h0: no side size with the required parity");
  }
  return *best;
}

/// All k-sets meeting A = {0..a-1} in an odd number of vertices.
inline Hypergraph construct_h0(std::size_t k, std::size_t n) {
  const std::size_t a = h0_side_size(k, n);
  std::vector<Edge> edges;
  for_each_combination(n, k, [&](std::span<const Vertex> c) {
    std::size_t inside = 0;
    for (Vertex v : c) inside += (v < a);
    if (inside % 2 == 1) edges.emplace_back(c.begin(), c.end());
  });
  return Hypergraph(n, k, std::move(edges));
}

/// All k-sets meeting {0..s-2}, i.e. K_n minus the clique on the other n-s+1.
inline Hypergraph construct_h1(std::size_t k, std::size_t n, std::size_t s) {
  if (k < 1 || k > n || s < 1 || k * (s - 1) > n) {
    throw std::invalid_argument("construct_h1 requires 1 <= k <= n and 1 <= s <= n/k + 1");
  }
  const Vertex core = static_cast<Vertex>(s - 1);
  std::vector<Edge> edges;
  for_each_combination(n, k, [&](std::span<const Vertex> c) {
    if (c.front() < core) edges.emplace_back(c.begin(), c.end());
  });
  return Hypergraph(n, k, std::move(edges));
}

/// Complete k-graph on {0..ks-2}; the remaining vertices are isolated.
inline Hypergraph construct_clique_plus_isolated(std::size_t k, std::size_t n, std::size_t s) {
  if (k < 1 || k > n || s < 1 || k * s - 1 > n) {
    throw std::invalid_argument("construct_clique_plus_isolated requires ks - 1 <= n");
  }
  const std::size_t size = k * s - 1;
  std::vector<Edge> edges;
  for_each_combination(size, k, [&](std::span<const Vertex> c) { edges.emplace_back(c.begin(), c.end()); });
  return Hypergraph(n, k, std::move(edges));
}

// ---------------------------------------------------------------------------
// Threshold formulas.

enum class ConjectureContext {
  eq3,             // integral lower bound from H0 and H1(n/k)
  eq4,             // fractional lower bound from H1(ceil(n/k))
  conj_1_2,        // m_d(k,n) ~ max{1/2, 1-((k-1)/k)^(k-d)} C(n-d,k-d)
  conj_1_5,        // f_d(k,n) ~ (1-((k-1)/k)^(k-d)) C(n-d,k-d)
  conj_1_8,        // Erdos matching conjecture, exact count
  conj_1_9,        // fractional Erdos conjecture, exact count
  cor_1_7,         // asymptotic coefficients established for k-4 <= d <= k-1
  f_top_exact,     // f_{k-1}(k,n) = ceil(n/k)
};

inline std::string_view context_name(ConjectureContext c) {
  switch (c) {
    case ConjectureContext::eq3: return "Eq3";
    case ConjectureContext::eq4: return "Eq4";
    case ConjectureContext::conj_1_2: return "Conj1.2";
    case ConjectureContext::conj_1_5: return "Conj1.5";
    case ConjectureContext::conj_1_8: return "Conj1.8";
    case ConjectureContext::conj_1_9: return "Conj1.9";
    case ConjectureContext::cor_1_7: return "Cor1.7";
    case ConjectureContext::f_top_exact: return "f_{k-1}-exact";
  }
  return "?";
}

inline ConjectureContext parse_context(std::string_view name) {
  for (auto c : {ConjectureContext::eq3, ConjectureContext::eq4, ConjectureContext::conj_1_2,
                 ConjectureContext::conj_1_5, ConjectureContext::conj_1_8, ConjectureContext::conj_1_9,
                 ConjectureContext::cor_1_7, ConjectureContext::f_top_exact}) {
    if (context_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown conjecture context '" + std::string(name) + "'");
}

/// Parameters shared by all contexts. For the fractional Erdos context, k plays the
/// role of l and n of m; s may be fractional there.
struct ConjectureParameters {
  std::optional<std::size_t> k;
  std::optional<std::size_t> d;
  std::optional<std::size_t> n;
  std::optional<Rational> s;
};

struct ConjectureValue {
  ConjectureContext context;
  ConjectureParameters parameters;
  std::optional<Rational> coefficient;
  std::optional<Integer> count;
};

/// 1 - ((k-1)/k)^(k-d)
inline Rational h1_coefficient(std::size_t k, std::size_t d) {
  return Rational(1) - pow(make_rational(static_cast<long>(k - 1), static_cast<long>(k)), static_cast<unsigned>(k - d));
}

namespace detail {

inline std::size_t need(const std::optional<std::size_t>& v, const char* name, ConjectureContext c) {
  if (!v) {
    throw std::invalid_argument(std::string(context_name(c)) + " requires parameter " + name);
  }
  return *v;
}

inline void require_kd(std::size_t k, std::size_t d, std::size_t d_min, ConjectureContext c) {
  if (k < 2 || d < d_min || d > k - 1) {
    throw std::invalid_argument(std::string(context_name(c)) + ": need k >= 2 and " + std::to_string(d_min) +
                                " <= d <= k-1");
  }
}

}  // namespace detail

inline ConjectureValue conjecture_values(ConjectureContext context, const ConjectureParameters& p) {
  ConjectureValue out{context, p, std::nullopt, std::nullopt};
  switch (context) {
    case ConjectureContext::eq3:
    case ConjectureContext::conj_1_2: {
      const std::size_t k = detail::need(p.k, "k", context);
      const std::size_t d = detail::need(p.d, "d", context);
      detail::require_kd(k, d, context == ConjectureContext::eq3 ? 0 : 1, context);
      out.coefficient = std::max(make_rational(1, 2), h1_coefficient(k, d));
      if (context == ConjectureContext::eq3 && p.n) {
        const std::size_t n = *p.n;
        if (n % k != 0 || n < k) {
          throw std::invalid_argument("Eq3 count requires k | n");
        }
        const auto h0 = construct_h0(k, n);
        const auto h1 = construct_h1(k, n, n / k);
        out.count = Integer(static_cast<unsigned long>(std::max(min_d_degree(h0, d), min_d_degree(h1, d)) + 1));
      }
      break;
    }
    case ConjectureContext::eq4:
    case ConjectureContext::conj_1_5: {
      const std::size_t k = detail::need(p.k, "k", context);
      const std::size_t d = detail::need(p.d, "d", context);
      detail::require_kd(k, d, context == ConjectureContext::eq4 ? 0 : 1, context);
      out.coefficient = h1_coefficient(k, d);
      if (context == ConjectureContext::eq4 && p.n) {
        const std::size_t n = *p.n;
        if (n < k) throw std::invalid_argument("Eq4 count requires n >= k");
        const auto h1 = construct_h1(k, n, (n + k - 1) / k);
        out.count = Integer(static_cast<unsigned long>(min_d_degree(h1, d) + 1));
      }
      break;
    }
    case ConjectureContext::cor_1_7: {
      const std::size_t k = detail::need(p.k, "k", context);
      const std::size_t d = detail::need(p.d, "d", context);
      if (k < 3 || d < 1 || d > k - 1 || d + 4 < k) {
        throw std::invalid_argument("Cor1.7 covers k >= 3 and max(1, k-4) <= d <= k-1");
      }
      out.coefficient = std::max(make_rational(1, 2), h1_coefficient(k, d));
      break;
    }
    case ConjectureContext::conj_1_8: {
      const std::size_t k = detail::need(p.k, "k", context);
      const std::size_t n = detail::need(p.n, "n", context);
      if (!p.s || !is_integer(*p.s)) throw std::invalid_argument("Conj1.8 requires an integer s");
      const long s = to_long(p.s->get_num());
      if (k < 2 || s < 1 || static_cast<std::size_t>(s) * k > n) {
        throw std::invalid_argument("Conj1.8 requires k >= 2 and 1 <= s <= n/k");
      }
      const long kk = static_cast<long>(k), nn = static_cast<long>(n);
      const Integer clique = binomial_signed(kk * s - 1, kk);
      const Integer star = binomial_signed(nn, kk) - binomial_signed(nn - s + 1, kk);
      out.count = std::max(clique, star) + 1;
      break;
    }
    case ConjectureContext::conj_1_9: {
      const std::size_t l = detail::need(p.k, "k (l)", context);
      const std::size_t m = detail::need(p.n, "n (m)", context);
      if (!p.s) throw std::invalid_argument("Conj1.9 requires s");
      const Rational& s = *p.s;
      if (l < 2 || s < 0 || s * static_cast<long>(l) > Rational(static_cast<long>(m))) {
        throw std::invalid_argument("Conj1.9 requires l >= 2 and 0 <= s <= m/l");
      }
      const long ll = static_cast<long>(l), mm = static_cast<long>(m);
      const long ls_up = to_long(ceil(s * ll));
      const long s_up = to_long(ceil(s));
      const Integer clique = binomial_signed(ls_up - 1, ll);
      const Integer star = binomial_signed(mm, ll) - binomial_signed(mm - s_up + 1, ll);
      out.count = std::max(clique, star) + 1;
      break;
    }
    case ConjectureContext::f_top_exact: {
      const std::size_t k = detail::need(p.k, "k", context);
      const std::size_t n = detail::need(p.n, "n", context);
      if (k < 2 || n < k) throw std::invalid_argument("f_{k-1}-exact requires 2 <= k <= n");
      out.count = Integer(static_cast<unsigned long>((n + k - 1) / k));
      break;
    }
  }
  return out;
}

}  // namespace hypermatch
