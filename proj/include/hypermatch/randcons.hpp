#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypermatch/errors.hpp"
#include "hypermatch/hypergraph.hpp"
#include "hypermatch/optmatch.hpp"
#include "hypermatch/rational.hpp"
#include "hypermatch/rng.hpp"

namespace hypermatch {

// Two-round randomized sparsification. Round one samples vertex sets R^i;
// round two keeps each edge of H[R^i] with probability w^i(e), where w^i is a
// perfect fractional matching of H[R^i].

struct RoundOnePlan {
  std::shared_ptr<const Hypergraph> base;
  std::size_t rounds = 0;
  double p = 0.5;
  std::size_t d = 1;
  std::uint64_t seed = 0;
  double coverage_tolerance = 0.5;   // (i)  |Y_v - rounds p| <= tol * rounds p
  std::size_t pair_cap = 2;          // (ii) every pair lies in at most pair_cap sets
  double size_tolerance = 1.0 / 3;   // (iv) ||R^i| - n p| <= tol * n p
  double degree_fraction = 0.5;      // (v)  DEG_D >= fraction * C(|R^i| - d, k - d)

  void validate() const {
    if (!base) throw std::invalid_argument("round plan needs a base hypergraph");
    if (!(p > 0 && p <= 1)) throw std::invalid_argument("inclusion probability must lie in (0, 1]");
    if (d >= base->k()) throw std::invalid_argument("degree parameter d must lie in [0, k-1]");
  }

  /// p = n^-0.9 and ceil(n^1.1) rounds.
  static RoundOnePlan with_paper_exponents(std::shared_ptr<const Hypergraph> base, std::uint64_t seed) {
    RoundOnePlan plan;
    const double n = static_cast<double>(base->n());
    plan.p = std::min(1.0, std::pow(n, -0.9));
    plan.rounds = static_cast<std::size_t>(std::ceil(std::pow(n, 1.1)));
    plan.base = std::move(base);
    plan.seed = seed;
    return plan;
  }
};

struct PropertyCheck {
  std::string name;
  bool passed = true;
  std::uint64_t violations = 0;
  std::vector<std::string> witnesses;  // first few offenders

  void fail(std::string what) {
    passed = false;
    ++violations;
    if (witnesses.size() < 10) witnesses.push_back(std::move(what));
  }
};

/// Perfect fractional matching of one H[R^i], as (base edge index, weight)
/// pairs with nonzero weight.
struct RoundMatching {
  bool perfect = false;
  std::vector<std::pair<std::size_t, Rational>> support;
};

struct RoundOneOutcome {
  RoundOnePlan plan;
  std::vector<VertexSet> subsets;
  std::vector<std::uint32_t> vertex_coverage;  // Y_{v}
  std::array<PropertyCheck, 5> checks;          // (i)..(v)
  std::optional<std::vector<RoundMatching>> matchings;

  /// Y_S: number of sampled sets containing S.
  std::uint64_t coverage(std::span<const Vertex> s) const {
    std::uint64_t count = 0;
    for (const auto& r : subsets) {
      count += std::all_of(s.begin(), s.end(), [&](Vertex v) { return std::binary_search(r.begin(), r.end(), v); });
    }
    return count;
  }
  bool all_checks_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
  }
};

namespace detail {

inline std::string set_string(std::span<const Vertex> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

inline std::size_t pair_index(Vertex u, Vertex v, std::size_t n) {
  if (u > v) std::swap(u, v);
  return static_cast<std::size_t>(u) * n + v;
}

}  // namespace detail

/// Evaluates checks (i)-(v) from the stored subsets alone.
inline std::array<PropertyCheck, 5> evaluate_round_checks(const RoundOnePlan& plan,
                                                          const std::vector<VertexSet>& subsets) {
  const Hypergraph& h = *plan.base;
  const std::size_t n = h.n(), k = h.k();
  std::array<PropertyCheck, 5> checks;
  checks[0].name = "vertex_coverage";
  checks[1].name = "pair_coverage";
  checks[2].name = "edge_in_at_most_one_set";
  checks[3].name = "set_size";
  checks[4].name = "link_degree";

  std::vector<std::uint32_t> cover(n, 0);
  std::vector<std::uint32_t> pairs(n * n, 0);
  for (const auto& r : subsets) {
    for (std::size_t a = 0; a < r.size(); ++a) {
      ++cover[r[a]];
      for (std::size_t b = a + 1; b < r.size(); ++b) ++pairs[detail::pair_index(r[a], r[b], n)];
    }
  }

  const double expected_cover = static_cast<double>(subsets.size()) * plan.p;
  for (Vertex v = 0; v < n; ++v) {
    if (std::abs(cover[v] - expected_cover) > plan.coverage_tolerance * expected_cover) {
      checks[0].fail("Y_{" + std::to_string(v) + "}=" + std::to_string(cover[v]));
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const auto c = pairs[detail::pair_index(u, v, n)];
      if (c > plan.pair_cap) {
        checks[1].fail("Y_{" + std::to_string(u) + "," + std::to_string(v) + "}=" + std::to_string(c));
      }
    }
  }

  std::vector<std::vector<bool>> member(subsets.size(), std::vector<bool>(n, false));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (Vertex v : subsets[i]) member[i][v] = true;
  }
  for (const auto& e : h.edges()) {
    std::uint32_t in = 0;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      in += std::all_of(e.begin(), e.end(), [&](Vertex v) { return member[i][v]; });
    }
    if (in > 1) checks[2].fail(detail::set_string(e) + " in " + std::to_string(in) + " sets");
  }

  const double expected_size = static_cast<double>(n) * plan.p;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (std::abs(static_cast<double>(subsets[i].size()) - expected_size) > plan.size_tolerance * expected_size) {
      checks[3].fail("|R^" + std::to_string(i) + "|=" + std::to_string(subsets[i].size()));
    }
  }

  // (v): DEG_D^(i) counts edges f with D in f and f \ D inside R^i.
  const std::size_t d = plan.d;
  const BinomialTable binom(n, d);
  std::vector<std::vector<std::size_t>> through(binom(n, d));
  for (std::size_t idx = 0; idx < h.edge_count(); ++idx) {
    const Edge& e = h.edge(idx);
    for_each_combination(k, d, [&](std::span<const Vertex> pos) {
      std::uint64_t rank = 0;
      for (std::size_t j = 0; j < pos.size(); ++j) rank += binom(e[pos[j]], j + 1);
      through[rank].push_back(idx);
    });
  }
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const std::size_t size = subsets[i].size();
    const double required = size >= d ? plan.degree_fraction *
                                            binomial_signed(static_cast<long>(size - d), static_cast<long>(k - d)).get_d()
                                      : 0.0;
    for_each_combination(n, d, [&](std::span<const Vertex> dset) {
      std::uint64_t deg = 0;
      for (std::size_t idx : through[colex_rank(dset, binom)]) {
        const Edge& e = h.edge(idx);
        bool inside = true;
        for (Vertex v : e) {
          if (!member[i][v] && !std::binary_search(dset.begin(), dset.end(), v)) {
            inside = false;
            break;
          }
        }
        deg += inside;
      }
      if (static_cast<double>(deg) < required) {
        checks[4].fail("round " + std::to_string(i) + " D=" + detail::set_string(dset) + ": " + std::to_string(deg));
      }
    });
  }
  return checks;
}

inline RoundOneOutcome sample_rounds(const RoundOnePlan& plan) {
  plan.validate();
  const std::size_t n = plan.base->n();
  RoundOneOutcome out;
  out.plan = plan;
  out.vertex_coverage.assign(n, 0);
  const Rng root(plan.seed);
  for (std::size_t i = 0; i < plan.rounds; ++i) {
    Rng rng = root.split(i);
    VertexSet r;
    for (Vertex v = 0; v < n; ++v) {
      if (rng.bernoulli(plan.p)) {
        r.push_back(v);
        ++out.vertex_coverage[v];
      }
    }
    out.subsets.push_back(std::move(r));
  }
  out.checks = evaluate_round_checks(plan, out.subsets);
  return out;
}

/// Perfect fractional matching of H[R] (exact LP), mapped to base edge indices.
inline RoundMatching round_matching(const Hypergraph& base, const VertexSet& r) {
  RoundMatching out;
  if (r.empty()) {
    out.perfect = true;
    return out;
  }
  if (r.size() < base.k()) return out;
  const Hypergraph sub = induced_subhypergraph(base, r);
  const LpSolution lp = solve_fractional_matching(sub);
  if (lp.value * static_cast<long>(base.k()) != Rational(static_cast<long>(r.size()))) return out;
  out.perfect = true;
  Edge original(base.k());
  for (std::size_t j = 0; j < sub.edge_count(); ++j) {
    if (sgn(lp.matching[j]) == 0) continue;
    for (std::size_t a = 0; a < base.k(); ++a) original[a] = r[sub.edge(j)[a]];
    out.support.emplace_back(*base.index_of(original), lp.matching[j]);
  }
  return out;
}

inline std::vector<RoundMatching> solve_round_matchings(const RoundOneOutcome& outcome, std::size_t jobs = 1) {
  const Hypergraph& base = *outcome.plan.base;
  std::vector<RoundMatching> out(outcome.subsets.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = round_matching(base, outcome.subsets[i]);
    return out;
  }
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < out.size(); i += jobs) out[i] = round_matching(base, outcome.subsets[i]);
    }));
  }
  for (auto& f : workers) f.get();
  return out;
}

/// Strict follows the construction literally and needs every edge in at most
/// one sampled set. Overlapping treats each (round, edge) pair as its own
/// trial, so degrees count an edge once per round that selected it.
enum class OverlapPolicy { strict, overlapping };

struct SparseSubgraph {
  Hypergraph graph;                          // H'': union of selected edges
  std::vector<std::pair<std::size_t, std::size_t>> selections;  // (round, base edge index)
  std::vector<std::uint32_t> degree;         // D_v
  std::vector<std::uint32_t> target;         // Y_v over rounds with a perfect fractional matching
  std::vector<double> expected_degree;       // sum of selection probabilities at v
  std::vector<double> degree_variance;
  std::size_t rounds_used = 0;
  std::size_t rounds_skipped = 0;

  // Pair statistics, indexed by u * n + v with u < v.
  std::vector<std::uint32_t> pair_degree;    // D_{u,v}
  std::vector<std::uint32_t> pair_bound;     // |I_u ∩ I_v| over used rounds
  std::vector<double> pair_expected;
  std::vector<double> pair_variance;

  std::size_t n() const { return degree.size(); }
  std::uint32_t codegree(Vertex u, Vertex v) const { return pair_degree[detail::pair_index(u, v, n())]; }
};

inline SparseSubgraph build_sparse_subgraph(const RoundOneOutcome& outcome, std::uint64_t seed,
                                            OverlapPolicy policy = OverlapPolicy::strict,
                                            const std::vector<RoundMatching>* matchings = nullptr) {
  if (policy == OverlapPolicy::strict && !outcome.checks[2].passed) {
    throw AmbiguousMembership("an edge lies in several sampled sets; its round index is not unique");
  }
  std::vector<RoundMatching> computed;
  if (matchings == nullptr) {
    if (outcome.matchings) {
      matchings = &*outcome.matchings;
    } else {
      computed = solve_round_matchings(outcome);
      matchings = &computed;
    }
  }
  const Hypergraph& base = *outcome.plan.base;
  const std::size_t n = base.n();
  SparseSubgraph out{Hypergraph(n, base.k()), {}, std::vector<std::uint32_t>(n, 0), std::vector<std::uint32_t>(n, 0),
                     std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0, 0,
                     std::vector<std::uint32_t>(n * n, 0), std::vector<std::uint32_t>(n * n, 0),
                     std::vector<double>(n * n, 0.0), std::vector<double>(n * n, 0.0)};

  Rng rng(seed);
  std::vector<bool> chosen(base.edge_count(), false);
  for (std::size_t i = 0; i < outcome.subsets.size(); ++i) {
    const RoundMatching& m = (*matchings)[i];
    if (!m.perfect) {
      ++out.rounds_skipped;
      continue;
    }
    ++out.rounds_used;
    const VertexSet& r = outcome.subsets[i];
    for (std::size_t a = 0; a < r.size(); ++a) {
      ++out.target[r[a]];
      for (std::size_t b = a + 1; b < r.size(); ++b) ++out.pair_bound[detail::pair_index(r[a], r[b], n)];
    }
    for (const auto& [idx, weight] : m.support) {
      const double w = weight.get_d();
      const Edge& e = base.edge(idx);
      for (std::size_t a = 0; a < e.size(); ++a) {
        out.expected_degree[e[a]] += w;
        out.degree_variance[e[a]] += w * (1 - w);
        for (std::size_t b = a + 1; b < e.size(); ++b) {
          out.pair_expected[detail::pair_index(e[a], e[b], n)] += w;
          out.pair_variance[detail::pair_index(e[a], e[b], n)] += w * (1 - w);
        }
      }
      if (!rng.bernoulli(w)) continue;
      out.selections.emplace_back(i, idx);
      chosen[idx] = true;
      for (std::size_t a = 0; a < e.size(); ++a) {
        ++out.degree[e[a]];
        for (std::size_t b = a + 1; b < e.size(); ++b) ++out.pair_degree[detail::pair_index(e[a], e[b], n)];
      }
    }
  }
  std::vector<Edge> edges;
  for (std::size_t idx = 0; idx < chosen.size(); ++idx) {
    if (chosen[idx]) edges.push_back(base.edge(idx));
  }
  out.graph = Hypergraph(n, base.k(), std::move(edges));
  return out;
}

/// Round two repeated with seeds derive_seed(seed, rep + 1): empirical mean
/// degrees against Y_v and mean codegrees against |I_u ∩ I_v|, each with a
/// margin of `sigmas` standard errors of the mean.
struct RepetitionSummary {
  std::size_t repetitions = 0;
  std::vector<double> mean_degree;
  std::vector<double> mean_pair_degree;  // indexed like SparseSubgraph::pair_degree
  std::size_t vertices_within = 0;
  std::size_t pair_failures = 0;
  std::size_t rounds_used = 0;
  std::size_t rounds_skipped = 0;
};

inline RepetitionSummary repeat_round_two(const RoundOneOutcome& outcome, const std::vector<RoundMatching>& matchings,
                                          std::uint64_t seed, std::size_t repetitions, OverlapPolicy policy,
                                          double sigmas = 3.0) {
  if (repetitions < 1) throw std::invalid_argument("need at least one repetition");
  const std::size_t n = outcome.plan.base->n();
  RepetitionSummary out;
  out.repetitions = repetitions;
  out.mean_degree.assign(n, 0.0);
  out.mean_pair_degree.assign(n * n, 0.0);
  std::optional<SparseSubgraph> last;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    last = build_sparse_subgraph(outcome, derive_seed(seed, rep + 1), policy, &matchings);
    for (std::size_t v = 0; v < n; ++v) out.mean_degree[v] += last->degree[v];
    for (std::size_t i = 0; i < n * n; ++i) out.mean_pair_degree[i] += last->pair_degree[i];
  }
  const double reps = static_cast<double>(repetitions);
  for (auto& x : out.mean_degree) x /= reps;
  for (auto& x : out.mean_pair_degree) x /= reps;
  out.rounds_used = last->rounds_used;
  out.rounds_skipped = last->rounds_skipped;
  // The 1e-9 slack absorbs rounding when the variance is zero.
  for (std::size_t v = 0; v < n; ++v) {
    const double sigma = std::sqrt(last->degree_variance[v] / reps);
    out.vertices_within += std::abs(out.mean_degree[v] - last->target[v]) <= sigmas * sigma + 1e-9;
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const std::size_t i = detail::pair_index(u, v, n);
      const double sigma = std::sqrt(last->pair_variance[i] / reps);
      out.pair_failures += out.mean_pair_degree[i] > last->pair_bound[i] + sigmas * sigma + 1e-9;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Near-regularity hypotheses for an almost perfect matching.

struct NearRegularityReport {
  bool passed = false;
  std::vector<Vertex> degree_violators;
  std::uint64_t max_codegree = 0;
  bool codegree_ok = false;
};

/// Every degree strictly inside ((1 - tau) D, (1 + tau) D) and max 2-degree < tau D.
inline NearRegularityReport check_near_regularity(const Hypergraph& h, double degree_target, double tau) {
  if (!(degree_target > 0) || !(tau > 0)) {
    throw std::invalid_argument("near-regularity check requires D > 0 and tau > 0");
  }
  NearRegularityReport out;
  std::vector<std::uint64_t> deg(h.n(), 0);
  std::unordered_map<std::uint64_t, std::uint64_t> codeg;
  for (const auto& e : h.edges()) {
    for (std::size_t a = 0; a < e.size(); ++a) {
      ++deg[e[a]];
      for (std::size_t b = a + 1; b < e.size(); ++b) {
        out.max_codegree = std::max(out.max_codegree, ++codeg[std::uint64_t{e[a]} << 32 | e[b]]);
      }
    }
  }
  for (Vertex v = 0; v < h.n(); ++v) {
    const double dv = static_cast<double>(deg[v]);
    if (!(dv > (1 - tau) * degree_target && dv < (1 + tau) * degree_target)) out.degree_violators.push_back(v);
  }
  out.codegree_ok = static_cast<double>(out.max_codegree) < tau * degree_target;
  out.passed = out.degree_violators.empty() && out.codegree_ok;
  return out;
}

// ---------------------------------------------------------------------------
// Chernoff-type tail bounds.

/// P(|X - EX| >= alpha EX) <= 2 exp(-alpha^2 EX / 3), for alpha <= 3/2.
inline double chernoff_small(double expectation, double alpha) {
  if (alpha > 1.5) throw std::invalid_argument("small-deviation bound requires alpha <= 3/2");
  if (alpha < 0 || expectation < 0) throw std::invalid_argument("small-deviation bound requires alpha, EX >= 0");
  return 2.0 * std::exp(-alpha * alpha * expectation / 3.0);
}

/// P(|Bi(n,p) - np| >= lambda) <= exp(-lambda^2 / (3 n p)), for lambda < 3np/2.
inline double chernoff_binomial(double trials, double p, double lambda) {
  const double mean = trials * p;
  if (!(mean > 0)) throw std::invalid_argument("binomial bound requires np > 0");
  if (!(lambda < 1.5 * mean)) throw std::invalid_argument("binomial bound requires lambda < 3/2 np");
  return std::exp(-lambda * lambda / (3.0 * mean));
}

/// P(X >= x) <= exp(-x), for x >= 7 EX.
inline double chernoff_large(double expectation, double x) {
  if (!(x >= 7.0 * expectation)) throw std::invalid_argument("large-deviation bound requires x >= 7 EX");
  return std::exp(-x);
}

}  // namespace hypermatch
