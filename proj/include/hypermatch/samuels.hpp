#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypermatch/hypergraph.hpp"
#include "hypermatch/rational.hpp"
#include "hypermatch/rng.hpp"

namespace hypermatch {

/// Expectations 0 <= mu_1 <= ... <= mu_l with sum below one.
class SamuelsQuery {
 public:
  explicit SamuelsQuery(std::vector<Rational> mus) : mus_(std::move(mus)) {
    if (mus_.empty()) throw std::invalid_argument("Samuels query needs l >= 1");
    Rational sum(0);
    for (std::size_t i = 0; i < mus_.size(); ++i) {
      if (mus_[i] < 0) throw std::invalid_argument("expectations must be nonnegative");
      if (i > 0 && mus_[i] < mus_[i - 1]) throw std::invalid_argument("expectations must be nondecreasing");
      sum += mus_[i];
    }
    if (sum >= 1) throw std::invalid_argument("expectations must sum to less than one");
  }

  static SamuelsQuery uniform(std::size_t l, const Rational& x) { return SamuelsQuery(std::vector<Rational>(l, x)); }

  std::size_t arity() const { return mus_.size(); }
  const std::vector<Rational>& mus() const { return mus_; }
  const Rational& operator[](std::size_t i) const { return mus_[i]; }

  Rational prefix_sum(std::size_t t) const {
    Rational sum(0);
    for (std::size_t i = 0; i < t; ++i) sum += mus_[i];
    return sum;
  }

 private:
  std::vector<Rational> mus_;
};

/// The first t variables are constant at their mean; each later one is
/// two-point on {0, 1 - sum_{j<=t} mu_j} with the prescribed mean.
class TwoPointFamily {
 public:
  TwoPointFamily(SamuelsQuery query, std::size_t t) : query_(std::move(query)), t_(t) {
    if (t_ >= query_.arity()) throw std::invalid_argument("two-point family needs 0 <= t < l");
    high_ = Rational(1) - query_.prefix_sum(t_);
    if (sgn(high_) <= 0) throw std::invalid_argument("prefix of expectations reaches one");
    for (std::size_t i = t_; i < query_.arity(); ++i) {
      Rational p = query_[i] / high_;
      if (p < 0 || p > 1) {
        throw std::invalid_argument("success probability " + to_string(p) + " outside [0,1]");
      }
      probabilities_.push_back(std::move(p));
    }
  }

  const SamuelsQuery& query() const { return query_; }
  std::size_t t() const { return t_; }
  /// Nonzero value of each two-point variable.
  const Rational& high_value() const { return high_; }
  /// P(X_i = high) for i = t+1..l.
  const std::vector<Rational>& success_probabilities() const { return probabilities_; }

  /// Exact mean of coordinate i (0-based).
  Rational mean(std::size_t i) const { return i < t_ ? query_[i] : probabilities_[i - t_] * high_; }

 private:
  SamuelsQuery query_;
  std::size_t t_;
  Rational high_;
  std::vector<Rational> probabilities_;
};

/// Q_t = prod_{i>t} (1 - mu_i / (1 - sum_{j<=t} mu_j)), exact.
inline Rational q_t(const SamuelsQuery& query, std::size_t t) {
  const TwoPointFamily family(query, t);
  Rational out(1);
  for (const auto& p : family.success_probabilities()) out *= Rational(1) - p;
  return out;
}

struct QMin {
  Rational value;
  std::size_t argmin = 0;
};

/// min over t of Q_t with the smallest minimizing t.
inline QMin q_min(const SamuelsQuery& query) {
  QMin out{q_t(query, 0), 0};
  for (std::size_t t = 1; t < query.arity(); ++t) {
    Rational q = q_t(query, t);
    if (q < out.value) out = {std::move(q), t};
  }
  return out;
}

/// Whether the uniform query with mean x has its minimum at t = 0 with value (1-x)^l.
inline bool prop23_check(std::size_t l, const Rational& x) {
  if (l < 2) throw std::invalid_argument("prop23_check requires l >= 2");
  if (sgn(x) <= 0 || x * static_cast<long>(l) >= 1) throw std::invalid_argument("prop23_check requires 0 < x < 1/l");
  const QMin m = q_min(SamuelsQuery::uniform(l, x));
  return m.argmin == 0 && m.value == pow(Rational(1) - x, static_cast<unsigned>(l));
}

// ---------------------------------------------------------------------------
// Floating-point boundary scan for the uniform case.

/// Q_t for uniform mean x in double precision: ((1-(t+1)x)/(1-tx))^(l-t).
inline double q_t_uniform(std::size_t l, double x, std::size_t t) {
  const double td = static_cast<double>(t);
  return std::pow((1.0 - (td + 1.0) * x) / (1.0 - td * x), static_cast<double>(l - t));
}

inline double min_q_positive_t(std::size_t l, double x) {
  double best = q_t_uniform(l, x, 1);
  for (std::size_t t = 2; t < l; ++t) best = std::min(best, q_t_uniform(l, x, t));
  return best;
}

struct ScanSample {
  double x;
  double q0;
  double min_other;
};

struct BoundaryScan {
  double x_star = 0.0;
  /// Sign changes of Q_0 - min_{t>=1} Q_t seen by the pre-scan.
  std::size_t sign_changes = 0;
  bool anomaly = false;
  std::vector<ScanSample> samples;
};

/// Largest x (to `tolerance`) such that t = 0 stays the minimizer on (0, x].
/// Pre-scans (1/(l+1), 1/l) at step 1e-3 for the first failure, then bisects.
inline BoundaryScan boundary_scan(std::size_t l, double tolerance, double step = 1e-3) {
  if (l < 2) throw std::invalid_argument("boundary_scan requires l >= 2");
  if (!(tolerance > 0)) throw std::invalid_argument("boundary_scan requires a positive tolerance");
  auto holds = [l](double x) { return q_t_uniform(l, x, 0) <= min_q_positive_t(l, x); };

  BoundaryScan out;
  const double lo_start = 1.0 / static_cast<double>(l + 1);
  const double hi_end = 1.0 / static_cast<double>(l);
  double last_ok = lo_start;
  std::optional<double> first_bad;
  bool previous = true;
  for (std::size_t i = 1;; ++i) {
    const double x = lo_start + step * static_cast<double>(i);
    if (x >= hi_end) break;
    const bool ok = holds(x);
    out.samples.push_back({x, q_t_uniform(l, x, 0), min_q_positive_t(l, x)});
    if (ok != previous) ++out.sign_changes;
    previous = ok;
    if (!ok && !first_bad) first_bad = x;
    if (ok && !first_bad) last_ok = x;
  }
  out.anomaly = out.sign_changes > 1;
  if (!first_bad) {
    out.x_star = hi_end;
    return out;
  }
  double lo = last_ok, hi = *first_bad;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  out.x_star = lo;
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo for the two-point family.

/// Samples are split into a fixed number of shards, each with its own
/// derived stream; the estimate depends only on (seed, samples, shards).
inline constexpr std::size_t default_mc_shards = 8;

inline double monte_carlo_small_sum(const TwoPointFamily& family, std::uint64_t samples, std::uint64_t seed,
                                    std::size_t shards = default_mc_shards, std::size_t jobs = 1) {
  if (samples < 1) throw std::invalid_argument("monte_carlo_small_sum requires samples >= 1");
  if (shards < 1) throw std::invalid_argument("shard count must be positive");
  const std::size_t l = family.query().arity();
  const std::size_t random_count = l - family.t();
  // The sum equals prefix + j * high for j successes; decide "< 1" exactly per j.
  const Rational prefix = family.query().prefix_sum(family.t());
  std::vector<bool> below_one(random_count + 1);
  for (std::size_t j = 0; j <= random_count; ++j) {
    below_one[j] = prefix + family.high_value() * static_cast<long>(j) < 1;
  }
  std::vector<double> probs;
  for (const auto& p : family.success_probabilities()) probs.push_back(p.get_d());

  auto run_shard = [&](std::size_t shard) {
    const std::uint64_t count = samples / shards + (shard < samples % shards ? 1 : 0);
    Rng rng(derive_seed(seed, shard));
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      std::size_t successes = 0;
      for (double p : probs) successes += rng.bernoulli(p);
      hits += below_one[successes];
    }
    return hits;
  };

  std::uint64_t total_hits = 0;
  if (jobs <= 1) {
    for (std::size_t s = 0; s < shards; ++s) total_hits += run_shard(s);
  } else {
    std::vector<std::future<std::uint64_t>> parts;
    for (std::size_t s = 0; s < shards; ++s) parts.push_back(std::async(std::launch::async, run_shard, s));
    for (auto& f : parts) total_hits += f.get();
  }
  return static_cast<double>(total_hits) / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------
// Counting mechanics behind the edge bound for a fractional cover.

struct EdgeCountBound {
  std::uint64_t light_sets = 0;  // N: l-sets of weight below one
  std::uint64_t bound = 0;       // C(n, l) - N
};

inline EdgeCountBound edge_count_bound(const VertexWeighting& w, std::size_t l) {
  if (l < 1 || l > w.size()) throw std::invalid_argument("edge_count_bound requires 1 <= l <= n");
  Integer common(1);
  for (const auto& x : w.values()) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> units;
  for (const auto& x : w.values()) units.push_back(x.get_num() * (common / x.get_den()));
  EdgeCountBound out;
  Integer sum;
  std::uint64_t total = 0;
  for_each_combination(w.size(), l, [&](std::span<const Vertex> c) {
    sum = 0;
    for (Vertex v : c) sum += units[v];
    if (sum < common) ++out.light_sets;
    ++total;
  });
  out.bound = total - out.light_sets;
  return out;
}

}  // namespace hypermatch
