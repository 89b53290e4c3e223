#pragma once

// Command-line front end: argument parsing, JSON/CSV rendering and exit codes.
// Requires the vendored CLI11.hpp and json.hpp on the include path.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypermatch/acceptance.hpp"
#include "hypermatch/hypermatch.hpp"

namespace hypermatch::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, computational_error = 1, usage_error = 2 };

/// Raised for argument combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON encodings. Rationals are "p/q" strings, integers are numbers.

inline Json encode(const Rational& r) { return to_string(r); }

inline Json encode(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline Json encode_rationals(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(encode(v));
  return out;
}

inline Json encode_edges(const std::vector<Edge>& edges) {
  Json out = Json::array();
  for (const auto& e : edges) out.push_back(e);
  return out;
}

inline Json encode(const Hypergraph& h, bool with_edges = true) {
  Json out;
  out["n"] = h.n();
  out["k"] = h.k();
  out["edge_count"] = h.edge_count();
  if (with_edges) out["edges"] = encode_edges(h.edges());
  return out;
}

inline Json encode(const DualityReport& r, const Hypergraph& h) {
  Json out;
  out["n"] = h.n();
  out["k"] = h.k();
  out["edge_count"] = h.edge_count();
  out["nu"] = r.nu;
  out["nu_star"] = encode(r.nu_star);
  out["tau_star"] = encode(r.tau_star);
  out["tau"] = r.tau;
  out["chain_holds"] = r.chain_holds();
  out["matching"] = encode_edges(r.matching_certificate);
  Json fm = Json::array();
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    if (sgn(r.fractional_matching[i]) == 0) continue;
    fm.push_back({{"edge", h.edge(i)}, {"weight", encode(r.fractional_matching[i])}});
  }
  out["fractional_matching"] = std::move(fm);
  out["fractional_cover"] = encode_rationals(r.fractional_cover.values());
  out["cover"] = r.cover_certificate;
  out["pivots"] = r.pivots;
  return out;
}

inline Json encode(const ConjectureValue& v) {
  Json out;
  out["context"] = context_name(v.context);
  Json params = Json::object();
  if (v.parameters.k) params["k"] = *v.parameters.k;
  if (v.parameters.d) params["d"] = *v.parameters.d;
  if (v.parameters.n) params["n"] = *v.parameters.n;
  if (v.parameters.s) params["s"] = encode(*v.parameters.s);
  out["parameters"] = std::move(params);
  out["coefficient"] = v.coefficient ? encode(*v.coefficient) : Json(nullptr);
  out["count"] = v.count ? encode(*v.count) : Json(nullptr);
  return out;
}

inline Json encode(const PropertyCheck& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"violations", c.violations}, {"witnesses", c.witnesses}};
}

// ---------------------------------------------------------------------------
// Output: a JSON envelope, or CSV rows when --csv is given.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct CommandOutput {
  Json payload = Json::object();
  std::optional<Table> table;
  bool failed = false;  // a computed check failed; exit code 1 with the payload intact
};

inline std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// Scalar payload fields as key,value rows; nested objects use dotted keys.
inline void flatten(const Json& value, const std::string& prefix, Table& table) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) flatten(child, prefix.empty() ? key : prefix + "." + key, table);
  } else {
    table.rows.push_back({prefix, csv_cell(value)});
  }
}

inline std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline void write_csv(std::ostream& out, const Table& t) {
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote_csv(cells[i]);
    out << '\n';
  };
  row(t.header);
  for (const auto& r : t.rows) row(r);
}

// ---------------------------------------------------------------------------
// Helpers for option values.

inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw std::invalid_argument("empty list of rationals");
  return out;
}

inline Hypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open hypergraph file '" + path + "'");
  return read_hypergraph(in);
}

inline VertexWeighting load_weighting(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open weighting file '" + path + "'");
  return read_weighting(in);
}

inline void save_hypergraph(const std::string& path, const Hypergraph& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_hypergraph(out, h);
}

inline Json degree_profile(const Hypergraph& h) {
  Json out = Json::array();
  for (std::size_t d = 0; d < h.k(); ++d) out.push_back(min_d_degree(h, d));
  return out;
}

template <class Map>
Table histogram_table(const std::string& kind, const Map& counts, Table table = {{"kind", "value", "count"}, {}}) {
  for (const auto& [value, count] : counts) {
    table.rows.push_back({kind, std::to_string(value), std::to_string(count)});
  }
  return table;
}

template <class Map>
Json histogram_json(const Map& counts) {
  Json out = Json::array();
  for (const auto& [value, count] : counts) out.push_back({{"value", value}, {"count", count}});
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands. Each registers its options and returns a runner.

struct Globals {
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  bool csv = false;
};

using Runner = std::function<CommandOutput()>;

inline Runner add_solve(CLI::App& app) {
  auto* cmd = app.add_subcommand("solve", "Integral and fractional matching/cover numbers of a .hg file");
  auto path = std::make_shared<std::string>();
  cmd->add_option("file", *path, "Hypergraph file")->required();
  return [path] {
    const Hypergraph h = load_hypergraph(*path);
    const DualityReport r = fractional_optimum(h);
    CommandOutput out;
    out.payload = encode(r, h);
    out.payload["certificates_valid"] = certificates_valid(h, r);
    return out;
  };
}

inline Runner add_construct(CLI::App& app) {
  auto* cmd = app.add_subcommand("construct", "Build an extremal construction (h0, h1, clique)");
  struct Args {
    std::string kind;
    std::size_t k = 0, n = 0;
    std::optional<std::size_t> s;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("kind", a->kind, "h0, h1 or clique")->required()->check(CLI::IsMember({"h0", "h1", "clique"}));
  cmd->add_option("--k", a->k, "Uniformity")->required();
  cmd->add_option("--n", a->n, "Number of vertices")->required();
  cmd->add_option("--s", a->s, "Matching size parameter (h1, clique)");
  cmd->add_option("--out", a->out, "Write the edges to this .hg file");
  return [a] {
    CommandOutput out;
    std::optional<Hypergraph> h;
    out.payload["construction"] = a->kind;
    out.payload["k"] = a->k;
    out.payload["n"] = a->n;
    if (a->kind == "h0") {
      out.payload["side_size"] = h0_side_size(a->k, a->n);
      h = construct_h0(a->k, a->n);
    } else {
      if (!a->s) throw UsageError(a->kind + " requires --s");
      out.payload["s"] = *a->s;
      h = a->kind == "h1" ? construct_h1(a->k, a->n, *a->s) : construct_clique_plus_isolated(a->k, a->n, *a->s);
    }
    out.payload["edge_count"] = h->edge_count();
    out.payload["min_degrees"] = degree_profile(*h);
    if (!a->out.empty()) {
      save_hypergraph(a->out, *h);
      out.payload["file"] = a->out;
    }
    out.payload["edges"] = encode_edges(h->edges());
    return out;
  };
}

inline Runner add_conjecture(CLI::App& app) {
  auto* cmd = app.add_subcommand("conjecture", "Evaluate a threshold formula");
  struct Args {
    std::string context;
    std::optional<std::size_t> k, d, n;
    std::optional<std::string> s;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("context", a->context, "Eq3, Eq4, Conj1.2, Conj1.5, Conj1.8, Conj1.9, Cor1.7 or f_{k-1}-exact")
      ->required();
  cmd->add_option("--k", a->k, "Uniformity (l for Conj1.9)");
  cmd->add_option("--d", a->d, "Degree parameter");
  cmd->add_option("--n", a->n, "Number of vertices (m for Conj1.9)");
  cmd->add_option("--s", a->s, "Matching size, rational allowed");
  return [a] {
    ConjectureParameters p{a->k, a->d, a->n, std::nullopt};
    if (a->s) p.s = parse_rational(*a->s);
    CommandOutput out;
    out.payload = encode(conjecture_values(parse_context(a->context), p));
    return out;
  };
}

inline Runner add_samuels(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("samuels", "Small-sum probabilities of two-point families");
  cmd->require_subcommand(1);
  struct Args {
    std::string mus;
    std::optional<std::size_t> l;
    std::optional<std::string> x;
    std::size_t t = 0;
    double tol = 1e-6;
    double step = 1e-3;
    std::uint64_t samples = 100000;
    std::string weights;
  };
  auto a = std::make_shared<Args>();
  auto query_options = [a](CLI::App* sub) {
    sub->add_option("--mus", a->mus, "Comma-separated expectations, nondecreasing");
    sub->add_option("--l", a->l, "Number of variables (uniform query with --x)");
    sub->add_option("--x", a->x, "Common expectation (uniform query with --l)");
  };
  auto query = [a] {
    if (!a->mus.empty()) return SamuelsQuery(parse_rational_list(a->mus));
    if (a->l && a->x) return SamuelsQuery::uniform(*a->l, parse_rational(*a->x));
    throw UsageError("give either --mus or both --l and --x");
  };
  auto echo = [](const SamuelsQuery& q, Json& payload) { payload["mus"] = encode_rationals(q.mus()); };

  auto* qt = cmd->add_subcommand("qt", "Exact Q_t");
  query_options(qt);
  qt->add_option("--t", a->t, "Number of constant variables");
  auto* qmin = cmd->add_subcommand("qmin", "Minimum of Q_t over t");
  query_options(qmin);
  auto* prop = cmd->add_subcommand("prop23", "Check that t = 0 is the minimizer for a uniform query");
  prop->add_option("--l", a->l, "Number of variables")->required();
  prop->add_option("--x", a->x, "Common expectation")->required();
  auto* scan = cmd->add_subcommand("scan", "Locate the boundary of the t = 0 regime (uniform means)");
  scan->add_option("--l", a->l, "Number of variables")->required();
  scan->add_option("--tol", a->tol, "Bisection tolerance");
  scan->add_option("--step", a->step, "Pre-scan step");
  auto* mc = cmd->add_subcommand("mc", "Monte Carlo estimate of P(sum < 1) for the two-point family");
  query_options(mc);
  mc->add_option("--t", a->t, "Number of constant variables");
  mc->add_option("--samples", a->samples, "Number of samples");
  auto* edge = cmd->add_subcommand("edgebound", "Count l-sets below weight one for a weighting");
  edge->add_option("--weights", a->weights, "Weighting file (.wt)")->required();
  edge->add_option("--l", a->l, "Set size")->required();

  return [=, &g] {
    CommandOutput out;
    if (qt->parsed()) {
      const SamuelsQuery q = query();
      const TwoPointFamily f(q, a->t);
      echo(q, out.payload);
      out.payload["t"] = a->t;
      out.payload["high_value"] = encode(f.high_value());
      out.payload["success_probabilities"] = encode_rationals(f.success_probabilities());
      out.payload["q_t"] = encode(q_t(q, a->t));
    } else if (qmin->parsed()) {
      const SamuelsQuery q = query();
      echo(q, out.payload);
      Json all = Json::array();
      for (std::size_t t = 0; t < q.arity(); ++t) all.push_back(encode(q_t(q, t)));
      const QMin m = q_min(q);
      out.payload["q"] = std::move(all);
      out.payload["q_min"] = encode(m.value);
      out.payload["argmin"] = m.argmin;
    } else if (prop->parsed()) {
      const Rational x = parse_rational(*a->x);
      out.payload["l"] = *a->l;
      out.payload["x"] = encode(x);
      out.payload["holds"] = prop23_check(*a->l, x);
      out.payload["value"] = encode(q_min(SamuelsQuery::uniform(*a->l, x)).value);
    } else if (scan->parsed()) {
      const BoundaryScan s = boundary_scan(*a->l, a->tol, a->step);
      out.payload["l"] = *a->l;
      out.payload["x_star"] = s.x_star;
      out.payload["tolerance"] = a->tol;
      out.payload["sign_changes"] = s.sign_changes;
      out.payload["anomaly"] = s.anomaly;
      out.payload["samples"] = s.samples.size();
      Table t{{"x", "q0", "min_other"}, {}};
      for (const auto& row : s.samples) {
        std::ostringstream x, q0, other;
        x.precision(17);
        q0.precision(17);
        other.precision(17);
        x << row.x;
        q0 << row.q0;
        other << row.min_other;
        t.rows.push_back({x.str(), q0.str(), other.str()});
      }
      out.table = std::move(t);
    } else if (mc->parsed()) {
      const SamuelsQuery q = query();
      const TwoPointFamily f(q, a->t);
      echo(q, out.payload);
      out.payload["t"] = a->t;
      out.payload["samples"] = a->samples;
      out.payload["shards"] = default_mc_shards;
      out.payload["estimate"] = monte_carlo_small_sum(f, a->samples, g.seed, default_mc_shards, g.jobs);
      out.payload["exact_q_t"] = encode(q_t(q, a->t));
    } else if (edge->parsed()) {
      const VertexWeighting w = load_weighting(a->weights);
      const EdgeCountBound b = edge_count_bound(w, *a->l);
      out.payload["n"] = w.size();
      out.payload["l"] = *a->l;
      out.payload["light_sets"] = b.light_sets;
      out.payload["bound"] = b.bound;
      out.payload["total_weight"] = encode(w.total());
    }
    return out;
  };
}

inline Runner add_threshold(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("threshold", "Exhaustive Dirac-type threshold m_d^s or f_d^s");
  struct Args {
    std::string mode = "integral";
    std::size_t k = 0, n = 0, d = 0;
    std::optional<std::string> s;
    std::size_t max_universe = ThresholdBudget{}.max_universe;
    std::string out;
    bool compare = false;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--mode", a->mode, "integral or fractional")->check(CLI::IsMember({"integral", "fractional"}));
  cmd->add_option("--k", a->k, "Uniformity")->required();
  cmd->add_option("--n", a->n, "Number of vertices")->required();
  cmd->add_option("--d", a->d, "Degree parameter");
  cmd->add_option("--s", a->s, "Matching size (default n/k)");
  cmd->add_option("--budget", a->max_universe, "Largest C(n,k) searched exhaustively");
  cmd->add_option("--out", a->out, "Write the extremal witness to this .hg file");
  cmd->add_flag("--compare", a->compare, "Compare against constructions and formulas");
  return [a, &g] {
    ThresholdQuery q;
    q.k = a->k;
    q.n = a->n;
    q.d = a->d;
    q.mode = a->mode == "integral" ? ThresholdMode::integral : ThresholdMode::fractional;
    if (a->k == 0) throw std::invalid_argument("threshold query requires k >= 1");
    q.s = a->s ? parse_rational(*a->s) : make_rational(static_cast<long>(a->n), static_cast<long>(a->k));
    const ThresholdBudget budget{a->max_universe, g.jobs};
    const ThresholdResult r = brute_force_threshold(q, budget);
    CommandOutput out;
    auto& p = out.payload;
    p["mode"] = mode_name(q.mode);
    p["k"] = q.k;
    p["n"] = q.n;
    p["d"] = q.d;
    p["s"] = encode(q.s);
    p["value"] = r.value;
    p["witness"] = encode(r.witness);
    p["witness_index"] = r.witness_index;
    p["instances_examined"] = r.instances_examined;
    p["constraint_checks"] = r.constraint_checks;
    p["lp_solves"] = r.lp_solves;
    if (!a->out.empty()) {
      save_hypergraph(a->out, r.witness);
      p["file"] = a->out;
    }
    if (a->compare) {
      const ThresholdComparison c = compare_with_conjecture(q, budget);
      Json cmp;
      Json cons = Json::array();
      for (const auto& b : c.constructions) {
        cons.push_back({{"name", b.name}, {"value", b.value}, {"admissible", b.admissible}});
      }
      Json formulas = Json::array();
      for (const auto& f : c.formulas) formulas.push_back(encode(f));
      auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
      cmp["constructions"] = std::move(cons);
      cmp["formulas"] = std::move(formulas);
      cmp["fractional_value"] = opt(c.fractional_value);
      cmp["integral_value"] = opt(c.integral_value);
      cmp["link_problem_value"] = opt(c.link_problem_value);
      cmp["fractional_below_integral"] = opt(c.fractional_below_integral);
      cmp["constructions_below_value"] = c.constructions_below_value;
      cmp["link_reduction_holds"] = opt(c.link_reduction_holds);
      cmp["matches_formula_count"] = opt(c.matches_formula_count);
      p["comparison"] = std::move(cmp);
    }
    return out;
  };
}

inline Runner add_reduce(CLI::App& app) {
  auto* cmd = app.add_subcommand("reduce", "Reduce a fractional cover to its lightest d-set link");
  struct Args {
    std::string weights;
    std::size_t k = 0, d = 1;
  };
  auto a = std::make_shared<Args>();
  cmd->add_option("--weights", a->weights, "Weighting file (.wt)")->required();
  cmd->add_option("--k", a->k, "Uniformity")->required();
  cmd->add_option("--d", a->d, "Size of the link set");
  return [a] {
    const VertexWeighting w = load_weighting(a->weights);
    const FractionalReduction r = reduce_fractional_instance(w, a->k, a->d);
    const Hypergraph link_graph = reduction_link(r, a->k);
    bool covers = true;
    for (const auto& e : link_graph.edges()) covers = covers && r.link_cover.sum_over(e) >= 1;
    CommandOutput out;
    auto& p = out.payload;
    p["k"] = a->k;
    p["d"] = a->d;
    p["weights"] = encode_rationals(w.values());
    p["link_set"] = r.link_set;
    p["averaged"] = encode_rationals(r.averaged.values());
    p["base_weight"] = encode(r.base_weight);
    p["remapped"] = encode_rationals(r.remapped.values());
    p["link_cover"] = encode_rationals(r.link_cover.values());
    p["link_cover_total"] = encode(r.link_cover.total());
    p["threshold_edges"] = threshold_hypergraph(w, a->k).edge_count();
    p["averaged_threshold_edges"] = threshold_hypergraph(r.averaged, a->k).edge_count();
    p["remapped_threshold_edges"] = threshold_hypergraph(r.remapped, a->k).edge_count();
    p["link"] = encode(link_graph, false);
    p["link_cover_is_fractional_cover"] = covers;
    return out;
  };
}

inline Runner add_storage(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("storage", "Distributed storage allocations");
  cmd->require_subcommand(1);
  struct Args {
    std::size_t n = 0, r = 0;
    std::optional<long> budget;
    std::uint32_t q = 0;
    std::string alloc;
    std::uint64_t max_candidates = GridBudget{}.max_candidates;
  };
  auto a = std::make_shared<Args>();
  auto* phi_cmd = cmd->add_subcommand("phi", "Phi of an allocation file");
  phi_cmd->add_option("--r", a->r, "Nodes contacted")->required();
  phi_cmd->add_option("--alloc", a->alloc, "Allocation file (.wt)")->required();
  phi_cmd->add_option("--T", a->budget, "Budget (default: ceiling of the total)");
  auto* cand = cmd->add_subcommand("candidates", "Clique and spread allocations");
  auto* opt = cmd->add_subcommand("optimize", "Grid optimum of Phi");
  auto* sand = cmd->add_subcommand("sandwich", "f_0^T <= F^T <= f_0^{T+1}");
  for (auto* sub : {cand, opt, sand}) {
    sub->add_option("--n", a->n, "Number of nodes")->required();
    sub->add_option("--r", a->r, "Nodes contacted")->required();
    sub->add_option("--T", a->budget, "Budget")->required();
  }
  for (auto* sub : {opt, sand}) sub->add_option("--q", a->q, "Grid denominator (default 2r)");
  opt->add_option("--max-candidates", a->max_candidates, "Budget on scored allocations");

  return [=, &g] {
    CommandOutput out;
    auto& p = out.payload;
    const std::uint32_t q = a->q ? a->q : default_grid_denominator(a->r);
    if (phi_cmd->parsed()) {
      const VertexWeighting x = load_weighting(a->alloc);
      const long budget = a->budget ? *a->budget : to_long(ceil(x.total()));
      const AllocationReport rep = phi(Allocation{x, a->r, budget});
      p["n"] = x.size();
      p["r"] = a->r;
      p["T"] = budget;
      p["allocation"] = encode_rationals(x.values());
      p["total"] = encode(x.total());
      p["phi"] = rep.phi;
      p["success_probability"] = encode(rep.success_probability);
    } else if (cand->parsed()) {
      Json list = Json::array();
      Table t{{"name", "phi", "closed_form", "success_probability"}, {}};
      for (const auto& c : candidate_allocations(a->n, a->r, *a->budget)) {
        list.push_back({{"name", c.name},
                        {"phi", c.report.phi},
                        {"closed_form", encode(c.closed_form)},
                        {"success_probability", encode(c.report.success_probability)},
                        {"allocation", encode_rationals(c.report.allocation.x.values())}});
        t.rows.push_back({c.name, std::to_string(c.report.phi), c.closed_form.get_str(),
                          to_string(c.report.success_probability)});
      }
      p["n"] = a->n;
      p["r"] = a->r;
      p["T"] = *a->budget;
      p["candidates"] = std::move(list);
      out.table = std::move(t);
    } else if (opt->parsed()) {
      const GridOptimum best = optimize_grid(a->n, a->r, *a->budget, q, GridBudget{a->max_candidates, g.jobs});
      p["n"] = a->n;
      p["r"] = a->r;
      p["T"] = *a->budget;
      p["q"] = q;
      p["phi"] = best.best.phi;
      p["success_probability"] = encode(best.best.success_probability);
      p["allocation"] = encode_rationals(best.best.allocation.x.values());
      p["grid_points"] = encode(best.compositions);
      p["candidates_searched"] = best.candidates_searched;
    } else if (sand->parsed()) {
      const StorageSandwich s = storage_sandwich(a->n, a->r, *a->budget, q, ThresholdBudget{24, g.jobs});
      p["n"] = a->n;
      p["r"] = a->r;
      p["T"] = *a->budget;
      p["q"] = q;
      p["lower"] = s.lower;
      p["value"] = s.value;
      p["upper"] = s.upper;
      p["holds"] = s.holds;
      out.failed = !s.holds;
    }
    return out;
  };
}

inline Runner add_randcons(CLI::App& app, const Globals& g) {
  auto* cmd = app.add_subcommand("randcons", "Two-round randomized sparsification");
  struct Args {
    std::string base;
    std::optional<std::size_t> complete;
    std::size_t k = 3;
    double p = 0.5;
    std::size_t rounds = 0;
    std::size_t d = 1;
    bool paper = false;
    std::size_t repetitions = 1;
    std::string policy = "strict";
    double tau = 0.5;
  };
  auto a = std::make_shared<Args>();
  auto* base = cmd->add_option("--base", a->base, "Base hypergraph file (.hg)");
  auto* complete = cmd->add_option("--complete", a->complete, "Use the complete k-graph on this many vertices");
  base->excludes(complete);
  cmd->add_option("--k", a->k, "Uniformity for --complete");
  cmd->add_option("--p", a->p, "Inclusion probability");
  cmd->add_option("--rounds", a->rounds, "Number of round-one samples");
  cmd->add_option("--d", a->d, "Degree parameter for the link-degree check");
  cmd->add_flag("--paper-exponents", a->paper, "p = n^-0.9 and ceil(n^1.1) rounds");
  cmd->add_option("--repetitions", a->repetitions, "Round-two repetitions");
  cmd->add_option("--policy", a->policy, "strict or overlapping")->check(CLI::IsMember({"strict", "overlapping"}));
  cmd->add_option("--tau", a->tau, "Tolerance of the near-regularity check");

  return [a, &g] {
    std::shared_ptr<const Hypergraph> h;
    if (a->complete) {
      h = std::make_shared<const Hypergraph>(Hypergraph::complete(*a->complete, a->k));
    } else if (!a->base.empty()) {
      h = std::make_shared<const Hypergraph>(load_hypergraph(a->base));
    } else {
      throw UsageError("give --base or --complete");
    }
    RoundOnePlan plan;
    if (a->paper) {
      plan = RoundOnePlan::with_paper_exponents(h, g.seed);
    } else {
      plan.base = h;
      plan.p = a->p;
      plan.rounds = a->rounds;
      plan.seed = g.seed;
    }
    plan.d = a->d;
    const OverlapPolicy policy = a->policy == "strict" ? OverlapPolicy::strict : OverlapPolicy::overlapping;

    const RoundOneOutcome outcome = sample_rounds(plan);
    const std::vector<RoundMatching> matchings = solve_round_matchings(outcome, g.jobs);
    const SparseSubgraph sparse = build_sparse_subgraph(outcome, derive_seed(g.seed, 1), policy, &matchings);

    CommandOutput out;
    auto& p = out.payload;
    p["base"] = encode(*h, false);
    p["plan"] = {{"p", plan.p}, {"rounds", plan.rounds}, {"d", plan.d}, {"policy", a->policy}};
    Json checks = Json::array();
    for (const auto& c : outcome.checks) checks.push_back(encode(c));
    p["checks"] = std::move(checks);
    p["all_checks_passed"] = outcome.all_checks_passed();
    std::map<std::size_t, std::size_t> sizes;
    for (const auto& r : outcome.subsets) ++sizes[r.size()];
    p["set_sizes"] = histogram_json(sizes);
    p["rounds_used"] = sparse.rounds_used;
    p["rounds_skipped"] = sparse.rounds_skipped;
    p["selected_edges"] = sparse.selections.size();
    p["distinct_edges"] = sparse.graph.edge_count();

    std::map<std::uint32_t, std::size_t> degrees, codegrees;
    double mean_target = 0;
    for (std::size_t v = 0; v < h->n(); ++v) {
      ++degrees[sparse.degree[v]];
      mean_target += sparse.target[v];
    }
    mean_target /= static_cast<double>(h->n());
    for (Vertex u = 0; u < h->n(); ++u) {
      for (Vertex v = u + 1; v < h->n(); ++v) ++codegrees[sparse.codegree(u, v)];
    }
    p["degree_histogram"] = histogram_json(degrees);
    p["codegree_histogram"] = histogram_json(codegrees);
    if (mean_target > 0) {
      const NearRegularityReport reg = check_near_regularity(sparse.graph, mean_target, a->tau);
      p["near_regularity"] = {{"target_degree", mean_target},
                              {"tau", a->tau},
                              {"passed", reg.passed},
                              {"degree_violators", reg.degree_violators.size()},
                              {"max_codegree", reg.max_codegree},
                              {"codegree_ok", reg.codegree_ok}};
    }
    if (a->repetitions > 1) {
      const RepetitionSummary sum = repeat_round_two(outcome, matchings, g.seed, a->repetitions, policy);
      p["repetitions"] = {{"count", sum.repetitions},
                          {"vertices_within_3_sigma", sum.vertices_within},
                          {"pair_failures", sum.pair_failures}};
    }
    out.table = histogram_table("codegree", codegrees, histogram_table("degree", degrees));
    return out;
  };
}

inline Runner add_selftest(CLI::App& app, const Globals& g) {
  app.add_subcommand("selftest", "Run the acceptance battery");
  return [&g] {
    CommandOutput out;
    Json list = Json::array();
    Table t{{"id", "result", "seconds", "title", "detail"}, {}};
    bool all = true;
    for (const auto& criterion : acceptance::criteria()) {
      const auto r = criterion({g.jobs, g.seed});
      std::cerr << acceptance::format_line(r) << std::endl;
      all = all && r.passed;
      list.push_back({{"id", r.id},
                      {"title", r.title},
                      {"passed", r.passed},
                      {"seconds", r.seconds},
                      {"limit_seconds", r.limit_seconds},
                      {"detail", r.detail}});
      std::ostringstream secs;
      secs.precision(3);
      secs << std::fixed << r.seconds;
      t.rows.push_back({std::to_string(r.id), r.passed ? "PASS" : "FAIL", secs.str(), r.title, r.detail});
    }
    out.payload["criteria"] = std::move(list);
    out.payload["passed"] = all;
    out.table = std::move(t);
    out.failed = !all;
    return out;
  };
}

// ---------------------------------------------------------------------------

inline Json error_json(const std::string& command, const std::string& kind, const std::string& type,
                       const std::string& message) {
  Json out;
  out["command"] = command;
  out["error"] = {{"kind", kind}, {"type", type}, {"message", message}};
  return out;
}

/// Parses argv, runs the selected subcommand and writes its result to `out`.
/// Returns 0 on success, 2 on usage errors and 1 on computational errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for hypergraph matchings, thresholds and allocations", "hypermatch"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--jobs", g.jobs, "Worker threads for sharded searches")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for stochastic commands");
  app.add_flag("--csv", g.csv, "Emit CSV instead of JSON");

  std::vector<std::pair<CLI::App*, Runner>> commands;
  auto track = [&](Runner r) { commands.emplace_back(app.get_subcommands([](CLI::App*) { return true; }).back(), std::move(r)); };
  track(add_solve(app));
  track(add_construct(app));
  track(add_conjecture(app));
  track(add_samuels(app, g));
  track(add_threshold(app, g));
  track(add_reduce(app));
  track(add_storage(app, g));
  track(add_randcons(app, g));
  track(add_selftest(app, g));

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  std::string command;
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    out << error_json(argc > 1 ? argv[1] : "", "usage", "ParseError", e.what()).dump(2) << '\n';
    return ExitCode::usage_error;
  }

  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);
  const Runner* runner = nullptr;
  std::string name;
  for (const auto& [sub, r] : commands) {
    if (sub->parsed()) {
      runner = &r;
      name = sub->get_name();
    }
  }

  const auto start = std::chrono::steady_clock::now();
  auto fail = [&](int code, const std::string& type, const std::string& message, Json extra = Json::object()) {
    err << "error: " << message << '\n';
    Json j = error_json(name, code == ExitCode::usage_error ? "usage" : "computational", type, message);
    j["arguments"] = command;
    j["seed"] = g.seed;
    for (auto& [k, v] : extra.items()) j["error"][k] = v;
    out << j.dump(2) << '\n';
    return code;
  };
  try {
    CommandOutput result = (*runner)();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (g.csv) {
      Table t;
      if (result.table) {
        t = std::move(*result.table);
      } else {
        t.header = {"key", "value"};
        flatten(result.payload, "", t);
      }
      write_csv(out, t);
    } else {
      Json envelope;
      envelope["command"] = name;
      envelope["arguments"] = command;
      envelope["seed"] = g.seed;
      envelope["jobs"] = g.jobs;
      envelope["payload"] = std::move(result.payload);
      envelope["timing"] = {{"seconds", seconds}};
      out << envelope.dump(2) << '\n';
    }
    return result.failed ? ExitCode::computational_error : ExitCode::ok;
  } catch (const UsageError& e) {
    err << app.help();
    return fail(ExitCode::usage_error, "UsageError", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ExitCode::usage_error, "InvalidArgument", e.what());
  } catch (const BudgetExceeded& e) {
    return fail(ExitCode::computational_error, "BudgetExceeded", e.what(),
                {{"lower_bound", e.lower_bound()}, {"upper_bound", e.upper_bound()}});
  } catch (const ConstructionInfeasible& e) {
    return fail(ExitCode::computational_error, "ConstructionInfeasible", e.what());
  } catch (const ReductionInfeasible& e) {
    return fail(ExitCode::computational_error, "ReductionInfeasible", e.what());
  } catch (const AmbiguousMembership& e) {
    return fail(ExitCode::computational_error, "AmbiguousMembership", e.what());
  } catch (const std::exception& e) {
    return fail(ExitCode::computational_error, "Error", e.what());
  }
}

}  // namespace hypermatch::cli
