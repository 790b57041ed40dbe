#pragma once

// Command-line front end. `run` is the whole program minus process exit, so
// tests can drive it with string streams.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isop/boundary.hpp"
#include "isop/bounds.hpp"
#include "isop/cache.hpp"
#include "isop/error.hpp"
#include "isop/group.hpp"
#include "isop/growth.hpp"
#include "isop/lambert.hpp"
#include "isop/rational.hpp"
#include "isop/subset.hpp"
#include "isop/verify.hpp"

namespace isop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

using Json = nlohmann::ordered_json;

/// Tabular result plus the JSON document for --format json.
struct Output {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json extra = Json::object();  // merged into the JSON document
  bool failed = false;
};

struct GlobalOptions {
  std::string format = "csv";
  int precision = 15;
  bool no_cache = false;
  std::string memory_budget;
};

namespace detail {

inline std::string format_double(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

inline std::string cell_text(const Json& v, int precision) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>(), precision);
  if (v.is_null()) return "";
  return v.dump();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Rounds floats to `precision` significant digits so JSON carries the same
// digits as the text formats.
inline Json rounded(const Json& v, int precision) {
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (!std::isfinite(x)) return format_double(x, precision);
    return std::stod(format_double(x, precision));
  }
  if (v.is_array() || v.is_object()) {
    Json out = v;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it, precision);
    return out;
  }
  return v;
}

inline void emit(const Output& o, const GlobalOptions& g, std::ostream& out) {
  if (g.format == "json") {
    Json doc;
    doc["command"] = o.command;
    for (auto it = o.extra.begin(); it != o.extra.end(); ++it) doc[it.key()] = rounded(*it, g.precision);
    Json rows = Json::array();
    for (const auto& r : o.rows) {
      Json obj;
      for (std::size_t i = 0; i < o.columns.size(); ++i) obj[o.columns[i]] = rounded(r[i], g.precision);
      rows.push_back(obj);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
    return;
  }
  if (g.format == "csv") {
    for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << csv_escape(o.columns[i]);
    out << '\n';
    for (const auto& r : o.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(r[i], g.precision));
      out << '\n';
    }
    return;
  }
  // plain: space-aligned columns
  std::vector<std::vector<std::string>> cells;
  cells.push_back(o.columns);
  for (const auto& r : o.rows) {
    std::vector<std::string> line;
    for (const auto& v : r) line.push_back(cell_text(v, g.precision));
    cells.push_back(line);
  }
  std::vector<std::size_t> width(o.columns.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      text += line[i];
      if (i + 1 < line.size()) text += std::string(width[i] - line[i].size() + 2, ' ');
    }
    out << text << '\n';
  }
}

inline std::uint64_t parse_bytes(const std::string& text) {
  if (text.empty()) throw ParseError("empty memory budget");
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw ParseError("invalid memory budget '" + text + "'");
  }
  std::string suffix = text.substr(pos);
  std::uint64_t scale = 1;
  if (suffix == "" || suffix == "B") {
    scale = 1;
  } else if (suffix == "K" || suffix == "KiB") {
    scale = 1ull << 10;
  } else if (suffix == "M" || suffix == "MiB") {
    scale = 1ull << 20;
  } else if (suffix == "G" || suffix == "GiB") {
    scale = 1ull << 30;
  } else {
    throw ParseError("invalid memory budget suffix '" + suffix + "' (use K, M or G)");
  }
  return v * scale;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace detail

struct Context {
  GlobalOptions global;
  CacheOptions cache;
};

// ---------------------------------------------------------------------------
// Subcommands

inline Output cmd_growth(const Context& ctx, const std::string& spec, int radius) {
  if (radius < 0) throw DomainError("radius must be non-negative");
  Group g(parse_group_spec(spec));
  GrowthTable t = cached_ball(g, radius, ctx.cache);
  Output o{"growth", {"n", "gamma"}, {}, Json::object()};
  for (int n = 0; n <= radius; ++n) o.rows.push_back({n, t.gamma(n)});
  o.extra["group"] = g.spec().render();
  o.extra["saturated"] = t.saturated();
  return o;
}

inline GrowthTable table_for_target(const Group& g, const Rational& target, std::optional<int> radius, const Context& ctx) {
  if (radius) return cached_ball(g, *radius, ctx.cache);
  const BigInt whole = boost::multiprecision::numerator(target) / boost::multiprecision::denominator(target);
  if (whole > BigInt(std::numeric_limits<std::uint32_t>::max())) throw DomainError("target " + target.str() + " is too large to tabulate");
  return enumerate_ball_exceeding(g, static_cast<std::uint64_t>(whole), 0, ctx.cache.enumeration);
}

inline Output cmd_phi(const Context& ctx, const std::string& spec, const std::vector<std::string>& values, bool strict,
                      std::optional<int> radius) {
  if (values.empty()) throw ParseError("phi needs at least one value t");
  Group g(parse_group_spec(spec));
  std::vector<Rational> ts;
  for (const auto& v : values) {
    Rational t = parse_rational(v);
    if (t < 0) throw DomainError("phi requires t >= 0 (got " + v + ")");
    ts.push_back(t);
  }
  GrowthTable t = table_for_target(g, *std::max_element(ts.begin(), ts.end()), radius, ctx);
  Output o{"phi", {"t", "phi"}, {}, Json::object()};
  if (strict) o.columns.push_back("phi_strict");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<Json> row{values[i], reverse_growth(t, ts[i])};
    if (strict) row.push_back(reverse_growth_strict(t, ts[i]));
    o.rows.push_back(row);
  }
  o.extra["group"] = g.spec().render();
  return o;
}

inline Output cmd_boundary(const Context& ctx, const std::string& spec, const std::string& subset) {
  Group g(parse_group_spec(spec));
  FiniteSubset d = materialize(g, parse_subset_source(subset), ctx.cache);
  BoundaryReport r = boundaries(g, d);
  Output o{"boundary", {"size", "boundary", "exterior_boundary", "generators", "sandwich", "interior", "exterior"}, {}, Json::object()};
  o.rows.push_back({d.size(), r.interior.size(), r.exterior.size(), r.generator_count, r.sandwich_holds(), render_subset(g, r.interior),
                    render_subset(g, r.exterior)});
  o.extra["group"] = g.spec().render();
  o.failed = !r.sandwich_holds();
  return o;
}

inline Output cmd_witness(const Context& ctx, const std::string& spec, const std::string& subset, const std::string& lambda_text,
                          std::optional<int> radius) {
  Group g(parse_group_spec(spec));
  FiniteSubset d = materialize(g, parse_subset_source(subset), ctx.cache);
  Rational lambda = parse_rational(lambda_text);
  if (lambda <= 1) throw DomainError("lambda must exceed 1 (got " + lambda_text + ")");
  GrowthTable t = table_for_target(g, lambda * Rational(d.size()), radius, ctx);
  WitnessReport w = find_witness(g, d, lambda, t);
  Output o{"witness",
           {"lambda", "n", "gamma_n", "y", "y_norm", "y_word", "size", "stay", "exit", "boundary", "exterior_boundary",
            "interior_fiber_max", "exterior_fiber_max", "pass"},
           {},
           Json::object()};
  o.rows.push_back({lambda.str(), w.n, w.gamma_n, g.render(w.y), w.y_norm, detail::join(w.y_word, " "), w.subset_size, w.stay.size(),
                    w.exit.size(), w.interior_size, w.exterior_size, w.interior_map.max_fiber, w.exterior_map.max_fiber, w.checks.all()});
  Json checks = {{"partition", w.checks.partition},
                 {"stay_bound", w.checks.stay_bound},
                 {"averaging_bound", w.checks.averaging_bound},
                 {"exit_bound", w.checks.exit_bound},
                 {"norm_within_radius", w.checks.norm_within_radius},
                 {"interior_map", w.checks.interior_map},
                 {"exterior_map", w.checks.exterior_map}};
  o.extra["group"] = g.spec().render();
  o.extra["checks"] = checks;
  o.extra["exit_set"] = render_subset(g, w.exit);
  o.extra["stay_set"] = render_subset(g, w.stay);
  Json assignments = Json::array();
  for (const auto& a : w.interior_map.assignments) assignments.push_back({{"x", g.render(a.point)}, {"m", a.step}, {"f", g.render(a.image)}});
  o.extra["exit_map"] = assignments;
  Json ext = Json::array();
  for (const auto& a : w.exterior_map.assignments) ext.push_back({{"x", g.render(a.point)}, {"m", a.step}, {"f", g.render(a.image)}});
  o.extra["exterior_exit_map"] = ext;
  o.failed = !w.checks.all();
  return o;
}

inline Output cmd_bound_theorem1(const Context& ctx, const std::string& spec, std::uint64_t size, const std::string& lambda_text,
                                 bool strict, std::optional<int> radius) {
  if (size < 1) throw DomainError("--size must be at least 1");
  Group g(parse_group_spec(spec));
  Output o{"bound theorem1", {"size", "lambda", "phi", "bound", "bound_exact"}, {}, Json::object()};
  Rational lambda;
  GrowthTable t = [&] {
    if (lambda_text == "auto") return table_for_target(g, Rational(4 * size), radius, ctx);
    lambda = parse_rational(lambda_text);
    if (lambda <= 1) throw DomainError("lambda must exceed 1 (got " + lambda_text + ")");
    return table_for_target(g, lambda * Rational(size), radius, ctx);
  }();
  if (lambda_text == "auto") {
    std::optional<Rational> cap;
    if (auto order = g.order()) cap = Rational(*order) / Rational(size);
    lambda = best_lambda_discrete(size, t, cap).lambda;
  }
  Rational b = theorem1_bound_exact(size, lambda, t, strict);
  const Rational target = lambda * Rational(size);
  int phi = strict ? reverse_growth_strict(t, target) : reverse_growth(t, target);
  o.rows.push_back({size, lambda.str(), phi, to_double(b), b.str()});
  o.extra["group"] = g.spec().render();
  o.extra["strict"] = strict;
  return o;
}

inline void push_evaluation(Output& o, const BoundEvaluation& e) {
  o.rows.push_back({to_string(e.method), e.v, e.lambda_star, e.F, e.mu ? Json(*e.mu) : Json(nullptr), e.stationarity_residual,
                    e.defining_residual});
}

inline std::vector<std::string> evaluation_columns() {
  return {"method", "v", "lambdaStar", "F", "mu", "stationarityResidual", "definingResidual"};
}

inline Output cmd_bound_poly(double C, double d, const std::vector<double>& vs, const std::string& method) {
  Output o{"bound poly", evaluation_columns(), {}, Json::object()};
  for (double v : vs) {
    if (method == "closed" || method == "both") push_evaluation(o, closed_form_poly(C, d, v));
    if (method == "numeric" || method == "both") push_evaluation(o, numeric_F_sup(PolynomialGrowth{C, d}, v));
  }
  o.extra["C"] = C;
  o.extra["d"] = d;
  return o;
}

inline Output cmd_bound_exp(double C, double b, double alpha, const std::vector<double>& vs, const std::string& method) {
  Output o{"bound exp", evaluation_columns(), {}, Json::object()};
  for (double v : vs) {
    if (method == "closed" || method == "both") push_evaluation(o, closed_form_exp({C, b, alpha}, v));
    if (method == "numeric" || method == "both") push_evaluation(o, numeric_F_sup(StretchedExpGrowth{C, b, alpha}, v));
  }
  o.extra["C"] = C;
  o.extra["b"] = b;
  o.extra["alpha"] = alpha;
  return o;
}

inline Output cmd_lambert(const std::vector<std::string>& values) {
  if (values.empty()) throw ParseError("lambert needs at least one argument x (negative values after --)");
  Output o{"lambert", {"x", "w", "residual"}, {}, Json::object()};
  for (const auto& text : values) {
    long double x = 0;
    std::size_t pos = 0;
    try {
      x = std::stold(text, &pos);
    } catch (const std::exception&) {
      throw ParseError("invalid number '" + text + "'");
    }
    if (pos != text.size()) throw ParseError("invalid number '" + text + "'");
    // A decimal written to double precision may land just below -1/e.
    const long double below = -(x + isop::detail::kInvE);
    if (below > 0 && below <= std::numeric_limits<double>::epsilon() * isop::detail::kInvE) x = -isop::detail::kInvE;
    long double w = lambert_w_minus1<long double>(x);
    o.rows.push_back({static_cast<double>(x), static_cast<double>(w), static_cast<double>(lambert_relative_residual(w, x))});
  }
  return o;
}

inline Output cmd_mu(double C, double b, double alpha, std::vector<double> vs) {
  if (vs.empty()) {
    for (int k = 2; k <= 12; ++k) vs.push_back(std::pow(10.0, k));
  }
  Output o{"mu", {"v", "lambda", "mu", "mu_explicit", "agreement"}, {}, Json::object()};
  const StretchedExpGrowth e{C, b, alpha};
  for (double v : vs) {
    MuEvaluation m = evaluate_mu(e, v);
    if (m.agreement > 1e-9) throw Error("explicit and implicit mu(v) disagree by " + detail::format_double(m.agreement, 3));
    o.rows.push_back({v, m.lambda, m.mu, m.mu_explicit, m.agreement});
  }
  o.extra["C"] = C;
  o.extra["b"] = b;
  o.extra["alpha"] = alpha;
  return o;
}

inline Output cmd_verify(const Context& ctx, const std::string& config_path, const std::string& jsonl, const std::string& csv) {
  SuiteConfig config = load_suite_config(config_path);
  const auto file_budget = config.cache.enumeration.memory_budget_bytes;
  config.cache = ctx.cache;
  if (ctx.global.memory_budget.empty()) config.cache.enumeration.memory_budget_bytes = file_budget;
  if (!jsonl.empty()) config.jsonl = jsonl;
  if (!csv.empty()) config.csv = csv;
  SuiteReport report = run_suite(config);
  if (config.jsonl) {
    if (config.jsonl->has_parent_path()) std::filesystem::create_directories(config.jsonl->parent_path());
    std::ofstream out(*config.jsonl, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + config.jsonl->string());
    write_jsonl(out, report);
  }
  if (config.csv) {
    if (config.csv->has_parent_path()) std::filesystem::create_directories(config.csv->parent_path());
    std::ofstream out(*config.csv, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + config.csv->string());
    write_csv(out, report, ctx.global.precision);
  }
  const auto& s = report.summary;
  Output o{"verify",
           {"experiments", "subsets", "pairs", "theorem_violations", "strict_violations", "witness_failures", "chain_failures",
            "convolution_failures", "sandwich_failures", "corollary_checked", "corollary_skipped", "corollary_violations", "pass"},
           {},
           Json::object()};
  o.rows.push_back({s.experiments, s.subsets, s.pairs, s.theorem_violations, s.strict_violations, s.witness_failures, s.chain_failures,
                    s.convolution_failures, s.sandwich_failures, s.corollary_checked, s.corollary_skipped, s.corollary_violations,
                    s.passed()});
  o.failed = !s.passed();
  return o;
}

inline Output cmd_lemma_check(const Context& ctx, const std::string& spec, int radius, std::optional<double> g_scale,
                              std::optional<double> g_power) {
  Group g(parse_group_spec(spec));
  GrowthTable t = cached_ball(g, radius, ctx.cache);
  LemmaReport r = check_lemma_properties(t);
  Output o{"lemma-check", {"clause", "passed", "checks", "detail"}, {}, Json::object()};
  for (const auto& c : r.clauses) o.rows.push_back({c.name, c.passed, c.checks, c.counterexample});
  bool ok = r.passed();
  if (g_scale || g_power) {
    const double c = g_scale.value_or(1.0), p = g_power.value_or(1.0);
    if (!(c > 0) || !(p > 0)) throw DomainError("--g-scale and --g-power must be positive");
    auto iv = check_lemma_iv(
        t, [=](double x) { return c * std::pow(x, p); }, [=](double y) { return std::pow(y / c, 1 / p); });
    const char* status = iv.status == LemmaIvStatus::Passed ? "passed"
                         : iv.status == LemmaIvStatus::HypothesisFailure ? "hypothesis-failure"
                                                                          : "inequality-failure";
    o.rows.push_back({"(iv) phi(t) <= g^-1(t)", iv.status == LemmaIvStatus::Passed, iv.grid_points,
                      iv.detail.empty() ? std::string(status) : std::string(status) + ": " + iv.detail});
    // A false hypothesis is a statement about g, not a failed check.
    if (iv.status == LemmaIvStatus::InequalityFailure) ok = false;
  }
  o.extra["group"] = g.spec().render();
  o.extra["radius"] = radius;
  o.failed = !ok;
  return o;
}

// ---------------------------------------------------------------------------

/// Runs the program on `args` (without argv[0]). Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Growth, boundaries and isoperimetric bounds on finitely generated groups", "isop"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "plain"}))->capture_default_str();
  app.add_option("--precision", g.precision, "Significant digits for real numbers")->check(CLI::Range(1, 40))->capture_default_str();
  app.add_flag("--no-cache", g.no_cache, "Do not read or write the growth-table cache ($ISOP_CACHE_DIR)");
  app.add_option("--memory-budget", g.memory_budget, "Enumeration memory budget in bytes (suffix K, M or G; default 2G)");

  std::string group, subset, lambda = "auto", config, jsonl, csv, method = "closed";
  int radius = 0;
  std::optional<int> opt_radius;
  std::vector<std::string> values;
  std::vector<double> vs;
  bool strict = false;
  std::uint64_t size = 0;
  double C = 1, d = 1, b = 1, alpha = 1;
  std::optional<double> g_scale, g_power;

  auto* growth = app.add_subcommand("growth", "Print the growth table n, gamma(n)");
  growth->add_option("--group", group, "Group spec, e.g. Z:2, free:2, heisenberg, cyclic:8")->required();
  growth->add_option("--radius", radius, "Largest n")->required();

  auto* phi = app.add_subcommand("phi", "Reverse growth phi(t) (and the strict variant with --strict)");
  phi->add_option("--group", group, "Group spec")->required();
  phi->add_option("t", values, "Values t >= 0 (integers, decimals or p/q)")->required();
  phi->add_flag("--strict", strict, "Also print phi_strict(t) = min{n : gamma(n) > t}");
  phi->add_option("--radius", opt_radius, "Table radius (default: just deep enough)");

  auto* boundary = app.add_subcommand("boundary", "Interior and exterior boundary of a subset");
  boundary->add_option("--group", group, "Group spec")->required();
  boundary->add_option("--subset", subset, "{e1,e2,...} | ball:<r> | random:<size>:<seed>[:<r>]")->required();

  auto* witness = app.add_subcommand("witness", "Reconstruct the translate y, exit/stay sets and exit map for (D, lambda)");
  witness->add_option("--group", group, "Group spec")->required();
  witness->add_option("--subset", subset, "Subset literal or source")->required();
  witness->add_option("--lambda", lambda, "lambda > 1 (decimal or p/q)")->required();
  witness->add_option("--radius", opt_radius, "Table radius (default: just deep enough)");

  auto* bound = app.add_subcommand("bound", "Isoperimetric lower bounds");
  bound->require_subcommand(1);
  auto* theorem1 = bound->add_subcommand("theorem1", "(1 - 1/lambda)|D| / phi(lambda |D|) from the growth table");
  theorem1->add_option("--group", group, "Group spec")->required();
  theorem1->add_option("--size", size, "|D|")->required();
  theorem1->add_option("--lambda", lambda, "lambda > 1, or 'auto' for the best discrete candidate")->capture_default_str();
  theorem1->add_flag("--strict", strict, "Use phi_strict in place of phi");
  theorem1->add_option("--radius", opt_radius, "Table radius (default: just deep enough)");
  auto* poly = bound->add_subcommand("poly", "Bound F(v) for growth gamma(n-1) >= C n^d");
  poly->add_option("--C", C, "Constant C > 0")->required();
  poly->add_option("--d", d, "Exponent d >= 1")->required();
  poly->add_option("--v", vs, "Values v = |D|")->required();
  poly->add_option("--method", method, "closed | numeric | both")->check(CLI::IsMember({"closed", "numeric", "both"}))->capture_default_str();
  auto* exp = bound->add_subcommand("exp", "Bound F(v) for growth gamma(n-1) >= C exp(b n^alpha)");
  exp->add_option("--C", C, "Constant C > 0")->required();
  exp->add_option("--b", b, "Rate b > 0")->capture_default_str();
  exp->add_option("--alpha", alpha, "Exponent 0 < alpha <= 1")->capture_default_str();
  exp->add_option("--v", vs, "Values v = |D|")->required();
  exp->add_option("--method", method, "closed | numeric | both")->check(CLI::IsMember({"closed", "numeric", "both"}))->capture_default_str();

  auto* lambert = app.add_subcommand("lambert", "Lower branch W_{-1}(x) for -1/e <= x < 0; put negative x after --");
  lambert->add_option("x", values, "Arguments x")->required();

  auto* mu = app.add_subcommand("mu", "mu(v) for stretched-exponential growth (default v = 1e2..1e12)");
  mu->add_option("--C", C, "Constant C > 0")->capture_default_str();
  mu->add_option("--b", b, "Rate b > 0")->capture_default_str();
  mu->add_option("--alpha", alpha, "Exponent 0 < alpha <= 1")->capture_default_str();
  mu->add_option("--v", vs, "Values v > 1");

  auto* verify = app.add_subcommand("verify", "Run an experiment config; exit 1 if any check fails");
  verify->add_option("--config", config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--jsonl", jsonl, "Write the JSON-lines report here (overrides the config)");
  verify->add_option("--csv", csv, "Write the CSV summary here (overrides the config)");

  auto* lemma = app.add_subcommand("lemma-check", "Check the reverse-growth lemma clauses on a growth table");
  lemma->add_option("--group", group, "Group spec")->required();
  lemma->add_option("--radius", radius, "Table radius")->required();
  lemma->add_option("--g-scale", g_scale, "Clause (iv): g(r) = scale * r^power");
  lemma->add_option("--g-power", g_power, "Clause (iv): exponent of g");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* where = &app;
    for (const auto* sub : app.get_subcommands()) {
      where = sub;
      for (const auto* nested : sub->get_subcommands()) where = nested;
    }
    err << where->help();
    return kExitUsage;
  }

  try {
    Context ctx;
    ctx.global = g;
    if (!g.no_cache) ctx.cache.dir = default_cache_dir();
    if (!g.memory_budget.empty()) ctx.cache.enumeration.memory_budget_bytes = detail::parse_bytes(g.memory_budget);

    Output o;
    if (growth->parsed()) {
      o = cmd_growth(ctx, group, radius);
    } else if (phi->parsed()) {
      o = cmd_phi(ctx, group, values, strict, opt_radius);
    } else if (boundary->parsed()) {
      o = cmd_boundary(ctx, group, subset);
    } else if (witness->parsed()) {
      o = cmd_witness(ctx, group, subset, lambda, opt_radius);
    } else if (theorem1->parsed()) {
      o = cmd_bound_theorem1(ctx, group, size, lambda, strict, opt_radius);
    } else if (poly->parsed()) {
      o = cmd_bound_poly(C, d, vs, method);
    } else if (exp->parsed()) {
      o = cmd_bound_exp(C, b, alpha, vs, method);
    } else if (lambert->parsed()) {
      o = cmd_lambert(values);
    } else if (mu->parsed()) {
      o = cmd_mu(C, b, alpha, vs);
    } else if (verify->parsed()) {
      o = cmd_verify(ctx, config, jsonl, csv);
    } else if (lemma->parsed()) {
      o = cmd_lemma_check(ctx, group, radius, g_scale, g_power);
    }
    detail::emit(o, g, out);
    return o.failed ? kExitFailure : kExitOk;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << " (last completed radius " << e.last_completed_radius() << ")\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace isop::cli
