#pragma once

// Experiment harness: build subsets, measure their boundaries and check every
// inequality and identity of the isoperimetric argument on them. Reports are
// JSON lines (header, one record per subset, summary) plus a CSV summary with
// one row per (subset, lambda) pair.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "isop/boundary.hpp"
#include "isop/bounds.hpp"
#include "isop/cache.hpp"
#include "isop/error.hpp"
#include "isop/group.hpp"
#include "isop/growth.hpp"
#include "isop/rational.hpp"
#include "isop/subset.hpp"

namespace isop {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;

/// The hypothesis gamma(n-1) >= g(n) of a corollary bound fails on the table.
class HypothesisError : public DomainError {
 public:
  HypothesisError(const std::string& what, std::vector<int> failing) : DomainError(what), failing_(std::move(failing)) {}
  const std::vector<int>& failing() const noexcept { return failing_; }

 private:
  std::vector<int> failing_;
};

struct ExhaustiveSubsets {};

/// One entry of an experiment's lambda list.
struct LambdaChoice {
  enum class Kind { Given, Auto, Max } kind = Kind::Given;
  Rational value;

  std::string render() const {
    switch (kind) {
      case Kind::Given: return value.str();
      case Kind::Auto: return "auto";
      case Kind::Max: return "max";
    }
    return {};
  }
};

inline LambdaChoice parse_lambda_choice(std::string_view text) {
  auto t = detail::trim(text);
  if (t == "auto") return {LambdaChoice::Kind::Auto, 0};
  if (t == "max") return {LambdaChoice::Kind::Max, 0};
  Rational v = parse_rational(t);
  if (v <= 1) throw DomainError("lambda values must exceed 1 (got " + std::string(t) + ")");
  return {LambdaChoice::Kind::Given, v};
}

struct BoundConfig {
  enum class Kind { Polynomial, StretchedExp } kind = Kind::Polynomial;
  std::optional<double> C;  // nullopt: fit to the growth table
  double d = 1;
  double b = 1;
  double alpha = 1;

  std::string label() const {
    std::ostringstream s;
    s.precision(15);
    if (kind == Kind::Polynomial) {
      s << "poly(d=" << d;
    } else {
      s << "exp(b=" << b << ",alpha=" << alpha;
    }
    s << ",C=";
    if (C) {
      s << *C;
    } else {
      s << "fit";
    }
    s << ")";
    return s.str();
  }
};

struct ExperimentConfig {
  std::string name;
  GroupSpec group;
  std::optional<int> radius;
  std::variant<SubsetSource, ExhaustiveSubsets> subsets;
  std::size_t count = 1;
  std::vector<LambdaChoice> lambdas;
  std::vector<BoundConfig> bounds;
  bool strict_phi = true;
};

struct SuiteConfig {
  int version = kConfigSchemaVersion;
  std::vector<ExperimentConfig> experiments;
  std::optional<std::filesystem::path> jsonl;
  std::optional<std::filesystem::path> csv;
  CacheOptions cache;
};

// ---------------------------------------------------------------------------
// Config parsing

namespace detail {

inline double parse_real_field(const nlohmann::json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s.starts_with("log(") && s.ends_with(")")) return std::log(to_double(parse_rational(s.substr(4, s.size() - 5))));
    return to_double(parse_rational(s));
  }
  throw ParseError("field '" + key + "' must be a number");
}

inline std::string lambda_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) {
    std::ostringstream s;
    s.precision(17);
    s << j.get<double>();
    return s.str();
  }
  throw ParseError("lambda entries must be numbers or strings");
}

}  // namespace detail

inline ExperimentConfig parse_experiment(const nlohmann::json& j) {
  ExperimentConfig e;
  if (!j.is_object()) throw ParseError("experiment entries must be objects");
  e.name = j.value("name", std::string("experiment"));
  if (!j.contains("group")) throw ParseError("experiment '" + e.name + "' is missing 'group'");
  e.group = parse_group_spec(j.at("group").get<std::string>());
  if (j.contains("radius")) e.radius = j.at("radius").get<int>();
  std::string subsets = j.value("subsets", std::string("ball:1"));
  if (subsets == "exhaustive") {
    e.subsets = ExhaustiveSubsets{};
  } else {
    e.subsets = parse_subset_source(subsets);
  }
  e.count = j.value("count", std::size_t{1});
  if (e.count == 0) throw DomainError("experiment '" + e.name + "': count must be positive");
  if (j.contains("lambdas")) {
    const auto& l = j.at("lambdas");
    if (l.is_array()) {
      for (const auto& item : l) e.lambdas.push_back(parse_lambda_choice(detail::lambda_text(item)));
    } else {
      e.lambdas.push_back(parse_lambda_choice(detail::lambda_text(l)));
    }
  } else {
    e.lambdas.push_back({LambdaChoice::Kind::Auto, 0});
  }
  if (j.contains("bounds")) {
    for (const auto& b : j.at("bounds")) {
      BoundConfig bc;
      auto kind = b.at("kind").get<std::string>();
      if (kind == "poly") {
        bc.kind = BoundConfig::Kind::Polynomial;
        bc.d = detail::parse_real_field(b.at("d"), "d");
      } else if (kind == "exp") {
        bc.kind = BoundConfig::Kind::StretchedExp;
        bc.b = detail::parse_real_field(b.at("b"), "b");
        bc.alpha = b.contains("alpha") ? detail::parse_real_field(b.at("alpha"), "alpha") : 1.0;
      } else {
        throw ParseError("unknown bound kind '" + kind + "' (expected poly or exp)");
      }
      if (b.contains("C") && !(b.at("C").is_string() && b.at("C").get<std::string>() == "fit")) {
        bc.C = detail::parse_real_field(b.at("C"), "C");
      }
      e.bounds.push_back(bc);
    }
  }
  e.strict_phi = j.value("strict_phi", true);
  return e;
}

inline SuiteConfig parse_suite_config(const nlohmann::json& j) {
  SuiteConfig c;
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  c.version = j.value("version", 0);
  if (c.version != kConfigSchemaVersion) throw ParseError("unsupported config version " + std::to_string(c.version));
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("jsonl")) c.jsonl = o.at("jsonl").get<std::string>();
    if (o.contains("csv")) c.csv = o.at("csv").get<std::string>();
  }
  if (j.contains("memory_budget_bytes")) c.cache.enumeration.memory_budget_bytes = j.at("memory_budget_bytes").get<std::uint64_t>();
  if (!j.contains("experiments")) throw ParseError("config has no 'experiments'");
  for (const auto& e : j.at("experiments")) c.experiments.push_back(parse_experiment(e));
  return c;
}

inline SuiteConfig load_suite_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError("config " + path.string() + ": " + ex.what());
  }
  try {
    return parse_suite_config(j);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError("config " + path.string() + ": " + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Records

/// Intermediate values of the argument for one witness.
struct ProofChain {
  Rational lower;                  // (1 - 1/lambda) |D|
  std::uint64_t size_minus_stay = 0;  // |D| - |I_y| (= |E_y|)
  std::uint64_t exit = 0;            // |E_y|
  std::uint64_t norm_boundary = 0;   // ||y|| |dD|
  std::uint64_t radius_boundary = 0; // n |dD| = phi(lambda |D|) |dD|
  bool exit_bound = false;        // |E_y| <= ||y|| |dD|
  bool convolution = false;       // sum_y |I_y| = |D|^2
  bool averaging = false;         // gamma(n) |I_y| <= |D|^2
  bool stay_bound = false;        // |I_y| <= |D| / lambda
  bool chain = false;             // lower <= |D| - |I_y| = |E_y| <= ||y|| |dD| <= n |dD|
  bool holds() const { return exit_bound && convolution && averaging && stay_bound && chain; }
};

struct LambdaRecord {
  LambdaChoice choice;
  Rational lambda;
  int radius = 0;  // phi(lambda |D|)
  Rational bound;
  bool pass = false;
  std::optional<int> strict_radius;
  std::optional<Rational> strict_bound;
  std::optional<bool> strict_pass;
  std::string strict_note;
  std::string y;
  std::vector<std::string> y_word;
  std::size_t stay = 0;
  std::size_t exit = 0;
  std::size_t interior_fiber = 0;
  std::size_t exterior_fiber = 0;
  WitnessChecks witness;
  ProofChain chain;

  bool ok() const { return pass && strict_pass.value_or(true) && witness.all() && chain.holds(); }
};

struct CorollaryRecord {
  std::string label;
  double C = 0;
  std::optional<double> F;
  std::optional<double> lambda_star;
  std::optional<bool> pass;
  std::string skipped;
  bool ok() const { return pass.value_or(true); }
};

struct VerificationRecord {
  std::string experiment;
  std::string group;
  std::size_t index = 0;
  std::string source;
  std::vector<std::string> elements;
  std::size_t size = 0;
  std::size_t interior = 0;
  std::size_t exterior = 0;
  std::size_t generators = 0;
  bool sandwich = false;
  ConvolutionReport convolution;
  std::vector<LambdaRecord> lambdas;
  std::vector<CorollaryRecord> corollaries;
  std::vector<std::string> notes;

  bool ok() const {
    return sandwich && convolution.holds() && std::all_of(lambdas.begin(), lambdas.end(), [](const auto& l) { return l.ok(); }) &&
           std::all_of(corollaries.begin(), corollaries.end(), [](const auto& c) { return c.ok(); });
  }
};

struct SuiteSummary {
  std::size_t experiments = 0;
  std::size_t subsets = 0;
  std::size_t pairs = 0;
  std::size_t theorem_violations = 0;
  std::size_t strict_violations = 0;
  std::size_t strict_checked = 0;
  std::size_t witness_failures = 0;
  std::size_t chain_failures = 0;
  std::size_t convolution_failures = 0;
  std::size_t sandwich_failures = 0;
  std::size_t corollary_checked = 0;
  std::size_t corollary_skipped = 0;
  std::size_t corollary_violations = 0;
  bool passed() const {
    return theorem_violations == 0 && strict_violations == 0 && witness_failures == 0 && chain_failures == 0 &&
           convolution_failures == 0 && sandwich_failures == 0 && corollary_violations == 0;
  }
};

struct SuiteReport {
  std::vector<VerificationRecord> records;
  SuiteSummary summary;
};

// ---------------------------------------------------------------------------
// Harness

struct ResolvedBound {
  BoundConfig config;
  GrowthLowerBound spec;
};

/// Resolves fitted constants and verifies gamma(n-1) >= g(n) on the table;
/// throws HypothesisError listing the failing n otherwise.
inline ResolvedBound resolve_bound(const BoundConfig& config, const GrowthTable& table) {
  ResolvedBound r{config, PolynomialGrowth{}};
  if (config.kind == BoundConfig::Kind::Polynomial) {
    double C = 0;
    if (config.C) {
      C = *config.C;
    } else {
      if (std::floor(config.d) != config.d) throw DomainError("fitting C requires an integral exponent d");
      C = fit_polynomial_constant(table, static_cast<unsigned>(config.d)).value;
    }
    r.spec = PolynomialGrowth{C, config.d};
  } else {
    double C = config.C ? *config.C : fit_exponential_constant(table, config.b, config.alpha).value;
    r.spec = StretchedExpGrowth{C, config.b, config.alpha};
  }
  r.config.C = std::visit([](const auto& s) { return s.C; }, r.spec);
  auto check = check_growth_hypothesis(table, r.spec);
  if (!check.holds) {
    std::string list;
    for (std::size_t i = 0; i < check.failing.size() && i < 10; ++i) list += (i ? "," : "") + std::to_string(check.failing[i]);
    throw HypothesisError("growth hypothesis gamma(n-1) >= g(n) fails for " + r.config.label() + " at n = " + list, check.failing);
  }
  return r;
}

template <GroupModel G>
ProofChain proof_chain(const WitnessReport& w, const ConvolutionReport& conv) {
  ProofChain c;
  const std::uint64_t size = w.subset_size;
  c.lower = (1 - 1 / w.lambda) * Rational(size);
  c.size_minus_stay = size - w.stay.size();
  c.exit = w.exit.size();
  c.norm_boundary = static_cast<std::uint64_t>(w.y_norm) * w.interior_size;
  c.radius_boundary = static_cast<std::uint64_t>(w.n) * w.interior_size;
  c.exit_bound = c.exit <= c.norm_boundary;
  c.convolution = conv.holds();
  c.averaging = w.checks.averaging_bound;
  c.stay_bound = w.checks.stay_bound;
  c.chain = c.lower <= Rational(c.size_minus_stay) && c.size_minus_stay == c.exit && c.exit <= c.norm_boundary &&
            c.norm_boundary <= c.radius_boundary;
  return c;
}

/// Theorem 1 and its witness for one subset and one lambda.
template <GroupModel G>
LambdaRecord verify_pair(const G& group, const FiniteSubset& d, const LambdaChoice& choice, const Rational& lambda,
                         const GrowthTable& table, const ConvolutionReport& conv, std::size_t interior, bool strict_phi) {
  LambdaRecord r;
  r.choice = choice;
  r.lambda = lambda;
  const Rational target = lambda * Rational(d.size());
  r.radius = reverse_growth(table, target);
  r.bound = theorem1_bound_exact(d.size(), lambda, table);
  r.pass = Rational(interior) >= r.bound;

  if (strict_phi) {
    try {
      r.strict_radius = reverse_growth_strict(table, target);
      r.strict_bound = theorem1_bound_exact(d.size(), lambda, table, true);
      r.strict_pass = Rational(interior) >= *r.strict_bound && *r.strict_radius >= r.radius;
    } catch (const FiniteGroupError&) {
      r.strict_note = "phi_strict undefined: lambda |D| = |G|";
    } catch (const InsufficientDepthError&) {
      r.strict_note = "phi_strict not witnessed within the table";
    }
  }

  WitnessReport w = find_witness(group, d, lambda, table);
  r.y = group.render(w.y);
  r.y_word = w.y_word;
  r.stay = w.stay.size();
  r.exit = w.exit.size();
  r.interior_fiber = w.interior_map.max_fiber;
  r.exterior_fiber = w.exterior_map.max_fiber;
  r.witness = w.checks;
  r.chain = proof_chain<G>(w, conv);
  return r;
}

namespace detail {

inline std::optional<Rational> max_lambda(const GroupModel auto& group, std::size_t size) {
  if (auto order = group.order()) return Rational(*order) / Rational(size);
  return std::nullopt;
}

}  // namespace detail

/// Runs one experiment and appends its records.
template <GroupModel G>
void run_experiment(const G& group, const ExperimentConfig& config, const CacheOptions& cache, std::vector<VerificationRecord>& out) {
  // Subsets
  std::vector<std::pair<std::string, FiniteSubset>> subsets;
  if (std::holds_alternative<ExhaustiveSubsets>(config.subsets)) {
    auto order = group.order();
    if (!order) throw DomainError("experiment '" + config.name + "': exhaustive subsets need a finite group");
    GrowthTable whole = enumerate_ball_exceeding(group, *order, 0, cache.enumeration);
    for (auto& s : all_proper_subsets(whole)) subsets.emplace_back("exhaustive", std::move(s));
  } else {
    const auto& source = std::get<SubsetSource>(config.subsets);
    if (auto* r = std::get_if<RandomSource>(&source)) {
      for (std::size_t i = 0; i < config.count; ++i) {
        RandomSource copy = *r;
        copy.seed = r->seed + i;
        subsets.emplace_back(render_source(copy), materialize(group, copy, cache));
      }
    } else {
      subsets.emplace_back(render_source(source), materialize(group, source, cache));
    }
  }

  // Growth table deep enough for every requested lambda |D|, strictly.
  Rational target = 0;
  for (const auto& [label, d] : subsets) {
    Rational s(d.size());
    target = std::max<Rational>(target, 4 * s);
    for (const auto& choice : config.lambdas) {
      if (choice.kind == LambdaChoice::Kind::Given) target = std::max<Rational>(target, choice.value * s);
    }
  }
  const auto target_int = static_cast<std::uint64_t>(boost::multiprecision::numerator(target) / boost::multiprecision::denominator(target));
  GrowthTable table = config.radius ? cached_ball(group, *config.radius, cache)
                                    : enumerate_ball_exceeding(group, target_int, 0, cache.enumeration);
  if (config.radius && !table.saturated() && Rational(table.gamma().back()) < target) {
    table = enumerate_ball_exceeding(group, target_int, *config.radius, cache.enumeration);
  }

  std::vector<ResolvedBound> bounds;
  for (const auto& b : config.bounds) bounds.push_back(resolve_bound(b, table));

  std::size_t index = 0;
  for (const auto& [label, d] : subsets) {
    VerificationRecord rec;
    rec.experiment = config.name;
    rec.group = group.spec().render();
    rec.index = index++;
    rec.source = label;
    for (const Element& e : d.elements()) rec.elements.push_back(group.render(e));
    rec.size = d.size();
    const auto bd = boundaries(group, d);
    rec.interior = bd.interior.size();
    rec.exterior = bd.exterior.size();
    rec.generators = group.generators().size();
    rec.sandwich = bd.sandwich_holds();
    rec.convolution = convolution_identity(group, d);

    for (const auto& choice : config.lambdas) {
      std::optional<Rational> lambda;
      if (choice.kind == LambdaChoice::Kind::Given) {
        auto cap = detail::max_lambda(group, d.size());
        if (cap && choice.value > *cap) {
          rec.notes.push_back("lambda " + choice.value.str() + " skipped: exceeds |G|/|D| = " + cap->str());
          continue;
        }
        lambda = choice.value;
      } else if (choice.kind == LambdaChoice::Kind::Max) {
        lambda = detail::max_lambda(group, d.size());
        if (!lambda) {
          rec.notes.push_back("lambda max skipped: the group is infinite");
          continue;
        }
      } else {
        try {
          lambda = best_lambda_discrete(d.size(), table, detail::max_lambda(group, d.size())).lambda;
        } catch (const DomainError& ex) {
          rec.notes.push_back(std::string("lambda auto skipped: ") + ex.what());
          continue;
        }
      }
      rec.lambdas.push_back(verify_pair(group, d, choice, *lambda, table, rec.convolution, rec.interior, config.strict_phi));
    }

    for (const auto& b : bounds) {
      CorollaryRecord c;
      c.label = b.config.label();
      c.C = *b.config.C;
      try {
        BoundEvaluation eval = closed_form(b.spec, static_cast<double>(d.size()));
        c.F = eval.F;
        c.lambda_star = eval.lambda_star;
        c.pass = static_cast<double>(rec.interior) >= eval.F;
      } catch (const DomainError& ex) {
        c.skipped = ex.what();
      }
      rec.corollaries.push_back(std::move(c));
    }
    out.push_back(std::move(rec));
  }
}

inline SuiteSummary summarize(const std::vector<VerificationRecord>& records, std::size_t experiments) {
  SuiteSummary s;
  s.experiments = experiments;
  s.subsets = records.size();
  for (const auto& r : records) {
    if (!r.sandwich) ++s.sandwich_failures;
    if (!r.convolution.holds()) ++s.convolution_failures;
    for (const auto& l : r.lambdas) {
      ++s.pairs;
      if (!l.pass) ++s.theorem_violations;
      if (l.strict_pass) {
        ++s.strict_checked;
        if (!*l.strict_pass) ++s.strict_violations;
      }
      if (!l.witness.all()) ++s.witness_failures;
      if (!l.chain.holds()) ++s.chain_failures;
    }
    for (const auto& c : r.corollaries) {
      if (c.pass) {
        ++s.corollary_checked;
        if (!*c.pass) ++s.corollary_violations;
      } else {
        ++s.corollary_skipped;
      }
    }
  }
  return s;
}

inline SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report;
  for (const auto& e : config.experiments) {
    Group group(e.group);
    run_experiment(group, e, config.cache, report.records);
  }
  report.summary = summarize(report.records, config.experiments.size());
  return report;
}

/// Theorem 1 records only (no corollary bounds).
inline std::vector<VerificationRecord> verify_theorem1(const ExperimentConfig& config, const CacheOptions& cache = {}) {
  ExperimentConfig c = config;
  c.bounds.clear();
  std::vector<VerificationRecord> out;
  run_experiment(Group(c.group), c, cache, out);
  return out;
}

/// Corollary bound `bound` on the experiment's subsets. Refuses to run when
/// the growth hypothesis fails on the table.
inline std::vector<VerificationRecord> verify_corollary(const ExperimentConfig& config, const BoundConfig& bound,
                                                        const CacheOptions& cache = {}) {
  ExperimentConfig c = config;
  c.bounds = {bound};
  c.lambdas.clear();
  std::vector<VerificationRecord> out;
  run_experiment(Group(c.group), c, cache, out);
  return out;
}

struct ProofIdentityReport {
  std::vector<VerificationRecord> records;
  std::size_t pairs = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Every intermediate step of the argument on each witness.
inline ProofIdentityReport verify_proof_identities(const ExperimentConfig& config, const CacheOptions& cache = {}) {
  ProofIdentityReport r;
  r.records = verify_theorem1(config, cache);
  for (const auto& rec : r.records) {
    for (const auto& l : rec.lambdas) {
      ++r.pairs;
      if (!l.chain.holds() || !l.witness.all()) ++r.failures;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialisation

inline nlohmann::ordered_json to_json(const LambdaRecord& l) {
  nlohmann::ordered_json j;
  j["lambda"] = l.lambda.str();
  j["lambda_choice"] = l.choice.render();
  j["phi"] = l.radius;
  j["bound"] = l.bound.str();
  j["bound_value"] = to_double(l.bound);
  j["pass"] = l.pass;
  if (l.strict_radius) {
    j["phi_strict"] = *l.strict_radius;
    j["strict_bound"] = l.strict_bound->str();
    j["strict_pass"] = *l.strict_pass;
  } else if (!l.strict_note.empty()) {
    j["strict_note"] = l.strict_note;
  }
  nlohmann::ordered_json w;
  w["y"] = l.y;
  w["word"] = l.y_word;
  w["norm"] = l.y_word.size();
  w["stay"] = l.stay;
  w["exit"] = l.exit;
  w["interior_fiber_max"] = l.interior_fiber;
  w["exterior_fiber_max"] = l.exterior_fiber;
  w["checks"] = {{"partition", l.witness.partition},       {"stay_bound", l.witness.stay_bound},
                 {"averaging_bound", l.witness.averaging_bound}, {"exit_bound", l.witness.exit_bound},
                 {"norm_within_radius", l.witness.norm_within_radius}, {"interior_map", l.witness.interior_map},
                 {"exterior_map", l.witness.exterior_map}};
  j["witness"] = w;
  j["chain"] = {{"lower", l.chain.lower.str()},
                {"size_minus_stay", l.chain.size_minus_stay},
                {"exit", l.chain.exit},
                {"norm_times_boundary", l.chain.norm_boundary},
                {"phi_times_boundary", l.chain.radius_boundary},
                {"holds", l.chain.holds()}};
  return j;
}

inline nlohmann::ordered_json to_json(const VerificationRecord& r) {
  nlohmann::ordered_json j;
  j["type"] = "subset";
  j["experiment"] = r.experiment;
  j["group"] = r.group;
  j["index"] = r.index;
  j["source"] = r.source;
  j["size"] = r.size;
  j["elements"] = r.elements;
  j["boundary"] = r.interior;
  j["exterior_boundary"] = r.exterior;
  j["sandwich"] = r.sandwich;
  j["convolution"] = {{"sum", r.convolution.sum}, {"expected", r.convolution.expected}, {"support", r.convolution.support},
                      {"holds", r.convolution.holds()}};
  auto lambdas = nlohmann::ordered_json::array();
  for (const auto& l : r.lambdas) lambdas.push_back(to_json(l));
  j["lambdas"] = lambdas;
  auto cors = nlohmann::ordered_json::array();
  for (const auto& c : r.corollaries) {
    nlohmann::ordered_json cj;
    cj["bound"] = c.label;
    cj["C"] = c.C;
    if (c.F) {
      cj["F"] = *c.F;
      cj["lambda_star"] = *c.lambda_star;
      cj["pass"] = *c.pass;
    } else {
      cj["skipped"] = c.skipped;
    }
    cors.push_back(cj);
  }
  j["corollaries"] = cors;
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["pass"] = r.ok();
  return j;
}

inline nlohmann::ordered_json to_json(const SuiteSummary& s) {
  nlohmann::ordered_json j;
  j["type"] = "summary";
  j["experiments"] = s.experiments;
  j["subsets"] = s.subsets;
  j["pairs"] = s.pairs;
  j["theorem_violations"] = s.theorem_violations;
  j["strict_checked"] = s.strict_checked;
  j["strict_violations"] = s.strict_violations;
  j["witness_failures"] = s.witness_failures;
  j["chain_failures"] = s.chain_failures;
  j["convolution_failures"] = s.convolution_failures;
  j["sandwich_failures"] = s.sandwich_failures;
  j["corollary_checked"] = s.corollary_checked;
  j["corollary_skipped"] = s.corollary_skipped;
  j["corollary_violations"] = s.corollary_violations;
  j["pass"] = s.passed();
  return j;
}

inline void write_jsonl(std::ostream& out, const SuiteReport& report) {
  nlohmann::ordered_json header;
  header["type"] = "header";
  header["schema"] = "isop.verify";
  header["version"] = kReportSchemaVersion;
  out << header.dump() << '\n';
  for (const auto& r : report.records) out << to_json(r).dump() << '\n';
  out << to_json(report.summary).dump() << '\n';
}

inline std::string format_number(double x, int precision = 15) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

/// Columns: group, size, boundary, exterior_boundary, lambda, bound, pass.
inline void write_csv(std::ostream& out, const SuiteReport& report, int precision = 15) {
  out << "group,size,boundary,exterior_boundary,lambda,bound,pass\n";
  for (const auto& r : report.records) {
    for (const auto& l : r.lambdas) {
      out << r.group << ',' << r.size << ',' << r.interior << ',' << r.exterior << ',' << format_number(to_double(l.lambda), precision)
          << ',' << format_number(to_double(l.bound), precision) << ',' << (l.pass ? "true" : "false") << '\n';
    }
  }
}

}  // namespace isop
