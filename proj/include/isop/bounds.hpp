#pragma once

// Lower bounds for |boundary D| in terms of |D|.
//
// theorem1_bound:        (1 - 1/lambda) |D| / phi(lambda |D|) from a growth table.
// numeric_F_sup:         sup over lambda > 1 of H(lambda, v) = (1 - 1/lambda) v / h(lambda v),
//                        h = g^-1 for a hypothesised lower bound gamma(n) >= g(n+1).
// closed_form_poly/exp:  the maximiser in closed form for g(r) = C r^d and
//                        g(r) = C exp(b r^alpha).

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isop/error.hpp"
#include "isop/growth.hpp"
#include "isop/lambert.hpp"
#include "isop/optimize.hpp"
#include "isop/rational.hpp"

namespace isop {

struct PolynomialGrowth {
  double C = 1;
  double d = 1;
};

struct StretchedExpGrowth {
  double C = 1;
  double b = 1;
  double alpha = 1;
};

using GrowthLowerBound = std::variant<PolynomialGrowth, StretchedExpGrowth>;

inline void validate(const PolynomialGrowth& p) {
  if (!(p.C > 0) || !std::isfinite(p.C)) throw DomainError("polynomial growth requires C > 0");
  if (!(p.d >= 1) || !std::isfinite(p.d)) throw DomainError("polynomial growth requires d >= 1");
}

inline void validate(const StretchedExpGrowth& e) {
  if (!(e.C > 0) || !std::isfinite(e.C)) throw DomainError("stretched-exponential growth requires C > 0");
  if (!(e.b > 0) || !std::isfinite(e.b)) throw DomainError("stretched-exponential growth requires b > 0");
  if (!(e.alpha > 0 && e.alpha <= 1)) throw DomainError("stretched-exponential growth requires 0 < alpha <= 1");
}

inline void validate(const GrowthLowerBound& g) {
  std::visit([](const auto& s) { validate(s); }, g);
}

/// g(r).
inline double growth_bound(const GrowthLowerBound& spec, double r) {
  if (auto* p = std::get_if<PolynomialGrowth>(&spec)) return p->C * std::pow(r, p->d);
  const auto& e = std::get<StretchedExpGrowth>(spec);
  return e.C * std::exp(e.b * std::pow(r, e.alpha));
}

/// h(v) = g^-1(v) for v >= g(0).
inline double growth_bound_inverse(const GrowthLowerBound& spec, double v) {
  if (auto* p = std::get_if<PolynomialGrowth>(&spec)) return std::pow(v / p->C, 1.0 / p->d);
  const auto& e = std::get<StretchedExpGrowth>(spec);
  return std::pow(std::log(v / e.C) / e.b, 1.0 / e.alpha);
}

inline long double growth_bound_long(const GrowthLowerBound& spec, std::size_t n) {
  const long double r = static_cast<long double>(n);
  if (auto* p = std::get_if<PolynomialGrowth>(&spec)) return static_cast<long double>(p->C) * std::pow(r, static_cast<long double>(p->d));
  const auto& e = std::get<StretchedExpGrowth>(spec);
  return static_cast<long double>(e.C) * std::exp(static_cast<long double>(e.b) * std::pow(r, static_cast<long double>(e.alpha)));
}

enum class BoundMethod { ClosedForm, NumericSup, LambertW };

inline const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::ClosedForm: return "closedForm";
    case BoundMethod::NumericSup: return "numericSup";
    case BoundMethod::LambertW: return "lambertW";
  }
  return "";
}

struct BoundEvaluation {
  double v = 0;
  double lambda_star = 0;
  double F = 0;
  std::optional<double> mu;  // stretched-exponential only
  BoundMethod method = BoundMethod::ClosedForm;
  /// Relative residual of the optimality condition
  /// h(lambda v) = lambda (lambda - 1) v h'(lambda v) at lambda_star.
  double stationarity_residual = 0;
  /// Residual of the method's own defining equation (0 when none applies).
  double defining_residual = 0;
};

// ---------------------------------------------------------------------------
// Discrete bound from a growth table

/// (1 - 1/lambda) |D| / phi(lambda |D|), exactly.
inline Rational theorem1_bound_exact(std::uint64_t size, const Rational& lambda, const GrowthTable& table, bool strict = false) {
  if (size < 1) throw DomainError("|D| must be at least 1");
  if (lambda <= 1) throw DomainError("lambda must exceed 1 (got " + lambda.str() + ")");
  const Rational target = lambda * Rational(size);
  if (auto order = table.group_order(); order && target > Rational(*order)) {
    throw DomainError("lambda " + lambda.str() + " exceeds |G|/|D| = " + std::to_string(*order) + "/" + std::to_string(size));
  }
  const int phi = strict ? reverse_growth_strict(table, target) : reverse_growth(table, target);
  return (1 - 1 / lambda) * Rational(size) / Rational(phi);
}

inline double theorem1_bound(std::uint64_t size, const Rational& lambda, const GrowthTable& table) {
  return to_double(theorem1_bound_exact(size, lambda, table));
}

struct DiscreteBest {
  Rational lambda;
  Rational bound;
  int radius = 0;  // phi(lambda |D|)
};

/// Best lambda in (1, lambda_max] for the step function phi(lambda |D|): on
/// each step the bound increases with lambda, so the candidates are the
/// right ends lambda_k = gamma(k) / |D| and lambda_max itself.
inline DiscreteBest best_lambda_discrete(std::uint64_t size, const GrowthTable& table,
                                         std::optional<Rational> lambda_max = std::nullopt) {
  if (size < 1) throw DomainError("|D| must be at least 1");
  if (auto order = table.group_order()) {
    Rational cap = Rational(*order) / Rational(size);
    if (!lambda_max || *lambda_max > cap) lambda_max = cap;
  }
  std::vector<Rational> candidates;
  for (auto g : table.gamma()) candidates.emplace_back(Rational(g) / Rational(size));
  if (lambda_max) candidates.push_back(*lambda_max);

  std::optional<DiscreteBest> best;
  for (const Rational& lambda : candidates) {
    if (lambda <= 1 || (lambda_max && lambda > *lambda_max)) continue;
    if (lambda * Rational(size) > Rational(table.gamma().back())) continue;
    Rational bound = theorem1_bound_exact(size, lambda, table);
    if (!best || bound > best->bound || (bound == best->bound && lambda < best->lambda)) {
      best = DiscreteBest{lambda, bound, reverse_growth(table, lambda * Rational(size))};
    }
  }
  if (!best) throw DomainError("no admissible lambda > 1 for |D| = " + std::to_string(size) + " within the table");
  return *best;
}

// ---------------------------------------------------------------------------
// Continuous bounds

namespace detail {

inline double relative_difference(double a, double b) {
  double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0 ? 0 : std::fabs(a - b) / scale;
}

// |h(u) - lambda (lambda-1) v h'(u)| / h(u) at u = lambda v, h' by central
// differences.
inline double stationarity_residual(const GrowthLowerBound& spec, double lambda, double v) {
  const double u = lambda * v;
  const double step = 1e-5 * u;
  const double dh = (growth_bound_inverse(spec, u + step) - growth_bound_inverse(spec, u - step)) / (2 * step);
  const double h = growth_bound_inverse(spec, u);
  return std::fabs(h - lambda * (lambda - 1) * v * dh) / std::fabs(h);
}

inline double lower_limit(const GrowthLowerBound& spec) {
  if (std::holds_alternative<PolynomialGrowth>(spec)) return 0;
  return std::get<StretchedExpGrowth>(spec).C;
}

}  // namespace detail

/// sup_{lambda > 1} (1 - 1/lambda) v / h(lambda v) by bracketed golden-section
/// search. Requires v > g(0), so that h(lambda v) > 0 for every lambda > 1
/// and H vanishes at both ends.
inline BoundEvaluation numeric_F_sup(const GrowthLowerBound& spec, double v) {
  validate(spec);
  const double floor = detail::lower_limit(spec);
  if (!(v > floor) || !std::isfinite(v)) {
    throw DomainError("numeric sup requires v > g(0) = " + std::to_string(floor) + " (got " + std::to_string(v) + ")");
  }
  auto H = [&](double lambda) {
    if (lambda <= 1) return 0.0;
    return (1 - 1 / lambda) * v / growth_bound_inverse(spec, lambda * v);
  };
  ScalarMaximum m = maximize_unimodal(H, 1.0);
  if (!(m.value > 0) || !std::isfinite(m.value)) throw DomainError("numeric sup did not bracket a positive maximum");
  BoundEvaluation out;
  out.v = v;
  out.lambda_star = m.argmax;
  out.F = m.value;
  out.method = BoundMethod::NumericSup;
  out.stationarity_residual = detail::stationarity_residual(spec, m.argmax, v);
  if (auto* e = std::get_if<StretchedExpGrowth>(&spec); e && v > 1) {
    out.mu = out.F * std::pow(std::log(v) / e->b, 1 / e->alpha) / v;
  }
  return out;
}

/// C^{1/d} d v^{(d-1)/d} / (d+1)^{(d+1)/d}, attained at lambda = d + 1.
inline BoundEvaluation closed_form_poly(double C, double d, double v) {
  PolynomialGrowth p{C, d};
  validate(p);
  if (!(v >= 1)) throw DomainError("closed_form_poly requires v >= 1");
  BoundEvaluation out;
  out.v = v;
  out.lambda_star = d + 1;
  out.F = std::pow(C, 1 / d) * d * std::pow(v, (d - 1) / d) / std::pow(d + 1, (d + 1) / d);
  out.method = BoundMethod::ClosedForm;
  out.stationarity_residual = detail::stationarity_residual(p, out.lambda_star, v);
  // 1 + (lambda - lambda^2) / (lambda d) vanishes at the maximiser.
  out.defining_residual = std::fabs(1 + (out.lambda_star - out.lambda_star * out.lambda_star) / (out.lambda_star * d));
  return out;
}

/// v below which alpha log(lambda v / C) = lambda - 1 has no solution with
/// lambda >= alpha: the minimum (C/alpha) e^{(alpha-1)/alpha} of
/// x -> (C/x) e^{(x-1)/alpha}.
inline double lambda_threshold(const StretchedExpGrowth& e) {
  return e.C / e.alpha * std::exp((e.alpha - 1) / e.alpha);
}

struct LambdaSolution {
  double lambda = 0;
  double residual = 0;  // alpha log(lambda v / C) - (lambda - 1)
  long double w = 0;    // W_{-1} argument's image
};

/// lambda(v) = -alpha W_{-1}(-C e^{-1/alpha} / (alpha v)), the unique
/// solution >= alpha of alpha log(lambda v / C) = lambda - 1.
inline LambdaSolution solve_lambda(const StretchedExpGrowth& e, double v) {
  validate(e);
  const double threshold = lambda_threshold(e);
  if (!(v >= threshold * (1 - 4 * std::numeric_limits<double>::epsilon())) || !std::isfinite(v)) {
    throw DomainError("lambda(v) requires v >= (C/alpha) e^{(alpha-1)/alpha} = " + std::to_string(threshold) + " (got " +
                      std::to_string(v) + ")");
  }
  const long double alpha = e.alpha;
  const long double x = -static_cast<long double>(e.C) * std::exp(-1 / alpha) / (alpha * static_cast<long double>(v));
  const long double w = lambert_w_minus1<long double>(std::max(x, -detail::kInvE));
  const long double lambda = -alpha * w;
  const long double residual = alpha * std::log(lambda * static_cast<long double>(v) / static_cast<long double>(e.C)) - (lambda - 1);
  return {static_cast<double>(lambda), static_cast<double>(residual), w};
}

inline double lambda_of_v(const StretchedExpGrowth& e, double v) {
  LambdaSolution s = solve_lambda(e, v);
  if (std::fabs(s.residual) > 1e-10) throw Error("lambda(v) residual " + std::to_string(s.residual) + " exceeds 1e-10");
  return s.lambda;
}

struct MuEvaluation {
  double mu = 0;       // (1 - 1/lambda)(1 + log(lambda)/log v - log C / log v)^{-1/alpha}
  double lambda = 0;
  double mu_explicit = 0;  // same quantity written through W_{-1} directly
  /// The W_{-1} expression with the second factor taken to the first power
  /// rather than to -1/alpha; differs from `mu` unless that factor is 1.
  double mu_unexponentiated = 0;
  double agreement = 0;  // relative difference of mu and mu_explicit
};

inline MuEvaluation evaluate_mu(const StretchedExpGrowth& e, double v) {
  validate(e);
  if (!(v > 1)) throw DomainError("mu(v) requires v > 1 (got " + std::to_string(v) + ")");
  LambdaSolution s = solve_lambda(e, v);
  if (std::fabs(s.residual) > 1e-10) throw Error("lambda(v) residual " + std::to_string(s.residual) + " exceeds 1e-10");
  const long double lambda = s.lambda;
  const long double alpha = e.alpha;
  const long double log_v = std::log(static_cast<long double>(v));
  const long double log_c = std::log(static_cast<long double>(e.C));

  MuEvaluation out;
  out.lambda = s.lambda;
  out.mu = static_cast<double>((1 - 1 / lambda) * std::pow(1 + std::log(lambda) / log_v - log_c / log_v, -1 / alpha));

  const long double w = s.w;
  const long double first = 1 + 1 / (alpha * w);
  const long double second = 1 + std::log(-(alpha / static_cast<long double>(e.C)) * w) / log_v;
  out.mu_explicit = static_cast<double>(first * std::pow(second, -1 / alpha));
  out.mu_unexponentiated = static_cast<double>(first * second);
  out.agreement = detail::relative_difference(out.mu, out.mu_explicit);
  return out;
}

inline double mu_of_v(const StretchedExpGrowth& e, double v) {
  MuEvaluation m = evaluate_mu(e, v);
  if (m.agreement > 1e-9) throw Error("explicit and implicit mu(v) disagree by " + std::to_string(m.agreement));
  return m.mu;
}

/// mu(v) v / ((1/b) log v)^{1/alpha}. Requires v > max(1, C) so that
/// lambda(v) > 1.
inline BoundEvaluation closed_form_exp(const StretchedExpGrowth& e, double v) {
  validate(e);
  if (!(v > std::max(1.0, e.C))) {
    throw DomainError("closed_form_exp requires v > max(1, C) = " + std::to_string(std::max(1.0, e.C)) + " (got " + std::to_string(v) + ")");
  }
  MuEvaluation m = evaluate_mu(e, v);
  if (m.agreement > 1e-9) throw Error("explicit and implicit mu(v) disagree by " + std::to_string(m.agreement));
  BoundEvaluation out;
  out.v = v;
  out.lambda_star = m.lambda;
  out.mu = m.mu;
  out.F = m.mu * v / std::pow(std::log(v) / e.b, 1 / e.alpha);
  out.method = BoundMethod::LambertW;
  out.stationarity_residual = detail::stationarity_residual(e, m.lambda, v);
  const double direct = (1 - 1 / m.lambda) * v / growth_bound_inverse(e, m.lambda * v);
  out.defining_residual = detail::relative_difference(out.F, direct);
  return out;
}

/// Closed-form bound of the matching kind.
inline BoundEvaluation closed_form(const GrowthLowerBound& spec, double v) {
  if (auto* p = std::get_if<PolynomialGrowth>(&spec)) return closed_form_poly(p->C, p->d, v);
  return closed_form_exp(std::get<StretchedExpGrowth>(spec), v);
}

// ---------------------------------------------------------------------------
// Fitting a lower bound to a growth table

struct HypothesisCheck {
  bool holds = true;
  std::vector<int> failing;  // n with gamma(n-1) < g(n)
};

/// gamma(n-1) >= g(n) for n = 1..N+1. Exact when g is polynomial with an
/// integral exponent; extended precision otherwise.
inline HypothesisCheck check_growth_hypothesis(const GrowthTable& table, const GrowthLowerBound& spec) {
  validate(spec);
  HypothesisCheck out;
  auto gamma = table.gamma();
  for (std::size_t n = 1; n <= gamma.size(); ++n) {
    bool ok = true;
    if (auto* p = std::get_if<PolynomialGrowth>(&spec); p && std::floor(p->d) == p->d && p->d <= 64) {
      BigInt power = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(p->d));
      ok = Rational(gamma[n - 1]) >= exact_rational(p->C) * Rational(power);
    } else {
      ok = static_cast<long double>(gamma[n - 1]) >= growth_bound_long(spec, n);
    }
    if (!ok) {
      out.holds = false;
      out.failing.push_back(static_cast<int>(n));
    }
  }
  return out;
}

/// Largest double not above the exact rational.
inline double floor_to_double(const Rational& r) {
  double d = to_double(r);
  if (exact_rational(d) > r) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

struct FittedConstant {
  Rational exact;  // exact minimum where available
  double value = 0;
};

/// Largest C with gamma(n-1) >= C n^d for every tabulated n (d integral).
inline FittedConstant fit_polynomial_constant(const GrowthTable& table, unsigned d) {
  if (d < 1) throw DomainError("polynomial fit requires d >= 1");
  auto gamma = table.gamma();
  std::optional<Rational> best;
  for (std::size_t n = 1; n <= gamma.size(); ++n) {
    Rational ratio = Rational(gamma[n - 1]) / Rational(boost::multiprecision::pow(BigInt(n), d));
    if (!best || ratio < *best) best = ratio;
  }
  return {*best, floor_to_double(*best)};
}

/// Largest C (up to a 1e-12 relative safety margin) with
/// gamma(n-1) >= C exp(b n^alpha) for every tabulated n.
inline FittedConstant fit_exponential_constant(const GrowthTable& table, double b, double alpha) {
  validate(StretchedExpGrowth{1, b, alpha});
  auto gamma = table.gamma();
  long double best = std::numeric_limits<long double>::infinity();
  for (std::size_t n = 1; n <= gamma.size(); ++n) {
    long double ratio = static_cast<long double>(gamma[n - 1]) /
                        std::exp(static_cast<long double>(b) * std::pow(static_cast<long double>(n), static_cast<long double>(alpha)));
    best = std::min(best, ratio);
  }
  double value = static_cast<double>(best * (1 - 1e-12L));
  return {exact_rational(value), value};
}

}  // namespace isop
