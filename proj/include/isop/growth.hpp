#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "isop/error.hpp"
#include "isop/group.hpp"
#include "isop/rational.hpp"

namespace isop {

struct NormedElement {
  Element element;
  int norm = 0;
};

/// Spheres S(0..N) of the word metric together with gamma(n) = |B(n)|.
/// Immutable; copies share the underlying storage.
class GrowthTable {
 public:
  GrowthTable(GroupSpec spec, std::vector<std::vector<Element>> spheres, bool saturated)
      : impl_(std::make_shared<Impl>(std::move(spec), std::move(spheres), saturated)) {}

  const GroupSpec& spec() const noexcept { return impl_->spec; }
  int radius() const noexcept { return static_cast<int>(impl_->offsets.size()) - 2; }

  std::span<const std::uint64_t> gamma() const noexcept { return impl_->gamma; }
  std::uint64_t gamma(int n) const { return impl_->gamma.at(static_cast<std::size_t>(n)); }

  std::span<const Element> sphere(int n) const {
    if (n < 0 || n > radius()) throw InsufficientDepthError("sphere " + std::to_string(n) + " outside table radius " + std::to_string(radius()));
    auto first = impl_->offsets[static_cast<std::size_t>(n)];
    auto last = impl_->offsets[static_cast<std::size_t>(n) + 1];
    return std::span<const Element>(impl_->elements).subspan(first, last - first);
  }

  /// All elements of B(N), sphere by sphere, each sphere sorted by encoding.
  std::span<const Element> ball() const noexcept { return impl_->elements; }

  /// Elements of B(n) in the same order as ball().
  std::span<const Element> ball(int n) const {
    if (n < 0 || n > radius()) throw InsufficientDepthError("ball " + std::to_string(n) + " outside table radius " + std::to_string(radius()));
    return std::span<const Element>(impl_->elements).first(impl_->offsets[static_cast<std::size_t>(n) + 1]);
  }

  /// True when B(N) is the whole (finite) group.
  bool saturated() const noexcept { return impl_->saturated; }

  /// |Gamma| when the enumeration has saturated.
  std::optional<std::uint64_t> group_order() const {
    if (!saturated()) return std::nullopt;
    return impl_->gamma.back();
  }

  std::optional<int> find_norm(const Element& x) const {
    auto it = impl_->index.find(x.bytes());
    if (it == impl_->index.end()) return std::nullopt;
    auto pos = std::upper_bound(impl_->offsets.begin(), impl_->offsets.end(), it->second);
    return static_cast<int>(pos - impl_->offsets.begin()) - 1;
  }

  bool contains(const Element& x) const { return impl_->index.count(x.bytes()) != 0; }

  friend bool operator==(const GrowthTable& a, const GrowthTable& b) {
    return a.spec() == b.spec() && a.saturated() == b.saturated() && a.impl_->offsets == b.impl_->offsets &&
           a.impl_->elements == b.impl_->elements;
  }

 private:
  struct Impl {
    Impl(GroupSpec s, std::vector<std::vector<Element>> spheres, bool sat) : spec(std::move(s)), saturated(sat) {
      std::size_t total = 0;
      for (const auto& sp : spheres) total += sp.size();
      elements.reserve(total);
      offsets.push_back(0);
      for (auto& sp : spheres) {
        for (auto& e : sp) elements.push_back(std::move(e));
        offsets.push_back(elements.size());
        gamma.push_back(elements.size());
      }
      index.reserve(elements.size());
      for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i].bytes(), i);
    }

    GroupSpec spec;
    bool saturated;
    std::vector<Element> elements;
    std::vector<std::size_t> offsets;  // sphere n occupies [offsets[n], offsets[n+1])
    std::vector<std::uint64_t> gamma;
    std::unordered_map<std::string_view, std::size_t> index;  // views into `elements`
  };

  std::shared_ptr<const Impl> impl_;
};

struct EnumerationOptions {
  std::uint64_t memory_budget_bytes = std::uint64_t{2} << 30;
};

namespace detail {

// Rough resident cost of one ball element: the sphere copy, the visited-set
// node and the final index entry.
inline std::uint64_t bytes_per_element(std::size_t encoding_size) {
  std::uint64_t heap = encoding_size > 15 ? encoding_size + 1 : 0;
  return 3 * sizeof(Element) + 2 * heap + 96;
}

}  // namespace detail

/// Breadth-first enumeration of B(n) by left multiplication x -> s x.
template <GroupModel G>
GrowthTable enumerate_ball(const G& group, int n, const EnumerationOptions& options = {}) {
  if (n < 0) throw DomainError("radius must be non-negative");
  const auto& gens = group.generators();
  Element id = group.identity();
  const std::uint64_t per_element = detail::bytes_per_element(id.size());

  std::unordered_set<Element, ElementHash> visited;
  visited.insert(id);
  std::vector<std::vector<Element>> spheres{{id}};
  std::uint64_t used = per_element;
  bool saturated = gens.empty();

  for (int radius = 1; radius <= n; ++radius) {
    std::vector<Element> next;
    if (!saturated) {
      for (const Element& x : spheres.back()) {
        for (const auto& s : gens) {
          Element y = group.multiply(s.element, x);
          if (visited.contains(y)) continue;
          visited.insert(y);
          next.push_back(std::move(y));
          used += per_element;
          if (used > options.memory_budget_bytes) {
            throw ResourceError("ball enumeration exceeded memory budget of " + std::to_string(options.memory_budget_bytes) +
                                    " bytes at radius " + std::to_string(radius) + "; last completed radius " +
                                    std::to_string(radius - 1),
                                radius - 1);
          }
        }
      }
      std::sort(next.begin(), next.end());
      if (next.empty()) saturated = true;
    }
    spheres.push_back(std::move(next));
  }

  if (!saturated) {
    saturated = true;
    for (const Element& x : spheres.back()) {
      for (const auto& s : gens) {
        if (!visited.contains(group.multiply(s.element, x))) {
          saturated = false;
          break;
        }
      }
      if (!saturated) break;
    }
  }
  visited.clear();
  return GrowthTable(group.spec(), std::move(spheres), saturated);
}

/// Enumerates until gamma(N) > target (or the group saturates), with N at
/// least `min_radius`.
template <GroupModel G>
GrowthTable enumerate_ball_exceeding(const G& group, std::uint64_t target, int min_radius = 0,
                                     const EnumerationOptions& options = {}) {
  int radius = std::max(min_radius, 1);
  for (;;) {
    GrowthTable table = enumerate_ball(group, radius, options);
    if (table.saturated() || table.gamma().back() > target) return table;
    radius = radius < 4 ? radius + 1 : radius + radius / 4;
  }
}

/// Word length ||x||_S. Throws if x lies outside the enumerated ball.
inline int norm(const GrowthTable& table, const Element& x) {
  if (auto n = table.find_norm(x)) return *n;
  throw InsufficientDepthError("element outside the table radius " + std::to_string(table.radius()));
}

namespace detail {

template <class Predicate>
int first_radius(const GrowthTable& table, const Rational& t, Predicate reaches, const char* what) {
  auto gamma = table.gamma();
  auto it = std::partition_point(gamma.begin(), gamma.end(), [&](std::uint64_t g) { return !reaches(g); });
  if (it != gamma.end()) return static_cast<int>(it - gamma.begin());
  if (table.saturated()) {
    throw FiniteGroupError(std::string(what) + "(" + t.str() + ") undefined: the group is finite of order " +
                           std::to_string(gamma.back()));
  }
  throw InsufficientDepthError(std::string(what) + "(" + t.str() + ") not witnessed within radius " +
                               std::to_string(table.radius()) + " (gamma(N) = " + std::to_string(gamma.back()) + ")");
}

}  // namespace detail

/// phi(t) = min { n : gamma(n) >= t }.
inline int reverse_growth(const GrowthTable& table, const Rational& t) {
  return detail::first_radius(table, t, [&](std::uint64_t g) { return Rational(g) >= t; }, "phi");
}
inline int reverse_growth(const GrowthTable& table, double t) { return reverse_growth(table, exact_rational(t)); }

/// Strict variant: min { n : gamma(n) > t }.
inline int reverse_growth_strict(const GrowthTable& table, const Rational& t) {
  return detail::first_radius(table, t, [&](std::uint64_t g) { return Rational(g) > t; }, "phi_strict");
}
inline int reverse_growth_strict(const GrowthTable& table, double t) { return reverse_growth_strict(table, exact_rational(t)); }

/// Geodesic word for y, written left to right as s_n ... s_1. Recovered by
/// peeling s off the left with ||s^-1 y|| = ||y|| - 1, first-listed s wins.
template <GroupModel G>
std::vector<std::string> geodesic_word(const G& group, const GrowthTable& table, const Element& y) {
  int n = norm(table, y);
  std::vector<std::string> word;
  word.reserve(static_cast<std::size_t>(n));
  Element current = y;
  const auto& gens = group.generators();
  while (n > 0) {
    bool stepped = false;
    for (const auto& s : gens) {
      Element prev = group.multiply(group.inverse(s.element), current);
      auto m = table.find_norm(prev);
      if (m && *m == n - 1) {
        word.push_back(s.label);
        current = std::move(prev);
        --n;
        stepped = true;
        break;
      }
    }
    if (!stepped) throw Error("growth table inconsistent: no geodesic predecessor");
  }
  return word;
}

// ---------------------------------------------------------------------------
// Lemma checks

struct ClauseResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  std::string counterexample;
};

struct LemmaReport {
  std::vector<ClauseResult> clauses;
  bool passed() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.passed; });
  }
};

namespace detail {

inline void fail_once(ClauseResult& clause, const std::string& what) {
  if (clause.passed) clause.counterexample = what;
  clause.passed = false;
}

// Radius up to which gamma is strictly increasing; past it a finite group
// has saturated.
inline int strict_growth_radius(const GrowthTable& table) {
  auto gamma = table.gamma();
  int n = 0;
  while (n + 1 < static_cast<int>(gamma.size()) && gamma[static_cast<std::size_t>(n) + 1] > gamma[static_cast<std::size_t>(n)]) ++n;
  return n;
}

}  // namespace detail

/// Checks clauses (i)-(iii) of the reverse-growth lemma on the tabulated range.
/// Clause (ii) is checked on the strictly increasing part of gamma, which is
/// the whole table for an infinite group.
inline LemmaReport check_lemma_properties(const GrowthTable& table) {
  LemmaReport report;
  auto gamma = table.gamma();
  const std::uint64_t top = gamma.back();

  ClauseResult monotone{"(i) phi non-decreasing", true, 0, {}};
  {
    const std::uint64_t step = top <= 2'000'000 ? 1 : top / 1'000'000;
    int prev = reverse_growth(table, Rational(0));
    for (std::uint64_t m = 0; m <= top; m += step) {
      for (Rational t : {Rational(m), Rational(2 * m + 1, 2)}) {
        if (t > Rational(top)) continue;
        int cur = reverse_growth(table, t);
        ++monotone.checks;
        if (cur < prev) detail::fail_once(monotone, "phi(" + t.str() + ") = " + std::to_string(cur) + " < " + std::to_string(prev));
        prev = cur;
      }
    }
  }
  report.clauses.push_back(monotone);

  ClauseResult left_inverse{"(ii) phi(gamma(n)) = n", true, 0, {}};
  const int strict_top = detail::strict_growth_radius(table);
  for (int n = 0; n <= strict_top; ++n) {
    int back = reverse_growth(table, Rational(gamma[static_cast<std::size_t>(n)]));
    ++left_inverse.checks;
    if (back != n) detail::fail_once(left_inverse, "phi(gamma(" + std::to_string(n) + ")) = " + std::to_string(back));
  }
  report.clauses.push_back(left_inverse);

  ClauseResult right{"(iii) gamma(phi(m)) >= m, equality on gamma(N)", true, 0, {}};
  {
    std::unordered_set<std::uint64_t> values(gamma.begin(), gamma.end());
    const std::uint64_t step = top <= 2'000'000 ? 1 : top / 1'000'000;
    auto check = [&](std::uint64_t m) {
      std::uint64_t g = gamma[static_cast<std::size_t>(reverse_growth(table, Rational(m)))];
      ++right.checks;
      if (g < m) detail::fail_once(right, "gamma(phi(" + std::to_string(m) + ")) = " + std::to_string(g) + " < m");
      if (values.count(m) && g != m) detail::fail_once(right, "gamma(phi(" + std::to_string(m) + ")) = " + std::to_string(g) + " != m");
    };
    for (std::uint64_t m = 0; m <= top; m += step) check(m);
    for (auto g : gamma) check(g);
  }
  report.clauses.push_back(right);
  return report;
}

enum class LemmaIvStatus { Passed, HypothesisFailure, InequalityFailure };

struct LemmaIvReport {
  LemmaIvStatus status = LemmaIvStatus::Passed;
  double beta = 0;
  std::size_t grid_points = 0;
  std::string detail;
};

/// Clause (iv): if gamma(n) >= g(n+1) for every tabulated n, then
/// phi(t) <= g^-1(t) for t in (g(0), gamma(N)].
inline LemmaIvReport check_lemma_iv(const GrowthTable& table, const std::function<double(double)>& g,
                                    const std::function<double(double)>& g_inverse, std::size_t grid = 1000) {
  LemmaIvReport report;
  auto gamma = table.gamma();
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    double bound = g(static_cast<double>(n) + 1.0);
    if (static_cast<long double>(gamma[n]) < static_cast<long double>(bound)) {
      report.status = LemmaIvStatus::HypothesisFailure;
      report.detail = "gamma(" + std::to_string(n) + ") = " + std::to_string(gamma[n]) + " < g(" + std::to_string(n + 1) + ")";
      return report;
    }
  }
  report.beta = g(0.0);
  const double top = static_cast<double>(gamma.back());
  if (!(top > report.beta)) return report;

  std::vector<double> ts;
  for (std::size_t k = 1; k <= grid; ++k) ts.push_back(report.beta + (top - report.beta) * static_cast<double>(k) / static_cast<double>(grid));
  if (top - report.beta <= 100'000) {
    for (double t = std::floor(report.beta) + 1; t <= top; t += 1) ts.push_back(t);
  }
  for (double t : ts) {
    if (!(t > report.beta)) continue;
    int phi = reverse_growth(table, t);
    double inv = g_inverse(t);
    ++report.grid_points;
    if (static_cast<double>(phi) > inv + 1e-12 * std::max(1.0, std::fabs(inv))) {
      report.status = LemmaIvStatus::InequalityFailure;
      report.detail = "phi(" + std::to_string(t) + ") = " + std::to_string(phi) + " > g^-1 = " + std::to_string(inv);
      return report;
    }
  }
  return report;
}

}  // namespace isop
