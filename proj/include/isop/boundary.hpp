#pragma once

// Vertex boundaries of a finite subset D under the left action x -> s x, and
// the objects used to bound |D| by |boundary D|: the exit set E_y, the stay
// set I_y, the exit map along a geodesic word for y, and the translate y
// minimising |I_y| over a ball.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "isop/error.hpp"
#include "isop/group.hpp"
#include "isop/growth.hpp"
#include "isop/rational.hpp"
#include "isop/subset.hpp"

namespace isop {

namespace detail {

inline void require_nonempty(const FiniteSubset& d) {
  if (d.empty()) throw PreconditionError("the subset must be nonempty");
}

template <GroupModel G>
void require_same_group(const G& group, const FiniteSubset& d) {
  if (!(group.spec() == d.spec())) throw TypeError("subset belongs to " + d.spec().render() + ", not " + group.spec().render());
}

}  // namespace detail

/// { x in D : s x not in D for some s in S }.
template <GroupModel G>
FiniteSubset interior_boundary(const G& group, const FiniteSubset& d) {
  detail::require_nonempty(d);
  detail::require_same_group(group, d);
  std::vector<Element> out;
  for (const Element& x : d.elements()) {
    for (const auto& s : group.generators()) {
      if (!d.contains(group.multiply(s.element, x))) {
        out.push_back(x);
        break;
      }
    }
  }
  return FiniteSubset(d.spec(), std::move(out));
}

/// { x not in D : s x in D for some s in S }, computed as S D \ D (S is
/// symmetric, so both descriptions agree).
template <GroupModel G>
FiniteSubset exterior_boundary(const G& group, const FiniteSubset& d) {
  detail::require_nonempty(d);
  detail::require_same_group(group, d);
  std::vector<Element> out;
  for (const Element& x : d.elements()) {
    for (const auto& s : group.generators()) {
      Element y = group.multiply(s.element, x);
      if (!d.contains(y)) out.push_back(std::move(y));
    }
  }
  return FiniteSubset(d.spec(), std::move(out));
}

struct BoundaryReport {
  FiniteSubset interior;
  FiniteSubset exterior;
  std::size_t generator_count = 0;

  /// |dD| / |S| <= |d'D| <= |S| |dD|.
  bool sandwich_holds() const {
    const auto in = interior.size();
    const auto ex = exterior.size();
    return in <= generator_count * ex && ex <= generator_count * in;
  }
};

template <GroupModel G>
BoundaryReport boundaries(const G& group, const FiniteSubset& d) {
  return {interior_boundary(group, d), exterior_boundary(group, d), group.generators().size()};
}

struct ExitStaySets {
  FiniteSubset exit;  // E_y = { x in D : y x not in D }
  FiniteSubset stay;  // I_y = D \ E_y
};

/// Partitions D by whether y x stays in D, and cross-checks I_y = y^-1 D cap D.
template <GroupModel G>
ExitStaySets exit_stay_sets(const G& group, const FiniteSubset& d, const Element& y) {
  detail::require_nonempty(d);
  detail::require_same_group(group, d);
  std::vector<Element> exit;
  std::vector<Element> stay;
  for (const Element& x : d.elements()) {
    (d.contains(group.multiply(y, x)) ? stay : exit).push_back(x);
  }
  ExitStaySets sets{FiniteSubset(d.spec(), std::move(exit)), FiniteSubset(d.spec(), std::move(stay))};

  const Element y_inv = group.inverse(y);
  std::vector<Element> pulled;
  for (const Element& z : d.elements()) {
    Element w = group.multiply(y_inv, z);
    if (d.contains(w)) pulled.push_back(std::move(w));
  }
  if (!(FiniteSubset(d.spec(), std::move(pulled)) == sets.stay)) throw Error("I_y differs from y^-1 D cap D");
  return sets;
}

template <GroupModel G>
std::size_t stay_count(const G& group, const FiniteSubset& d, const Element& y) {
  std::size_t count = 0;
  for (const Element& x : d.elements()) count += d.contains(group.multiply(y, x)) ? 1 : 0;
  return count;
}

enum class BoundaryVariant { Interior, Exterior };

struct ExitAssignment {
  Element point;  // x in E_y
  int step = 0;   // m with f(x) = y_m x
  Element image;  // f(x)
};

struct ExitMap {
  BoundaryVariant variant = BoundaryVariant::Interior;
  int word_length = 0;
  std::vector<ExitAssignment> assignments;  // sorted by point
  std::size_t max_fiber = 0;
  bool images_in_boundary = true;
  /// Every x in f^-1(z) is one of y_k^-1 z for k in the variant's range.
  bool fibers_within_chain = true;

  bool fiber_bound_holds() const { return max_fiber <= static_cast<std::size_t>(word_length); }
  bool holds() const { return images_in_boundary && fibers_within_chain && fiber_bound_holds(); }
};

/// Exit map along the chain y_0 = e, y_k = s_k y_{k-1} of a geodesic word for y.
/// Interior variant: f(x) = y_m x with m the last k <= n-1 where y_k x in D.
/// Exterior variant: m is the last k <= n where y_k x lies in the exterior
/// boundary.
template <GroupModel G>
ExitMap exit_map(const G& group, const FiniteSubset& d, std::span<const std::string> word, BoundaryVariant variant,
                 const GrowthTable& table) {
  detail::require_nonempty(d);
  detail::require_same_group(group, d);
  const auto chain = word_prefix_chain(group, word);
  const int n = static_cast<int>(word.size());
  const Element& y = chain.back();
  if (n > table.radius() && !table.saturated()) {
    throw InsufficientDepthError("table radius " + std::to_string(table.radius()) + " cannot certify a word of length " + std::to_string(n));
  }
  const int y_norm = norm(table, y);
  if (y_norm != n) {
    throw PreconditionError("word of length " + std::to_string(n) + " is not geodesic (norm " + std::to_string(y_norm) + ")");
  }

  const FiniteSubset target = variant == BoundaryVariant::Interior ? interior_boundary(group, d) : exterior_boundary(group, d);
  ExitMap map{variant, n, {}, 0, true, true};
  std::map<Element, std::vector<std::size_t>> fibers;

  for (const Element& x : d.elements()) {
    if (d.contains(group.multiply(y, x))) continue;
    int m = -1;
    Element image;
    const int last = variant == BoundaryVariant::Interior ? n - 1 : n;
    for (int k = last; k >= 0; --k) {
      Element z = group.multiply(chain[static_cast<std::size_t>(k)], x);
      bool hit = variant == BoundaryVariant::Interior ? d.contains(z) : target.contains(z);
      if (hit) {
        m = k;
        image = std::move(z);
        break;
      }
    }
    if (m < 0) throw Error("exit chain never reaches the exterior boundary");
    if (!target.contains(image)) map.images_in_boundary = false;
    fibers[image].push_back(map.assignments.size());
    map.assignments.push_back({x, m, std::move(image)});
  }

  const int first = variant == BoundaryVariant::Interior ? 0 : 1;
  const int last = variant == BoundaryVariant::Interior ? n - 1 : n;
  for (const auto& [z, members] : fibers) {
    map.max_fiber = std::max(map.max_fiber, members.size());
    std::unordered_set<Element, ElementHash> allowed;
    for (int k = first; k <= last; ++k) allowed.insert(group.multiply(group.inverse(chain[static_cast<std::size_t>(k)]), z));
    for (auto i : members) {
      if (!allowed.contains(map.assignments[i].point)) map.fibers_within_chain = false;
    }
  }
  return map;
}

struct ConvolutionReport {
  std::uint64_t sum = 0;       // sum over y of |I_y|
  std::uint64_t expected = 0;  // |D|^2
  std::size_t support = 0;     // |{ y : I_y nonempty }|
  bool holds() const { return sum == expected; }
};

/// Sums |I_y| over the finite support D D^-1 and compares with |D|^2.
template <GroupModel G>
ConvolutionReport convolution_identity(const G& group, const FiniteSubset& d) {
  detail::require_nonempty(d);
  detail::require_same_group(group, d);
  std::unordered_set<Element, ElementHash> candidates;
  std::vector<Element> inverses;
  inverses.reserve(d.size());
  for (const Element& x : d.elements()) inverses.push_back(group.inverse(x));
  for (const Element& a : d.elements()) {
    for (const Element& b_inv : inverses) candidates.insert(group.multiply(a, b_inv));
  }
  ConvolutionReport report;
  report.expected = static_cast<std::uint64_t>(d.size()) * d.size();
  for (const Element& y : candidates) {
    auto c = stay_count(group, d, y);
    if (c) ++report.support;
    report.sum += c;
  }
  return report;
}

struct WitnessChecks {
  bool partition = false;        // E_y and I_y partition D
  bool stay_bound = false;       // |I_y| <= |D| / lambda
  bool averaging_bound = false;  // gamma(n) |I_y| <= |D|^2
  bool exit_bound = false;       // |E_y| <= ||y|| |dD|
  bool norm_within_radius = false;
  bool interior_map = false;     // images in dD, fibers <= ||y||
  bool exterior_map = false;     // images in d'D, fibers <= ||y||
  bool all() const {
    return partition && stay_bound && averaging_bound && exit_bound && norm_within_radius && interior_map && exterior_map;
  }
};

struct WitnessReport {
  Rational lambda;
  int n = 0;  // phi(lambda |D|)
  std::uint64_t gamma_n = 0;
  Element y;
  int y_norm = 0;
  std::vector<std::string> y_word;
  FiniteSubset exit;
  FiniteSubset stay;
  std::size_t subset_size = 0;
  std::size_t interior_size = 0;
  std::size_t exterior_size = 0;
  ExitMap interior_map;
  ExitMap exterior_map;
  WitnessChecks checks;
};

namespace detail {

template <GroupModel G>
void check_lambda(const G& group, const FiniteSubset& d, const Rational& lambda) {
  if (lambda <= 1) throw DomainError("lambda must exceed 1 (got " + lambda.str() + ")");
  if (auto order = group.order()) {
    if (lambda * Rational(d.size()) > Rational(*order)) {
      throw DomainError("lambda " + lambda.str() + " exceeds |G|/|D| = " + std::to_string(*order) + "/" + std::to_string(d.size()));
    }
  }
}

}  // namespace detail

/// Finds y in B(n), n = phi(lambda |D|), minimising |I_y| (ties: smaller norm,
/// then smaller encoding) and reconstructs every object of the argument.
template <GroupModel G>
WitnessReport find_witness(const G& group, const FiniteSubset& d, const Rational& lambda, const GrowthTable& table) {
  detail::require_nonempty(d);
  detail::require_same_group(group, d);
  detail::check_lambda(group, d, lambda);
  const std::size_t size = d.size();
  const int n = reverse_growth(table, lambda * Rational(size));

  std::size_t best = SIZE_MAX;
  const Element* best_y = nullptr;
  for (const Element& y : table.ball(n)) {
    std::size_t c = stay_count(group, d, y);
    if (c < best) {
      best = c;
      best_y = &y;
      if (c == 0) break;
    }
  }

  WitnessReport w{lambda, n, table.gamma(n), *best_y, 0, {}, FiniteSubset(d.spec(), {}), FiniteSubset(d.spec(), {}), size, 0, 0, {}, {}, {}};
  w.y_norm = norm(table, w.y);
  w.y_word = geodesic_word(group, table, w.y);
  auto sets = exit_stay_sets(group, d, w.y);
  w.exit = std::move(sets.exit);
  w.stay = std::move(sets.stay);
  const auto bounds = boundaries(group, d);
  w.interior_size = bounds.interior.size();
  w.exterior_size = bounds.exterior.size();
  w.interior_map = exit_map(group, d, w.y_word, BoundaryVariant::Interior, table);
  w.exterior_map = exit_map(group, d, w.y_word, BoundaryVariant::Exterior, table);

  const auto exit_size = w.exit.size();
  const auto stay_size = w.stay.size();
  w.checks.partition = exit_size + stay_size == size && std::none_of(w.exit.elements().begin(), w.exit.elements().end(),
                                                                     [&](const Element& x) { return w.stay.contains(x); });
  w.checks.stay_bound = Rational(stay_size) * lambda <= Rational(size);
  w.checks.averaging_bound = static_cast<BigInt>(w.gamma_n) * stay_size <= static_cast<BigInt>(size) * size;
  w.checks.exit_bound = exit_size <= static_cast<std::size_t>(w.y_norm) * w.interior_size;
  w.checks.norm_within_radius = w.y_norm <= n && static_cast<int>(w.y_word.size()) == w.y_norm;
  w.checks.interior_map = w.interior_map.holds() && w.interior_map.assignments.size() == exit_size;
  w.checks.exterior_map = w.exterior_map.holds() && w.exterior_map.assignments.size() == exit_size;
  return w;
}

}  // namespace isop
