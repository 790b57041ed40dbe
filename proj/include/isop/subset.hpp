#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "isop/cache.hpp"
#include "isop/error.hpp"
#include "isop/group.hpp"
#include "isop/growth.hpp"

namespace isop {

/// A finite set of elements, kept sorted by encoding.
class FiniteSubset {
 public:
  FiniteSubset(GroupSpec spec, std::vector<Element> elements, std::optional<int> ball_radius = std::nullopt)
      : spec_(std::move(spec)), elements_(std::move(elements)), ball_radius_(ball_radius) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    members_.reserve(elements_.size());
    members_.insert(elements_.begin(), elements_.end());
  }

  const GroupSpec& spec() const noexcept { return spec_; }
  std::span<const Element> elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(const Element& x) const { return members_.contains(x); }
  std::optional<int> ball_radius() const noexcept { return ball_radius_; }

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) {
    return a.spec_ == b.spec_ && a.elements_ == b.elements_;
  }

 private:
  GroupSpec spec_;
  std::vector<Element> elements_;
  std::unordered_set<Element, ElementHash> members_;
  std::optional<int> ball_radius_;
};

// ---------------------------------------------------------------------------
// Subset sources: `{e1,e2,...}`, `ball:<r>`, `random:<size>:<seed>[:<r>]`.

struct ExplicitSource {
  std::vector<std::string> elements;
};
struct BallSource {
  int radius = 0;
};
/// Uniform sample without replacement from B(radius). Without an explicit
/// radius the smallest ball holding at least twice `size` elements is used.
struct RandomSource {
  std::size_t size = 0;
  std::uint64_t seed = 0;
  std::optional<int> radius;
};
using SubsetSource = std::variant<ExplicitSource, BallSource, RandomSource>;

namespace detail {

inline std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && (text[i] == '(' || text[i] == '[')) ++depth;
    if (i < text.size() && (text[i] == ')' || text[i] == ']')) --depth;
    if (depth < 0) throw ParseError("unbalanced parentheses in '" + std::string(text) + "'");
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      auto part = trim(text.substr(start, i - start));
      if (!part.empty()) parts.emplace_back(part);
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + std::string(text) + "'");
  return parts;
}

inline std::uint64_t parse_u64(std::string_view token, std::string_view context) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("invalid number '" + std::string(token) + "' in '" + std::string(context) + "'");
  }
  return v;
}

/// Unbiased draw in [0, bound) by rejection; independent of the standard
/// library's distribution implementations.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

}  // namespace detail

inline SubsetSource parse_subset_source(std::string_view text) {
  std::string_view t = detail::trim(text);
  if (t.empty()) throw ParseError("empty subset literal");
  if (t.front() == '{') {
    if (t.back() != '}') throw ParseError("subset literal missing '}': '" + std::string(text) + "'");
    return ExplicitSource{detail::split_top_level(t.substr(1, t.size() - 2))};
  }
  if (t.starts_with("ball:")) {
    auto r = detail::parse_u64(t.substr(5), t);
    return BallSource{static_cast<int>(r)};
  }
  if (t.starts_with("random:")) {
    std::vector<std::string_view> fields;
    std::string_view rest = t.substr(7);
    for (std::size_t pos; (pos = rest.find(':')) != std::string_view::npos; rest.remove_prefix(pos + 1)) fields.push_back(rest.substr(0, pos));
    fields.push_back(rest);
    if (fields.size() < 2 || fields.size() > 3) throw ParseError("expected random:<size>:<seed>[:<radius>] in '" + std::string(text) + "'");
    RandomSource src{detail::parse_u64(fields[0], t), detail::parse_u64(fields[1], t), std::nullopt};
    if (fields.size() == 3) src.radius = static_cast<int>(detail::parse_u64(fields[2], t));
    if (src.size == 0) throw DomainError("random subset size must be positive");
    return src;
  }
  throw ParseError("unrecognised subset literal '" + std::string(text) + "'");
}

inline std::string render_source(const SubsetSource& source) {
  struct Visitor {
    std::string operator()(const ExplicitSource& s) const {
      std::string out = "{";
      for (std::size_t i = 0; i < s.elements.size(); ++i) out += (i ? "," : "") + s.elements[i];
      return out + "}";
    }
    std::string operator()(const BallSource& s) const { return "ball:" + std::to_string(s.radius); }
    std::string operator()(const RandomSource& s) const {
      std::string out = "random:" + std::to_string(s.size) + ":" + std::to_string(s.seed);
      if (s.radius) out += ":" + std::to_string(*s.radius);
      return out;
    }
  };
  return std::visit(Visitor{}, source);
}

template <GroupModel G>
FiniteSubset sample_subset(const G& group, const GrowthTable& table, std::size_t size, std::uint64_t seed, int radius) {
  auto ball = table.ball(radius);
  if (size > ball.size()) {
    throw DomainError("cannot draw " + std::to_string(size) + " distinct elements from a ball of " + std::to_string(ball.size()));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(ball.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<Element> chosen;
  chosen.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t j = i + detail::uniform_below(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
    chosen.push_back(ball[idx[i]]);
  }
  return FiniteSubset(group.spec(), std::move(chosen));
}

/// Radius used by a random source without an explicit one.
inline int default_sampling_radius(const GrowthTable& table, std::size_t size) {
  for (int r = 0; r <= table.radius(); ++r) {
    if (table.gamma(r) >= 2 * size) return r;
  }
  if (table.saturated()) {
    if (table.gamma().back() >= size) return table.radius();
    throw DomainError("cannot draw " + std::to_string(size) + " distinct elements from a group of order " +
                      std::to_string(table.gamma().back()));
  }
  throw InsufficientDepthError("table too shallow to hold a ball of " + std::to_string(2 * size) + " elements");
}

/// Builds the subset named by `source`.
template <GroupModel G>
FiniteSubset materialize(const G& group, const SubsetSource& source, const CacheOptions& cache = {}) {
  if (auto* s = std::get_if<ExplicitSource>(&source)) {
    if (s->elements.empty()) throw DomainError("subset literal is empty");
    std::vector<Element> elements;
    for (const auto& text : s->elements) elements.push_back(group.parse_element(text));
    return FiniteSubset(group.spec(), std::move(elements));
  }
  if (auto* s = std::get_if<BallSource>(&source)) {
    GrowthTable table = cached_ball(group, s->radius, cache);
    auto ball = table.ball(s->radius);
    return FiniteSubset(group.spec(), std::vector<Element>(ball.begin(), ball.end()), s->radius);
  }
  const auto& r = std::get<RandomSource>(source);
  int radius = 0;
  if (r.radius) {
    radius = *r.radius;
  } else {
    GrowthTable probe = enumerate_ball_exceeding(group, 2 * r.size - 1, 0, cache.enumeration);
    radius = default_sampling_radius(probe, r.size);
  }
  GrowthTable table = cached_ball(group, radius, cache);
  return sample_subset(group, table, r.size, r.seed, radius);
}

/// Every proper nonempty subset of a finite group, in increasing bitmask
/// order over the elements of `table.ball()`.
inline std::vector<FiniteSubset> all_proper_subsets(const GrowthTable& table) {
  if (!table.saturated()) throw DomainError("exhaustive subsets need a saturated (finite) table");
  auto ball = table.ball();
  if (ball.size() > 20) throw DomainError("exhaustive subsets limited to groups of order <= 20");
  std::vector<FiniteSubset> out;
  const std::uint64_t full = (std::uint64_t{1} << ball.size()) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    std::vector<Element> elements;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (mask >> i & 1u) elements.push_back(ball[i]);
    }
    out.emplace_back(table.spec(), std::move(elements));
  }
  return out;
}

template <GroupModel G>
std::string render_subset(const G& group, const FiniteSubset& d) {
  std::string out = "{";
  bool first = true;
  for (const Element& e : d.elements()) {
    if (!first) out += ',';
    out += group.render(e);
    first = false;
  }
  return out + "}";
}

}  // namespace isop
