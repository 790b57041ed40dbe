#pragma once

// Computable models of finitely generated groups together with a symmetric
// generating set. Elements are canonical byte strings: two elements of the
// same group are equal iff their encodings are byte-identical, so sets of
// elements can hash and compare bytes directly.
//
// Every encoding starts with a one-byte family tag followed by the family
// payload:
//   FreeAbelian  'Z'  d little-endian int64 coordinates
//   Free         'F'  one byte per letter of the freely reduced word
//                     (2i for a_i, 2i+1 for a_i^-1)
//   Heisenberg   'H'  int64 x, y, z; (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')
//   Cyclic       'C'  int64 rotation in [0,n), reflection byte (always 0)
//   Dihedral     'D'  int64 rotation in [0,n), reflection byte (0 or 1)
//   SymmetricPerm'S'  n bytes, the image array of the permutation

#include <algorithm>
#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "isop/error.hpp"

namespace isop {

enum class Family { FreeAbelian, Free, Heisenberg, Cyclic, Dihedral, SymmetricPerm };

struct GroupSpec {
  Family family = Family::FreeAbelian;
  std::int64_t parameter = 1;  // rank or order; unused for Heisenberg

  std::string render() const {
    switch (family) {
      case Family::FreeAbelian: return "Z:" + std::to_string(parameter);
      case Family::Free: return "free:" + std::to_string(parameter);
      case Family::Heisenberg: return "heisenberg";
      case Family::Cyclic: return "cyclic:" + std::to_string(parameter);
      case Family::Dihedral: return "dihedral:" + std::to_string(parameter);
      case Family::SymmetricPerm: return "sym:" + std::to_string(parameter);
    }
    return {};
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_int(std::string_view token, std::string_view context) {
  std::int64_t value = 0;
  std::string_view t = trim(token);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError("invalid integer '" + std::string(token) + "' in '" + std::string(context) + "'");
  }
  return value;
}

inline void put_i64(std::string& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xffu));
}

inline std::int64_t get_i64(std::string_view in, std::size_t offset) {
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return static_cast<std::int64_t>(u);
}

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

// Splits "(a,b,c)" or a bare "a" into its comma-separated fields.
inline std::vector<std::string_view> tuple_fields(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && (t.front() == '(' || t.front() == '[')) {
    char close = t.front() == '(' ? ')' : ']';
    if (t.back() != close) throw ParseError("unbalanced tuple '" + std::string(text) + "'");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<std::string_view> fields;
  if (trim(t).empty()) return fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= t.size(); ++i) {
    if (i == t.size() || t[i] == ',') {
      fields.push_back(trim(t.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace detail

/// Parses `Z:<d> | free:<k> | heisenberg | cyclic:<n> | dihedral:<n> | sym:<n>`.
inline GroupSpec parse_group_spec(std::string_view text) {
  std::string_view t = detail::trim(text);
  if (t.empty()) throw ParseError("empty group spec");
  if (t == "heisenberg") return {Family::Heisenberg, 0};

  auto colon = t.find(':');
  std::string_view name = t.substr(0, colon);
  if (colon == std::string_view::npos) {
    throw ParseError("unknown group family '" + std::string(name) + "' (expected Z:<d>, free:<k>, heisenberg, cyclic:<n>, dihedral:<n> or sym:<n>)");
  }
  std::string_view arg = t.substr(colon + 1);

  struct Entry {
    std::string_view name;
    Family family;
    std::int64_t min;
    std::int64_t max;
  };
  static constexpr std::array<Entry, 5> kFamilies{{
      {"Z", Family::FreeAbelian, 1, 64},
      {"free", Family::Free, 1, 26},
      {"cyclic", Family::Cyclic, 1, std::int64_t{1} << 62},
      {"dihedral", Family::Dihedral, 2, std::int64_t{1} << 62},
      {"sym", Family::SymmetricPerm, 2, 64},
  }};
  auto it = std::find_if(kFamilies.begin(), kFamilies.end(), [&](const Entry& e) { return e.name == name; });
  if (it == kFamilies.end()) throw ParseError("unknown group family '" + std::string(name) + "'");

  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (arg.empty() || ec == std::errc::invalid_argument || ptr != arg.data() + arg.size()) {
    throw ParseError("invalid parameter '" + std::string(arg) + "' for family '" + std::string(name) + "'");
  }
  if (ec == std::errc::result_out_of_range || value < it->min || value > it->max) {
    throw DomainError("parameter " + std::string(arg) + " for '" + std::string(name) + "' outside [" +
                      std::to_string(it->min) + ", " + std::to_string(it->max) + "]");
  }
  return {it->family, value};
}

/// Canonical byte encoding of a group element.
class Element {
 public:
  Element() = default;
  explicit Element(std::string bytes) : bytes_(std::move(bytes)) {}

  std::string_view bytes() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }
  const std::string& str() const noexcept { return bytes_; }

  friend bool operator==(const Element&, const Element&) = default;
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    int c = a.bytes_.compare(b.bytes_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  std::string bytes_;
};

struct ElementHash {
  using is_transparent = void;
  std::size_t operator()(const Element& e) const noexcept { return std::hash<std::string_view>{}(e.bytes()); }
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

struct Generator {
  std::string label;
  Element element;
};

/// Ordered symmetric generating set. The order is the global tie-breaker:
/// whenever a minimum over generators is taken, the first-listed one wins.
class GeneratingSet {
 public:
  GeneratingSet() = default;
  explicit GeneratingSet(std::vector<Generator> gens) : gens_(std::move(gens)) {}

  std::size_t size() const noexcept { return gens_.size(); }
  bool empty() const noexcept { return gens_.empty(); }
  const Generator& operator[](std::size_t i) const { return gens_[i]; }
  auto begin() const noexcept { return gens_.begin(); }
  auto end() const noexcept { return gens_.end(); }

  std::optional<std::size_t> index_of(std::string_view label) const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (gens_[i].label == label) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> index_of(const Element& e) const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (gens_[i].element == e) return i;
    }
    return std::nullopt;
  }

 private:
  std::vector<Generator> gens_;
};

// ---------------------------------------------------------------------------
// Concrete models

class FreeAbelianGroup {
 public:
  explicit FreeAbelianGroup(std::int64_t rank) : rank_(rank) {
    if (rank < 1) throw DomainError("Z:<d> requires d >= 1");
    std::vector<Generator> gens;
    for (std::int64_t i = 0; i < rank; ++i) {
      std::string axis = rank <= 3 ? std::string(1, "xyz"[i]) : "e" + std::to_string(i + 1);
      std::vector<std::int64_t> v(static_cast<std::size_t>(rank), 0);
      v[static_cast<std::size_t>(i)] = 1;
      gens.push_back({"+" + axis, encode(v)});
      v[static_cast<std::size_t>(i)] = -1;
      gens.push_back({"-" + axis, encode(v)});
    }
    gens_ = GeneratingSet(std::move(gens));
  }

  GroupSpec spec() const { return {Family::FreeAbelian, rank_}; }
  const GeneratingSet& generators() const noexcept { return gens_; }
  std::optional<std::uint64_t> order() const { return std::nullopt; }
  std::int64_t rank() const noexcept { return rank_; }

  Element identity() const { return encode(std::vector<std::int64_t>(static_cast<std::size_t>(rank_), 0)); }

  Element encode(std::span<const std::int64_t> coords) const {
    if (static_cast<std::int64_t>(coords.size()) != rank_) throw TypeError("coordinate count does not match rank");
    std::string out(1, 'Z');
    out.reserve(1 + 8 * coords.size());
    for (auto c : coords) detail::put_i64(out, c);
    return Element(std::move(out));
  }

  std::vector<std::int64_t> decode(const Element& e) const {
    validate(e);
    std::vector<std::int64_t> v(static_cast<std::size_t>(rank_));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = detail::get_i64(e.bytes(), 1 + 8 * i);
    return v;
  }

  void validate(const Element& e) const {
    if (e.size() != 1 + 8 * static_cast<std::size_t>(rank_) || e.bytes()[0] != 'Z') {
      throw TypeError("element is not an encoding for " + spec().render());
    }
  }

  Element multiply(const Element& a, const Element& b) const {
    auto x = decode(a);
    auto y = decode(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return encode(x);
  }

  Element inverse(const Element& a) const {
    auto x = decode(a);
    for (auto& c : x) c = -c;
    return encode(x);
  }

  std::string render(const Element& e) const {
    auto v = decode(e);
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(v[i]);
    }
    return out + ")";
  }

  Element parse_element(std::string_view text) const {
    auto fields = detail::tuple_fields(text);
    if (static_cast<std::int64_t>(fields.size()) != rank_) {
      throw ParseError("expected " + std::to_string(rank_) + " coordinates in '" + std::string(text) + "'");
    }
    std::vector<std::int64_t> v;
    for (auto f : fields) v.push_back(detail::parse_int(f, text));
    return encode(v);
  }

 private:
  std::int64_t rank_;
  GeneratingSet gens_;
};

class FreeGroup {
 public:
  explicit FreeGroup(std::int64_t rank) : rank_(rank) {
    if (rank < 1 || rank > 26) throw DomainError("free:<k> requires 1 <= k <= 26");
    std::vector<Generator> gens;
    for (std::int64_t i = 0; i < rank; ++i) {
      gens.push_back({letter_label(static_cast<unsigned char>(2 * i)), Element(std::string{'F', static_cast<char>(2 * i)})});
      gens.push_back({letter_label(static_cast<unsigned char>(2 * i + 1)), Element(std::string{'F', static_cast<char>(2 * i + 1)})});
    }
    gens_ = GeneratingSet(std::move(gens));
  }

  GroupSpec spec() const { return {Family::Free, rank_}; }
  const GeneratingSet& generators() const noexcept { return gens_; }
  std::optional<std::uint64_t> order() const { return std::nullopt; }

  Element identity() const { return Element(std::string(1, 'F')); }

  void validate(const Element& e) const {
    auto b = e.bytes();
    if (b.empty() || b[0] != 'F') throw TypeError("element is not an encoding for " + spec().render());
    for (std::size_t i = 1; i < b.size(); ++i) {
      auto letter = static_cast<unsigned char>(b[i]);
      if (letter >= 2 * rank_) throw TypeError("letter out of range for " + spec().render());
      if (i > 1 && (static_cast<unsigned char>(b[i - 1]) ^ 1u) == letter) {
        throw TypeError("free word is not reduced");
      }
    }
  }

  Element multiply(const Element& a, const Element& b) const {
    validate(a);
    validate(b);
    std::string_view left = a.bytes().substr(1);
    std::string_view right = b.bytes().substr(1);
    while (!left.empty() && !right.empty() &&
           (static_cast<unsigned char>(left.back()) ^ 1u) == static_cast<unsigned char>(right.front())) {
      left.remove_suffix(1);
      right.remove_prefix(1);
    }
    std::string out(1, 'F');
    out.reserve(1 + left.size() + right.size());
    out.append(left);
    out.append(right);
    return Element(std::move(out));
  }

  Element inverse(const Element& a) const {
    validate(a);
    std::string out(1, 'F');
    auto word = a.bytes().substr(1);
    for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(static_cast<char>(static_cast<unsigned char>(*it) ^ 1u));
    return Element(std::move(out));
  }

  std::string render(const Element& e) const {
    validate(e);
    auto word = e.bytes().substr(1);
    if (word.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (i) out += '*';
      out += letter_label(static_cast<unsigned char>(word[i]));
    }
    return out;
  }

  Element parse_element(std::string_view text) const {
    std::string_view t = detail::trim(text);
    Element result = identity();
    if (t == "e") return result;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
      if (i == t.size() || t[i] == '*') {
        auto token = detail::trim(t.substr(start, i - start));
        auto idx = gens_.index_of(token);
        if (!idx) throw ParseError("unknown letter '" + std::string(token) + "' in '" + std::string(text) + "'");
        result = multiply(result, gens_[*idx].element);
        start = i + 1;
      }
    }
    return result;
  }

 private:
  static std::string letter_label(unsigned char letter) {
    std::string s(1, static_cast<char>('a' + letter / 2));
    if (letter % 2) s += "^-1";
    return s;
  }

  std::int64_t rank_;
  GeneratingSet gens_;
};

class HeisenbergGroup {
 public:
  HeisenbergGroup() {
    gens_ = GeneratingSet({{"a", encode(1, 0, 0)}, {"a^-1", encode(-1, 0, 0)}, {"b", encode(0, 1, 0)}, {"b^-1", encode(0, -1, 0)}});
  }

  GroupSpec spec() const { return {Family::Heisenberg, 0}; }
  const GeneratingSet& generators() const noexcept { return gens_; }
  std::optional<std::uint64_t> order() const { return std::nullopt; }

  Element identity() const { return encode(0, 0, 0); }

  Element encode(std::int64_t x, std::int64_t y, std::int64_t z) const {
    std::string out(1, 'H');
    out.reserve(25);
    detail::put_i64(out, x);
    detail::put_i64(out, y);
    detail::put_i64(out, z);
    return Element(std::move(out));
  }

  std::array<std::int64_t, 3> decode(const Element& e) const {
    validate(e);
    return {detail::get_i64(e.bytes(), 1), detail::get_i64(e.bytes(), 9), detail::get_i64(e.bytes(), 17)};
  }

  void validate(const Element& e) const {
    if (e.size() != 25 || e.bytes()[0] != 'H') throw TypeError("element is not an encoding for heisenberg");
  }

  Element multiply(const Element& a, const Element& b) const {
    auto [x, y, z] = decode(a);
    auto [x2, y2, z2] = decode(b);
    return encode(x + x2, y + y2, z + z2 + x * y2);
  }

  Element inverse(const Element& a) const {
    auto [x, y, z] = decode(a);
    return encode(-x, -y, -z + x * y);
  }

  std::string render(const Element& e) const {
    auto [x, y, z] = decode(e);
    return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
  }

  Element parse_element(std::string_view text) const {
    auto fields = detail::tuple_fields(text);
    if (fields.size() != 3) throw ParseError("expected (x,y,z) in '" + std::string(text) + "'");
    return encode(detail::parse_int(fields[0], text), detail::parse_int(fields[1], text), detail::parse_int(fields[2], text));
  }

 private:
  GeneratingSet gens_;
};

/// Shared machinery for the cyclic and dihedral families: elements r^k s^f.
class RotationReflectionGroup {
 public:
  std::optional<std::uint64_t> order() const { return static_cast<std::uint64_t>(reflections_ ? 2 * n_ : n_); }
  const GeneratingSet& generators() const noexcept { return gens_; }
  Element identity() const { return encode(0, false); }

  Element encode(std::int64_t k, bool flip) const {
    std::string out(1, tag());
    out.reserve(10);
    detail::put_i64(out, detail::mod(k, n_));
    out.push_back(flip ? 1 : 0);
    return Element(std::move(out));
  }

  std::pair<std::int64_t, bool> decode(const Element& e) const {
    validate(e);
    return {detail::get_i64(e.bytes(), 1), e.bytes()[9] != 0};
  }

  void validate(const Element& e) const {
    auto b = e.bytes();
    if (b.size() != 10 || b[0] != tag()) throw TypeError("element is not an encoding for " + spec_text());
    auto k = detail::get_i64(b, 1);
    auto flag = static_cast<unsigned char>(b[9]);
    if (k < 0 || k >= n_ || flag > 1 || (!reflections_ && flag != 0)) throw TypeError("non-canonical encoding for " + spec_text());
  }

  Element multiply(const Element& a, const Element& b) const {
    auto [k1, f1] = decode(a);
    auto [k2, f2] = decode(b);
    // r^k1 s^f1 r^k2 s^f2 = r^(k1 +- k2) s^(f1 xor f2)
    std::int64_t k = f1 ? detail::mod(k1 - k2, n_) : detail::mod(k1 + k2, n_);
    return encode(k, f1 != f2);
  }

  Element inverse(const Element& a) const {
    auto [k, f] = decode(a);
    return f ? a : encode(n_ - k, false);
  }

  std::string render(const Element& e) const {
    auto [k, f] = decode(e);
    if (!reflections_) return "(" + std::to_string(k) + ")";
    return "(" + std::to_string(k) + "," + (f ? "1" : "0") + ")";
  }

  Element parse_element(std::string_view text) const {
    auto fields = detail::tuple_fields(text);
    if (fields.size() != (reflections_ ? 2u : 1u)) {
      throw ParseError(std::string("expected ") + (reflections_ ? "(k,f)" : "(k)") + " in '" + std::string(text) + "'");
    }
    std::int64_t k = detail::parse_int(fields[0], text);
    bool flip = false;
    if (reflections_) {
      auto f = detail::parse_int(fields[1], text);
      if (f != 0 && f != 1) throw ParseError("reflection flag must be 0 or 1 in '" + std::string(text) + "'");
      flip = f == 1;
    }
    return encode(k, flip);
  }

 protected:
  RotationReflectionGroup(std::int64_t n, bool reflections) : n_(n), reflections_(reflections) {
    std::vector<Generator> gens;
    if (n > 1) gens.push_back({"r", encode(1, false)});
    if (n > 2) gens.push_back({"r^-1", encode(-1, false)});
    if (reflections) gens.push_back({"s", encode(0, true)});
    gens_ = GeneratingSet(std::move(gens));
  }

  char tag() const { return reflections_ ? 'D' : 'C'; }
  std::string spec_text() const { return (reflections_ ? "dihedral:" : "cyclic:") + std::to_string(n_); }

  std::int64_t n_;
  bool reflections_;
  GeneratingSet gens_;
};

class CyclicGroup : public RotationReflectionGroup {
 public:
  explicit CyclicGroup(std::int64_t n) : RotationReflectionGroup(check(n), false) {}
  GroupSpec spec() const { return {Family::Cyclic, n_}; }

 private:
  static std::int64_t check(std::int64_t n) {
    if (n < 1) throw DomainError("cyclic:<n> requires n >= 1");
    return n;
  }
};

class DihedralGroup : public RotationReflectionGroup {
 public:
  explicit DihedralGroup(std::int64_t n) : RotationReflectionGroup(check(n), true) {}
  GroupSpec spec() const { return {Family::Dihedral, n_}; }

 private:
  static std::int64_t check(std::int64_t n) {
    if (n < 2) throw DomainError("dihedral:<n> requires n >= 2");
    return n;
  }
};

class SymmetricGroup {
 public:
  explicit SymmetricGroup(std::int64_t n) : n_(n) {
    if (n < 2 || n > 64) throw DomainError("sym:<n> requires 2 <= n <= 64");
    std::vector<Generator> gens;
    for (std::int64_t i = 1; i < n; ++i) {
      std::vector<std::uint8_t> p = identity_images();
      std::swap(p[static_cast<std::size_t>(i - 1)], p[static_cast<std::size_t>(i)]);
      gens.push_back({"t" + std::to_string(i), encode(p)});
    }
    gens_ = GeneratingSet(std::move(gens));
  }

  GroupSpec spec() const { return {Family::SymmetricPerm, n_}; }
  const GeneratingSet& generators() const noexcept { return gens_; }
  std::optional<std::uint64_t> order() const {
    std::uint64_t f = 1;
    for (std::int64_t i = 2; i <= n_; ++i) {
      if (f > UINT64_MAX / static_cast<std::uint64_t>(i)) return UINT64_MAX;
      f *= static_cast<std::uint64_t>(i);
    }
    return f;
  }

  Element identity() const { return encode(identity_images()); }

  Element encode(std::span<const std::uint8_t> images) const {
    std::string out(1, 'S');
    out.append(reinterpret_cast<const char*>(images.data()), images.size());
    return Element(std::move(out));
  }

  void validate(const Element& e) const {
    auto b = e.bytes();
    if (b.size() != 1 + static_cast<std::size_t>(n_) || b[0] != 'S') throw TypeError("element is not an encoding for " + spec().render());
    std::vector<bool> seen(static_cast<std::size_t>(n_), false);
    for (std::size_t i = 1; i < b.size(); ++i) {
      auto v = static_cast<unsigned char>(b[i]);
      if (v >= n_ || seen[v]) throw TypeError("image array is not a permutation");
      seen[v] = true;
    }
  }

  /// (p*q)(i) = p(q(i)).
  Element multiply(const Element& a, const Element& b) const {
    validate(a);
    validate(b);
    std::string out(1, 'S');
    for (std::int64_t i = 0; i < n_; ++i) {
      auto qi = static_cast<unsigned char>(b.bytes()[1 + static_cast<std::size_t>(i)]);
      out.push_back(a.bytes()[1 + qi]);
    }
    return Element(std::move(out));
  }

  Element inverse(const Element& a) const {
    validate(a);
    std::string out(1 + static_cast<std::size_t>(n_), 'S');
    for (std::int64_t i = 0; i < n_; ++i) {
      auto pi = static_cast<unsigned char>(a.bytes()[1 + static_cast<std::size_t>(i)]);
      out[1 + pi] = static_cast<char>(i);
    }
    return Element(std::move(out));
  }

  std::string render(const Element& e) const {
    validate(e);
    std::string out = "(";
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (i > 1) out += ',';
      out += std::to_string(static_cast<unsigned char>(e.bytes()[i]));
    }
    return out + ")";
  }

  Element parse_element(std::string_view text) const {
    auto fields = detail::tuple_fields(text);
    if (static_cast<std::int64_t>(fields.size()) != n_) throw ParseError("expected " + std::to_string(n_) + " images in '" + std::string(text) + "'");
    std::vector<std::uint8_t> p;
    for (auto f : fields) {
      auto v = detail::parse_int(f, text);
      if (v < 0 || v >= n_) throw ParseError("image out of range in '" + std::string(text) + "'");
      p.push_back(static_cast<std::uint8_t>(v));
    }
    Element e = encode(p);
    try {
      validate(e);
    } catch (const TypeError&) {
      throw ParseError("'" + std::string(text) + "' is not a permutation");
    }
    return e;
  }

 private:
  std::vector<std::uint8_t> identity_images() const {
    std::vector<std::uint8_t> p(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>(i);
    return p;
  }

  std::int64_t n_;
  GeneratingSet gens_;
};

// ---------------------------------------------------------------------------

template <class G>
concept GroupModel = requires(const G& g, const Element& a, std::string_view text) {
  { g.spec() } -> std::same_as<GroupSpec>;
  { g.identity() } -> std::same_as<Element>;
  { g.multiply(a, a) } -> std::same_as<Element>;
  { g.inverse(a) } -> std::same_as<Element>;
  { g.generators() } -> std::same_as<const GeneratingSet&>;
  { g.order() } -> std::same_as<std::optional<std::uint64_t>>;
  { g.render(a) } -> std::same_as<std::string>;
  { g.parse_element(text) } -> std::same_as<Element>;
  g.validate(a);
};

/// Runtime-selected group: dispatches to the concrete model named by a spec.
class Group {
 public:
  explicit Group(const GroupSpec& spec) : model_(make(spec)) {}
  explicit Group(std::string_view spec_text) : Group(parse_group_spec(spec_text)) {}

  GroupSpec spec() const {
    return std::visit([](const auto& m) { return m.spec(); }, model_);
  }
  Element identity() const {
    return std::visit([](const auto& m) { return m.identity(); }, model_);
  }
  Element multiply(const Element& a, const Element& b) const {
    return std::visit([&](const auto& m) { return m.multiply(a, b); }, model_);
  }
  Element inverse(const Element& a) const {
    return std::visit([&](const auto& m) { return m.inverse(a); }, model_);
  }
  const GeneratingSet& generators() const {
    return std::visit([](const auto& m) -> const GeneratingSet& { return m.generators(); }, model_);
  }
  std::optional<std::uint64_t> order() const {
    return std::visit([](const auto& m) { return m.order(); }, model_);
  }
  std::string render(const Element& e) const {
    return std::visit([&](const auto& m) { return m.render(e); }, model_);
  }
  Element parse_element(std::string_view text) const {
    return std::visit([&](const auto& m) { return m.parse_element(text); }, model_);
  }
  void validate(const Element& e) const {
    std::visit([&](const auto& m) { m.validate(e); }, model_);
  }

  template <class Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), model_);
  }

 private:
  using Model = std::variant<FreeAbelianGroup, FreeGroup, HeisenbergGroup, CyclicGroup, DihedralGroup, SymmetricGroup>;

  static Model make(const GroupSpec& spec) {
    switch (spec.family) {
      case Family::FreeAbelian: return FreeAbelianGroup(spec.parameter);
      case Family::Free: return FreeGroup(spec.parameter);
      case Family::Heisenberg: return HeisenbergGroup();
      case Family::Cyclic: return CyclicGroup(spec.parameter);
      case Family::Dihedral: return DihedralGroup(spec.parameter);
      case Family::SymmetricPerm: return SymmetricGroup(spec.parameter);
    }
    throw DomainError("unknown group family");
  }

  Model model_;
};

static_assert(GroupModel<Group>);
static_assert(GroupModel<FreeAbelianGroup>);
static_assert(GroupModel<HeisenbergGroup>);

/// Product of the labels in reading order: {s_n, ..., s_1} -> s_n ... s_1.
/// Letters are applied on the left, starting from the last label.
template <GroupModel G>
Element word_to_element(const G& group, std::span<const std::string> word) {
  const auto& gens = group.generators();
  Element result = group.identity();
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto idx = gens.index_of(*it);
    if (!idx) throw ParseError("unknown generator label '" + *it + "' for " + group.spec().render());
    result = group.multiply(gens[*idx].element, result);
  }
  return result;
}

/// Prefix products y_0 = e, y_k = s_k y_{k-1} of a word written
/// left-to-right as s_n ... s_1.
template <GroupModel G>
std::vector<Element> word_prefix_chain(const G& group, std::span<const std::string> word) {
  const auto& gens = group.generators();
  std::vector<Element> chain{group.identity()};
  chain.reserve(word.size() + 1);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto idx = gens.index_of(*it);
    if (!idx) throw ParseError("unknown generator label '" + *it + "' for " + group.spec().render());
    chain.push_back(group.multiply(gens[*idx].element, chain.back()));
  }
  return chain;
}

}  // namespace isop
