#pragma once

// On-disk growth tables. Layout (all integers little-endian):
//
//   magic     8 bytes  "ISOPGTAB"
//   version   u32      = 1
//   spec_len  u32      followed by the group spec text (render() form)
//   radius    u32
//   saturated u8
//   for each sphere 0..radius:
//     count   u64
//     count x { len u32, encoding bytes }
//
// One file per (spec, radius), named <fnv1a64(spec)>-r<radius>.gtab. Writes go
// to a temporary file in the same directory followed by a rename.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "isop/error.hpp"
#include "isop/growth.hpp"

namespace isop {

inline constexpr std::uint32_t kCacheFormatVersion = 1;

namespace detail {

inline constexpr char kCacheMagic[8] = {'I', 'S', 'O', 'P', 'G', 'T', 'A', 'B'};

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <class T>
void write_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu));
}

template <class T>
T read_le(std::istream& in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    int c = in.get();
    if (c == EOF) throw ParseError("truncated growth table file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace detail

inline void write_table(std::ostream& out, const GrowthTable& table) {
  out.write(detail::kCacheMagic, sizeof detail::kCacheMagic);
  detail::write_le<std::uint32_t>(out, kCacheFormatVersion);
  std::string spec = table.spec().render();
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.size()));
  out.write(spec.data(), static_cast<std::streamsize>(spec.size()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.radius()));
  detail::write_le<std::uint8_t>(out, table.saturated() ? 1 : 0);
  for (int n = 0; n <= table.radius(); ++n) {
    auto sphere = table.sphere(n);
    detail::write_le<std::uint64_t>(out, sphere.size());
    for (const Element& e : sphere) {
      detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.size()));
      out.write(e.bytes().data(), static_cast<std::streamsize>(e.size()));
    }
  }
}

inline GrowthTable read_table(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, detail::kCacheMagic)) {
    throw ParseError("not a growth table file");
  }
  auto version = detail::read_le<std::uint32_t>(in);
  if (version != kCacheFormatVersion) throw ParseError("unsupported growth table version " + std::to_string(version));
  auto spec_len = detail::read_le<std::uint32_t>(in);
  if (spec_len > 256) throw ParseError("corrupt growth table header");
  std::string spec(spec_len, '\0');
  if (!in.read(spec.data(), spec_len)) throw ParseError("truncated growth table file");
  auto radius = detail::read_le<std::uint32_t>(in);
  bool saturated = detail::read_le<std::uint8_t>(in) != 0;
  std::vector<std::vector<Element>> spheres(radius + 1);
  for (auto& sphere : spheres) {
    auto count = detail::read_le<std::uint64_t>(in);
    sphere.reserve(std::min<std::uint64_t>(count, 1u << 20));
    for (std::uint64_t i = 0; i < count; ++i) {
      auto len = detail::read_le<std::uint32_t>(in);
      std::string bytes(len, '\0');
      if (!in.read(bytes.data(), len)) throw ParseError("truncated growth table file");
      sphere.emplace_back(std::move(bytes));
    }
  }
  return GrowthTable(parse_group_spec(spec), std::move(spheres), saturated);
}

inline void save_table(const std::filesystem::path& path, const GrowthTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // unique per writer so concurrent processes never share a temporary
  auto tmp = path;
  tmp += "." + std::to_string(std::random_device{}()) + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    write_table(out, table);
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline GrowthTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_table(in);
}

/// Cache directory: $ISOP_CACHE_DIR, else $XDG_CACHE_HOME/isop, else
/// ~/.cache/isop, else ./.isop-cache.
inline std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("ISOP_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "isop";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "isop";
  return ".isop-cache";
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, const GroupSpec& spec, int radius) {
  std::ostringstream name;
  name << std::hex;
  name.width(16);
  name.fill('0');
  name << detail::fnv1a64(spec.render());
  name << std::dec << "-r" << radius << ".gtab";
  return dir / name.str();
}

struct CacheOptions {
  std::optional<std::filesystem::path> dir;  // nullopt disables the cache
  EnumerationOptions enumeration;
};

/// Loads the table for (spec, radius) from the cache, enumerating and storing
/// it on a miss. A corrupt or mismatching cache file is recomputed.
template <GroupModel G>
GrowthTable cached_ball(const G& group, int radius, const CacheOptions& options) {
  if (!options.dir) return enumerate_ball(group, radius, options.enumeration);
  auto path = cache_file(*options.dir, group.spec(), radius);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      GrowthTable table = load_table(path);
      if (table.spec() == group.spec() && table.radius() == radius) return table;
    } catch (const Error&) {
    }
  }
  GrowthTable table = enumerate_ball(group, radius, options.enumeration);
  try {
    save_table(path, table);
  } catch (const std::exception&) {
    // a read-only cache directory only costs recomputation
  }
  return table;
}

}  // namespace isop
