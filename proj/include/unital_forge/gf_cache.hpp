#pragma once

// Optional on-disk cache for field tables. Little-endian layout:
//   "GFTB"  u32 p  u32 n  u32 modulus[n+1]  u32 exp[q-1]  u32 log[q]
// The cache only accelerates construction; a missing, stale or corrupt file
// silently falls back to build_field.

#include <cstdint>
#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "unital_forge/gf.hpp"

namespace uforge {

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline bool get_u32(std::istream& is, std::uint32_t& v) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
  v = std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
  return true;
}

}  // namespace detail

inline std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint32_t p, unsigned n,
                                        const std::vector<std::uint32_t>& modulus) {
  std::string name = "gf_" + std::to_string(p) + "_" + std::to_string(n) + "_m";
  for (auto c : modulus) name += std::to_string(c) + ".";
  return dir / (name + "bin");
}

inline void write_field_cache(const Field& f, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = cache_file(dir, f.characteristic(), f.degree(), f.modulus());
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::IoFailure, "cannot write " + path.string());
  os.write("GFTB", 4);
  detail::put_u32(os, f.characteristic());
  detail::put_u32(os, f.degree());
  for (auto c : f.modulus()) detail::put_u32(os, c);
  for (std::uint32_t k = 0; k + 1 < f.order(); ++k) detail::put_u32(os, f.exp_table()[k]);
  for (std::uint32_t k = 0; k < f.order(); ++k) detail::put_u32(os, f.log_table()[k]);
  if (!os) fail(ErrorKind::IoFailure, "short write to " + path.string());
}

inline std::optional<Field> read_field_cache(const std::filesystem::path& dir, std::uint32_t p, unsigned n) {
  const auto modulus = canonical_modulus(p, n);
  std::ifstream is(cache_file(dir, p, n, modulus), std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "GFTB", 4) != 0) return std::nullopt;
  std::uint32_t fp = 0, fn = 0;
  if (!detail::get_u32(is, fp) || !detail::get_u32(is, fn) || fp != p || fn != n) return std::nullopt;
  for (auto c : modulus) {
    std::uint32_t v = 0;
    if (!detail::get_u32(is, v) || v != c) return std::nullopt;
  }
  const auto q = static_cast<std::uint32_t>(detail::ipow(p, n));
  std::vector<Elem> exp(q - 1);
  for (auto& e : exp)
    if (!detail::get_u32(is, e)) return std::nullopt;
  try {
    Field f = field_from_tables(p, n, modulus, std::move(exp));
    for (std::uint32_t k = 0; k < q; ++k) {
      std::uint32_t v = 0;
      if (!detail::get_u32(is, v)) return std::nullopt;
      if (k > 0 && f.log_table()[k] != v) return std::nullopt;
    }
    // The generator must be the canonical one, and the table must agree
    // with polynomial arithmetic on a spread of positions.
    const Elem gamma = f.primitive();
    for (Elem x = 1; x < gamma; ++x)
      if (f.element_order(x) == q - 1) return std::nullopt;
    const auto pg = detail::digits_of(gamma, p, n);
    const std::uint32_t stride = std::max<std::uint32_t>(1, (q - 1) / 64);
    for (std::uint32_t k = 0; k + 1 < q; k += stride) {
      const auto next = detail::poly_mulmod(detail::digits_of(f.exp(k), p, n), pg, modulus, p);
      if (detail::encode_digits(next, p) != f.exp(k + 1)) return std::nullopt;
    }
    return f;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// build_field with a cache directory; `hit` reports whether the cache served the tables.
inline Field build_field_cached(std::uint32_t p, unsigned n, const std::filesystem::path& dir, bool* hit = nullptr) {
  if (hit) *hit = false;
  if (!dir.empty()) {
    if (auto f = read_field_cache(dir, p, n)) {
      if (hit) *hit = true;
      return *std::move(f);
    }
  }
  Field f = build_field(p, n);
  if (!dir.empty()) write_field_cache(f, dir);
  return f;
}

}  // namespace uforge
