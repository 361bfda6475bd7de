#pragma once

// The all-ones polynomial h_k(X) = 1 + X + ... + X^k over GF(q).

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital_forge/error.hpp"
#include "unital_forge/gf.hpp"

namespace uforge {

/// GF(q) built once per process.
inline const Field& shared_field(std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::unique_ptr<Field>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[q];
  if (!slot) {
    const auto f = detail::prime_factors(q);
    if (q < 2 || f.size() != 1) fail(ErrorKind::InvalidParameters, "q = " + std::to_string(q) + " is not a prime power");
    unsigned n = 0;
    for (std::uint32_t r = q; r > 1; r /= static_cast<std::uint32_t>(f[0])) ++n;
    slot = std::make_unique<Field>(build_field(static_cast<std::uint32_t>(f[0]), n));
  }
  return *slot;
}

/// Horner evaluation.
inline Elem hk_eval(const Field& f, std::uint64_t k, Elem x) {
  Elem acc = 1;
  for (std::uint64_t i = 0; i < k; ++i) acc = f.add(f.mul(acc, x), 1);
  return acc;
}

inline Elem hk_eval(std::uint32_t q, std::uint64_t k, Elem x) { return hk_eval(shared_field(q), k, x); }

/// k = 1 mod p(q-1).
inline bool matthews_criterion(std::uint32_t q, std::uint64_t k) {
  const std::uint64_t p = shared_field(q).characteristic();
  return k >= 1 && (k - 1) % (p * (q - 1)) == 0;
}

namespace detail {

inline std::vector<Elem> hk_images(const Field& f, std::uint64_t k) {
  std::vector<Elem> img(f.order());
  for (Elem x = 0; x < f.order(); ++x) img[x] = hk_eval(f, k, x);
  return img;
}

inline std::size_t image_size(const std::vector<Elem>& img) {
  std::vector<char> seen(img.size(), 0);
  std::size_t n = 0;
  for (Elem v : img)
    if (!seen[v]) seen[v] = 1, ++n;
  return n;
}

inline void require_odd_field(std::uint32_t q) {
  if (shared_field(q).characteristic() == 2) fail(ErrorKind::OddCharacteristicRequired, "q must be odd");
}

/// Smallest c1 < c2 in GF(q) \ {0,1} with equal images.
inline std::optional<std::pair<Elem, Elem>> first_collision(const std::vector<Elem>& img) {
  const Elem q = static_cast<Elem>(img.size());
  std::vector<Elem> first(q, q);
  std::optional<std::pair<Elem, Elem>> best;
  for (Elem c = 2; c < q; ++c) {
    const Elem v = img[c];
    if (first[v] == q) {
      first[v] = c;
    } else if (!best || std::pair{first[v], c} < *best) {
      best = std::pair{first[v], c};
    }
  }
  return best;
}

}  // namespace detail

/// Exhaustive image count cross-checked against the congruence criterion.
inline bool hk_is_permutation(std::uint32_t q, std::uint64_t k) {
  detail::require_odd_field(q);
  const Field& f = shared_field(q);
  const bool exhaustive = detail::image_size(detail::hk_images(f, k)) == q;
  const bool criterion = matthews_criterion(q, k);
  if (exhaustive != criterion)
    fail(ErrorKind::CriterionMismatch, "h_" + std::to_string(k) + " over GF(" + std::to_string(q) +
                                           "): exhaustive says " + (exhaustive ? "permutation" : "not") +
                                           ", criterion disagrees");
  return exhaustive;
}

struct HkAnalysis {
  std::uint32_t q = 0;
  std::uint64_t k = 0;
  bool is_permutation = false;
  std::size_t value_set_size = 0;
  std::optional<std::size_t> wan_bound;  // floor(q - (q-1)/k), only for 1 <= k <= q-1
  std::optional<std::pair<Elem, Elem>> collision;

  /// The bound only speaks about non-permutations of degree at most q-1.
  bool wan_bound_holds() const { return is_permutation || !wan_bound || value_set_size <= *wan_bound; }
};

inline HkAnalysis hk_value_set(std::uint32_t q, std::uint64_t k) {
  const Field& f = shared_field(q);
  const auto img = detail::hk_images(f, k);
  HkAnalysis a;
  a.q = q;
  a.k = k;
  a.value_set_size = detail::image_size(img);
  a.is_permutation = a.value_set_size == q;
  if (k >= 1 && k <= q - 1) a.wan_bound = q - (q - 1 + k - 1) / k;
  a.collision = detail::first_collision(img);
  return a;
}

/// Requires 1 < k < q-1 and gcd(k, q-1) = 1; the pair is then guaranteed.
inline std::pair<Elem, Elem> hk_find_collision(std::uint32_t q, std::uint64_t k) {
  detail::require_odd_field(q);
  if (!(k > 1 && k < q - 1) || std::gcd<std::uint64_t>(k, q - 1) != 1)
    fail(ErrorKind::HypothesisFailed, "collision needs 1 < k < q-1 and gcd(k, q-1) = 1 (q = " + std::to_string(q) +
                                          ", k = " + std::to_string(k) + ")");
  const auto c = detail::first_collision(detail::hk_images(shared_field(q), k));
  if (!c)
    fail(ErrorKind::LemmaViolation, "no collision of h_" + std::to_string(k) + " on GF(" + std::to_string(q) +
                                        ") minus {0,1}");
  return *c;
}

}  // namespace uforge
