#pragma once

// Arithmetic in GF(p^n) backed by discrete log / exponent tables.
//
// Elements are encoded as integers in [0, p^n): the polynomial
// a0 + a1*i + a2*i^2 + ... is stored as a0 + a1*p + a2*p^2 + ...,
// so 0 is the additive zero and 1 the multiplicative identity.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "unital_forge/error.hpp"

namespace uforge {

using Elem = std::uint32_t;

inline constexpr std::uint64_t kFieldTableBudget = std::uint64_t{1} << 20;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Dense polynomials over GF(p), constant term first.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial m.
inline Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t k = 0; k <= dm; ++k)
      a[shift + k] = static_cast<std::uint32_t>((a[shift + k] + (p - lead) * std::uint64_t{m[k]}) % p);
    trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return poly_mod(std::move(r), m, p);
}

// Irreducibility by trial division over every monic polynomial of degree
// 1..deg/2. Exhaustive, so it doubles as the irreducibility certificate.
inline bool is_irreducible(const Poly& m, std::uint32_t p) {
  const std::size_t deg = m.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    const std::uint64_t count = ipow(p, static_cast<unsigned>(d));
    for (std::uint64_t k = 0; k < count; ++k) {
      Poly f(d + 1);
      std::uint64_t t = k;
      for (std::size_t c = 0; c < d; ++c) {
        f[c] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      f[d] = 1;
      if (poly_mod(m, f, p).empty()) return false;
    }
  }
  return true;
}

inline Poly digits_of(std::uint64_t x, std::uint32_t p, unsigned n) {
  Poly a(n);
  for (unsigned k = 0; k < n; ++k) {
    a[k] = static_cast<std::uint32_t>(x % p);
    x /= p;
  }
  trim(a);
  return a;
}

inline std::uint64_t encode_digits(const Poly& a, std::uint32_t p) {
  std::uint64_t x = 0;
  for (std::size_t k = a.size(); k-- > 0;) x = x * p + a[k];
  return x;
}

}  // namespace detail

/// Lexicographically smallest monic irreducible polynomial of degree n over
/// GF(p). Coefficient vectors are compared constant term first; the returned
/// vector holds n+1 coefficients with the leading 1 last.
inline std::vector<std::uint32_t> canonical_modulus(std::uint32_t p, unsigned n) {
  const std::uint64_t count = detail::ipow(p, n);
  for (std::uint64_t k = 0; k < count; ++k) {
    // k enumerates (a0, ..., a_{n-1}) with a0 as the most significant digit.
    detail::Poly m(n + 1);
    std::uint64_t t = k;
    for (unsigned c = n; c-- > 0;) {
      m[c] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    m[n] = 1;
    if (detail::is_irreducible(m, p)) return m;
  }
  fail(ErrorKind::InternalConsistency, "no irreducible polynomial found");
}

class Field {
 public:
  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return n_; }
  std::uint32_t order() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Elem primitive() const { return exp_[1]; }

  const std::vector<Elem>& exp_table() const { return exp_; }
  const std::vector<std::uint32_t>& log_table() const { return log_; }

  Elem add(Elem x, Elem y) const {
    if (!add_.empty()) return add_[std::size_t{x} * q_ + y];
    Elem r = 0, scale = 1;
    for (unsigned k = 0; k < n_; ++k) {
      r += ((x % p_ + y % p_) % p_) * scale;
      x /= p_;
      y /= p_;
      scale *= p_;
    }
    return r;
  }

  Elem neg(Elem x) const {
    Elem r = 0, scale = 1;
    for (unsigned k = 0; k < n_; ++k) {
      r += ((p_ - x % p_) % p_) * scale;
      x /= p_;
      scale *= p_;
    }
    return r;
  }

  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }

  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    return exp_[log_[x] + log_[y]];
  }

  Elem inv(Elem x) const {
    if (x == 0) fail(ErrorKind::DivisionByZero, "inverse of zero");
    return exp_[(q_ - 1 - log_[x]) % (q_ - 1)];
  }

  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }

  /// Square-and-multiply; pow(0, 0) = 1.
  Elem pow(Elem x, std::uint64_t k) const {
    Elem r = 1;
    while (k) {
      if (k & 1) r = mul(r, x);
      x = mul(x, x);
      k >>= 1;
    }
    return r;
  }

  /// x^(p^i).
  Elem frobenius(Elem x, unsigned i) const {
    if (x == 0) return 0;
    std::uint64_t e = log_[x];
    for (unsigned k = 0; k < i % n_; ++k) e = e * p_ % (q_ - 1);
    return exp_[e];
  }

  /// Discrete log to base primitive(); undefined for 0.
  std::uint32_t log(Elem x) const {
    if (x == 0) fail(ErrorKind::DivisionByZero, "log of zero");
    return log_[x];
  }

  Elem exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  /// Multiplicative order of a nonzero element.
  std::uint32_t element_order(Elem x) const {
    const std::uint32_t l = log(x);
    return (q_ - 1) / std::gcd(q_ - 1, l);
  }

  /// is_square(0) is true by convention.
  bool is_square(Elem x) const {
    if (x == 0 || p_ == 2) return true;
    return log_[x] % 2 == 0;
  }

  /// x lies in the subfield GF(p^k); k must divide the degree.
  bool in_subfield(Elem x, unsigned k) const { return frobenius(x, k) == x; }

  Elem from_int(std::int64_t v) const {
    const auto m = static_cast<std::int64_t>(p_);
    return static_cast<Elem>(((v % m) + m) % m);
  }

  std::vector<std::uint32_t> coefficients(Elem x) const {
    std::vector<std::uint32_t> c(n_);
    for (unsigned k = 0; k < n_; ++k) {
      c[k] = x % p_;
      x /= p_;
    }
    return c;
  }

  /// "a+b·i" style rendering: 0, 2, i, 2i, 1+2i, 1+i+2i^2.
  std::string render(Elem x) const {
    if (x == 0) return "0";
    const auto c = coefficients(x);
    std::string out;
    for (unsigned k = 0; k < n_; ++k) {
      if (c[k] == 0) continue;
      if (!out.empty()) out += '+';
      if (k == 0) {
        out += std::to_string(c[k]);
        continue;
      }
      if (c[k] != 1) out += std::to_string(c[k]);
      out += 'i';
      if (k > 1) out += '^' + std::to_string(k);
    }
    return out;
  }

  /// Inverse of render; "#k" is the raw encoding k. Throws InvalidParameters.
  Elem parse(const std::string& text) const {
    const auto bad = [&]() -> Elem { fail(ErrorKind::InvalidParameters, "cannot parse field element '" + text + "'"); };
    std::string s;
    for (char ch : text)
      if (ch != ' ' && ch != '*') s += ch;
    if (s.empty()) return bad();
    if (s[0] == '#') {
      std::uint64_t v = 0;
      for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k] < '0' || s[k] > '9') return bad();
        v = v * 10 + static_cast<unsigned>(s[k] - '0');
        if (v >= q_) return bad();
      }
      return s.size() > 1 ? static_cast<Elem>(v) : bad();
    }
    std::vector<std::uint64_t> c(n_, 0);
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t end = s.find('+', pos);
      if (end == std::string::npos) end = s.size();
      const std::string term = s.substr(pos, end - pos);
      if (term.empty()) return bad();
      std::size_t k = 0;
      std::uint64_t coef = 0;
      bool digits = false;
      while (k < term.size() && term[k] >= '0' && term[k] <= '9') coef = coef * 10 + (term[k++] - '0'), digits = true;
      if (!digits) coef = 1;
      unsigned power = 0;
      if (k < term.size()) {
        if (term[k++] != 'i') return bad();
        power = 1;
        if (k < term.size()) {
          if (term[k++] != '^' || k == term.size()) return bad();
          power = 0;
          while (k < term.size() && term[k] >= '0' && term[k] <= '9') power = power * 10 + (term[k++] - '0');
          if (k != term.size()) return bad();
        }
      } else if (!digits) {
        return bad();
      }
      if (power >= n_) return bad();
      c[power] = (c[power] + coef) % p_;
      pos = end + 1;
      if (end == s.size()) break;
      if (pos == s.size()) return bad();
    }
    Elem v = 0;
    for (unsigned k = n_; k-- > 0;) v = v * p_ + static_cast<Elem>(c[k]);
    return v;
  }

 private:
  friend Field build_field(std::uint32_t p, unsigned n);
  friend Field field_from_tables(std::uint32_t, unsigned, std::vector<std::uint32_t>, std::vector<Elem>);

  void finish_tables();

  std::uint32_t p_ = 0;
  unsigned n_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> exp_;           // length 2(q-1), period q-1
  std::vector<std::uint32_t> log_;  // log_[0] unused
  std::vector<Elem> add_;           // dense only for small q
};

inline void Field::finish_tables() {
  log_.assign(q_, 0);
  for (std::uint32_t k = 0; k < q_ - 1; ++k) {
    if (exp_[k] == 0 || exp_[k] >= q_ || (k > 0 && exp_[k] == 1))
      fail(ErrorKind::InternalConsistency, "exponent table does not have period q-1");
    log_[exp_[k]] = k;
  }
  exp_.resize(2 * std::size_t{q_ - 1});
  for (std::uint32_t k = 0; k < q_ - 1; ++k) exp_[q_ - 1 + k] = exp_[k];
  if (q_ <= 1024) {
    add_.clear();
    std::vector<Elem> table(std::size_t{q_} * q_);
    for (Elem x = 0; x < q_; ++x)
      for (Elem y = 0; y < q_; ++y) table[std::size_t{x} * q_ + y] = add(x, y);
    add_ = std::move(table);
  }
}

/// Builds the canonical GF(p^n): smallest monic irreducible modulus and the
/// smallest-encoding primitive element.
inline Field build_field(std::uint32_t p, unsigned n) {
  if (!detail::is_prime(p)) fail(ErrorKind::CompositeCharacteristic, "p = " + std::to_string(p) + " is not prime");
  if (n < 1) fail(ErrorKind::InvalidParameters, "extension degree must be at least 1");
  std::uint64_t q = 1;
  for (unsigned k = 0; k < n; ++k) {
    q *= p;
    if (q > kFieldTableBudget) fail(ErrorKind::Overflow, "p^n exceeds the table budget of 2^20");
  }

  Field f;
  f.p_ = p;
  f.n_ = n;
  f.q_ = static_cast<std::uint32_t>(q);
  f.modulus_ = canonical_modulus(p, n);

  const auto as_poly = [&](std::uint64_t x) { return detail::digits_of(x, p, n); };
  const auto slow_pow = [&](const detail::Poly& b, std::uint64_t k) {
    detail::Poly r{1}, base = b;
    while (k) {
      if (k & 1) r = detail::poly_mulmod(r, base, f.modulus_, p);
      base = detail::poly_mulmod(base, base, f.modulus_, p);
      k >>= 1;
    }
    return r;
  };

  const auto factors = detail::prime_factors(q - 1);
  std::uint64_t gamma = 0;
  for (std::uint64_t x = 1; x < q && gamma == 0; ++x) {
    const auto px = as_poly(x);
    bool full = true;
    for (auto r : factors) {
      if (slow_pow(px, (q - 1) / r) == detail::Poly{1}) {
        full = false;
        break;
      }
    }
    if (full) gamma = x;
  }
  if (gamma == 0) fail(ErrorKind::InternalConsistency, "no primitive element");

  f.exp_.resize(q - 1);
  detail::Poly cur{1};
  const auto pg = as_poly(gamma);
  for (std::uint64_t k = 0; k < q - 1; ++k) {
    f.exp_[k] = static_cast<Elem>(detail::encode_digits(cur, p));
    cur = detail::poly_mulmod(cur, pg, f.modulus_, p);
  }
  f.finish_tables();
  return f;
}

/// Rebuilds a field from externally supplied tables (the on-disk cache).
/// The tables are re-validated; anything inconsistent is rejected.
inline Field field_from_tables(std::uint32_t p, unsigned n, std::vector<std::uint32_t> modulus, std::vector<Elem> exp) {
  Field f;
  f.p_ = p;
  f.n_ = n;
  f.q_ = static_cast<std::uint32_t>(detail::ipow(p, n));
  f.modulus_ = std::move(modulus);
  if (exp.size() != f.q_ - 1 || exp.empty() || exp[0] != 1)
    fail(ErrorKind::InternalConsistency, "malformed exponent table");
  f.exp_ = std::move(exp);
  f.finish_tables();
  return f;
}

// ---------------------------------------------------------------------------
// Quadratic extensions GF(q^2) / GF(q).

/// Order q of the subfield when F has even degree.
inline std::uint32_t subfield_order(const Field& f) {
  if (f.degree() % 2 != 0) fail(ErrorKind::InvalidParameters, "field is not a quadratic extension");
  return static_cast<std::uint32_t>(detail::ipow(f.characteristic(), f.degree() / 2));
}

inline bool in_base_field(const Field& f2, Elem x) { return f2.in_subfield(x, f2.degree() / 2); }

/// Tr(x) = x^q + x.
inline Elem trace(const Field& f2, Elem x) {
  subfield_order(f2);
  return f2.add(f2.frobenius(x, f2.degree() / 2), x);
}

/// Nm(x) = x^(q+1).
inline Elem norm(const Field& f2, Elem x) { return f2.pow(x, std::uint64_t{subfield_order(f2)} + 1); }

/// Squareness inside the subfield GF(q) for an element of GF(q) embedded in GF(q^2).
inline bool is_base_square(const Field& f2, Elem a) {
  if (a == 0) return true;
  const std::uint32_t q = subfield_order(f2);
  return f2.pow(a, (q - 1) / 2) == 1;
}

/// The distinguished constants gamma (primitive), epsilon = gamma^((q+1)/2)
/// and beta = epsilon^2 = Nm(gamma).
struct Constants {
  Elem gamma = 0;
  Elem epsilon = 0;
  Elem beta = 0;
};

inline Constants constants(const Field& f2) {
  const std::uint32_t q = subfield_order(f2);
  if (q % 2 == 0) fail(ErrorKind::OddCharacteristicRequired, "constants need odd q");
  Constants c;
  c.gamma = f2.primitive();
  c.epsilon = f2.pow(c.gamma, (q + 1) / 2);
  c.beta = f2.pow(c.gamma, q + 1);
  if (f2.element_order(c.gamma) != f2.order() - 1)
    fail(ErrorKind::InternalConsistency, "gamma is not primitive");
  if (f2.frobenius(c.epsilon, f2.degree() / 2) != f2.neg(c.epsilon))
    fail(ErrorKind::InternalConsistency, "epsilon^q != -epsilon");
  if (!in_base_field(f2, c.beta) || is_base_square(f2, c.beta) || f2.mul(c.epsilon, c.epsilon) != c.beta)
    fail(ErrorKind::InternalConsistency, "beta is not a non-square of GF(q) equal to epsilon^2");
  return c;
}

/// The elements of GF(q) inside GF(q^2), ascending by encoding.
inline std::vector<Elem> base_field_elements(const Field& f2) {
  std::vector<Elem> out;
  for (Elem x = 0; x < f2.order(); ++x)
    if (in_base_field(f2, x)) out.push_back(x);
  return out;
}

}  // namespace uforge
