#pragma once

// Dickson regular nearfields N(n, q) on the carrier GF(q^n).
//
// With gamma primitive in GF(q^n) and C = <gamma^n>, the coset
// representatives are gamma_i = gamma^((q^i - 1)/(q - 1)), 0 <= i < n, and
//   x * y = x^(q^i) y   when y lies in gamma_i C,    x * 0 = 0.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "unital_forge/checks.hpp"
#include "unital_forge/error.hpp"
#include "unital_forge/gf.hpp"

namespace uforge {

class Nearfield {
 public:
  const Field& field() const { return field_; }
  unsigned twist() const { return n_; }            // n
  std::uint32_t kernel_order() const { return q_; }  // q
  std::uint32_t order() const { return field_.order(); }
  std::uint32_t characteristic() const { return field_.characteristic(); }
  /// Exponent e with q^n = p^e.
  unsigned exponent() const { return field_.degree(); }

  const std::vector<Elem>& coset_reps() const { return reps_; }

  /// Index i with y in gamma_i C; y must be nonzero.
  unsigned coset_of(Elem y) const {
    if (y == 0) fail(ErrorKind::DivisionByZero, "coset of zero");
    return coset_[y];
  }

  Elem add(Elem x, Elem y) const { return field_.add(x, y); }
  Elem sub(Elem x, Elem y) const { return field_.sub(x, y); }
  Elem neg(Elem x) const { return field_.neg(x); }

  Elem mul(Elem x, Elem y) const {
    if (!mul_.empty()) return mul_[std::size_t{x} * order() + y];
    return mul_slow(x, y);
  }

  Elem inv(Elem x) const {
    if (x == 0) fail(ErrorKind::DivisionByZero, "nearfield inverse of zero");
    return inv_[x];
  }

  /// k-fold product x * x * ... * x (k >= 0).
  Elem pow(Elem x, std::uint64_t k) const {
    Elem r = 1;
    while (k) {
      if (k & 1) r = mul(r, x);
      x = mul(x, x);
      k >>= 1;
    }
    return r;
  }

  /// The field automorphism x -> x^(p^i); these are nearfield automorphisms of N(2, q).
  Elem automorphism(Elem x, unsigned i) const { return field_.frobenius(x, i); }

 private:
  friend Nearfield build_nearfield(unsigned n, std::uint32_t q);

  Elem mul_slow(Elem x, Elem y) const {
    if (y == 0 || x == 0) return 0;
    return field_.mul(field_.frobenius(x, kernel_degree_ * coset_[y]), y);
  }

  Field field_;
  unsigned n_ = 1;
  std::uint32_t q_ = 0;
  unsigned kernel_degree_ = 1;  // q = p^kernel_degree_
  std::vector<Elem> reps_;
  std::vector<std::uint8_t> coset_;
  std::vector<Elem> mul_;
  std::vector<Elem> inv_;
};

/// The closed form for N(2, q): x*y = xy for square y, x^q y otherwise.
inline Elem nm_mul_closed_form(const Field& f2, Elem x, Elem y) {
  if (y == 0) return 0;
  if (f2.is_square(y)) return f2.mul(x, y);
  return f2.mul(f2.frobenius(x, f2.degree() / 2), y);
}

inline Nearfield build_nearfield(unsigned n, std::uint32_t q) {
  if (n < 1) fail(ErrorKind::InvalidParameters, "n must be at least 1");
  const auto qp = detail::prime_factors(q);
  if (q < 2 || qp.size() != 1) fail(ErrorKind::InvalidParameters, "q = " + std::to_string(q) + " is not a prime power");
  const auto p = static_cast<std::uint32_t>(qp[0]);
  if (p == 2) fail(ErrorKind::OddCharacteristicRequired, "nearfields of even order are not supported");
  unsigned e = 0;
  for (std::uint32_t t = q; t > 1; t /= p) ++e;
  for (auto r : detail::prime_factors(n))
    if ((q - 1) % r != 0)
      fail(ErrorKind::InvalidParameters, "prime divisor " + std::to_string(r) + " of n does not divide q-1");
  if (q % 4 == 3 && n % 4 == 0) fail(ErrorKind::InvalidParameters, "q = 3 mod 4 requires n != 0 mod 4");
  if (n > 255) fail(ErrorKind::InvalidParameters, "n too large");

  Nearfield nf;
  nf.field_ = build_field(p, e * n);
  nf.n_ = n;
  nf.q_ = q;
  nf.kernel_degree_ = e;
  const Field& f = nf.field_;
  const std::uint32_t order = f.order();

  // Residues (q^i - 1)/(q - 1) mod n must be a complete system mod n.
  std::vector<int> residue_to_coset(n, -1);
  std::uint64_t r = 0, qi = 1;  // r = 1 + q + ... + q^(i-1)
  for (unsigned i = 0; i < n; ++i) {
    nf.reps_.push_back(f.pow(f.primitive(), r));
    const auto res = static_cast<unsigned>(r % n);
    if (residue_to_coset[res] != -1) fail(ErrorKind::InternalConsistency, "coset representatives collide");
    residue_to_coset[res] = static_cast<int>(i);
    r += qi;
    qi *= q;
  }
  nf.coset_.assign(order, 0);
  for (Elem y = 1; y < order; ++y) nf.coset_[y] = static_cast<std::uint8_t>(residue_to_coset[f.log(y) % n]);

  if (order <= 1024) {
    nf.mul_.resize(std::size_t{order} * order);
    for (Elem x = 0; x < order; ++x)
      for (Elem y = 0; y < order; ++y) nf.mul_[std::size_t{x} * order + y] = nf.mul_slow(x, y);
  }

  nf.inv_.assign(order, 0);
  for (Elem x = 1; x < order; ++x) {
    for (unsigned i = 0; i < n; ++i) {
      const Elem z = f.inv(f.frobenius(x, e * i));
      if (nf.coset_[z] == i) {
        nf.inv_[x] = z;
        break;
      }
    }
    if (nf.inv_[x] == 0 || nf.mul(x, nf.inv_[x]) != 1)
      fail(ErrorKind::InternalConsistency, "no nearfield inverse for " + f.render(x));
  }

  if (n == 2 && order <= 1024) {
    for (Elem x = 0; x < order; ++x)
      for (Elem y = 0; y < order; ++y)
        if (nf.mul(x, y) != nm_mul_closed_form(f, x, y))
          fail(ErrorKind::InternalConsistency, "coset construction disagrees with the n = 2 closed form");
  }
  return nf;
}

inline Elem nm_mul(const Nearfield& nf, Elem x, Elem y) { return nf.mul(x, y); }
inline Elem nm_inv(const Nearfield& nf, Elem x) { return nf.inv(x); }

/// Exhaustive certification of the nearfield axioms. Left distributivity is
/// recorded but not required.
inline AxiomReport verify_nearfield_axioms(const Nearfield& nf) {
  const Field& f = nf.field();
  const Elem Q = nf.order();
  const auto show = [&](std::initializer_list<Elem> xs) {
    std::string s = "(";
    for (auto x : xs) s += (s.size() > 1 ? "," : "") + f.render(x);
    return s + ")";
  };
  AxiomReport rep;

  {
    std::string w;
    bool ok = true;
    for (Elem x = 0; x < Q && ok; ++x) {
      if (nf.add(x, 0) != x || nf.add(x, nf.neg(x)) != 0) ok = false, w = show({x});
      for (Elem y = 0; y < Q && ok; ++y) {
        const Elem xy = nf.add(x, y);
        if (xy != nf.add(y, x)) ok = false, w = show({x, y});
        for (Elem z = 0; z < Q && ok; ++z)
          if (nf.add(xy, z) != nf.add(x, nf.add(y, z))) ok = false, w = show({x, y, z});
      }
    }
    rep.add("additive-abelian", ok, w);
  }
  {
    std::string w;
    bool ok = true;
    for (Elem x = 1; x < Q && ok; ++x) {
      if (nf.mul(x, 1) != x || nf.mul(1, x) != x) ok = false, w = "identity " + show({x});
      const Elem xi = nf.inv(x);
      if (nf.mul(x, xi) != 1 || nf.mul(xi, x) != 1) ok = false, w = "inverse " + show({x});
      for (Elem y = 1; y < Q && ok; ++y) {
        const Elem xy = nf.mul(x, y);
        if (xy == 0) ok = false, w = "closure " + show({x, y});
        for (Elem z = 1; z < Q && ok; ++z)
          if (nf.mul(xy, z) != nf.mul(x, nf.mul(y, z))) ok = false, w = "associativity " + show({x, y, z});
      }
    }
    rep.add("multiplicative-group", ok, w);
  }
  {
    std::string w;
    bool ok = true;
    for (Elem x = 0; x < Q && ok; ++x)
      if (nf.mul(x, 0) != 0 || nf.mul(0, x) != 0) ok = false, w = show({x});
    rep.add("zero-absorbing", ok, w);
  }
  {
    std::string w;
    bool ok = true;
    for (Elem x = 0; x < Q && ok; ++x)
      for (Elem y = 0; y < Q && ok; ++y) {
        const Elem s = nf.add(x, y);
        for (Elem z = 0; z < Q && ok; ++z)
          if (nf.mul(s, z) != nf.add(nf.mul(x, z), nf.mul(y, z))) ok = false, w = show({x, y, z});
      }
    rep.add("right-distributive", ok, w);
  }
  {
    std::string w;
    bool ok = true;
    for (Elem x = 0; x < Q && ok; ++x)
      for (Elem y = 0; y < Q && ok; ++y) {
        const Elem s = nf.add(x, y);
        for (Elem z = 0; z < Q && ok; ++z)
          if (nf.mul(z, s) != nf.add(nf.mul(z, x), nf.mul(z, y))) ok = false, w = show({x, y, z});
      }
    rep.add("left-distributive", ok, w, /*required=*/false);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The multiplicative group of N(2, q).

/// Certificate that <N(2,q)*, *> is the extension of the cyclic group of
/// squares (order (q^2-1)/2) by an element h acting as x -> x^q.
struct ExtensionCertificate {
  Elem square_generator = 0;  // generates the squares, * order (q^2-1)/2
  Elem non_square = 0;        // h
  bool cyclic_part_ok = false;
  bool h_squared_in_part = false;  // h*h lies in the cyclic part
  bool conjugation_is_frobenius = false;
  bool covers_group = false;
  /// True iff some non-square is an involution, i.e. the extension splits
  /// with a complement of order 2.
  bool splits = false;

  bool holds() const { return cyclic_part_ok && h_squared_in_part && conjugation_is_frobenius && covers_group; }
};

inline ExtensionCertificate certify_multiplicative_structure(const Nearfield& nf) {
  if (nf.twist() != 2) fail(ErrorKind::InvalidParameters, "structure certificate needs n = 2");
  const Field& f = nf.field();
  const std::uint32_t Q = nf.order();
  const std::uint32_t half = (Q - 1) / 2;
  ExtensionCertificate c;
  c.square_generator = f.mul(f.primitive(), f.primitive());
  c.non_square = f.primitive();
  const Elem g = c.square_generator, h = c.non_square;

  std::vector<char> in_part(Q, 0);
  Elem cur = 1;
  std::uint32_t steps = 0;
  do {
    in_part[cur] = 1;
    cur = nf.mul(cur, g);
    ++steps;
  } while (cur != 1 && steps <= Q);
  c.cyclic_part_ok = steps == half;
  for (Elem x = 1; x < Q; ++x)
    if (in_part[x] != static_cast<char>(f.is_square(x))) c.cyclic_part_ok = false;

  c.h_squared_in_part = in_part[nf.mul(h, h)] != 0;
  c.conjugation_is_frobenius = nf.mul(nf.mul(nf.inv(h), g), h) == f.frobenius(g, f.degree() / 2);

  std::vector<char> seen(Q, 0);
  for (Elem x = 1; x < Q; ++x)
    if (in_part[x]) seen[x] = 1, seen[nf.mul(x, h)] = 1;
  c.covers_group = std::count(seen.begin() + 1, seen.end(), 1) == static_cast<long>(Q - 1);

  for (Elem x = 1; x < Q; ++x)
    if (!f.is_square(x) && nf.mul(x, x) == 1) c.splits = true;
  return c;
}

enum class SubgroupShape { Cyclic, Split };

/// A subgroup of <N(2,q)*, *>. Cyclic: <gamma^((q^2-1)/d)>, all squares.
/// Split: S_{d/2} u S_{d/2} h with h a non-square and h^(q+1) in S_{d/2}.
struct MultSubgroup {
  std::vector<Elem> elements;  // ascending
  SubgroupShape shape = SubgroupShape::Cyclic;
  std::uint32_t d = 1;
  Elem h = 0;  // Split only

  std::size_t order() const { return elements.size(); }
  bool contains(Elem x) const { return std::binary_search(elements.begin(), elements.end(), x); }
};

namespace detail {

inline std::vector<Elem> closure(const Nearfield& nf, std::initializer_list<Elem> gens) {
  std::set<Elem> s{1};
  std::vector<Elem> frontier{1};
  while (!frontier.empty()) {
    std::vector<Elem> next;
    for (Elem x : frontier)
      for (Elem g : gens) {
        const Elem y = nf.mul(x, g);
        if (s.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {s.begin(), s.end()};
}

inline std::vector<Elem> field_cyclic(const Field& f, Elem g) {
  std::vector<Elem> out;
  Elem cur = 1;
  do {
    out.push_back(cur);
    cur = f.mul(cur, g);
  } while (cur != 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Tags a subgroup with its shape, certifying the shape by membership. Throws
/// LemmaViolation when neither shape fits.
inline MultSubgroup classify_subgroup(const Nearfield& nf, std::vector<Elem> elems) {
  const Field& f = nf.field();
  const std::uint32_t Q = nf.order();
  const std::uint32_t q = nf.kernel_order();
  std::sort(elems.begin(), elems.end());
  MultSubgroup s;
  s.elements = std::move(elems);
  const auto d = static_cast<std::uint32_t>(s.elements.size());
  s.d = d;
  std::vector<Elem> squares, others;
  for (Elem x : s.elements) (f.is_square(x) ? squares : others).push_back(x);

  if (others.empty()) {
    if (((Q - 1) / 2) % d == 0 && detail::field_cyclic(f, f.pow(f.primitive(), (Q - 1) / d)) == s.elements) {
      s.shape = SubgroupShape::Cyclic;
      return s;
    }
  } else if (squares.size() == others.size() && d % 2 == 0 && ((Q - 1) / 2) % (d / 2) == 0) {
    const Elem h = others.front();
    std::vector<Elem> coset;
    for (Elem x : squares) coset.push_back(f.mul(x, h));
    std::sort(coset.begin(), coset.end());
    const bool half_ok = detail::field_cyclic(f, f.pow(f.primitive(), 2 * (Q - 1) / d)) == squares;
    const bool norm_ok = std::binary_search(squares.begin(), squares.end(), f.pow(h, q + 1));
    if (half_ok && norm_ok && coset == others) {
      s.shape = SubgroupShape::Split;
      s.h = h;
      return s;
    }
  }
  fail(ErrorKind::LemmaViolation, "subgroup of order " + std::to_string(d) + " matches neither subgroup shape");
}

/// All subgroups of <N(2,q)*, *>, by closure of every one- and two-element
/// generating set. Ordered by (order, elements).
inline std::vector<MultSubgroup> enumerate_mult_subgroups(const Nearfield& nf) {
  if (nf.twist() != 2) fail(ErrorKind::InvalidParameters, "subgroup enumeration needs n = 2");
  const std::uint32_t Q = nf.order();
  std::set<std::vector<Elem>> found;
  for (Elem a = 1; a < Q; ++a) {
    found.insert(detail::closure(nf, {a}));
    for (Elem b = a + 1; b < Q; ++b) found.insert(detail::closure(nf, {a, b}));
  }
  std::vector<std::vector<Elem>> sorted(found.begin(), found.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  std::vector<MultSubgroup> out;
  for (auto& e : sorted) out.push_back(classify_subgroup(nf, std::move(e)));
  return out;
}

enum class HomClause {
  CyclicSource,     // (i)    sigma(x) = x^(rj) on G
  SquaresOnto,      // (ii)a  sigma(S_l) = H, sigma(x) = x^(rj/2) on S_l
  SquaresIndexTwo,  // (ii)b  sigma(S_l) != H, sigma(x) = x^(rj) on S_l
};

struct HomClass {
  HomClause clause = HomClause::CyclicSource;
  std::uint32_t r = 1;
  std::uint32_t j = 1;
  std::uint64_t exponent = 1;  // the certified power
  std::uint32_t kernel_on_squares = 0;
};

namespace detail {

// Smallest j in [1, bound) coprime to `modulus` with sigma(x) = x^(scale*j/div)
// on `domain`. An empty range (bound <= 1) degenerates to j = 1.
inline std::optional<std::uint32_t> find_exponent(const Nearfield& nf, const std::map<Elem, Elem>& sigma,
                                                  const std::vector<Elem>& domain, std::uint32_t bound,
                                                  std::uint32_t modulus, std::uint64_t scale, std::uint64_t div) {
  const std::uint32_t hi = std::max<std::uint32_t>(bound, 2);
  for (std::uint32_t j = 1; j < hi; ++j) {
    if (modulus > 1 && std::gcd(j, modulus) != 1) continue;
    if ((scale * j) % div != 0) continue;
    const std::uint64_t k = scale * j / div;
    bool ok = true;
    for (Elem x : domain)
      if (nf.pow(x, k) != sigma.at(x)) {
        ok = false;
        break;
      }
    if (ok) return j;
  }
  return std::nullopt;
}

}  // namespace detail

/// Decides which clause of the homomorphism-shape lemma applies to an onto
/// *-homomorphism sigma: G -> H with H cyclic, and certifies the exponent
/// pointwise. sigma is an explicit table over G.
inline HomClass classify_homomorphism(const Nearfield& nf, const MultSubgroup& G, const MultSubgroup& H,
                                      const std::map<Elem, Elem>& sigma) {
  const Field& f = nf.field();
  const auto show = [&](Elem a, Elem b) { return "(" + f.render(a) + "," + f.render(b) + ")"; };
  if (H.shape != SubgroupShape::Cyclic) fail(ErrorKind::InvalidParameters, "target subgroup must be cyclic");
  for (Elem x : G.elements) {
    auto it = sigma.find(x);
    if (it == sigma.end()) fail(ErrorKind::InvalidParameters, "sigma undefined at " + f.render(x));
    if (!H.contains(it->second)) fail(ErrorKind::NotHomomorphism, "sigma(" + f.render(x) + ") not in H");
  }
  for (Elem x : G.elements)
    for (Elem y : G.elements)
      if (sigma.at(nf.mul(x, y)) != nf.mul(sigma.at(x), sigma.at(y)))
        fail(ErrorKind::NotHomomorphism, "witness pair " + show(x, y));
  std::set<Elem> image;
  for (Elem x : G.elements) image.insert(sigma.at(x));
  if (image.size() != H.order()) fail(ErrorKind::NotSurjective, "image misses part of H");

  const auto oH = static_cast<std::uint32_t>(H.order());
  HomClass hc;
  hc.r = static_cast<std::uint32_t>(G.order() / H.order());
  const auto lemma_fail = [](const std::string& what) { fail(ErrorKind::LemmaViolation, what); };

  if (G.shape == SubgroupShape::Cyclic) {
    for (Elem x : H.elements)
      if (!G.contains(x)) lemma_fail("H is not contained in G");
    auto j = detail::find_exponent(nf, sigma, G.elements, oH, oH, hc.r, 1);
    if (!j) lemma_fail("no exponent rj represents sigma");
    hc.clause = HomClause::CyclicSource;
    hc.j = *j;
    hc.exponent = std::uint64_t{hc.r} * *j;
    return hc;
  }

  std::vector<Elem> sl;
  for (Elem x : G.elements)
    if (f.is_square(x)) sl.push_back(x);
  std::set<Elem> s_img;
  std::uint32_t kernel = 0;
  for (Elem x : sl) {
    s_img.insert(sigma.at(x));
    if (sigma.at(x) == 1) ++kernel;
  }
  hc.kernel_on_squares = kernel;

  if (s_img.size() == H.order()) {
    if (hc.r % 2 != 0) lemma_fail("r is odd although sigma(S_l) = H");
    if (kernel != hc.r / 2) lemma_fail("kernel on S_l has order != r/2");
    for (Elem x : H.elements)
      if (!G.contains(x)) lemma_fail("H is not contained in G");
    auto j = detail::find_exponent(nf, sigma, sl, oH, oH, hc.r, 2);
    if (!j) lemma_fail("no exponent rj/2 represents sigma on S_l");
    hc.clause = HomClause::SquaresOnto;
    hc.j = *j;
    hc.exponent = std::uint64_t{hc.r} * *j / 2;
    return hc;
  }

  if (oH % 2 != 0) lemma_fail("o(H) is odd although sigma(S_l) != H");
  if (kernel != hc.r) lemma_fail("kernel on S_l has order != r");
  auto j = detail::find_exponent(nf, sigma, sl, oH / 2, oH / 2, hc.r, 1);
  if (!j) lemma_fail("no exponent rj represents sigma on S_l");
  const Elem sh = sigma.at(G.h);
  if (s_img.count(sh)) lemma_fail("sigma(h) lies in sigma(S_l)");
  std::set<Elem> rebuilt(s_img);
  for (Elem s : s_img) rebuilt.insert(nf.mul(s, sh));
  if (rebuilt.size() != H.order()) lemma_fail("H != S u S sigma(h)");
  hc.clause = HomClause::SquaresIndexTwo;
  hc.j = *j;
  hc.exponent = std::uint64_t{hc.r} * *j;
  return hc;
}

}  // namespace uforge
