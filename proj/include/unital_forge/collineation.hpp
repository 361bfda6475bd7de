#pragma once

// Andre collineations of NP(N). A collineation is stored as
// (kind, c, d, u, v, frob) and acts as P -> kind(c,d,u,v)(sigma^frob(P)),
// sigma being x -> x^p applied to every coordinate.
//
//   phi(c,d,u,v):   (x,y,1) -> (x*c+u, y*d+v, 1)
//                   (1,y,0) -> (1, c^-1*y*d, 0)      (0,1,0) fixed
//                   [s,1,t] -> [c^-1*s*d, 1, t*d - u*c^-1*s*d - v]
//                   [1,0,t] -> [1,0, t*c - u]        [0,0,1] fixed
//
//   gamma(c,d,u,v): (x,y,1) -> (y*c+u, x*d+v, 1)
//                   (1,y,0) -> (1, (y*c)^-1*d, 0)    y != 0
//                   (1,0,0) <-> (0,1,0)
//                   [s,1,t] -> [c^-1*s^-1*d, 1, t*s^-1*d - u*c^-1*s^-1*d - v]   s != 0
//                   [0,1,t] -> [1,0,t*c - u]         [1,0,t] -> [0,1,t*d - v]
//                   [0,0,1] fixed

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "unital_forge/error.hpp"
#include "unital_forge/parallel.hpp"
#include "unital_forge/plane.hpp"

namespace uforge {

enum class CollKind : std::uint8_t { Phi, Gamma };

struct Collineation {
  CollKind kind = CollKind::Phi;
  Elem c = 1, d = 1, u = 0, v = 0;
  unsigned frob = 0;

  static Collineation phi(Elem c, Elem d, Elem u, Elem v, unsigned frob = 0) {
    return {CollKind::Phi, c, d, u, v, frob};
  }
  static Collineation gamma(Elem c, Elem d, Elem u, Elem v, unsigned frob = 0) {
    return {CollKind::Gamma, c, d, u, v, frob};
  }
  static Collineation identity() { return {}; }

  bool is_identity() const { return kind == CollKind::Phi && c == 1 && d == 1 && u == 0 && v == 0 && frob == 0; }
  bool is_translation() const { return kind == CollKind::Phi && c == 1 && d == 1 && frob == 0; }
  bool is_linear() const { return frob == 0; }
  friend bool operator==(const Collineation&, const Collineation&) = default;
};

/// Mixed-radix key over (kind, frob, c, d, u, v); unique per canonical form.
inline std::uint64_t group_key(const Plane& pl, const Collineation& k) {
  const std::uint64_t Q = pl.order();
  std::uint64_t key = k.kind == CollKind::Gamma ? 1 : 0;
  key = key * pl.nearfield().exponent() + k.frob;
  key = key * Q + k.c;
  key = key * Q + k.d;
  key = key * Q + k.u;
  key = key * Q + k.v;
  return key;
}

inline std::string render(const Plane& pl, const Collineation& k) {
  const Field& f = pl.field();
  std::string s = k.kind == CollKind::Phi ? "phi(" : "gamma(";
  s += f.render(k.c) + "," + f.render(k.d) + "," + f.render(k.u) + "," + f.render(k.v) + ")";
  if (k.frob) s += "·frob^" + std::to_string(k.frob);
  return s;
}

inline Point apply(const Plane& pl, const Collineation& k, Point P) {
  const Nearfield& nf = pl.nearfield();
  if (k.frob) P.x = nf.automorphism(P.x, k.frob), P.y = nf.automorphism(P.y, k.frob);
  if (k.kind == CollKind::Phi) {
    switch (P.kind) {
      case PointKind::Affine: return Point::affine(nf.add(nf.mul(P.x, k.c), k.u), nf.add(nf.mul(P.y, k.d), k.v));
      case PointKind::Infinite: return Point::infinite(nf.mul(nf.mul(nf.inv(k.c), P.y), k.d));
      case PointKind::Vertex: return P;
    }
  }
  switch (P.kind) {
    case PointKind::Affine: return Point::affine(nf.add(nf.mul(P.y, k.c), k.u), nf.add(nf.mul(P.x, k.d), k.v));
    case PointKind::Infinite:
      if (P.y == 0) return Point::vertex();
      return Point::infinite(nf.mul(nf.inv(nf.mul(P.y, k.c)), k.d));
    case PointKind::Vertex: return Point::infinite(0);
  }
  return P;
}

inline Line apply_line(const Plane& pl, const Collineation& k, Line L) {
  const Nearfield& nf = pl.nearfield();
  if (k.frob) L.s = nf.automorphism(L.s, k.frob), L.t = nf.automorphism(L.t, k.frob);
  const Elem ci = nf.inv(k.c);
  if (k.kind == CollKind::Phi) {
    switch (L.kind) {
      case LineKind::Oblique: {
        const Elem s = nf.mul(nf.mul(ci, L.s), k.d);
        return Line::oblique(s, nf.sub(nf.sub(nf.mul(L.t, k.d), nf.mul(k.u, s)), k.v));
      }
      case LineKind::Vertical: return Line::vertical(nf.sub(nf.mul(L.t, k.c), k.u));
      case LineKind::AtInfinity: return L;
    }
  }
  switch (L.kind) {
    case LineKind::Oblique: {
      if (L.s == 0) return Line::vertical(nf.sub(nf.mul(L.t, k.c), k.u));
      const Elem si = nf.inv(L.s);
      const Elem s = nf.mul(nf.mul(ci, si), k.d);
      return Line::oblique(s, nf.sub(nf.sub(nf.mul(nf.mul(L.t, si), k.d), nf.mul(k.u, s)), k.v));
    }
    case LineKind::Vertical: return Line::oblique(0, nf.sub(nf.mul(L.t, k.d), k.v));
    case LineKind::AtInfinity: return L;
  }
  return L;
}

inline PointId apply(const Plane& pl, const Collineation& k, PointId p) { return pl.id(apply(pl, k, pl.point(p))); }
inline LineId apply_line(const Plane& pl, const Collineation& k, LineId l) {
  return pl.id(apply_line(pl, k, pl.line(l)));
}

/// Probe points whose images determine a collineation of this family.
inline std::vector<Point> probe_points(const Plane& pl) {
  const Elem g = pl.field().primitive();
  return {Point::affine(0, 0), Point::affine(1, 0), Point::affine(0, 1), Point::affine(1, 1),
          Point::vertex(),     Point::infinite(0), Point::affine(g, 0), Point::affine(g, g),
          Point::infinite(1),  Point::infinite(g)};
}

/// Reads (kind, c, d, u, v, frob) off the images of the probe points and
/// certifies the result on every probe. `image` maps a Point to its image.
template <class Image>
Collineation canonicalize(const Plane& pl, Image&& image) {
  const Nearfield& nf = pl.nearfield();
  const auto bad = [](const std::string& why) -> Collineation { fail(ErrorKind::NotClosed, why); };
  Collineation k;
  const Point top = image(Point::vertex());
  if (top.kind == PointKind::Vertex) k.kind = CollKind::Phi;
  else if (top == Point::infinite(0)) k.kind = CollKind::Gamma;
  else return bad("(0,1,0) maps outside {(0,1,0),(1,0,0)}");

  const Point o = image(Point::affine(0, 0));
  const Point e1 = image(Point::affine(1, 0));
  const Point e2 = image(Point::affine(0, 1));
  const Point eg = image(Point::affine(pl.field().primitive(), 0));
  if (o.kind != PointKind::Affine || e1.kind != PointKind::Affine || e2.kind != PointKind::Affine ||
      eg.kind != PointKind::Affine)
    return bad("an affine probe maps to infinity");
  k.u = o.x;
  k.v = o.y;
  Elem g_img = 0;
  if (k.kind == CollKind::Phi) {
    k.c = nf.sub(e1.x, k.u);
    k.d = nf.sub(e2.y, k.v);
    if (k.c == 0 || k.d == 0) return bad("degenerate scale");
    g_img = nf.mul(nf.sub(eg.x, k.u), nf.inv(k.c));
  } else {
    k.d = nf.sub(e1.y, k.v);
    k.c = nf.sub(e2.x, k.u);
    if (k.c == 0 || k.d == 0) return bad("degenerate scale");
    g_img = nf.mul(nf.sub(eg.y, k.v), nf.inv(k.d));
  }
  const Elem g = pl.field().primitive();
  bool found = false;
  for (unsigned i = 0; i < nf.exponent(); ++i)
    if (nf.automorphism(g, i) == g_img) {
      k.frob = i;
      found = true;
      break;
    }
  if (!found) return bad("no automorphism matches the probe (g,0,1)");
  for (const Point& P : probe_points(pl))
    if (apply(pl, k, P) != image(P)) return bad("canonical form disagrees on probe " + pl.render(P));
  return k;
}

/// a then b.
inline Collineation compose(const Plane& pl, const Collineation& a, const Collineation& b) {
  return canonicalize(pl, [&](const Point& P) { return apply(pl, b, apply(pl, a, P)); });
}

inline Collineation inverse(const Plane& pl, const Collineation& k) {
  const Nearfield& nf = pl.nearfield();
  const unsigned E = nf.exponent();
  const unsigned back = (E - k.frob % E) % E;
  const auto tau = [&](Elem x) { return nf.automorphism(x, back); };
  const Elem ci = nf.inv(tau(k.c)), di = nf.inv(tau(k.d));
  const Elem uu = nf.neg(nf.mul(tau(k.u), ci)), vv = nf.neg(nf.mul(tau(k.v), di));
  Collineation r = k.kind == CollKind::Phi ? Collineation::phi(ci, di, uu, vv, back)
                                           : Collineation::gamma(di, ci, vv, uu, back);
  if (!compose(pl, k, r).is_identity()) fail(ErrorKind::NotClosed, "closed-form inverse failed for " + render(pl, k));
  return r;
}

/// Exhaustive check that k permutes points and lines and preserves incidence.
inline bool certify_incidence(const Plane& pl, const Collineation& k) {
  const std::size_t n = pl.size();
  std::vector<PointId> pi(n);
  std::vector<LineId> li(n);
  std::vector<char> hitp(n, 0), hitl(n, 0);
  for (PointId p = 0; p < n; ++p) {
    pi[p] = apply(pl, k, p);
    if (hitp[pi[p]]++) return false;
  }
  for (LineId l = 0; l < n; ++l) {
    li[l] = apply_line(pl, k, l);
    if (hitl[li[l]]++) return false;
  }
  for (LineId l = 0; l < n; ++l)
    for (PointId p = 0; p < n; ++p)
      if (pl.incident(p, l) != pl.incident(pi[p], li[l])) return false;
  return true;
}

/// Canonicalizes from the full point permutation and compares every point.
inline bool certify_canonical_form(const Plane& pl, const Collineation& k) {
  const Collineation r = canonicalize(pl, [&](const Point& P) { return apply(pl, k, P); });
  if (!(r == k)) return false;
  for (PointId p = 0; p < pl.size(); ++p)
    if (apply(pl, r, p) != apply(pl, k, p)) return false;
  return true;
}

/// Order as the lcm of the cycle lengths on points.
inline std::uint64_t element_order(const Plane& pl, const Collineation& k) {
  const std::size_t n = pl.size();
  std::vector<PointId> pi(n);
  for (PointId p = 0; p < n; ++p) pi[p] = apply(pl, k, p);
  std::vector<char> seen(n, 0);
  std::uint64_t ord = 1;
  for (PointId p = 0; p < n; ++p) {
    if (seen[p]) continue;
    std::uint64_t len = 0;
    for (PointId x = p; !seen[x]; x = pi[x]) seen[x] = 1, ++len;
    ord = std::lcm(ord, len);
  }
  return ord;
}

// ---------------------------------------------------------------------------
// Groups.

struct CollineationGroup {
  std::vector<Collineation> elements;  // ascending by group_key
  std::vector<Collineation> generators;
  std::size_t order() const { return elements.size(); }
};

namespace detail {

/// An additive basis of the carrier: the powers of the characteristic.
inline std::vector<Elem> additive_basis(const Plane& pl) {
  std::vector<Elem> b;
  for (Elem x = 1; x < pl.order(); x *= pl.field().characteristic()) b.push_back(x);
  return b;
}

/// gamma and gamma^2 generate the *-group of N(2,q); for a field gamma alone suffices.
inline std::vector<Elem> mult_generators(const Plane& pl) {
  const Field& f = pl.field();
  std::vector<Elem> g{f.primitive()};
  if (pl.nearfield().twist() > 1) g.push_back(f.mul(f.primitive(), f.primitive()));
  return g;
}

inline void sort_by_key(const Plane& pl, std::vector<Collineation>& v) {
  std::sort(v.begin(), v.end(),
            [&](const Collineation& a, const Collineation& b) { return group_key(pl, a) < group_key(pl, b); });
}

}  // namespace detail

/// T: the translations phi(1,1,u,v).
inline std::vector<Collineation> translation_generators(const Plane& pl) {
  std::vector<Collineation> g;
  for (Elem b : detail::additive_basis(pl)) {
    g.push_back(Collineation::phi(1, 1, b, 0));
    g.push_back(Collineation::phi(1, 1, 0, b));
  }
  return g;
}

/// H_y = {phi(1,1,u,u*y)}: elations with centre (1,y,0) and axis [0,0,1].
inline std::vector<Collineation> elation_generators(const Plane& pl, Elem y) {
  std::vector<Collineation> g;
  for (Elem b : detail::additive_basis(pl)) g.push_back(Collineation::phi(1, 1, b, pl.nearfield().mul(b, y)));
  return g;
}

/// H_0' = {phi(1,1,0,v)}: elations with centre (0,1,0) and axis [0,0,1].
inline std::vector<Collineation> vertical_elation_generators(const Plane& pl) {
  std::vector<Collineation> g;
  for (Elem b : detail::additive_basis(pl)) g.push_back(Collineation::phi(1, 1, 0, b));
  return g;
}

/// T, the scalings phi(c,d,0,0) and the swap gamma(1,1,0,0).
inline std::vector<Collineation> linear_generators(const Plane& pl) {
  auto g = translation_generators(pl);
  for (Elem m : detail::mult_generators(pl)) {
    g.push_back(Collineation::phi(m, 1, 0, 0));
    g.push_back(Collineation::phi(1, m, 0, 0));
  }
  g.push_back(Collineation::gamma(1, 1, 0, 0));
  return g;
}

/// The linear generators plus the Frobenius x -> x^p.
inline std::vector<Collineation> standard_generators(const Plane& pl) {
  auto g = linear_generators(pl);
  if (pl.nearfield().exponent() > 1) g.push_back(Collineation::phi(1, 1, 0, 0, 1));
  return g;
}

/// Closure of the generators under composition, breadth first. Throws
/// BudgetExceeded once more than `budget` elements are found.
inline CollineationGroup generate_group(const Plane& pl, std::vector<Collineation> gens,
                                        std::size_t budget = 2'000'000) {
  CollineationGroup G;
  G.generators = gens;
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::vector<Collineation>& el = G.elements;
  el.push_back(Collineation::identity());
  seen.emplace(group_key(pl, el[0]), 0);
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (const auto& g : gens) {
      const Collineation h = compose(pl, el[i], g);
      if (seen.emplace(group_key(pl, h), static_cast<std::uint32_t>(el.size())).second) {
        el.push_back(h);
        if (el.size() > budget)
          fail(ErrorKind::BudgetExceeded, "group exceeds " + std::to_string(budget) + " elements");
      }
    }
  }
  detail::sort_by_key(pl, el);
  return G;
}

/// Number of linear collineations phi/gamma(c,d,u,v): 2 m^2 (m-1)^2.
inline std::uint64_t linear_group_size(const Plane& pl) {
  const std::uint64_t m = pl.order();
  return 2 * m * m * (m - 1) * (m - 1);
}

/// The index-th linear collineation in key order.
inline Collineation linear_element(const Plane& pl, std::uint64_t index) {
  const std::uint64_t m = pl.order();
  Collineation k;
  k.v = static_cast<Elem>(index % m), index /= m;
  k.u = static_cast<Elem>(index % m), index /= m;
  k.d = static_cast<Elem>(index % (m - 1) + 1), index /= m - 1;
  k.c = static_cast<Elem>(index % (m - 1) + 1), index /= m - 1;
  k.kind = index ? CollKind::Gamma : CollKind::Phi;
  return k;
}

/// The linear group listed tuple by tuple, in key order.
inline CollineationGroup enumerate_linear_group(const Plane& pl) {
  CollineationGroup G;
  G.generators = linear_generators(pl);
  const std::uint64_t n = linear_group_size(pl);
  G.elements.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) G.elements.push_back(linear_element(pl, i));
  return G;
}

// ---------------------------------------------------------------------------
// Central collineations.

enum class CentralKind { Elation, Homology };

struct CentralInfo {
  PointId center = 0;
  LineId axis = 0;
  CentralKind kind = CentralKind::Elation;
};

/// Centre and axis of a non-identity central collineation, found by scanning
/// the fixed points and fixed lines; nullopt if k is not central.
inline std::optional<CentralInfo> central_classification(const Plane& pl, const Collineation& k) {
  const std::size_t n = pl.size();
  std::vector<char> fixp(n), fixl(n);
  for (PointId p = 0; p < n; ++p) fixp[p] = apply(pl, k, p) == p;
  for (LineId l = 0; l < n; ++l) fixl[l] = apply_line(pl, k, l) == l;
  std::optional<LineId> axis;
  for (LineId l = 0; l < n && !axis; ++l) {
    if (!fixl[l]) continue;
    auto pts = pl.points_on(l);
    if (std::all_of(pts.begin(), pts.end(), [&](PointId p) { return fixp[p] != 0; })) axis = l;
  }
  std::optional<PointId> center;
  for (PointId p = 0; p < n && !center; ++p) {
    if (!fixp[p]) continue;
    auto ls = pl.lines_through(p);
    if (std::all_of(ls.begin(), ls.end(), [&](LineId l) { return fixl[l] != 0; })) center = p;
  }
  if (!axis || !center) return std::nullopt;
  if (std::count(fixp.begin(), fixp.end(), 1) == static_cast<long>(n)) return std::nullopt;  // identity
  return CentralInfo{*center, *axis, pl.incident(*center, *axis) ? CentralKind::Elation : CentralKind::Homology};
}

// ---------------------------------------------------------------------------
// Stabilizers.

/// Membership bitmap over point ids.
using PointMask = std::vector<char>;

inline PointMask make_mask(const Plane& pl, const std::vector<PointId>& S) {
  PointMask m(pl.size(), 0);
  for (PointId p : S) m[p] = 1;
  return m;
}

/// S^k = S. A fixed sample of S is tested first for an early exit.
inline bool stabilizes(const Plane& pl, const Collineation& k, const std::vector<PointId>& S, const PointMask& mask) {
  const std::size_t step = std::max<std::size_t>(1, S.size() / 8);
  for (std::size_t i = 0; i < S.size(); i += step)
    if (!mask[apply(pl, k, S[i])]) return false;
  for (PointId p : S)
    if (!mask[apply(pl, k, p)]) return false;
  return true;
}

/// {k in group : S^k = S}, in key order.
inline CollineationGroup stabilizer(const Plane& pl, const CollineationGroup& group, const std::vector<PointId>& S,
                                    unsigned threads = 1) {
  const PointMask mask = make_mask(pl, S);
  CollineationGroup H;
  H.elements = collect_chunks<Collineation>(group.elements.size(), 4096, threads, [&](std::size_t b, std::size_t e) {
    std::vector<Collineation> out;
    for (std::size_t i = b; i < e; ++i)
      if (stabilizes(pl, group.elements[i], S, mask)) out.push_back(group.elements[i]);
    return out;
  });
  return H;
}

/// Stabilizer of S in the linear group, scanning tuples without materializing the group.
inline CollineationGroup linear_stabilizer(const Plane& pl, const std::vector<PointId>& S, unsigned threads = 1) {
  const PointMask mask = make_mask(pl, S);
  CollineationGroup H;
  H.elements = collect_chunks<Collineation>(linear_group_size(pl), 1 << 14, threads, [&](std::size_t b, std::size_t e) {
    std::vector<Collineation> out;
    for (std::size_t i = b; i < e; ++i) {
      const Collineation k = linear_element(pl, i);
      if (stabilizes(pl, k, S, mask)) out.push_back(k);
    }
    return out;
  });
  return H;
}

}  // namespace uforge
