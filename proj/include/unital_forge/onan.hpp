#pragma once

// O'Nan configurations: four lines whose six pairwise meets are distinct
// points of a point set. Search, the oblique collinearity identity, the
// forced-line check for sets stabilized by the eps-elations, and the
// obstruction configurations inside U(j) and V(j).

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital_forge/collineation.hpp"
#include "unital_forge/error.hpp"
#include "unital_forge/parallel.hpp"
#include "unital_forge/plane.hpp"
#include "unital_forge/polyfn.hpp"
#include "unital_forge/unital.hpp"

namespace uforge {

struct OnanConfig {
  std::array<LineId, 4> lines{};   // ascending
  std::array<PointId, 6> points{};  // ascending

  friend bool operator==(const OnanConfig&, const OnanConfig&) = default;
  friend auto operator<=>(const OnanConfig&, const OnanConfig&) = default;
};

/// Builds and certifies the configuration spanned by four lines of the plane.
inline OnanConfig make_onan_config(const PointSet& U, std::array<LineId, 4> lines) {
  const Plane& pl = *U.plane;
  std::sort(lines.begin(), lines.end());
  if (std::adjacent_find(lines.begin(), lines.end()) != lines.end())
    fail(ErrorKind::InvalidParameters, "O'Nan lines must be distinct");
  OnanConfig c;
  c.lines = lines;
  std::size_t n = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) c.points[n++] = pl.meet(lines[a], lines[b]);
  std::sort(c.points.begin(), c.points.end());
  if (std::adjacent_find(c.points.begin(), c.points.end()) != c.points.end())
    fail(ErrorKind::InvalidParameters, "three of the lines are concurrent");
  for (PointId p : c.points) {
    if (!U.contains(p)) fail(ErrorKind::InvalidParameters, pl.render_point(p) + " is not in the point set");
    int on = 0;
    for (LineId l : lines) on += pl.incident(p, l);
    if (on != 2) fail(ErrorKind::InternalConsistency, "point on " + std::to_string(on) + " configuration lines");
  }
  for (LineId l : lines) {
    int carried = 0;
    for (PointId p : c.points) carried += pl.incident(p, l);
    if (carried != 3) fail(ErrorKind::InternalConsistency, "line carries " + std::to_string(carried) + " points");
  }
  return c;
}

/// The configuration whose six points are given, if they form one.
inline std::optional<OnanConfig> onan_from_points(const PointSet& U, std::array<PointId, 6> pts) {
  const Plane& pl = *U.plane;
  std::sort(pts.begin(), pts.end());
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) return std::nullopt;
  std::vector<LineId> lines;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      const LineId l = pl.line_through(pts[a], pts[b]);
      int on = 0;
      for (PointId p : pts) on += pl.incident(p, l);
      if (on == 3 && std::find(lines.begin(), lines.end(), l) == lines.end()) lines.push_back(l);
      if (on > 3) return std::nullopt;
    }
  if (lines.size() != 4) return std::nullopt;
  try {
    auto c = make_onan_config(U, {lines[0], lines[1], lines[2], lines[3]});
    if (c.points != pts) return std::nullopt;
    return c;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// (x-x2) * (x-x1)^-1 == (y-y2) * (y-y1)^-1 for affine points with x != x1,
/// y != y1, i.e. P2 on the oblique line through P and P1.
inline bool collinear_oblique(const Nearfield& nf, const Point& P, const Point& P1, const Point& P2) {
  if (P.kind != PointKind::Affine || P1.kind != PointKind::Affine || P2.kind != PointKind::Affine)
    fail(ErrorKind::DegenerateTriple, "points must be affine");
  if (P == P1 || P == P2 || P1 == P2) fail(ErrorKind::DegenerateTriple, "points must be pairwise distinct");
  if (P.x == P1.x || P.y == P1.y) fail(ErrorKind::DegenerateTriple, "P and P1 do not span an oblique line");
  const Elem lhs = nf.mul(nf.sub(P.x, P2.x), nf.inv(nf.sub(P.x, P1.x)));
  const Elem rhs = nf.mul(nf.sub(P.y, P2.y), nf.inv(nf.sub(P.y, P1.y)));
  return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Search.

struct OnanConstraints {
  std::optional<PointId> must_contain;
  std::optional<LineShape> forbid_shape;  // no configuration line of this shape
  std::size_t limit = 0;                  // 0: all; otherwise stop after this many per work chunk
};

namespace detail {

struct OnanWork {
  PointId anchor;
  LineId l1, l2;
};

inline constexpr std::size_t kOnanChunk = 16;

}  // namespace detail

/// Exhaustive search. Every configuration is reported once, keyed by its
/// smallest point (or by the required point), and the result is sorted, so
/// the output is independent of the thread count.
inline std::vector<OnanConfig> find_onan(const PointSet& U, const OnanConstraints& cons = {}, unsigned threads = 1) {
  const Plane& pl = *U.plane;
  // Usable lines: at least three points of U and not of the forbidden shape.
  std::vector<char> usable(pl.size(), 0);
  std::vector<std::vector<PointId>> on(pl.size());
  for (LineId l = 0; l < pl.size(); ++l) {
    if (cons.forbid_shape && pl.shape(l) == *cons.forbid_shape) continue;
    for (PointId p : pl.points_on(l))
      if (U.contains(p)) on[l].push_back(p);
    usable[l] = on[l].size() >= 3;
  }

  std::vector<PointId> anchors;
  if (cons.must_contain) {
    if (U.contains(*cons.must_contain)) anchors.push_back(*cons.must_contain);
  } else {
    anchors = U.points;
  }
  std::vector<detail::OnanWork> work;
  for (PointId P : anchors) {
    std::vector<LineId> through;
    for (LineId l : pl.lines_through(P))
      if (usable[l]) through.push_back(l);
    for (std::size_t a = 0; a < through.size(); ++a)
      for (std::size_t b = a + 1; b < through.size(); ++b) work.push_back({P, through[a], through[b]});
  }

  const bool anchored = cons.must_contain.has_value();
  auto found = collect_chunks<OnanConfig>(work.size(), detail::kOnanChunk, threads, [&](std::size_t b, std::size_t e) {
    std::vector<OnanConfig> out;
    struct Cross {
      PointId A, B;
      LineId l;
    };
    std::vector<Cross> cross;
    for (std::size_t w = b; w < e; ++w) {
      const auto [P, l1, l2] = work[w];
      cross.clear();
      for (PointId A : on[l1]) {
        if (A == P || (!anchored && A < P)) continue;
        for (PointId B : on[l2]) {
          if (B == P || (!anchored && B < P)) continue;
          const LineId l = pl.line_through(A, B);
          if (usable[l]) cross.push_back({A, B, l});
        }
      }
      for (std::size_t i = 0; i < cross.size(); ++i)
        for (std::size_t k = i + 1; k < cross.size(); ++k) {
          const auto& c1 = cross[i];
          const auto& c2 = cross[k];
          if (c1.A == c2.A || c1.B == c2.B || c1.l == c2.l) continue;
          const PointId X = pl.meet(c1.l, c2.l);
          if (!U.contains(X) || (!anchored && X < P)) continue;
          out.push_back(make_onan_config(U, {l1, l2, c1.l, c2.l}));
          if (cons.limit && out.size() >= cons.limit) return out;
        }
    }
    return out;
  });
  std::sort(found.begin(), found.end());
  if (cons.limit && found.size() > cons.limit) found.resize(cons.limit);
  return found;
}

// ---------------------------------------------------------------------------
// Forced line.

namespace detail {

inline void require_eps_elations(const PointSet& U) {
  const Plane& pl = *U.plane;
  if (pl.nearfield().twist() != 2) fail(ErrorKind::HypothesisFailed, "needs NP(N(2,q))");
  if (!U.contains(pl.vertex())) fail(ErrorKind::HypothesisFailed, "(0,1,0) is not in the set");
  const Field& f = pl.field();
  const Elem eps = constants(f).epsilon;
  for (Elem t : base_field_elements(f)) {
    const auto k = Collineation::phi(1, 1, 0, f.mul(t, eps));
    for (PointId p : U.points)
      if (!U.contains(apply(pl, k, p)))
        fail(ErrorKind::HypothesisFailed, render(pl, k) + " moves " + pl.render_point(p) + " off the set");
  }
}

}  // namespace detail

/// Every configuration through (0,1,0) has a line [0,1,z]. Needs (0,1,0) in U
/// and U stabilized by phi(1,1,0,t eps) for t in GF(q).
inline bool check_forced_line(const PointSet& U, unsigned threads = 1) {
  detail::require_eps_elations(U);
  OnanConstraints c;
  c.must_contain = U.plane->vertex();
  c.forbid_shape = LineShape::Horizontal;
  c.limit = 1;
  return find_onan(U, c, threads).empty();
}

// ---------------------------------------------------------------------------
// Obstructions.

enum class ObstructionPath { RootsOfUnity, Collision, Search };

inline const char* to_string(ObstructionPath p) {
  switch (p) {
    case ObstructionPath::RootsOfUnity: return "roots-of-unity";
    case ObstructionPath::Collision: return "collision";
    case ObstructionPath::Search: return "search";
  }
  return "?";
}

struct Obstruction {
  PointSet ambient;  // the configuration lives here
  OnanConfig config;
  ObstructionPath path = ObstructionPath::Search;
  std::optional<std::pair<Elem, Elem>> seeds;  // roots or collision pair used by a construction
  std::string note;                            // why a construction was skipped
};

namespace detail {

/// Six points -> certified configuration through (0,1,0) avoiding [0,1,z], or none.
inline std::optional<OnanConfig> certify_obstruction(const PointSet& S, const std::array<Point, 5>& affine) {
  const Plane& pl = *S.plane;
  std::array<PointId, 6> ids{pl.vertex()};
  for (int i = 0; i < 5; ++i) ids[i + 1] = pl.id(affine[i]);
  auto c = onan_from_points(S, ids);
  if (!c) return std::nullopt;
  for (LineId l : c->lines)
    if (pl.shape(l) == LineShape::Horizontal) return std::nullopt;
  return c;
}

/// P, (c_i, y_i), (c_i, y_i + s_i eps).
inline std::array<Point, 5> proof_points(const Field& f, Point P, Elem c1, Elem y1, Elem s1, Elem c2, Elem y2,
                                         Elem s2) {
  const Elem eps = constants(f).epsilon;
  return {P, Point::affine(c1, y1), Point::affine(c1, f.add(y1, f.mul(s1, eps))), Point::affine(c2, y2),
          Point::affine(c2, f.add(y2, f.mul(s2, eps)))};
}

inline Obstruction search_obstruction(PointSet S, std::string note, unsigned threads) {
  OnanConstraints c;
  c.must_contain = S.plane->vertex();
  c.forbid_shape = LineShape::Horizontal;
  c.limit = 1;
  auto found = find_onan(S, c, threads);
  if (found.empty())
    fail(ErrorKind::NoObstructionFound, "no configuration through (0,1,0) avoiding [0,1,z] in " + S.family + " (" +
                                            note + ")");
  Obstruction o;
  o.config = found.front();
  o.ambient = std::move(S);
  o.path = ObstructionPath::Search;
  o.note = std::move(note);
  return o;
}

inline std::vector<Elem> roots_in_base(const Field& f, std::uint64_t e) {
  std::vector<Elem> r;
  for (Elem x : base_field_elements(f))
    if (x && f.pow(x, e) == 1) r.push_back(x);
  return r;
}

}  // namespace detail

/// Configuration in U(1,j) through (0,1,0) with no line [0,1,z].
/// Roots of x^(2j-1) = 1 when gcd(2j-1, q-1) > 1, otherwise a collision of
/// h_(2j'-1) with j = j' mod (q-1)/2; full search when neither applies.
inline Obstruction uj_obstruction(std::uint32_t q, std::uint64_t j, unsigned threads = 1) {
  detail::require_odd_q(q);
  if (j < 1 || j >= q - 1) fail(ErrorKind::InvalidParameters, "j must satisfy 1 <= j < q-1");
  PointSet S = make_U(q, 1, j);
  const Field& f = S.plane->field();
  const std::uint64_t half = (q - 1) / 2;

  if (const auto g = std::gcd<std::uint64_t>(2 * j - 1, q - 1); g > 1) {
    const auto r = detail::roots_in_base(f, 2 * j - 1);
    if (r.size() >= 2) {
      const Elem c1 = r[0], c2 = r[1];
      const auto pts = detail::proof_points(f, Point::affine(0, 0), c1, c1, c1, c2, c2, c2);
      if (auto c = detail::certify_obstruction(S, pts)) {
        Obstruction o;
        o.ambient = std::move(S);
        o.config = *c;
        o.path = ObstructionPath::RootsOfUnity;
        o.seeds = std::pair{c1, c2};
        return o;
      }
    }
    return detail::search_obstruction(std::move(S), "roots of x^(2j-1) = 1 gave no configuration", threads);
  }

  const std::uint64_t jp = j % half == 0 ? half : j % half;
  if (!(jp > 1 && jp < half))
    return detail::search_obstruction(std::move(S), "j' = " + std::to_string(jp) + " outside 1 < j' < (q-1)/2",
                                      threads);
  std::pair<Elem, Elem> col;
  try {
    col = hk_find_collision(q, 2 * jp - 1);
  } catch (const Error& e) {
    return detail::search_obstruction(std::move(S), std::string("no collision: ") + e.what(), threads);
  }
  const auto [c1, c2] = col;
  const Elem s = f.div(f.sub(c2, 1), f.sub(c1, 1));
  const auto pts = detail::proof_points(f, Point::affine(1, 1), c1, f.pow(c1, 2 * j), 1, c2, f.pow(c2, 2 * j), s);
  if (auto c = detail::certify_obstruction(S, pts)) {
    Obstruction o;
    o.ambient = std::move(S);
    o.config = *c;
    o.path = ObstructionPath::Collision;
    o.seeds = col;
    return o;
  }
  return detail::search_obstruction(std::move(S), "collision points gave no configuration", threads);
}

/// V(j) together with B(0,0) and (0,1,0): the part of any unital of the form
/// {(x, b delta(x) + w, 1)} u {(0,1,0)} that V(j) describes.
inline PointSet vj_ambient(std::uint32_t q, std::uint64_t j) {
  const PointSet V = make_V(q, j);
  auto pts = V.points;
  for (PointId p : make_B(q, 0, 0).points) pts.push_back(p);
  pts.push_back(V.plane->vertex());
  return make_point_set(V.plane, q, "V+B(0,0)", V.params, std::move(pts));
}

/// Configuration in V(j) u B(0,0) u {(0,1,0)} through (0,1,0) with no line [0,1,z].
/// Needs q = 3 mod 4, q > 3, 1 <= j < q-1, gcd(j, q-1) = 1.
inline Obstruction vj_obstruction(std::uint32_t q, std::uint64_t j, unsigned threads = 1) {
  detail::require_odd_q(q);
  if (q % 4 != 3) fail(ErrorKind::InvalidParameters, "V(j) needs q = 3 mod 4");
  if (q == 3) fail(ErrorKind::InvalidParameters, "construction inapplicable at q = 3");
  if (j < 1 || j >= q - 1 || std::gcd<std::uint64_t>(j, q - 1) != 1)
    fail(ErrorKind::InvalidParameters, "j must satisfy 1 <= j < q-1 and gcd(j, q-1) = 1");
  PointSet S = vj_ambient(q, j);
  const Field& f = S.plane->field();
  const std::uint64_t e = j * (q + 1) / 2;  // delta(x) = x^e on nonzero squares

  if (std::gcd<std::uint64_t>(e - 1, q - 1) > 1) {
    const auto r = detail::roots_in_base(f, e - 1);
    if (r.size() >= 2) {
      const Elem d1 = r[0], d2 = r[1];
      const auto pts = detail::proof_points(f, Point::affine(0, 0), d1, d1, d1, d2, d2, d2);
      if (auto c = detail::certify_obstruction(S, pts)) {
        Obstruction o;
        o.ambient = std::move(S);
        o.config = *c;
        o.path = ObstructionPath::RootsOfUnity;
        o.seeds = std::pair{d1, d2};
        return o;
      }
    }
    return detail::search_obstruction(std::move(S), "fixed points of delta gave no configuration", threads);
  }

  const std::uint64_t k = e % (q - 1);
  if (k < 3)
    return detail::search_obstruction(std::move(S), "k = " + std::to_string(k) + " leaves no collision range", threads);
  std::pair<Elem, Elem> col;
  try {
    col = hk_find_collision(q, k - 1);
  } catch (const Error& err) {
    return detail::search_obstruction(std::move(S), std::string("no collision: ") + err.what(), threads);
  }
  const auto [d1, d2] = col;
  const Elem s = f.div(f.sub(d2, 1), f.sub(d1, 1));
  const auto pts = detail::proof_points(f, Point::affine(1, 1), d1, f.pow(d1, e), 1, d2, f.pow(d2, e), s);
  if (auto c = detail::certify_obstruction(S, pts)) {
    Obstruction o;
    o.ambient = std::move(S);
    o.config = *c;
    o.path = ObstructionPath::Collision;
    o.seeds = col;
    return o;
  }
  return detail::search_obstruction(std::move(S), "collision points gave no configuration", threads);
}

}  // namespace uforge
