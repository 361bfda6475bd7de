#pragma once

// Unital candidates in nearfield planes, design verification and tangency.
//
// Families (q odd, epsilon and Nm, Tr as in gf.hpp):
//   hermitian   Nm(x) = Tr(y) in NP(N(1, q^2)), plus (0,1,0)
//   wantz(a,b)  (x, a x^2 + b x^(q+1) + t eps, 1), plus (0,1,0)
//   U(b,j)      (x, b Nm(x)^j + t eps, 1), plus (0,1,0)
//   V(j)        (x, x^(j(q+1)/2) + t eps, 1), x a nonzero square
//   B(a,b)      (x, y, 1) with Nm(x) = a, Tr(y) = b
// All arithmetic in the formulas is field arithmetic.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unital_forge/collineation.hpp"
#include "unital_forge/error.hpp"
#include "unital_forge/parallel.hpp"
#include "unital_forge/plane.hpp"

namespace uforge {

/// Shared planes NP(N(n, q)), built once per process.
inline std::shared_ptr<const Plane> shared_plane(unsigned n, std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, std::uint32_t>, std::shared_ptr<const Plane>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, q}];
  if (!slot) slot = std::make_shared<const Plane>(build_nearfield(n, q));
  return slot;
}

/// NP(N(2, q)), the ambient plane of every family except the Hermitian one.
inline std::shared_ptr<const Plane> nearfield_plane(std::uint32_t q) { return shared_plane(2, q); }

/// NP(N(1, q^2)) = PG(2, q^2).
inline std::shared_ptr<const Plane> desarguesian_plane(std::uint32_t q) { return shared_plane(1, q * q); }

/// A point set of a plane with its provenance. Immutable once built.
struct PointSet {
  std::shared_ptr<const Plane> plane;
  std::uint32_t q = 0;  // the plane has order q^2
  std::string family;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<PointId> points;  // ascending, no repeats
  PointMask mask;

  std::size_t size() const { return points.size(); }
  bool contains(PointId p) const { return mask[p] != 0; }
  bool contains(const Point& p) const { return mask[plane->id(p)] != 0; }
};

using Unital = PointSet;

inline PointSet make_point_set(std::shared_ptr<const Plane> plane, std::uint32_t q, std::string family,
                               std::vector<std::pair<std::string, std::string>> params, std::vector<PointId> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  PointSet s;
  s.mask = make_mask(*plane, pts);
  s.plane = std::move(plane);
  s.q = q;
  s.family = std::move(family);
  s.params = std::move(params);
  s.points = std::move(pts);
  return s;
}

namespace detail {

inline std::uint32_t require_odd_q(std::uint32_t q) {
  const auto f = prime_factors(q);
  if (q < 3 || f.size() != 1) fail(ErrorKind::InvalidParameters, "q = " + std::to_string(q) + " is not a prime power");
  if (f[0] == 2) fail(ErrorKind::OddCharacteristicRequired, "q must be odd");
  return q;
}

inline void require_base(const Field& f2, Elem a, const char* what, bool nonzero) {
  if (a >= f2.order() || !in_base_field(f2, a) || (nonzero && a == 0))
    fail(ErrorKind::InvalidParameters, std::string(what) + " must lie in GF(q)" + (nonzero ? "*" : ""));
}

/// The affine points (x, f(x) + t eps, 1) over x in xs and t in GF(q).
template <class F>
std::vector<PointId> eps_orbit_points(const Plane& pl, const std::vector<Elem>& xs, F&& f) {
  const Field& f2 = pl.field();
  const Elem eps = constants(f2).epsilon;
  const auto base = base_field_elements(f2);
  std::vector<PointId> pts;
  pts.reserve(xs.size() * base.size() + 1);
  for (Elem x : xs) {
    const Elem y0 = f(x);
    for (Elem t : base) pts.push_back(pl.id(Point::affine(x, f2.add(y0, f2.mul(t, eps)))));
  }
  return pts;
}

inline std::vector<Elem> all_elements(const Field& f) {
  std::vector<Elem> xs(f.order());
  for (Elem x = 0; x < f.order(); ++x) xs[x] = x;
  return xs;
}

}  // namespace detail

inline PointSet make_hermitian(std::uint32_t q) {
  detail::require_odd_q(q);
  auto pl = desarguesian_plane(q);
  const Field& f = pl->field();
  std::vector<PointId> pts{pl->vertex()};
  for (Elem x = 0; x < f.order(); ++x)
    for (Elem y = 0; y < f.order(); ++y)
      if (norm(f, x) == trace(f, y)) pts.push_back(pl->id(Point::affine(x, y)));
  return make_point_set(pl, q, "hermitian", {}, std::move(pts));
}

inline PointSet make_wantz(std::uint32_t q, Elem a, Elem b) {
  detail::require_odd_q(q);
  auto pl = nearfield_plane(q);
  const Field& f = pl->field();
  if (a >= f.order() || b >= f.order()) fail(ErrorKind::InvalidParameters, "a, b must lie in GF(q^2)");
  auto pts = detail::eps_orbit_points(*pl, detail::all_elements(f), [&](Elem x) {
    return f.add(f.mul(a, f.mul(x, x)), f.mul(b, norm(f, x)));
  });
  pts.push_back(pl->vertex());
  return make_point_set(pl, q, "wantz", {{"a", f.render(a)}, {"b", f.render(b)}}, std::move(pts));
}

inline PointSet make_U(std::uint32_t q, Elem b, std::uint64_t j) {
  detail::require_odd_q(q);
  auto pl = nearfield_plane(q);
  const Field& f = pl->field();
  detail::require_base(f, b, "b", true);
  if (j < 1) fail(ErrorKind::InvalidParameters, "j must be positive");
  auto pts = detail::eps_orbit_points(*pl, detail::all_elements(f),
                                      [&](Elem x) { return f.mul(b, f.pow(norm(f, x), j)); });
  pts.push_back(pl->vertex());
  return make_point_set(pl, q, "U", {{"b", f.render(b)}, {"j", std::to_string(j)}}, std::move(pts));
}

inline PointSet make_V(std::uint32_t q, std::uint64_t j) {
  detail::require_odd_q(q);
  if (q % 4 != 3) fail(ErrorKind::InvalidParameters, "V(j) needs q = 3 mod 4");
  if (j < 1) fail(ErrorKind::InvalidParameters, "j must be positive");
  auto pl = nearfield_plane(q);
  const Field& f = pl->field();
  std::vector<Elem> squares;
  for (Elem x = 1; x < f.order(); ++x)
    if (f.is_square(x)) squares.push_back(x);
  auto pts = detail::eps_orbit_points(*pl, squares, [&](Elem x) { return f.pow(x, j * (q + 1) / 2); });
  return make_point_set(pl, q, "V", {{"j", std::to_string(j)}}, std::move(pts));
}

inline PointSet make_B(std::uint32_t q, Elem a, Elem b) {
  detail::require_odd_q(q);
  auto pl = nearfield_plane(q);
  const Field& f = pl->field();
  detail::require_base(f, a, "a", false);
  detail::require_base(f, b, "b", false);
  std::vector<PointId> pts;
  for (Elem x = 0; x < f.order(); ++x) {
    if (norm(f, x) != a) continue;
    for (Elem y = 0; y < f.order(); ++y)
      if (trace(f, y) == b) pts.push_back(pl->id(Point::affine(x, y)));
  }
  return make_point_set(pl, q, "B", {{"a", f.render(a)}, {"b", f.render(b)}}, std::move(pts));
}

/// b^2 - a^2 is a nonzero square of GF(q), computed in GF(q^2).
inline bool wantz_condition(const Field& f2, Elem a, Elem b) {
  const Elem d = f2.sub(f2.mul(b, b), f2.mul(a, a));
  return d != 0 && in_base_field(f2, d) && is_base_square(f2, d);
}

/// With b1 = Tr(b)/2: b1^2 - Nm(a) is a nonzero square of GF(q). Reduces to
/// wantz_condition when a, b lie in GF(q).
inline bool wantz_condition_reduced(const Field& f2, Elem a, Elem b) {
  const Elem b1 = f2.mul(f2.inv(f2.from_int(2)), trace(f2, b));
  const Elem d = f2.sub(f2.mul(b1, b1), norm(f2, a));
  return d != 0 && is_base_square(f2, d);
}

/// The image S^k.
inline PointSet transform(const PointSet& s, const Collineation& k) {
  std::vector<PointId> pts;
  pts.reserve(s.size());
  for (PointId p : s.points) pts.push_back(apply(*s.plane, k, p));
  auto params = s.params;
  params.emplace_back("image-under", render(*s.plane, k));
  return make_point_set(s.plane, s.q, s.family, std::move(params), std::move(pts));
}

// ---------------------------------------------------------------------------
// Design verification.

struct DesignReport {
  bool is_unital = false;
  std::uint32_t m = 0;
  std::map<std::size_t, std::size_t> histogram;  // |L cap S| -> number of lines
  std::size_t tangents = 0;
  std::size_t secants = 0;
  bool one_tangent_per_point = false;
  std::optional<LineId> witness;  // a line meeting S in neither 1 nor m+1 points
  std::size_t witness_size = 0;
};

inline std::size_t meet_count(const Plane& pl, const PointMask& mask, LineId l) {
  std::size_t c = 0;
  for (PointId p : pl.points_on(l)) c += mask[p] != 0;
  return c;
}

/// |S| must be m^3 + 1 where the plane has order m^2.
inline DesignReport verify_unital(const Plane& pl, const std::vector<PointId>& S, unsigned threads = 1) {
  const std::uint32_t order = pl.order();
  std::uint32_t m = 1;
  while (m * m < order) ++m;
  if (m * m != order) fail(ErrorKind::SizeMismatch, "plane order " + std::to_string(order) + " is not a square");
  if (S.size() != std::size_t{m} * m * m + 1)
    fail(ErrorKind::SizeMismatch, "point set has " + std::to_string(S.size()) + " points, expected " +
                                      std::to_string(std::size_t{m} * m * m + 1));
  const PointMask mask = make_mask(pl, S);
  const std::size_t n = pl.size();
  std::vector<std::uint32_t> meets(n);
  for_each_chunk(n, 256, threads, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t l = b; l < e; ++l) meets[l] = static_cast<std::uint32_t>(meet_count(pl, mask, static_cast<LineId>(l)));
  });
  DesignReport r;
  r.m = m;
  for (LineId l = 0; l < n; ++l) {
    ++r.histogram[meets[l]];
    if (meets[l] == 1) ++r.tangents;
    else if (meets[l] == m + 1) ++r.secants;
    else if (!r.witness) r.witness = l, r.witness_size = meets[l];
  }
  r.one_tangent_per_point = true;
  for (PointId p : S) {
    std::size_t t = 0;
    for (LineId l : pl.lines_through(p)) t += meets[l] == 1;
    if (t != 1) r.one_tangent_per_point = false;
  }
  r.is_unital = !r.witness && r.one_tangent_per_point;
  return r;
}

inline DesignReport verify_unital(const PointSet& s, unsigned threads = 1) {
  return verify_unital(*s.plane, s.points, threads);
}

struct Tangency {
  LineId line;
  PointId point;  // the unique point of the set on the line
};

/// Tangent lines through a point P outside the unital, with their points of tangency.
inline std::vector<Tangency> tangency_points(const PointSet& U, PointId P) {
  if (U.contains(P)) fail(ErrorKind::PointInUnital, U.plane->render_point(P) + " lies in the unital");
  std::vector<Tangency> out;
  for (LineId l : U.plane->lines_through(P)) {
    std::size_t c = 0;
    PointId last = 0;
    for (PointId x : U.plane->points_on(l))
      if (U.contains(x)) ++c, last = x;
    if (c == 1) out.push_back({l, last});
  }
  return out;
}

/// Lines meeting U in at least two points, with the points they carry.
struct Blocks {
  std::vector<LineId> lines;
  std::vector<std::vector<PointId>> points;  // ascending per block
  std::vector<std::vector<std::uint32_t>> through;  // point id -> block indices, ascending
  std::vector<std::int32_t> index_of_line;          // line id -> block index or -1
};

inline Blocks materialize_blocks(const PointSet& U) {
  const Plane& pl = *U.plane;
  Blocks B;
  B.through.resize(pl.size());
  B.index_of_line.assign(pl.size(), -1);
  for (LineId l = 0; l < pl.size(); ++l) {
    std::vector<PointId> pts;
    for (PointId p : pl.points_on(l))
      if (U.contains(p)) pts.push_back(p);
    if (pts.size() < 2) continue;
    const auto idx = static_cast<std::uint32_t>(B.lines.size());
    B.index_of_line[l] = static_cast<std::int32_t>(idx);
    for (PointId p : pts) B.through[p].push_back(idx);
    B.lines.push_back(l);
    B.points.push_back(std::move(pts));
  }
  return B;
}

}  // namespace uforge
