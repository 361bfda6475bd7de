#pragma once

// Line profiles of the strata B(a,b) and the structural properties of the
// families U(b,j) and V(j), as certified checks.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "unital_forge/checks.hpp"
#include "unital_forge/unital.hpp"

namespace uforge {

namespace detail {

inline std::string ab(const Field& f, Elem a, Elem b) { return "(" + f.render(a) + "," + f.render(b) + ")"; }

}  // namespace detail

/// Every line against every B(a,b): verticals meet in 0 or q points,
/// horizontals in 0 or q+1 (a != 0) or at most 1 (a = 0), sloped lines in at
/// most 2, the line at infinity in none.
inline AxiomReport b_profile_check(std::uint32_t q) {
  detail::require_odd_q(q);
  const auto pl = nearfield_plane(q);
  const Field& f = pl->field();
  AxiomReport r;
  const char* names[] = {"sloped", "horizontal", "vertical", "at-infinity"};
  bool ok[4] = {true, true, true, true};
  std::string wit[4];
  for (Elem a : base_field_elements(f))
    for (Elem b : base_field_elements(f)) {
      const auto B = make_B(q, a, b);
      for (LineId l = 0; l < pl->size(); ++l) {
        const std::size_t n = meet_count(*pl, B.mask, l);
        const auto s = pl->shape(l);
        bool good = true;
        switch (s) {
          case LineShape::Vertical: good = n == 0 || n == q; break;
          case LineShape::Horizontal: good = a != 0 ? (n == 0 || n == q + 1) : n <= 1; break;
          case LineShape::Sloped: good = n <= 2; break;
          case LineShape::AtInfinity: good = n == 0; break;
        }
        const auto i = static_cast<std::size_t>(s);
        if (!good && ok[i]) {
          ok[i] = false;
          wit[i] = pl->render_line(l) + " meets B" + detail::ab(f, a, b) + " in " + std::to_string(n);
        }
      }
    }
  for (std::size_t i = 0; i < 4; ++i) r.add(std::string("B-profile ") + names[i], ok[i], wit[i]);
  return r;
}

/// Properties of the family U(b,1), b in GF(q)*, and the stratum
/// decomposition of U(b,j) for 1 <= j < q-1.
inline AxiomReport u_family_check(std::uint32_t q) {
  detail::require_odd_q(q);
  const auto pl = nearfield_plane(q);
  const Field& f = pl->field();
  const auto base = base_field_elements(f);
  std::vector<Elem> units(base.begin() + 1, base.end());
  AxiomReport r;

  // U(b,j) = {(0,1,0)} u union over a of B(a, 2 a^j b).
  {
    bool ok = true;
    std::string w;
    for (std::uint64_t j = 1; j < q - 1 && ok; ++j)
      for (Elem b : units) {
        std::vector<PointId> pts{pl->vertex()};
        for (Elem a : base) {
          const auto B = make_B(q, a, f.mul(f.from_int(2), f.mul(f.pow(a, j), b)));
          pts.insert(pts.end(), B.points.begin(), B.points.end());
        }
        std::sort(pts.begin(), pts.end());
        if (pts != make_U(q, b, j).points) {
          ok = false;
          w = "b=" + f.render(b) + " j=" + std::to_string(j);
          break;
        }
      }
    r.add("U is a union of strata", ok, w);
  }

  // Two members share exactly B(0,0) and the vertex.
  {
    std::vector<PointId> expect = make_B(q, 0, 0).points;
    expect.push_back(pl->vertex());
    std::sort(expect.begin(), expect.end());
    bool ok = true;
    std::string w;
    for (std::uint64_t j = 1; j < q - 1 && ok; ++j)
      for (std::size_t i = 0; i < units.size() && ok; ++i)
        for (std::size_t k = i + 1; k < units.size() && ok; ++k) {
          const auto U1 = make_U(q, units[i], j), U2 = make_U(q, units[k], j);
          std::vector<PointId> both;
          for (PointId p : U1.points)
            if (U2.contains(p)) both.push_back(p);
          if (both != expect) ok = false, w = "b=" + f.render(units[i]) + "," + f.render(units[k]) + " j=" + std::to_string(j);
        }
    r.add("pairwise intersection", ok, w);
  }

  std::vector<PointSet> fam;
  for (Elem b : units) fam.push_back(make_U(q, b, 1));
  const auto B00 = make_B(q, 0, 0);
  bool unital_ok = true;
  for (const auto& U : fam) unital_ok = unital_ok && verify_unital(U).is_unital;
  r.add("U(b,1) are unitals", unital_ok);

  bool tangent_ok = true, split_ok = true;
  std::string tw, sw;
  const std::uint64_t half = (std::uint64_t{q} * q - 1) / 2;
  for (LineId l = 0; l < pl->size(); ++l) {
    if (pl->shape(l) != LineShape::Sloped || meet_count(*pl, B00.mask, l) != 0) continue;
    int tangent = 0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const std::size_t n = meet_count(*pl, fam[i].mask, l);
      tangent += n == 1;
      if (n != q + 1) continue;
      int sq = 0, ns = 0;
      for (PointId p : pl->points_on(l)) {
        if (!fam[i].contains(p) || pl->point(p).kind != PointKind::Affine) continue;
        const Elem x = pl->point(p).x;
        if (x != 0) (f.pow(x, half) == 1 ? sq : ns)++;
      }
      if ((sq < 2 || ns < 2) && split_ok)
        split_ok = false, sw = pl->render_line(l) + " b=" + f.render(units[i]);
    }
    if (tangent != 1 && tangent_ok) tangent_ok = false, tw = pl->render_line(l) + " tangent to " + std::to_string(tangent);
  }
  r.add("unique tangent member", tangent_ok, tw);
  r.add("secants split by square class", split_ok, sw);
  return r;
}

/// j is admissible for V(j) when 1 <= j < q-1 and gcd(j, q-1) = 1.
inline bool v_admissible(std::uint32_t q, std::uint64_t j) {
  return j >= 1 && j + 1 < q && std::gcd<std::uint64_t>(j, q - 1) == 1;
}

/// V(j) meets B(c,d) in (q+1)/2 distinct first coordinates when c = a^2 and
/// d = 2 a^j for some a in GF(q)*, and not at all otherwise.
inline AxiomReport v_profile_check(std::uint32_t q, std::uint64_t j) {
  if (!v_admissible(q, j)) fail(ErrorKind::InvalidParameters, "j = " + std::to_string(j) + " is not admissible for V");
  const auto V = make_V(q, j);
  const Plane& pl = *V.plane;
  const Field& f = pl.field();
  const auto base = base_field_elements(f);
  bool ok = true;
  std::string w;
  for (Elem c : base)
    for (Elem d : base) {
      if (!c || !d) continue;
      bool param = false;
      for (Elem a : base)
        if (a && f.mul(a, a) == c && f.mul(f.from_int(2), f.pow(a, j)) == d) param = true;
      std::set<Elem> xs;
      for (PointId p : make_B(q, c, d).points)
        if (V.contains(p)) xs.insert(pl.point(p).x);
      const std::size_t want = param ? (q + 1) / 2 : 0;
      if (xs.size() != want && ok)
        ok = false, w = "B" + detail::ab(f, c, d) + " carries " + std::to_string(xs.size()) + " first coordinates";
    }
  AxiomReport r;
  r.add("V(" + std::to_string(j) + ") profile", ok, w);
  return r;
}

}  // namespace uforge
