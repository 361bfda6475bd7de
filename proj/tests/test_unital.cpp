#include <gtest/gtest.h>

#include <map>
#include <set>

#include "unital_forge/structure.hpp"
#include "unital_forge/unital.hpp"

using namespace uforge;

namespace {

constexpr Elem I = 3, ONE_I = 4, TWO_I = 6, TWO_TWO_I = 8;

Elem nm(const Field& f, Elem x, std::uint32_t q) { return f.pow(x, q + 1); }
Elem tr(const Field& f, Elem x, std::uint32_t q) { return f.add(f.pow(x, q), x); }

std::vector<Elem> base_elems(const Field& f, std::uint32_t q) {
  std::vector<Elem> out;
  for (Elem x = 0; x < f.order(); ++x)
    if (f.pow(x, q) == x) out.push_back(x);
  return out;
}

std::set<PointId> as_set(const PointSet& s) { return {s.points.begin(), s.points.end()}; }

std::size_t brute_meet(const Plane& pl, const PointSet& s, LineId l) {
  std::size_t c = 0;
  for (PointId p = 0; p < pl.size(); ++p) c += pl.incident(p, l) && s.contains(p);
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors.

TEST(Families, HermitianSizeAndPoints) {
  const auto H = make_hermitian(3);
  EXPECT_EQ(H.size(), 28u);
  EXPECT_TRUE(H.contains(Point::vertex()));
  const Field& f = H.plane->field();
  int with_x1 = 0;
  for (Elem y = 0; y < 9; ++y)
    if (H.contains(Point::affine(1, y))) {
      ++with_x1;
      EXPECT_EQ(tr(f, y, 3), 1u);
    }
  EXPECT_EQ(with_x1, 3);
  EXPECT_EQ(H.plane->nearfield().twist(), 1u);
}

TEST(Families, WantzExamples) {
  const auto W = make_wantz(3, 0, 1);
  EXPECT_EQ(W.size(), 28u);
  EXPECT_EQ(as_set(W), as_set(make_U(3, 1, 1)));
  EXPECT_TRUE(W.contains(Point::affine(ONE_I, TWO_TWO_I)));
  EXPECT_TRUE(W.contains(Point::vertex()));
  EXPECT_EQ(make_wantz(3, 1, 0).size(), 28u);
}

TEST(Families, WantzUsesFieldArithmetic) {
  const auto W = make_wantz(5, 7, 3);
  const Field& f = W.plane->field();
  const auto base = base_elems(f, 5);
  std::set<PointId> oracle{W.plane->vertex()};
  const Elem eps = constants(f).epsilon;
  for (Elem x = 0; x < 25; ++x)
    for (Elem t : base) {
      const Elem y = f.add(f.add(f.mul(7, f.mul(x, x)), f.mul(3, f.pow(x, 6))), f.mul(t, eps));
      oracle.insert(W.plane->id(Point::affine(x, y)));
    }
  EXPECT_EQ(as_set(W), oracle);
}

TEST(Families, BSets) {
  const auto B = make_B(3, 2, 1);
  EXPECT_TRUE(B.contains(Point::affine(ONE_I, TWO_TWO_I)));
  const auto B00 = make_B(3, 0, 0);
  EXPECT_EQ(B00.size(), 3u);
  for (Elem y : {Elem{0}, I, TWO_I}) EXPECT_TRUE(B00.contains(Point::affine(0, y)));
  for (std::uint32_t q : {3u, 5u}) {
    const Field& f = nearfield_plane(q)->field();
    for (Elem a : base_elems(f, q))
      for (Elem b : base_elems(f, q)) EXPECT_EQ(make_B(q, a, b).size(), a == 0 ? q : q * (q + 1));
  }
}

TEST(Families, UIsUnionOfStrata) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto pl = nearfield_plane(q);
    const Field& f = pl->field();
    const auto base = base_elems(f, q);
    for (Elem b : base) {
      if (b == 0) continue;
      for (std::uint64_t j = 1; j < q; ++j) {
        std::set<PointId> oracle{pl->vertex()};
        for (Elem a : base) {
          const Elem target = f.mul(f.mul(2, f.pow(a, j)), b);
          for (Elem x = 0; x < f.order(); ++x)
            for (Elem y = 0; y < f.order(); ++y)
              if (nm(f, x, q) == a && tr(f, y, q) == target) oracle.insert(pl->id(Point::affine(x, y)));
        }
        const auto U = make_U(q, b, j);
        EXPECT_EQ(U.size(), q * q * q + 1);
        EXPECT_EQ(as_set(U), oracle) << "q=" << q << " b=" << b << " j=" << j;
      }
    }
  }
}

TEST(Families, VSizeAndDomain) {
  for (std::uint32_t q : {7u, 11u}) {
    const auto V = make_V(q, 1);
    EXPECT_EQ(V.size(), q * (q * q - 1) / 2);
  }
  // x = 0 is not a nonzero square, so B(0,0) stays outside the literal set.
  const auto V = make_V(7, 1);
  for (PointId p : make_B(7, 0, 0).points) EXPECT_FALSE(V.contains(p));
}

TEST(Families, ParameterErrors) {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InternalConsistency;
  };
  EXPECT_EQ(kind_of([] { make_V(5, 1); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { make_U(3, I, 1); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { make_U(3, 0, 1); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { make_B(3, I, 0); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { make_U(4, 1, 1); }), ErrorKind::OddCharacteristicRequired);
  EXPECT_EQ(kind_of([] { make_U(6, 1, 1); }), ErrorKind::InvalidParameters);
}

// ---------------------------------------------------------------------------
// Verification.

TEST(Verify, WantzUnitalQ3) {
  const auto U = make_U(3, 1, 1);
  const auto r = verify_unital(U);
  EXPECT_TRUE(r.is_unital);
  EXPECT_EQ(r.m, 3u);
  EXPECT_EQ(r.histogram, (std::map<std::size_t, std::size_t>{{1, 28}, {4, 63}}));
  EXPECT_TRUE(r.one_tangent_per_point);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Verify, HermitianIsUnital) {
  for (std::uint32_t q : {3u, 5u}) EXPECT_TRUE(verify_unital(make_hermitian(q)).is_unital);
}

TEST(Verify, NonUnitalsCarryWitness) {
  struct Case {
    PointSet s;
    std::uint32_t m;
  };
  const Field& f5 = nearfield_plane(5)->field();
  for (auto& c : {Case{make_wantz(3, 1, 0), 3}, Case{make_U(5, 1, 3), 5}, Case{make_U(5, f5.from_int(2), 3), 5}}) {
    const auto r = verify_unital(c.s, 2);
    EXPECT_FALSE(r.is_unital);
    ASSERT_TRUE(r.witness.has_value());
    const std::size_t n = brute_meet(*c.s.plane, c.s, *r.witness);
    EXPECT_EQ(n, r.witness_size);
    EXPECT_NE(n, 1u);
    EXPECT_NE(n, c.m + 1);
  }
}

TEST(Verify, ThreadsAgree) {
  const auto U = make_wantz(5, 7, 3);
  const auto a = verify_unital(U, 1), b = verify_unital(U, 8);
  EXPECT_EQ(a.is_unital, b.is_unital);
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Verify, SizeMismatch) {
  const auto B = make_B(3, 1, 1);
  try {
    verify_unital(B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeMismatch);
  }
}

TEST(Verify, ParabolicWantz) {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const auto U = make_U(q, 1, 1);
    const Plane& pl = *U.plane;
    std::vector<PointId> on;
    for (PointId p : pl.points_on(pl.line_at_infinity()))
      if (U.contains(p)) on.push_back(p);
    ASSERT_EQ(on.size(), 1u);
    EXPECT_EQ(on[0], pl.vertex());
  }
}

TEST(Verify, ReducedConditionMatchesExhaustivelyAtQ3) {
  const auto pl = nearfield_plane(3);
  const Field& f = pl->field();
  int unitals = 0;
  for (Elem a = 0; a < 9; ++a)
    for (Elem b = 0; b < 9; ++b) {
      if (!a && !b) continue;
      const bool u = verify_unital(make_wantz(3, a, b)).is_unital;
      unitals += u;
      EXPECT_EQ(u, wantz_condition_reduced(f, a, b)) << "a=" << f.render(a) << " b=" << f.render(b);
    }
  EXPECT_EQ(unitals, 18);
}

TEST(Verify, ConditionsCoincideOnBaseParameters) {
  for (std::uint32_t q : {3u, 5u, 7u}) {
    const Field& f = nearfield_plane(q)->field();
    for (Elem a : base_elems(f, q))
      for (Elem b : base_elems(f, q)) EXPECT_EQ(wantz_condition(f, a, b), wantz_condition_reduced(f, a, b));
  }
}

TEST(Verify, LiteralConditionOnExtensionParameters) {
  const Field& f = nearfield_plane(3)->field();
  // b = 1+i: b^2 lies outside GF(3), the set is still a unital.
  EXPECT_FALSE(wantz_condition(f, 0, ONE_I));
  EXPECT_TRUE(wantz_condition_reduced(f, 0, ONE_I));
  EXPECT_TRUE(verify_unital(make_wantz(3, 0, ONE_I)).is_unital);
  // a = 1, b = i: b^2 - a^2 is a nonzero square of GF(3), the set is not a unital.
  EXPECT_TRUE(wantz_condition(f, 1, I));
  EXPECT_FALSE(wantz_condition_reduced(f, 1, I));
  EXPECT_FALSE(verify_unital(make_wantz(3, 1, I)).is_unital);
}

// ---------------------------------------------------------------------------
// Tangents.

TEST(Tangency, PointAtInfinityOfWantz) {
  const auto U = make_U(3, 1, 1);
  const Plane& pl = *U.plane;
  const PointId P = pl.id(Point::infinite(0));
  const auto t = tangency_points(U, P);
  ASSERT_EQ(t.size(), 4u);
  bool inf = false;
  std::set<PointId> affine;
  for (const auto& x : t) {
    EXPECT_EQ(brute_meet(pl, U, x.line), 1u);
    EXPECT_TRUE(U.contains(x.point));
    EXPECT_TRUE(pl.incident(x.point, x.line));
    if (x.line == pl.line_at_infinity()) {
      inf = true;
      EXPECT_EQ(x.point, pl.vertex());
    } else {
      affine.insert(x.point);
    }
  }
  EXPECT_TRUE(inf);
  std::set<PointId> expect;
  for (Elem t0 : {Elem{0}, Elem{1}, Elem{2}}) expect.insert(pl.id(Point::affine(0, pl.field().mul(t0, TWO_I))));
  EXPECT_EQ(affine, expect);
}

TEST(Tangency, CountsThroughOutsidePoints) {
  const auto U = make_U(3, 1, 1);
  const Plane& pl = *U.plane;
  for (PointId P = 0; P < pl.size(); ++P) {
    if (U.contains(P)) continue;
    EXPECT_EQ(tangency_points(U, P).size(), 4u);
    std::size_t sec = 0;
    for (LineId l : pl.lines_through(P)) sec += meet_count(pl, U.mask, l) == 4;
    EXPECT_EQ(sec, 6u);
  }
}

TEST(Tangency, PointInUnital) {
  const auto U = make_U(3, 1, 1);
  try {
    tangency_points(U, U.plane->vertex());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PointInUnital);
  }
}

TEST(Blocks, WantzBlockCount) {
  const auto U = make_U(3, 1, 1);
  const auto B = materialize_blocks(U);
  EXPECT_EQ(B.lines.size(), 63u);
  for (const auto& pts : B.points) EXPECT_EQ(pts.size(), 4u);
  for (PointId p : U.points) EXPECT_EQ(B.through[p].size(), 9u);
}

// ---------------------------------------------------------------------------
// Strata profiles.

TEST(Strata, LineProfiles) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto pl = nearfield_plane(q);
    const Field& f = pl->field();
    for (Elem a : base_elems(f, q))
      for (Elem b : base_elems(f, q)) {
        const auto B = make_B(q, a, b);
        for (LineId l = 0; l < pl->size(); ++l) {
          const std::size_t n = meet_count(*pl, B.mask, l);
          switch (pl->shape(l)) {
            case LineShape::Vertical: EXPECT_TRUE(n == 0 || n == q); break;
            case LineShape::Horizontal:
              if (a != 0) EXPECT_TRUE(n == 0 || n == q + 1);
              else EXPECT_LE(n, 1u);
              break;
            case LineShape::Sloped: EXPECT_LE(n, 2u); break;
            case LineShape::AtInfinity: EXPECT_EQ(n, 0u); break;
          }
        }
      }
  }
}

TEST(Strata, PairwiseIntersection) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto pl = nearfield_plane(q);
    const Field& f = pl->field();
    auto expect = as_set(make_B(q, 0, 0));
    expect.insert(pl->vertex());
    for (std::uint64_t j = 1; j < q - 1; ++j)
      for (Elem b : base_elems(f, q))
        for (Elem b2 : base_elems(f, q)) {
          if (b == 0 || b2 == 0 || b == b2) continue;
          std::set<PointId> both;
          const auto U1 = make_U(q, b, j), U2 = make_U(q, b2, j);
          for (PointId p : U1.points)
            if (U2.contains(p)) both.insert(p);
          EXPECT_EQ(both, expect);
        }
  }
}

TEST(Strata, UniqueTangentFamilyMember) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto pl = nearfield_plane(q);
    const Field& f = pl->field();
    const auto B00 = make_B(q, 0, 0);
    std::vector<PointSet> family;
    for (Elem b : base_elems(f, q))
      if (b) family.push_back(make_U(q, b, 1));
    for (LineId l = 0; l < pl->size(); ++l) {
      if (pl->shape(l) != LineShape::Sloped || meet_count(*pl, B00.mask, l) != 0) continue;
      int tangent = 0;
      for (const auto& U : family) tangent += meet_count(*pl, U.mask, l) == 1;
      EXPECT_EQ(tangent, 1);
    }
  }
}

TEST(Strata, SecantsSplitBySquareClass) {
  for (std::uint32_t q : {3u, 5u}) {
    const auto pl = nearfield_plane(q);
    const Field& f = pl->field();
    const auto B00 = make_B(q, 0, 0);
    for (Elem b : base_elems(f, q)) {
      if (!b) continue;
      const auto U = make_U(q, b, 1);
      for (LineId l = 0; l < pl->size(); ++l) {
        if (pl->shape(l) != LineShape::Sloped || meet_count(*pl, B00.mask, l) != 0) continue;
        if (meet_count(*pl, U.mask, l) != q + 1) continue;
        int sq = 0, ns = 0;
        for (PointId p : pl->points_on(l)) {
          if (!U.contains(p)) continue;
          const Elem x = pl->point(p).x;
          if (x == 0) continue;
          (f.pow(x, (std::uint64_t{q} * q - 1) / 2) == 1 ? sq : ns)++;
        }
        EXPECT_GE(sq, 2);
        EXPECT_GE(ns, 2);
      }
    }
  }
}

TEST(Strata, VProfile) {
  for (std::uint32_t q : {7u, 11u}) {
    const Field& f = nearfield_plane(q)->field();
    const auto base = base_elems(f, q);
    for (std::uint64_t j = 1; j + 1 < q; ++j) {
      if (std::gcd<std::uint64_t>(j, q - 1) != 1) continue;
      const auto V = make_V(q, j);
      for (Elem c : base)
        for (Elem d : base) {
          if (!c || !d) continue;
          bool param = false;
          for (Elem a : base)
            if (a && f.mul(a, a) == c && f.mul(2, f.pow(a, j)) == d) param = true;
          // Distinct first coordinates; each carries a full eps-orbit of q points.
          std::set<Elem> xs;
          for (PointId p : make_B(q, c, d).points)
            if (V.contains(p)) xs.insert(nearfield_plane(q)->point(p).x);
          const std::size_t n = xs.size();
          EXPECT_EQ(n, param ? (q + 1) / 2 : 0u) << "q=" << q << " j=" << j << " c=" << c << " d=" << d;
        }
    }
  }
}

// ---------------------------------------------------------------------------
// Stabilizer and structure.

TEST(Stabilizer, CentralCollineationsOfWantzQ3) {
  const auto U = make_U(3, 1, 1);
  const Plane& pl = *U.plane;
  const auto G = linear_stabilizer(pl, U.points, 4);
  EXPECT_EQ(G.order(), 24u);
  int central = 0;
  for (const auto& g : G.elements) {
    if (g.is_identity()) continue;
    const auto ci = central_classification(pl, g);
    if (!ci) continue;
    ++central;
    const std::size_t n = meet_count(pl, U.mask, ci->axis);
    if (ci->kind == CentralKind::Elation) EXPECT_EQ(n, 1u);
    else EXPECT_EQ(n, 4u);
  }
  EXPECT_GT(central, 0);
}

TEST(Structure, WantzQ3) {
  const auto U = make_U(3, 1, 1);
  const auto R = structure_report(U, 4);
  for (const auto& c : R.clauses.checks) EXPECT_TRUE(c.holds || !c.required) << c.name << " " << c.witness;
  EXPECT_EQ(R.stabilizer_order, 24u);
  EXPECT_EQ(R.branch, StructureBranch::Vertex);
  EXPECT_TRUE(R.maximal);
  EXPECT_EQ(R.C.size(), 8u);
  EXPECT_EQ(R.D, (std::vector<Elem>{1, 2}));
  EXPECT_EQ(R.W, (std::vector<Elem>{0, I, TWO_I}));
  EXPECT_EQ(R.r, 4u);
  EXPECT_EQ(R.q0, 3u);
  EXPECT_EQ(R.delta_form, DeltaForm::NormPower);
  EXPECT_EQ(R.j, 1u);
  const Field& f = U.plane->field();
  for (auto [c, d] : R.delta) EXPECT_EQ(d, nm(f, c, 3));
}

TEST(Structure, WantzQ5) {
  const auto U = make_U(5, 1, 1);
  const auto R = structure_report(U, 8);
  for (const auto& c : R.clauses.checks) EXPECT_TRUE(c.holds || !c.required) << c.name << " " << c.witness;
  EXPECT_EQ(R.stabilizer_order, 120u);
  EXPECT_EQ(R.C.size(), 24u);
  EXPECT_EQ(R.D, (std::vector<Elem>{1, 2, 3, 4}));
  EXPECT_EQ(R.r, 6u);
  const Field& f = U.plane->field();
  const Elem eps = constants(f).epsilon;
  std::vector<Elem> W;
  for (Elem t : base_elems(f, 5)) W.push_back(f.mul(t, eps));
  std::sort(W.begin(), W.end());
  EXPECT_EQ(R.W, W);
  for (auto [c, d] : R.delta) EXPECT_EQ(d, nm(f, c, 5));
}

TEST(Structure, NormalFormScaleRecovered) {
  const auto U = make_U(3, 1, 1);
  const Plane& pl = *U.plane;
  const Field& f = pl.field();
  for (Elem d0 = 1; d0 < 9; ++d0) {
    const auto V = transform(U, Collineation::phi(1, d0, 0, 0));
    const auto R = structure_report(V, 2);
    EXPECT_EQ(R.d, d0);
    EXPECT_EQ(transform(make_U(3, 1, 1), Collineation::phi(1, R.d, 0, 0)).points, R.normalized.points);
    const auto* fwd = R.clauses.find("max:normal-form-U(j)^phi(1,d,0,0)=U");
    ASSERT_NE(fwd, nullptr);
    EXPECT_TRUE(fwd->holds);
    const auto* rev = R.clauses.find("max:normal-form-U^phi(1,d,0,0)=U(j)");
    ASSERT_NE(rev, nullptr);
    EXPECT_EQ(rev->holds, in_base_field(f, d0)) << f.render(d0);
  }
}

TEST(Structure, HypothesisContract) {
  const auto U = make_U(3, 1, 1);
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InternalConsistency;
  };
  EXPECT_EQ(kind_of([&] { structure_report(U, 1, std::vector<Collineation>{Collineation::identity()}); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([] { structure_report(make_wantz(3, 1, 0)); }), ErrorKind::HypothesisFailed);
}
