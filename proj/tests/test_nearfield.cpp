#include <gtest/gtest.h>

#include <map>
#include <set>

#include "unital_forge/nearfield.hpp"

using namespace uforge;

namespace {

constexpr Elem I = 3, ONE_I = 4, TWO_I = 6, ONE_2I = 7, TWO_2I = 8;

// Oracle: x*y from field arithmetic and Euler's criterion, independent of the coset tables.
Elem oracle_mul(const Field& f, Elem x, Elem y) {
  if (y == 0) return 0;
  const std::uint32_t q = subfield_order(f);
  const bool square = f.pow(y, (std::uint64_t{f.order()} - 1) / 2) == 1;
  return square ? f.mul(x, y) : f.mul(f.pow(x, q), y);
}

}  // namespace

TEST(Nearfield, BuildN23) {
  Nearfield nf = build_nearfield(2, 3);
  EXPECT_EQ(nf.order(), 9u);
  const Field& f = nf.field();
  for (Elem y = 1; y < 9; ++y) EXPECT_EQ(nf.coset_of(y), f.is_square(y) ? 0u : 1u);
}

TEST(Nearfield, ParameterConstraints) {
  try {
    build_nearfield(4, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParameters);
  }
  EXPECT_THROW(build_nearfield(3, 5), Error);  // 3 does not divide 4
  EXPECT_THROW(build_nearfield(2, 6), Error);
  EXPECT_NO_THROW(build_nearfield(4, 5));
  EXPECT_NO_THROW(build_nearfield(3, 7));
}

TEST(Nearfield, TrivialTwistIsField) {
  Nearfield nf = build_nearfield(1, 9);
  const Field& f = nf.field();
  for (Elem x = 0; x < 9; ++x)
    for (Elem y = 0; y < 9; ++y) EXPECT_EQ(nf.mul(x, y), f.mul(x, y));
  AxiomReport r = verify_nearfield_axioms(nf);
  EXPECT_TRUE(r.all_required_hold());
  EXPECT_TRUE(r.holds("left-distributive"));
}

TEST(Nearfield, MulExamplesN23) {
  Nearfield nf = build_nearfield(2, 3);
  EXPECT_EQ(nm_mul(nf, 2, I), TWO_I);
  EXPECT_EQ(nm_mul(nf, I, ONE_I), ONE_2I);
  for (Elem x = 0; x < 9; ++x) EXPECT_EQ(nm_mul(nf, x, 0), 0u);
}

TEST(Nearfield, InverseExamplesN23) {
  Nearfield nf = build_nearfield(2, 3);
  EXPECT_EQ(nm_inv(nf, 2), 2u);
  EXPECT_EQ(nm_inv(nf, ONE_I), TWO_2I);
  EXPECT_EQ(nm_inv(nf, I), TWO_I);
  EXPECT_EQ(nm_mul(nf, ONE_I, TWO_2I), 1u);
  EXPECT_THROW(nm_inv(nf, 0), Error);
}

class NearfieldQ : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(NearfieldQ, ClosedFormMatchesOracle) {
  Nearfield nf = build_nearfield(2, GetParam());
  const Field& f = nf.field();
  for (Elem x = 0; x < nf.order(); ++x)
    for (Elem y = 0; y < nf.order(); ++y) {
      ASSERT_EQ(nf.mul(x, y), oracle_mul(f, x, y));
      ASSERT_EQ(nm_mul_closed_form(f, x, y), oracle_mul(f, x, y));
    }
}

TEST_P(NearfieldQ, AxiomsAndLeftDistributivityFails) {
  Nearfield nf = build_nearfield(2, GetParam());
  AxiomReport r = verify_nearfield_axioms(nf);
  EXPECT_TRUE(r.all_required_hold());
  EXPECT_TRUE(r.holds("right-distributive"));
  EXPECT_TRUE(r.holds("multiplicative-group"));
  const Check* left = r.find("left-distributive");
  ASSERT_NE(left, nullptr);
  EXPECT_FALSE(left->holds);
  EXPECT_FALSE(left->required);
  EXPECT_FALSE(left->witness.empty());
}

TEST_P(NearfieldQ, NormMultiplicativeForStar) {
  Nearfield nf = build_nearfield(2, GetParam());
  const Field& f = nf.field();
  for (Elem x = 0; x < nf.order(); ++x)
    for (Elem y = 0; y < nf.order(); ++y) ASSERT_EQ(norm(f, nf.mul(x, y)), f.mul(norm(f, x), norm(f, y)));
}

TEST_P(NearfieldQ, GroupExtensionStructure) {
  Nearfield nf = build_nearfield(2, GetParam());
  ExtensionCertificate c = certify_multiplicative_structure(nf);
  EXPECT_TRUE(c.holds());
}

TEST_P(NearfieldQ, SubgroupsMatchShapes) {
  Nearfield nf = build_nearfield(2, GetParam());
  const Field& f = nf.field();
  auto subs = enumerate_mult_subgroups(nf);
  for (const auto& s : subs) {
    std::size_t sq = 0;
    for (Elem x : s.elements) sq += f.is_square(x);
    EXPECT_TRUE(sq == s.order() || 2 * sq == s.order());
    EXPECT_EQ(s.shape == SubgroupShape::Cyclic, sq == s.order());
    for (Elem x : s.elements)
      for (Elem y : s.elements) ASSERT_TRUE(s.contains(nf.mul(x, y)));
  }
}

INSTANTIATE_TEST_SUITE_P(SmallQ, NearfieldQ, ::testing::Values(3u, 5u, 7u));

TEST(Nearfield, AxiomsN29) {
  Nearfield nf = build_nearfield(2, 9);
  EXPECT_TRUE(verify_nearfield_axioms(nf).all_required_hold());
}

TEST(Nearfield, SubgroupCountN23BruteForce) {
  Nearfield nf = build_nearfield(2, 3);
  // Oracle: every subset of the 8-element group closed under *.
  std::vector<Elem> g;
  for (Elem x = 1; x < 9; ++x) g.push_back(x);
  int closed = 0;
  for (unsigned mask = 1; mask < 256; ++mask) {
    std::set<Elem> s;
    for (unsigned k = 0; k < 8; ++k)
      if (mask >> k & 1) s.insert(g[k]);
    bool ok = s.count(1) == 1;
    for (Elem a : s)
      for (Elem b : s)
        if (!s.count(nf.mul(a, b))) ok = false;
    closed += ok;
  }
  EXPECT_EQ(closed, 6);
  auto subs = enumerate_mult_subgroups(nf);
  EXPECT_EQ(subs.size(), 6u);
  EXPECT_EQ(subs.front().order(), 1u);
  EXPECT_EQ(subs.front().shape, SubgroupShape::Cyclic);
}

TEST(Homomorphism, IdentityIsCyclicClause) {
  Nearfield nf = build_nearfield(2, 3);
  MultSubgroup H = classify_subgroup(nf, {1, 2});
  std::map<Elem, Elem> id{{1, 1}, {2, 2}};
  HomClass hc = classify_homomorphism(nf, H, H, id);
  EXPECT_EQ(hc.clause, HomClause::CyclicSource);
  EXPECT_EQ(hc.r, 1u);
  EXPECT_EQ(hc.j, 1u);
}

TEST(Homomorphism, NormOntoSubfield) {
  Nearfield nf = build_nearfield(2, 3);
  const Field& f = nf.field();
  auto subs = enumerate_mult_subgroups(nf);
  const MultSubgroup& G = subs.back();
  ASSERT_EQ(G.order(), 8u);
  MultSubgroup H = classify_subgroup(nf, {1, 2});
  std::map<Elem, Elem> sigma;
  for (Elem x : G.elements) sigma[x] = norm(f, x);
  HomClass hc = classify_homomorphism(nf, G, H, sigma);
  EXPECT_EQ(hc.r, 4u);
  // Certify the claimed exponent pointwise on the claimed domain.
  for (Elem x : G.elements)
    if (hc.clause == HomClause::CyclicSource || f.is_square(x)) EXPECT_EQ(nf.pow(x, hc.exponent), sigma[x]);
}

TEST(Homomorphism, NotHomomorphismWitness) {
  Nearfield nf = build_nearfield(2, 3);
  auto subs = enumerate_mult_subgroups(nf);
  const MultSubgroup& G = subs.back();
  MultSubgroup H = classify_subgroup(nf, {1, 2});
  std::map<Elem, Elem> sigma;
  for (Elem x : G.elements) sigma[x] = x == 2 ? 2 : 1;
  try {
    classify_homomorphism(nf, G, H, sigma);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHomomorphism);
    EXPECT_NE(std::string(e.what()).find("witness"), std::string::npos);
  }
}

TEST(Homomorphism, NotSurjective) {
  Nearfield nf = build_nearfield(2, 3);
  auto subs = enumerate_mult_subgroups(nf);
  MultSubgroup H = classify_subgroup(nf, {1, 2});
  std::map<Elem, Elem> sigma;
  for (Elem x : subs.back().elements) sigma[x] = 1;
  try {
    classify_homomorphism(nf, subs.back(), H, sigma);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSurjective);
  }
}

TEST(Homomorphism, AllOntoMapsClassifyAtQ3) {
  // Every onto homomorphism from a subgroup onto a cyclic subgroup, found by
  // brute force over generator images, falls under one of the clauses.
  Nearfield nf = build_nearfield(2, 3);
  auto subs = enumerate_mult_subgroups(nf);
  int classified = 0;
  for (const auto& G : subs)
    for (const auto& H : subs) {
      if (H.shape != SubgroupShape::Cyclic || G.order() % H.order() != 0) continue;
      // Candidate maps: x -> x^k composed with optional sign twist on non-squares.
      for (std::uint32_t k = 0; k < 8; ++k)
        for (int twist = 0; twist < 2; ++twist) {
          std::map<Elem, Elem> sigma;
          bool inside = true;
          for (Elem x : G.elements) {
            Elem v = nf.field().pow(x, k);
            if (twist && !nf.field().is_square(x)) v = nf.field().neg(v);
            sigma[x] = v;
            inside = inside && H.contains(v);
          }
          if (!inside) continue;
          try {
            classify_homomorphism(nf, G, H, sigma);
            ++classified;
          } catch (const Error& e) {
            ASSERT_TRUE(e.kind() == ErrorKind::NotHomomorphism || e.kind() == ErrorKind::NotSurjective) << e.what();
          }
        }
    }
  EXPECT_GT(classified, 0);
}
