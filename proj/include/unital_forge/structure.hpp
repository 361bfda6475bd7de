#pragma once

// Structure of the linear stabilizer G of a unital U in NP(N(2,q)) when q
// divides o(G). U is first normalized so that its point on [0,0,1] is (0,1,0)
// (vertex branch) or (1,1,0) (slope branch) and (0,0,1) is a tangency point of
// (1,0,0). Then
//   H  = G cap T,  W = translation parameters of H,
//   G1 = G cap {phi(c,d,0,0)},  C, D = first and second parameters of G1,
//   delta : C -> D, c -> d,  r = o(C)/o(D).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "unital_forge/checks.hpp"
#include "unital_forge/collineation.hpp"
#include "unital_forge/unital.hpp"

namespace uforge {

enum class StructureBranch { Vertex, Slope };
enum class DeltaForm { None, NormPower, HalfPower };

struct StructureReport {
  std::uint32_t q = 0;
  std::size_t stabilizer_order = 0;
  unsigned p_exponent = 0;  // n with p^n exactly dividing o(G)
  StructureBranch branch = StructureBranch::Vertex;
  Collineation normalizer;  // normalized = input^normalizer
  PointSet normalized;

  std::vector<Collineation> G, H, G1;
  std::vector<Elem> W;  // ascending
  std::uint32_t q0 = 1;
  std::vector<Elem> C, D;  // ascending
  std::map<Elem, Elem> delta;
  std::uint32_t r = 0;

  bool maximal = false;  // o(G) = q(q^2 - 1)
  DeltaForm delta_form = DeltaForm::None;
  std::uint32_t j = 0;
  Elem b = 0;  // second coordinate of a point (1, b, 1) of U, b != 0
  Elem h = 0;  // W = GF(q) h
  Elem d = 0;  // the scale of the normal-form map phi(1, d, 0, 0)

  AxiomReport clauses;
};

namespace detail {

inline std::vector<Collineation> conjugate_all(const Plane& pl, const std::vector<Collineation>& G,
                                               const Collineation& k) {
  const Collineation ki = inverse(pl, k);
  std::vector<Collineation> out;
  out.reserve(G.size());
  for (const auto& g : G) out.push_back(compose(pl, compose(pl, ki, g), k));
  sort_by_key(pl, out);
  return out;
}

inline std::uint32_t p_exponent(std::uint64_t n, std::uint32_t p) {
  std::uint32_t e = 0;
  while (n % p == 0) n /= p, ++e;
  return e;
}

inline bool is_subspace(const Field& f, const std::vector<Elem>& W) {
  std::set<Elem> s(W.begin(), W.end());
  if (!s.count(0)) return false;
  for (Elem a : W)
    for (Elem b : W)
      if (!s.count(f.add(a, b))) return false;
  return true;
}

/// Largest subfield GF(p^k) of GF(q) (k | e) whose scalars map W into itself.
inline std::uint32_t scalar_subfield(const Field& f2, const std::vector<Elem>& W) {
  const unsigned e = f2.degree() / 2;
  std::set<Elem> s(W.begin(), W.end());
  std::uint32_t best = f2.characteristic();
  for (unsigned k = 1; k <= e; ++k) {
    if (e % k != 0) continue;
    bool ok = true;
    for (Elem a = 0; a < f2.order() && ok; ++a) {
      if (!f2.in_subfield(a, k)) continue;
      for (Elem w : W)
        if (!s.count(f2.mul(a, w))) {
          ok = false;
          break;
        }
    }
    if (ok) best = static_cast<std::uint32_t>(ipow(f2.characteristic(), k));
  }
  return best;
}

inline bool star_closed(const Nearfield& nf, const std::vector<Elem>& S) {
  std::set<Elem> s(S.begin(), S.end());
  if (!s.count(1)) return false;
  for (Elem a : S)
    for (Elem b : S)
      if (!s.count(nf.mul(a, b))) return false;
  return true;
}

}  // namespace detail

/// Full structure report. `G` may be supplied to skip the stabilizer scan.
inline StructureReport structure_report(const PointSet& U, unsigned threads = 1,
                                        std::optional<std::vector<Collineation>> G_in = std::nullopt) {
  const Plane& pl = *U.plane;
  const Nearfield& nf = pl.nearfield();
  const Field& f = pl.field();
  if (nf.twist() != 2) fail(ErrorKind::InvalidParameters, "structure report needs NP(N(2,q))");
  const std::uint32_t q = U.q;
  const std::uint32_t p = f.characteristic();

  if (!verify_unital(U, threads).is_unital) fail(ErrorKind::HypothesisFailed, "the point set is not a unital");

  StructureReport R;
  R.q = q;
  std::vector<Collineation> G0 = G_in ? *G_in : linear_stabilizer(pl, U.points, threads).elements;
  R.stabilizer_order = G0.size();
  R.p_exponent = detail::p_exponent(G0.size(), p);
  if (G0.size() % q != 0)
    fail(ErrorKind::HypothesisFailed, "q = " + std::to_string(q) + " does not divide the linear stabilizer order " +
                                          std::to_string(G0.size()));

  // Point of U on [0,0,1].
  std::vector<PointId> at_inf;
  for (PointId x : pl.points_on(pl.line_at_infinity()))
    if (U.contains(x)) at_inf.push_back(x);
  R.clauses.add("parabolic", at_inf.size() == 1, std::to_string(at_inf.size()) + " points on [0,0,1]");
  if (at_inf.size() != 1) return R;
  const Point Pinf = pl.point(at_inf[0]);

  Collineation k1;
  if (Pinf.kind == PointKind::Vertex) {
    R.branch = StructureBranch::Vertex;
  } else if (Pinf.y == 0) {
    R.branch = StructureBranch::Vertex;
    k1 = Collineation::gamma(1, 1, 0, 0);
  } else {
    R.branch = StructureBranch::Slope;
    k1 = Collineation::phi(1, nf.inv(Pinf.y), 0, 0);
  }
  const PointSet U1 = transform(U, k1);
  const PointId e100 = pl.id(Point::infinite(0));
  std::vector<PointId> tpts;
  for (const auto& t : tangency_points(U1, e100))
    if (t.line != pl.line_at_infinity()) tpts.push_back(t.point);
  std::sort(tpts.begin(), tpts.end());
  R.clauses.add("affine-tangents-of-(1,0,0)", tpts.size() == q, std::to_string(tpts.size()));
  if (tpts.empty()) return R;
  const Point T0 = pl.point(tpts.front());
  const Collineation k2 = Collineation::phi(1, 1, nf.neg(T0.x), nf.neg(T0.y));
  R.normalizer = compose(pl, k1, k2);
  R.normalized = transform(U, R.normalizer);
  const PointSet& N = R.normalized;
  R.G = detail::conjugate_all(pl, G0, R.normalizer);

  for (const auto& g : R.G) {
    if (g.is_translation()) R.H.push_back(g);
    if (g.kind == CollKind::Phi && g.u == 0 && g.v == 0 && g.frob == 0) R.G1.push_back(g);
  }
  const std::size_t oG = R.G.size(), oH = R.H.size(), oG1 = R.G1.size();

  // Translations and W.
  const bool vertex = R.branch == StructureBranch::Vertex;
  bool h_form = true;
  for (const auto& g : R.H) {
    if (vertex ? g.u != 0 : g.u != g.v) h_form = false;
    R.W.push_back(g.v);
  }
  std::sort(R.W.begin(), R.W.end());
  const bool w_ok = detail::is_subspace(f, R.W) && R.W.size() == q;
  R.q0 = detail::scalar_subfield(f, R.W);
  bool q0_in_q = false;
  for (std::uint64_t t = R.q0; t <= q; t *= R.q0)
    if (t == q) q0_in_q = true;
  bool centres_ok = true;
  const PointId centre = vertex ? pl.vertex() : pl.id(Point::infinite(1));
  for (const auto& g : R.H) {
    if (g.is_identity()) continue;
    auto ci = central_classification(pl, g);
    if (!ci || ci->center != centre || ci->axis != pl.line_at_infinity() || ci->kind != CentralKind::Elation)
      centres_ok = false;
  }
  const std::string through = vertex ? "(0,1,0)" : "(1,1,0)";
  R.clauses.add("parabolic-through-" + through, N.contains(centre) && meet_count(pl, N.mask, pl.line_at_infinity()) == 1);
  R.clauses.add("translation-stabilizer-form", h_form && w_ok && q0_in_q,
                "o(H)=" + std::to_string(oH) + " q0=" + std::to_string(R.q0));
  R.clauses.add("translations-are-elations-with-common-centre", centres_ok && oH > 1);

  // Tangency line.
  std::set<PointId> expect, on_line, tangency;
  for (PointId t : tpts) tangency.insert(apply(pl, k2, t));
  const LineId tline = vertex ? pl.id(Line::vertical(0)) : pl.id(Line::oblique(nf.neg(1), 0));
  for (PointId x : pl.points_on(tline))
    if (N.contains(x) && pl.point(x).kind == PointKind::Affine) on_line.insert(x);
  for (Elem w : R.W) expect.insert(pl.id(vertex ? Point::affine(0, w) : Point::affine(w, w)));
  R.clauses.add(vertex ? "tangency-points-on-[1,0,0]" : "tangency-points-on-[-1,1,0]",
                on_line == expect && tangency == expect);

  if (!vertex) {
    R.clauses.add("stabilizer-is-translations", oG == oH && oH == q, "o(G)=" + std::to_string(oG));
    return R;
  }

  // G = H G1.
  std::set<std::uint64_t> g1keys, gkeys;
  for (const auto& g : R.G1) g1keys.insert(group_key(pl, g));
  for (const auto& g : R.G) gkeys.insert(group_key(pl, g));
  bool product = oG == oH * oG1;
  for (const auto& g : R.G) {
    if (g.kind != CollKind::Phi || g.u != 0 || !std::binary_search(R.W.begin(), R.W.end(), g.v) ||
        !g1keys.count(group_key(pl, Collineation::phi(g.c, g.d, 0, 0))))
      product = false;
  }
  const std::uint64_t qq = std::uint64_t{q} * (std::uint64_t{q} * q - 1);
  R.clauses.add("G=HG1", product && oG % q == 0 && qq % oG == 0, "o(G)=" + std::to_string(oG));

  std::set<std::uint64_t> hkeys;
  for (const auto& g : R.H) hkeys.insert(group_key(pl, g));
  bool normal = true;
  for (const auto& g : R.G) {
    const Collineation gi = inverse(pl, g);
    for (const auto& h : R.H)
      if (!hkeys.count(group_key(pl, compose(pl, compose(pl, gi, h), g)))) normal = false;
  }
  R.clauses.add("H-normal-in-G", normal);
  R.clauses.add("o(G1)=o(G)/q", oG1 * q == oG, "o(G1)=" + std::to_string(oG1));

  std::set<Elem> cs, ds;
  bool functional = true;
  for (const auto& g : R.G1) {
    auto [it, fresh] = R.delta.emplace(g.c, g.d);
    if (!fresh && it->second != g.d) functional = false;
    cs.insert(g.c);
    ds.insert(g.d);
  }
  R.C.assign(cs.begin(), cs.end());
  R.D.assign(ds.begin(), ds.end());
  R.clauses.add("C-subgroup", R.C.size() == oG1 && detail::star_closed(nf, R.C), "o(C)=" + std::to_string(R.C.size()));
  bool d_sub = detail::star_closed(nf, R.D);
  unsigned k0 = 0;
  for (std::uint32_t t = R.q0; t > 1; t /= p) ++k0;
  for (Elem x : R.D)
    if (!f.in_subfield(x, k0)) d_sub = false;
  R.clauses.add("D-subgroup-of-GF(q0)", d_sub, "o(D)=" + std::to_string(R.D.size()));

  bool hom = functional;
  for (Elem a : R.C)
    for (Elem b : R.C)
      if (R.delta.at(nf.mul(a, b)) != nf.mul(R.delta.at(a), R.delta.at(b))) hom = false;
  R.r = R.D.empty() ? 0 : static_cast<std::uint32_t>(R.C.size() / R.D.size());
  std::map<Elem, std::size_t> fibre;
  for (auto [c, dd] : R.delta) ++fibre[dd];
  bool r_to_1 = fibre.size() == R.D.size();
  for (auto [dd, n] : fibre) r_to_1 = r_to_1 && n == R.r;
  R.clauses.add("delta-onto-r-to-1-homomorphism", hom && r_to_1 && R.r > 0 && (q + 1) % R.r == 0,
                "r=" + std::to_string(R.r));

  // Maximal case.
  R.maximal = oG == qq;
  if (!R.maximal) return R;
  const auto base = base_field_elements(f);
  R.clauses.add("max:C-is-whole-group", R.C.size() == std::size_t{q} * q - 1);
  R.clauses.add("max:D-is-GF(q)*", R.D == std::vector<Elem>(base.begin() + 1, base.end()));
  R.h = R.W.size() > 1 ? R.W[1] : 0;
  std::vector<Elem> line;
  for (Elem t : base) line.push_back(f.mul(t, R.h));
  std::sort(line.begin(), line.end());
  R.clauses.add("max:W=GF(q)h", R.h != 0 && line == R.W, "h=" + f.render(R.h));
  R.clauses.add("max:r=q+1", R.r == q + 1);

  for (std::uint32_t j = 1; j + 1 < q && R.delta_form == DeltaForm::None; ++j) {
    if (std::gcd(j, (q - 1) / 2) != 1) continue;
    bool ok = true;
    for (auto [c, dd] : R.delta) ok = ok && f.pow(c, std::uint64_t{j} * (q + 1)) == dd;
    if (ok) R.delta_form = DeltaForm::NormPower, R.j = j;
  }
  if (q % 4 == 3)
    for (std::uint32_t j = 1; j + 1 < q && R.delta_form == DeltaForm::None; ++j) {
      if (std::gcd(j, q - 1) != 1) continue;
      bool ok = true;
      for (auto [c, dd] : R.delta)
        if (f.is_square(c)) ok = ok && f.pow(c, std::uint64_t{j} * (q + 1) / 2) == dd;
      if (ok) R.delta_form = DeltaForm::HalfPower, R.j = j;
    }
  if (q == 3 && R.delta_form == DeltaForm::None) {
    // j ranges are empty at q = 3; j = 1 is the only candidate.
    bool ok = true;
    for (auto [c, dd] : R.delta) ok = ok && f.pow(c, q + 1) == dd;
    if (ok) R.delta_form = DeltaForm::NormPower, R.j = 1;
  }
  R.clauses.add("max:delta-power-form", R.delta_form != DeltaForm::None, "j=" + std::to_string(R.j));

  // Orbit form U = {(x, b delta(x) + w, 1)} u {(0,1,0)}.
  for (PointId x : pl.points_on(pl.id(Line::vertical(nf.neg(1)))))
    if (N.contains(x) && pl.point(x).kind == PointKind::Affine && pl.point(x).y != 0) {
      R.b = pl.point(x).y;
      break;
    }
  std::vector<PointId> form{pl.vertex()};
  auto dlt = [&](Elem x) { return x == 0 ? Elem{0} : R.delta.at(x); };
  for (Elem x = 0; x < f.order(); ++x)
    for (Elem w : R.W) form.push_back(pl.id(Point::affine(x, f.add(f.mul(R.b, dlt(x)), w))));
  std::sort(form.begin(), form.end());
  form.erase(std::unique(form.begin(), form.end()), form.end());
  R.clauses.add("max:orbit-form", R.b != 0 && !std::binary_search(R.W.begin(), R.W.end(), R.b) && form == N.points,
                "b=" + f.render(R.b));

  if (R.delta_form == DeltaForm::NormPower && R.h != 0) {
    const Elem hi = f.inv(R.h);
    const Elem bh = f.mul(R.b, hi);
    R.d = f.mul(f.mul(R.h, f.inv(2)), f.sub(bh, f.frobenius(bh, f.degree() / 2)));
    if (R.d != 0) {
      const PointSet Uj = make_U(q, 1, R.j);
      const Collineation k = Collineation::phi(1, R.d, 0, 0);
      R.clauses.add("max:normal-form-U(j)^phi(1,d,0,0)=U", transform(Uj, k).points == N.points,
                    "d=" + f.render(R.d));
      R.clauses.add("max:normal-form-U^phi(1,d,0,0)=U(j)", transform(N, k).points == Uj.points, {}, false);
    } else {
      R.clauses.add("max:normal-form-U(j)^phi(1,d,0,0)=U", false, "d=0");
    }
  }
  return R;
}

}  // namespace uforge
