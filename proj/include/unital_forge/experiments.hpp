#pragma once

// Named, reproducible experiments. Each one runs a suite of certified checks
// at a given q and returns an ExperimentReport; "all" runs every suite.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unital_forge/collineation.hpp"
#include "unital_forge/error.hpp"
#include "unital_forge/gf_cache.hpp"
#include "unital_forge/nearfield.hpp"
#include "unital_forge/onan.hpp"
#include "unital_forge/plane.hpp"
#include "unital_forge/polyfn.hpp"
#include "unital_forge/report.hpp"
#include "unital_forge/strata.hpp"
#include "unital_forge/structure.hpp"
#include "unital_forge/unital.hpp"

namespace uforge {

struct RunParams {
  std::optional<std::uint32_t> q;  // default 3
  std::optional<std::uint64_t> j;
  std::optional<std::string> a, b;  // field elements in rendered form
  unsigned threads = 1;
  std::string cache_dir;
};

namespace detail {

struct Ctx {
  std::uint32_t q = 3;
  std::optional<std::uint64_t> j;
  std::optional<std::string> a, b;
  unsigned threads = 1;
};

struct Verdict {
  bool ok = false;
  std::string witness;
};

/// Runs fn as one check; module errors become a failed check carrying the message.
template <class F>
void check(ExperimentReport& r, std::string name, F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = fn();
  } catch (const Error& e) {
    v = {false, e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.add(std::move(name), v.ok, std::move(v.witness), ms);
}

inline void add_axioms(ExperimentReport& r, const std::string& prefix, const AxiomReport& a, double ms = 0) {
  for (const auto& c : a.checks) {
    if (c.required) {
      r.add(prefix + c.name, c.holds, c.witness, ms);
    } else {
      r.inapplicable(prefix + c.name,
                     std::string("recorded only: ") + (c.holds ? "holds" : "fails") + (c.witness.empty() ? "" : " " + c.witness));
    }
    ms = 0;
  }
}

template <class F>
double elapsed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string str(std::uint64_t v) { return std::to_string(v); }

/// j with 1 < j < q-1 and gcd(j, (q-1)/2) = 1: the exponents for which U(1,j) must fail.
inline std::vector<std::uint64_t> exclusion_exponents(std::uint32_t q) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t j = 2; j + 1 < q; ++j)
    if (std::gcd<std::uint64_t>(j, (q - 1) / 2) == 1) out.push_back(j);
  return out;
}

inline std::vector<std::uint64_t> v_exponents(std::uint32_t q) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t j = 1; j + 1 < q; ++j)
    if (v_admissible(q, j)) out.push_back(j);
  return out;
}

inline Elem parse_elem(const Field& f, const std::optional<std::string>& s, Elem fallback) {
  return s ? f.parse(*s) : fallback;
}

// ---------------------------------------------------------------------------
// Suites.

inline void exp_plane_axioms(ExperimentReport& r, const Ctx& c) {
  const auto pl = nearfield_plane(c.q);
  AxiomReport a;
  const double ms = elapsed([&] { a = verify_plane_axioms(*pl); });
  add_axioms(r, "", a, ms);
}

inline void exp_nearfield_axioms(ExperimentReport& r, const Ctx& c) {
  const Nearfield& nf = nearfield_plane(c.q)->nearfield();
  AxiomReport a;
  const double ms = elapsed([&] { a = verify_nearfield_axioms(nf); });
  add_axioms(r, "", a, ms);
  check(r, "closed-form product", [&] {
    const Field& f = nf.field();
    for (Elem x = 0; x < f.order(); ++x)
      for (Elem y = 0; y < f.order(); ++y)
        if (nf.mul(x, y) != nm_mul_closed_form(f, x, y))
          return Verdict{false, f.render(x) + " * " + f.render(y)};
    return Verdict{true, {}};
  });
}

inline void exp_subgroups(ExperimentReport& r, const Ctx& c) {
  const Nearfield& nf = nearfield_plane(c.q)->nearfield();
  std::vector<MultSubgroup> subs;
  check(r, "every subgroup has a listed shape", [&] {
    subs = enumerate_mult_subgroups(nf);
    std::size_t cyc = 0;
    for (const auto& s : subs) cyc += s.shape == SubgroupShape::Cyclic;
    return Verdict{true, str(subs.size()) + " subgroups, " + str(cyc) + " cyclic, " + str(subs.size() - cyc) + " split"};
  });
  if (c.q == 3) check(r, "N(2,3)* has 6 subgroups", [&] { return Verdict{subs.size() == 6, str(subs.size())}; });
  Json list = Json::array();
  const Field& f = nf.field();
  for (const auto& s : subs) {
    Json e;
    e["order"] = s.order();
    e["shape"] = s.shape == SubgroupShape::Cyclic ? "cyclic" : "split";
    if (s.shape == SubgroupShape::Split) e["h"] = f.render(s.h);
    list.push_back(std::move(e));
  }
  r.data["subgroups"] = std::move(list);
}

inline void exp_linear_group(ExperimentReport& r, const Ctx& c) {
  if (c.q != 3) {
    r.inapplicable("linear group", "generated only for q = 3");
    return;
  }
  const auto pl = nearfield_plane(c.q);
  CollineationGroup G;
  const std::uint64_t Q = std::uint64_t{c.q} * c.q;
  check(r, "order 2 Q^2 (Q-1)^2", [&] {
    G = generate_group(*pl, linear_generators(*pl));
    return Verdict{G.order() == 2 * Q * Q * (Q - 1) * (Q - 1), str(G.order())};
  });
  check(r, "generated group equals tuple enumeration",
        [&] { return Verdict{enumerate_linear_group(*pl).elements == G.elements, {}}; });
  check(r, "canonical forms", [&] {
    for (const auto& k : G.elements)
      if (!certify_canonical_form(*pl, k)) return Verdict{false, render(*pl, k)};
    return Verdict{true, {}};
  });
  check(r, "p-elements are translations", [&] {
    const std::uint32_t p = pl->field().characteristic();
    std::size_t n = 0;
    for (const auto& k : G.elements) {
      std::uint64_t o = element_order(*pl, k);
      if (o == 1) continue;
      while (o % p == 0) o /= p;
      if (o != 1) continue;
      ++n;
      if (!k.is_translation()) return Verdict{false, render(*pl, k)};
    }
    return Verdict{true, str(n) + " non-identity p-elements"};
  });
}

inline void exp_wantz_is_unital(ExperimentReport& r, const Ctx& c) {
  const Field& f = nearfield_plane(c.q)->field();
  const Elem a = parse_elem(f, c.a, 0), b = parse_elem(f, c.b, 1);
  r.params.emplace_back("a", f.render(a));
  r.params.emplace_back("b", f.render(b));
  check(r, "wantz(a,b) is a unital", [&] {
    const auto U = make_wantz(c.q, a, b);
    const auto d = verify_unital(U, c.threads);
    Json h = Json::object();
    for (auto [k, n] : d.histogram) h[str(k)] = n;
    r.data["histogram"] = std::move(h);
    if (d.witness) return Verdict{false, U.plane->render_line(*d.witness) + " meets in " + str(d.witness_size)};
    return Verdict{d.is_unital, str(d.tangents) + " tangents, " + str(d.secants) + " secants"};
  });
}

inline void exp_wantz_criterion(ExperimentReport& r, const Ctx& c) {
  const Field& f = nearfield_plane(c.q)->field();
  const std::uint32_t Q = f.order();
  std::vector<std::pair<Elem, Elem>> pairs;
  if (c.q <= 5) {
    for (Elem a = 0; a < Q; ++a)
      for (Elem b = 0; b < Q; ++b)
        if (a || b) pairs.emplace_back(a, b);
  } else {
    std::mt19937_64 rng(0x5eed0000u + c.q);
    std::uniform_int_distribution<Elem> pick(0, Q - 1);
    while (pairs.size() < 200) {
      const Elem a = pick(rng), b = pick(rng);
      if (a || b) pairs.emplace_back(a, b);
    }
  }
  r.params.emplace_back("pairs", str(pairs.size()));
  std::vector<char> unital(pairs.size());
  const double ms = elapsed([&] {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      unital[i] = verify_unital(make_wantz(c.q, pairs[i].first, pairs[i].second), c.threads).is_unital;
  });
  const auto score = [&](auto&& cond, bool base_only) {
    std::size_t agree = 0, total = 0;
    std::string first;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [a, b] = pairs[i];
      if (base_only && !(in_base_field(f, a) && in_base_field(f, b))) continue;
      ++total;
      const bool pred = cond(a, b);
      if (pred == static_cast<bool>(unital[i])) ++agree;
      else if (first.empty())
        first = "; first disagreement (a,b)=" + detail::ab(f, a, b) + (unital[i] ? " is a unital" : " is not a unital");
    }
    return Verdict{agree == total, "agree " + str(agree) + "/" + str(total) + first};
  };
  const auto literal = [&](Elem a, Elem b) { return wantz_condition(f, a, b); };
  const auto reduced = [&](Elem a, Elem b) { return wantz_condition_reduced(f, a, b); };
  auto v = score(literal, false);
  r.add("b^2-a^2 nonzero square of GF(q) iff unital", v.ok, v.witness, ms);
  v = score(literal, true);
  r.add("same, a and b in GF(q)", v.ok, v.witness);
  v = score(reduced, false);
  r.add("(Tr(b)/2)^2-Nm(a) nonzero square of GF(q) iff unital", v.ok, v.witness);
  std::size_t n = 0;
  for (char u : unital) n += u != 0;
  r.data["unitals"] = n;
}

inline void exp_stabilizer_order(ExperimentReport& r, const Ctx& c) {
  const auto U = make_U(c.q, 1, 1);
  check(r, "linear stabilizer of U(1) has order q(q^2-1)", [&] {
    const auto G = linear_stabilizer(*U.plane, U.points, c.threads);
    const std::uint64_t want = std::uint64_t{c.q} * (std::uint64_t{c.q} * c.q - 1);
    r.data["order"] = G.order();
    return Verdict{G.order() == want, str(G.order())};
  });
}

inline void exp_structure_report(ExperimentReport& r, const Ctx& c) {
  const auto U = make_U(c.q, 1, 1);
  StructureReport R;
  const double ms = elapsed([&] { R = structure_report(U, c.threads); });
  add_axioms(r, "", R.clauses, ms);
  const Field& f = U.plane->field();
  const auto base = base_field_elements(f);
  check(r, "C is the whole group", [&] { return Verdict{R.C.size() == std::size_t{c.q} * c.q - 1, str(R.C.size())}; });
  check(r, "D = GF(q)*", [&] { return Verdict{R.D == std::vector<Elem>(base.begin() + 1, base.end()), {}}; });
  check(r, "W = GF(q) eps", [&] {
    const Elem eps = constants(f).epsilon;
    std::vector<Elem> W;
    for (Elem t : base) W.push_back(f.mul(t, eps));
    std::sort(W.begin(), W.end());
    return Verdict{R.W == W, {}};
  });
  check(r, "delta = Nm", [&] {
    if (R.delta.size() != R.C.size()) return Verdict{false, "domain " + str(R.delta.size())};
    for (auto [x, d] : R.delta)
      if (d != norm(f, x)) return Verdict{false, f.render(x)};
    return Verdict{true, {}};
  });
  check(r, "r = q+1", [&] { return Verdict{R.r == c.q + 1, str(R.r)}; });
}

inline void exp_central_collineations(ExperimentReport& r, const Ctx& c) {
  const auto U = make_U(c.q, 1, 1);
  const Plane& pl = *U.plane;
  check(r, "elation iff tangent axis, homology iff secant axis", [&] {
    const auto G = linear_stabilizer(pl, U.points, c.threads);
    std::size_t el = 0, ho = 0;
    for (const auto& g : G.elements) {
      if (g.is_identity()) continue;
      const auto ci = central_classification(pl, g);
      if (!ci) continue;
      const std::size_t n = meet_count(pl, U.mask, ci->axis);
      const bool elation = ci->kind == CentralKind::Elation;
      (elation ? el : ho)++;
      if (elation != (n == 1) || (!elation && n != c.q + 1))
        return Verdict{false, render(pl, g) + " axis " + pl.render_line(ci->axis) + " meets in " + str(n)};
    }
    r.data["elations"] = el;
    r.data["homologies"] = ho;
    return Verdict{el + ho > 0, str(el) + " elations, " + str(ho) + " homologies"};
  });
}

inline void exp_strata_profiles(ExperimentReport& r, const Ctx& c) {
  AxiomReport a;
  const double ms = elapsed([&] { a = b_profile_check(c.q); });
  add_axioms(r, "", a, ms);
}

inline void exp_u_family(ExperimentReport& r, const Ctx& c) {
  AxiomReport a;
  const double ms = elapsed([&] { a = u_family_check(c.q); });
  add_axioms(r, "", a, ms);
}

inline void exp_v_profile(ExperimentReport& r, const Ctx& c) {
  if (c.q % 4 != 3) {
    r.inapplicable("V profile", "V(j) needs q = 3 mod 4");
    return;
  }
  if (c.j && !v_admissible(c.q, *c.j))
    fail(ErrorKind::InvalidParameters, "j = " + str(*c.j) + " needs 1 <= j < q-1 and gcd(j, q-1) = 1");
  const auto js = c.j ? std::vector<std::uint64_t>{*c.j} : v_exponents(c.q);
  for (auto j : js) {
    AxiomReport a;
    const double ms = elapsed([&] { a = v_profile_check(c.q, j); });
    add_axioms(r, "", a, ms);
  }
}

inline void exp_exclusions(ExperimentReport& r, const Ctx& c) {
  if (c.j && !(*c.j > 1 && *c.j + 1 < c.q)) fail(ErrorKind::InvalidParameters, "exclusions need 1 < j < q-1");
  const auto js = c.j ? std::vector<std::uint64_t>{*c.j} : exclusion_exponents(c.q);
  if (js.empty()) {
    r.inapplicable("U(j) exclusions", "no exponent 1 < j < q-1 with gcd(j, (q-1)/2) = 1");
    return;
  }
  for (auto j : js)
    check(r, "U(1," + str(j) + ") is not a unital", [&] {
      const auto U = make_U(c.q, 1, j);
      const auto d = verify_unital(U, c.threads);
      if (d.is_unital) return Verdict{false, "verified as a unital"};
      if (!d.witness) return Verdict{false, "no witness line"};
      return Verdict{true, U.plane->render_line(*d.witness) + " meets in " + str(d.witness_size)};
    });
}

inline void exp_onan_absent_wantz(ExperimentReport& r, const Ctx& c) {
  const auto U = make_U(c.q, 1, 1);
  check(r, "no O'Nan configuration through (0,1,0)", [&] {
    OnanConstraints k;
    k.must_contain = U.plane->vertex();
    k.limit = 1;
    const auto found = find_onan(U, k, c.threads);
    if (!found.empty()) return Verdict{false, onan_witness(*U.plane, found.front())};
    return Verdict{true, {}};
  });
  check(r, "forced-line search is empty", [&] { return Verdict{check_forced_line(U, c.threads), {}}; });
}

inline void exp_onan_absent_classical(ExperimentReport& r, const Ctx& c) {
  const auto H = make_hermitian(c.q);
  check(r, "classical unital has no O'Nan configuration", [&] {
    OnanConstraints k;
    k.limit = 1;
    const auto found = find_onan(H, k, c.threads);
    if (!found.empty()) return Verdict{false, onan_witness(*H.plane, found.front())};
    return Verdict{true, {}};
  });
}

inline void exp_onan_obstructions(ExperimentReport& r, const Ctx& c) {
  Json list = Json::array();
  const auto record = [&](const std::string& family, std::uint64_t j, const Obstruction& o) {
    Json e;
    e["family"] = family;
    e["j"] = j;
    e["path"] = to_string(o.path);
    if (o.seeds) {
      const Field& f = o.ambient.plane->field();
      e["seeds"] = Json::array({f.render(o.seeds->first), f.render(o.seeds->second)});
    }
    if (!o.note.empty()) e["note"] = o.note;
    e["configuration"] = onan_json(*o.ambient.plane, o.config);
    list.push_back(std::move(e));
  };
  const auto ujs = c.j ? std::vector<std::uint64_t>{*c.j} : exclusion_exponents(c.q);
  for (auto j : ujs)
    check(r, "U(1," + str(j) + ") obstruction", [&] {
      const auto o = uj_obstruction(c.q, j, c.threads);
      record("U", j, o);
      return Verdict{true, std::string(to_string(o.path)) + ": " + onan_witness(*o.ambient.plane, o.config)};
    });
  if (c.q % 4 == 3 && c.q > 3) {
    const auto vjs = c.j ? std::vector<std::uint64_t>{*c.j} : v_exponents(c.q);
    for (auto j : vjs) {
      if (!v_admissible(c.q, j)) continue;
      check(r, "V(" + str(j) + ") obstruction", [&] {
        const auto o = vj_obstruction(c.q, j, c.threads);
        record("V", j, o);
        return Verdict{true, std::string(to_string(o.path)) + ": " + onan_witness(*o.ambient.plane, o.config)};
      });
    }
  } else {
    r.inapplicable("V(j) obstructions", "V(j) constructions need q = 3 mod 4 and q > 3");
  }
  if (ujs.empty()) r.inapplicable("U(j) obstructions", "no exponent 1 < j < q-1 with gcd(j, (q-1)/2) = 1");
  r.data["obstructions"] = std::move(list);
}

inline void exp_polynomials(ExperimentReport& r, const Ctx& c) {
  const std::uint32_t q = c.q;
  const std::uint64_t p = shared_field(q).characteristic();
  check(r, "permutation criterion matches exhaustive test", [&] {
    std::size_t perms = 0;
    for (std::uint64_t k = 1; k <= 2 * p * (q - 1); ++k) perms += hk_is_permutation(q, k);
    return Verdict{true, str(perms) + " permutations for k <= " + str(2 * p * (q - 1))};
  });
  check(r, "value-set bound for non-permutations", [&] {
    for (std::uint64_t k = 1; k + 1 <= q; ++k) {
      const auto a = hk_value_set(q, k);
      if (!a.wan_bound_holds()) return Verdict{false, "k=" + str(k) + " size " + str(a.value_set_size)};
    }
    return Verdict{true, {}};
  });
  Json cols = Json::object();
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 2; k + 1 < q; ++k)
    if (std::gcd<std::uint64_t>(k, q - 1) == 1) ks.push_back(k);
  if (ks.empty()) {
    r.inapplicable("collisions exist when gcd(k, q-1) = 1", "no exponent 1 < k < q-1 coprime to q-1");
  } else {
    check(r, "collisions exist when gcd(k, q-1) = 1", [&] {
      const Field& f = shared_field(q);
      for (auto k : ks) {
        const auto [c1, c2] = hk_find_collision(q, k);
        cols[str(k)] = Json::array({f.render(c1), f.render(c2)});
      }
      return Verdict{true, str(ks.size()) + " exponents"};
    });
  }
  if (q == 5)
    check(r, "h_3 collision over GF(5) is (2,3)", [&] {
      const auto pr = hk_find_collision(5, 3);
      return Verdict{pr == std::pair<Elem, Elem>{2, 3}, "(" + str(pr.first) + "," + str(pr.second) + ")"};
    });
  r.data["collisions"] = std::move(cols);
}

using Suite = void (*)(ExperimentReport&, const Ctx&);

inline const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> reg{
      {"plane-axioms", exp_plane_axioms},
      {"nearfield-axioms", exp_nearfield_axioms},
      {"subgroups", exp_subgroups},
      {"linear-group", exp_linear_group},
      {"wantz-is-unital", exp_wantz_is_unital},
      {"wantz-criterion", exp_wantz_criterion},
      {"stabilizer-order", exp_stabilizer_order},
      {"structure-report", exp_structure_report},
      {"central-collineations", exp_central_collineations},
      {"strata-profiles", exp_strata_profiles},
      {"u-family", exp_u_family},
      {"v-profile", exp_v_profile},
      {"exclusions", exp_exclusions},
      {"onan-absent-wantz", exp_onan_absent_wantz},
      {"onan-absent-classical", exp_onan_absent_classical},
      {"onan-obstructions", exp_onan_obstructions},
      {"polynomials", exp_polynomials},
  };
  return reg;
}

inline std::uint32_t validate_q(std::optional<std::uint32_t> q) {
  const std::uint32_t v = q.value_or(3);
  const auto f = prime_factors(v);
  if (v < 3 || f.size() != 1 || f[0] == 2)
    fail(ErrorKind::InvalidParameters, "q = " + std::to_string(v) + " must be an odd prime power");
  return v;
}

/// Loads GF(q^2) through the cache directory and checks it against the in-memory tables.
inline bool touch_cache(std::uint32_t q, const std::string& dir) {
  if (dir.empty()) return false;
  const Field& f = shared_field(q * q);
  bool hit = false;
  const Field g = build_field_cached(f.characteristic(), f.degree(), dir, &hit);
  if (g.exp_table() != f.exp_table() || g.modulus() != f.modulus())
    fail(ErrorKind::InternalConsistency, "cached GF(" + std::to_string(q * q) + ") differs from a fresh build");
  return hit;
}

}  // namespace detail

/// Registered experiment names, "all" last.
inline std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [n, _] : detail::registry()) out.push_back(n);
  out.push_back("all");
  return out;
}

inline ExperimentReport run(const std::string& name, const RunParams& p) {
  const auto& reg = detail::registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; });
  if (it == reg.end() && name != "all") fail(ErrorKind::UnknownExperiment, "no experiment named '" + name + "'");

  detail::Ctx c;
  c.q = detail::validate_q(p.q);
  c.j = p.j;
  c.a = p.a;
  c.b = p.b;
  c.threads = std::max(1u, p.threads);

  ExperimentReport r;
  r.experiment = name;
  r.params.emplace_back("q", std::to_string(c.q));
  if (c.j) r.params.emplace_back("j", std::to_string(*c.j));
  r.fingerprint = toolchain_fingerprint();
  r.threads = c.threads;
  r.cache_used = detail::touch_cache(c.q, p.cache_dir);

  if (name != "all") {
    it->second(r, c);
    return r;
  }
  Json data = Json::object();
  for (const auto& [n, suite] : reg) {
    ExperimentReport sub;
    sub.params = r.params;
    suite(sub, c);
    for (auto& ck : sub.checks) {
      ck.name = n + ": " + ck.name;
      r.checks.push_back(std::move(ck));
    }
    if (!sub.data.is_null()) data[n] = std::move(sub.data);
  }
  r.data = std::move(data);
  return r;
}

}  // namespace uforge
