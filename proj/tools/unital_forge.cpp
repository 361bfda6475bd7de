// unital-forge: command-line front end for the experiment suites.
// Exit codes: 0 all checks pass, 1 some check fails, 2 usage error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "unital_forge/experiments.hpp"

using namespace uforge;

namespace {

struct Options {
  std::optional<std::uint32_t> q;
  std::optional<std::uint64_t> j, k;
  std::optional<std::string> a, b;
  std::string family = "wantz";
  unsigned threads = 1;
  std::string cache;
  std::string report = "text";
  std::string out;
  std::string experiment;
  bool list = false;
  bool through_infinity = false;
  bool forbid_horizontal = false;
  std::size_t limit = 0;
  bool points = false;
};

void common(CLI::App* sub, Options& o) {
  sub->add_option("--q", o.q, "odd prime power q (the plane has order q^2)");
  sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--cache", o.cache, "field table cache directory");
  sub->add_option("--report", o.report, "json or text");
  sub->add_option("--out", o.out, "write the report here instead of stdout");
}

void family_opts(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "point-set family")
      ->check(CLI::IsMember({"hermitian", "wantz", "U", "V", "B"}));
  sub->add_option("--a", o.a, "parameter a (field element, e.g. 1+2i)");
  sub->add_option("--b", o.b, "parameter b");
  sub->add_option("--j", o.j, "exponent j");
}

RunParams params_of(const Options& o) {
  RunParams p;
  p.q = o.q;
  p.j = o.j;
  p.a = o.a;
  p.b = o.b;
  p.threads = o.threads;
  p.cache_dir = o.cache;
  return p;
}

ExperimentReport base_report(const std::string& name, const Options& o, std::uint32_t q) {
  ExperimentReport r;
  r.experiment = name;
  r.params.emplace_back("q", std::to_string(q));
  r.fingerprint = toolchain_fingerprint();
  r.threads = o.threads;
  return r;
}

PointSet build_family(const Options& o, std::uint32_t q) {
  const Field& f = nearfield_plane(q)->field();
  const auto elem = [&](const std::optional<std::string>& s, Elem d) { return s ? f.parse(*s) : d; };
  if (o.family == "hermitian") return make_hermitian(q);
  if (o.family == "wantz") return make_wantz(q, elem(o.a, 0), elem(o.b, 1));
  if (o.family == "U") return make_U(q, elem(o.b, 1), o.j.value_or(1));
  if (o.family == "V") return make_V(q, o.j.value_or(1));
  return make_B(q, elem(o.a, 0), elem(o.b, 0));
}

void describe(ExperimentReport& r, const PointSet& s) {
  r.params.emplace_back("family", s.family);
  for (const auto& kv : s.params) r.params.push_back(kv);
}

ExperimentReport cmd_field(const Options& o) {
  const std::uint32_t Q = o.q.value_or(9);
  const Field& f = shared_field(Q);
  ExperimentReport r = base_report("field", o, Q);
  if (!o.cache.empty()) {
    const Field g = build_field_cached(f.characteristic(), f.degree(), o.cache, &r.cache_used);
    r.add("cache round trip", g.exp_table() == f.exp_table() && g.modulus() == f.modulus());
  }
  bool prim = true, frob = true;
  Elem x = 1;
  for (std::uint32_t e = 1; e < Q - 1; ++e) {
    x = f.mul(x, f.primitive());
    if (x == 1) prim = false;
  }
  for (Elem y = 0; y < Q; ++y)
    if (f.pow(y, Q) != y) frob = false;
  r.add("primitive element has order q-1", prim, f.render(f.primitive()));
  r.add("x^q = x", frob);
  Json mod = Json::array();
  for (auto c : f.modulus()) mod.push_back(c);
  r.data["modulus"] = std::move(mod);
  if (Q <= 81) {
    Json els = Json::array();
    for (Elem y = 0; y < Q; ++y) els.push_back(f.render(y));
    r.data["elements"] = std::move(els);
  }
  return r;
}

ExperimentReport cmd_unital(const Options& o) {
  const std::uint32_t q = detail::validate_q(o.q);
  const PointSet s = build_family(o, q);
  ExperimentReport r = base_report("unital", o, q);
  describe(r, s);
  const std::size_t m3 = std::size_t{q} * q * q + 1;
  if (s.size() != m3) {
    r.inapplicable("unital", std::to_string(s.size()) + " points, a unital has " + std::to_string(m3));
  } else {
    const auto d = verify_unital(s, o.threads);
    std::string w = std::to_string(d.tangents) + " tangents, " + std::to_string(d.secants) + " secants";
    if (d.witness) w = s.plane->render_line(*d.witness) + " meets in " + std::to_string(d.witness_size);
    r.add("unital", d.is_unital, w);
    Json h = Json::object();
    for (auto [k, n] : d.histogram) h[std::to_string(k)] = n;
    r.data["histogram"] = std::move(h);
  }
  if (o.points) r.data["set"] = point_set_json(s);
  return r;
}

ExperimentReport cmd_onan(const Options& o) {
  const std::uint32_t q = detail::validate_q(o.q);
  const PointSet s = build_family(o, q);
  ExperimentReport r = base_report("onan", o, q);
  describe(r, s);
  OnanConstraints c;
  if (o.through_infinity) c.must_contain = s.plane->vertex(), r.params.emplace_back("through", "(0,1,0)");
  if (o.forbid_horizontal) c.forbid_shape = LineShape::Horizontal, r.params.emplace_back("forbid", "[0,1,z]");
  c.limit = o.limit;
  const auto found = find_onan(s, c, o.threads);
  r.add("no O'Nan configuration", found.empty(), found.empty() ? "" : onan_witness(*s.plane, found.front()));
  Json list = Json::array();
  for (const auto& cfg : found) list.push_back(onan_json(*s.plane, cfg));
  r.data["count"] = found.size();
  r.data["configurations"] = std::move(list);
  return r;
}

ExperimentReport cmd_poly(const Options& o) {
  if (!o.k) return run("polynomials", params_of(o));
  const std::uint32_t q = detail::validate_q(o.q);
  const Field& f = shared_field(q);
  ExperimentReport r = base_report("poly", o, q);
  r.params.emplace_back("k", std::to_string(*o.k));
  const auto a = hk_value_set(q, *o.k);
  r.add("permutation test agrees with criterion", hk_is_permutation(q, *o.k) == a.is_permutation,
        a.is_permutation ? "permutation" : "not a permutation");
  if (a.wan_bound)
    r.add("value-set bound", a.wan_bound_holds(),
          std::to_string(a.value_set_size) + " <= " + std::to_string(*a.wan_bound));
  else
    r.inapplicable("value-set bound", "needs 1 <= k <= q-1");
  r.data["value_set_size"] = a.value_set_size;
  if (a.collision) r.data["collision"] = Json::array({f.render(a.collision->first), f.render(a.collision->second)});
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unital-forge: unitals in nearfield planes"};
  app.require_subcommand(1);
  Options o;

  auto* field = app.add_subcommand("field", "build and check GF(q); --q is the field order");
  common(field, o);
  auto* nearfield = app.add_subcommand("nearfield", "nearfield axioms of N(2,q)");
  common(nearfield, o);
  auto* plane = app.add_subcommand("plane", "projective plane axioms of NP(N(2,q))");
  common(plane, o);
  auto* unital = app.add_subcommand("unital", "build a point set and verify the unital property");
  common(unital, o);
  family_opts(unital, o);
  unital->add_flag("--points", o.points, "include the point set in the report");
  auto* onan = app.add_subcommand("onan", "search O'Nan configurations");
  common(onan, o);
  family_opts(onan, o);
  onan->add_flag("--through-infinity", o.through_infinity, "only configurations through (0,1,0)");
  onan->add_flag("--forbid-horizontal", o.forbid_horizontal, "no configuration line [0,1,z]");
  onan->add_option("--limit", o.limit, "stop early once this many are found per work chunk");
  auto* poly = app.add_subcommand("poly", "all-ones polynomials h_k over GF(q)");
  common(poly, o);
  poly->add_option("--k", o.k, "degree k; without it the full suite runs");
  auto* experiments = app.add_subcommand("experiments", "run a named experiment suite");
  common(experiments, o);
  experiments->add_option("name", o.experiment, "experiment name, or 'all'");
  experiments->add_option("--j", o.j, "exponent j");
  experiments->add_option("--a", o.a, "parameter a");
  experiments->add_option("--b", o.b, "parameter b");
  experiments->add_flag("--list", o.list, "list experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const ReportFormat fmt = parse_format(o.report);
    ExperimentReport r;
    if (*field) r = cmd_field(o);
    else if (*nearfield) r = run("nearfield-axioms", params_of(o));
    else if (*plane) r = run("plane-axioms", params_of(o));
    else if (*unital) r = cmd_unital(o);
    else if (*onan) r = cmd_onan(o);
    else if (*poly) r = cmd_poly(o);
    else {
      if (o.list) {
        for (const auto& n : experiment_names()) std::cout << n << "\n";
        return 0;
      }
      if (o.experiment.empty()) {
        std::cerr << "experiments: a name is required (see --list)\n";
        return 2;
      }
      r = run(o.experiment, params_of(o));
    }
    if (o.out.empty()) report_write(r, fmt, std::cout);
    else report_write(r, fmt, o.out);
    return r.passed() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    const auto k = e.kind();
    const bool usage = k == ErrorKind::InvalidParameters || k == ErrorKind::UnknownExperiment ||
                       k == ErrorKind::OddCharacteristicRequired || k == ErrorKind::CompositeCharacteristic;
    return usage ? 2 : 1;
  }
}
