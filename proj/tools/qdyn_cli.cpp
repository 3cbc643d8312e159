// qdyn: command-line front end for the library.
//
// Subcommands mirror the library surface: goodred, orbit, periodic,
// normalform, distance, family, conjugacy, census, verify.  Every command
// prints a single JSON document on stdout.  Integer data rides as strings
// except map coefficients and the primes of S, which stay JSON numbers as
// in census reports.
//
// Exit codes: 0 success, 1 usage error (bad flags, unparsable wire data,
// violated preconditions), 2 verification failure, 3 work budget exceeded.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdyn/census.hpp"
#include "qdyn/families.hpp"
#include "qdyn/reduction.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qdyn;

json json_int(const Int& v) {
  if (!v.fits_slong_p())
    throw std::domain_error("value exceeds the JSON integer range: " +
                            v.get_str());
  return json(v.get_si());
}

json map_json(const RationalMap& m) {
  json f = json::array(), g = json::array();
  for (const Int& c : m.F.c) f.push_back(json_int(c));
  for (const Int& c : m.G.c) g.push_back(json_int(c));
  return json::array({f, g});
}

json point_json(const ProjPoint& p) {
  return json::array({p.x.get_str(), p.y.get_str()});
}

json points_json(const std::vector<ProjPoint>& pts) {
  json a = json::array();
  for (const ProjPoint& p : pts) a.push_back(point_json(p));
  return a;
}

json cycle_json(const Cycle& c) {
  return json{{"points", points_json(c.points)}, {"period", c.length()}};
}

json places_json(const PlaceSet& s) {
  json a = json::array();
  for (const Int& p : s.primes()) a.push_back(json_int(p));
  return a;
}

json mobius_json(const Mobius& m) {
  return json::array(
      {m.a.get_str(), m.b.get_str(), m.c.get_str(), m.d.get_str()});
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<ProjPoint> parse_orbit(const std::string& s) {
  std::vector<ProjPoint> pts;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) pts.push_back(ProjPoint::parse(item));
  return pts;
}

void run_goodred(const std::string& map_s, const std::string& s_csv) {
  const RationalMap m = parse_map(map_s);
  const PlaceSet s = PlaceSet::parse(s_csv);
  const ReductionReport rep = reduction_report(m, s);
  json bad = json::array();
  for (const Int& p : rep.bad_primes_outside_s) bad.push_back(p.get_str());
  print(json{{"map", map_json(m)},
             {"s", places_json(s)},
             {"disc", rep.disc.get_str()},
             {"bad_primes_outside_s", bad},
             {"good_outside_s", rep.good_outside_s}});
}

void run_orbit(const std::string& map_s, const std::string& point_s,
               unsigned steps) {
  const RationalMap m = parse_map(map_s);
  const ProjPoint start = ProjPoint::parse(point_s);
  const OrbitResult r = orbit(m, start, steps);
  print(json{{"start", point_json(start)},
             {"tail", points_json(r.tail)},
             {"cycle", r.cycle ? cycle_json(*r.cycle) : json(nullptr)}});
}

void run_periodic(const std::string& map_s, unsigned period) {
  const RationalMap m = parse_map(map_s);
  json cycles = json::array();
  for (const Cycle& c : cycles_of_exact_period(m, period))
    cycles.push_back(cycle_json(c));
  print(json{{"period", period},
             {"mobius_bound", json_int(mobius_period_bound(m.degree(), period))},
             {"points", points_json(periodic_points(m, period))},
             {"cycles", cycles}});
}

void run_normalform(const std::string& map_s, const std::string& orbit_s) {
  const RationalMap m = parse_map(map_s);
  const std::vector<ProjPoint> pts = parse_orbit(orbit_s);
  if (pts.size() != 4)
    throw std::domain_error(
        "--orbit wants four ';'-separated points eta;alpha;beta;gamma");
  const auto [nf, a] = to_normal_form(m, pts[0], pts[1], pts[2], pts[3]);
  print(json{{"lambda", nf.lambda.get_str()},
             {"a", nf.a.get_str()},
             {"b", nf.b.get_str()},
             {"c", nf.c.get_str()},
             {"conjugator", mobius_json(a)},
             {"normal_map", map_json(nf.map())}});
}

void run_distance(const std::string& p_s, const std::string& q_s,
                  const std::string& s_csv) {
  const ProjPoint p = ProjPoint::parse(p_s);
  const ProjPoint q = ProjPoint::parse(q_s);
  if (p == q) throw std::domain_error("distance: the points must differ");
  const PlaceSet s = PlaceSet::parse(s_csv);
  const Int cross = p.x * q.y - q.x * p.y;
  json delta = json::object();
  for (const FactorTerm& t : factorize(cross).terms)
    delta[t.p.get_str()] = t.e;
  print(json{{"p", point_json(p)},
             {"q", point_json(q)},
             {"delta", delta},
             {"ideal", pair_ideal(p, q, s).gen.get_str()}});
}

void run_family(const std::string& which, const std::string& param,
                const std::string& s_csv) {
  const Rat a = parse_rat(param);
  const PlaceSet s = PlaceSet::parse(s_csv);
  FamilyMember member;
  Cycle marked = Cycle::of({ProjPoint::infinity()});
  if (which == "phi4") {
    member = phi4(a);
    marked = Cycle::of({ProjPoint::of(0, 1), ProjPoint::affine(a),
                        ProjPoint::infinity(), ProjPoint::of(2, 1)});
  } else if (which == "psi3") {
    member = psi3(a);
    marked = Cycle::of(
        {ProjPoint::of(0, 1), ProjPoint::infinity(), ProjPoint::of(1, 1)});
  } else {
    throw std::domain_error("family: expected phi4 or psi3, got " + which);
  }
  print(json{{"tag", member.tag},
             {"param", a.get_str()},
             {"map", map_json(member.map)},
             {"cycle", cycle_json(marked)},
             {"s", places_json(s)},
             {"good_outside_s", good_outside(member.map, s)}});
}

void run_conjugacy(const std::string& map1_s, const std::string& map2_s,
                   unsigned period) {
  const RationalMap m1 = parse_map(map1_s);
  const RationalMap m2 = parse_map(map2_s);
  const ConjugacyOutcome out = conjugacy_via_cycles(m1, m2, period);
  const char* status = out.status == ConjugacyStatus::witness    ? "witness"
                       : out.status == ConjugacyStatus::refuted ? "refuted"
                                                                : "inconclusive";
  print(json{{"status", status},
             {"witness", out.map ? mobius_json(*out.map) : json(nullptr)}});
}

void run_census(const std::string& s_csv, unsigned height, unsigned max_period,
                const std::string& strategy, unsigned workers,
                const std::string& out_path) {
  CensusConfig cfg;
  cfg.s = PlaceSet::parse(s_csv);
  cfg.height = height;
  cfg.max_period = max_period;
  cfg.strategy = strategy;
  cfg.workers = workers;
  const CensusResult result = qdyn::run_census(cfg);
  const std::string text = report_json(result);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out.flush())
    throw std::runtime_error("census: cannot write " + out_path);
  std::size_t candidates = 0;
  for (const CensusRecord& r : result.records)
    if (r.checks.prop_n3_branch &&
        *r.checks.prop_n3_branch == "finite-set-candidate")
      ++candidates;
  print(json{{"out", out_path},
             {"records", result.records.size()},
             {"classes", result.classes.size()},
             {"unclassified", result.unclassified.size()},
             {"finite_set_candidates", candidates}});
}

void run_verify(const std::string& in_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw std::domain_error("verify: cannot read " + in_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const ReportCheck check = verify_report(buf.str());
  print(json{{"ok", check.ok}, {"violations", check.violations}});
  if (!check.ok) throw verification_error("report verification failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact arithmetic for quadratic self-maps of P^1(Q)\n"
      "with good reduction outside a finite prime set S"};
  app.require_subcommand(1);

  std::string map_s, map2_s, point_s, orbit_s, p_s, q_s, which, param;
  std::string s_csv, out_path, in_path;
  std::string census_s = "2,3";
  std::string strategy = "by-cycles";
  unsigned steps = 64, period = 1, height = 8, max_period = 6, workers = 0;

  CLI::App* goodred = app.add_subcommand(
      "goodred", "discriminant, bad primes, and good reduction outside S");
  goodred->add_option("--map", map_s, "map as \"f0,f1,f2;g0,g1,g2\"")
      ->required();
  goodred->add_option("--s", s_csv, "primes of S, e.g. 2,3");
  goodred->callback([&] { run_goodred(map_s, s_csv); });

  CLI::App* orb =
      app.add_subcommand("orbit", "forward orbit until a cycle or the budget");
  orb->add_option("--map", map_s, "map wire")->required();
  orb->add_option("--point", point_s, "start point as \"x,y\"")->required();
  orb->add_option("--steps", steps, "step budget (default 64)");
  orb->callback([&] { run_orbit(map_s, point_s, steps); });

  CLI::App* per =
      app.add_subcommand("periodic", "rational points of exact period n");
  per->add_option("--map", map_s, "map wire")->required();
  per->add_option("--period", period, "exact period n >= 1")->required();
  per->callback([&] { run_periodic(map_s, period); });

  CLI::App* nf = app.add_subcommand(
      "normalform", "normal form attached to a marked orbit");
  nf->add_option("--map", map_s, "map wire")->required();
  nf->add_option("--orbit", orbit_s,
                 "four points \"eta;alpha;beta;gamma\" with "
                 "eta->alpha->beta->gamma under the map")
      ->required();
  nf->callback([&] { run_normalform(map_s, orbit_s); });

  CLI::App* dist = app.add_subcommand(
      "distance", "p-adic log-distance table and the pair ideal in R_S");
  dist->add_option("--p", p_s, "first point \"x,y\"")->required();
  dist->add_option("--q", q_s, "second point \"x,y\"")->required();
  dist->add_option("--s", s_csv, "primes of S");
  dist->callback([&] { run_distance(p_s, q_s, s_csv); });

  CLI::App* fam = app.add_subcommand(
      "family", "parametrized family member with its marked cycle");
  fam->add_option("which", which, "phi4 | psi3")->required();
  fam->add_option("--param", param, "rational parameter a")->required();
  fam->add_option("--s", s_csv, "primes of S");
  fam->callback([&] { run_family(which, param, s_csv); });

  CLI::App* conj = app.add_subcommand(
      "conjugacy", "PGL_2(Q)-conjugacy through rational n-cycles");
  conj->add_option("--map1", map_s, "first map wire")->required();
  conj->add_option("--map2", map2_s, "second map wire")->required();
  conj->add_option("--period", period, "cycle length n >= 3")->required();
  conj->callback([&] { run_conjugacy(map_s, map2_s, period); });

  CLI::App* cen = app.add_subcommand(
      "census", "enumerate, verify, and classify good-reduction maps");
  cen->add_option("--s", census_s, "primes of S (default 2,3)");
  cen->add_option("--height", height, "coefficient height bound (default 8)");
  cen->add_option("--max-period", max_period,
                  "longest cycle length harvested (default 6)");
  cen->add_option("--strategy", strategy, "by-cycles | by-coeffs");
  cen->add_option("--workers", workers,
                  "worker threads; 0 = available parallelism");
  cen->add_option("--out", out_path, "report path; omit to print the report");
  cen->callback([&] {
    run_census(census_s, height, max_period, strategy, workers, out_path);
  });

  CLI::App* ver = app.add_subcommand(
      "verify", "recompute a census report and compare structurally");
  ver->add_option("--in", in_path, "report path")->required();
  ver->callback([&] { run_verify(in_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const verification_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 2;
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
