#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "json.hpp"
#include "qdyn/census.hpp"
#include "qdyn/families.hpp"
#include "qdyn/reduction.hpp"

using namespace qdyn;

namespace {

const ProjPoint kZero = ProjPoint::of(0, 1);
const ProjPoint kInf = ProjPoint::infinity();
const ProjPoint kOne = ProjPoint::of(1, 1);

CensusConfig config(const std::string& s, unsigned h, unsigned mp,
                    const std::string& strategy, unsigned workers = 1) {
  return CensusConfig{PlaceSet::parse(s), h, mp, strategy, workers};
}

std::set<std::string> wires(const std::vector<RationalMap>& maps) {
  std::set<std::string> out;
  for (const RationalMap& m : maps) out.insert(m.wire());
  return out;
}

bool tuple_less(const RationalMap& a, const RationalMap& b) {
  for (unsigned i = 0; i < 3; ++i) {
    if (a.F.c[i] != b.F.c[i]) return a.F.c[i] < b.F.c[i];
  }
  for (unsigned i = 0; i < 3; ++i) {
    if (a.G.c[i] != b.G.c[i]) return a.G.c[i] < b.G.c[i];
  }
  return false;
}

// A hand-assembled result over the given maps, sorted the way run_census
// sorts, with cycles harvested but nothing verified or classified yet.
CensusResult assemble(std::vector<RationalMap> maps, const CensusConfig& cfg) {
  std::sort(maps.begin(), maps.end(), tuple_less);
  CensusResult r;
  r.config = cfg;
  for (const RationalMap& m : maps)
    r.records.push_back({m, harvest_cycles(m, cfg.max_period), "", {}});
  return r;
}

long count_fsc(const CensusResult& r) {
  long fsc = 0;
  for (const CensusRecord& rec : r.records)
    if (rec.checks.prop_n3_branch &&
        *rec.checks.prop_n3_branch == "finite-set-candidate")
      ++fsc;
  return fsc;
}

std::map<unsigned, long> cycle_counts(const CensusResult& r) {
  std::map<unsigned, long> out;
  for (const CensusRecord& rec : r.records)
    for (const Cycle& c : rec.cycles) ++out[static_cast<unsigned>(c.length())];
  return out;
}

}  // namespace

TEST_CASE("mobius period bound") {
  CHECK(mobius_period_bound(2, 1) == 3);
  CHECK(mobius_period_bound(2, 2) == 2);
  CHECK(mobius_period_bound(2, 3) == 6);
  CHECK(mobius_period_bound(2, 4) == 12);
  CHECK(mobius_period_bound(2, 5) == 30);
  CHECK(mobius_period_bound(2, 6) == 54);
  CHECK(mobius_period_bound(3, 1) == 4);
  CHECK(mobius_period_bound(3, 2) == 6);
  CHECK_THROWS_AS(mobius_period_bound(0, 3), std::domain_error);
  CHECK_THROWS_AS(mobius_period_bound(2, 0), std::domain_error);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(enumerate_maps(config("2", 0, 3, "by-coeffs")),
                  std::domain_error);
  CHECK_THROWS_AS(enumerate_maps(config("2", 2, 0, "by-cycles")),
                  std::domain_error);
  CHECK_THROWS_AS(enumerate_maps(config("2", 2, 3, "by-luck")),
                  std::domain_error);
  CHECK_THROWS_AS(harvest_cycles(psi3(Rat(1)).map, 0), std::domain_error);
}

TEST_CASE("by-coeffs at height 1 over the empty set is the exhaustive scan") {
  const auto maps = enumerate_maps(config("", 1, 3, "by-coeffs"));
  CHECK(maps.size() == 156);

  // independent rebuild: try every height-1 coefficient tuple
  std::set<std::string> brute;
  long v[6];
  for (v[0] = -1; v[0] <= 1; ++v[0])
    for (v[1] = -1; v[1] <= 1; ++v[1])
      for (v[2] = -1; v[2] <= 1; ++v[2])
        for (v[3] = -1; v[3] <= 1; ++v[3])
          for (v[4] = -1; v[4] <= 1; ++v[4])
            for (v[5] = -1; v[5] <= 1; ++v[5]) {
              try {
                const RationalMap m =
                    make_map(BinaryForm({Int(v[0]), Int(v[1]), Int(v[2])}),
                             BinaryForm({Int(v[3]), Int(v[4]), Int(v[5])}));
                if (abs(m.res) == 1) brute.insert(m.wire());
              } catch (const degenerate_error&) {
              }
            }
  CHECK(brute == wires(maps));

  for (const RationalMap& m : maps) {
    CHECK(good_outside(m, PlaceSet::parse("")));
    Int h = 0;
    for (const Int& c : m.F.c) h = std::max(h, Int(abs(c)));
    for (const Int& c : m.G.c) h = std::max(h, Int(abs(c)));
    CHECK(h <= 1);
  }
}

TEST_CASE("by-coeffs streams are sorted, canonical, and monotone in height") {
  const auto h2 = enumerate_maps(config("2", 2, 3, "by-coeffs"));
  const auto h3 = enumerate_maps(config("2", 3, 3, "by-coeffs"));
  CHECK(h2.size() == 3376);
  CHECK(std::is_sorted(h2.begin(), h2.end(), tuple_less));
  const auto w2 = wires(h2), w3 = wires(h3);
  CHECK(w2.size() == h2.size());  // no duplicates
  CHECK(std::includes(w3.begin(), w3.end(), w2.begin(), w2.end()));
  CHECK(w3.size() > w2.size());

  // the stream holds the expected family members
  CHECK(w2.count(psi3(Rat(1)).map.wire()) == 1);
  const auto w23 = wires(enumerate_maps(config("2,3", 2, 3, "by-coeffs")));
  CHECK(w23.count(psi3(Rat(2)).map.wire()) == 1);
}

TEST_CASE("by-cycles finds every normalized-shape cycle the box scan finds") {
  const auto coeff = enumerate_maps(config("2", 2, 3, "by-coeffs"));
  const auto cyc = wires(enumerate_maps(config("2", 2, 3, "by-cycles")));
  long shaped = 0;
  for (const RationalMap& m : coeff)
    for (const Cycle& c : cycles_of_exact_period(m, 3))
      for (unsigned rot = 0; rot < 3; ++rot)
        if (c[rot] == kZero && c[(rot + 1) % 3] == kInf &&
            c[(rot + 2) % 3] == kOne) {
          ++shaped;
          CHECK(cyc.count(m.wire()) == 1);
        }
  CHECK(shaped == 10);
  CHECK(cyc.size() == 10);  // nothing beyond the shape-matching maps either
}

TEST_CASE("by-cycles stream contains the psi3 family within the box") {
  const auto got = wires(enumerate_maps(config("2,3", 3, 3, "by-cycles")));
  long checked = 0;
  for (const Rat& a : enumerate_s_units(PlaceSet::parse("2,3"), 2)) {
    const RationalMap m = psi3(a).map;
    Int h = 0;
    for (const Int& c : m.F.c) h = std::max(h, Int(abs(c)));
    for (const Int& c : m.G.c) h = std::max(h, Int(abs(c)));
    if (h > 3) continue;
    ++checked;
    CHECK(got.count(m.wire()) == 1);
  }
  CHECK(checked >= 8);  // a in {1,-1,2,-2,3,-3,1/2,...} fit the box
}

TEST_CASE("by-cycles members lie in the same-height coefficient box") {
  const auto sub = wires(enumerate_maps(config("2,3", 3, 4, "by-cycles")));
  const auto super = wires(enumerate_maps(config("2,3", 3, 4, "by-coeffs")));
  CHECK(std::includes(super.begin(), super.end(), sub.begin(), sub.end()));
}

TEST_CASE("harvest_cycles frozen examples") {
  const auto p = harvest_cycles(psi3(Rat(2)).map, 4);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == Cycle::of({kZero, kInf, kOne}));

  const auto q = harvest_cycles(phi4(Rat(3)).map, 4);
  REQUIRE(q.size() == 1);
  CHECK(q[0] ==
        Cycle::of({kZero, ProjPoint::of(3, 1), kInf, ProjPoint::of(2, 1)}));

  const RationalMap sq = make_map(BinaryForm({Int(1), Int(0), Int(0)}),
                                  BinaryForm({Int(0), Int(0), Int(1)}));
  const auto s = harvest_cycles(sq, 6);
  REQUIRE(s.size() == 3);
  for (const Cycle& c : s) CHECK(c.length() == 1);
}

TEST_CASE("small by-cycles census: counts, soundness, checks") {
  const CensusResult r = run_census(config("2,3", 3, 5, "by-cycles"));
  CHECK(r.records.size() == 52);
  CHECK(r.classes.size() == 38);
  CHECK(r.unclassified.empty());
  CHECK(count_fsc(r) == 26);
  const auto cyc = cycle_counts(r);
  CHECK(cyc.at(1) == 2);
  CHECK(cyc.at(2) == 2);
  CHECK(cyc.at(3) == 51);
  CHECK(cyc.at(4) == 3);

  CHECK(std::is_sorted(r.records.begin(), r.records.end(),
                       [](const CensusRecord& a, const CensusRecord& b) {
                         return tuple_less(a.map, b.map);
                       }));

  for (const CensusRecord& rec : r.records) {
    CHECK(good_outside(rec.map, r.config.s));
    for (const Cycle& c : rec.cycles) CHECK(is_cycle(rec.map, c));
    CHECK(rec.checks.prop61);
    CHECK(rec.checks.mobius_bound);
    bool has34 = false, has3 = false;
    for (const Cycle& c : rec.cycles) {
      has34 = has34 || c.length() == 3 || c.length() == 4;
      has3 = has3 || c.length() == 3;
    }
    CHECK(rec.checks.n34.has_value() == has34);
    if (rec.checks.n34) CHECK(*rec.checks.n34);
    CHECK(rec.checks.prop_n3_branch.has_value() == has3);
    if (rec.checks.prop_n3_branch) {
      const std::string& b = *rec.checks.prop_n3_branch;
      CHECK((b == "branch-i" || b == "branch-ii" || b == "branch-iii" ||
             b == "finite-set-candidate"));
    }
  }

  // cycles are re-derivable: stored harvest equals a fresh one
  const CensusRecord& first = r.records.front();
  CHECK(first.map.wire() == "1,-3,2;1,-3,0");
  CHECK(first.cycles == harvest_cycles(first.map, r.config.max_period));
  CHECK(first.class_id == "c0");
  CHECK(*first.checks.prop_n3_branch == "branch-iii");
  CHECK(r.records[1].map.wire() == "1,-3,2;1,0,0");
  CHECK(*r.records[1].checks.prop_n3_branch == "branch-ii");
}

TEST_CASE("classification groups conjugates and separates the rest") {
  const CensusConfig cfg = config("2,3", 8, 4, "by-cycles");

  SUBCASE("a map and its unimodular conjugate share a class") {
    const RationalMap m = psi3(Rat(1)).map;
    const RationalMap conj = conjugate_map(m, Mobius::of(1, 1, 0, 1));
    CensusResult r = assemble({m, conj}, cfg);
    verify_all(r);
    classify(r);
    CHECK(r.classes.size() == 1);
    CHECK(r.records[0].class_id == "c0");
    CHECK(r.records[1].class_id == "c0");
    CHECK(r.classes[0].members == std::vector<std::size_t>{0, 1});
    // representative is the lexicographically least member tuple
    CHECK(r.classes[0].representative ==
          (tuple_less(r.records[0].map, r.records[1].map) ? r.records[0].map
                                                          : r.records[1].map));
    CHECK(r.classes[0].representative == r.records.front().map);
  }

  SUBCASE("psi3(1) and psi3(-1) merge; psi3(2) stays apart") {
    CensusResult r = assemble(
        {psi3(Rat(1)).map, psi3(Rat(-1)).map, psi3(Rat(2)).map}, cfg);
    verify_all(r);
    classify(r);
    // sorted records: psi3(-1) = 1,-2,1 then psi3(1) = 1,0,-1 then psi3(2)
    CHECK(r.records[0].map.wire() == "1,-2,1;1,0,0");
    CHECK(r.records[1].map.wire() == "1,0,-1;1,0,0");
    CHECK(r.records[2].map.wire() == "2,-1,-1;2,0,0");
    REQUIRE(r.classes.size() == 2);
    CHECK(r.classes[0].members == std::vector<std::size_t>{0, 1});
    CHECK(r.classes[1].members == std::vector<std::size_t>{2});
    CHECK(r.records[0].class_id == "c0");
    CHECK(r.records[1].class_id == "c0");
    CHECK(r.records[2].class_id == "c1");
  }

  SUBCASE("different cycle lengths cannot merge") {
    CensusResult r = assemble({psi3(Rat(1)).map, phi4(Rat(3)).map},
                              config("2,3,5", 8, 4, "by-cycles"));
    verify_all(r);
    classify(r);
    CHECK(r.classes.size() == 2);
    CHECK(r.unclassified.empty());
  }

  SUBCASE("records without length >= 3 cycles are set aside") {
    const RationalMap sq = make_map(BinaryForm({Int(1), Int(0), Int(0)}),
                                    BinaryForm({Int(0), Int(0), Int(1)}));
    CensusResult r = assemble({sq, psi3(Rat(1)).map}, cfg);
    verify_all(r);
    classify(r);
    CHECK(r.classes.size() == 1);
    REQUIRE(r.unclassified.size() == 1);
    CHECK(r.records[r.unclassified[0]].map == sq);
    CHECK(r.records[r.unclassified[0]].class_id == "unclassified");
  }
}

TEST_CASE("by-coeffs census over the empty set classifies the 3-cycle maps") {
  const CensusResult r = run_census(config("", 1, 4, "by-coeffs"));
  CHECK(r.records.size() == 156);
  CHECK(r.classes.size() == 1);
  CHECK(r.unclassified.size() == 152);
  const auto cyc = cycle_counts(r);
  CHECK(cyc.at(1) == 144);
  CHECK(cyc.at(2) == 46);
  CHECK(cyc.at(3) == 4);
  CHECK(r.classes[0].members.size() == 4);
  CHECK(r.classes[0].representative.wire() == "0,0,1;-1,0,1");
  // psi3(1) is one of the four members of the single class
  bool seen = false;
  for (const std::size_t i : r.classes[0].members)
    seen = seen || r.records[i].map.wire() == psi3(Rat(1)).map.wire();
  CHECK(seen);
}

TEST_CASE("verification failures are hard errors") {
  const CensusConfig cfg = config("2,3", 8, 4, "by-cycles");

  SUBCASE("bad reduction outside S") {
    CensusResult r = assemble({psi3(Rat(5)).map}, config("2", 8, 4, "by-cycles"));
    CHECK_THROWS_AS(verify_all(r), verification_error);
  }

  SUBCASE("tampered cycle") {
    CensusResult r = assemble({psi3(Rat(1)).map}, cfg);
    r.records[0].cycles[0] =
        Cycle::of({kZero, kInf, ProjPoint::of(5, 7)});
    CHECK_THROWS_AS(verify_all(r), verification_error);
  }

  SUBCASE("clean data passes") {
    CensusResult r = assemble({psi3(Rat(1)).map}, cfg);
    CHECK_NOTHROW(verify_all(r));
    CHECK(r.records[0].checks.prop61);
    CHECK(r.records[0].checks.mobius_bound);
    REQUIRE(r.records[0].checks.n34.has_value());
    CHECK(*r.records[0].checks.n34);
    REQUIRE(r.records[0].checks.prop_n3_branch.has_value());
    CHECK(*r.records[0].checks.prop_n3_branch == "branch-ii");
  }
}

TEST_CASE("report schema and summary bookkeeping") {
  const CensusResult r = run_census(config("2,3", 3, 5, "by-cycles"));
  const std::string text = report_json(r);
  const nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);

  const std::vector<std::string> top{"config", "records", "classes",
                                     "summary"};
  REQUIRE(doc.size() == top.size());
  std::size_t at = 0;
  for (auto it = doc.begin(); it != doc.end(); ++it, ++at)
    CHECK(it.key() == top[at]);

  CHECK(doc["config"]["s"] == nlohmann::ordered_json::array({2, 3}));
  CHECK(doc["config"]["height"] == 3);
  CHECK(doc["config"]["strategy"] == "by-cycles");
  CHECK(doc["config"]["max_period"] == 5);

  REQUIRE(doc["records"].size() == r.records.size());
  const auto& rec = doc["records"][0];
  CHECK(rec["map"] == nlohmann::ordered_json::parse("[[1,-3,2],[1,-3,0]]"));
  CHECK(rec["disc"] == "4");
  REQUIRE(rec["cycles"].size() == 1);
  CHECK(rec["cycles"][0]["period"] == 3);
  CHECK(rec["cycles"][0]["points"] ==
        nlohmann::ordered_json::parse(
            R"([["0","1"],["1","0"],["1","1"]])"));
  CHECK(rec["class_id"] == "c0");
  CHECK(rec["checks"]["prop61"] == true);
  CHECK(rec["checks"]["mobius_bound"] == true);
  CHECK(rec["checks"]["n34"] == true);
  CHECK(rec["checks"]["prop_n3_branch"] == "branch-iii");

  // every stored check value round-trips; nulls appear exactly when no
  // qualifying cycle exists
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& jr = doc["records"][i];
    CHECK(jr["checks"]["n34"].is_null() == !r.records[i].checks.n34);
    CHECK(jr["checks"]["prop_n3_branch"].is_null() ==
          !r.records[i].checks.prop_n3_branch);
  }

  REQUIRE(doc["classes"].size() == r.classes.size());
  CHECK(doc["classes"][0]["id"] == "c0");
  CHECK(doc["classes"][0]["size"] == r.classes[0].members.size());

  const auto& sum = doc["summary"];
  CHECK(sum["records"] == 52);
  CHECK(sum["classes"] == 38);
  CHECK(sum["unclassified"] == 0);
  CHECK(sum["finite_set_candidates"] == 26);
  CHECK(sum["cycles_per_period"] ==
        nlohmann::ordered_json::parse(
            R"({"1":2,"2":2,"3":51,"4":3,"5":0})"));
  std::map<unsigned, std::set<std::string>> per;
  for (const CensusRecord& cr : r.records)
    for (const Cycle& c : cr.cycles)
      if (cr.class_id != "unclassified")
        per[static_cast<unsigned>(c.length())].insert(cr.class_id);
  for (unsigned n = 1; n <= 5; ++n)
    CHECK(sum["classes_per_period"][std::to_string(n)] ==
          (per.count(n) ? per[n].size() : 0));
}

TEST_CASE("empty and single-record reports are valid documents") {
  CensusResult empty;
  empty.config = config("2", 2, 3, "by-cycles");
  const auto doc = nlohmann::ordered_json::parse(report_json(empty));
  CHECK(doc["records"].empty());
  CHECK(doc["classes"].empty());
  CHECK(doc["summary"]["records"] == 0);
  CHECK(doc["summary"]["classes"] == 0);

  CensusResult one = assemble({psi3(Rat(1)).map}, config("2,3", 8, 3, "by-cycles"));
  verify_all(one);
  classify(one);
  const auto jd = nlohmann::ordered_json::parse(report_json(one));
  REQUIRE(jd["records"].size() == 1);
  CHECK(jd["records"][0]["map"] ==
        nlohmann::ordered_json::parse("[[1,0,-1],[1,0,0]]"));
  CHECK(jd["summary"]["records"] == 1);
  CHECK(jd["summary"]["classes"] == 1);
}

TEST_CASE("reports are byte-identical across re-runs and worker counts") {
  const std::string a = report_json(run_census(config("2,3", 4, 4, "by-cycles", 1)));
  const std::string b = report_json(run_census(config("2,3", 4, 4, "by-cycles", 1)));
  const std::string c = report_json(run_census(config("2,3", 4, 4, "by-cycles", 3)));
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.size() > 1000);
}

TEST_CASE("period-4 class count over S={2} plateaus between heights 6 and 8") {
  auto classes_with_period4 = [](const CensusResult& r) {
    std::set<std::string> ids;
    for (const CensusRecord& rec : r.records)
      for (const Cycle& c : rec.cycles)
        if (c.length() == 4 && rec.class_id != "unclassified")
          ids.insert(rec.class_id);
    return ids.size();
  };
  const CensusResult h6 = run_census(config("2", 6, 6, "by-cycles"));
  const CensusResult h8 = run_census(config("2", 8, 6, "by-cycles"));
  CHECK(h6.records.size() == 37);
  CHECK(h8.records.size() == 44);
  CHECK(h6.classes.size() == 13);
  CHECK(h8.classes.size() == 17);
  CHECK(classes_with_period4(h6) == classes_with_period4(h8));
  CHECK(classes_with_period4(h8) == 0);  // regression pin: none exist there
  CHECK(count_fsc(h6) == 12);
  CHECK(count_fsc(h8) == 12);
}

TEST_CASE("default-config census regression pins") {
  const CensusResult r = run_census(config("2,3", 8, 6, "by-cycles"));
  CHECK(r.records.size() == 317);
  CHECK(r.classes.size() == 160);
  CHECK(r.unclassified.empty());
  CHECK(count_fsc(r) == 208);
  const auto cyc = cycle_counts(r);
  CHECK(cyc.at(1) == 21);
  CHECK(cyc.at(2) == 11);
  CHECK(cyc.at(3) == 297);
  CHECK(cyc.at(4) == 23);
  CHECK(cyc.count(5) == 0);
  CHECK(cyc.count(6) == 0);
}

TEST_CASE("verify_report accepts faithful documents and flags edits") {
  const std::string text = report_json(run_census(config("2,3", 3, 4, "by-cycles")));

  SUBCASE("faithful") {
    const ReportCheck ok = verify_report(text);
    CHECK(ok.ok);
    CHECK(ok.violations.empty());
  }

  SUBCASE("reformatting does not matter") {
    const auto doc = nlohmann::json::parse(text);
    CHECK(verify_report(doc.dump(4)).ok);
  }

  SUBCASE("tampered disc") {
    auto doc = nlohmann::ordered_json::parse(text);
    doc["records"][0]["disc"] = "999";
    const ReportCheck bad = verify_report(doc.dump(2));
    CHECK_FALSE(bad.ok);
    REQUIRE(!bad.violations.empty());
    CHECK(bad.violations[0].find("records") != std::string::npos);
  }

  SUBCASE("tampered summary") {
    auto doc = nlohmann::ordered_json::parse(text);
    doc["summary"]["classes"] = 1;
    const ReportCheck bad = verify_report(doc.dump(2));
    CHECK_FALSE(bad.ok);
    bool names_summary = false;
    for (const std::string& v : bad.violations)
      names_summary = names_summary || v.find("summary") != std::string::npos;
    CHECK(names_summary);
  }

  SUBCASE("garbage input") {
    const ReportCheck bad = verify_report("not json at all {");
    CHECK_FALSE(bad.ok);
    REQUIRE(!bad.violations.empty());
    CHECK(bad.violations[0].find("parse") != std::string::npos);
  }
}
