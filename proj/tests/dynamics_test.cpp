#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qdyn/dynamics.hpp"

using namespace qdyn;

namespace {

std::mt19937_64 rng(47);

// [(X-Y)(aX+Y) : aX^2]; carries the 3-cycle [0:1] -> [1:0] -> [1:1].
RationalMap psi3i(const Int& a) {
  return make_map(multiply(BinaryForm({1, -1}), BinaryForm({a, 1})),
                  BinaryForm({a, 0, 0}));
}

// [(X-2Y)(4X-a^2 Y) : 2(X-aY)(X-Y)] at integer a; 4-cycle through
// [0:1],[a:1],[1:0],[2:1] when nondegenerate.
RationalMap phi4i(const Int& a) {
  return make_map(multiply(BinaryForm({1, -2}), BinaryForm({4, -(a * a)})),
                  scale(multiply(BinaryForm({1, -a}), BinaryForm({1, -1})), 2));
}

RationalMap random_map(int h = 9) {
  std::uniform_int_distribution<int> d(-h, h);
  while (true) {
    try {
      return make_map(BinaryForm({d(rng), d(rng), d(rng)}),
                      BinaryForm({d(rng), d(rng), d(rng)}));
    } catch (const std::domain_error&) {
    }
  }
}

Mobius random_mobius() {
  std::uniform_int_distribution<int> d(-9, 9);
  while (true) {
    Int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (a * e - b * c != 0) return Mobius::of(a, b, c, e);
  }
}

// Product of unit-triangular matrices and an S-unit diagonal: always in
// PGL_2(R_S).
Mobius random_good_mobius(const PlaceSet& s) {
  std::uniform_int_distribution<int> d(-4, 4);
  std::uniform_int_distribution<int> e(0, 2);
  Mobius m = Mobius::of(1, d(rng), 0, 1) * Mobius::of(1, 0, d(rng), 1) *
             Mobius::of(1, d(rng), 0, 1);
  Int u(1);
  for (const Int& p : s.primes()) u *= int_pow(p, e(rng));
  return m * Mobius::of(u, 0, 0, 1);
}

ProjPoint random_point() {
  std::uniform_int_distribution<int> d(-20, 20);
  while (true) {
    Int x = d(rng), y = d(rng);
    if (x != 0 || y != 0) return ProjPoint::of(x, y);
  }
}

const ProjPoint kZero = ProjPoint::of(0, 1);
const ProjPoint kInf = ProjPoint::infinity();
const ProjPoint kOne = ProjPoint::of(1, 1);

Cycle pp0_cycle() { return Cycle::of({kZero, kInf, kOne}); }

Cycle engr_cycle() {
  return Cycle::of({kZero, ProjPoint::of(3, 1), kInf, ProjPoint::of(2, 1)});
}

// Mobius count bound on exact-period-n points of a degree-d map.
long mobius_bound(unsigned d, unsigned n) {
  if (n == 1) return d + 1;
  long b = 0;
  for (unsigned k = 1; k <= n; ++k)
    if (n % k == 0) b += moebius(n / k) * static_cast<long>(int_pow(d, k).get_si());
  return b;
}

}  // namespace

TEST_CASE("map construction and canonical form") {
  RationalMap m = make_map(BinaryForm({2, 0, 0}), BinaryForm({0, 0, 2}));
  CHECK(m.F == BinaryForm({1, 0, 0}));
  CHECK(m.G == BinaryForm({0, 0, 1}));
  CHECK(m.res == 1);
  CHECK(m.degree() == 2);
  // sign rides the first nonzero coefficient of F then G
  RationalMap neg = make_map(BinaryForm({-3, 0, 3}), BinaryForm({-3, 0, 0}));
  CHECK(neg == psi3i(1));
  CHECK(psi3i(1).res == 1);
  CHECK(phi4i(1).res == 36);

  CHECK_THROWS_AS(make_map(BinaryForm({1, 0, 0}), BinaryForm({0, 1, 0})),
                  degenerate_error);  // Res(X^2, XY) = 0
  CHECK_THROWS_AS(make_map(BinaryForm({0, 0, 0}), BinaryForm({0, 0, 0})),
                  degenerate_error);
  CHECK_THROWS_AS(make_map(BinaryForm({1, 0}), BinaryForm({1, 0, 0})),
                  std::domain_error);
  CHECK_THROWS_AS(make_map(BinaryForm({2}), BinaryForm({3})),
                  std::domain_error);

  CHECK(psi3i(1).wire() == "1,0,-1;1,0,0");
  CHECK(psi3i(1).str() == "[x^2 - y^2 : x^2]");
  CHECK(parse_map("1,0,-1;1,0,0") == psi3i(1));
  CHECK(parse_map("2,0,-2;2,0,0") == psi3i(1));
  CHECK(parse_map("1/2,0,-1/2;1/2,0,0") == psi3i(1));
  CHECK(parse_map(phi4i(3).wire()) == phi4i(3));
  CHECK_THROWS_AS(parse_map("1,0,1"), std::domain_error);
  CHECK_THROWS_AS(parse_map("1,0;1,0,0"), std::domain_error);
  CHECK_THROWS_AS(parse_map("1,0,x;1,0,0"), std::domain_error);
}

TEST_CASE("applying a map walks the pp0 cycle") {
  RationalMap m = psi3i(1);
  CHECK(apply_map(m, kZero) == kInf);
  CHECK(apply_map(m, kInf) == kOne);
  CHECK(apply_map(m, kOne) == kZero);
  CHECK(apply_map(m, ProjPoint::of(2, 1)) == ProjPoint::of(3, 4));
}

TEST_CASE("iterates") {
  RationalMap m = psi3i(1);
  CHECK(power_map(m, 1) == m);
  CHECK(power_map(m, 2).degree() == 4);
  CHECK(apply_map(power_map(m, 3), kZero) == kZero);

  // tracked resultant equals the directly eliminated one
  for (int t = 0; t < 10; ++t) {
    RationalMap r = random_map(6);
    RationalMap r2 = power_map(r, 2);
    CHECK(r2.res == resultant(r2.F, r2.G));
  }
  RationalMap r3 = power_map(psi3i(2), 3);
  CHECK(r3.res == resultant(r3.F, r3.G));

  // semigroup law, exactly as maps and pointwise
  RationalMap r = random_map(5);
  RationalMap p2 = power_map(r, 2), p3 = power_map(r, 3);
  CHECK(power_map(r, 5) ==
        make_map(compose(p2.F, p3.F, p3.G), compose(p2.G, p3.F, p3.G)));
  for (int t = 0; t < 20; ++t) {
    ProjPoint p = random_point();
    CHECK(apply_map(p3, apply_map(p2, p)) == apply_map(power_map(r, 5), p));
  }

  CHECK_THROWS_AS(power_map(psi3i(1), 17), budget_error);  // 2^17 > budget
  CHECK_THROWS_AS(power_map(psi3i(1), 0), std::domain_error);
}

TEST_CASE("conjugation") {
  RationalMap m = psi3i(2);
  CHECK(conjugate_map(m, Mobius::identity()) == m);

  // pointwise law: conj(A) after A equals A after the map
  for (int t = 0; t < 100; ++t) {
    RationalMap r = random_map(5);
    Mobius a = random_mobius();
    ProjPoint p = random_point();
    CHECK(apply_map(conjugate_map(r, a), a(p)) == a(apply_map(r, p)));
  }
  // conjugating back recovers the map
  for (int t = 0; t < 20; ++t) {
    RationalMap r = random_map(6);
    Mobius a = random_mobius();
    CHECK(conjugate_map(conjugate_map(r, a), a.inverse()) == r);
  }

  // [(X-Y)^2 : X(X-2Y)] conjugated by (1 -1 / 1 0) lands on psi3(-1)
  RationalMap v1 = make_map(BinaryForm({1, -2, 1}),
                            multiply(BinaryForm({1, 0}), BinaryForm({1, -2})));
  CHECK(conjugate_map(v1, Mobius::of(1, -1, 1, 0)) == psi3i(-1));

  // good reduction outside S is invariant under PGL_2(R_S)
  PlaceSet s = PlaceSet::parse("2,3");
  for (int t = 0; t < 40; ++t) {
    RationalMap r = random_map(8);
    Mobius a = random_good_mobius(s);
    REQUIRE(has_good_reduction(a, s));
    CHECK(is_s_unit(Rat(r.res), s) ==
          is_s_unit(Rat(conjugate_map(r, a).res), s));
  }
}

TEST_CASE("orbits") {
  OrbitResult o = orbit(psi3i(1), kZero);
  CHECK(o.tail.empty());
  REQUIRE(o.cycle.has_value());
  CHECK(o.cycle->points == std::vector<ProjPoint>{kZero, kInf, kOne});

  OrbitResult e = orbit(phi4i(3), kZero);
  CHECK(e.tail.empty());
  REQUIRE(e.cycle.has_value());
  CHECK(*e.cycle == engr_cycle());

  // [-1:1] falls onto the cycle after one step
  OrbitResult t = orbit(psi3i(1), ProjPoint::of(-1, 1));
  CHECK(t.tail == std::vector<ProjPoint>{ProjPoint::of(-1, 1)});
  REQUIRE(t.cycle.has_value());
  CHECK(t.cycle->length() == 3);

  // heights explode along a wandering orbit; budget runs out
  OrbitResult w = orbit(psi3i(1), ProjPoint::of(2, 1), 3);
  CHECK_FALSE(w.cycle.has_value());
  CHECK(w.tail.size() == 4);

  RationalMap sq = make_map(BinaryForm({1, 0, 0}), BinaryForm({0, 0, 1}));
  OrbitResult f = orbit(sq, kOne);
  REQUIRE(f.cycle.has_value());
  CHECK(f.cycle->length() == 1);

  CHECK_THROWS_AS(orbit(sq, kOne, 0), std::domain_error);
}

TEST_CASE("exact-period points") {
  RationalMap p1 = psi3i(1);
  CHECK(periodic_points(p1, 1).empty());
  CHECK(periodic_points(p1, 2).empty());
  CHECK(periodic_points(p1, 3) == std::vector<ProjPoint>{kZero, kInf, kOne});
  CHECK(periodic_points(p1, 4).empty());

  RationalMap f3 = phi4i(3);
  CHECK(periodic_points(f3, 1).empty());
  CHECK(periodic_points(f3, 2).empty());
  CHECK(periodic_points(f3, 3).empty());
  CHECK(periodic_points(f3, 4) ==
        std::vector<ProjPoint>{kZero, kInf, ProjPoint::of(2, 1),
                               ProjPoint::of(3, 1)});

  // [X^2 : Y^2]: three fixed points, none of exact period 2
  RationalMap sq = make_map(BinaryForm({1, 0, 0}), BinaryForm({0, 0, 1}));
  CHECK(periodic_points(sq, 1) == std::vector<ProjPoint>{kZero, kInf, kOne});
  CHECK(periodic_points(sq, 2).empty());

  // x^2 - 1: fixed [1:0], and {0, -1} meets the n = 2 bound exactly
  RationalMap x21 = make_map(BinaryForm({1, 0, -1}), BinaryForm({0, 0, 1}));
  CHECK(periodic_points(x21, 1) == std::vector<ProjPoint>{kInf});
  CHECK(periodic_points(x21, 2) ==
        std::vector<ProjPoint>{ProjPoint::of(-1, 1), kZero});
  CHECK(mobius_bound(2, 2) == 2);

  CHECK_THROWS_AS(periodic_points(p1, 17), budget_error);
}

TEST_CASE("exact periods partition the fixed points of iterates") {
  for (const RationalMap& m :
       {phi4i(3), psi3i(1), make_map(BinaryForm({1, 0, -1}), BinaryForm({0, 0, 1})),
        random_map(4)}) {
    const unsigned caps = 4;
    RationalMap p4 = power_map(m, caps);
    auto roots = rational_roots(sub(mul_y(p4.F), mul_x(p4.G)));
    std::vector<ProjPoint> unions;
    std::size_t total = 0;
    for (unsigned n : {1u, 2u, 4u}) {
      auto pp = periodic_points(m, n);
      CHECK(static_cast<long>(pp.size()) <= mobius_bound(2, n));
      total += pp.size();
      unions.insert(unions.end(), pp.begin(), pp.end());
    }
    std::sort(unions.begin(), unions.end());
    CHECK(unions.size() == total);  // pairwise disjoint
    std::vector<ProjPoint> rootpts;
    for (const auto& r : roots) rootpts.push_back(r.point);
    CHECK(unions == rootpts);  // rational_roots is sorted
  }
}

TEST_CASE("cycle recognition") {
  CHECK(is_cycle(psi3i(1), pp0_cycle()));
  CHECK(is_cycle(psi3i(1), Cycle::of({kInf, kOne, kZero})));
  CHECK_FALSE(is_cycle(psi3i(1), Cycle::of({kOne, kInf, kZero})));
  CHECK(is_cycle(phi4i(3), engr_cycle()));
  CHECK_FALSE(is_cycle(phi4i(3), pp0_cycle()));
  CHECK_THROWS_AS(Cycle::of({kZero, kZero}), std::domain_error);
  CHECK_THROWS_AS(Cycle::of({}), std::domain_error);
}

TEST_CASE("harvesting cycles") {
  auto c1 = cycles_of_exact_period(psi3i(1), 3);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].points == std::vector<ProjPoint>{kZero, kInf, kOne});

  auto c2 = cycles_of_exact_period(phi4i(3), 4);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0] == engr_cycle());

  CHECK(cycles_of_exact_period(phi4i(3), 3).empty());
}

TEST_CASE("quadratic interpolation") {
  auto q3 = interpolate_quadratic({{kZero, kInf}, {kInf, kOne}, {kOne, kZero}});
  CHECK(q3.basis.size() == 3);  // projective dimension 2
  CHECK(q3.maps.empty());       // every basis member alone is degenerate
  CHECK(interpolation_contains(q3, psi3i(1)));
  CHECK(interpolation_contains(q3, psi3i(2)));
  CHECK(interpolation_contains(q3, psi3i(-5)));
  CHECK_FALSE(interpolation_contains(q3, phi4i(3)));
  CHECK_FALSE(interpolation_contains(
      q3, make_map(BinaryForm({1, 0}), BinaryForm({0, 1}))));

  // five orbit constraints pin the map down uniquely
  RationalMap m = psi3i(1);
  auto q5 = interpolate_quadratic({{kZero, kInf},
                                   {kInf, kOne},
                                   {kOne, kZero},
                                   {ProjPoint::of(2, 1), ProjPoint::of(3, 4)},
                                   {ProjPoint::of(3, 4), ProjPoint::of(-7, 9)}});
  CHECK(q5.basis.size() == 1);
  REQUIRE(q5.maps.size() == 1);
  CHECK(q5.maps[0] == m);

  // contradictory images of one source leave no genuine map
  auto qc = interpolate_quadratic(
      {{kZero, kOne}, {kZero, kInf}, {kOne, kZero}, {kInf, kInf}});
  CHECK(qc.maps.empty());
  for (const auto& b : qc.basis)
    CHECK(resultant(BinaryForm({b[0], b[1], b[2]}),
                    BinaryForm({b[3], b[4], b[5]})) == 0);

  // re-interpolating five orbit pairs of a random map recovers it alone
  for (int t = 0; t < 20; ++t) {
    RationalMap r = random_map(7);
    std::vector<std::pair<ProjPoint, ProjPoint>> cs;
    std::set<ProjPoint> seen;
    int start = 0;
    while (cs.size() < 5) {
      ProjPoint p = ProjPoint::of(start, 1);
      ++start;
      for (int step = 0; step < 8 && cs.size() < 5; ++step) {
        if (seen.insert(p).second) cs.emplace_back(p, apply_map(r, p));
        p = apply_map(r, p);
      }
    }
    auto q = interpolate_quadratic(cs);
    REQUIRE(q.maps.size() == 1);
    CHECK(q.maps[0] == r);
    CHECK(q.basis.size() == 1);
  }

  CHECK_THROWS_AS(interpolate_quadratic({}), std::domain_error);
}

TEST_CASE("cycle ideals") {
  PlaceSet s2 = PlaceSet::parse("2");
  auto i1 = cycle_ideals(Cycle::of({kZero, ProjPoint::of(12, 1), kInf}), s2);
  REQUIRE(i1.size() == 2);
  CHECK(i1[0] == SIdeal{3});
  CHECK(i1[1] == SIdeal{1});

  for (const char* s : {"", "2", "2,3", "5,7"}) {
    auto id = cycle_ideals(pp0_cycle(), PlaceSet::parse(s));
    CHECK(id == std::vector<SIdeal>{SIdeal{1}, SIdeal{1}});
  }

  auto ie = cycle_ideals(engr_cycle(), PlaceSet{});
  CHECK(ie == std::vector<SIdeal>{SIdeal{3}, SIdeal{1}, SIdeal{2}});

  CHECK_THROWS_AS(cycle_ideals(Cycle::of({kZero}), PlaceSet{}),
                  std::domain_error);
}

TEST_CASE("cycle ideal laws") {
  CHECK(check_cycle_ideal_laws(psi3i(1), pp0_cycle(), PlaceSet::parse("2,3"))
            .all_hold());
  CHECK(check_cycle_ideal_laws(psi3i(1), pp0_cycle(), PlaceSet{}).all_hold());
  CHECK(check_cycle_ideal_laws(phi4i(3), engr_cycle(), PlaceSet::parse("2,3,5"))
            .all_hold());

  // 2-cycle of x^2 - 1 (good reduction everywhere, Res = 1)
  RationalMap x21 = make_map(BinaryForm({1, 0, -1}), BinaryForm({0, 0, 1}));
  CHECK(check_cycle_ideal_laws(
            x21, Cycle::of({kZero, ProjPoint::of(-1, 1)}), PlaceSet{})
            .all_hold());

  // conjugating by a good Moebius preserves the laws
  PlaceSet s = PlaceSet::parse("2,3,5");
  for (int t = 0; t < 10; ++t) {
    Mobius a = random_good_mobius(s);
    RationalMap m = conjugate_map(phi4i(3), a);
    std::vector<ProjPoint> pts;
    for (const ProjPoint& p : engr_cycle().points) pts.push_back(a(p));
    CHECK(check_cycle_ideal_laws(m, Cycle::of(pts), s).all_hold());
  }

  CHECK_THROWS_AS(check_cycle_ideal_laws(phi4i(3), engr_cycle(), PlaceSet{}),
                  std::domain_error);  // Res = 60 is no unit over S = {}
  CHECK_THROWS_AS(
      check_cycle_ideal_laws(psi3i(1), Cycle::of({kOne, kInf, kZero}),
                             PlaceSet::parse("7")),
      std::domain_error);  // reversed tuple is not a cycle of the map
}

TEST_CASE("tuple equivalence") {
  // a Moebius rotates any 3-cycle onto itself
  Cycle rot1 = Cycle::of({kInf, kOne, kZero});
  auto t1 = tuples_equivalent(pp0_cycle(), rot1, PlaceSet{});
  REQUIRE(t1.has_value());
  CHECK(t1->rotation == 0);
  CHECK(t1->map == Mobius::of(1, -1, 1, 0));
  CHECK(has_good_reduction(t1->map, PlaceSet{}));

  // no Moebius rotates the engr 4-cycle by one step; identity at h = 3
  Cycle er = Cycle::of({ProjPoint::of(3, 1), kInf, ProjPoint::of(2, 1), kZero});
  auto t2 = tuples_equivalent(engr_cycle(), er, PlaceSet{});
  REQUIRE(t2.has_value());
  CHECK(t2->rotation == 3);
  CHECK(t2->map == Mobius::identity());

  // S-dependence: the forced map has determinant 3
  Cycle a = pp0_cycle();
  Cycle b = Cycle::of({kZero, kInf, ProjPoint::of(3, 1)});
  CHECK_FALSE(tuples_equivalent(a, b, PlaceSet{}).has_value());
  CHECK_FALSE(tuples_equivalent(a, b, PlaceSet::parse("2")).has_value());
  auto t3 = tuples_equivalent(a, b, PlaceSet::parse("3"));
  REQUIRE(t3.has_value());
  CHECK(t3->rotation == 0);
  CHECK(t3->map == Mobius::of(3, 0, 0, 1));

  // witness property always holds when reported
  for (int t = 0; t < 10; ++t) {
    PlaceSet s = PlaceSet::parse("2,3");
    Mobius m = random_good_mobius(s);
    std::vector<ProjPoint> img;
    for (const ProjPoint& p : engr_cycle().points) img.push_back(m(p));
    auto w = tuples_equivalent(engr_cycle(), Cycle::of(img), s);
    REQUIRE(w.has_value());
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(w->map(engr_cycle()[j]) ==
            Cycle::of(img)[(w->rotation + j) % 4]);
  }

  CHECK_THROWS_AS(
      tuples_equivalent(pp0_cycle(), engr_cycle(), PlaceSet{}),
      std::domain_error);
  CHECK_THROWS_AS(tuples_equivalent(Cycle::of({kZero, kOne}),
                                    Cycle::of({kZero, kOne}), PlaceSet{}),
                  std::domain_error);
}

TEST_CASE("conjugacy through cycles") {
  // by construction: conjugates are recognized with a witness
  for (int t = 0; t < 5; ++t) {
    Mobius a = random_mobius();
    RationalMap m = psi3i(2);
    auto out = conjugacy_via_cycles(m, conjugate_map(m, a), 3);
    REQUIRE(out.status == ConjugacyStatus::witness);
    CHECK(conjugate_map(m, *out.map) == conjugate_map(m, a));
  }

  auto o1 = conjugacy_via_cycles(psi3i(1), psi3i(-1), 3);
  REQUIRE(o1.status == ConjugacyStatus::witness);
  CHECK(*o1.map == Mobius::of(0, 1, -1, 1));
  CHECK(conjugate_map(psi3i(1), *o1.map) == psi3i(-1));

  CHECK(conjugacy_via_cycles(psi3i(1), psi3i(2), 3).status ==
        ConjugacyStatus::refuted);
  // phi4(3) has no rational 3-cycle, so period 3 decides nothing
  CHECK(conjugacy_via_cycles(psi3i(1), phi4i(3), 3).status ==
        ConjugacyStatus::inconclusive);
  CHECK_THROWS_AS(conjugacy_via_cycles(psi3i(1), psi3i(1), 2),
                  std::domain_error);
}
