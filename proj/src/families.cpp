#include "qdyn/families.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "qdyn/reduction.hpp"

namespace qdyn {

namespace {

bool is_cycle_of(const RationalMap& m, const std::vector<ProjPoint>& pts) {
  return is_cycle(m, Cycle::of(pts));
}

}  // namespace

FamilyMember phi4(const Rat& a) {
  if (a == 0 || a == -2 || a == 2 || a == 4)
    throw std::domain_error("phi4: parameter in the excluded set {0,-2,2,4}");
  const Rat a2 = a * a;
  // (X - 2Y)(4X - a^2 Y) and 2(X - aY)(X - Y), expanded.
  FamilyMember fm{"phi4",
                  {a},
                  make_map({Rat(4), -(a2 + 8), 2 * a2},
                           {Rat(2), -2 * (a + 1), 2 * a})};
  if (!is_cycle_of(fm.map, {ProjPoint::of(0, 1), ProjPoint::affine(a),
                            ProjPoint::infinity(), ProjPoint::of(2, 1)}))
    throw std::logic_error("phi4: marked 4-cycle lost");
  return fm;
}

FamilyMember psi3(const Rat& a) {
  if (a == 0) throw std::domain_error("psi3: parameter must be nonzero");
  return FamilyMember{"psi3",
                      {a},
                      make_map({a, 1 - a, Rat(-1)}, {a, Rat(0), Rat(0)})};
}

FamilyMember nf3(const Rat& a, const Rat& c) {
  const QuadNormalForm nf{Rat(1), a, Rat(1), c};
  if (!nf.valid())
    throw std::domain_error("nf3: parameters give no degree-2 map");
  return FamilyMember{"nf3", {a, c}, nf.map()};
}

Int phi4_bad_bound(const Rat& a) {
  if (a == 0 || a == -2 || a == 2 || a == 4)
    throw std::domain_error("phi4_bad_bound: parameter in the excluded set");
  const Int n = a.get_num(), d = a.get_den();
  return abs(2 * d * n * (n - 4 * d) * (n * n - 4 * d * d));
}

bool curve_C_contains(const Rat& a, const Rat& t) {
  return 2 * t * t - a * a * t + 3 * a * t - 4 * t + a * a - 4 * a == 0;
}

Period2CurveReport period2_points_on_C(const Rat& a) {
  const FamilyMember fm = phi4(a);
  Period2CurveReport rep;
  for (const ProjPoint& p : periodic_points(fm.map, 2)) {
    if (p.is_infinity()) continue;
    const Rat t = p.affine_coord();
    if (!curve_C_contains(a, t))
      throw std::logic_error("period2_points_on_C: period-2 point off C");
    rep.period2.push_back(t);
  }
  // Rational points of C at this a: roots of 2t^2 + (3a - a^2 - 4)t
  // + (a^2 - 4a); the leading coefficient never vanishes.
  const Rat c1 = 3 * a - a * a - 4, c0 = a * a - 4 * a;
  const Int den = lcm(c1.get_den(), c0.get_den());
  const BinaryForm q(
      {2 * den, Rat(c1 * den).get_num(), Rat(c0 * den).get_num()});
  for (const FormRoot& root : rational_roots(q)) {
    const Rat t = root.point.affine_coord();
    if (std::find(rep.period2.begin(), rep.period2.end(), t) ==
        rep.period2.end())
      rep.curve_only.push_back(t);
  }
  return rep;
}

N3Classification classify_prop_n3(const Rat& a, const Rat& c,
                                  const PlaceSet& s) {
  if (!is_s_unit(a, s) || !is_s_unit(a + c, s))
    throw std::domain_error(
        "classify_prop_n3: a and a+c must be S-units (part 1)");
  N3Classification out;
  if (a == -1) out.matches.push_back("branch-i");
  if (c == 0) out.matches.push_back("branch-ii");
  if (c == 1 - a) out.matches.push_back("branch-iii");
  out.primary = out.matches.empty() ? "finite-set-candidate" : out.matches[0];
  return out;
}

EndpReport endp_count(const Rat& a, const PlaceSet& s, unsigned bound) {
  const FamilyMember base = psi3(a);
  EndpReport rep{a, {}};
  for (const Rat& b : enumerate_s_units(s, bound)) {
    const auto out = conjugacy_via_cycles(base.map, psi3(b).map, 3);
    if (out.status == ConjugacyStatus::witness) rep.equivalent_b.push_back(b);
  }
  if (rep.equivalent_b.size() > 6)
    throw std::logic_error("endp_count: more than six equivalent parameters");
  return rep;
}

EngrReport engr_equivalent_b(const Rat& a, const PlaceSet& s) {
  const FamilyMember fm = phi4(a);  // validates the parameter
  const std::vector<ProjPoint> tup{ProjPoint::of(0, 1), ProjPoint::affine(a),
                                   ProjPoint::infinity(), ProjPoint::of(2, 1)};
  // The target slots 0, 2, 3 are fixed; a rotation pins the witness on
  // three points and the image of slot 1 is the only possible b.
  const Mobius to_target = mobius_to_zero_inf_one(
      ProjPoint::of(0, 1), ProjPoint::infinity(), ProjPoint::of(2, 1));
  std::set<Rat> all, good;
  for (unsigned r = 0; r < 4; ++r) {
    const Mobius from_source = mobius_to_zero_inf_one(
        tup[r % 4], tup[(r + 2) % 4], tup[(r + 3) % 4]);
    const Mobius w = to_target.inverse() * from_source;
    const ProjPoint image = w(tup[(r + 1) % 4]);
    if (image.is_infinity()) continue;
    const Rat b = image.affine_coord();
    all.insert(b);
    if (has_good_reduction(w, s)) good.insert(b);
  }
  EngrReport rep;
  rep.all_b.assign(all.begin(), all.end());
  rep.good_b.assign(good.begin(), good.end());
  rep.matches_two = rep.all_b.size() == 2;
  return rep;
}

M1BridgeReport m1_bridge_check() {
  const Mobius b = Mobius::of(1, -1, 1, 0);
  std::vector<Rat> samples;
  for (long num = -7; num <= 7 && samples.size() < 25; ++num) {
    if (num == 0) continue;
    samples.push_back(Rat(num));
    if (samples.size() < 25) samples.push_back(make_rat(num, 2));
  }
  M1BridgeReport rep;
  rep.all_hold = true;
  for (const Rat& v : samples) {
    const RationalMap lhs = conjugate_map(
        make_map({Rat(1), Rat(-2), Rat(1)}, {Rat(1), -(v + 1), Rat(0)}), b);
    if (!maps_equal(lhs, psi3(-1 / v).map)) rep.all_hold = false;
    ++rep.first_checked;
  }
  for (const Rat& a : samples) {
    const RationalMap lhs =
        conjugate_map(nf3(a, 1 - a).map, b.inverse());
    if (!maps_equal(lhs, psi3(-1 / a).map)) rep.all_hold = false;
    ++rep.second_checked;
  }
  return rep;
}

}  // namespace qdyn
