// Explicit parametrized families of quadratic maps and the verifiable
// claims attached to them.
//
//   phi4(a) = [(X - 2Y)(4X - a^2 Y) : 2(X - aY)(X - Y)]   a not in {0,-2,2,4}
//     carries the 4-cycle ([0:1], [a:1], [1:0], [2:1]) and has bad reduction
//     at every prime dividing 2 d n (n-4d)(n^2-4d^2), where a = n/d in
//     lowest terms.
//
//   psi3(a) = [(X - Y)(aX + Y) : aX^2]                    a != 0
//     carries the 3-cycle ([0:1], [1:0], [1:1]) and has good reduction
//     outside S whenever a is an S-unit (its resultant is a^2).
//
//   nf3(a, c) = [(X - Y)(aX + Y) : X(aX + cY)]
//     the period-3 normal form; psi3(a) is nf3(a, 0).
//
//   C: 2t^2 - a^2 t + 3at - 4t + a^2 - 4a = 0
//     every affine point [t:1] of exact period 2 for phi4(a) gives a point
//     (a, t) on C; the converse fails, and the report below exhibits both
//     directions.

#ifndef QDYN_FAMILIES_HPP
#define QDYN_FAMILIES_HPP

#include <string>
#include <vector>

#include "qdyn/dynamics.hpp"

namespace qdyn {

struct FamilyMember {
  std::string tag;          // "phi4" | "psi3" | "nf3"
  std::vector<Rat> params;
  RationalMap map;
};

FamilyMember phi4(const Rat& a);  // a in {0,-2,2,4} -> domain_error
FamilyMember psi3(const Rat& a);  // a = 0 -> domain_error
FamilyMember nf3(const Rat& a, const Rat& c);  // degenerate -> domain_error

// |2 d n (n-4d)(n^2-4d^2)| for a = n/d in lowest terms; every prime factor
// is a bad-reduction prime of phi4(a).
Int phi4_bad_bound(const Rat& a);

// Exact membership in C.
bool curve_C_contains(const Rat& a, const Rat& t);

struct Period2CurveReport {
  std::vector<Rat> period2;     // affine exact-period-2 parameters; all on C
  std::vector<Rat> curve_only;  // rational points of C at this a that are not
                                // of exact period 2 (the failed converse)
};
Period2CurveReport period2_points_on_C(const Rat& a);

// Branches of the period-3 classification, tested in order: a = -1
// ("branch-i"), c = 0 ("branch-ii"), c = 1 - a ("branch-iii"); maps outside
// all three land in "finite-set-candidate" (the residual finite set is
// ineffective, so membership is only ever a candidacy).  Requires a and
// a + c to be S-units.
struct N3Classification {
  std::string primary;               // first match, or finite-set-candidate
  std::vector<std::string> matches;  // every branch that holds
};
N3Classification classify_prop_n3(const Rat& a, const Rat& c,
                                  const PlaceSet& s);

// b among the S-units of exponent height <= bound whose psi3(b) is
// PGL_2(Q)-conjugate to psi3(a).  At most six such b can exist over Qbar;
// exceeding six is a logic error.
struct EndpReport {
  Rat a;
  std::vector<Rat> equivalent_b;
};
EndpReport endp_count(const Rat& a, const PlaceSet& s, unsigned bound);

// b whose marked 4-tuple ([0:1],[b:1],[1:0],[2:1]) is equivalent to the one
// of a under a rotation and a Moebius map.  all_b works over PGL_2(Q);
// good_b keeps witnesses lying in PGL_2(R_S).  matches_two records, without
// asserting, whether exactly two values of b were found.
struct EngrReport {
  std::vector<Rat> all_b;
  std::vector<Rat> good_b;
  bool matches_two{};
};
EngrReport engr_equivalent_b(const Rat& a, const PlaceSet& s);

// The two conjugation identities connecting the period-3 branches to psi3:
// with B = (1 -1; 1 0),
//   B [(X-Y)^2 : X(X-(v+1)Y)] B^{-1} = psi3(-1/v)
//   B^{-1} [(X-Y)(aX+Y) : X(aX+(1-a)Y)] B = psi3(-1/a)
// checked exactly for 25 sampled nonzero values each.
struct M1BridgeReport {
  unsigned first_checked{}, second_checked{};
  bool all_hold{};
};
M1BridgeReport m1_bridge_check();

}  // namespace qdyn

#endif  // QDYN_FAMILIES_HPP
