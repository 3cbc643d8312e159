#ifndef QDYN_DYNAMICS_HPP
#define QDYN_DYNAMICS_HPP

// Rational self-maps Phi = [F : G] of P^1(Q) held as pairs of equal-degree
// integer forms with Res(F, G) != 0, normalized to joint content 1 (so
// min(v_p F, v_p G) = 0 at every p) and canonical sign.  Conjugation by a
// Moebius class [A], A = (a b; c d), acts as
//   [A] Phi [A]^{-1} = [a F' + b G' : c F' + d G'],
// where F', G' substitute the adjugate pair (dX - bY, -cX + aY) into F, G.
//
// Iteration composes forms and re-strips joint content; the resultant of an
// iterate is tracked through Res(U(f,g), V(f,g)) = Res(U,V)^deg(f) *
// Res(f,g)^(deg U)^2 and the content scaling law instead of re-eliminating.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdyn/forms.hpp"
#include "qdyn/proj.hpp"

namespace qdyn {

// Res(F, G) = 0: the pair does not define a self-map of P^1.
struct degenerate_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct RationalMap {
  BinaryForm F{{Int(1), Int(0)}}, G{{Int(0), Int(1)}};
  Int res{1};  // resultant(F, G) of the stored canonical forms; nonzero

  unsigned degree() const { return F.degree(); }
  bool operator==(const RationalMap& o) const { return F == o.F && G == o.G; }
  std::string wire() const;  // "f0,...,fd;g0,...,gd"
  std::string str() const;   // "[F(x,y) : G(x,y)]" rendered as polynomials
};

// Equal degrees >= 1 and nonzero resultant required.
RationalMap make_map(const BinaryForm& F, const BinaryForm& G);
// Rational coefficients; the joint denominator is cleared first.
RationalMap make_map(const std::vector<Rat>& f, const std::vector<Rat>& g);
// Two ';'-separated coefficient lists; rational entries are cleared to a
// common integer representative.
RationalMap parse_map(const std::string& s);

ProjPoint apply_map(const RationalMap& phi, const ProjPoint& p);
bool maps_equal(const RationalMap& a, const RationalMap& b);

// n >= 1; refuses once the iterate degree d^n exceeds kPowerDegreeBudget.
inline constexpr unsigned long kPowerDegreeBudget = 1u << 16;
RationalMap power_map(const RationalMap& phi, unsigned n);

RationalMap conjugate_map(const RationalMap& phi, const Mobius& A);
// The conjugated pair exactly as the substitution produces it, before any
// content or sign normalization.
std::pair<BinaryForm, BinaryForm> conjugate_forms(const RationalMap& phi,
                                                  const Mobius& A);

struct Cycle {
  std::vector<ProjPoint> points;

  // Nonempty, pairwise distinct.
  static Cycle of(std::vector<ProjPoint> pts);
  std::size_t length() const { return points.size(); }
  const ProjPoint& operator[](std::size_t i) const { return points[i]; }
  bool operator==(const Cycle& o) const { return points == o.points; }
  std::string str() const;  // "([x:y],...)"
};

// True iff the points are distinct and phi maps each to the next, cyclically.
bool is_cycle(const RationalMap& phi, const Cycle& c);

struct OrbitResult {
  std::vector<ProjPoint> tail;  // strictly preperiodic initial segment
  // Detected cycle, entered right after the tail; empty when the step
  // budget ran out (tail then holds every visited point).
  std::optional<Cycle> cycle;
};
OrbitResult orbit(const RationalMap& phi, const ProjPoint& start,
                  unsigned max_steps = 64);

// All rational points of exact period n, sorted.  Roots of
// C_n = Y*F_n - X*G_n filtered by the least k with phi^k(P) = P.
std::vector<ProjPoint> periodic_points(const RationalMap& phi, unsigned n);

// The exact-period-n points grouped into cycles, each rotated to start at
// its least point; cycles ordered by starting point.
std::vector<Cycle> cycles_of_exact_period(const RationalMap& phi, unsigned n);

// Solutions of the linear system y_Q F(P) - x_Q G(P) = 0 over the six
// unknown coefficients of a quadratic pair (F, G).
struct QuadInterpolation {
  // Integer basis of the rational solution space, content-1 and
  // sign-canonical; coordinates (f0, f1, f2, g0, g1, g2).
  std::vector<std::array<Int, 6>> basis;
  // One coordinate per basis vector at which it is the only one nonzero;
  // parameterizes the space.
  std::vector<unsigned> free_cols;
  // The basis members that are genuine degree-2 maps (Res != 0).
  std::vector<RationalMap> maps;
};
// At least one constraint.  Sources need not be distinct: conflicting
// images of one point just cut the space down (usually to degenerate
// pairs only).  With 5 constraints on pairwise distinct sources, at most
// one genuine degree-2 map can exist.
QuadInterpolation interpolate_quadratic(
    const std::vector<std::pair<ProjPoint, ProjPoint>>& constraints);
// Whether the map's coefficient vector lies in the interpolation's span.
bool interpolation_contains(const QuadInterpolation& q, const RationalMap& m);

// (I_1, ..., I_{n-1}) with I_i = pair_ideal(P_0, P_i, S); length n >= 2.
std::vector<SIdeal> cycle_ideals(const Cycle& c, const PlaceSet& s);

struct CycleIdealLawReport {
  std::vector<std::string> violations;
  bool all_hold() const { return violations.empty(); }
};
// Requires phi good outside S and c a cycle of phi.  Checks the translation
// law pair_ideal(P_0, P_i) = pair_ideal(P_k, P_{k+i}) for all k, and that
// I_1 divides every I_i.  Violations indicate implementation bugs.
CycleIdealLawReport check_cycle_ideal_laws(const RationalMap& phi,
                                           const Cycle& c, const PlaceSet& s);

struct TupleEquivalence {
  Mobius map;         // in PGL_2(R_S); sends t1[i] to t2[(i + rotation) mod n]
  unsigned rotation;  // first h in 0..n-1 admitting a witness
};
// Lengths must match and be >= 3 (the witness is forced by three points).
std::optional<TupleEquivalence> tuples_equivalent(const Cycle& t1,
                                                  const Cycle& t2,
                                                  const PlaceSet& s);

enum class ConjugacyStatus {
  witness,       // A with conjugate_map(phi, A) = psi was found
  refuted,       // both maps have rational n-cycles; no pairing works
  inconclusive,  // a side has no rational n-cycle; nothing is decided
};
struct ConjugacyOutcome {
  ConjugacyStatus status;
  std::optional<Mobius> map;
};
// n >= 3.  Sound and complete for PGL_2(Q)-conjugacy relative to rational
// n-cycles: enumerates cycle pairs and rotations, testing the forced
// three-point Moebius each time.
ConjugacyOutcome conjugacy_via_cycles(const RationalMap& phi,
                                      const RationalMap& psi, unsigned n);

}  // namespace qdyn

#endif
