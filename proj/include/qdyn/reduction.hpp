// Reduction data of a quadratic map: the discriminant ideal, bad primes, and
// the normal form attached to a periodic orbit.
//
// For a map stored in canonical form (joint content 1) the local discriminant
// exponent at p is v_p(Res(F,G)) - 2*deg * min(v_p(F), v_p(G)); the min term
// vanishes on canonical forms, so disc is just |res| read off the map.  Good
// reduction at p is equivalent to exponent 0, i.e. to F,G having no common
// root mod p.
//
// The normal form of a quadratic map with a marked orbit eta -> alpha ->
// beta -> gamma is
//
//   Psi = [ (X - lambda Y)(aX + bY) : X(aX + cY) ]
//
// obtained by conjugating with the Mobius map sending (alpha, beta, gamma) to
// ([0:1], [1:0], [1:1]); lambda is the affine coordinate of the image of eta.
// Psi has degree two exactly when lambda, a, b are nonzero, b != c and
// a*lambda != -c (equivalently Res != 0).  Specializing lambda = b = 1 gives
// the shape used for orbits of period three,
//
//   Psi_3 = [ (X - Y)(aX + Y) : X(aX + cY) ]  with  Res = -a(a+c)(c-1).

#ifndef QDYN_REDUCTION_HPP
#define QDYN_REDUCTION_HPP

#include <utility>
#include <vector>

#include "qdyn/dynamics.hpp"

namespace qdyn {

// v_p(Res) - 2*deg*min(v_p(F), v_p(G)); nonnegative on canonical maps.
long vp_disc(const RationalMap& phi, const Int& p);

// Good reduction outside S without factoring: the resultant is an S-unit.
bool good_outside(const RationalMap& phi, const PlaceSet& s);

struct ReductionReport {
  Int disc{1};                           // positive generator over Z
  std::vector<Int> bad_primes_outside_s; // ascending
  bool good_outside_s{true};
};

// Factors |res| under the budget (budget_error propagates) and cross-checks
// every reported prime < 100 against a common root of (F,G) mod p.
ReductionReport reduction_report(const RationalMap& phi, const PlaceSet& s,
                                 const FactorBudget& budget = {});

struct QuadNormalForm {
  Rat lambda{1}, a{1}, b{1}, c{0};
  // The five degree-two conditions listed above.
  bool valid() const;
  // [(X - lambda Y)(aX + bY) : X(aX + cY)] with denominators cleared;
  // degenerate_error when the conditions fail.
  RationalMap map() const;
  bool operator==(const QuadNormalForm&) const = default;
};

// Conjugates phi by the Mobius map sending (alpha,beta,gamma) to (0,inf,1)
// and reads the normal form off the result.  Requires alpha,beta,gamma
// pairwise distinct, eta outside {alpha,beta}, and the orbit relations
// phi(eta)=alpha, phi(alpha)=beta, phi(beta)=gamma.  Returns the form
// together with the conjugating map.
std::pair<QuadNormalForm, Mobius> to_normal_form(const RationalMap& phi,
                                                 const ProjPoint& eta,
                                                 const ProjPoint& alpha,
                                                 const ProjPoint& beta,
                                                 const ProjPoint& gamma);

// [X^2 + bXY : cXY + Y^2]; degenerate exactly when bc = 1.
RationalMap milnor_form(const Rat& b, const Rat& c);

// S-unit conditions forced on a normal form whose base point [0:1] has exact
// period 3 or 4, once some conjugate has good reduction outside S.  The
// triple (a,b,c) is first rescaled jointly so its minimum valuation at every
// prime outside S is zero; lambda is left untouched.
struct N34Report {
  Rat a, b, lambda, al_plus_c;  // al_plus_c = a*lambda + c after rescaling
  bool a_unit{}, b_unit{}, lambda_unit{}, al_plus_c_unit{};
  bool all_pass() const {
    return a_unit && b_unit && lambda_unit && al_plus_c_unit;
  }
};

// Preconditions (each failure is a domain_error naming the hypothesis):
// nf.valid(); [0:1] has exact period 3 or 4 under nf.map(); and
// conjugate_map(nf.map(), A) has good reduction outside S.
N34Report verify_lemma_n34(const QuadNormalForm& nf, const PlaceSet& s,
                           const Mobius& A);

// Constraints on a period-3 normal form Psi_3(a,c) admitting a conjugate
// with good reduction outside S, phrased through the discriminant ideal of
// the conjugating map A: Disc(A)^2 = (c-1)*R_S, Disc(A) | (1+a+a^2)*R_S and
// Disc(A) | (1-v+v^2)*R_S with v = a+c, plus a and a+c being S-units.
struct N3Part1Report {
  SIdeal disc_a;                   // Disc(A) as an ideal of R_S
  bool disc_sq_is_c_minus_1{};
  bool divides_quad_a{};           // Disc(A) | (1 + a + a^2)
  bool divides_quad_v{};           // Disc(A) | (1 - v + v^2), v = a + c
  bool a_unit{}, a_plus_c_unit{};
  bool all_pass() const {
    return disc_sq_is_c_minus_1 && divides_quad_a && divides_quad_v &&
           a_unit && a_plus_c_unit;
  }
};

// Preconditions: Psi_3(a,c) has degree two (equivalently [0:1],[1:0],[1:1]
// is a 3-cycle of it), and conjugate_map(Psi_3(a,c), A) has good reduction
// outside S; each failure is a domain_error.
N3Part1Report check_n3part1(const Rat& a, const Rat& c, const Mobius& A,
                            const PlaceSet& s);

// Res of Psi_3(a,c) in closed form, -a(a+c)(c-1), cross-checked internally
// against the Sylvester determinant.
Rat resultant_nf3(const Rat& a, const Rat& c);

}  // namespace qdyn

#endif  // QDYN_REDUCTION_HPP
