#ifndef QDYN_FORMS_HPP
#define QDYN_FORMS_HPP

// Binary forms F(X, Y) = f_0 X^d + f_1 X^{d-1} Y + ... + f_d Y^d with
// integer coefficients, stored densely; the formal degree is part of the
// data, so leading zeros are meaningful (they are roots at [1:0]).
// Content is deliberately not stripped here; normalization is the duty of
// the map layer.
//
// The resultant of two degree-d forms is the determinant of the 2d x 2d
// Sylvester matrix in their coefficients, computed by fraction-free
// Bareiss elimination: every division is exact, entries stay the size of
// minors of the input, and row exchanges only flip the sign.  Key laws,
// exercised by the tests:
//   Res(lam F, mu G)   = lam^d mu^d Res(F, G)
//   Res(U(f,g), V(f,g)) = Res(U, V)^e Res(f, g)^{D^2}
//     for U, V of degree D and f, g of degree e,
// and Res(F, G) = 0 exactly when F, G share a root in P^1(Qbar).

#include <optional>
#include <utility>
#include <vector>

#include "qdyn/arith.hpp"
#include "qdyn/proj.hpp"

namespace qdyn {

struct BinaryForm {
  std::vector<Int> c;  // c[i] multiplies X^(d-i) Y^i

  BinaryForm() : c{Int(0)} {}
  explicit BinaryForm(std::vector<Int> coeffs);

  unsigned degree() const { return static_cast<unsigned>(c.size()) - 1; }
  bool is_zero() const;
  bool operator==(const BinaryForm& o) const { return c == o.c; }
};

Int evaluate(const BinaryForm& f, const Int& x, const Int& y);
Rat evaluate(const BinaryForm& f, const Rat& x, const Rat& y);

BinaryForm add(const BinaryForm& f, const BinaryForm& g);  // equal degrees
BinaryForm sub(const BinaryForm& f, const BinaryForm& g);
BinaryForm scale(const BinaryForm& f, const Int& k);
BinaryForm multiply(const BinaryForm& f, const BinaryForm& g);
BinaryForm mul_x(const BinaryForm& f);  // X * F
BinaryForm mul_y(const BinaryForm& f);  // Y * F

Int content(const BinaryForm& f);              // >= 1; f != 0
BinaryForm primitive_part(const BinaryForm& f);

// min of v_p over nonzero coefficients; f != 0.
long valuation(const BinaryForm& f, const Int& p);

BinaryForm derivative_x(const BinaryForm& f);  // degree drops by one
BinaryForm derivative_y(const BinaryForm& f);

// Equal formal degrees d >= 1 required.
Int resultant(const BinaryForm& f, const BinaryForm& g);

// U(f, g) for U of degree D >= 1 and f, g of equal degree e >= 1.
BinaryForm compose(const BinaryForm& u, const BinaryForm& f,
                   const BinaryForm& g);

// Exact division by the linear form (y X - x Y) attached to the root
// [x:y]; nullopt if it does not divide.
std::optional<BinaryForm> divide_linear(const BinaryForm& f,
                                        const ProjPoint& root);

struct FormRoot {
  ProjPoint point;
  unsigned multiplicity{1};
  bool operator==(const FormRoot& o) const = default;
};

// All roots of f in P^1(Q) with multiplicities, sorted by point.  Roots at
// [1:0] and [0:1] are read off the outer zero coefficients; affine roots
// x/y obey x | trailing and y | leading coefficient of the primitive core,
// so divisor enumeration finds them.  When the outer coefficients resist
// factoring within a small budget the roots are instead found modulo a
// prime, Hensel-lifted, and rationally reconstructed; both routes verify
// every root exactly before reporting it.
std::vector<FormRoot> rational_roots(const BinaryForm& f);

// Do the reductions of f and g mod p share a root in P^1(Fpbar)?  Decided
// by a polynomial gcd over F_p plus an explicit check at [1:0]; if one
// reduction vanishes identically the other's roots are all shared.  Both
// reductions zero is a domain error.
bool common_root_mod_p(const BinaryForm& f, const BinaryForm& g, const Int& p);

// Repeated root in P^1(Qbar): nonconstant gcd(f, f') on the affine part,
// or a doubled root at infinity.
bool has_repeated_root(const BinaryForm& f);

// Some root of multiplicity exactly one exists over Qbar.
bool has_simple_root(const BinaryForm& f);

}  // namespace qdyn

#endif
