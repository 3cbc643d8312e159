#ifndef QDYN_PROJ_HPP
#define QDYN_PROJ_HPP

// P^1(Q) with exact representatives, and the Moebius group PGL_2(Q).
//
// A point is stored by its unique coprime integer pair (x, y) with y > 0,
// or (1, 0) for the point at infinity.  A Moebius class is stored by the
// unique jointly-coprime integer matrix whose first nonzero entry is
// positive.  The p-adic logarithmic distance of two distinct points is
//   delta_p(P1, P2) = v_p(x1 y2 - x2 y1) - min(v_p x1, v_p y1)
//                                        - min(v_p x2, v_p y2),
// which on canonical representatives reduces to v_p of the cross term.
// delta_p is independent of the chosen representatives and invariant under
// matrices whose determinant is a p-unit.

#include <string>
#include <vector>

#include "qdyn/arith.hpp"

namespace qdyn {

struct ProjPoint {
  Int x{1}, y{0};

  // (x, y) != (0, 0); reduces to the canonical representative.
  static ProjPoint of(const Int& x, const Int& y);
  static ProjPoint from_rats(const Rat& x, const Rat& y);
  static ProjPoint affine(const Rat& t);  // [t : 1]
  static ProjPoint infinity() { return ProjPoint{}; }
  static ProjPoint parse(const std::string& s);  // "x,y"

  bool is_infinity() const { return y == 0; }
  Rat affine_coord() const;  // x/y; domain error at infinity

  bool operator==(const ProjPoint& o) const { return x == o.x && y == o.y; }
  bool operator<(const ProjPoint& o) const {
    return x != o.x ? x < o.x : y < o.y;
  }
  std::string str() const;   // "[x:y]"
  std::string wire() const;  // "x,y"
};

Int naive_height(const ProjPoint& p);  // max(|x|, |y|)

struct Mobius {
  // row-major (a b; c d); jointly coprime, first nonzero entry positive
  Int a{1}, b{0}, c{0}, d{1};

  // Requires ad - bc != 0; reduces to the canonical representative.
  static Mobius of(const Int& a, const Int& b, const Int& c, const Int& d);
  static Mobius identity() { return Mobius{}; }

  Int det() const { return a * d - b * c; }
  Mobius inverse() const;  // class of the adjugate
  // Matrix product; (A * B) acts as A after B.
  Mobius operator*(const Mobius& o) const;
  ProjPoint operator()(const ProjPoint& p) const;

  bool operator==(const Mobius& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  std::string str() const;
};

// The class lies in PGL_2(R_S) iff the canonical matrix has S-unit
// determinant; these are exactly the automorphisms of P^1 with good
// reduction outside S.
bool has_good_reduction(const Mobius& m, const PlaceSet& s);

// delta_p as above; p prime, P1 != P2.
long log_distance(const ProjPoint& p1, const ProjPoint& p2, const Int& p);

// The R_S-ideal prod_{p not in S} p^{delta_p(P1,P2)}, by positive generator.
SIdeal pair_ideal(const ProjPoint& p1, const ProjPoint& p2, const PlaceSet& s);

// The unique Moebius class sending (p0, p1, p2) to ([0:1], [1:0], [1:1]);
// the three points must be pairwise distinct.
Mobius mobius_to_zero_inf_one(const ProjPoint& p0, const ProjPoint& p1,
                              const ProjPoint& p2);

}  // namespace qdyn

#endif
