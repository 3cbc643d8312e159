#include "qdyn/reduction.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qdyn {

namespace {

// Clears the joint denominator of rational coefficients; the map layer
// strips any leftover content.
BinaryForm cleared(const std::vector<Rat>& coeffs, const Int& den) {
  std::vector<Int> out;
  out.reserve(coeffs.size());
  for (const Rat& q : coeffs) {
    Rat v = q * den;
    if (v.get_den() != 1) throw std::logic_error("cleared: denominator left");
    out.push_back(v.get_num());
  }
  return BinaryForm(out);
}

}  // namespace

long vp_disc(const RationalMap& phi, const Int& p) {
  const long mf = valuation(phi.F, p), mg = valuation(phi.G, p);
  const long v = valuation(phi.res, p) -
                 2 * static_cast<long>(phi.degree()) * std::min(mf, mg);
  if (v < 0) throw std::logic_error("vp_disc: negative exponent");
  return v;
}

bool good_outside(const RationalMap& phi, const PlaceSet& s) {
  return is_s_unit(Rat(phi.res), s);
}

ReductionReport reduction_report(const RationalMap& phi, const PlaceSet& s,
                                 const FactorBudget& budget) {
  ReductionReport rep;
  rep.disc = abs(phi.res);
  const Factorization fac = factorize(rep.disc, budget);
  for (const FactorTerm& t : fac.terms) {
    if (s.contains(t.p)) continue;
    rep.bad_primes_outside_s.push_back(t.p);
    if (t.p < 100 && !common_root_mod_p(phi.F, phi.G, t.p))
      throw std::logic_error("reduction_report: no common root mod " +
                             t.p.get_str());
  }
  rep.good_outside_s = rep.bad_primes_outside_s.empty();
  return rep;
}

bool QuadNormalForm::valid() const {
  return lambda != 0 && a != 0 && b != 0 && b != c && a * lambda != -c;
}

RationalMap QuadNormalForm::map() const {
  // F = aX^2 + (b - lambda a)XY - lambda b Y^2, G = aX^2 + cXY.
  return make_map({a, b - lambda * a, -lambda * b},
                            {a, c, Rat(0)});
}

std::pair<QuadNormalForm, Mobius> to_normal_form(const RationalMap& phi,
                                                 const ProjPoint& eta,
                                                 const ProjPoint& alpha,
                                                 const ProjPoint& beta,
                                                 const ProjPoint& gamma) {
  if (phi.degree() != 2)
    throw std::domain_error("to_normal_form: map must have degree 2");
  if (alpha == beta || alpha == gamma || beta == gamma)
    throw std::domain_error(
        "to_normal_form: alpha, beta, gamma must be pairwise distinct");
  if (eta == alpha)
    throw std::domain_error("to_normal_form: eta must differ from alpha");
  if (eta == beta)
    throw std::domain_error("to_normal_form: eta must differ from beta");
  if (!(apply_map(phi, eta) == alpha))
    throw std::domain_error("to_normal_form: phi(eta) != alpha");
  if (!(apply_map(phi, alpha) == beta))
    throw std::domain_error("to_normal_form: phi(alpha) != beta");
  if (!(apply_map(phi, beta) == gamma))
    throw std::domain_error("to_normal_form: phi(beta) != gamma");

  const Mobius A = mobius_to_zero_inf_one(alpha, beta, gamma);
  const Rat lambda = A(eta).affine_coord();  // eta != beta keeps this finite
  const RationalMap psi = conjugate_map(phi, A);

  // psi fixes the orbit 0 -> inf -> 1, which pins its coefficient shape:
  // g2 = 0, f0 = g0, and [lambda:1] is a root of F.
  if (psi.G.c[2] != 0 || psi.F.c[0] != psi.G.c[0])
    throw std::logic_error("to_normal_form: conjugate lost the orbit shape");
  const Rat a(psi.F.c[0]), c(psi.G.c[1]);
  const Rat b = Rat(psi.F.c[1]) + lambda * a;
  if (Rat(psi.F.c[2]) != -lambda * b)
    throw std::logic_error("to_normal_form: F(lambda, 1) != 0");
  const QuadNormalForm nf{lambda, a, b, c};
  if (!(nf.map() == psi))
    throw std::logic_error("to_normal_form: round trip failed");
  return {nf, A};
}

RationalMap milnor_form(const Rat& b, const Rat& c) {
  return make_map({Rat(1), b, Rat(0)}, {Rat(0), c, Rat(1)});
}

N34Report verify_lemma_n34(const QuadNormalForm& nf, const PlaceSet& s,
                           const Mobius& A) {
  if (!nf.valid())
    throw std::domain_error("verify_lemma_n34: degree-two conditions fail");
  const RationalMap psi = nf.map();

  const ProjPoint base = ProjPoint::of(0, 1);
  ProjPoint q = base;
  unsigned period = 0;
  for (unsigned i = 1; i <= 4; ++i) {
    q = apply_map(psi, q);
    if (q == base) {
      period = i;
      break;
    }
  }
  if (period != 3 && period != 4)
    throw std::domain_error(
        "verify_lemma_n34: [0:1] must have exact period 3 or 4");
  if (!good_outside(conjugate_map(psi, A), s))
    throw std::domain_error(
        "verify_lemma_n34: conjugate not of good reduction outside S");

  // Rescale (a, b, c) jointly so min(v_p) = 0 at every p outside S.
  const Int den =
      lcm(lcm(nf.a.get_den(), nf.b.get_den()), nf.c.get_den());
  const Int num = gcd(gcd(Rat(nf.a * den).get_num(), Rat(nf.b * den).get_num()),
                      Rat(nf.c * den).get_num());
  const Rat u = make_rat(outside_s_part(Rat(den), s),
                         outside_s_part(Rat(num), s));

  N34Report rep;
  rep.a = nf.a * u;
  rep.b = nf.b * u;
  rep.lambda = nf.lambda;
  rep.al_plus_c = rep.a * nf.lambda + nf.c * u;
  rep.a_unit = is_s_unit(rep.a, s);
  rep.b_unit = is_s_unit(rep.b, s);
  rep.lambda_unit = is_s_unit(rep.lambda, s);
  rep.al_plus_c_unit = is_s_unit(rep.al_plus_c, s);
  return rep;
}

N3Part1Report check_n3part1(const Rat& a, const Rat& c, const Mobius& A,
                            const PlaceSet& s) {
  const QuadNormalForm nf{Rat(1), a, Rat(1), c};
  if (!nf.valid())
    throw std::domain_error("check_n3part1: Psi_3(a,c) is not of degree 2");
  if (!good_outside(conjugate_map(nf.map(), A), s))
    throw std::domain_error(
        "check_n3part1: conjugate not of good reduction outside S");

  // The matrix is jointly coprime, so Disc(A) is generated by det(A).
  N3Part1Report rep;
  rep.disc_a = SIdeal::of(Rat(A.det()), s);
  rep.disc_sq_is_c_minus_1 =
      rep.disc_a * rep.disc_a == SIdeal::of(c - 1, s);
  rep.divides_quad_a = rep.disc_a.divides(SIdeal::of(1 + a + a * a, s));
  const Rat v = a + c;
  rep.divides_quad_v = rep.disc_a.divides(SIdeal::of(1 - v + v * v, s));
  rep.a_unit = is_s_unit(a, s);
  rep.a_plus_c_unit = is_s_unit(v, s);
  return rep;
}

Rat resultant_nf3(const Rat& a, const Rat& c) {
  const Rat value = -a * (a + c) * (c - 1);
  // Expanded Psi_3 forms are (a, 1-a, -1) and (a, c, 0); cross-check the
  // closed form against the Sylvester determinant of the cleared pair.
  const Int den = lcm(a.get_den(), c.get_den());
  const BinaryForm f = cleared({a, 1 - a, Rat(-1)}, den);
  const BinaryForm g = cleared({a, c, Rat(0)}, den);
  const Rat direct = make_rat(resultant(f, g), den * den * den * den);
  if (value != direct)
    throw std::logic_error("resultant_nf3: closed form != Sylvester");
  return value;
}

}  // namespace qdyn
