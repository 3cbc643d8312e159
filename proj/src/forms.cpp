#include "qdyn/forms.hpp"

#include <algorithm>
#include <map>

namespace qdyn {

BinaryForm::BinaryForm(std::vector<Int> coeffs) : c(std::move(coeffs)) {
  if (c.empty()) throw std::domain_error("BinaryForm: no coefficients");
}

bool BinaryForm::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Int& v) { return v == 0; });
}

Int evaluate(const BinaryForm& f, const Int& x, const Int& y) {
  Int acc = f.c[0], yp = 1;
  for (std::size_t i = 1; i < f.c.size(); ++i) {
    yp *= y;
    acc = acc * x + f.c[i] * yp;
  }
  return acc;
}

Rat evaluate(const BinaryForm& f, const Rat& x, const Rat& y) {
  Rat acc = f.c[0], yp = 1;
  for (std::size_t i = 1; i < f.c.size(); ++i) {
    yp *= y;
    acc = acc * x + f.c[i] * yp;
  }
  return acc;
}

BinaryForm add(const BinaryForm& f, const BinaryForm& g) {
  if (f.degree() != g.degree()) throw std::domain_error("add: degree mismatch");
  std::vector<Int> c(f.c);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += g.c[i];
  return BinaryForm(std::move(c));
}

BinaryForm sub(const BinaryForm& f, const BinaryForm& g) {
  return add(f, scale(g, -1));
}

BinaryForm scale(const BinaryForm& f, const Int& k) {
  std::vector<Int> c(f.c);
  for (Int& v : c) v *= k;
  return BinaryForm(std::move(c));
}

BinaryForm multiply(const BinaryForm& f, const BinaryForm& g) {
  std::vector<Int> c(f.degree() + g.degree() + 1, Int(0));
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    for (std::size_t j = 0; j < g.c.size(); ++j) c[i + j] += f.c[i] * g.c[j];
  }
  return BinaryForm(std::move(c));
}

BinaryForm mul_x(const BinaryForm& f) {
  std::vector<Int> c(f.c);
  c.push_back(0);
  return BinaryForm(std::move(c));
}

BinaryForm mul_y(const BinaryForm& f) {
  std::vector<Int> c;
  c.reserve(f.c.size() + 1);
  c.push_back(0);
  c.insert(c.end(), f.c.begin(), f.c.end());
  return BinaryForm(std::move(c));
}

Int content(const BinaryForm& f) {
  if (f.is_zero()) throw std::domain_error("content: zero form");
  Int g = 0;
  for (const Int& v : f.c) g = gcd(g, v);
  return g;
}

BinaryForm primitive_part(const BinaryForm& f) {
  Int g = content(f);
  std::vector<Int> c(f.c);
  for (Int& v : c) v /= g;
  return BinaryForm(std::move(c));
}

long valuation(const BinaryForm& f, const Int& p) {
  if (f.is_zero()) throw std::domain_error("valuation: zero form");
  long m = 0;
  bool first = true;
  for (const Int& v : f.c) {
    if (v == 0) continue;
    long w = valuation(v, p);
    m = first ? w : std::min(m, w);
    first = false;
  }
  return m;
}

BinaryForm derivative_x(const BinaryForm& f) {
  unsigned d = f.degree();
  if (d == 0) throw std::domain_error("derivative_x: constant form");
  std::vector<Int> c(d, Int(0));
  for (unsigned i = 0; i < d; ++i) c[i] = Int(d - i) * f.c[i];
  return BinaryForm(std::move(c));
}

BinaryForm derivative_y(const BinaryForm& f) {
  unsigned d = f.degree();
  if (d == 0) throw std::domain_error("derivative_y: constant form");
  std::vector<Int> c(d, Int(0));
  for (unsigned i = 1; i <= d; ++i) c[i - 1] = Int(i) * f.c[i];
  return BinaryForm(std::move(c));
}

namespace {

// Fraction-free Gaussian elimination (Bareiss).  Intermediate entries are
// determinants of minors of the input, so they stay polynomially sized and
// every division is exact.
Int det_bareiss(std::vector<std::vector<Int>> m) {
  const std::size_t n = m.size();
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

Int resultant(const BinaryForm& f, const BinaryForm& g) {
  const unsigned d = f.degree();
  if (d != g.degree()) throw std::domain_error("resultant: degree mismatch");
  if (d < 1) throw std::domain_error("resultant: degree >= 1 required");
  if (f.is_zero() || g.is_zero()) return 0;
  const std::size_t n = 2 * d;
  std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
  for (unsigned r = 0; r < d; ++r)
    for (unsigned j = 0; j <= d; ++j) {
      m[r][r + j] = f.c[j];
      m[d + r][r + j] = g.c[j];
    }
  return det_bareiss(std::move(m));
}

BinaryForm compose(const BinaryForm& u, const BinaryForm& f,
                   const BinaryForm& g) {
  const unsigned du = u.degree(), e = f.degree();
  if (e != g.degree()) throw std::domain_error("compose: f, g degree mismatch");
  if (du < 1 || e < 1) throw std::domain_error("compose: degrees >= 1 required");
  std::vector<BinaryForm> fp{BinaryForm({Int(1)})};
  std::vector<BinaryForm> gp{BinaryForm({Int(1)})};
  for (unsigned i = 1; i <= du; ++i) {
    fp.push_back(multiply(fp.back(), f));
    gp.push_back(multiply(gp.back(), g));
  }
  std::vector<Int> acc(du * e + 1, Int(0));
  for (unsigned i = 0; i <= du; ++i) {
    if (u.c[i] == 0) continue;
    BinaryForm term = multiply(fp[du - i], gp[i]);
    // term has degree (du-i)e + ie = du*e for every i
    for (std::size_t j = 0; j < term.c.size(); ++j) acc[j] += u.c[i] * term.c[j];
  }
  return BinaryForm(std::move(acc));
}

std::optional<BinaryForm> divide_linear(const BinaryForm& f,
                                        const ProjPoint& root) {
  const unsigned d = f.degree();
  if (d < 1) return std::nullopt;
  const Int &x = root.x, &y = root.y;
  std::vector<Int> g(d, Int(0));
  if (y == 0) {  // dividing by -Y
    if (f.c[0] != 0) return std::nullopt;
    for (unsigned i = 0; i < d; ++i) g[i] = -f.c[i + 1];
    return BinaryForm(std::move(g));
  }
  // f_i = y g_i - x g_{i-1}; run the recursion and check the remainder
  Int carry = 0;  // g_{i-1}
  for (unsigned i = 0; i < d; ++i) {
    Int num = f.c[i] + x * carry;
    if (!mpz_divisible_p(num.get_mpz_t(), y.get_mpz_t())) return std::nullopt;
    g[i] = num / y;
    carry = g[i];
  }
  if (f.c[d] != -x * carry) return std::nullopt;
  return BinaryForm(std::move(g));
}

// ---------------------------------------------------------------------------
// Univariate integer polynomials, coefficients descending from the leading
// term; {} is the zero polynomial.  Only what the root machinery needs.

namespace {

using ZPoly = std::vector<Int>;

ZPoly z_trim(ZPoly p) {
  std::size_t i = 0;
  while (i < p.size() && p[i] == 0) ++i;
  return ZPoly(p.begin() + i, p.end());
}

long z_deg(const ZPoly& p) { return static_cast<long>(p.size()) - 1; }

ZPoly z_derivative(const ZPoly& p) {
  if (p.size() <= 1) return {};
  ZPoly d(p.size() - 1);
  long n = z_deg(p);
  for (long i = 0; i < n; ++i) d[i] = Int(n - i) * p[i];
  return z_trim(std::move(d));
}

Int z_content(const ZPoly& p) {
  Int g = 0;
  for (const Int& v : p) g = gcd(g, v);
  return g;
}

ZPoly z_primitive(ZPoly p) {
  Int g = z_content(p);
  if (g > 1)
    for (Int& v : p) v /= g;
  return p;
}

// Pseudo-remainder of a by b (b != 0): a power of lc(b) times a, mod b.
ZPoly z_pseudo_rem(ZPoly a, const ZPoly& b) {
  const Int& lb = b[0];
  long da = z_deg(a), db = z_deg(b);
  while (da >= db && !a.empty()) {
    Int lead = a[0];
    for (Int& v : a) v *= lb;
    for (long j = 0; j <= db; ++j) a[j] -= lead * b[j];
    a = z_trim(std::move(a));
    da = z_deg(a);
  }
  return a;
}

// Primitive-PRS gcd; result primitive with positive leading coefficient.
ZPoly z_gcd(ZPoly a, ZPoly b) {
  a = z_trim(std::move(a));
  b = z_trim(std::move(b));
  if (a.empty()) std::swap(a, b);
  if (b.empty()) {
    a = z_primitive(std::move(a));
    if (!a.empty() && a[0] < 0)
      for (Int& v : a) v = -v;
    return a;
  }
  if (z_deg(a) < z_deg(b)) std::swap(a, b);
  while (!b.empty()) {
    ZPoly r = z_primitive(z_pseudo_rem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  a = z_primitive(std::move(a));
  if (a[0] < 0)
    for (Int& v : a) v = -v;
  return a;
}

// Exact quotient a / b; the division is known to be exact.
ZPoly z_divexact(ZPoly a, const ZPoly& b) {
  long da = z_deg(a), db = z_deg(b);
  if (da < db) return {};
  ZPoly q(da - db + 1, Int(0));
  for (long i = 0; i <= da - db; ++i) {
    Int t;
    mpz_divexact(t.get_mpz_t(), a[i].get_mpz_t(), b[0].get_mpz_t());
    q[i] = t;
    for (long j = 0; j <= db; ++j) a[i + j] -= t * b[j];
  }
  return q;
}

Int z_eval_mod(const ZPoly& p, const Int& t, const Int& m) {
  Int acc = 0;
  for (const Int& v : p) acc = (acc * t + v) % m;
  return ((acc % m) + m) % m;
}

// Polynomials over F_p, descending, trimmed.
using MPoly = std::vector<Int>;

Int mod_p(const Int& v, const Int& p) { return ((v % p) + p) % p; }

MPoly mp_reduce(const ZPoly& a, const Int& p) {
  MPoly r;
  r.reserve(a.size());
  for (const Int& v : a) r.push_back(mod_p(v, p));
  std::size_t i = 0;
  while (i < r.size() && r[i] == 0) ++i;
  return MPoly(r.begin() + i, r.end());
}

Int mp_inv(const Int& v, const Int& p) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t()))
    throw std::logic_error("mp_inv: not invertible");
  return r;
}

MPoly mp_rem(MPoly a, const MPoly& b, const Int& p) {
  const Int inv_lb = mp_inv(b[0], p);
  long da = z_deg(a), db = z_deg(b);
  while (da >= db && !a.empty()) {
    Int t = a[0] * inv_lb % p;
    for (long j = 0; j <= db; ++j) a[j] = mod_p(a[j] - t * b[j], p);
    std::size_t i = 0;
    while (i < a.size() && a[i] == 0) ++i;
    a = MPoly(a.begin() + i, a.end());
    da = z_deg(a);
  }
  return a;
}

MPoly mp_gcd(MPoly a, MPoly b, const Int& p) {
  if (z_deg(a) < z_deg(b)) std::swap(a, b);
  while (!b.empty()) {
    MPoly r = mp_rem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Divisors of |n| from its factorization, unordered.
std::vector<Int> all_divisors(const Factorization& f) {
  std::vector<Int> divs{Int(1)};
  for (const FactorTerm& t : f.terms) {
    std::size_t base = divs.size();
    Int pe = 1;
    for (unsigned long e = 1; e <= t.e; ++e) {
      pe *= t.p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pe);
    }
  }
  return divs;
}

unsigned long long divisor_count(const Factorization& f) {
  unsigned long long n = 1;
  for (const FactorTerm& t : f.terms) {
    n *= t.e + 1;
    if (n > 1'000'000) return n;  // cap; caller only compares against bounds
  }
  return n;
}

// Affine rational roots of the primitive core form (leading and trailing
// coefficients nonzero) by divisor enumeration.
std::vector<ProjPoint> roots_by_divisors(const BinaryForm& core,
                                         const Factorization& lead,
                                         const Factorization& trail) {
  std::vector<ProjPoint> out;
  std::vector<Int> ys = all_divisors(lead);
  std::vector<Int> xs = all_divisors(trail);
  for (const Int& y : ys)
    for (const Int& x : xs) {
      if (gcd(x, y) != 1) continue;
      if (evaluate(core, x, y) == 0) out.push_back(ProjPoint::of(x, y));
      if (evaluate(core, Int(-x), y) == 0) out.push_back(ProjPoint::of(Int(-x), y));
    }
  return out;
}

// Rational reconstruction: the unique x/y with x = r y mod m, |x| <= bx,
// 0 < y <= by, provided 2 bx by < m; verification happens at the caller.
std::optional<std::pair<Int, Int>> rat_recon(const Int& r, const Int& m,
                                             const Int& bx, const Int& by) {
  Int r0 = m, t0 = 0, r1 = r, t1 = 1;
  while (r1 > bx) {
    if (r1 == 0) return std::nullopt;
    Int q = r0 / r1;
    Int
 r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1;
    t0 = t1;
    r1 = r2;
    t1 = t2;
  }
  Int x = r1, y = t1;
  if (y < 0) {
    x = -x;
    y = -y;
  }
  if (y == 0 || y > by) return std::nullopt;
  Int g = gcd(x, y);
  if (g > 1) {
    x /= g;
    y /= g;
  }
  return std::make_pair(x, y);
}

// Affine rational roots of the primitive core via roots mod p, quadratic
// Hensel lifting, and rational reconstruction.  Complete because a root
// x/y has x | trail(g), y | lead(g), so it survives reduction mod the
// chosen p (p divides neither) and lifts from a simple root of g mod p.
std::vector<ProjPoint> roots_by_lifting(const BinaryForm& core) {
  ZPoly f0 = z_trim(core.c);
  ZPoly g = f0;

  auto good_prime = [&](const Int& p) {
    if (mpz_divisible_p(g[0].get_mpz_t(), p.get_mpz_t())) return false;
    MPoly gp = mp_reduce(g, p);
    MPoly dgp = mp_reduce(z_derivative(g), p);
    if (dgp.empty()) return false;
    return z_deg(mp_gcd(gp, dgp, p)) <= 0;
  };

  Int p(101);
  int tried = 0;
  bool squarefreed = false;
  while (!good_prime(p)) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (++tried == 30 && !squarefreed) {
      // g itself has repeated factors; strip them once and retry
      g = z_primitive(z_divexact(g, z_gcd(g, z_derivative(g))));
      squarefreed = true;
      p = 101;
      tried = 0;
    }
    if (tried > 3000) throw std::logic_error("roots_by_lifting: no good prime");
  }

  const Int bx = abs(g.back()), by = abs(g[0]);
  const Int target = 2 * bx * by + 1;
  ZPoly dg = z_derivative(g);

  std::vector<ProjPoint> out;
  for (Int r0 = 0; r0 < p; ++r0) {
    if (z_eval_mod(g, r0, p) != 0) continue;
    Int m = p, r = r0;
    while (m < target) {  // Newton step doubles the precision
      Int m2 = m * m;
      Int w = mp_inv(z_eval_mod(dg, r, m2), m2);
      r = mod_p(r - z_eval_mod(g, r, m2) * w, m2);
      m = m2;
    }
    auto xy = rat_recon(r, m, bx, by);
    if (!xy) continue;
    if (evaluate(core, xy->first, xy->second) == 0)
      out.push_back(ProjPoint::of(xy->first, xy->second));
  }
  return out;
}

}  // namespace

std::vector<FormRoot> rational_roots(const BinaryForm& f) {
  if (f.is_zero()) throw std::domain_error("rational_roots: zero form");
  BinaryForm p = primitive_part(f);
  const unsigned d = p.degree();

  unsigned lead_zeros = 0;
  while (lead_zeros <= d && p.c[lead_zeros] == 0) ++lead_zeros;
  unsigned trail_zeros = 0;
  while (trail_zeros <= d && p.c[d - trail_zeros] == 0) ++trail_zeros;

  std::vector<FormRoot> out;
  if (lead_zeros > 0)
    out.push_back(FormRoot{ProjPoint::infinity(), lead_zeros});
  if (trail_zeros > 0)
    out.push_back(FormRoot{ProjPoint::of(0, 1), trail_zeros});

  // core: both outer coefficients nonzero
  std::vector<Int> cc(p.c.begin() + lead_zeros, p.c.end() - trail_zeros);
  if (cc.size() > 1) {
    BinaryForm core{cc};
    std::vector<ProjPoint> affine;
    bool done = false;
    FactorBudget small;
    small.trial_limit = 10'000;
    small.rho_iterations = 200'000;
    try {
      Factorization lead = factorize(core.c[0], small);
      Factorization trail = factorize(core.c.back(), small);
      if (divisor_count(lead) * divisor_count(trail) <= 20'000) {
        affine = roots_by_divisors(core, lead, trail);
        done = true;
      }
    } catch (const budget_error&) {
      // outer coefficients resist factoring; fall through
    }
    if (!done) affine = roots_by_lifting(core);

    for (const ProjPoint& r : affine) {
      unsigned mult = 0;
      BinaryForm rest = core;
      while (rest.degree() >= 1) {
        auto q = divide_linear(rest, r);
        if (!q) break;
        ++mult;
        rest = *q;
      }
      out.push_back(FormRoot{r, mult});
    }
  }

  std::sort(out.begin(), out.end(), [](const FormRoot& a, const FormRoot& b) {
    return a.point < b.point;
  });
  return out;
}

bool common_root_mod_p(const BinaryForm& f, const BinaryForm& g, const Int& p) {
  const unsigned d = f.degree();
  if (d != g.degree())
    throw std::domain_error("common_root_mod_p: degree mismatch");
  if (d < 1) throw std::domain_error("common_root_mod_p: degree >= 1 required");
  if (!is_prime(p)) throw std::domain_error("common_root_mod_p: p not prime");
  MPoly fr = mp_reduce(f.c, p), gr = mp_reduce(g.c, p);
  bool f_zero = fr.empty(), g_zero = gr.empty();
  if (f_zero && g_zero)
    throw std::domain_error("common_root_mod_p: both reductions vanish");
  // a vanishing side shares every root of the other, which has d >= 1 of them
  if (f_zero || g_zero) return true;
  // [1:0] is common iff both leading coefficients die mod p
  if (mod_p(f.c[0], p) == 0 && mod_p(g.c[0], p) == 0) return true;
  return z_deg(mp_gcd(fr, gr, p)) >= 1;
}

bool has_repeated_root(const BinaryForm& f) {
  if (f.is_zero()) throw std::domain_error("has_repeated_root: zero form");
  if (f.degree() < 1)
    throw std::domain_error("has_repeated_root: degree >= 1 required");
  BinaryForm p = primitive_part(f);
  unsigned lead_zeros = 0;
  while (lead_zeros <= p.degree() && p.c[lead_zeros] == 0) ++lead_zeros;
  if (lead_zeros >= 2) return true;  // [1:0] at least doubled
  ZPoly ff = z_trim(p.c);
  if (z_deg(ff) < 1) return false;
  return z_deg(z_gcd(ff, z_derivative(ff))) >= 1;
}

bool has_simple_root(const BinaryForm& f) {
  if (f.is_zero()) throw std::domain_error("has_simple_root: zero form");
  if (f.degree() < 1)
    throw std::domain_error("has_simple_root: degree >= 1 required");
  BinaryForm p = primitive_part(f);
  unsigned lead_zeros = 0;
  while (lead_zeros <= p.degree() && p.c[lead_zeros] == 0) ++lead_zeros;
  if (lead_zeros == 1) return true;  // [1:0] is simple
  ZPoly ff = z_trim(p.c);
  if (z_deg(ff) < 1) return false;
  ZPoly g = z_gcd(ff, z_derivative(ff));
  if (z_deg(g) < 1) return true;  // squarefree affine part
  ZPoly h = z_divexact(ff, g);    // one copy of each distinct affine root
  return z_deg(h) > z_deg(z_gcd(h, g));
}

}  // namespace qdyn
