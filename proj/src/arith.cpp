#include "qdyn/arith.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qdyn {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::domain_error("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat parse_rat(const std::string& s) {
  auto bad = [&] { return std::domain_error("parse_rat: bad rational '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return make_rat(Int(s), 1);
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw bad();
  }
}

Int parse_int(const std::string& s) {
  try {
    return Int(s);
  } catch (const std::invalid_argument&) {
    throw std::domain_error("parse_int: bad integer '" + s + "'");
  }
}

Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rat rat_pow(const Int& p, long e) {
  if (e >= 0) return Rat(int_pow(p, static_cast<unsigned long>(e)));
  return make_rat(1, int_pow(p, static_cast<unsigned long>(-e)));
}

int moebius(unsigned long n) {
  if (n == 0) throw std::domain_error("moebius: n >= 1 required");
  int r = 1;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    r = -r;
  }
  if (n > 1) r = -r;
  return r;
}

namespace {

// One Miller-Rabin round; n odd, n > 3, 1 < a < n-1.
bool mr_round(const Int& n, const Int& a, const Int& d, unsigned long s) {
  Int x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

// Below this bound the twelve smallest prime bases are a proven witness set.
const Int kDeterministicBound("318665857834031151167461");

}  // namespace

Primality classify_prime(const Int& n) {
  if (n < 2) return Primality::composite;
  static const unsigned long small[] = {2,  3,  5,  7,  11, 13,
                                        17, 19, 23, 29, 31, 37};
  for (unsigned long p : small) {
    if (n == p) return Primality::prime;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::composite;
  }
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned long p : small)
    if (!mr_round(n, Int(p), d, s)) return Primality::composite;
  if (n < kDeterministicBound) return Primality::prime;
  // Extra random-base rounds for the huge case; still only "probable".
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0xd1ce5badUL);
  for (int i = 0; i < 24; ++i) {
    Int a = rng.get_z_range(n - 3) + 2;
    if (!mr_round(n, a, d, s)) return Primality::composite;
  }
  return Primality::probable_prime;
}

bool is_prime(const Int& n) { return classify_prime(n) != Primality::composite; }

PlaceSet PlaceSet::of(std::vector<Int> primes) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const Int& p : primes)
    if (!is_prime(p))
      throw std::domain_error("PlaceSet: " + p.get_str() + " is not prime");
  PlaceSet s;
  s.primes_ = std::move(primes);
  return s;
}

PlaceSet PlaceSet::parse(const std::string& csv) {
  std::vector<Int> ps;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) ps.push_back(parse_int(tok));
  return of(std::move(ps));
}

bool PlaceSet::contains(const Int& p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

std::string PlaceSet::str() const {
  std::string r = "{";
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) r += ",";
    r += primes_[i].get_str();
  }
  return r + "}";
}

long valuation(const Int& x, const Int& p) {
  if (x == 0) throw std::domain_error("valuation: x must be nonzero");
  if (!is_prime(p)) throw std::domain_error("valuation: p must be prime");
  Int rest;
  return static_cast<long>(
      mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& x, const Int& p) {
  if (x == 0) throw std::domain_error("valuation: x must be nonzero");
  return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

namespace {

// |n| with all p in S divided out; no factoring involved.
Int strip_s(Int n, const PlaceSet& s) {
  n = abs(n);
  Int rest;
  for (const Int& p : s.primes()) {
    mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    n = rest;
  }
  return n;
}

}  // namespace

bool is_s_integer(const Rat& x, const PlaceSet& s) {
  return strip_s(Int(x.get_den()), s) == 1;
}

bool is_s_unit(const Rat& x, const PlaceSet& s) {
  if (x == 0) return false;
  return strip_s(Int(x.get_num()), s) == 1 && strip_s(Int(x.get_den()), s) == 1;
}

Int outside_s_part(const Rat& x, const PlaceSet& s) {
  if (x == 0) throw std::domain_error("outside_s_part: x must be nonzero");
  if (!is_s_integer(x, s))
    throw std::domain_error("outside_s_part: x is not an S-integer");
  return strip_s(Int(x.get_num()), s);
}

SIdeal SIdeal::of(const Rat& x, const PlaceSet& s) {
  return SIdeal{outside_s_part(x, s)};
}

bool SIdeal::divides(const SIdeal& other) const {
  return mpz_divisible_p(other.gen.get_mpz_t(), gen.get_mpz_t()) != 0;
}

Int Factorization::value() const {
  Int v = sign;
  for (const FactorTerm& t : terms) v *= int_pow(t.p, t.e);
  return v;
}

namespace {

// Brent's cycle variant of Pollard rho.  Returns a nontrivial factor of odd
// composite n, or nothing once `iters` runs dry (iters is decremented).
std::optional<Int> brent_rho(const Int& n, unsigned long long& iters) {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x5eedUL + mpz_fdiv_ui(n.get_mpz_t(), 1000003));
  while (iters > 0) {
    Int y = rng.get_z_range(n - 3) + 1;
    Int c = rng.get_z_range(n - 3) + 1;
    Int x, q = 1, g = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    while (g == 1 && iters > 0) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
      for (unsigned long k = 0; k < r && g == 1 && iters > 0; k += m) {
        ys = y;
        unsigned long lim = std::min(m, r - k);
        for (unsigned long i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = q * (x - y) % n;
        }
        iters = iters > lim ? iters - lim : 0;
        g = gcd(q, n);
      }
      r *= 2;
    }
    if (g == n) {  // backtrack one step at a time
      do {
        ys = (ys * ys + c) % n;
        g = gcd(Int(x - ys), n);
      } while (g == 1);
    }
    if (g != n && g > 1) return g;
    // bad luck with this (y, c); retry while budget lasts
  }
  return std::nullopt;
}

std::string factor_detail(const std::map<Int, unsigned long>& found,
                          const std::vector<Int>& pending) {
  std::string d = "partial:";
  for (const auto& [p, e] : found)
    d += " " + p.get_str() + "^" + std::to_string(e);
  for (const Int& c : pending) d += " [unfactored " + c.get_str() + "]";
  return d;
}

}  // namespace

Factorization factorize(const Int& n, const FactorBudget& budget) {
  if (n == 0) throw std::domain_error("factorize: n must be nonzero");
  Factorization out;
  out.sign = sgn(n) < 0 ? -1 : 1;
  Int m = abs(n);
  std::map<Int, unsigned long> found;
  std::map<Int, bool> certified;

  auto strip = [&](const Int& p) {
    Int rest;
    unsigned long e = static_cast<unsigned long>(
        mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
    if (e) {
      found[p] += e;
      certified[p] = true;
      m = rest;
    }
  };

  strip(2);
  strip(3);
  for (unsigned long p = 5; p <= budget.trial_limit && Int(p) * p <= m; p += 6) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) strip(p);
    if (mpz_divisible_ui_p(m.get_mpz_t(), p + 2)) strip(p + 2);
  }
  if (m > 1 && Int(budget.trial_limit) * budget.trial_limit > m) {
    strip(m);  // cofactor below trial square is prime
  }

  unsigned long long iters = budget.rho_iterations;
  std::vector<Int> pending;
  if (m > 1) pending.push_back(m);
  while (!pending.empty()) {
    Int c = pending.back();
    pending.pop_back();
    Primality pr = classify_prime(c);
    if (pr != Primality::composite) {
      found[c] += 1;
      certified[c] = pr == Primality::prime;
      continue;
    }
    // perfect power check keeps rho off p^k inputs
    if (mpz_perfect_power_p(c.get_mpz_t())) {
      for (unsigned long k = 2; k <= mpz_sizeinbase(c.get_mpz_t(), 2); ++k) {
        Int root;
        if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k) != 0) {
          for (unsigned long i = 0; i < k; ++i) pending.push_back(root);
          c = 0;
          break;
        }
      }
      if (c == 0) continue;
    }
    auto d = brent_rho(c, iters);
    if (!d) {
      pending.push_back(c);
      throw budget_error("factorize: rho budget exhausted",
                         factor_detail(found, pending));
    }
    pending.push_back(*d);
    pending.push_back(Int(c / *d));
  }

  for (const auto& [p, e] : found)
    out.terms.push_back(FactorTerm{p, e, certified[p]});
  return out;
}

std::vector<Rat> enumerate_s_units(const PlaceSet& s, unsigned bound) {
  const long b = bound;
  std::vector<Rat> out;
  std::vector<long> e(s.size(), -b);
  while (true) {
    Rat u(1);
    for (std::size_t i = 0; i < s.size(); ++i) u *= rat_pow(s.primes()[i], e[i]);
    out.push_back(u);
    out.push_back(-u);
    std::size_t i = 0;
    for (; i < e.size(); ++i) {
      if (e[i] < b) {
        ++e[i];
        break;
      }
      e[i] = -b;
    }
    if (i == e.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool unit_within_bound(const Rat& x, const PlaceSet& s, unsigned bound) {
  if (x == 0 || !is_s_unit(x, s)) return false;
  for (const Int& p : s.primes())
    if (std::labs(valuation(x, p)) > static_cast<long>(bound)) return false;
  return true;
}

}  // namespace

std::vector<UnitEqSolution> solve_unit_equation(const std::vector<Rat>& a,
                                                const PlaceSet& s,
                                                unsigned bound) {
  const std::size_t n = a.size();
  if (n < 1 || n > 3)
    throw std::domain_error("solve_unit_equation: need 1 <= n <= 3 terms");
  for (const Rat& ai : a)
    if (ai == 0) throw std::domain_error("solve_unit_equation: zero coefficient");
  if (bound < 1) throw std::domain_error("solve_unit_equation: bound >= 1");

  std::vector<Rat> units = enumerate_s_units(s, bound);
  std::vector<UnitEqSolution> out;

  auto push = [&](std::vector<Rat> x) {
    bool degen = false;
    // proper nonempty subsets of the terms a_i x_i
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      Rat sum = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) sum += a[i] * x[i];
      if (sum == 0) {
        degen = true;
        break;
      }
    }
    out.push_back(UnitEqSolution{std::move(x), degen});
  };

  if (n == 1) {
    Rat x = 1 / a[0];
    if (unit_within_bound(x, s, bound)) push({x});
  } else if (n == 2) {
    for (const Rat& x1 : units) {
      Rat x2 = (1 - a[0] * x1) / a[1];
      if (unit_within_bound(x2, s, bound)) push({x1, x2});
    }
  } else {
    for (const Rat& x1 : units) {
      const Rat r1 = 1 - a[0] * x1;
      for (const Rat& x2 : units) {
        Rat x3 = (r1 - a[1] * x2) / a[2];
        if (unit_within_bound(x3, s, bound)) push({x1, x2, x3});
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const UnitEqSolution& l, const UnitEqSolution& r) {
              return std::lexicographical_compare(l.x.begin(), l.x.end(),
                                                  r.x.begin(), r.x.end());
            });
  return out;
}

}  // namespace qdyn
