#ifndef QDYN_ARITH_HPP
#define QDYN_ARITH_HPP

// Exact arithmetic over Q relative to a finite set S of rational primes.
//
// R_S = Z[1/p : p in S] is the ring of S-integers; its unit group R_S* is
// {+-1} x <S>.  Everything here is exact: Int is an arbitrary-precision
// integer, Rat a rational in lowest terms with positive denominator.
// Valuations are the usual p-adic ones, v_p(x) = (exponent of p in x),
// extended to Q* by v_p(a/b) = v_p(a) - v_p(b).

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdyn {

using Int = mpz_class;
using Rat = mpq_class;

// num/den reduced, den > 0.  den == 0 is a domain error.
Rat make_rat(const Int& num, const Int& den);

// Accepts "a" or "a/b"; domain error on zero denominator or garbage.
Rat parse_rat(const std::string& s);
Int parse_int(const std::string& s);

Int int_pow(const Int& base, unsigned long e);

// p^e for e of either sign.
Rat rat_pow(const Int& p, long e);

// Moebius function; n >= 1.
int moebius(unsigned long n);

enum class Primality { composite, prime, probable_prime };

// Deterministic Miller-Rabin on the first twelve prime bases certifies
// everything below 3.3e24 (covers 64-bit); beyond that BPSW-style testing
// gives probable_prime, never a silent "prime".
Primality classify_prime(const Int& n);
bool is_prime(const Int& n);  // true for prime or probable_prime

// Finite set of rational primes, stored strictly increasing.
class PlaceSet {
 public:
  PlaceSet() = default;
  // Sorts, deduplicates, and checks primality of every element.
  static PlaceSet of(std::vector<Int> primes);
  static PlaceSet parse(const std::string& csv);  // "2,3,5"; "" = empty set

  bool contains(const Int& p) const;
  const std::vector<Int>& primes() const { return primes_; }
  bool empty() const { return primes_.empty(); }
  std::size_t size() const { return primes_.size(); }
  std::string str() const;

  bool operator==(const PlaceSet& o) const { return primes_ == o.primes_; }

 private:
  std::vector<Int> primes_;
};

// v_p(x); x != 0 and p prime are required.
long valuation(const Int& x, const Int& p);
long valuation(const Rat& x, const Int& p);

bool is_s_integer(const Rat& x, const PlaceSet& s);
bool is_s_unit(const Rat& x, const PlaceSet& s);

// For a nonzero S-integer x, the positive generator of the Z-part of x
// prime to S: prod_{p not in S} p^{v_p(x)}.  Needs no factoring; only the
// primes of S are divided out.
Int outside_s_part(const Rat& x, const PlaceSet& s);

// Nonzero ideal of R_S, identified by its unique positive generator
// coprime to S.  R_S is a PID, so this loses nothing.
struct SIdeal {
  Int gen{1};

  static SIdeal of(const Rat& x, const PlaceSet& s);  // (x) R_S, x != 0
  bool divides(const SIdeal& other) const;
  SIdeal operator*(const SIdeal& o) const { return SIdeal{gen * o.gen}; }
  bool operator==(const SIdeal& o) const { return gen == o.gen; }
  bool is_unit() const { return gen == 1; }
};

struct FactorTerm {
  Int p;
  unsigned long e{0};
  bool certified{true};  // false only for probable primes past 64 bits
};

struct Factorization {
  int sign{1};
  std::vector<FactorTerm> terms;  // sorted by p

  Int value() const;
};

struct FactorBudget {
  unsigned long trial_limit = 1'000'000;        // trial division bound
  unsigned long long rho_iterations = 8'000'000;  // total Brent-rho budget
};

// Thrown when a work budget runs out; carries whatever partial result the
// operation had accumulated, serialized into `detail`.
class budget_error : public std::runtime_error {
 public:
  budget_error(const std::string& what, std::string detail = {})
      : std::runtime_error(what), detail_(std::move(detail)) {}
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
};

// n != 0.  Trial division below budget.trial_limit, then Brent rho with an
// iteration budget; unsplit composites raise budget_error carrying the
// partial factorization.
Factorization factorize(const Int& n, const FactorBudget& budget = {});

// All u in R_S* with |v_p(u)| <= bound for every p in S, ascending.
// Size is exactly 2*(2*bound+1)^|S|.
std::vector<Rat> enumerate_s_units(const PlaceSet& s, unsigned bound);

struct UnitEqSolution {
  std::vector<Rat> x;
  // Some proper nonempty subsum of a_i x_i vanishes.
  bool degenerate{false};
};

// All solutions of a_1 x_1 + ... + a_n x_n = 1 with each x_i an S-unit
// within the exponent bound (1 <= n <= 3).  Bounded brute force; complete
// within the box, sorted lexicographically.
std::vector<UnitEqSolution> solve_unit_equation(const std::vector<Rat>& a,
                                                const PlaceSet& s,
                                                unsigned bound = 12);

}  // namespace qdyn

#endif
