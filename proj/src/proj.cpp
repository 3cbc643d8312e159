#include "qdyn/proj.hpp"

#include <algorithm>

namespace qdyn {

ProjPoint ProjPoint::of(const Int& x, const Int& y) {
  if (x == 0 && y == 0)
    throw std::domain_error("ProjPoint: (0,0) is not a point");
  Int g = gcd(x, y);  // gmp gcd is nonnegative
  ProjPoint p;
  p.x = x / g;
  p.y = y / g;
  if (p.y < 0 || (p.y == 0 && p.x < 0)) {
    p.x = -p.x;
    p.y = -p.y;
  }
  return p;
}

ProjPoint ProjPoint::from_rats(const Rat& xr, const Rat& yr) {
  // clear denominators, then reduce
  Int m = lcm(Int(xr.get_den()), Int(yr.get_den()));
  return of(Int(Rat(xr * m).get_num()), Int(Rat(yr * m).get_num()));
}

ProjPoint ProjPoint::affine(const Rat& t) {
  return ProjPoint{Int(t.get_num()), Int(t.get_den())};
}

ProjPoint ProjPoint::parse(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::domain_error("ProjPoint: expected 'x,y', got '" + s + "'");
  return of(parse_int(s.substr(0, comma)), parse_int(s.substr(comma + 1)));
}

Rat ProjPoint::affine_coord() const {
  if (y == 0) throw std::domain_error("affine_coord: point at infinity");
  return make_rat(x, y);
}

std::string ProjPoint::str() const {
  return "[" + x.get_str() + ":" + y.get_str() + "]";
}

std::string ProjPoint::wire() const { return x.get_str() + "," + y.get_str(); }

Int naive_height(const ProjPoint& p) { return std::max(abs(p.x), abs(p.y)); }

Mobius Mobius::of(const Int& a, const Int& b, const Int& c, const Int& d) {
  if (a * d - b * c == 0)
    throw std::domain_error("Mobius: determinant must be nonzero");
  Int g = gcd(gcd(a, b), gcd(c, d));
  Mobius m{a / g, b / g, c / g, d / g};
  const Int* first = &m.a;
  for (const Int* e : {&m.a, &m.b, &m.c, &m.d})
    if (*e != 0) {
      first = e;
      break;
    }
  if (*first < 0) {
    m.a = -m.a;
    m.b = -m.b;
    m.c = -m.c;
    m.d = -m.d;
  }
  return m;
}

Mobius Mobius::inverse() const { return of(d, -b, -c, a); }

Mobius Mobius::operator*(const Mobius& o) const {
  return of(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d);
}

ProjPoint Mobius::operator()(const ProjPoint& p) const {
  return ProjPoint::of(Int(a * p.x + b * p.y), Int(c * p.x + d * p.y));
}

std::string Mobius::str() const {
  return "(" + a.get_str() + " " + b.get_str() + " / " + c.get_str() + " " +
         d.get_str() + ")";
}

bool has_good_reduction(const Mobius& m, const PlaceSet& s) {
  return is_s_unit(Rat(m.det()), s);
}

long log_distance(const ProjPoint& p1, const ProjPoint& p2, const Int& p) {
  if (p1 == p2) throw std::domain_error("log_distance: points must differ");
  // canonical coprime coordinates make both min-terms vanish
  return valuation(Int(p1.x * p2.y - p2.x * p1.y), p);
}

SIdeal pair_ideal(const ProjPoint& p1, const ProjPoint& p2,
                  const PlaceSet& s) {
  if (p1 == p2) throw std::domain_error("pair_ideal: points must differ");
  return SIdeal{outside_s_part(Rat(p1.x * p2.y - p2.x * p1.y), s)};
}

Mobius mobius_to_zero_inf_one(const ProjPoint& p0, const ProjPoint& p1,
                              const ProjPoint& p2) {
  if (p0 == p1 || p0 == p2 || p1 == p2)
    throw std::domain_error("mobius_to_zero_inf_one: points must be distinct");
  // Row one kills p0, row two kills p1; the scalars are fixed by p2 -> [1:1].
  Int t = p1.y * p2.x - p1.x * p2.y;
  Int s = p0.y * p2.x - p0.x * p2.y;
  return Mobius::of(t * p0.y, -t * p0.x, s * p1.y, -s * p1.x);
}

}  // namespace qdyn
