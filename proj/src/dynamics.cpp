#include "qdyn/dynamics.hpp"

#include <map>
#include <set>
#include <utility>

namespace qdyn {

namespace {

// Divides both forms by their signed joint content (first nonzero
// coefficient of F then G made positive); returns the positive content.
Int normalize_pair(BinaryForm& f, BinaryForm& g) {
  Int c(0);
  for (const Int& v : f.c) c = gcd(c, v);
  for (const Int& v : g.c) c = gcd(c, v);
  if (c == 0) throw degenerate_error("map: both forms are zero");
  int sign = 0;
  for (const Int& v : f.c)
    if (v != 0) {
      sign = sgn(v);
      break;
    }
  if (sign == 0)
    for (const Int& v : g.c)
      if (v != 0) {
        sign = sgn(v);
        break;
      }
  Int d = sign < 0 ? Int(-c) : c;
  for (Int& v : f.c) v /= d;
  for (Int& v : g.c) v /= d;
  return c;
}

std::string form_str(const BinaryForm& f) {
  const unsigned d = f.degree();
  std::string s;
  for (unsigned i = 0; i <= d; ++i) {
    const Int& cf = f.c[i];
    if (cf == 0) continue;
    if (s.empty()) {
      if (cf < 0) s += "-";
    } else {
      s += cf < 0 ? " - " : " + ";
    }
    std::string mono;
    unsigned px = d - i, py = i;
    if (px) {
      mono += "x";
      if (px > 1) mono += "^" + std::to_string(px);
    }
    if (py) {
      mono += "y";
      if (py > 1) mono += "^" + std::to_string(py);
    }
    Int a = abs(cf);
    if (a != 1 || mono.empty()) s += a.get_str();
    s += mono;
  }
  return s.empty() ? "0" : s;
}

std::string coeff_list(const BinaryForm& f) {
  std::string s;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (i) s += ',';
    s += f.c[i].get_str();
  }
  return s;
}

}  // namespace

std::string RationalMap::wire() const {
  return coeff_list(F) + ";" + coeff_list(G);
}

std::string RationalMap::str() const {
  return "[" + form_str(F) + " : " + form_str(G) + "]";
}

RationalMap make_map(const BinaryForm& F, const BinaryForm& G) {
  if (F.degree() != G.degree())
    throw std::domain_error("make_map: forms of unequal degree");
  if (F.degree() < 1) throw std::domain_error("make_map: degree must be >= 1");
  BinaryForm f = F, g = G;
  normalize_pair(f, g);
  Int r = resultant(f, g);
  if (r == 0) throw degenerate_error("make_map: resultant is zero");
  return RationalMap{std::move(f), std::move(g), std::move(r)};
}

RationalMap make_map(const std::vector<Rat>& f, const std::vector<Rat>& g) {
  Int den = 1;
  for (const Rat& q : f) den = lcm(den, q.get_den());
  for (const Rat& q : g) den = lcm(den, q.get_den());
  auto cleared = [&den](const std::vector<Rat>& coeffs) {
    std::vector<Int> out;
    out.reserve(coeffs.size());
    for (const Rat& q : coeffs) out.push_back(Rat(q * den).get_num());
    return BinaryForm(out);
  };
  return make_map(cleared(f), cleared(g));
}

RationalMap parse_map(const std::string& s) {
  const auto semi = s.find(';');
  if (semi == std::string::npos || s.find(';', semi + 1) != std::string::npos)
    throw std::domain_error("parse_map: expected \"f0,...;g0,...\"");
  auto parse_list = [](const std::string& part) {
    std::vector<Rat> out;
    std::size_t pos = 0;
    while (true) {
      const auto comma = part.find(',', pos);
      out.push_back(parse_rat(part.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  };
  const auto fs = parse_list(s.substr(0, semi));
  const auto gs = parse_list(s.substr(semi + 1));
  if (fs.size() != gs.size())
    throw std::domain_error("parse_map: coefficient lists of unequal length");
  Int l(1);
  for (const Rat& v : fs) l = lcm(l, v.get_den());
  for (const Rat& v : gs) l = lcm(l, v.get_den());
  auto to_ints = [&](const std::vector<Rat>& v) {
    std::vector<Int> w;
    w.reserve(v.size());
    for (const Rat& e : v) w.push_back(Rat(e * l).get_num());
    return w;
  };
  return make_map(BinaryForm(to_ints(fs)), BinaryForm(to_ints(gs)));
}

ProjPoint apply_map(const RationalMap& phi, const ProjPoint& p) {
  return ProjPoint::of(evaluate(phi.F, p.x, p.y), evaluate(phi.G, p.x, p.y));
}

bool maps_equal(const RationalMap& a, const RationalMap& b) { return a == b; }

RationalMap power_map(const RationalMap& phi, unsigned n) {
  if (n == 0) throw std::domain_error("power_map: n must be >= 1");
  const unsigned d = phi.degree();
  unsigned long target = 1;
  for (unsigned i = 0; i < n; ++i) {
    target *= d;
    if (target > kPowerDegreeBudget)
      throw budget_error("power_map: degree budget exceeded",
                         "iterate degree passes " +
                             std::to_string(kPowerDegreeBudget));
  }
  RationalMap acc = phi;
  for (unsigned k = 1; k < n; ++k) {
    BinaryForm f = compose(phi.F, acc.F, acc.G);
    BinaryForm g = compose(phi.G, acc.F, acc.G);
    const Int e = normalize_pair(f, g);
    // Res(F(F_k,G_k), G(F_k,G_k)) = Res(F,G)^(d^k) * Res(F_k,G_k)^(d^2),
    // then content e comes out of both degree-d^(k+1) forms.
    Int r = int_pow(phi.res, acc.degree()) *
            int_pow(acc.res, static_cast<unsigned long>(d) * d);
    const Int scale = int_pow(e, 2ul * f.degree());
    if (r % scale != 0)
      throw std::logic_error("power_map: resultant tracking failed");
    acc = RationalMap{std::move(f), std::move(g), r / scale};
  }
  return acc;
}

std::pair<BinaryForm, BinaryForm> conjugate_forms(const RationalMap& phi,
                                                  const Mobius& A) {
  const BinaryForm u({A.d, -A.b});   // adjugate image of X
  const BinaryForm v({-A.c, A.a});   // adjugate image of Y
  const BinaryForm fs = compose(phi.F, u, v);
  const BinaryForm gs = compose(phi.G, u, v);
  return {add(scale(fs, A.a), scale(gs, A.b)),
          add(scale(fs, A.c), scale(gs, A.d))};
}

RationalMap conjugate_map(const RationalMap& phi, const Mobius& A) {
  auto [f, g] = conjugate_forms(phi, A);
  return make_map(f, g);
}

Cycle Cycle::of(std::vector<ProjPoint> pts) {
  if (pts.empty()) throw std::domain_error("Cycle: empty");
  std::set<ProjPoint> seen(pts.begin(), pts.end());
  if (seen.size() != pts.size())
    throw std::domain_error("Cycle: points not pairwise distinct");
  return Cycle{std::move(pts)};
}

std::string Cycle::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) s += ",";
    s += points[i].str();
  }
  return s + ")";
}

bool is_cycle(const RationalMap& phi, const Cycle& c) {
  const std::size_t n = c.length();
  for (std::size_t i = 0; i < n; ++i)
    if (apply_map(phi, c[i]) != c[(i + 1) % n]) return false;
  return true;
}

OrbitResult orbit(const RationalMap& phi, const ProjPoint& start,
                  unsigned max_steps) {
  if (max_steps == 0) throw std::domain_error("orbit: max_steps must be >= 1");
  std::vector<ProjPoint> seq{start};
  std::map<ProjPoint, std::size_t> index{{start, 0}};
  for (unsigned step = 0; step < max_steps; ++step) {
    ProjPoint q = apply_map(phi, seq.back());
    if (auto it = index.find(q); it != index.end()) {
      std::vector<ProjPoint> tail(seq.begin(),
                                  seq.begin() + static_cast<long>(it->second));
      std::vector<ProjPoint> cyc(seq.begin() + static_cast<long>(it->second),
                                 seq.end());
      return OrbitResult{std::move(tail), Cycle::of(std::move(cyc))};
    }
    index.emplace(q, seq.size());
    seq.push_back(std::move(q));
  }
  return OrbitResult{std::move(seq), std::nullopt};
}

std::vector<ProjPoint> periodic_points(const RationalMap& phi, unsigned n) {
  const RationalMap pn = power_map(phi, n);
  const BinaryForm cn = sub(mul_y(pn.F), mul_x(pn.G));
  if (cn.is_zero())
    throw std::logic_error("periodic_points: fixed-point form vanished");
  std::vector<ProjPoint> out;
  for (const FormRoot& r : rational_roots(cn)) {
    ProjPoint q = apply_map(phi, r.point);
    unsigned k = 1;
    while (q != r.point) {
      q = apply_map(phi, q);
      if (++k > n)
        throw std::logic_error("periodic_points: period exceeds n on a root");
    }
    if (k == n) out.push_back(r.point);
  }
  return out;
}

std::vector<Cycle> cycles_of_exact_period(const RationalMap& phi, unsigned n) {
  const auto pts = periodic_points(phi, n);
  std::set<ProjPoint> remaining(pts.begin(), pts.end());
  std::vector<Cycle> out;
  while (!remaining.empty()) {
    const ProjPoint p0 = *remaining.begin();
    remaining.erase(remaining.begin());
    std::vector<ProjPoint> cyc{p0};
    for (ProjPoint q = apply_map(phi, p0); q != p0; q = apply_map(phi, q)) {
      remaining.erase(q);
      cyc.push_back(q);
    }
    out.push_back(Cycle::of(std::move(cyc)));
  }
  return out;
}

QuadInterpolation interpolate_quadratic(
    const std::vector<std::pair<ProjPoint, ProjPoint>>& constraints) {
  if (constraints.empty())
    throw std::domain_error("interpolate_quadratic: no constraints");

  // One row per constraint: y_Q F(P) - x_Q G(P) = 0 in (f0,f1,f2,g0,g1,g2).
  std::vector<std::array<Rat, 6>> m;
  for (const auto& [p, q] : constraints) {
    const std::array<Int, 3> mono{p.x * p.x, p.x * p.y, p.y * p.y};
    std::array<Rat, 6> row;
    for (int j = 0; j < 3; ++j) {
      row[j] = Rat(q.y * mono[j]);
      row[3 + j] = Rat(-q.x * mono[j]);
    }
    m.push_back(row);
  }

  std::vector<unsigned> pivot_cols;
  std::size_t r = 0;
  for (unsigned col = 0; col < 6 && r < m.size(); ++col) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    const Rat piv = m[r][col];
    for (unsigned j = col; j < 6; ++j) m[r][j] /= piv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][col] == 0) continue;
      const Rat f = m[i][col];
      for (unsigned j = col; j < 6; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_cols.push_back(col);
    ++r;
  }

  std::array<bool, 6> is_pivot{};
  for (unsigned c : pivot_cols) is_pivot[c] = true;
  QuadInterpolation out;
  for (unsigned j = 0; j < 6; ++j) {
    if (is_pivot[j]) continue;
    std::array<Rat, 6> v{};
    v[j] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
      v[pivot_cols[i]] = -m[i][j];
    Int l(1);
    for (const Rat& e : v) l = lcm(l, e.get_den());
    std::array<Int, 6> w;
    for (int t = 0; t < 6; ++t) w[t] = Rat(v[t] * l).get_num();
    Int c(0);
    for (const Int& e : w) c = gcd(c, e);
    int sign = 0;
    for (const Int& e : w)
      if (e != 0) {
        sign = sgn(e);
        break;
      }
    const Int div = sign < 0 ? Int(-c) : c;
    for (Int& e : w) e /= div;
    out.basis.push_back(w);
    out.free_cols.push_back(j);
  }
  for (const auto& w : out.basis) {
    try {
      out.maps.push_back(make_map(BinaryForm({w[0], w[1], w[2]}),
                                  BinaryForm({w[3], w[4], w[5]})));
    } catch (const degenerate_error&) {
    }
  }
  return out;
}

bool interpolation_contains(const QuadInterpolation& q, const RationalMap& m) {
  if (m.degree() != 2) return false;
  const std::array<Int, 6> w{m.F.c[0], m.F.c[1], m.F.c[2],
                             m.G.c[0], m.G.c[1], m.G.c[2]};
  // The basis is diagonal on the free coordinates, so the combination is
  // forced; compare it against w.
  std::array<Rat, 6> acc{};
  for (std::size_t i = 0; i < q.basis.size(); ++i) {
    const unsigned j = q.free_cols[i];
    const Rat coef = make_rat(w[j], q.basis[i][j]);
    for (int t = 0; t < 6; ++t) acc[t] += coef * q.basis[i][t];
  }
  for (int t = 0; t < 6; ++t)
    if (acc[t] != Rat(w[t])) return false;
  return true;
}

std::vector<SIdeal> cycle_ideals(const Cycle& c, const PlaceSet& s) {
  if (c.length() < 2)
    throw std::domain_error("cycle_ideals: cycle length must be >= 2");
  std::vector<SIdeal> out;
  for (std::size_t i = 1; i < c.length(); ++i)
    out.push_back(pair_ideal(c[0], c[i], s));
  return out;
}

CycleIdealLawReport check_cycle_ideal_laws(const RationalMap& phi,
                                           const Cycle& c, const PlaceSet& s) {
  if (!is_s_unit(Rat(phi.res), s))
    throw std::domain_error(
        "check_cycle_ideal_laws: map lacks good reduction outside S");
  if (!is_cycle(phi, c))
    throw std::domain_error("check_cycle_ideal_laws: not a cycle of the map");
  CycleIdealLawReport rep;
  const std::size_t n = c.length();
  if (n < 2) return rep;
  const auto ideals = cycle_ideals(c, s);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const SIdeal t = pair_ideal(c[k], c[(k + i) % n], s);
      if (!(t == ideals[i - 1]))
        rep.violations.push_back(
            "translation fails at i=" + std::to_string(i) +
            " k=" + std::to_string(k) + ": " + t.gen.get_str() + " vs " +
            ideals[i - 1].gen.get_str());
    }
    if (!ideals[0].divides(ideals[i - 1]))
      rep.violations.push_back("I_1 does not divide I_" + std::to_string(i));
  }
  return rep;
}

namespace {

// The unique Moebius sending (t1[0],t1[1],t1[2]) to the rotated triple
// (t2[h],t2[h+1],t2[h+2]).
Mobius forced_mobius(const Cycle& t1, const Cycle& t2, unsigned h) {
  const std::size_t n = t2.length();
  const Mobius m1 = mobius_to_zero_inf_one(t1[0], t1[1], t1[2]);
  const Mobius m2 = mobius_to_zero_inf_one(t2[h % n], t2[(h + 1) % n],
                                           t2[(h + 2) % n]);
  return m2.inverse() * m1;
}

}  // namespace

std::optional<TupleEquivalence> tuples_equivalent(const Cycle& t1,
                                                  const Cycle& t2,
                                                  const PlaceSet& s) {
  if (t1.length() != t2.length())
    throw std::domain_error("tuples_equivalent: tuple lengths differ");
  const std::size_t n = t1.length();
  if (n < 3)
    throw std::domain_error("tuples_equivalent: length >= 3 required");
  for (unsigned h = 0; h < n; ++h) {
    const Mobius a = forced_mobius(t1, t2, h);
    if (!has_good_reduction(a, s)) continue;
    bool ok = true;
    for (std::size_t j = 3; ok && j < n; ++j) ok = a(t1[j]) == t2[(h + j) % n];
    if (ok) return TupleEquivalence{a, h};
  }
  return std::nullopt;
}

ConjugacyOutcome conjugacy_via_cycles(const RationalMap& phi,
                                      const RationalMap& psi, unsigned n) {
  if (n < 3)
    throw std::domain_error("conjugacy_via_cycles: period >= 3 required");
  const auto cp = cycles_of_exact_period(phi, n);
  const auto cq = cycles_of_exact_period(psi, n);
  if (cp.empty() || cq.empty())
    return ConjugacyOutcome{ConjugacyStatus::inconclusive, std::nullopt};
  for (const Cycle& c : cp)
    for (const Cycle& d : cq)
      for (unsigned h = 0; h < n; ++h) {
        const Mobius a = forced_mobius(c, d, h);
        if (maps_equal(conjugate_map(phi, a), psi))
          return ConjugacyOutcome{ConjugacyStatus::witness, a};
      }
  return ConjugacyOutcome{ConjugacyStatus::refuted, std::nullopt};
}

}  // namespace qdyn
