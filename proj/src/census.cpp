#include "qdyn/census.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"
#include "qdyn/families.hpp"
#include "qdyn/reduction.hpp"

namespace qdyn {

namespace {

using CoeffTuple = std::array<Int, 6>;

CoeffTuple coeff_tuple(const RationalMap& m) {
  return {m.F.c[0], m.F.c[1], m.F.c[2], m.G.c[0], m.G.c[1], m.G.c[2]};
}

// Canonical means content one with positive first nonzero entry, exactly
// the representative make_map stores.
bool tuple_canonical(const CoeffTuple& v) {
  int lead = -1;
  for (int i = 0; i < 6; ++i)
    if (v[i] != 0) {
      lead = i;
      break;
    }
  if (lead < 0 || v[lead] < 0) return false;
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  return g == 1;
}

// Closed-form resultant of a quadratic pair.
Int tuple_resultant(const CoeffTuple& v) {
  const Int s02 = v[0] * v[5] - v[2] * v[3];
  return s02 * s02 - (v[0] * v[4] - v[1] * v[3]) * (v[1] * v[5] - v[2] * v[4]);
}

// Index-pulling worker pool; slot functions may not touch shared state.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (count < workers) workers = static_cast<unsigned>(count ? count : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr err;
  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

void check_config(const CensusConfig& cfg) {
  if (cfg.height == 0)
    throw std::domain_error("census: height must be positive");
  if (cfg.max_period == 0)
    throw std::domain_error("census: max_period must be positive");
  if (cfg.strategy != "by-coeffs" && cfg.strategy != "by-cycles")
    throw std::domain_error("census: strategy must be by-coeffs or by-cycles");
}

// The whole coefficient box fits machine words: |coeff| <= H keeps the
// closed-form resultant below 5 H^4.
std::vector<RationalMap> enumerate_by_coeffs(const CensusConfig& cfg) {
  const long H = static_cast<long>(cfg.height);
  std::vector<long> sp;
  for (const Int& p : cfg.s.primes()) {
    if (!p.fits_slong_p())
      throw std::domain_error("by-coeffs: prime exceeds the machine range");
    sp.push_back(p.get_si());
  }
  std::vector<RationalMap> out;
  long v[6];
  for (v[0] = -H; v[0] <= H; ++v[0])
    for (v[1] = -H; v[1] <= H; ++v[1])
      for (v[2] = -H; v[2] <= H; ++v[2])
        for (v[3] = -H; v[3] <= H; ++v[3])
          for (v[4] = -H; v[4] <= H; ++v[4])
            for (v[5] = -H; v[5] <= H; ++v[5]) {
              int lead = -1;
              for (int i = 0; i < 6 && lead < 0; ++i)
                if (v[i] != 0) lead = i;
              if (lead < 0 || v[lead] < 0) continue;
              long g = 0;
              for (long x : v) {
                long a = x < 0 ? -x : x;
                while (a != 0) {
                  const long t = g % a;
                  g = a;
                  a = t;
                }
              }
              if (g != 1) continue;
              const long s02 = v[0] * v[5] - v[2] * v[3];
              long r = s02 * s02 -
                       (v[0] * v[4] - v[1] * v[3]) * (v[1] * v[5] - v[2] * v[4]);
              if (r == 0) continue;
              r = r < 0 ? -r : r;
              for (long p : sp)
                while (r % p == 0) r /= p;
              if (r != 1) continue;
              out.push_back(make_map(
                  BinaryForm({Int(v[0]), Int(v[1]), Int(v[2])}),
                  BinaryForm({Int(v[3]), Int(v[4]), Int(v[5])})));
            }
  return out;  // the scan order is already lexicographic
}

// Row-Hermite reduction of [A^T | I_6]: unimodular row operations preserve
// the right-block lattice Z^6, so the rows whose left block vanishes form a
// basis of the full integer kernel of A -- saturated, unlike the Z-span of
// a content-stripped rational basis, whose pivots can hide lattice points.
std::vector<CoeffTuple> integer_kernel(const std::vector<CoeffTuple>& rows_a) {
  const std::size_t n = rows_a.size();
  std::vector<std::vector<Int>> m(6, std::vector<Int>(n + 6, Int(0)));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = rows_a[j][i];  // A^T
    m[i][n + i] = 1;
  }
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < 6; ++col) {
    while (true) {
      std::size_t piv = 6;
      for (std::size_t i = r; i < 6; ++i)
        if (m[i][col] != 0 &&
            (piv == 6 || mpz_cmpabs(m[i][col].get_mpz_t(),
                                    m[piv][col].get_mpz_t()) < 0))
          piv = i;
      if (piv == 6) break;
      std::swap(m[piv], m[r]);
      bool clean = true;
      for (std::size_t i = r + 1; i < 6; ++i) {
        if (m[i][col] == 0) continue;
        const Int q = Int(m[i][col] / m[r][col]);
        if (q != 0)
          for (std::size_t j = col; j < n + 6; ++j) m[i][j] -= q * m[r][j];
        if (m[i][col] != 0) clean = false;
      }
      if (clean) {
        ++r;
        break;
      }
    }
  }
  std::vector<CoeffTuple> kernel;
  for (std::size_t i = r; i < 6; ++i) {
    CoeffTuple v;
    for (std::size_t j = 0; j < 6; ++j) v[j] = m[i][n + j];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// Echelon form of the kernel basis over the six coefficient columns, pivots
// positive; rows ordered by pivot column so box bounds peel off weight by
// weight during enumeration.
std::vector<CoeffTuple> echelonize(std::vector<CoeffTuple> b) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < 6 && r < b.size(); ++col) {
    while (true) {
      std::size_t piv = b.size();
      for (std::size_t i = r; i < b.size(); ++i)
        if (b[i][col] != 0 &&
            (piv == b.size() || mpz_cmpabs(b[i][col].get_mpz_t(),
                                           b[piv][col].get_mpz_t()) < 0))
          piv = i;
      if (piv == b.size()) break;
      std::swap(b[piv], b[r]);
      bool clean = true;
      for (std::size_t i = r + 1; i < b.size(); ++i) {
        if (b[i][col] == 0) continue;
        const Int q = Int(b[i][col] / b[r][col]);
        if (q != 0)
          for (std::size_t j = 0; j < 6; ++j) b[i][j] -= q * b[r][j];
        if (b[i][col] != 0) clean = false;
      }
      if (clean) {
        if (b[r][col] < 0)
          for (std::size_t j = 0; j < 6; ++j) b[r][j] = -b[r][j];
        ++r;
        break;
      }
    }
  }
  b.resize(r);  // defensive; kernel bases are independent already
  return b;
}

// All canonical integer kernel members within the coefficient box whose
// resultant is an S-unit.  The echelon pivots bound each weight given the
// earlier ones: at pivot column j of row t only rows <= t contribute, so
// |sum| <= H pins w_t to an interval.
void kernel_members_within(const std::vector<CoeffTuple>& echelon,
                           const CensusConfig& cfg,
                           std::vector<CoeffTuple>& out) {
  if (echelon.empty()) return;
  const Int H(cfg.height);
  std::vector<std::size_t> pivot_col(echelon.size());
  for (std::size_t t = 0; t < echelon.size(); ++t) {
    std::size_t j = 0;
    while (echelon[t][j] == 0) ++j;
    pivot_col[t] = j;
  }
  CoeffTuple v{};
  const std::function<void(std::size_t)> descend = [&](std::size_t t) {
    if (t == echelon.size()) {
      bool ok = true;
      for (int i = 0; i < 6 && ok; ++i) ok = abs(v[i]) <= H;
      if (ok && tuple_canonical(v)) {
        const Int r = tuple_resultant(v);
        if (r != 0 && is_s_unit(Rat(r), cfg.s)) out.push_back(v);
      }
      return;
    }
    const Int& p = echelon[t][pivot_col[t]];
    const Int off = v[pivot_col[t]];  // copy: v mutates inside the loop
    Int lo, hi;  // ceil((-H - off) / p), floor((H - off) / p)
    mpz_cdiv_q(lo.get_mpz_t(), Int(-H - off).get_mpz_t(), p.get_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), Int(H - off).get_mpz_t(), p.get_mpz_t());
    for (Int w = lo; w <= hi; ++w) {
      if (w != 0)
        for (int i = 0; i < 6; ++i) v[i] += w * echelon[t][i];
      descend(t + 1);
      if (w != 0)
        for (int i = 0; i < 6; ++i) v[i] -= w * echelon[t][i];
    }
  };
  descend(0);
}

// One orbit constraint P -> Q as a row over (f0, f1, f2, g0, g1, g2):
// y_Q F(P) - x_Q G(P) = 0.
CoeffTuple constraint_row(const ProjPoint& p, const ProjPoint& q) {
  const Int xx = p.x * p.x, xy = p.x * p.y, yy = p.y * p.y;
  return {q.y * xx, q.y * xy, q.y * yy, -q.x * xx, -q.x * xy, -q.x * yy};
}

std::vector<RationalMap> enumerate_by_cycles(const CensusConfig& cfg) {
  const long H = static_cast<long>(cfg.height);
  std::set<ProjPoint> box;
  for (long x = -H; x <= H; ++x)
    for (long y = -H; y <= H; ++y)
      if (x != 0 || y != 0) box.insert(ProjPoint::of(Int(x), Int(y)));
  const std::vector<ProjPoint> pts(box.begin(), box.end());

  const ProjPoint p0 = ProjPoint::of(0, 1), p1 = ProjPoint::of(1, 0),
                  p2 = ProjPoint::of(1, 1);
  const auto is_base = [&](const ProjPoint& p) {
    return p == p0 || p == p1 || p == p2;
  };

  // A length-n shape imposes n conditions on the six coefficients, so
  // nothing survives past n = 6 generically; longer shapes are not scanned.
  // Work splits into (length, first free point) slices to keep the tuple
  // space out of memory.
  const unsigned max_len = std::min(cfg.max_period, 6u);
  struct Slice {
    unsigned len;
    std::size_t first;  // pts index of the first free point; unused at len 3
  };
  std::vector<Slice> slices;
  for (unsigned len = 3; len <= max_len; ++len) {
    if (len == 3) {
      slices.push_back({3, 0});
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!is_base(pts[i])) slices.push_back({len, i});
  }

  std::vector<std::vector<CoeffTuple>> found(slices.size());
  parallel_for(slices.size(), cfg.workers, [&](std::size_t si) {
    const Slice slice = slices[si];
    std::vector<ProjPoint> tuple{p0, p1, p2};
    if (slice.len > 3) tuple.push_back(pts[slice.first]);
    const std::function<void()> emit = [&] {
      std::vector<CoeffTuple> rows;
      rows.reserve(tuple.size());
      for (std::size_t i = 0; i < tuple.size(); ++i)
        rows.push_back(constraint_row(tuple[i], tuple[(i + 1) % tuple.size()]));
      kernel_members_within(echelonize(integer_kernel(rows)), cfg, found[si]);
    };
    const std::function<void()> grow = [&] {
      if (tuple.size() == slice.len) {
        emit();
        return;
      }
      for (const ProjPoint& p : pts) {
        if (is_base(p)) continue;
        if (std::find(tuple.begin() + 3, tuple.end(), p) != tuple.end())
          continue;
        tuple.push_back(p);
        grow();
        tuple.pop_back();
      }
    };
    grow();
  });

  std::set<CoeffTuple> uniq;
  for (const auto& chunk : found) uniq.insert(chunk.begin(), chunk.end());
  std::vector<RationalMap> out;
  out.reserve(uniq.size());
  for (const CoeffTuple& v : uniq)
    out.push_back(make_map(BinaryForm({v[0], v[1], v[2]}),
                           BinaryForm({v[3], v[4], v[5]})));
  return out;  // set order is the coefficient-tuple order
}

bool conjugate_at(const CensusRecord& x, const CensusRecord& y, unsigned n) {
  for (const Cycle& c : x.cycles) {
    if (c.length() != n) continue;
    const Mobius to_x = mobius_to_zero_inf_one(c[0], c[1], c[2]);
    for (const Cycle& d : y.cycles) {
      if (d.length() != n) continue;
      for (unsigned h = 0; h < n; ++h) {
        const Mobius a =
            mobius_to_zero_inf_one(d[h % n], d[(h + 1) % n], d[(h + 2) % n])
                .inverse() *
            to_x;
        if (maps_equal(conjugate_map(x.map, a), y.map)) return true;
      }
    }
  }
  return false;
}

long long to_json_int(const Int& v) {
  if (!v.fits_slong_p())
    throw std::logic_error("report: value exceeds the JSON integer range");
  return v.get_si();
}

nlohmann::ordered_json coeffs_json(const RationalMap& m) {
  auto form = [](const BinaryForm& f) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const Int& c : f.c) a.push_back(to_json_int(c));
    return a;
  };
  return nlohmann::ordered_json::array({form(m.F), form(m.G)});
}

}  // namespace

Int mobius_period_bound(unsigned d, unsigned n) {
  if (d == 0 || n == 0)
    throw std::domain_error("mobius_period_bound: d, n >= 1 required");
  if (n == 1) return Int(d) + 1;
  Int sum = 0;
  for (unsigned k = 1; k <= n; ++k)
    if (n % k == 0) sum += Int(moebius(n / k)) * int_pow(Int(d), k);
  return sum;
}

std::vector<RationalMap> enumerate_maps(const CensusConfig& cfg) {
  check_config(cfg);
  return cfg.strategy == "by-coeffs" ? enumerate_by_coeffs(cfg)
                                     : enumerate_by_cycles(cfg);
}

std::vector<Cycle> harvest_cycles(const RationalMap& phi, unsigned max_period) {
  if (max_period == 0)
    throw std::domain_error("harvest_cycles: max_period >= 1 required");
  std::vector<Cycle> out;
  for (unsigned n = 1; n <= max_period; ++n)
    for (Cycle& c : cycles_of_exact_period(phi, n)) out.push_back(std::move(c));
  return out;
}

void verify_all(CensusResult& result) {
  const PlaceSet& s = result.config.s;
  parallel_for(result.records.size(), result.config.workers, [&](std::size_t i) {
    CensusRecord& r = result.records[i];
    const std::string where = r.map.wire();
    if (!good_outside(r.map, s))
      throw verification_error(where + ": map is not good outside S");
    for (const Cycle& c : r.cycles)
      if (!is_cycle(r.map, c))
        throw verification_error(where + ": stored points are not a cycle");

    r.checks.prop61 = true;
    for (const Cycle& c : r.cycles) {
      if (c.length() < 2) continue;  // the ideal laws relate distinct points
      if (!check_cycle_ideal_laws(r.map, c, s).all_hold()) {
        r.checks.prop61 = false;
        throw verification_error(where + ": cycle-ideal laws violated");
      }
    }

    std::map<std::size_t, Int> points_of_period;
    for (const Cycle& c : r.cycles) points_of_period[c.length()] += c.length();
    r.checks.mobius_bound = true;
    for (const auto& [n, count] : points_of_period)
      if (count > mobius_period_bound(r.map.degree(),
                                      static_cast<unsigned>(n))) {
        r.checks.mobius_bound = false;
        throw verification_error(where + ": exact-period point count exceeds " +
                                 "the Mobius bound");
      }

    for (const Cycle& c : r.cycles) {
      const std::size_t n = c.length();
      if (n != 3 && n != 4) continue;
      const auto [nf, a] = to_normal_form(r.map, c[n - 1], c[0], c[1], c[2]);
      if (!verify_lemma_n34(nf, s, a.inverse()).all_pass()) {
        r.checks.n34 = false;
        throw verification_error(where + ": normal-form S-unit conclusions " +
                                 "failed on a length-" + std::to_string(n) +
                                 " cycle");
      }
      r.checks.n34 = true;
      if (n == 3 && !r.checks.prop_n3_branch) {
        if (nf.lambda != 1)
          throw verification_error(where +
                                   ": period-3 normal form has lambda != 1");
        try {
          r.checks.prop_n3_branch =
              classify_prop_n3(nf.a / nf.b, nf.c / nf.b, s).primary;
        } catch (const std::domain_error& e) {
          throw verification_error(where + ": period-3 classification " +
                                   "precondition failed: " + e.what());
        }
      }
    }
  });
}

void classify(CensusResult& result) {
  const std::size_t n = result.records.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  const std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  std::vector<std::vector<unsigned>> lens(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Cycle& c : result.records[i].cycles)
      if (c.length() >= 3) lens[i].push_back(static_cast<unsigned>(c.length()));
    std::sort(lens[i].begin(), lens[i].end());
    lens[i].erase(std::unique(lens[i].begin(), lens[i].end()), lens[i].end());
  }

  result.unclassified.clear();
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (lens[i].empty()) {
      result.unclassified.push_back(i);
      result.records[i].class_id = "unclassified";
      continue;
    }
    bool joined = false;
    for (const std::size_t r : roots) {
      if (find(r) != r) continue;  // absorbed by an earlier merge
      unsigned common = 0;
      for (unsigned ln : lens[i]) {
        if (std::binary_search(lens[r].begin(), lens[r].end(), ln)) {
          common = ln;
          break;
        }
      }
      if (common == 0) continue;
      if (conjugate_at(result.records[i], result.records[r], common)) {
        unite(i, r);
        joined = true;
      }
    }
    if (!joined) roots.push_back(i);
  }

  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i)
    if (!lens[i].empty()) members[find(i)].push_back(i);

  result.classes.clear();
  std::size_t next_id = 0;
  for (auto& [root, idx] : members) {
    CensusClass cls;
    cls.id = "c" + std::to_string(next_id++);
    cls.representative = result.records[idx.front()].map;
    cls.members = idx;  // ascending, so the front holds the least tuple
    for (const std::size_t i : idx) result.records[i].class_id = cls.id;
    result.classes.push_back(std::move(cls));
  }
}

CensusResult run_census(const CensusConfig& cfg) {
  check_config(cfg);
  CensusResult result;
  result.config = cfg;
  const std::vector<RationalMap> maps = enumerate_maps(cfg);
  result.records.resize(maps.size());
  parallel_for(maps.size(), cfg.workers, [&](std::size_t i) {
    result.records[i].map = maps[i];
    result.records[i].cycles = harvest_cycles(maps[i], cfg.max_period);
  });
  verify_all(result);
  classify(result);
  return result;
}

std::string report_json(const CensusResult& result) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["config"]["s"] = ojson::array();
  for (const Int& p : result.config.s.primes())
    doc["config"]["s"].push_back(to_json_int(p));
  doc["config"]["height"] = result.config.height;
  doc["config"]["strategy"] = result.config.strategy;
  doc["config"]["max_period"] = result.config.max_period;

  std::map<unsigned, unsigned long> cycle_counts;
  std::map<unsigned, std::set<std::string>> classes_of_period;
  long finite_set_candidates = 0;

  doc["records"] = ojson::array();
  for (const CensusRecord& r : result.records) {
    ojson rec;
    rec["map"] = coeffs_json(r.map);
    rec["disc"] = Int(abs(r.map.res)).get_str();
    rec["cycles"] = ojson::array();
    for (const Cycle& c : r.cycles) {
      ojson cyc;
      cyc["points"] = ojson::array();
      for (const ProjPoint& p : c.points)
        cyc["points"].push_back(
            ojson::array({p.x.get_str(), p.y.get_str()}));
      cyc["period"] = c.length();
      rec["cycles"].push_back(std::move(cyc));
      const unsigned ln = static_cast<unsigned>(c.length());
      ++cycle_counts[ln];
      if (r.class_id != "unclassified") classes_of_period[ln].insert(r.class_id);
    }
    rec["class_id"] = r.class_id;
    rec["checks"]["prop61"] = r.checks.prop61;
    rec["checks"]["mobius_bound"] = r.checks.mobius_bound;
    rec["checks"]["n34"] =
        r.checks.n34 ? ojson(*r.checks.n34) : ojson(nullptr);
    rec["checks"]["prop_n3_branch"] =
        r.checks.prop_n3_branch ? ojson(*r.checks.prop_n3_branch)
                                : ojson(nullptr);
    if (r.checks.prop_n3_branch &&
        *r.checks.prop_n3_branch == "finite-set-candidate")
      ++finite_set_candidates;
    doc["records"].push_back(std::move(rec));
  }

  doc["classes"] = ojson::array();
  for (const CensusClass& c : result.classes) {
    ojson cls;
    cls["id"] = c.id;
    cls["representative"] = coeffs_json(c.representative);
    cls["size"] = c.members.size();
    doc["classes"].push_back(std::move(cls));
  }

  ojson& sum = doc["summary"];
  sum["records"] = result.records.size();
  sum["classes"] = result.classes.size();
  sum["unclassified"] = result.unclassified.size();
  sum["finite_set_candidates"] = finite_set_candidates;
  sum["cycles_per_period"] = ojson::object();
  sum["classes_per_period"] = ojson::object();
  for (unsigned p = 1; p <= result.config.max_period; ++p) {
    const std::string key = std::to_string(p);
    sum["cycles_per_period"][key] =
        cycle_counts.count(p) ? cycle_counts[p] : 0;
    sum["classes_per_period"][key] =
        classes_of_period.count(p) ? classes_of_period[p].size() : 0;
  }
  return doc.dump(2) + "\n";
}

ReportCheck verify_report(const std::string& json_text) {
  ReportCheck out;
  nlohmann::json given;
  try {
    given = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    out.ok = false;
    out.violations.push_back(std::string("report does not parse: ") + e.what());
    return out;
  }
  try {
    CensusConfig cfg;
    const auto& c = given.at("config");
    std::vector<Int> primes;
    for (const auto& p : c.at("s")) primes.push_back(Int(p.get<long>()));
    cfg.s = PlaceSet::of(primes);
    cfg.height = c.at("height").get<unsigned>();
    cfg.strategy = c.at("strategy").get<std::string>();
    cfg.max_period = c.at("max_period").get<unsigned>();
    const nlohmann::json fresh =
        nlohmann::json::parse(report_json(run_census(cfg)));
    if (fresh == given) return out;
    out.ok = false;
    for (const char* key : {"config", "records", "classes", "summary"}) {
      const bool fh = fresh.contains(key), gh = given.contains(key);
      if (fh != gh || (fh && fresh.at(key) != given.at(key)))
        out.violations.push_back(std::string("section '") + key +
                                 "' differs from the recomputed census");
    }
    if (out.violations.empty())
      out.violations.push_back("document differs from the recomputed census");
  } catch (const std::exception& e) {
    out.ok = false;
    out.violations.push_back(std::string("recomputation failed: ") + e.what());
  }
  return out;
}

}  // namespace qdyn
