#ifndef QDYN_CENSUS_HPP
#define QDYN_CENSUS_HPP

// Bounded census of good-reduction quadratic maps over a prime set S:
// enumerate maps, harvest their rational cycles, bucket conjugacy classes,
// run the theorem-backed verifier suite, and emit a deterministic JSON
// report.
//
// Both enumeration strategies share the height bound H:
//   by-coeffs  every canonical coefficient tuple with max |coefficient| <= H
//              whose resultant is an S-unit;
//   by-cycles  every cycle shape ([0:1],[1:0],[1:1],P_3,...,P_{n-1}) with
//              point heights <= H and 3 <= n <= max_period, solved for maps
//              by interpolation; kernel members kept when their coefficient
//              height is <= H and their resultant is an S-unit.
// Records are sorted by coefficient tuple and classes by representative
// before emission, so the report bytes do not depend on the worker count.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdyn/arith.hpp"
#include "qdyn/dynamics.hpp"

namespace qdyn {

struct CensusConfig {
  PlaceSet s = PlaceSet::parse("2,3");
  unsigned height = 8;
  unsigned max_period = 6;
  std::string strategy = "by-cycles";  // or "by-coeffs"
  unsigned workers = 1;                // 0 = hardware concurrency
};

struct RecordChecks {
  bool prop61 = false;        // cycle-ideal translation and divisibility laws
  bool mobius_bound = false;  // exact-period point counts within the bound
  // Normal-form S-unit conclusions; set only when a 3- or 4-cycle exists.
  std::optional<bool> n34;
  // Branch of the period-3 classification; set only when a 3-cycle exists.
  std::optional<std::string> prop_n3_branch;
};

struct CensusRecord {
  RationalMap map;
  std::vector<Cycle> cycles;  // exact periods up to max_period, by (length, start)
  std::string class_id;       // "c<k>", or "unclassified" without a >=3 cycle
  RecordChecks checks;
};

struct CensusClass {
  std::string id;
  RationalMap representative;  // least coefficient tuple among the members
  std::vector<std::size_t> members;  // record indices, ascending
};

struct CensusResult {
  CensusConfig config;
  std::vector<CensusRecord> records;
  std::vector<CensusClass> classes;
  std::vector<std::size_t> unclassified;
};

// A theorem-backed check failed on census data: an implementation bug.
struct verification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Points of exact period n of a degree-d map number at most d+1 for n = 1
// and sum_{k|n} moebius(n/k) d^k for n > 1.
Int mobius_period_bound(unsigned d, unsigned n);

// All maps the strategy yields, deduplicated, sorted by coefficient tuple.
std::vector<RationalMap> enumerate_maps(const CensusConfig& cfg);

// Rational cycles of every exact period 1..max_period, by (length, start).
std::vector<Cycle> harvest_cycles(const RationalMap& phi, unsigned max_period);

// Fills checks on every record (in parallel per cfg.workers) and throws
// verification_error on any failure.  Cycles must already be harvested.
void verify_all(CensusResult& result);

// Partitions records with a cycle of length >= 3 under conjugacy witnesses
// at the shortest common cycle length, union-find closed; fills class_id,
// classes, unclassified.
void classify(CensusResult& result);

// enumerate -> harvest -> verify -> classify.
CensusResult run_census(const CensusConfig& cfg);

// Deterministic serialization; byte-identical for identical config.
// Coefficients are JSON integers, cycle points and disc decimal strings.
std::string report_json(const CensusResult& result);

struct ReportCheck {
  bool ok{true};
  std::vector<std::string> violations;
};
// Re-runs the census for the report's config and compares the regenerated
// document structurally against the given one.
ReportCheck verify_report(const std::string& json_text);

}  // namespace qdyn

#endif
