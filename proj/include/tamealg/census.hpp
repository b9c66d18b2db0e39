#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamealg/algebra.hpp"

namespace tamealg {

enum class CensusMode { Exhaustive, Sampled };

struct CensusParams {
  Signature sig;
  unsigned k = 2;
  uint32_t p = 2;
  CensusMode mode = CensusMode::Sampled;
  uint64_t samples = 10000; // sampled mode only
  uint64_t seed = 0;
};

struct WilsonInterval {
  double low = 0, high = 1;
};
// 99% two-sided score interval (z = 2.5758293035489004)
WilsonInterval wilson99(uint64_t successes, uint64_t total);

// per-structure verdict flags, also the CSV row payload in exhaustive mode
struct StructureFlags {
  bool minimal_fast = false;
  bool minimal_oracle = false;
  bool oracle_ran = false;
  bool nontrivial_aut = false; // automorphisms beyond the scalar subgroup
  bool onedim = false;         // has a 1-dimensional subalgebra
};

struct ScanRequest {
  bool with_minimality_oracle = false;
  bool with_aut = false;
  bool with_onedim = false;
};

struct ScanTotals {
  uint64_t total = 0;
  uint64_t minimal = 0;
  uint64_t oracle_disagreements = 0;
  uint64_t minimal_nontrivial_aut = 0;
  uint64_t onedim = 0;
};

StructureFlags examine_structure(const AlgebraStructure& A, const ScanRequest& req);

// The census kernel: walks every structure (exhaustive) or seed-derived
// samples. The parallel version splits the index range across OpenMP
// threads; per-index determinism makes it agree with the serial reference
// bit for bit.
ScanTotals scan_structures(const CensusParams& params, const ScanRequest& req, bool parallel,
                           std::vector<StructureFlags>* per_structure = nullptr);

struct CensusReport {
  std::string kind; // minimality | autos | onedim
  std::string sig_spec;
  unsigned k = 0;
  uint32_t p = 0;
  std::string mode;
  uint64_t samples_requested = 0; // sampled mode
  uint64_t seed = 0;
  ScanTotals totals;

  // numerator/denominator of the measured fraction, plus its Wilson CI in
  // sampled mode
  uint64_t numerator = 0;
  std::optional<WilsonInterval> ci;

  Rational bound;                // evaluated bound, exact
  std::string bound_description; // how to read `bound`
  bool bound_vacuous = false;
  std::optional<Rational> informational_bound; // sharper variant, not tested
  bool oracle_agreement = true;                // exhaustive minimality only
  bool pass = false;
  std::string verdict;

  std::string to_json() const; // deterministic field order
};

CensusReport minimality_census(const CensusParams& params, bool parallel = true,
                               std::vector<StructureFlags>* per_structure = nullptr);
CensusReport automorphism_census(const CensusParams& params, bool parallel = true,
                                 std::vector<StructureFlags>* per_structure = nullptr);
CensusReport one_dim_subalgebra_census(const CensusParams& params, bool parallel = true,
                                       std::vector<StructureFlags>* per_structure = nullptr);

std::string per_structure_csv(const std::vector<StructureFlags>& rows);

// Count isomorphism classes of minimal structures with scalar-only
// automorphism group, exhaustively over all structures. Dedup is exact:
// either pairwise are_isomorphic (small counts) or canonicalization by the
// full GL_k(p) change-of-basis orbit.
struct IsoClassReport {
  std::string sig_spec;
  unsigned k = 0;
  uint32_t p = 0;
  unsigned d = 0; // arity of the non-binary operation
  uint64_t eligible = 0;
  uint64_t classes = 0;
  BigInt bound; // p^{k^{d+1}}
  bool meets_bound = false;
  bool within_hypotheses = true; // p > 3 + d + 4 sqrt(d-1)
  std::string to_json() const;
};

IsoClassReport isomorphism_class_count(const Signature& sig, unsigned k, uint32_t p);

// Generating pairs of a small group counted up to automorphisms, with the
// automorphism group enumerated exactly (homomorphic extensions of a fixed
// generating pair) and orbits counted, not divided.
enum class HallGroup { Alt5, Alt4, C2 };

struct HallReport {
  std::string group;
  uint64_t group_order = 0;
  uint64_t generating_pairs = 0;
  uint64_t aut_order = 0;
  uint64_t orbit_count = 0;
  std::string to_json() const;
};

HallReport hall_eulerian_check(HallGroup g);

} // namespace tamealg
