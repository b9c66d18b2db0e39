#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tamealg/action.hpp"

namespace tamealg {

// End-to-end action experiment: sample structures (signature: one binary
// operation and one of arity d) until one is minimal with scalar-only
// automorphisms, then build Omega, the generator permutations and the BSGS,
// and classify the image.
struct ActionPipelineResult {
  uint32_t p = 0;
  unsigned k = 0, n = 0, d = 0;
  uint32_t N = 1;
  uint64_t seed = 0;

  bool found = false;      // a minimal, scalar-only-Aut structure was sampled
  uint64_t tries = 0;      // samples drawn
  uint64_t minimal_seen = 0;
  uint64_t trivial_aut_seen = 0;
  std::string structure_json;

  uint64_t omega_size = 0;
  std::vector<uint64_t> tuple_orbit_sizes;
  bool two_orbits = false;

  // hypothesis check for the large-domain shortcut (|Omega| > 25 and at
  // least 6 Aut-orbits on points); reported only, never used as the
  // certificate -- that is always the BSGS order below
  uint64_t aut_orbits_on_points = 0;
  bool shortcut_hypotheses = false;

  std::string order;      // BSGS order (decimal)
  std::string group_class; // Alt | Sym | Other
  std::vector<std::pair<std::string, uint64_t>> generator_orders;
  bool generator_orders_divide_p = false;
  bool generators_all_even = false;

  bool pass = false;
  std::string to_json() const;
};

ActionPipelineResult verify_action_pipeline(uint32_t p, unsigned k, unsigned n, unsigned d,
                                            uint32_t N, uint64_t seed,
                                            uint64_t budget_tries = 10000, bool parallel = true);

} // namespace tamealg
