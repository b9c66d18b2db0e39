#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tamealg/tame.hpp"

namespace tamealg {

// Mixed-radix codes for tuples in A^n: coordinate vectors pack base p into a
// point code < p^k, tuples pack base p^k with coordinate 0 most significant,
// so the zero tuple is code 0 and codes sort lexicographically.
struct TupleCodec {
  uint32_t p;
  unsigned k, n;
  uint64_t point_size; // p^k
  uint64_t size;       // p^{nk}

  TupleCodec(uint32_t p, unsigned k, unsigned n, uint64_t budget = 10'000'000);
  uint64_t encode_point(const Vec& v) const;
  Vec decode_point(uint64_t code) const;
  uint64_t encode(const Tuple& t) const;
  Tuple decode(uint64_t code) const;
};

// Omega = (A^n \ 0)/Aut(A): every nonzero tuple gets the id of its orbit
// under the coordinatewise Aut action; the representative is the
// lexicographically least tuple.
struct OmegaIndex {
  TupleCodec codec;
  std::vector<int64_t> orbit_of; // indexed by tuple code; -1 for the zero tuple
  std::vector<uint64_t> reps;    // representative code per orbit id

  size_t size() const { return reps.size(); }
};

OmegaIndex build_omega(const AlgebraStructure& A, unsigned n, const AutGroup& aut,
                       bool parallel = true, uint64_t budget = 10'000'000);

using Permutation = std::vector<uint32_t>;

Permutation identity_permutation(unsigned degree);
Permutation inverse_permutation(const Permutation& p);
// apply a then b
Permutation compose_permutations(const Permutation& a, const Permutation& b);
bool permutation_is_even(const Permutation& p);
BigInt permutation_order(const Permutation& p);
std::vector<unsigned> cycle_type(const Permutation& p);

// Permutation induced by a word on Omega. Well-definedness on Aut-orbits is
// verified on every tuple of the domain; a violation throws.
Permutation permutation_image(const GroupWord& w, const OmegaIndex& omega,
                              const AlgebraStructure& A, const GammaGenerators& gens,
                              bool parallel = true);

// Orbit sizes of the generator action on all of A^n (the zero tuple
// included), sorted ascending.
std::vector<uint64_t> orbit_sizes_on_tuples(const AlgebraStructure& A,
                                            const GammaGenerators& gens,
                                            uint64_t budget = 10'000'000);

// Base and strong generating set with Schreier-vector transversals.
struct BSGS {
  unsigned degree = 0;
  std::vector<unsigned> base;
  std::vector<std::vector<Permutation>> level_gens;
  std::vector<std::vector<unsigned>> basic_orbits; // discovery order per level
  BigInt order = 1;

  size_t orbit_size(size_t level) const { return basic_orbits[level].size(); }
};

// Deterministic Schreier-Sims. `base_prefix` forces the leading base points
// (useful for transitivity chains); further base points are the smallest
// moved points. Degree guard 5000.
BSGS schreier_sims(const std::vector<Permutation>& gens, unsigned degree,
                   const std::vector<unsigned>& base_prefix = {});

// Largest t <= cap with the group t-transitive, read off the stabilizer
// chain: the i-th basic orbit must cover all degree-i remaining points.
// Requires a BSGS whose base starts 0,1,2,...,cap-1.
unsigned transitivity_degree(const BSGS& bsgs, unsigned cap);

enum class GroupClass { Alt, Sym, Other };
GroupClass recognize_alt_sym(const BSGS& bsgs, const std::vector<Permutation>& gens);

// brute-force group order by closure, for cross-checking BSGS orders
uint64_t group_order_brute_force(const std::vector<Permutation>& gens, uint64_t cap = 20000);

struct LabeledAction {
  unsigned degree = 0;
  std::vector<std::pair<std::string, Permutation>> generators;
};

struct EquivalenceResult {
  enum class Verdict { Equivalent, Inequivalent, Unknown } verdict;
  std::optional<Permutation> witness; // bijection with g_B = w o g_A o w^-1 per label
  std::string method;
};

// Sound fast refutation by cycle types of all generator words up to
// `word_cap`, then the exact equivariant-bijection search (transitive
// actions, degree <= exact_cap): every candidate image of point 0 is
// propagated, so exhaustion proves inequivalence.
EquivalenceResult actions_equivalent(const LabeledAction& A, const LabeledAction& B,
                                     unsigned word_cap = 3, unsigned exact_cap = 200);
EquivalenceResult actions_equivalent_exact(const LabeledAction& A, const LabeledAction& B);

} // namespace tamealg
