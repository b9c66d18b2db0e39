#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tamealg/operad.hpp"

namespace tamealg {

// An algebra over GF(p)^k for a signature S: one structure tensor per
// operation, giving the value on every basis tuple. The tensor for an
// arity-a operation has k^a entries, each a vector of length k, so a
// structure is a point of GF(p)^{sum_s k^{ar(s)+1}}.
class AlgebraStructure {
public:
  AlgebraStructure(Signature sig, unsigned k, uint32_t p);

  const Signature& sig() const { return sig_; }
  unsigned k() const { return k_; }
  uint32_t p() const { return p_; }
  const PrimeField& field() const { return field_; }

  // entry for op s at basis tuple (i_1,...,i_a), row-major: i_1 is the most
  // significant index
  const Vec& tensor_entry(size_t s, size_t flat_index) const { return tensors_[s][flat_index]; }
  Vec& tensor_entry(size_t s, size_t flat_index) { return tensors_[s][flat_index]; }
  size_t tensor_size(size_t s) const { return tensors_[s].size(); }

  // multilinear extension of op s to arbitrary argument vectors
  Vec apply_op(size_t s, std::span<const Vec> args) const;

  // number of structures for these parameters: p^{sum_s k^{ar(s)+1}}
  static BigInt total_count(const Signature& sig, unsigned k, uint32_t p);
  static uint64_t parameter_count(const Signature& sig, unsigned k);

  // uniform random structure; entries are drawn from SplitMix64(seed) in
  // canonical order (ops in signature order, tuples row-major, then the k
  // output coordinates), each via an unbiased draw below p
  static AlgebraStructure random(const Signature& sig, unsigned k, uint32_t p, uint64_t seed);

  // structure with the given index in [0, total_count), base-p digits in the
  // same canonical entry order (least significant digit = first entry);
  // used by the exhaustive censuses
  static AlgebraStructure from_index(const Signature& sig, unsigned k, uint32_t p, uint64_t index);

  std::string to_json() const;
  static AlgebraStructure from_json(const std::string& text);

  bool operator==(const AlgebraStructure&) const;

private:
  Signature sig_;
  unsigned k_;
  uint32_t p_;
  PrimeField field_;
  std::vector<std::vector<Vec>> tensors_;
};

// evaluation of a free-algebra element: leaves to assigned vectors, nodes
// through the structure tensors, linear extension over the coefficients
Vec evaluate(const FreeElement& e, std::span<const Vec> assignment, const AlgebraStructure& A);
Vec evaluate_term(const Term& t, std::span<const Vec> assignment, const AlgebraStructure& A);

// Subalgebra generated by seed vectors: least subspace containing them and
// invariant under every operation. Each basis vector carries a witness term
// (leaves = seed indices) that evaluates to it at the seeds.
struct SubalgebraBasis {
  Mat echelon;                 // canonical subspace representative
  std::vector<Vec> spanning;   // vectors as discovered, independent
  std::vector<Term> witnesses; // witnesses[i] evaluates to spanning[i]
  bool closed = true;
  size_t dim() const { return spanning.size(); }
};

SubalgebraBasis generated_subalgebra(const AlgebraStructure& A, std::span<const Vec> seeds);

// Minimality: every nonzero element generates the whole space. The fast
// route closes one representative per projective line (scalar multiples
// generate the same subalgebra); the oracle route checks invariance of
// every proper nonzero subspace directly.
bool is_minimal(const AlgebraStructure& A);
bool is_minimal_subspace_oracle(const AlgebraStructure& A);

// true iff the span of `rows` is closed under every operation of A
bool is_invariant_subspace(const AlgebraStructure& A, const Mat& rows);
bool has_one_dim_subalgebra(const AlgebraStructure& A);

using AutGroup = std::vector<Mat>;

// Scalars lambda*Id with lambda^{ar(s)-1} = 1 for all s; always automorphisms.
std::vector<uint32_t> scalar_automorphisms(const AlgebraStructure& A);

// Full automorphism group via the generator-image search: fix a cyclic
// generator a with its closure witnesses, try each nonzero candidate image,
// rebuild the matrix from the witnesses and verify it fixes every tensor.
// Requires A minimal (detected from the closure); throws otherwise.
AutGroup automorphisms(const AlgebraStructure& A);

// Enumeration oracle for any A with |GL_k(p)| <= budget.
AutGroup automorphisms_enumeration_oracle(const AlgebraStructure& A, uint64_t budget = 1'000'000);

BigInt gl_order(unsigned k, uint32_t p);

// Invertible intertwiner between two structures on the same space, or
// nullopt. Same generator-image search as `automorphisms`; both minimal.
std::optional<Mat> are_isomorphic(const AlgebraStructure& A, const AlgebraStructure& B);

// Orbit counts of a matrix group acting on GF(p)^k: (orbits on all of A,
// orbits on A \ 0). They differ by exactly 1, the zero orbit.
std::pair<uint64_t, uint64_t> orbit_counts_on_points(const AlgebraStructure& A, const AutGroup& aut);

} // namespace tamealg
