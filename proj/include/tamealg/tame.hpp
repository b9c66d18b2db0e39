#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tamealg/algebra.hpp"
#include "tamealg/operad.hpp"

namespace tamealg {

// The automorphism x_i -> x_i + f of the free algebra, f not involving x_i.
struct Transvection {
  unsigned index;
  FreeElement payload;

  Transvection(unsigned i, FreeElement f);
};

// Generators of the group Gamma_{n,N,S} acting on the free algebra over
// x_0..x_{n-1}:
//   a_i   = t_{i-1}(x_i)        for 1 <= i < n
//   a_n   = t_{n-1}(x_0 / N)
//   b:op  = t_0(op(x_1,...,x_ar)) for each operation
struct GammaGenerators {
  unsigned n;
  uint32_t N;
  Signature sig;

  GammaGenerators(unsigned n, uint32_t N, Signature sig);

  size_t count() const { return n + sig.ops.size(); }
  std::string name(size_t id) const;
  int id_of(const std::string& name) const;
  Transvection transvection_of(size_t id) const;
};

struct GenRef {
  uint32_t id;
  bool inverse = false;
  bool operator==(const GenRef&) const = default;
};

using GroupWord = std::vector<GenRef>;

GroupWord inverse_word(const GroupWord& w);
// [a, b] = a^-1 b^-1 a b, factors applied left to right
GroupWord commutator(const GroupWord& a, const GroupWord& b);

std::string format_word(const GroupWord& w, const GammaGenerators& gens);
GroupWord parse_word(const std::string& text, const GammaGenerators& gens);

// A tuple in A^n; words act on tuples one factor at a time, leftmost first.
using Tuple = std::vector<Vec>;

Tuple apply_transvection(const AlgebraStructure& A, const Transvection& t, const Tuple& tuple);
Tuple apply_word(const AlgebraStructure& A, const GammaGenerators& gens, const GroupWord& w,
                 Tuple tuple);

// Word precompiled against a fixed algebra for repeated tuple application:
// a-factors become fused multiply-adds, b-factors direct tensor calls.
class CompiledWord {
public:
  CompiledWord(const AlgebraStructure& A, const GammaGenerators& gens, const GroupWord& w);
  void apply_inplace(Tuple& t) const;

private:
  struct Step {
    uint32_t index;
    int32_t var;    // >= 0: add coeff * t[var]; < 0: apply operation `op`
    uint32_t coeff; // reduced mod p; for operations, +1 or p-1
    int32_t op;
  };
  const AlgebraStructure* A_;
  std::vector<Step> steps_;
};

// Exact n x n matrix of a word all of whose factors are linear (the a_i and
// their inverses); the action on tuples is v -> M v. Throws on b-factors.
std::vector<std::vector<Rational>> word_rational_matrix(const GammaGenerators& gens,
                                                        const GroupWord& w);

// Signed permutation: coordinate perm[m] of the image holds sign[m] * v_m.
struct SignedPerm {
  std::vector<unsigned> perm;
  std::vector<int> sign;

  static SignedPerm identity(unsigned n);
  bool is_plain_permutation() const;
};

// Word equal to the elementary transvection t_i(r x_j), built from the a
// generators by commutators along the cycle 0 -> 1 -> ... -> n-1 -> 0; the
// wrap edge carries 1/N, compensated by N-fold repetition, so r stays an
// integer.
GroupWord elementary_word(unsigned i, unsigned j, long long r, const GammaGenerators& gens);

// Word acting on tuples as a signed permutation realizing sigma (sources to
// targets); sign[m] = +1 is guaranteed for every m in `clean`. Requires a
// coordinate outside `clean` when sign(sigma) is odd.
GroupWord signed_permutation_word(const std::vector<unsigned>& sigma,
                                  const std::vector<bool>& clean, const GammaGenerators& gens,
                                  SignedPerm* out = nullptr);

// Word permuting the coordinates by the even permutation sigma, up to signs.
GroupWord permutation_word(const std::vector<unsigned>& sigma, const GammaGenerators& gens);

// Word equal to t_0(f) for f with integer coefficients over the admissible
// variables x_1..x_{n-1-ar(S)}: recursively places commuting transvections
// gamma_j = t_{l+j}(f_j) by conjugation and emits iterated commutators with
// a shifted b-generator, one tree at a time.
GroupWord transvection_word(const FreeElement& f, const GammaGenerators& gens);

// Composes the word symbolically in the degree-capped free algebra and
// compares with the expected transvection up to degree `cap`.
bool verify_word_symbolic(const GroupWord& w, const Transvection& expected, unsigned cap,
                          const GammaGenerators& gens);
Endomorphism word_endomorphism(const GroupWord& w, unsigned cap, const GammaGenerators& gens);

// One-variable interpolation in a minimal algebra: find v of degree <= d_max
// with ev_{a_i}(v) = b_i for all i, by solving the linear system over the
// terms of degree <= D for D = 1, 2, ...; nullopt when no degree suffices
// (in particular when two points share an Aut(A)-orbit incompatibly).
std::optional<FreeElement> crt_solve(const AlgebraStructure& A, std::span<const Vec> points,
                                     std::span<const Vec> targets, unsigned d_max = 8);

} // namespace tamealg
