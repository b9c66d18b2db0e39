#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tamealg/ffield.hpp"

namespace tamealg {

// Classification of the subgroup pair (G_i, G_j), 0 <= i < j < n, from the
// generator payloads: consecutive indices interact, and row 0 additionally
// interacts with the operation inputs x_1..x_ar and with the wrap at n-1.
enum class PairClass { Abelian, Heisenberg };
PairClass classify_pair(unsigned i, unsigned j, unsigned n, unsigned max_arity);

// n x n certificate matrix: 1 on the diagonal, -eps at Heisenberg pairs,
// 0 at abelian pairs.
struct DeltaMatrix {
  unsigned n = 0;
  unsigned max_arity = 0;
  Rational eps;
  std::vector<std::vector<Rational>> entries;
};

DeltaMatrix build_delta(unsigned n, unsigned max_arity, const Rational& eps);

// Exact positive-definiteness by rational LDL^T (all pivots > 0); no
// floating point anywhere on this route.
bool is_positive_definite(const DeltaMatrix& m);
bool rational_ldlt_positive_definite(const std::vector<std::vector<Rational>>& a);

// Floating-point route for cross-checks: smallest eigenvalue of Delta(eps).
double delta_min_eigenvalue(unsigned n, unsigned max_arity, double eps);

// The split Delta = Delta1 + Delta2 (circulant + bordered identity):
// Delta1 must be PSD and Delta2's spectrum must match the closed form
// {1-2e (n-2 times), 1-2e +- sqrt(ar-1) e} within tol.
bool delta2_spectrum_check(unsigned n, unsigned max_arity, double eps, double tol = 1e-9);

// Threshold where exact positive definiteness flips, located by bisection
// with the exact test at rational midpoints. The bracket endpoints are the
// closed-form sufficiency bound 1/(2+sqrt(ar-1)) and failure bound
// 1/max(2, sqrt(ar-1)); a bracket violation throws.
double critical_epsilon(unsigned n, unsigned max_arity, double tol = 1e-9);

// Cosine of the Friedrichs angle between the fixed spaces of the two
// generating cyclic subgroups in the p-dimensional representation of the
// Heisenberg group over Z/p (cyclic shift and modulation by a primitive
// p-th root of unity). Equals p^{-1/2}.
double heisenberg_angle(uint32_t p);
// dimensions of the two fixed spaces (both 1 in the faithful representation)
std::pair<unsigned, unsigned> heisenberg_fixed_space_dims(uint32_t p);

// Reduce the a-generators mod p, act on the nonzero vectors of GF(p)^n, and
// compare the BSGS order with |SL_n(p)|.
struct SlGenReport {
  BigInt order;
  BigInt expected;
  bool match = false;
};
SlGenReport check_sl_generation(unsigned n, uint32_t p, uint32_t N);

BigInt sl_order(unsigned n, uint32_t p);

} // namespace tamealg
