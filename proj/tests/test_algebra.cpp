#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "tamealg/algebra.hpp"
#include "tamealg/rng.hpp"

using namespace tamealg;

namespace {

Signature two_binary() { return Signature::from_spec("b2,b2"); }

Vec rand_vec(SplitMix64& rng, unsigned k, uint32_t p) {
  Vec v(k);
  for (auto& e : v) e = static_cast<uint32_t>(rng.below(p));
  return v;
}

} // namespace

TEST_CASE("tensor shapes and counts") {
  Signature sig = two_binary();
  CHECK(AlgebraStructure::parameter_count(sig, 2) == 16);
  CHECK(AlgebraStructure::total_count(sig, 2, 2) == 65536);
  AlgebraStructure A(sig, 2, 3);
  CHECK(A.tensor_size(0) == 4);
  CHECK(A.tensor_size(1) == 4);
}

TEST_CASE("random structures are deterministic in the seed") {
  Signature sig = two_binary();
  AlgebraStructure a = AlgebraStructure::random(sig, 2, 5, 123);
  AlgebraStructure b = AlgebraStructure::random(sig, 2, 5, 123);
  AlgebraStructure c = AlgebraStructure::random(sig, 2, 5, 124);
  CHECK(a == b);
  CHECK(a.to_json() == b.to_json());
  CHECK(!(a == c));
}

TEST_CASE("tensor entries are empirically uniform") {
  // one F_2 entry across 10^5 seeds: frequency of 1 within 0.5 +- 0.01
  Signature sig = two_binary();
  uint64_t ones = 0;
  const uint64_t n = 100000;
  for (uint64_t s = 0; s < n; ++s) {
    AlgebraStructure A = AlgebraStructure::random(sig, 2, 2, derive_subseed(99, s));
    ones += A.tensor_entry(0, 0)[0];
  }
  double freq = static_cast<double>(ones) / n;
  CHECK(freq > 0.49);
  CHECK(freq < 0.51);
}

TEST_CASE("structure index round trip") {
  Signature sig = two_binary();
  for (uint64_t idx : {0ull, 1ull, 65535ull, 12345ull}) {
    AlgebraStructure A = AlgebraStructure::from_index(sig, 2, 2, idx);
    uint64_t re = 0;
    uint64_t pw = 1;
    for (size_t s = 0; s < sig.size(); ++s)
      for (size_t t = 0; t < A.tensor_size(s); ++t)
        for (unsigned c = 0; c < 2; ++c) {
          re += static_cast<uint64_t>(A.tensor_entry(s, t)[c]) * pw;
          pw *= 2;
        }
    CHECK(re == idx);
  }
  CHECK_THROWS(AlgebraStructure::from_index(sig, 2, 2, 65536));
}

TEST_CASE("structure JSON round trip") {
  SplitMix64 rng(5);
  for (uint32_t p : {2u, 5u}) {
    AlgebraStructure A = AlgebraStructure::random(Signature::from_spec("b2,t3"), 2, p, rng.next());
    AlgebraStructure B = AlgebraStructure::from_json(A.to_json());
    CHECK(A == B);
    CHECK(A.to_json() == B.to_json());
  }
}

TEST_CASE("evaluation basics") {
  // k=1 over F_5, one binary op with constant 2: m(x,x) at x=3 gives 2*3*3 = 3
  AlgebraStructure A(Signature::from_spec("b2"), 1, 5);
  A.tensor_entry(0, 0) = {2};
  Term m = Term::node(0, {Term::leaf(0), Term::leaf(0)});
  std::vector<Vec> assign{{3}};
  CHECK(evaluate_term(m, assign, A) == Vec{3});
  CHECK(evaluate(FreeElement::variable(0), assign, A) == Vec{3});
  // rational coefficient: 1/2 = 3 mod 5, m(3,3) = 3, so 3*3 = 4 mod 5
  CHECK(evaluate(FreeElement::from_term(m, Rational(1, 2)), assign, A) == Vec{4});
  CHECK_THROWS(evaluate(FreeElement::from_term(m, Rational(1, 5)), assign, A));
  CHECK_THROWS(evaluate(FreeElement::variable(3), assign, A));
}

TEST_CASE("evaluation is multilinear") {
  SplitMix64 rng(17);
  Signature sig = Signature::from_spec("b2,t3");
  for (int trial = 0; trial < 100; ++trial) {
    uint32_t p = trial % 2 ? 3 : 7;
    AlgebraStructure A = AlgebraStructure::random(sig, 2, p, rng.next());
    const PrimeField& F = A.field();
    Vec x = rand_vec(rng, 2, p), y = rand_vec(rng, 2, p), z = rand_vec(rng, 2, p);
    std::vector<Vec> sum_args{vec_add(F, x, y), z};
    std::vector<Vec> xz{x, z}, yz{y, z};
    CHECK(A.apply_op(0, sum_args) == vec_add(F, A.apply_op(0, xz), A.apply_op(0, yz)));
  }
}

TEST_CASE("generated subalgebra basics") {
  Signature sig = two_binary();
  AlgebraStructure zero(sig, 2, 3);
  std::vector<Vec> seeds{{1, 0}};
  auto sub = generated_subalgebra(zero, seeds);
  CHECK(sub.dim() == 1);
  CHECK(sub.echelon.rows == 1);
  CHECK(generated_subalgebra(zero, std::vector<Vec>{}).dim() == 0);

  // witnesses evaluate to the spanning vectors
  SplitMix64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    AlgebraStructure A = AlgebraStructure::random(sig, 3, 3, rng.next());
    std::vector<Vec> s2{rand_vec(rng, 3, 3)};
    if (vec_is_zero(s2[0])) continue;
    auto c = generated_subalgebra(A, s2);
    for (size_t i = 0; i < c.dim(); ++i)
      CHECK(evaluate_term(c.witnesses[i], s2, A) == c.spanning[i]);
  }
}

TEST_CASE("minimality: k=1 always, zero structure never for k=2") {
  for (uint32_t p : {2u, 3u, 5u}) {
    AlgebraStructure A = AlgebraStructure::random(two_binary(), 1, p, p);
    CHECK(is_minimal(A));
    CHECK(is_minimal_subspace_oracle(A));
  }
  AlgebraStructure zero(two_binary(), 2, 3);
  CHECK(!is_minimal(zero));
  CHECK(!is_minimal_subspace_oracle(zero));
}

TEST_CASE("minimality algorithms agree on a sample of the exhaustive grid") {
  Signature sig = two_binary();
  SplitMix64 rng(31);
  for (int trial = 0; trial < 1500; ++trial) {
    uint64_t idx = rng.below(65536);
    AlgebraStructure A = AlgebraStructure::from_index(sig, 2, 2, idx);
    CHECK(is_minimal(A) == is_minimal_subspace_oracle(A));
  }
}

TEST_CASE("minimal structures generate from every nonzero point") {
  SplitMix64 rng(37);
  Signature sig = two_binary();
  int found = 0;
  for (int trial = 0; trial < 200 && found < 15; ++trial) {
    AlgebraStructure A = AlgebraStructure::random(sig, 2, 3, rng.next());
    if (!is_minimal(A)) continue;
    ++found;
    for (uint32_t a = 0; a < 3; ++a)
      for (uint32_t b = 0; b < 3; ++b) {
        if (a == 0 && b == 0) continue;
        std::vector<Vec> s{{a, b}};
        CHECK(generated_subalgebra(A, s).dim() == 2);
      }
  }
  CHECK(found >= 10);
}

TEST_CASE("scalar automorphisms match the exponent condition") {
  SplitMix64 rng(41);
  for (uint32_t p : {3u, 5u, 7u}) {
    Signature sig = Signature::from_spec("b2,t3");
    AlgebraStructure A = AlgebraStructure::random(sig, 2, p, rng.next());
    const PrimeField& F = A.field();
    auto scal = scalar_automorphisms(A);
    std::set<uint32_t> expect;
    for (uint32_t lam = 1; lam < p; ++lam)
      if (F.pow(lam, 1) == 1 && F.pow(lam, 2) == 1) expect.insert(lam);
    CHECK(std::set<uint32_t>(scal.begin(), scal.end()) == expect);
  }
}

TEST_CASE("automorphism groups of k=1 structures") {
  // zero structure, k=1: every scalar commutes, so all of GL_1
  AlgebraStructure zero(Signature::from_spec("b2"), 1, 7);
  CHECK(automorphisms(zero).size() == 6);
  // one binary op with constant 1: lambda = lambda^2 forces lambda = 1
  for (uint32_t p : {3u, 5u, 7u}) {
    AlgebraStructure A(Signature::from_spec("b2"), 1, p);
    A.tensor_entry(0, 0) = {1};
    AutGroup g = automorphisms(A);
    PrimeField F(p);
    std::set<uint32_t> expect;
    for (uint32_t lam = 1; lam < p; ++lam)
      if (lam == F.mul(lam, lam)) expect.insert(lam);
    CHECK(g.size() == expect.size());
    CHECK(g.size() == 1);
  }
}

TEST_CASE("automorphisms: fast path agrees with the enumeration oracle") {
  SplitMix64 rng(43);
  Signature sig = two_binary();
  int done = 0;
  for (int trial = 0; trial < 400 && done < 25; ++trial) {
    uint32_t p = trial % 2 ? 2 : 3;
    AlgebraStructure A = AlgebraStructure::random(sig, 2, p, rng.next());
    if (!is_minimal(A)) continue;
    ++done;
    AutGroup fast = automorphisms(A);
    AutGroup oracle = automorphisms_enumeration_oracle(A);
    auto key = [](const AutGroup& g) {
      std::set<std::vector<uint32_t>> s;
      for (auto& m : g) s.insert(m.a);
      return s;
    };
    auto ks = key(fast);
    CHECK(ks == key(oracle));
    // the output is a group containing the scalar subgroup
    const PrimeField& F = A.field();
    for (auto& m1 : fast)
      for (auto& m2 : fast) CHECK(ks.count(mat_mul(F, m1, m2).a));
    for (auto& m : fast) CHECK(ks.count(mat_inverse(F, m)->a));
    for (uint32_t lam : scalar_automorphisms(A)) {
      Mat s = Mat::identity(F, 2);
      s.at(0, 0) = s.at(1, 1) = lam;
      CHECK(ks.count(s.a));
    }
    CHECK(BigInt(static_cast<unsigned long>(fast.size())) % 1 == 0);
    // |Aut| divides |GL_k|
    BigInt gl = gl_order(2, p);
    CHECK(gl % BigInt(static_cast<unsigned long>(fast.size())) == 0);
  }
  CHECK(done == 25);
}

TEST_CASE("automorphism fast path rejects non-minimal structures") {
  AlgebraStructure zero(two_binary(), 2, 3);
  CHECK_THROWS_AS(automorphisms(zero), std::domain_error);
  AutGroup aut = automorphisms_enumeration_oracle(zero);
  CHECK(BigInt(static_cast<unsigned long>(aut.size())) == gl_order(2, 3));
}

TEST_CASE("isomorphism over k=1 scalar structures") {
  // constants (1,0) vs (2,0) over F_5 are isomorphic, (1,0) vs (0,1) are not
  Signature sig = two_binary();
  auto mk = [&](uint32_t c1, uint32_t c2) {
    AlgebraStructure A(sig, 1, 5);
    A.tensor_entry(0, 0) = {c1};
    A.tensor_entry(1, 0) = {c2};
    return A;
  };
  AlgebraStructure A = mk(1, 0), B = mk(2, 0), C = mk(0, 1);
  CHECK(are_isomorphic(A, A));
  auto phi = are_isomorphic(A, B);
  REQUIRE(phi);
  // brute force over the 4 scalars: mu works iff mu*c = c'*mu^2 for both ops
  PrimeField F(5);
  std::set<uint32_t> mus;
  for (uint32_t mu = 1; mu < 5; ++mu)
    if (F.mul(mu, 1) == F.mul(2, F.mul(mu, mu))) mus.insert(mu);
  CHECK(!mus.empty());
  CHECK(mus.count(phi->at(0, 0)));
  std::set<uint32_t> mus_none;
  for (uint32_t mu = 1; mu < 5; ++mu)
    if (F.mul(mu, 1) == 0 && F.mul(mu, 0) == F.mul(1, F.mul(mu, mu))) mus_none.insert(mu);
  CHECK(mus_none.empty());
  CHECK(!are_isomorphic(A, C));
}

TEST_CASE("isomorphism via transported structures, both directions") {
  SplitMix64 rng(47);
  Signature sig = two_binary();
  const PrimeField F(3);
  int done = 0;
  for (int trial = 0; trial < 300 && done < 15; ++trial) {
    AlgebraStructure A = AlgebraStructure::random(sig, 2, 3, rng.next());
    if (!is_minimal(A)) continue;
    ++done;
    CHECK(are_isomorphic(A, A));
    Mat g(2, 2);
    do {
      for (auto& e : g.a) e = static_cast<uint32_t>(rng.below(3));
    } while (!mat_inverse(F, g));
    Mat ginv = *mat_inverse(F, g);
    AlgebraStructure B(sig, 2, 3);
    for (size_t s = 0; s < sig.size(); ++s)
      for (uint32_t i = 0; i < 2; ++i)
        for (uint32_t j = 0; j < 2; ++j) {
          Vec ei(2, 0), ej(2, 0);
          ei[i] = 1;
          ej[j] = 1;
          std::vector<Vec> args{mat_vec(F, ginv, ei), mat_vec(F, ginv, ej)};
          B.tensor_entry(s, i * 2 + j) = mat_vec(F, g, A.apply_op(s, args));
        }
    CHECK(are_isomorphic(A, B));
    CHECK(are_isomorphic(B, A));
  }
  CHECK(done == 15);
}

TEST_CASE("aut orbit counts on points differ by the zero orbit") {
  AlgebraStructure zero(Signature::from_spec("b2"), 1, 3);
  auto [on_a, on_nonzero] = orbit_counts_on_points(zero, automorphisms(zero));
  CHECK(on_nonzero == 1); // {1,2} is one orbit under GL_1
  CHECK(on_a == 2);
  SplitMix64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    AlgebraStructure A = AlgebraStructure::random(two_binary(), 2, 2, rng.next());
    if (!is_minimal(A)) continue;
    AutGroup aut = automorphisms(A);
    if (aut.size() != 1) continue;
    auto [a, nz] = orbit_counts_on_points(A, aut);
    CHECK(nz == 3);
    CHECK(a == 4);
    break;
  }
}

TEST_CASE("substitution commutes with evaluation") {
  // evaluating a substituted element equals evaluating the original at the
  // evaluated images, as long as the cap exceeds all composite degrees
  SplitMix64 rng(59);
  Signature sig = Signature::from_spec("b2,t3");
  for (int trial = 0; trial < 60; ++trial) {
    uint32_t p = trial % 2 ? 3 : 5;
    AlgebraStructure A = AlgebraStructure::random(sig, 2, p, rng.next());
    unsigned nvars = 3;
    Endomorphism phi = Endomorphism::identity(nvars, 12);
    for (unsigned v = 0; v < nvars; ++v) {
      // images of degree <= 2
      if (rng.below(2)) {
        phi.images[v] = FreeElement::variable(static_cast<int>(rng.below(nvars)),
                                              Rational(1 + static_cast<long>(rng.below(3))));
      } else {
        phi.images[v] = FreeElement::from_term(
            Term::node(0, {Term::leaf(static_cast<int>(rng.below(nvars))),
                           Term::leaf(static_cast<int>(rng.below(nvars)))}));
      }
      if (rng.below(2)) phi.images[v] += FreeElement::variable(static_cast<int>(rng.below(nvars)));
    }
    // e of degree <= 3: composite degree <= 6 < cap 12, so truncation is moot
    FreeElement e;
    e.add_term(Term::node(0, {Term::leaf(0), Term::leaf(1)}), Rational(2));
    e.add_term(Term::node(1, {Term::leaf(2), Term::leaf(0), Term::leaf(1)}),
               Rational(-1, 2));
    e += FreeElement::variable(static_cast<int>(rng.below(nvars)));

    std::vector<Vec> a(nvars, Vec(2));
    for (auto& v : a)
      for (auto& x : v) x = static_cast<uint32_t>(rng.below(p));
    std::vector<Vec> images_at_a;
    for (unsigned v = 0; v < nvars; ++v) images_at_a.push_back(evaluate(phi.images[v], a, A));
    CHECK(evaluate(substitute(sig, phi, e), a, A) == evaluate(e, images_at_a, A));
  }
}

TEST_CASE("isomorphism is transitive along constructed chains") {
  SplitMix64 rng(61);
  Signature sig = two_binary();
  const PrimeField F(3);
  auto transport = [&](const AlgebraStructure& A, const Mat& g) {
    Mat ginv = *mat_inverse(F, g);
    AlgebraStructure B(sig, 2, 3);
    for (size_t s = 0; s < sig.size(); ++s)
      for (uint32_t i = 0; i < 2; ++i)
        for (uint32_t j = 0; j < 2; ++j) {
          Vec ei(2, 0), ej(2, 0);
          ei[i] = 1;
          ej[j] = 1;
          std::vector<Vec> args{mat_vec(F, ginv, ei), mat_vec(F, ginv, ej)};
          B.tensor_entry(s, i * 2 + j) = mat_vec(F, g, A.apply_op(s, args));
        }
    return B;
  };
  auto random_gl = [&]() {
    Mat g(2, 2);
    do {
      for (auto& e : g.a) e = static_cast<uint32_t>(rng.below(3));
    } while (!mat_inverse(F, g));
    return g;
  };
  int done = 0;
  for (int trial = 0; trial < 200 && done < 10; ++trial) {
    AlgebraStructure A = AlgebraStructure::random(sig, 2, 3, rng.next());
    if (!is_minimal(A)) continue;
    ++done;
    AlgebraStructure B = transport(A, random_gl());
    AlgebraStructure C = transport(B, random_gl());
    CHECK(are_isomorphic(A, B));
    CHECK(are_isomorphic(B, C));
    CHECK(are_isomorphic(A, C)); // transitivity
  }
  CHECK(done == 10);
}
