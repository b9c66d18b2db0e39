#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tamealg {

using BigInt = mpz_class;
using Rational = mpq_class;

bool is_prime(uint32_t m);

// Arithmetic in GF(p) for a prime p < 2^16. Residues are plain uint32_t in
// [0, p); keeping the modulus in one context object instead of per element
// lets vectors and matrices stay flat arrays. Products of two reduced
// residues fit comfortably in 64 bits.
class PrimeField {
public:
  explicit PrimeField(uint32_t p);

  uint32_t p() const { return p_; }

  uint32_t add(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= p_ ? s - p_ : s; }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  uint32_t mul(uint32_t a, uint32_t b) const { return static_cast<uint32_t>((uint64_t)a * b % p_); }
  uint32_t inv(uint32_t a) const;
  uint32_t pow(uint32_t a, uint64_t e) const;

  uint32_t reduce_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return static_cast<uint32_t>(r < 0 ? r + p_ : r);
  }
  // exact reduction of a rational; throws if p divides the denominator
  uint32_t reduce_rational(const Rational& q) const;

private:
  uint32_t p_;
};

// Row-major matrix over GF(p); also used as a list of row vectors.
using Vec = std::vector<uint32_t>;

struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<uint32_t> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

  uint32_t& at(size_t i, size_t j) { return a[i * cols + j]; }
  uint32_t at(size_t i, size_t j) const { return a[i * cols + j]; }
  Vec row(size_t i) const { return Vec(a.begin() + i * cols, a.begin() + (i + 1) * cols); }
  void set_row(size_t i, const Vec& v);

  static Mat identity(const PrimeField&, size_t n);
  bool operator==(const Mat&) const = default;
};

Vec mat_vec(const PrimeField& F, const Mat& M, const Vec& v);
Mat mat_mul(const PrimeField& F, const Mat& A, const Mat& B);
std::optional<Mat> mat_inverse(const PrimeField& F, const Mat& M);

Vec vec_add(const PrimeField& F, const Vec& a, const Vec& b);
Vec vec_scale(const PrimeField& F, uint32_t c, const Vec& a);
bool vec_is_zero(const Vec& a);

// In-place reduced row echelon form; returns the pivot columns.
std::vector<size_t> rref(const PrimeField& F, Mat& M);

// Incremental span for membership tests and closure loops. Rows are kept in
// reduced echelon form.
class EchelonSpan {
public:
  explicit EchelonSpan(const PrimeField& F, size_t dim) : F_(F), dim_(dim) {}

  // reduces v against the span; returns true (and absorbs it) if independent
  bool insert(Vec v);
  bool contains(Vec v) const;
  size_t rank() const { return rows_.size(); }
  size_t dim() const { return dim_; }
  Mat basis() const;

private:
  Vec reduce(Vec v) const;
  PrimeField F_;
  size_t dim_;
  std::vector<Vec> rows_;      // echelon rows
  std::vector<size_t> pivots_; // pivot column per row
};

struct LinearSolution {
  Vec particular;
  std::vector<Vec> kernel; // basis of the homogeneous solution space
};

// Solves M x = b. Returns nullopt iff b is not in the column space.
std::optional<LinearSolution> solve_linear(const PrimeField& F, const Mat& M, const Vec& b);

// Number of d-dimensional subspaces of GF(p)^k, by the exact integer
// product formula prod (p^{k-i}-1)/(p^{d-i}-1).
BigInt gaussian_binomial(unsigned k, unsigned d, uint32_t p);

// Every d-dimensional subspace of GF(p)^k exactly once, as its unique
// reduced-row-echelon basis. Throws if the subspace count exceeds `budget`.
void enumerate_subspaces(const PrimeField& F, unsigned k, unsigned d,
                         const std::function<void(const Mat&)>& emit,
                         uint64_t budget = 10'000'000);
std::vector<Mat> enumerate_subspaces(const PrimeField& F, unsigned k, unsigned d,
                                     uint64_t budget = 10'000'000);

BigInt factorial(unsigned n);

} // namespace tamealg
