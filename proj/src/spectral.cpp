#include "tamealg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tamealg/action.hpp"

namespace tamealg {

PairClass classify_pair(unsigned i, unsigned j, unsigned n, unsigned max_arity) {
  if (!(i < j && j < n)) throw std::out_of_range("classify_pair: need 0 <= i < j < n");
  if (j - i == 1) return PairClass::Heisenberg;
  if (i == 0 && (j <= max_arity || j == n - 1)) return PairClass::Heisenberg;
  return PairClass::Abelian;
}

DeltaMatrix build_delta(unsigned n, unsigned max_arity, const Rational& eps) {
  if (n <= std::max(max_arity, 2u)) throw std::invalid_argument("need n > max(ar, 2)");
  if (eps < 0) throw std::invalid_argument("eps must be >= 0");
  DeltaMatrix m;
  m.n = n;
  m.max_arity = max_arity;
  m.eps = eps;
  m.entries.assign(n, std::vector<Rational>(n, 0));
  for (unsigned i = 0; i < n; ++i) m.entries[i][i] = 1;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (classify_pair(i, j, n, max_arity) == PairClass::Heisenberg) {
        m.entries[i][j] = -eps;
        m.entries[j][i] = -eps;
      }
  return m;
}

bool rational_ldlt_positive_definite(const std::vector<std::vector<Rational>>& a) {
  size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("matrix not square");
    for (size_t j = 0; j < i; ++j)
      if (a[i][j] != a[j][i]) throw std::invalid_argument("matrix not symmetric");
  }
  std::vector<std::vector<Rational>> L(n, std::vector<Rational>(n, 0));
  std::vector<Rational> d(n, 0);
  for (size_t j = 0; j < n; ++j) {
    Rational dj = a[j][j];
    for (size_t t = 0; t < j; ++t) dj -= L[j][t] * L[j][t] * d[t];
    if (dj <= 0) return false;
    d[j] = dj;
    for (size_t i = j + 1; i < n; ++i) {
      Rational v = a[i][j];
      for (size_t t = 0; t < j; ++t) v -= L[i][t] * L[j][t] * d[t];
      L[i][j] = v / dj;
    }
  }
  return true;
}

bool is_positive_definite(const DeltaMatrix& m) {
  return rational_ldlt_positive_definite(m.entries);
}

namespace {

Eigen::MatrixXd delta_double(unsigned n, unsigned max_arity, double eps) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (classify_pair(i, j, n, max_arity) == PairClass::Heisenberg) {
        M(i, j) = -eps;
        M(j, i) = -eps;
      }
  return M;
}

} // namespace

double delta_min_eigenvalue(unsigned n, unsigned max_arity, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta_double(n, max_arity, eps));
  return es.eigenvalues().minCoeff();
}

bool delta2_spectrum_check(unsigned n, unsigned max_arity, double eps, double tol) {
  // Delta1: circulant, 2e on the diagonal, -e one step off cyclically
  Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(n, n);
  for (unsigned i = 0; i < n; ++i) {
    d1(i, i) = 2 * eps;
    d1(i, (i + 1) % n) = -eps;
    d1((i + 1) % n, i) = -eps;
  }
  Eigen::MatrixXd d2 = delta_double(n, max_arity, eps) - d1;
  // structural check: 1-2e diagonal, -e exactly at (0, j) for 2 <= j <= ar
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      double want = 0;
      if (i == j) want = 1 - 2 * eps;
      else if ((i == 0 && j >= 2 && j <= max_arity) || (j == 0 && i >= 2 && i <= max_arity))
        want = -eps;
      if (std::abs(d2(i, j) - want) > 1e-12) return false;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(d1);
  if (es1.eigenvalues().minCoeff() < -1e-12) return false;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(d2);
  std::vector<double> got(es2.eigenvalues().data(), es2.eigenvalues().data() + n);
  std::vector<double> want;
  double root = std::sqrt(static_cast<double>(max_arity) - 1.0) * eps;
  for (unsigned t = 0; t + 2 < n; ++t) want.push_back(1 - 2 * eps);
  want.push_back(1 - 2 * eps - root);
  want.push_back(1 - 2 * eps + root);
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (unsigned t = 0; t < n; ++t)
    if (std::abs(got[t] - want[t]) > tol) return false;
  return true;
}

double critical_epsilon(unsigned n, unsigned max_arity, double tol) {
  if (tol < 1e-12) throw std::invalid_argument("tol must be >= 1e-12");
  double lower = 1.0 / (2.0 + std::sqrt(static_cast<double>(max_arity) - 1.0));
  double upper = 1.0 / std::max(2.0, std::sqrt(static_cast<double>(max_arity) - 1.0));
  Rational lo(lower - 1e-9); // doubles are dyadic, so these stay exact
  Rational hi(upper + 1e-9);
  if (!is_positive_definite(build_delta(n, max_arity, lo)))
    throw std::logic_error("critical_epsilon: lower bracket is not positive definite");
  if (is_positive_definite(build_delta(n, max_arity, hi)))
    throw std::logic_error("critical_epsilon: upper bracket is positive definite");
  while (hi - lo > Rational(tol)) {
    Rational mid = (lo + hi) / 2;
    if (is_positive_definite(build_delta(n, max_arity, mid)))
      lo = mid;
    else
      hi = mid;
  }
  Rational mid = (lo + hi) / 2;
  return mid.get_d();
}

namespace {

// nullspace of (M - I) by SVD; returns an orthonormal basis
Eigen::MatrixXcd fixed_space(const Eigen::MatrixXcd& M, double tol = 1e-9) {
  unsigned n = static_cast<unsigned>(M.rows());
  Eigen::MatrixXcd shifted = M - Eigen::MatrixXcd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
  unsigned dim = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < tol) ++dim;
  return svd.matrixV().rightCols(dim);
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> heisenberg_generators(uint32_t p) {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(p, p); // cyclic shift
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(p, p); // modulation
  for (uint32_t i = 0; i < p; ++i) {
    U((i + 1) % p, i) = 1.0;
    double theta = 2.0 * M_PI * i / p;
    V(i, i) = std::complex<double>(std::cos(theta), std::sin(theta));
  }
  return {U, V};
}

} // namespace

std::pair<unsigned, unsigned> heisenberg_fixed_space_dims(uint32_t p) {
  auto [U, V] = heisenberg_generators(p);
  return {static_cast<unsigned>(fixed_space(U).cols()),
          static_cast<unsigned>(fixed_space(V).cols())};
}

double heisenberg_angle(uint32_t p) {
  if (!is_prime(p) || p > 101) throw std::invalid_argument("need a prime p <= 101");
  auto [U, V] = heisenberg_generators(p);
  Eigen::MatrixXcd FU = fixed_space(U);
  Eigen::MatrixXcd FV = fixed_space(V);
  if (FU.cols() == 0 || FV.cols() == 0) return 0.0;
  // principal angles between the fixed spaces (they intersect trivially in
  // the faithful representation): largest singular value of FU^* FV
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(FU.adjoint() * FV);
  return svd.singularValues().maxCoeff();
}

BigInt sl_order(unsigned n, uint32_t p) {
  BigInt pz = p, order;
  mpz_ui_pow_ui(order.get_mpz_t(), p, n * (n - 1) / 2);
  for (unsigned i = 2; i <= n; ++i) {
    BigInt pi;
    mpz_pow_ui(pi.get_mpz_t(), pz.get_mpz_t(), i);
    order *= pi - 1;
  }
  return order;
}

SlGenReport check_sl_generation(unsigned n, uint32_t p, uint32_t N) {
  PrimeField F(p);
  if (N % p == 0) throw std::invalid_argument("p divides N: 1/N undefined mod p");
  uint64_t points = 1;
  for (unsigned i = 0; i < n; ++i) {
    points *= p;
    if (points > 1'000'000) throw std::runtime_error("p^n exceeds the guard");
  }
  // a_i = I + E_{i-1,i} for i < n, a_n = I + (1/N) E_{n-1,0}
  std::vector<Mat> mats;
  for (unsigned i = 1; i < n; ++i) {
    Mat m = Mat::identity(F, n);
    m.at(i - 1, i) = 1;
    mats.push_back(m);
  }
  {
    Mat m = Mat::identity(F, n);
    m.at(n - 1, 0) = F.inv(N % p);
    mats.push_back(m);
  }
  // act on the nonzero vectors, indexed by code-1
  unsigned degree = static_cast<unsigned>(points - 1);
  auto encode = [&](const Vec& v) {
    uint64_t c = 0;
    for (unsigned i = 0; i < n; ++i) c = c * p + v[i];
    return c;
  };
  auto decode = [&](uint64_t c) {
    Vec v(n);
    for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
      v[i] = static_cast<uint32_t>(c % p);
      c /= p;
    }
    return v;
  };
  std::vector<Permutation> perms;
  for (auto& m : mats) {
    Permutation perm(degree);
    for (uint64_t c = 1; c < points; ++c)
      perm[c - 1] = static_cast<uint32_t>(encode(mat_vec(F, m, decode(c))) - 1);
    perms.push_back(std::move(perm));
  }
  SlGenReport rep;
  rep.order = schreier_sims(perms, degree).order;
  rep.expected = sl_order(n, p);
  rep.match = rep.order == rep.expected;
  return rep;
}

} // namespace tamealg
