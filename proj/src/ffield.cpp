#include "tamealg/ffield.hpp"

#include <algorithm>
#include <cassert>

namespace tamealg {

bool is_prime(uint32_t m) {
  if (m < 2) return false;
  for (uint32_t d = 2; (uint64_t)d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

PrimeField::PrimeField(uint32_t p) : p_(p) {
  if (p >= (1u << 16)) throw std::invalid_argument("modulus must be < 2^16");
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

uint32_t PrimeField::inv(uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of 0");
  // extended Euclid on (a, p)
  int64_t t = 0, new_t = 1, r = p_, new_r = a;
  while (new_r != 0) {
    int64_t q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  assert(r == 1);
  return static_cast<uint32_t>(t < 0 ? t + p_ : t);
}

uint32_t PrimeField::pow(uint32_t a, uint64_t e) const {
  uint32_t r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint32_t PrimeField::reduce_rational(const Rational& q) const {
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class pz = p_;
  mpz_class dmod = den % pz;
  if (dmod == 0) throw std::domain_error("denominator divisible by the modulus");
  mpz_class nmod = num % pz;
  if (nmod < 0) nmod += pz;
  uint32_t n = static_cast<uint32_t>(nmod.get_ui());
  uint32_t d = static_cast<uint32_t>(mpz_class(dmod < 0 ? dmod + pz : dmod).get_ui());
  return mul(n, inv(d));
}

void Mat::set_row(size_t i, const Vec& v) {
  assert(v.size() == cols);
  std::copy(v.begin(), v.end(), a.begin() + i * cols);
}

Mat Mat::identity(const PrimeField&, size_t n) {
  Mat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Vec mat_vec(const PrimeField& F, const Mat& M, const Vec& v) {
  if (v.size() != M.cols) throw std::invalid_argument("mat_vec dimension mismatch");
  Vec r(M.rows, 0);
  for (size_t i = 0; i < M.rows; ++i) {
    uint64_t acc = 0;
    for (size_t j = 0; j < M.cols; ++j) acc += (uint64_t)M.at(i, j) * v[j];
    r[i] = static_cast<uint32_t>(acc % F.p());
  }
  return r;
}

Mat mat_mul(const PrimeField& F, const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("mat_mul dimension mismatch");
  Mat C(A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < A.cols; ++k) {
      uint64_t aik = A.at(i, k);
      if (!aik) continue;
      for (size_t j = 0; j < B.cols; ++j)
        C.at(i, j) = static_cast<uint32_t>((C.at(i, j) + aik * B.at(k, j)) % F.p());
    }
  return C;
}

std::optional<Mat> mat_inverse(const PrimeField& F, const Mat& M) {
  if (M.rows != M.cols) throw std::invalid_argument("mat_inverse: not square");
  size_t n = M.rows;
  Mat aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug.at(i, j) = M.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto pivots = rref(F, aug);
  if (pivots.size() != n || pivots.back() >= n) return std::nullopt;
  Mat inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

Vec vec_add(const PrimeField& F, const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
  return r;
}

Vec vec_scale(const PrimeField& F, uint32_t c, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(c, a[i]);
  return r;
}

bool vec_is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](uint32_t x) { return x == 0; });
}

std::vector<size_t> rref(const PrimeField& F, Mat& M) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < M.cols && r < M.rows; ++c) {
    size_t sel = r;
    while (sel < M.rows && M.at(sel, c) == 0) ++sel;
    if (sel == M.rows) continue;
    if (sel != r)
      for (size_t j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(r, j));
    uint32_t piv_inv = F.inv(M.at(r, c));
    for (size_t j = c; j < M.cols; ++j) M.at(r, j) = F.mul(piv_inv, M.at(r, j));
    for (size_t i = 0; i < M.rows; ++i) {
      if (i == r || M.at(i, c) == 0) continue;
      uint32_t f = M.at(i, c);
      for (size_t j = c; j < M.cols; ++j)
        M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Vec EchelonSpan::reduce(Vec v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint32_t c = v[pivots_[i]];
    if (c == 0) continue;
    for (size_t j = 0; j < dim_; ++j) v[j] = F_.sub(v[j], F_.mul(c, rows_[i][j]));
  }
  return v;
}

bool EchelonSpan::insert(Vec v) {
  v = reduce(std::move(v));
  size_t piv = 0;
  while (piv < dim_ && v[piv] == 0) ++piv;
  if (piv == dim_) return false;
  uint32_t inv = F_.inv(v[piv]);
  for (size_t j = 0; j < dim_; ++j) v[j] = F_.mul(inv, v[j]);
  // keep earlier rows reduced against the new one
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint32_t c = rows_[i][piv];
    if (c == 0) continue;
    for (size_t j = 0; j < dim_; ++j) rows_[i][j] = F_.sub(rows_[i][j], F_.mul(c, v[j]));
  }
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(v));
  pivots_.insert(pivots_.begin() + pos, piv);
  return true;
}

bool EchelonSpan::contains(Vec v) const { return vec_is_zero(reduce(std::move(v))); }

Mat EchelonSpan::basis() const {
  Mat m(rows_.size(), dim_);
  for (size_t i = 0; i < rows_.size(); ++i) m.set_row(i, rows_[i]);
  return m;
}

std::optional<LinearSolution> solve_linear(const PrimeField& F, const Mat& M, const Vec& b) {
  if (b.size() != M.rows) throw std::invalid_argument("solve_linear dimension mismatch");
  Mat aug(M.rows, M.cols + 1);
  for (size_t i = 0; i < M.rows; ++i) {
    for (size_t j = 0; j < M.cols; ++j) aug.at(i, j) = M.at(i, j);
    aug.at(i, M.cols) = b[i];
  }
  auto pivots = rref(F, aug);
  if (!pivots.empty() && pivots.back() == M.cols) return std::nullopt; // pivot in the RHS column
  LinearSolution sol;
  sol.particular.assign(M.cols, 0);
  std::vector<bool> is_pivot(M.cols, false);
  for (size_t r = 0; r < pivots.size(); ++r) {
    is_pivot[pivots[r]] = true;
    sol.particular[pivots[r]] = aug.at(r, M.cols);
  }
  for (size_t c = 0; c < M.cols; ++c) {
    if (is_pivot[c]) continue;
    Vec k(M.cols, 0);
    k[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) k[pivots[r]] = F.neg(aug.at(r, c));
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

BigInt gaussian_binomial(unsigned k, unsigned d, uint32_t p) {
  if (d > k) throw std::invalid_argument("gaussian_binomial: d > k");
  BigInt pz = p;
  BigInt num = 1, den = 1;
  for (unsigned i = 0; i < d; ++i) {
    BigInt pk, pd;
    mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), k - i);
    mpz_pow_ui(pd.get_mpz_t(), pz.get_mpz_t(), d - i);
    num *= pk - 1;
    den *= pd - 1;
  }
  BigInt q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

void enumerate_subspaces(const PrimeField& F, unsigned k, unsigned d,
                         const std::function<void(const Mat&)>& emit, uint64_t budget) {
  if (d > k) throw std::invalid_argument("enumerate_subspaces: d > k");
  BigInt total = gaussian_binomial(k, d, F.p());
  if (total > BigInt(budget)) throw std::runtime_error("enumerate_subspaces: budget exceeded");
  if (d == 0) {
    emit(Mat(0, k));
    return;
  }
  // one RREF per choice of pivot columns; the free entries sit to the right
  // of each pivot, outside pivot columns
  std::vector<unsigned> piv(d);
  for (unsigned i = 0; i < d; ++i) piv[i] = i;
  for (;;) {
    std::vector<std::pair<unsigned, unsigned>> free_pos;
    std::vector<bool> is_piv(k, false);
    for (unsigned i = 0; i < d; ++i) is_piv[piv[i]] = true;
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = piv[i] + 1; j < k; ++j)
        if (!is_piv[j]) free_pos.emplace_back(i, j);

    Mat m(d, k);
    for (unsigned i = 0; i < d; ++i) m.at(i, piv[i]) = 1;
    size_t nfree = free_pos.size();
    std::vector<uint32_t> vals(nfree, 0);
    for (;;) {
      for (size_t t = 0; t < nfree; ++t) m.at(free_pos[t].first, free_pos[t].second) = vals[t];
      emit(m);
      size_t t = 0;
      while (t < nfree && ++vals[t] == F.p()) vals[t++] = 0;
      if (t == nfree) break;
    }

    // next pivot combination in lexicographic order
    int i = static_cast<int>(d) - 1;
    while (i >= 0 && piv[i] == k - d + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (unsigned j = i + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
  }
}

std::vector<Mat> enumerate_subspaces(const PrimeField& F, unsigned k, unsigned d, uint64_t budget) {
  std::vector<Mat> out;
  enumerate_subspaces(F, k, d, [&](const Mat& m) { out.push_back(m); }, budget);
  return out;
}

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

} // namespace tamealg
