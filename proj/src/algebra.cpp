#include "tamealg/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "json.hpp"

#include "tamealg/rng.hpp"

namespace tamealg {

using ordered_json = nlohmann::ordered_json;

AlgebraStructure::AlgebraStructure(Signature sig, unsigned k, uint32_t p)
    : sig_(std::move(sig)), k_(k), p_(p), field_(p) {
  if (k < 1) throw std::invalid_argument("dimension k must be >= 1");
  tensors_.resize(sig_.ops.size());
  for (size_t s = 0; s < sig_.ops.size(); ++s) {
    size_t n = 1;
    for (unsigned a = 0; a < sig_.ops[s].arity; ++a) n *= k;
    tensors_[s].assign(n, Vec(k, 0));
  }
}

Vec AlgebraStructure::apply_op(size_t s, std::span<const Vec> args) const {
  unsigned ar = sig_.ops[s].arity;
  if (args.size() != ar) throw std::invalid_argument("apply_op: arity mismatch");
  Vec out(k_, 0);
  // sum over basis tuples of the product of argument coordinates
  std::vector<unsigned> idx(ar, 0);
  size_t flat = 0;
  for (;;) {
    uint64_t coeff = 1;
    for (unsigned j = 0; j < ar && coeff; ++j) coeff = coeff * args[j][idx[j]] % p_;
    if (coeff) {
      const Vec& val = tensors_[s][flat];
      for (unsigned c = 0; c < k_; ++c)
        out[c] = static_cast<uint32_t>((out[c] + coeff * val[c]) % p_);
    }
    // advance row-major: last index fastest
    int j = static_cast<int>(ar) - 1;
    while (j >= 0 && ++idx[j] == k_) idx[j--] = 0;
    if (j < 0) break;
    flat = 0;
    for (unsigned t = 0; t < ar; ++t) flat = flat * k_ + idx[t];
    continue;
  }
  return out;
}

uint64_t AlgebraStructure::parameter_count(const Signature& sig, unsigned k) {
  uint64_t n = 0;
  for (auto& op : sig.ops) {
    uint64_t t = k;
    for (unsigned a = 0; a < op.arity; ++a) t *= k;
    n += t;
  }
  return n;
}

BigInt AlgebraStructure::total_count(const Signature& sig, unsigned k, uint32_t p) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, parameter_count(sig, k));
  return r;
}

AlgebraStructure AlgebraStructure::random(const Signature& sig, unsigned k, uint32_t p,
                                          uint64_t seed) {
  AlgebraStructure A(sig, k, p);
  SplitMix64 rng(seed);
  for (size_t s = 0; s < A.tensors_.size(); ++s)
    for (auto& entry : A.tensors_[s])
      for (unsigned c = 0; c < k; ++c) entry[c] = static_cast<uint32_t>(rng.below(p));
  return A;
}

AlgebraStructure AlgebraStructure::from_index(const Signature& sig, unsigned k, uint32_t p,
                                              uint64_t index) {
  AlgebraStructure A(sig, k, p);
  for (size_t s = 0; s < A.tensors_.size(); ++s)
    for (auto& entry : A.tensors_[s])
      for (unsigned c = 0; c < k; ++c) {
        entry[c] = static_cast<uint32_t>(index % p);
        index /= p;
      }
  if (index != 0) throw std::out_of_range("structure index out of range");
  return A;
}

bool AlgebraStructure::operator==(const AlgebraStructure& o) const {
  return p_ == o.p_ && k_ == o.k_ && tensors_ == o.tensors_;
}

std::string AlgebraStructure::to_json() const {
  ordered_json j;
  j["p"] = p_;
  j["k"] = k_;
  j["signature"] = ordered_json::array();
  for (auto& op : sig_.ops) j["signature"].push_back({{"name", op.name}, {"arity", op.arity}});
  ordered_json tens = ordered_json::object();
  for (size_t s = 0; s < sig_.ops.size(); ++s) {
    // nested arrays, one level per input index, innermost = output vector
    unsigned ar = sig_.ops[s].arity;
    std::function<ordered_json(unsigned, size_t)> build = [&](unsigned depth, size_t base) {
      ordered_json arr = ordered_json::array();
      if (depth == ar) {
        for (unsigned c = 0; c < k_; ++c) arr.push_back(tensors_[s][base][c]);
        return arr;
      }
      size_t stride = 1;
      for (unsigned a = depth + 1; a < ar; ++a) stride *= k_;
      for (unsigned i = 0; i < k_; ++i) arr.push_back(build(depth + 1, base + i * stride));
      return arr;
    };
    tens[sig_.ops[s].name] = build(0, 0);
  }
  j["tensors"] = tens;
  return j.dump();
}

AlgebraStructure AlgebraStructure::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  uint32_t p = j.at("p").get<uint32_t>();
  unsigned k = j.at("k").get<unsigned>();
  std::vector<Signature::Op> ops;
  for (auto& o : j.at("signature"))
    ops.push_back({o.at("name").get<std::string>(), o.at("arity").get<unsigned>()});
  AlgebraStructure A(Signature(std::move(ops)), k, p);
  for (size_t s = 0; s < A.sig_.ops.size(); ++s) {
    unsigned ar = A.sig_.ops[s].arity;
    const ordered_json& root = j.at("tensors").at(A.sig_.ops[s].name);
    std::function<void(const ordered_json&, unsigned, size_t)> read = [&](const ordered_json& arr,
                                                                          unsigned depth,
                                                                          size_t base) {
      if (arr.size() != k) throw std::invalid_argument("tensor shape mismatch");
      if (depth == ar) return;
      size_t stride = 1;
      for (unsigned a = depth + 1; a < ar; ++a) stride *= k;
      for (unsigned i = 0; i < k; ++i) {
        if (depth + 1 == ar) {
          if (arr.at(i).size() != k) throw std::invalid_argument("tensor value length mismatch");
          for (unsigned c = 0; c < k; ++c) {
            long long v = arr.at(i).at(c).get<long long>();
            A.tensors_[s][base + i * stride][c] = A.field_.reduce_int(v);
          }
        } else {
          read(arr.at(i), depth + 1, base + i * stride);
        }
      }
    };
    read(root, 0, 0);
  }
  return A;
}

Vec evaluate_term(const Term& t, std::span<const Vec> assignment, const AlgebraStructure& A) {
  if (t.is_leaf()) {
    if (static_cast<size_t>(t.var()) >= assignment.size())
      throw std::invalid_argument("evaluate: variable x" + std::to_string(t.var()) +
                                  " unassigned");
    return assignment[t.var()];
  }
  std::vector<Vec> args;
  args.reserve(t.children().size());
  for (auto& c : t.children()) args.push_back(evaluate_term(c, assignment, A));
  return A.apply_op(t.op(), args);
}

Vec evaluate(const FreeElement& e, std::span<const Vec> assignment, const AlgebraStructure& A) {
  const PrimeField& F = A.field();
  Vec out(A.k(), 0);
  for (auto& [t, c] : e.terms()) {
    uint32_t coeff = F.reduce_rational(c);
    if (!coeff) continue;
    Vec v = evaluate_term(t, assignment, A);
    for (unsigned i = 0; i < A.k(); ++i) out[i] = F.add(out[i], F.mul(coeff, v[i]));
  }
  return out;
}

SubalgebraBasis generated_subalgebra(const AlgebraStructure& A, std::span<const Vec> seeds) {
  const PrimeField& F = A.field();
  SubalgebraBasis result;
  EchelonSpan span(F, A.k());
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (span.insert(seeds[i])) {
      result.spanning.push_back(seeds[i]);
      result.witnesses.push_back(Term::leaf(static_cast<int>(i)));
    }
  }
  // fixpoint over basis tuples: sweep the current basis, vectors found this
  // sweep join the next one; the basis has at most k vectors so this ends
  bool grew = !result.spanning.empty();
  while (grew) {
    grew = false;
    size_t n = result.spanning.size();
    for (size_t s = 0; s < A.sig().ops.size(); ++s) {
      unsigned ar = A.sig().ops[s].arity;
      std::vector<size_t> idx(ar, 0);
      for (;;) {
        std::vector<Vec> args;
        args.reserve(ar);
        for (unsigned j = 0; j < ar; ++j) args.push_back(result.spanning[idx[j]]);
        Vec v = A.apply_op(s, args);
        if (span.insert(v)) {
          std::vector<Term> ch;
          for (unsigned j = 0; j < ar; ++j) ch.push_back(result.witnesses[idx[j]]);
          result.spanning.push_back(std::move(v));
          result.witnesses.push_back(Term::node(static_cast<int>(s), std::move(ch)));
          grew = true;
        }
        int j = static_cast<int>(ar) - 1;
        while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
        if (j < 0) break;
      }
    }
  }
  result.echelon = span.basis();
  result.closed = true;
  return result;
}

bool is_invariant_subspace(const AlgebraStructure& A, const Mat& rows) {
  const PrimeField& F = A.field();
  EchelonSpan span(F, A.k());
  std::vector<Vec> basis;
  for (size_t i = 0; i < rows.rows; ++i) {
    basis.push_back(rows.row(i));
    span.insert(rows.row(i));
  }
  for (size_t s = 0; s < A.sig().ops.size(); ++s) {
    unsigned ar = A.sig().ops[s].arity;
    std::vector<size_t> idx(ar, 0);
    if (basis.empty()) continue;
    for (;;) {
      std::vector<Vec> args;
      for (unsigned j = 0; j < ar; ++j) args.push_back(basis[idx[j]]);
      if (!span.contains(A.apply_op(s, args))) return false;
      int j = static_cast<int>(ar) - 1;
      while (j >= 0 && ++idx[j] == basis.size()) idx[j--] = 0;
      if (j < 0) break;
    }
  }
  return true;
}

bool is_minimal(const AlgebraStructure& A) {
  const PrimeField& F = A.field();
  unsigned k = A.k();
  // one representative per projective line: first nonzero coordinate = 1
  Vec v(k, 0);
  auto next_point = [&]() {
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && ++v[i] == F.p()) v[i--] = 0;
    return i >= 0;
  };
  while (next_point()) {
    size_t first = 0;
    while (first < k && v[first] == 0) ++first;
    if (v[first] != 1) continue;
    std::vector<Vec> seeds{v};
    if (generated_subalgebra(A, seeds).dim() < k) return false;
  }
  return true;
}

bool is_minimal_subspace_oracle(const AlgebraStructure& A) {
  const PrimeField& F = A.field();
  for (unsigned d = 1; d < A.k(); ++d) {
    bool found = false;
    enumerate_subspaces(F, A.k(), d, [&](const Mat& m) {
      if (!found && is_invariant_subspace(A, m)) found = true;
    });
    if (found) return false;
  }
  return true;
}

bool has_one_dim_subalgebra(const AlgebraStructure& A) {
  if (A.k() == 1) return true; // the whole space; callers treat k=1 as out of domain
  const PrimeField& F = A.field();
  bool found = false;
  enumerate_subspaces(F, A.k(), 1, [&](const Mat& m) {
    if (!found && is_invariant_subspace(A, m)) found = true;
  });
  return found;
}

std::vector<uint32_t> scalar_automorphisms(const AlgebraStructure& A) {
  const PrimeField& F = A.field();
  std::vector<uint32_t> out;
  for (uint32_t lam = 1; lam < F.p(); ++lam) {
    bool ok = true;
    for (auto& op : A.sig().ops)
      if (F.pow(lam, op.arity - 1) != 1) { ok = false; break; }
    // lambda^{ar-1} = 1 makes lambda*Id commute with every arity-ar map
    if (ok) out.push_back(lam);
  }
  return out;
}

namespace {

// does phi intertwine A's ops with B's: phi(star_s(e_i...)) = star'_s(phi e_i...)?
bool intertwines(const AlgebraStructure& A, const AlgebraStructure& B, const Mat& phi) {
  const PrimeField& F = A.field();
  unsigned k = A.k();
  std::vector<Vec> images(k);
  for (unsigned i = 0; i < k; ++i) {
    Vec e(k, 0);
    e[i] = 1;
    images[i] = mat_vec(F, phi, e);
  }
  for (size_t s = 0; s < A.sig().ops.size(); ++s) {
    unsigned ar = A.sig().ops[s].arity;
    std::vector<unsigned> idx(ar, 0);
    size_t flat = 0;
    for (;;) {
      Vec lhs = mat_vec(F, phi, A.tensor_entry(s, flat));
      std::vector<Vec> args;
      for (unsigned j = 0; j < ar; ++j) args.push_back(images[idx[j]]);
      if (lhs != B.apply_op(s, args)) return false;
      int j = static_cast<int>(ar) - 1;
      while (j >= 0 && ++idx[j] == k) idx[j--] = 0;
      if (j < 0) break;
      flat = 0;
      for (unsigned t = 0; t < ar; ++t) flat = flat * k + idx[t];
    }
  }
  return true;
}

// generator-image search shared by automorphisms() and are_isomorphic();
// returns every invertible phi: A -> B commuting with the operations
std::vector<Mat> intertwiner_search(const AlgebraStructure& A, const AlgebraStructure& B,
                                    bool stop_at_first) {
  if (!(A.sig().to_spec() == B.sig().to_spec()) || A.k() != B.k() || A.p() != B.p())
    throw std::invalid_argument("intertwiner search needs matching (sig, k, p)");
  const PrimeField& F = A.field();
  unsigned k = A.k();
  Vec a(k, 0);
  a[0] = 1;
  std::vector<Vec> seeds{a};
  SubalgebraBasis closure = generated_subalgebra(A, seeds);
  if (closure.dim() < k)
    throw std::domain_error(
        "generator-image search requires a minimal structure; use the enumeration oracle");
  // any homomorphism phi with phi(a) = b maps the witness value ev_A(w_i, a)
  // to ev_B(w_i, b), which pins phi on the basis `spanning`
  Mat V(k, k);
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j) V.at(j, i) = closure.spanning[i][j]; // columns
  Mat Vinv = *mat_inverse(F, V);

  std::vector<Mat> found;
  Vec b(k, 0);
  auto next_b = [&]() {
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && ++b[i] == F.p()) b[i--] = 0;
    return i >= 0;
  };
  while (next_b()) {
    std::vector<Vec> bseed{b};
    Mat U(k, k);
    for (unsigned i = 0; i < k; ++i) {
      Vec u = evaluate_term(closure.witnesses[i], bseed, B);
      for (unsigned j = 0; j < k; ++j) U.at(j, i) = u[j];
    }
    Mat phi = mat_mul(F, U, Vinv);
    if (!mat_inverse(F, phi)) continue;
    if (intertwines(A, B, phi)) {
      found.push_back(phi);
      if (stop_at_first) return found;
    }
  }
  return found;
}

} // namespace

AutGroup automorphisms(const AlgebraStructure& A) { return intertwiner_search(A, A, false); }

AutGroup automorphisms_enumeration_oracle(const AlgebraStructure& A, uint64_t budget) {
  if (gl_order(A.k(), A.p()) > BigInt(budget))
    throw std::runtime_error("automorphism enumeration oracle: budget exceeded");
  const PrimeField& F = A.field();
  unsigned k = A.k();
  AutGroup out;
  Mat m(k, k);
  std::vector<uint32_t>& cells = m.a;
  for (;;) {
    if (mat_inverse(F, m) && intertwines(A, A, m)) out.push_back(m);
    size_t i = 0;
    while (i < cells.size() && ++cells[i] == F.p()) cells[i++] = 0;
    if (i == cells.size()) break;
  }
  return out;
}

BigInt gl_order(unsigned k, uint32_t p) {
  BigInt order = 1, pk;
  BigInt pz = p;
  mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), k);
  for (unsigned i = 0; i < k; ++i) {
    BigInt pi;
    mpz_pow_ui(pi.get_mpz_t(), pz.get_mpz_t(), i);
    order *= pk - pi;
  }
  return order;
}

std::optional<Mat> are_isomorphic(const AlgebraStructure& A, const AlgebraStructure& B) {
  auto found = intertwiner_search(A, B, true);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::pair<uint64_t, uint64_t> orbit_counts_on_points(const AlgebraStructure& A,
                                                     const AutGroup& aut) {
  const PrimeField& F = A.field();
  unsigned k = A.k();
  uint64_t npoints = 1;
  for (unsigned i = 0; i < k; ++i) npoints *= F.p();
  auto encode = [&](const Vec& v) {
    uint64_t c = 0;
    for (unsigned i = 0; i < k; ++i) c = c * F.p() + v[i];
    return c;
  };
  std::vector<bool> seen(npoints, false);
  uint64_t orbits_nonzero = 0;
  Vec v(k, 0);
  for (uint64_t code = 1; code < npoints; ++code) {
    uint64_t c = code;
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
      v[i] = c % F.p();
      c /= F.p();
    }
    if (seen[code]) continue;
    ++orbits_nonzero;
    seen[code] = true;
    // closure under the group (it is a full group, one sweep suffices)
    for (auto& phi : aut) seen[encode(mat_vec(F, phi, v))] = true;
  }
  return {orbits_nonzero + 1, orbits_nonzero};
}

} // namespace tamealg
