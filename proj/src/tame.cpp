#include "tamealg/tame.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <sstream>

namespace tamealg {

Transvection::Transvection(unsigned i, FreeElement f) : index(i), payload(std::move(f)) {
  for (int v : payload.variables())
    if (v == static_cast<int>(i))
      throw std::invalid_argument("transvection payload must not involve its own variable");
}

GammaGenerators::GammaGenerators(unsigned n_, uint32_t N_, Signature sig_)
    : n(n_), N(N_), sig(std::move(sig_)) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (n <= std::max(sig.max_arity(), 2u))
    throw std::invalid_argument("need n > max(ar(S), 2)");
}

std::string GammaGenerators::name(size_t id) const {
  if (id < n) return "a" + std::to_string(id + 1);
  return "b:" + sig.ops.at(id - n).name;
}

int GammaGenerators::id_of(const std::string& nm) const {
  for (size_t id = 0; id < count(); ++id)
    if (name(id) == nm) return static_cast<int>(id);
  return -1;
}

Transvection GammaGenerators::transvection_of(size_t id) const {
  if (id + 1 < n) return Transvection(id, FreeElement::variable(static_cast<int>(id) + 1));
  if (id + 1 == n) return Transvection(n - 1, FreeElement::variable(0, Rational(1, N)));
  size_t s = id - n;
  if (s >= sig.ops.size()) throw std::out_of_range("generator id out of range");
  std::vector<Term> ch;
  for (unsigned j = 1; j <= sig.ops[s].arity; ++j) ch.push_back(Term::leaf(static_cast<int>(j)));
  return Transvection(0, FreeElement::from_term(Term::node(static_cast<int>(s), std::move(ch))));
}

GroupWord inverse_word(const GroupWord& w) {
  GroupWord r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->id, !it->inverse});
  return r;
}

GroupWord commutator(const GroupWord& a, const GroupWord& b) {
  GroupWord r = inverse_word(a);
  GroupWord bi = inverse_word(b);
  r.insert(r.end(), bi.begin(), bi.end());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::string format_word(const GroupWord& w, const GammaGenerators& gens) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += gens.name(w[i].id);
    if (w[i].inverse) s += "^-1";
  }
  return s;
}

GroupWord parse_word(const std::string& text, const GammaGenerators& gens) {
  GroupWord w;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    bool inv = false;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      inv = true;
      tok = tok.substr(0, tok.size() - 3);
    }
    int id = gens.id_of(tok);
    if (id < 0) throw std::invalid_argument("unknown generator '" + tok + "'");
    w.push_back({static_cast<uint32_t>(id), inv});
  }
  return w;
}

Tuple apply_transvection(const AlgebraStructure& A, const Transvection& t, const Tuple& tuple) {
  Tuple out = tuple;
  Vec delta = evaluate(t.payload, tuple, A);
  const PrimeField& F = A.field();
  for (unsigned c = 0; c < A.k(); ++c) out[t.index][c] = F.add(out[t.index][c], delta[c]);
  return out;
}

Tuple apply_word(const AlgebraStructure& A, const GammaGenerators& gens, const GroupWord& w,
                 Tuple tuple) {
  CompiledWord cw(A, gens, w);
  cw.apply_inplace(tuple);
  return tuple;
}

CompiledWord::CompiledWord(const AlgebraStructure& A, const GammaGenerators& gens,
                           const GroupWord& w)
    : A_(&A) {
  const PrimeField& F = A.field();
  // one step template per generator, then a cheap pass over the word
  std::vector<Step> plain(gens.count());
  for (size_t id = 0; id < gens.count(); ++id) {
    Transvection t = gens.transvection_of(id);
    Step s;
    s.index = t.index;
    const auto& [term, coeff] = *t.payload.terms().begin();
    if (term.is_leaf()) {
      s.var = term.var();
      s.op = -1;
      s.coeff = F.reduce_rational(coeff);
    } else {
      // generator payloads are op(x_1, ..., x_ar) with coefficient 1
      s.var = -1;
      s.op = term.op();
      s.coeff = 1;
    }
    plain[id] = s;
  }
  steps_.reserve(w.size());
  for (const GenRef& g : w) {
    Step s = plain.at(g.id);
    if (g.inverse) s.coeff = F.neg(s.coeff);
    steps_.push_back(s);
  }
}

void CompiledWord::apply_inplace(Tuple& t) const {
  const PrimeField& F = A_->field();
  unsigned k = A_->k();
  for (const Step& s : steps_) {
    if (s.var >= 0) {
      const Vec& src = t[s.var];
      Vec& dst = t[s.index];
      for (unsigned c = 0; c < k; ++c) dst[c] = F.add(dst[c], F.mul(s.coeff, src[c]));
    } else {
      // payload is op(x_1,...,x_ar); the written coordinate 0 is not an input
      unsigned ar = A_->sig().ops[s.op].arity;
      Vec val = A_->apply_op(s.op, std::span<const Vec>(t.data() + 1, ar));
      Vec& dst = t[s.index];
      for (unsigned c = 0; c < k; ++c) dst[c] = F.add(dst[c], F.mul(s.coeff, val[c]));
    }
  }
}

std::vector<std::vector<Rational>> word_rational_matrix(const GammaGenerators& gens,
                                                        const GroupWord& w) {
  unsigned n = gens.n;
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n, 0));
  for (unsigned i = 0; i < n; ++i) M[i][i] = 1;
  for (const GenRef& g : w) {
    if (g.id >= n) throw std::invalid_argument("word_rational_matrix: nonlinear factor");
    Transvection t = gens.transvection_of(g.id);
    // payload is c * x_j
    auto& [term, coeff] = *t.payload.terms().begin();
    unsigned i = t.index, j = static_cast<unsigned>(term.var());
    Rational c = g.inverse ? -coeff : coeff;
    // applying the factor maps v to (I + c E_ij) v; accumulate on the left
    for (unsigned col = 0; col < n; ++col) M[i][col] += c * M[j][col];
  }
  return M;
}

SignedPerm SignedPerm::identity(unsigned n) {
  SignedPerm s;
  s.perm.resize(n);
  std::iota(s.perm.begin(), s.perm.end(), 0);
  s.sign.assign(n, 1);
  return s;
}

bool SignedPerm::is_plain_permutation() const {
  return std::all_of(sign.begin(), sign.end(), [](int s) { return s == 1; });
}

namespace {

// single-generator word for the cycle edge m -> m+1 (mod n); the wrap edge
// n-1 -> 0 is a_n and carries coefficient 1/N
GroupWord edge_word(unsigned m) {
  return {GenRef{m, false}}; // a_{m+1} = t_m(x_{m+1}); for m = n-1 this is a_n
}

// word for e_{ij}(c) where c = 1 along forward paths and 1/N across the
// wrap; built by commutators [e_{ik}(r), e_{kj}(s)] = e_{ij}(-rs)
GroupWord unit_elementary(unsigned i, unsigned j, const GammaGenerators& gens) {
  unsigned next = (i + 1) % gens.n;
  if (next == j) return edge_word(i);
  GroupWord head_inv = inverse_word(edge_word(i)); // e_{i,next}(-c1)
  GroupWord tail = unit_elementary(next, j, gens);       // e_{next,j}(c2)
  return commutator(head_inv, tail);                     // e_{ij}(c1 c2)
}

GroupWord repeat_word(const GroupWord& w, long long times) {
  GroupWord r;
  if (times == 0) return r;
  const GroupWord base = times > 0 ? w : inverse_word(w);
  unsigned long long reps = times > 0 ? times : -(unsigned long long)times;
  r.reserve(base.size() * reps);
  for (unsigned long long t = 0; t < reps; ++t) r.insert(r.end(), base.begin(), base.end());
  return r;
}

} // namespace

GroupWord elementary_word(unsigned i, unsigned j, long long r, const GammaGenerators& gens) {
  if (i == j) throw std::invalid_argument("elementary_word: i == j");
  if (i >= gens.n || j >= gens.n) throw std::out_of_range("elementary_word: index out of range");
  if (r == 0) return {};
  bool wraps = j < i; // the ascending path i -> i+1 -> ... -> j crosses n-1 -> 0
  GroupWord unit = unit_elementary(i, j, gens);
  return repeat_word(unit, wraps ? r * static_cast<long long>(gens.N) : r);
}

namespace {

// swap word at (u, v): maps v_u -> coordinate v with sign -1 and v_v ->
// coordinate u with sign +1, identity elsewhere
GroupWord swap_word(unsigned u, unsigned v, const GammaGenerators& gens) {
  GroupWord w = elementary_word(u, v, 1, gens);
  GroupWord m = elementary_word(v, u, -1, gens);
  w.insert(w.end(), m.begin(), m.end());
  GroupWord t = elementary_word(u, v, 1, gens);
  w.insert(w.end(), t.begin(), t.end());
  return w;
}

// compose the swap at (u, v) after the signed permutation S
void append_swap(SignedPerm& S, unsigned u, unsigned v) {
  for (size_t m = 0; m < S.perm.size(); ++m) {
    if (S.perm[m] == u) {
      S.perm[m] = v;
      S.sign[m] = -S.sign[m];
    } else if (S.perm[m] == v) {
      S.perm[m] = u;
    }
  }
}

} // namespace

GroupWord signed_permutation_word(const std::vector<unsigned>& sigma,
                                  const std::vector<bool>& clean, const GammaGenerators& gens,
                                  SignedPerm* out) {
  unsigned n = gens.n;
  if (sigma.size() != n) throw std::invalid_argument("sigma must have length n");
  {
    std::vector<bool> hit(n, false);
    for (unsigned t : sigma) {
      if (t >= n || hit[t]) throw std::invalid_argument("sigma is not a permutation");
      hit[t] = true;
    }
  }
  GroupWord word;
  SignedPerm S = SignedPerm::identity(n);
  // selection placement: coordinates below tgt are final and never touched
  for (unsigned tgt = 0; tgt < n; ++tgt) {
    unsigned src = 0;
    while (sigma[src] != tgt) ++src;
    unsigned cur = S.perm[src];
    if (cur == tgt) continue;
    GroupWord sw = swap_word(tgt, cur, gens);
    word.insert(word.end(), sw.begin(), sw.end());
    append_swap(S, tgt, cur);
  }
  // clear sign defects on clean sources by pairing coordinate flips; a flip
  // pair is swap_word applied twice at the same coordinates
  std::vector<unsigned> defects;
  for (unsigned m = 0; m < n; ++m)
    if (m < clean.size() && clean[m] && S.sign[m] < 0) defects.push_back(m);
  if (defects.size() % 2 == 1) {
    unsigned park = n;
    for (unsigned m = 0; m < n; ++m)
      if (!(m < clean.size() && clean[m])) { park = m; break; }
    if (park == n)
      throw std::invalid_argument("signed_permutation_word: odd permutation with every "
                                  "coordinate sign-constrained");
    defects.push_back(park);
  }
  for (size_t t = 0; t + 1 < defects.size(); t += 2) {
    unsigned cu = S.perm[defects[t]], cv = S.perm[defects[t + 1]];
    GroupWord sw = swap_word(cu, cv, gens);
    word.insert(word.end(), sw.begin(), sw.end());
    word.insert(word.end(), sw.begin(), sw.end());
    append_swap(S, cu, cv);
    append_swap(S, cu, cv);
  }
  if (out) *out = S;
  return word;
}

GroupWord permutation_word(const std::vector<unsigned>& sigma, const GammaGenerators& gens) {
  // parity check: count transpositions in the cycle decomposition
  unsigned n = gens.n;
  if (sigma.size() != n) throw std::invalid_argument("sigma must have length n");
  std::vector<bool> seen(n, false);
  unsigned transpositions = 0;
  for (unsigned i = 0; i < n; ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    for (unsigned j = i; !seen[j]; j = sigma[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  if (transpositions % 2 != 0)
    throw std::invalid_argument("permutation_word: sigma must be even");
  return signed_permutation_word(sigma, {}, gens, nullptr);
}

namespace {

// payload transform under conjugation: v -> S v turns t_i(f) into
// t_{perm[i]}( sign[i] * f[x_m -> sign[m] x_{perm[m]}] )
FreeElement rename_payload(const FreeElement& f, const SignedPerm& S) {
  FreeElement out;
  for (auto& [t, c] : f.terms()) {
    int sgn = 1;
    std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
      if (u.is_leaf()) {
        sgn *= S.sign.at(u.var());
        return Term::leaf(static_cast<int>(S.perm.at(u.var())));
      }
      std::vector<Term> ch;
      ch.reserve(u.children().size());
      for (auto& cc : u.children()) ch.push_back(go(cc));
      return Term::node(u.op(), std::move(ch));
    };
    Term renamed = go(t);
    out.add_term(renamed, sgn < 0 ? -c : c);
  }
  return out;
}

// word for t_target(payload), given a word for t_source(payload); the
// conjugating permutation fixes (with +1 signs) every payload variable
GroupWord move_transvection(const GroupWord& w, unsigned source, unsigned target,
                            const FreeElement& payload, const GammaGenerators& gens) {
  if (source == target) return w;
  for (int v : payload.variables())
    if (v == static_cast<int>(target))
      throw std::invalid_argument("move_transvection: payload involves the target coordinate");
  unsigned n = gens.n;
  std::vector<unsigned> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  sigma[source] = target;
  sigma[target] = source;
  std::vector<bool> clean(n, false);
  clean[source] = true;
  for (int v : payload.variables()) clean[v] = true;
  SignedPerm S;
  GroupWord sw = signed_permutation_word(sigma, clean, gens, &S);
  assert(S.perm[source] == target && S.sign[source] == 1);
  GroupWord out = inverse_word(sw);
  out.insert(out.end(), w.begin(), w.end());
  out.insert(out.end(), sw.begin(), sw.end());
#ifndef NDEBUG
  FreeElement moved = rename_payload(payload, S);
  assert(moved == payload);
#endif
  return out;
}

GroupWord word_for_tree(const Term& T, const GammaGenerators& gens);

// gamma_j = t_{l+j}(T_j): build t_0(T_j) recursively and conjugate 0 -> l+j
GroupWord gamma_word(const Term& Tj, unsigned l, unsigned j, const GammaGenerators& gens) {
  GroupWord base = word_for_tree(Tj, gens);
  FreeElement payload = FreeElement::from_term(Tj);
  return move_transvection(base, 0, l + j, payload, gens);
}

GroupWord word_for_tree(const Term& T, const GammaGenerators& gens) {
  unsigned n = gens.n;
  if (T.is_leaf()) {
    unsigned v = static_cast<unsigned>(T.var());
    if (v == 0 || v >= n) throw std::invalid_argument("tree variable out of range");
    return elementary_word(0, v, 1, gens);
  }
  unsigned s = static_cast<unsigned>(T.op());
  unsigned k = gens.sig.ops.at(s).arity;
  unsigned l = std::max(1, T.max_var());
  if (l + k > n - 1)
    throw std::invalid_argument("tree variables leave no room for the commutator block");

  // beta'_s = t_0(op(x_{l+1},...,x_{l+k})): conjugate the generator by a
  // permutation sending m -> l+m for 1 <= m <= k and fixing 0; the leftover
  // sources fill the leftover targets in increasing order
  std::vector<unsigned> tau(n, n);
  tau[0] = 0;
  std::vector<bool> target_used(n, false);
  target_used[0] = true;
  for (unsigned m = 1; m <= k; ++m) {
    tau[m] = l + m;
    target_used[l + m] = true;
  }
  unsigned next_target = 0;
  for (unsigned m = k + 1; m < n; ++m) {
    while (target_used[next_target]) ++next_target;
    tau[m] = next_target;
    target_used[next_target] = true;
  }
  std::vector<bool> clean(n, false);
  for (unsigned m = 0; m <= k; ++m) clean[m] = true;
  SignedPerm S;
  GroupWord tw = signed_permutation_word(tau, clean, gens, &S);
  GroupWord beta{GenRef{static_cast<uint32_t>(n + s), false}};
  GroupWord bprime = inverse_word(tw);
  bprime.insert(bprime.end(), beta.begin(), beta.end());
  bprime.insert(bprime.end(), tw.begin(), tw.end());

  // iterated commutator: each step substitutes T_j into slot j
  GroupWord w = std::move(bprime);
  for (unsigned j = 1; j <= k; ++j) {
    GroupWord gj = gamma_word(T.children()[j - 1], l, j, gens);
    w = commutator(gj, w);
  }
  return w;
}

} // namespace

GroupWord transvection_word(const FreeElement& f, const GammaGenerators& gens) {
  unsigned admissible_max = gens.n - 1 - gens.sig.max_arity();
  for (int v : f.variables())
    if (v < 1 || static_cast<unsigned>(v) > admissible_max)
      throw std::invalid_argument("payload variables must lie in x_1..x_" +
                                  std::to_string(admissible_max));
  GroupWord out;
  for (auto& [t, c] : f.terms()) {
    if (c.get_den() != 1)
      throw std::invalid_argument("constructive words require integer coefficients");
    if (!c.get_num().fits_slong_p())
      throw std::invalid_argument("coefficient too large");
    GroupWord tw = word_for_tree(t, gens);
    GroupWord reps = repeat_word(tw, c.get_num().get_si());
    out.insert(out.end(), reps.begin(), reps.end());
  }
  return out;
}

Endomorphism word_endomorphism(const GroupWord& w, unsigned cap, const GammaGenerators& gens) {
  // composite of g_1 ... g_k maps x_i to sub(g_1, sub(g_2, ... g_k(x_i))).
  // Folding forward, appending g means image[g.index] += sub(acc, payload),
  // all other images untouched; generator payloads are single small terms,
  // so each token costs one substitution of that term
  Endomorphism acc = Endomorphism::identity(gens.n, cap);
  std::vector<Transvection> cache;
  for (size_t id = 0; id < gens.count(); ++id) cache.push_back(gens.transvection_of(id));
  for (const GenRef& g : w) {
    const Transvection& t = cache[g.id];
    FreeElement delta = substitute(gens.sig, acc, t.payload);
    if (g.inverse) acc.images[t.index] -= delta;
    else acc.images[t.index] += delta;
  }
  return acc;
}

bool verify_word_symbolic(const GroupWord& w, const Transvection& expected, unsigned cap,
                          const GammaGenerators& gens) {
  auto deg = expected.payload.degree();
  if (deg && *deg > cap)
    throw std::invalid_argument("verification cap is below the expected payload degree");
  Endomorphism acc = word_endomorphism(w, cap, gens);
  Endomorphism want = Endomorphism::identity(gens.n, cap);
  want.images[expected.index] += expected.payload;
  for (unsigned i = 0; i < gens.n; ++i)
    if (!(acc.images[i].truncated(cap) == want.images[i].truncated(cap))) return false;
  return true;
}

std::optional<FreeElement> crt_solve(const AlgebraStructure& A, std::span<const Vec> points,
                                     std::span<const Vec> targets, unsigned d_max) {
  if (points.size() != targets.size())
    throw std::invalid_argument("crt_solve: points/targets size mismatch");
  for (auto& a : points)
    if (vec_is_zero(a)) throw std::invalid_argument("crt_solve: points must be nonzero");
  const PrimeField& F = A.field();
  size_t m = points.size();
  unsigned k = A.k();
  Vec b(m * k);
  for (size_t i = 0; i < m; ++i)
    for (unsigned c = 0; c < k; ++c) b[i * k + c] = targets[i][c];

  std::vector<Term> terms;
  std::vector<Vec> columns; // stacked evaluations per term
  for (unsigned D = 1; D <= d_max; ++D) {
    for (auto& t : terms_of_degree(A.sig(), D)) {
      Vec col(m * k);
      for (size_t i = 0; i < m; ++i) {
        std::vector<Vec> assign{points[i]};
        Vec v = evaluate_term(t, assign, A);
        for (unsigned c = 0; c < k; ++c) col[i * k + c] = v[c];
      }
      terms.push_back(t);
      columns.push_back(std::move(col));
    }
    Mat M(m * k, terms.size());
    for (size_t j = 0; j < columns.size(); ++j)
      for (size_t r = 0; r < m * k; ++r) M.at(r, j) = columns[j][r];
    auto sol = solve_linear(F, M, b);
    if (!sol) continue;
    FreeElement v;
    for (size_t j = 0; j < terms.size(); ++j)
      if (sol->particular[j]) v.add_term(terms[j], Rational(sol->particular[j]));
    // re-check the constraints exactly
    for (size_t i = 0; i < m; ++i) {
      std::vector<Vec> assign{points[i]};
      if (evaluate(v, assign, A) != Vec(targets[i].begin(), targets[i].end()))
        throw std::logic_error("crt_solve: verification failed");
    }
    return v;
  }
  return std::nullopt;
}

} // namespace tamealg
