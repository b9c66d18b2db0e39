#include "tamealg/action.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace tamealg {

TupleCodec::TupleCodec(uint32_t p_, unsigned k_, unsigned n_, uint64_t budget)
    : p(p_), k(k_), n(n_) {
  point_size = 1;
  for (unsigned i = 0; i < k; ++i) point_size *= p;
  size = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (size > budget / point_size + 1) throw std::runtime_error("tuple domain exceeds budget");
    size *= point_size;
  }
  if (size > budget) throw std::runtime_error("tuple domain exceeds budget");
}

uint64_t TupleCodec::encode_point(const Vec& v) const {
  uint64_t c = 0;
  for (unsigned i = 0; i < k; ++i) c = c * p + v[i];
  return c;
}

Vec TupleCodec::decode_point(uint64_t code) const {
  Vec v(k);
  for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
    v[i] = static_cast<uint32_t>(code % p);
    code /= p;
  }
  return v;
}

uint64_t TupleCodec::encode(const Tuple& t) const {
  uint64_t c = 0;
  for (unsigned i = 0; i < n; ++i) c = c * point_size + encode_point(t[i]);
  return c;
}

Tuple TupleCodec::decode(uint64_t code) const {
  Tuple t(n);
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    t[i] = decode_point(code % point_size);
    code /= point_size;
  }
  return t;
}

OmegaIndex build_omega(const AlgebraStructure& A, unsigned n, const AutGroup& aut, bool parallel,
                       uint64_t budget) {
  const PrimeField& F = A.field();
  TupleCodec codec(A.p(), A.k(), n, budget);
  // point-code tables for each automorphism
  std::vector<std::vector<uint32_t>> point_map(aut.size(),
                                               std::vector<uint32_t>(codec.point_size));
  for (size_t a = 0; a < aut.size(); ++a)
    for (uint64_t pc = 0; pc < codec.point_size; ++pc)
      point_map[a][pc] = static_cast<uint32_t>(codec.encode_point(mat_vec(F, aut[a], codec.decode_point(pc))));

  std::vector<uint64_t> minrep(codec.size);
  int64_t total = static_cast<int64_t>(codec.size);
#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t c = 1; c < total; ++c) {
    // decompose into point codes once, then map through each automorphism
    uint64_t digits[64];
    uint64_t src = static_cast<uint64_t>(c);
    for (int i = static_cast<int>(codec.n) - 1; i >= 0; --i) {
      digits[i] = src % codec.point_size;
      src /= codec.point_size;
    }
    uint64_t best = static_cast<uint64_t>(c);
    for (size_t a = 0; a < point_map.size(); ++a) {
      uint64_t img = 0;
      for (unsigned i = 0; i < codec.n; ++i)
        img = img * codec.point_size + point_map[a][digits[i]];
      best = std::min(best, img);
    }
    minrep[c] = best;
  }

  OmegaIndex omega{codec, std::vector<int64_t>(codec.size, -1), {}};
  for (uint64_t c = 1; c < codec.size; ++c) {
    if (minrep[c] == c) {
      omega.orbit_of[c] = static_cast<int64_t>(omega.reps.size());
      omega.reps.push_back(c);
    } else {
      omega.orbit_of[c] = omega.orbit_of[minrep[c]]; // minrep[c] < c, already assigned
    }
  }
  return omega;
}

Permutation identity_permutation(unsigned degree) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation inverse_permutation(const Permutation& p) {
  Permutation q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<uint32_t>(i);
  return q;
}

Permutation compose_permutations(const Permutation& a, const Permutation& b) {
  Permutation c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

std::vector<unsigned> cycle_type(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  std::vector<unsigned> cycles;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    for (size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    cycles.push_back(len);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

bool permutation_is_even(const Permutation& p) {
  auto ct = cycle_type(p);
  unsigned transpositions = 0;
  for (unsigned len : ct) transpositions += len - 1;
  return transpositions % 2 == 0;
}

BigInt permutation_order(const Permutation& p) {
  BigInt o = 1;
  for (unsigned len : cycle_type(p)) {
    BigInt l = len;
    mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), l.get_mpz_t());
  }
  return o;
}

Permutation permutation_image(const GroupWord& w, const OmegaIndex& omega,
                              const AlgebraStructure& A, const GammaGenerators& gens,
                              bool parallel) {
  const TupleCodec& codec = omega.codec;
  Permutation img(omega.size(), 0);
  int64_t m = static_cast<int64_t>(omega.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t q = 0; q < m; ++q) {
    Tuple t = codec.decode(omega.reps[q]);
    Tuple u = apply_word(A, gens, w, std::move(t));
    int64_t target = omega.orbit_of[codec.encode(u)];
    assert(target >= 0); // invertible maps keep nonzero tuples nonzero
    img[q] = static_cast<uint32_t>(target);
  }
  // well-definedness: the image may not depend on the representative chosen
  int64_t violations = 0;
  int64_t total = static_cast<int64_t>(codec.size);
#pragma omp parallel for schedule(static) reduction(+ : violations) if (parallel)
  for (int64_t c = 1; c < total; ++c) {
    Tuple u = apply_word(A, gens, w, codec.decode(static_cast<uint64_t>(c)));
    if (img[omega.orbit_of[c]] != static_cast<uint32_t>(omega.orbit_of[codec.encode(u)]))
      ++violations;
  }
  if (violations)
    throw std::logic_error("permutation_image: action is not well defined on Aut-orbits");
  // sanity: img is a bijection
  std::vector<bool> hit(omega.size(), false);
  for (uint32_t v : img) {
    if (hit[v]) throw std::logic_error("permutation_image: image is not a bijection");
    hit[v] = true;
  }
  return img;
}

std::vector<uint64_t> orbit_sizes_on_tuples(const AlgebraStructure& A,
                                            const GammaGenerators& gens, uint64_t budget) {
  TupleCodec codec(A.p(), A.k(), gens.n, budget);
  std::vector<int64_t> parent(codec.size);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int64_t(int64_t)> find = [&](int64_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](int64_t a, int64_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (size_t id = 0; id < gens.count(); ++id) {
    Transvection t = gens.transvection_of(id);
    for (uint64_t c = 0; c < codec.size; ++c) {
      Tuple u = apply_transvection(A, t, codec.decode(c));
      unite(static_cast<int64_t>(c), static_cast<int64_t>(codec.encode(u)));
    }
  }
  std::map<int64_t, uint64_t> sizes;
  for (uint64_t c = 0; c < codec.size; ++c) ++sizes[find(static_cast<int64_t>(c))];
  std::vector<uint64_t> out;
  for (auto& [root, sz] : sizes) out.push_back(sz);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool is_identity(const Permutation& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

struct Level {
  unsigned base_point;
  std::vector<Permutation> gens;
  // Schreier vector: for each point, the generator index and source point
  // that first reached it; -1 entries mark the root / unreached
  std::vector<int32_t> via_gen;
  std::vector<int64_t> via_from;
  std::vector<unsigned> orbit;
  // explicit coset representatives (u_reps[y] maps base_point to y) when the
  // degree is small enough to afford them; otherwise rebuilt from the
  // Schreier vector on demand
  bool explicit_reps = false;
  std::vector<Permutation> u_reps;
  std::vector<Permutation> u_inv;

  void recompute_orbit(unsigned degree) {
    via_gen.assign(degree, -1);
    via_from.assign(degree, -1);
    explicit_reps = degree <= 400;
    if (explicit_reps) {
      u_reps.assign(degree, {});
      u_inv.assign(degree, {});
    }
    orbit.clear();
    orbit.push_back(base_point);
    via_from[base_point] = base_point;
    if (explicit_reps) u_reps[base_point] = u_inv[base_point] = identity_permutation(degree);
    for (size_t q = 0; q < orbit.size(); ++q) {
      unsigned x = orbit[q];
      for (size_t g = 0; g < gens.size(); ++g) {
        unsigned y = gens[g][x];
        if (via_from[y] >= 0) continue;
        via_from[y] = x;
        via_gen[y] = static_cast<int32_t>(g);
        if (explicit_reps) {
          u_reps[y] = compose_permutations(u_reps[x], gens[g]);
          u_inv[y] = inverse_permutation(u_reps[y]);
        }
        orbit.push_back(y);
      }
    }
  }

  bool in_orbit(unsigned y) const { return via_from[y] >= 0; }

  // transversal element u with u[base_point] = y
  Permutation transversal(unsigned y, unsigned degree) const {
    if (explicit_reps) return u_reps[y];
    Permutation u = identity_permutation(degree);
    while (y != base_point) {
      const Permutation& g = gens[via_gen[y]];
      // prepend g: u := g then u
      u = compose_permutations(g, u);
      y = static_cast<unsigned>(via_from[y]);
    }
    return u;
  }
};

} // namespace

BSGS schreier_sims(const std::vector<Permutation>& gens, unsigned degree,
                   const std::vector<unsigned>& base_prefix) {
  if (degree > 5000) throw std::runtime_error("schreier_sims: degree exceeds the 5000 guard");
  for (auto& g : gens)
    if (g.size() != degree) throw std::invalid_argument("generator degree mismatch");

  std::vector<Level> levels;
  auto add_level = [&](unsigned point) {
    Level lv;
    lv.base_point = point;
    levels.push_back(std::move(lv));
    levels.back().recompute_orbit(degree);
  };
  for (unsigned b : base_prefix) {
    if (b >= degree) throw std::invalid_argument("base point out of range");
    bool dup = false;
    for (auto& lv : levels) dup = dup || lv.base_point == b;
    if (!dup) add_level(b);
  }

  // sift g through levels >= from; returns the level where the residue
  // settles (possibly creating a new level) or nothing if it vanishes
  auto sift_in = [&](Permutation g, size_t from) -> std::optional<std::pair<size_t, Permutation>> {
    for (size_t t = from; t < levels.size(); ++t) {
      if (is_identity(g)) return std::nullopt;
      unsigned y = g[levels[t].base_point];
      if (y == levels[t].base_point) continue;
      if (!levels[t].in_orbit(y)) return std::make_pair(t, std::move(g));
      if (levels[t].explicit_reps) {
        g = compose_permutations(g, levels[t].u_inv[y]);
      } else {
        Permutation u = levels[t].transversal(y, degree);
        g = compose_permutations(g, inverse_permutation(u));
      }
    }
    if (is_identity(g)) return std::nullopt;
    // fixes every base point: open a new level at its smallest moved point
    unsigned moved = 0;
    while (g[moved] == moved) ++moved;
    add_level(moved);
    return std::make_pair(levels.size() - 1, std::move(g));
  };

  if (levels.empty()) {
    // base must start at a moved point if any generator is nontrivial
    unsigned moved = degree;
    for (auto& g : gens)
      for (unsigned x = 0; x < degree && x < moved; ++x)
        if (g[x] != x) moved = std::min(moved, x);
    if (moved == degree) { // trivial group
      BSGS b;
      b.degree = degree;
      return b;
    }
    add_level(moved);
  }

  // distribute the input generators: g belongs to levels 0..depth(g)
  for (auto& g : gens) {
    if (is_identity(g)) continue;
    size_t depth = 0;
    while (depth < levels.size() && g[levels[depth].base_point] == levels[depth].base_point)
      ++depth;
    if (depth == levels.size()) {
      unsigned moved = 0;
      while (g[moved] == moved) ++moved;
      add_level(moved);
    }
    for (size_t t = 0; t <= depth && t < levels.size(); ++t) {
      levels[t].gens.push_back(g);
      levels[t].recompute_orbit(degree);
    }
  }

  // verify levels bottom-up: every Schreier generator of level i must sift
  // to the identity through the deeper levels
  size_t i = levels.size();
  while (i > 0) {
    --i;
    bool complete = true;
    Level& lv = levels[i];
    for (size_t q = 0; q < lv.orbit.size() && complete; ++q) {
      unsigned x = lv.orbit[q];
      Permutation ux = lv.transversal(x, degree);
      for (size_t g = 0; g < lv.gens.size() && complete; ++g) {
        unsigned y = lv.gens[g][x];
        Permutation schreier = compose_permutations(ux, lv.gens[g]);
        if (lv.explicit_reps) {
          schreier = compose_permutations(schreier, lv.u_inv[y]);
        } else {
          schreier = compose_permutations(schreier, inverse_permutation(lv.transversal(y, degree)));
        }
        auto res = sift_in(std::move(schreier), i + 1);
        if (res) {
          // install the residue at its level and at every level in between
          size_t at = res->first;
          for (size_t t = i + 1; t <= at; ++t) {
            levels[t].gens.push_back(res->second);
            levels[t].recompute_orbit(degree);
          }
          i = at + 1; // recheck from the level that changed
          complete = false;
        }
      }
    }
    if (!complete) continue;
  }

  BSGS out;
  out.degree = degree;
  for (auto& lv : levels) {
    out.base.push_back(lv.base_point);
    out.level_gens.push_back(lv.gens);
    out.basic_orbits.push_back(lv.orbit);
    out.order *= BigInt(static_cast<unsigned long>(lv.orbit.size()));
  }
  return out;
}

unsigned transitivity_degree(const BSGS& bsgs, unsigned cap) {
  unsigned t = 0;
  for (unsigned i = 0; i < cap; ++i) {
    if (i >= bsgs.base.size()) break;
    if (bsgs.base[i] != i) break; // chain must start 0,1,2,...
    if (bsgs.orbit_size(i) != bsgs.degree - i) break;
    ++t;
  }
  return t;
}

GroupClass recognize_alt_sym(const BSGS& bsgs, const std::vector<Permutation>& gens) {
  BigInt full = factorial(bsgs.degree);
  if (bsgs.order == full) return GroupClass::Sym;
  BigInt half = full / 2;
  if (bsgs.order == half) {
    for (auto& g : gens)
      if (!permutation_is_even(g)) return GroupClass::Other; // order says index 2, parity disagrees
    return GroupClass::Alt;
  }
  return GroupClass::Other;
}

uint64_t group_order_brute_force(const std::vector<Permutation>& gens, uint64_t cap) {
  if (gens.empty()) return 1;
  std::set<Permutation> elems;
  std::vector<Permutation> queue{identity_permutation(static_cast<unsigned>(gens[0].size()))};
  elems.insert(queue[0]);
  for (size_t q = 0; q < queue.size(); ++q) {
    for (auto& g : gens) {
      Permutation h = compose_permutations(queue[q], g);
      if (elems.insert(h).second) {
        if (elems.size() > cap) throw std::runtime_error("group_order_brute_force: cap exceeded");
        queue.push_back(std::move(h));
      }
    }
  }
  return elems.size();
}

namespace {

std::vector<size_t> sorted_label_order(const LabeledAction& a) {
  std::vector<size_t> idx(a.generators.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) {
    return a.generators[x].first < a.generators[y].first;
  });
  return idx;
}

} // namespace

EquivalenceResult actions_equivalent_exact(const LabeledAction& A, const LabeledAction& B) {
  auto ia = sorted_label_order(A), ib = sorted_label_order(B);
  if (ia.size() != ib.size()) throw std::invalid_argument("generator label mismatch");
  for (size_t t = 0; t < ia.size(); ++t)
    if (A.generators[ia[t]].first != B.generators[ib[t]].first)
      throw std::invalid_argument("generator label mismatch");
  if (A.degree != B.degree) return {EquivalenceResult::Verdict::Inequivalent, std::nullopt, "degree"};

  unsigned deg = A.degree;
  std::vector<const Permutation*> pa, pb;
  for (size_t t = 0; t < ia.size(); ++t) {
    pa.push_back(&A.generators[ia[t]].second);
    pb.push_back(&B.generators[ib[t]].second);
  }
  // propagate sigma(0) = y across the A-orbit of 0; the actions of interest
  // are transitive, so full propagation pins sigma everywhere
  for (unsigned y = 0; y < deg; ++y) {
    std::vector<int64_t> sigma(deg, -1);
    sigma[0] = y;
    std::vector<unsigned> stack{0};
    bool ok = true;
    while (!stack.empty() && ok) {
      unsigned x = stack.back();
      stack.pop_back();
      for (size_t g = 0; g < pa.size() && ok; ++g) {
        unsigned xa = (*pa[g])[x];
        uint32_t yb = (*pb[g])[sigma[x]];
        if (sigma[xa] < 0) {
          sigma[xa] = yb;
          stack.push_back(xa);
        } else if (sigma[xa] != yb) {
          ok = false;
        }
      }
    }
    if (!ok) continue;
    // transitivity check + bijectivity + full equivariance
    std::vector<bool> hit(deg, false);
    bool total = true;
    for (unsigned x = 0; x < deg; ++x) {
      if (sigma[x] < 0 || hit[sigma[x]]) { total = false; break; }
      hit[sigma[x]] = true;
    }
    if (!total) return {EquivalenceResult::Verdict::Unknown, std::nullopt,
                        "intransitive action, exact search not applicable"};
    for (size_t g = 0; g < pa.size() && ok; ++g)
      for (unsigned x = 0; x < deg; ++x)
        if (sigma[(*pa[g])[x]] != (*pb[g])[sigma[x]]) { ok = false; break; }
    if (ok) {
      Permutation w(deg);
      for (unsigned x = 0; x < deg; ++x) w[x] = static_cast<uint32_t>(sigma[x]);
      return {EquivalenceResult::Verdict::Equivalent, w, "backtracking"};
    }
  }
  return {EquivalenceResult::Verdict::Inequivalent, std::nullopt, "backtracking"};
}

EquivalenceResult actions_equivalent(const LabeledAction& A, const LabeledAction& B,
                                     unsigned word_cap, unsigned exact_cap) {
  auto ia = sorted_label_order(A), ib = sorted_label_order(B);
  if (ia.size() != ib.size()) throw std::invalid_argument("generator label mismatch");
  for (size_t t = 0; t < ia.size(); ++t)
    if (A.generators[ia[t]].first != B.generators[ib[t]].first)
      throw std::invalid_argument("generator label mismatch");
  if (A.degree != B.degree) return {EquivalenceResult::Verdict::Inequivalent, std::nullopt, "degree"};

  // cycle types of every generator word up to word_cap must match
  size_t ngens = ia.size();
  std::vector<std::pair<Permutation, Permutation>> frontier{{identity_permutation(A.degree),
                                                             identity_permutation(B.degree)}};
  for (unsigned len = 1; len <= word_cap; ++len) {
    std::vector<std::pair<Permutation, Permutation>> next;
    for (auto& [wa, wb] : frontier) {
      for (size_t g = 0; g < ngens; ++g) {
        Permutation na = compose_permutations(wa, A.generators[ia[g]].second);
        Permutation nb = compose_permutations(wb, B.generators[ib[g]].second);
        if (cycle_type(na) != cycle_type(nb))
          return {EquivalenceResult::Verdict::Inequivalent, std::nullopt, "cycle-type"};
        next.emplace_back(std::move(na), std::move(nb));
      }
    }
    frontier = std::move(next);
    if (frontier.size() > 4096) break; // enough refutation power
  }

  if (A.degree > exact_cap)
    return {EquivalenceResult::Verdict::Unknown, std::nullopt, "degree above exact-search cap"};
  return actions_equivalent_exact(A, B);
}

} // namespace tamealg
