#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tamealg/ffield.hpp"

namespace tamealg {

// Finite set of abstract operations with arities >= 1. Operations of arity 0
// (constants) are excluded by construction.
struct Signature {
  struct Op {
    std::string name;
    unsigned arity;
  };
  std::vector<Op> ops;

  Signature() = default;
  explicit Signature(std::vector<Op> o);

  unsigned max_arity() const; // ar(S)
  int index_of(const std::string& name) const;
  size_t size() const { return ops.size(); }

  // compact run-spec mini-language: "b2,b2" (two binary ops), "b2,t3",
  // "a5,b2"; the letter is mnemonic, the digits are the arity. Operations
  // are named s1, s2, ... in order.
  static Signature from_spec(const std::string& spec);
  std::string to_spec() const;
};

// A term of the free algebra: a rooted tree whose leaves are variables and
// whose internal nodes are signature operations (children count = arity).
class Term {
public:
  static Term leaf(int var);
  static Term node(int op, std::vector<Term> children);

  bool is_leaf() const { return var_ >= 0; }
  int var() const { return var_; }
  int op() const { return op_; }
  const std::vector<Term>& children() const { return children_; }
  unsigned leaf_count() const { return nleaves_; } // = degree of the monomial
  int max_var() const;
  void collect_vars(std::vector<bool>& used) const;

  // canonical total order: by degree, then preorder comparison
  static int compare(const Term& a, const Term& b);
  bool operator<(const Term& o) const { return compare(*this, o) < 0; }
  bool operator==(const Term& o) const { return compare(*this, o) == 0; }

private:
  Term() = default;
  int var_ = -1;
  int op_ = -1;
  unsigned nleaves_ = 0;
  std::vector<Term> children_;
};

// Operadic composition: replace the i-th leaf (1-based, left to right) of
// `outer` by `inner`, then renumber all leaves 0,1,2,... left to right.
Term graft(const Term& outer, unsigned i, const Term& inner);

// leaf replacement without renumbering (plain substitution of one slot)
Term replace_leaf(const Term& outer, unsigned i, const Term& inner);

// Element of the free algebra over the rationals: a finite linear
// combination of terms with nonzero exact coefficients, kept in canonical
// term order.
class FreeElement {
public:
  FreeElement() = default;

  static FreeElement zero() { return FreeElement(); }
  static FreeElement variable(int v, const Rational& c = 1);
  static FreeElement from_term(Term t, const Rational& c = 1);

  bool is_zero() const { return coeffs_.empty(); }
  size_t support_size() const { return coeffs_.size(); }
  // max leaf count over the support; nullopt for the zero element
  std::optional<unsigned> degree() const;
  int max_var() const;
  std::vector<int> variables() const;

  void add_term(const Term& t, const Rational& c);
  FreeElement& operator+=(const FreeElement& o);
  FreeElement& operator-=(const FreeElement& o);
  FreeElement operator+(const FreeElement& o) const;
  FreeElement operator-(const FreeElement& o) const;
  FreeElement operator-() const;
  FreeElement scaled(const Rational& c) const;
  bool operator==(const FreeElement& o) const { return coeffs_ == o.coeffs_; }

  const std::map<Term, Rational>& terms() const { return coeffs_; }

  // drop all monomials of degree > cap
  FreeElement truncated(unsigned cap) const;

  std::string to_string(const Signature& sig) const;
  static FreeElement parse(const Signature& sig, const std::string& text);

private:
  std::map<Term, Rational> coeffs_;
};

std::string term_to_string(const Term& t, const Signature& sig);
Term parse_term(const Signature& sig, const std::string& text);

// Variable substitution x_i -> images[i], every monomial of degree > cap
// discarded. Since all arities are >= 1, substitution never lowers degree,
// so truncation at `cap` is exact on the part of degree <= cap.
struct Endomorphism {
  std::vector<FreeElement> images;
  unsigned cap = 8;

  static Endomorphism identity(unsigned nvars, unsigned cap);
};

FreeElement substitute(const Signature& sig, const Endomorphism& phi, const FreeElement& e);
// phi after psi: x_i -> substitute(phi, psi(x_i))
Endomorphism compose(const Signature& sig, const Endomorphism& phi, const Endomorphism& psi);

// All one-variable terms of exact degree d (trees over `sig` with every leaf
// the variable `var`), in canonical order. Degree counts leaves, so arity-1
// operations would make the set infinite; `max_unary_nodes` bounds how many
// arity-1 nodes a tree may carry (irrelevant for signatures without them).
std::vector<Term> terms_of_degree(const Signature& sig, unsigned d, int var = 0,
                                  unsigned max_unary_nodes = 0);

} // namespace tamealg
