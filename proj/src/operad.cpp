#include "tamealg/operad.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace tamealg {

Signature::Signature(std::vector<Op> o) : ops(std::move(o)) {
  for (auto& op : ops) {
    if (op.arity < 1) throw std::invalid_argument("operation arity must be >= 1");
    if (op.name.empty()) throw std::invalid_argument("operation name must be nonempty");
  }
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (ops[i].name == ops[j].name)
        throw std::invalid_argument("duplicate operation name " + ops[i].name);
}

unsigned Signature::max_arity() const {
  unsigned m = 0;
  for (auto& op : ops) m = std::max(m, op.arity);
  return m;
}

int Signature::index_of(const std::string& name) const {
  for (size_t i = 0; i < ops.size(); ++i)
    if (ops[i].name == name) return static_cast<int>(i);
  return -1;
}

Signature Signature::from_spec(const std::string& spec) {
  std::vector<Op> ops;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty token in signature spec");
    size_t i = 0;
    while (i < tok.size() && !std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
    if (i == 0 || i == tok.size())
      throw std::invalid_argument("bad signature token '" + tok + "' (want e.g. b2, t3, a5)");
    unsigned arity = std::stoul(tok.substr(i));
    ops.push_back({"s" + std::to_string(ops.size() + 1), arity});
  }
  if (ops.empty()) throw std::invalid_argument("empty signature spec");
  return Signature(std::move(ops));
}

std::string Signature::to_spec() const {
  std::string s;
  for (size_t i = 0; i < ops.size(); ++i) {
    if (i) s += ',';
    s += "a" + std::to_string(ops[i].arity);
  }
  return s;
}

Term Term::leaf(int var) {
  if (var < 0) throw std::invalid_argument("variable index must be >= 0");
  Term t;
  t.var_ = var;
  t.nleaves_ = 1;
  return t;
}

Term Term::node(int op, std::vector<Term> children) {
  if (children.empty()) throw std::invalid_argument("node needs children (no constants)");
  Term t;
  t.op_ = op;
  t.children_ = std::move(children);
  for (auto& c : t.children_) t.nleaves_ += c.nleaves_;
  return t;
}

int Term::max_var() const {
  if (is_leaf()) return var_;
  int m = -1;
  for (auto& c : children_) m = std::max(m, c.max_var());
  return m;
}

void Term::collect_vars(std::vector<bool>& used) const {
  if (is_leaf()) {
    if (static_cast<size_t>(var_) >= used.size()) used.resize(var_ + 1, false);
    used[var_] = true;
    return;
  }
  for (auto& c : children_) c.collect_vars(used);
}

int Term::compare(const Term& a, const Term& b) {
  if (a.nleaves_ != b.nleaves_) return a.nleaves_ < b.nleaves_ ? -1 : 1;
  if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? -1 : 1;
  if (a.is_leaf()) return a.var_ == b.var_ ? 0 : (a.var_ < b.var_ ? -1 : 1);
  if (a.op_ != b.op_) return a.op_ < b.op_ ? -1 : 1;
  for (size_t i = 0; i < a.children_.size() && i < b.children_.size(); ++i) {
    int r = compare(a.children_[i], b.children_[i]);
    if (r) return r;
  }
  if (a.children_.size() != b.children_.size()) // distinct ops share an index only across signatures
    return a.children_.size() < b.children_.size() ? -1 : 1;
  return 0;
}

namespace {

Term replace_leaf_rec(const Term& t, unsigned& countdown, const Term& inner, bool& done) {
  if (t.is_leaf()) {
    if (!done && --countdown == 0) {
      done = true;
      return inner;
    }
    return t;
  }
  std::vector<Term> ch;
  ch.reserve(t.children().size());
  for (auto& c : t.children()) ch.push_back(done ? c : replace_leaf_rec(c, countdown, inner, done));
  return Term::node(t.op(), std::move(ch));
}

Term renumber_rec(const Term& t, int& next) {
  if (t.is_leaf()) return Term::leaf(next++);
  std::vector<Term> ch;
  ch.reserve(t.children().size());
  for (auto& c : t.children()) ch.push_back(renumber_rec(c, next));
  return Term::node(t.op(), std::move(ch));
}

} // namespace

Term replace_leaf(const Term& outer, unsigned i, const Term& inner) {
  if (i < 1 || i > outer.leaf_count())
    throw std::out_of_range("graft position out of range");
  unsigned countdown = i;
  bool done = false;
  return replace_leaf_rec(outer, countdown, inner, done);
}

Term graft(const Term& outer, unsigned i, const Term& inner) {
  Term t = replace_leaf(outer, i, inner);
  int next = 0;
  return renumber_rec(t, next);
}

FreeElement FreeElement::variable(int v, const Rational& c) {
  return from_term(Term::leaf(v), c);
}

FreeElement FreeElement::from_term(Term t, const Rational& c) {
  FreeElement e;
  e.add_term(t, c);
  return e;
}

std::optional<unsigned> FreeElement::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  // canonical order sorts by degree first, so the last term is maximal
  return coeffs_.rbegin()->first.leaf_count();
}

int FreeElement::max_var() const {
  int m = -1;
  for (auto& [t, c] : coeffs_) m = std::max(m, t.max_var());
  return m;
}

std::vector<int> FreeElement::variables() const {
  std::vector<bool> used;
  for (auto& [t, c] : coeffs_) t.collect_vars(used);
  std::vector<int> out;
  for (size_t i = 0; i < used.size(); ++i)
    if (used[i]) out.push_back(static_cast<int>(i));
  return out;
}

void FreeElement::add_term(const Term& t, const Rational& c) {
  if (c == 0) return;
  auto it = coeffs_.find(t);
  if (it == coeffs_.end()) {
    coeffs_.emplace(t, c);
  } else {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

FreeElement& FreeElement::operator+=(const FreeElement& o) {
  for (auto& [t, c] : o.coeffs_) add_term(t, c);
  return *this;
}

FreeElement& FreeElement::operator-=(const FreeElement& o) {
  for (auto& [t, c] : o.coeffs_) add_term(t, -c);
  return *this;
}

FreeElement FreeElement::operator+(const FreeElement& o) const {
  FreeElement r = *this;
  r += o;
  return r;
}

FreeElement FreeElement::operator-(const FreeElement& o) const {
  FreeElement r = *this;
  r -= o;
  return r;
}

FreeElement FreeElement::operator-() const { return scaled(-1); }

FreeElement FreeElement::scaled(const Rational& c) const {
  FreeElement r;
  if (c == 0) return r;
  for (auto& [t, co] : coeffs_) r.coeffs_.emplace(t, co * c);
  return r;
}

FreeElement FreeElement::truncated(unsigned cap) const {
  FreeElement r;
  for (auto& [t, c] : coeffs_)
    if (t.leaf_count() <= cap) r.coeffs_.emplace(t, c);
  return r;
}

std::string term_to_string(const Term& t, const Signature& sig) {
  if (t.is_leaf()) return "x" + std::to_string(t.var());
  std::string s = sig.ops.at(t.op()).name + "(";
  for (size_t i = 0; i < t.children().size(); ++i) {
    if (i) s += ",";
    s += term_to_string(t.children()[i], sig);
  }
  return s + ")";
}

std::string FreeElement::to_string(const Signature& sig) const {
  if (coeffs_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [t, c] : coeffs_) {
    Rational a = c;
    if (first) {
      if (a < 0) { s += "-"; a = -a; }
    } else {
      s += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    if (a != 1) s += a.get_str() + "*";
    s += term_to_string(t, sig);
    first = false;
  }
  return s;
}

namespace {

// recursive-descent parser for `3/5*s1(x1,x2) + x1 - 2*x2`
struct Parser {
  const Signature& sig;
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + what);
  }

  BigInt parse_uint() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return BigInt(s.substr(start, pos - start));
  }

  Rational parse_rational() {
    BigInt num = parse_uint();
    if (eat('/')) {
      BigInt den = parse_uint();
      if (den == 0) fail("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    return Rational(num);
  }

  std::string parse_name() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected an identifier");
    return s.substr(start, pos - start);
  }

  Term parse_tree() {
    std::string name = parse_name();
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return Term::leaf(std::stoi(name.substr(1)));
    }
    int op = sig.index_of(name);
    if (op < 0) fail("unknown operation '" + name + "'");
    if (!eat('(')) fail("expected '(' after operation name");
    std::vector<Term> children;
    do {
      children.push_back(parse_tree());
    } while (eat(','));
    if (!eat(')')) fail("expected ')'");
    if (children.size() != sig.ops[op].arity)
      fail("operation " + name + " expects " + std::to_string(sig.ops[op].arity) + " arguments");
    return Term::node(op, std::move(children));
  }

  FreeElement parse_element() {
    FreeElement e;
    bool first = true;
    for (;;) {
      skip_ws();
      int sign = 1;
      if (eat('-')) sign = -1;
      else if (eat('+')) {
        if (first) fail("unexpected '+'");
      } else if (!first) {
        break;
      }
      skip_ws();
      if (pos >= s.size()) fail("expected a term");
      Rational coeff = sign;
      if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        coeff = sign * parse_rational();
        if (eat('*')) {
          e.add_term(parse_tree(), coeff);
        } else {
          fail("a bare number is not a term (no constants in the free algebra)");
        }
      } else {
        e.add_term(parse_tree(), coeff);
      }
      first = false;
      skip_ws();
      if (pos >= s.size()) break;
    }
    skip_ws();
    if (pos != s.size()) fail("trailing input");
    return e;
  }
};

} // namespace

Term parse_term(const Signature& sig, const std::string& text) {
  Parser p{sig, text};
  Term t = p.parse_tree();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

FreeElement FreeElement::parse(const Signature& sig, const std::string& text) {
  // the zero element round-trips as "0"
  Parser probe{sig, text};
  probe.skip_ws();
  if (probe.pos < text.size() && text[probe.pos] == '0') {
    size_t p2 = probe.pos + 1;
    while (p2 < text.size() && std::isspace(static_cast<unsigned char>(text[p2]))) ++p2;
    if (p2 == text.size()) return FreeElement::zero();
  }
  Parser p{sig, text};
  return p.parse_element();
}

Endomorphism Endomorphism::identity(unsigned nvars, unsigned cap) {
  Endomorphism e;
  e.cap = cap;
  for (unsigned v = 0; v < nvars; ++v) e.images.push_back(FreeElement::variable(v));
  return e;
}

namespace {

FreeElement substitute_term(const Signature& sig, const Endomorphism& phi, const Term& t) {
  if (t.is_leaf()) {
    if (static_cast<size_t>(t.var()) >= phi.images.size())
      throw std::invalid_argument("substitute: variable x" + std::to_string(t.var()) +
                                  " not covered");
    return phi.images[t.var()];
  }
  std::vector<FreeElement> imgs;
  imgs.reserve(t.children().size());
  for (auto& c : t.children()) {
    imgs.push_back(substitute_term(sig, phi, c));
    if (imgs.back().is_zero()) return FreeElement::zero();
  }
  // multilinear expansion over the children's supports, pruned at the cap
  FreeElement out;
  std::vector<std::map<Term, Rational>::const_iterator> its;
  for (auto& e : imgs) its.push_back(e.terms().begin());
  for (;;) {
    unsigned deg = 0;
    for (auto& it : its) deg += it->first.leaf_count();
    if (deg <= phi.cap) {
      Rational c = 1;
      std::vector<Term> ch;
      ch.reserve(its.size());
      for (auto& it : its) {
        ch.push_back(it->first);
        c *= it->second;
      }
      out.add_term(Term::node(t.op(), std::move(ch)), c);
    }
    size_t i = 0;
    while (i < its.size()) {
      ++its[i];
      if (its[i] != imgs[i].terms().end()) break;
      its[i] = imgs[i].terms().begin();
      ++i;
    }
    if (i == its.size()) break;
  }
  return out;
}

} // namespace

FreeElement substitute(const Signature& sig, const Endomorphism& phi, const FreeElement& e) {
  FreeElement out;
  for (auto& [t, c] : e.terms()) {
    if (t.leaf_count() > phi.cap) continue; // can only grow further
    out += substitute_term(sig, phi, t).scaled(c);
  }
  return out;
}

Endomorphism compose(const Signature& sig, const Endomorphism& phi, const Endomorphism& psi) {
  Endomorphism r;
  r.cap = std::min(phi.cap, psi.cap);
  r.images.reserve(psi.images.size());
  for (auto& img : psi.images) r.images.push_back(substitute(sig, phi, img));
  return r;
}

std::vector<Term> terms_of_degree(const Signature& sig, unsigned d, int var,
                                  unsigned max_unary_nodes) {
  if (d == 0) return {};
  // memo[m][u]: trees with m leaves and exactly u arity-1 nodes; the unary
  // budget keeps the enumeration finite when the signature has maps
  std::vector<std::vector<std::vector<Term>>> memo(
      d + 1, std::vector<std::vector<Term>>(max_unary_nodes + 1));
  memo[1][0].push_back(Term::leaf(var));
  for (unsigned m = 1; m <= d; ++m) {
    for (unsigned u = (m == 1 ? 1 : 0); u <= max_unary_nodes; ++u) {
      std::vector<Term>& out = memo[m][u];
      for (size_t s = 0; s < sig.ops.size(); ++s) {
        unsigned ar = sig.ops[s].arity;
        if (ar == 1) {
          if (u == 0) continue;
          for (auto& t : memo[m][u - 1]) out.push_back(Term::node(static_cast<int>(s), {t}));
          continue;
        }
        if (ar > m) continue;
        std::vector<Term> cur;
        // children with leaf counts summing to m and unary counts to u
        auto rec = [&](auto&& self, unsigned slot, unsigned rem_deg, unsigned rem_u) -> void {
          if (slot == ar) {
            if (rem_deg == 0 && rem_u == 0)
              out.push_back(Term::node(static_cast<int>(s), cur));
            return;
          }
          unsigned slots_after = ar - slot - 1;
          for (unsigned cd = 1; cd + slots_after <= rem_deg; ++cd)
            for (unsigned cu = 0; cu <= rem_u; ++cu)
              for (auto& t : memo[cd][cu]) {
                cur.push_back(t);
                self(self, slot + 1, rem_deg - cd, rem_u - cu);
                cur.pop_back();
              }
        };
        rec(rec, 0, m, u);
      }
    }
  }
  std::vector<Term> out;
  for (unsigned u = 0; u <= max_unary_nodes; ++u)
    out.insert(out.end(), memo[d][u].begin(), memo[d][u].end());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace tamealg
