#pragma once

// Formula and constraint ASTs. Nodes are hash-consed into a process-wide
// store and never freed, so handles are plain pointers and structural
// equality is pointer equality.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cctl/util.hpp"

namespace cctl {

enum class Cmp { Lt, Le, Eq, Ge, Gt };

inline const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Eq: return "=";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
  }
  return "?";
}

inline bool compare(std::int64_t s, Cmp c, std::int64_t k) {
  switch (c) {
    case Cmp::Lt: return s < k;
    case Cmp::Le: return s <= k;
    case Cmp::Eq: return s == k;
    case Cmp::Ge: return s >= k;
    case Cmp::Gt: return s > k;
  }
  return false;
}

// Comparator obtained by negating both sides: -s cmp -k.
inline Cmp mirror(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Eq: return Cmp::Eq;
    case Cmp::Ge: return Cmp::Le;
    case Cmp::Gt: return Cmp::Lt;
  }
  return c;
}

enum class FKind { True, False, Atom, Not, And, Or, EU, AU, Bind, VarCmp, Now };
enum class CKind { True, False, Atom, Not, And, Or };

struct FormulaNode;
struct ConstraintNode;
class Constraint;

class Formula {
 public:
  Formula() = default;
  explicit Formula(const FormulaNode* p) : p_(p) {}

  FKind kind() const;
  std::uint32_t id() const;
  const std::string& name() const;  // Atom name, Bind variable
  Formula child() const;            // Not, Now
  Formula lhs() const;              // And, Or, EU, AU
  Formula rhs() const;
  Constraint constraint() const;    // EU, AU (may be null)
  Formula counted() const;          // Bind
  Formula body() const;             // Bind
  const std::vector<struct VarTerm>& vterms() const;  // VarCmp
  Cmp cmp() const;
  std::int64_t bound() const;

  bool is(FKind k) const { return kind() == k; }
  bool is_until() const { return is(FKind::EU) || is(FKind::AU); }
  bool null() const { return p_ == nullptr; }
  const FormulaNode* node() const { return p_; }

  bool operator==(const Formula& o) const { return p_ == o.p_; }
  bool operator!=(const Formula& o) const { return p_ != o.p_; }
  bool operator<(const Formula& o) const;

 private:
  const FormulaNode* p_ = nullptr;
};

struct Term {
  std::int64_t coeff;
  Formula counted;
  bool operator==(const Term& o) const { return coeff == o.coeff && counted == o.counted; }
};

struct VarTerm {
  std::int64_t coeff;
  std::string var;
  bool operator==(const VarTerm& o) const { return coeff == o.coeff && var == o.var; }
};

class Constraint {
 public:
  Constraint() = default;
  explicit Constraint(const ConstraintNode* p) : p_(p) {}

  CKind kind() const;
  std::uint32_t id() const;
  const std::vector<Term>& terms() const;  // Atom
  Cmp cmp() const;
  std::int64_t bound() const;
  Constraint child() const;  // Not
  Constraint lhs() const;    // And, Or
  Constraint rhs() const;

  bool is(CKind k) const { return kind() == k; }
  bool null() const { return p_ == nullptr; }
  explicit operator bool() const { return p_ != nullptr; }
  const ConstraintNode* node() const { return p_; }
  bool operator==(const Constraint& o) const { return p_ == o.p_; }
  bool operator!=(const Constraint& o) const { return p_ != o.p_; }

 private:
  const ConstraintNode* p_ = nullptr;
};

struct FormulaNode {
  FKind kind;
  std::string name;
  const FormulaNode* a = nullptr;
  const FormulaNode* b = nullptr;
  const ConstraintNode* c = nullptr;
  std::vector<VarTerm> vterms;
  Cmp cmp = Cmp::Eq;
  std::int64_t bound = 0;
  std::uint32_t id = 0;
  std::size_t hash = 0;
};

struct ConstraintNode {
  CKind kind;
  std::vector<Term> terms;
  Cmp cmp = Cmp::Eq;
  std::int64_t bound = 0;
  const ConstraintNode* a = nullptr;
  const ConstraintNode* b = nullptr;
  std::uint32_t id = 0;
  std::size_t hash = 0;
};

namespace detail {

inline std::size_t node_hash(const FormulaNode& n) {
  std::size_t h = static_cast<std::size_t>(n.kind);
  hash_combine(h, std::hash<std::string>{}(n.name));
  hash_combine(h, std::hash<const void*>{}(n.a));
  hash_combine(h, std::hash<const void*>{}(n.b));
  hash_combine(h, std::hash<const void*>{}(n.c));
  for (const auto& t : n.vterms) {
    hash_combine(h, std::hash<std::int64_t>{}(t.coeff));
    hash_combine(h, std::hash<std::string>{}(t.var));
  }
  hash_combine(h, static_cast<std::size_t>(n.cmp));
  hash_combine(h, std::hash<std::int64_t>{}(n.bound));
  return h;
}

inline bool node_eq(const FormulaNode& x, const FormulaNode& y) {
  return x.kind == y.kind && x.name == y.name && x.a == y.a && x.b == y.b && x.c == y.c &&
         x.vterms == y.vterms && x.cmp == y.cmp && x.bound == y.bound;
}

inline std::size_t node_hash(const ConstraintNode& n) {
  std::size_t h = 0x51ed + static_cast<std::size_t>(n.kind);
  for (const auto& t : n.terms) {
    hash_combine(h, std::hash<std::int64_t>{}(t.coeff));
    hash_combine(h, std::hash<const void*>{}(t.counted.node()));
  }
  hash_combine(h, static_cast<std::size_t>(n.cmp));
  hash_combine(h, std::hash<std::int64_t>{}(n.bound));
  hash_combine(h, std::hash<const void*>{}(n.a));
  hash_combine(h, std::hash<const void*>{}(n.b));
  return h;
}

inline bool node_eq(const ConstraintNode& x, const ConstraintNode& y) {
  return x.kind == y.kind && x.terms == y.terms && x.cmp == y.cmp && x.bound == y.bound &&
         x.a == y.a && x.b == y.b;
}

class Store {
 public:
  const FormulaNode* intern(FormulaNode&& n) { return intern_in(std::move(n), fnodes_, findex_); }
  const ConstraintNode* intern(ConstraintNode&& n) { return intern_in(std::move(n), cnodes_, cindex_); }

 private:
  template <class Node>
  const Node* intern_in(Node&& n, std::deque<Node>& nodes,
                        std::unordered_multimap<std::size_t, const Node*>& index) {
    n.hash = node_hash(n);
    std::lock_guard<std::mutex> lock(mu_);
    auto range = index.equal_range(n.hash);
    for (auto it = range.first; it != range.second; ++it)
      if (node_eq(*it->second, n)) return it->second;
    n.id = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(std::move(n));
    const Node* p = &nodes.back();
    index.emplace(p->hash, p);
    return p;
  }

  std::mutex mu_;
  std::deque<FormulaNode> fnodes_;
  std::deque<ConstraintNode> cnodes_;
  std::unordered_multimap<std::size_t, const FormulaNode*> findex_;
  std::unordered_multimap<std::size_t, const ConstraintNode*> cindex_;
};

inline Store& store() {
  static Store s;
  return s;
}

}  // namespace detail

inline FKind Formula::kind() const { return p_->kind; }
inline std::uint32_t Formula::id() const { return p_->id; }
inline const std::string& Formula::name() const { return p_->name; }
inline Formula Formula::child() const { return Formula(p_->a); }
inline Formula Formula::lhs() const { return Formula(p_->a); }
inline Formula Formula::rhs() const { return Formula(p_->b); }
inline Constraint Formula::constraint() const { return Constraint(p_->c); }
inline Formula Formula::counted() const { return Formula(p_->a); }
inline Formula Formula::body() const { return Formula(p_->b); }
inline const std::vector<VarTerm>& Formula::vterms() const { return p_->vterms; }
inline Cmp Formula::cmp() const { return p_->cmp; }
inline std::int64_t Formula::bound() const { return p_->bound; }
inline bool Formula::operator<(const Formula& o) const { return id() < o.id(); }

inline CKind Constraint::kind() const { return p_->kind; }
inline std::uint32_t Constraint::id() const { return p_->id; }
inline const std::vector<Term>& Constraint::terms() const { return p_->terms; }
inline Cmp Constraint::cmp() const { return p_->cmp; }
inline std::int64_t Constraint::bound() const { return p_->bound; }
inline Constraint Constraint::child() const { return Constraint(p_->a); }
inline Constraint Constraint::lhs() const { return Constraint(p_->a); }
inline Constraint Constraint::rhs() const { return Constraint(p_->b); }

}  // namespace cctl

template <>
struct std::hash<cctl::Formula> {
  std::size_t operator()(const cctl::Formula& f) const { return std::hash<const void*>{}(f.node()); }
};
template <>
struct std::hash<cctl::Constraint> {
  std::size_t operator()(const cctl::Constraint& c) const { return std::hash<const void*>{}(c.node()); }
};

namespace cctl {

// ---------------------------------------------------------------------------
// Raw constructors: build exactly the requested node.

namespace detail {
inline Formula make(FKind k, const FormulaNode* a = nullptr, const FormulaNode* b = nullptr,
                    const ConstraintNode* c = nullptr, std::string name = {}) {
  FormulaNode n;
  n.kind = k;
  n.a = a;
  n.b = b;
  n.c = c;
  n.name = std::move(name);
  return Formula(store().intern(std::move(n)));
}
inline Constraint cmake(CKind k, const ConstraintNode* a = nullptr, const ConstraintNode* b = nullptr) {
  ConstraintNode n;
  n.kind = k;
  n.a = a;
  n.b = b;
  return Constraint(store().intern(std::move(n)));
}
}  // namespace detail

inline Formula mk_true() { return detail::make(FKind::True); }
inline Formula mk_false() { return detail::make(FKind::False); }
inline Formula mk_atom(const std::string& p) { return detail::make(FKind::Atom, nullptr, nullptr, nullptr, p); }
inline Formula mk_not(Formula f) { return detail::make(FKind::Not, f.node()); }
inline Formula mk_and(Formula a, Formula b) { return detail::make(FKind::And, a.node(), b.node()); }
inline Formula mk_or(Formula a, Formula b) { return detail::make(FKind::Or, a.node(), b.node()); }
inline Formula mk_implies(Formula a, Formula b) { return mk_or(mk_not(a), b); }
inline Formula mk_eu(Formula a, Formula b, Constraint c = {}) {
  return detail::make(FKind::EU, a.node(), b.node(), c.node());
}
inline Formula mk_au(Formula a, Formula b, Constraint c = {}) {
  return detail::make(FKind::AU, a.node(), b.node(), c.node());
}
inline Formula mk_until(bool universal, Formula a, Formula b, Constraint c = {}) {
  return universal ? mk_au(a, b, c) : mk_eu(a, b, c);
}
inline Formula mk_bind(const std::string& z, Formula counted, Formula body) {
  return detail::make(FKind::Bind, counted.node(), body.node(), nullptr, z);
}
inline Formula mk_varcmp(std::vector<VarTerm> terms, Cmp cmp, std::int64_t k) {
  FormulaNode n;
  n.kind = FKind::VarCmp;
  n.vterms = std::move(terms);
  n.cmp = cmp;
  n.bound = k;
  return Formula(detail::store().intern(std::move(n)));
}
inline Formula mk_now(Formula f) { return detail::make(FKind::Now, f.node()); }

inline Constraint c_true() { return detail::cmake(CKind::True); }
inline Constraint c_false() { return detail::cmake(CKind::False); }
inline Constraint c_atom(std::vector<Term> terms, Cmp cmp, std::int64_t k) {
  ConstraintNode n;
  n.kind = CKind::Atom;
  n.terms = std::move(terms);
  n.cmp = cmp;
  n.bound = k;
  return Constraint(detail::store().intern(std::move(n)));
}
inline Constraint c_not(Constraint c) { return detail::cmake(CKind::Not, c.node()); }
inline Constraint c_and(Constraint a, Constraint b) { return detail::cmake(CKind::And, a.node(), b.node()); }
inline Constraint c_or(Constraint a, Constraint b) { return detail::cmake(CKind::Or, a.node(), b.node()); }
inline Constraint c_implies(Constraint a, Constraint b) { return c_or(c_not(a), b); }

// #TT = 1, the constraint that turns an until into a next-step operator.
inline Constraint next_constraint() { return c_atom({Term{1, mk_true()}}, Cmp::Eq, 1); }

inline bool is_next(Formula f) {
  return f.is_until() && f.lhs().is(FKind::True) && f.constraint() == next_constraint();
}

inline Formula mk_ex(Formula f) { return mk_eu(mk_true(), f, next_constraint()); }
inline Formula mk_ax(Formula f) { return mk_au(mk_true(), f, next_constraint()); }
inline Formula mk_ef(Formula f, Constraint c = {}) { return mk_eu(mk_true(), f, c); }
inline Formula mk_af(Formula f, Constraint c = {}) { return mk_au(mk_true(), f, c); }
inline Formula mk_ag(Formula f, Constraint c = {}) { return mk_not(mk_ef(mk_not(f), c)); }
inline Formula mk_eg(Formula f, Constraint c = {}) { return mk_not(mk_af(mk_not(f), c)); }

// ---------------------------------------------------------------------------
// Simplifying constructors, used by the translations.

inline Formula s_not(Formula f) {
  if (f.is(FKind::True)) return mk_false();
  if (f.is(FKind::False)) return mk_true();
  if (f.is(FKind::Not)) return f.child();
  return mk_not(f);
}
inline Formula s_and(Formula a, Formula b) {
  if (a.is(FKind::False) || b.is(FKind::False)) return mk_false();
  if (a.is(FKind::True)) return b;
  if (b.is(FKind::True)) return a;
  if (a == b) return a;
  return mk_and(a, b);
}
inline Formula s_or(Formula a, Formula b) {
  if (a.is(FKind::True) || b.is(FKind::True)) return mk_true();
  if (a.is(FKind::False)) return b;
  if (b.is(FKind::False)) return a;
  if (a == b) return a;
  return mk_or(a, b);
}
inline Formula s_until(bool universal, Formula a, Formula b) {
  if (b.is(FKind::True) || b.is(FKind::False)) return b;
  if (a.is(FKind::False)) return b;
  return mk_until(universal, a, b);
}
inline Formula s_next(bool universal, Formula f) {
  if (f.is(FKind::True) || f.is(FKind::False)) return f;
  return universal ? mk_ax(f) : mk_ex(f);
}

// ---------------------------------------------------------------------------
// Traversal.

// Visits every distinct node reachable from f, children before parents,
// including counted formulas inside constraints and binders.
inline void for_each_subformula(Formula root, const std::function<void(Formula)>& visit) {
  std::unordered_set<Formula> seen;
  std::vector<std::pair<Formula, bool>> stack{{root, false}};
  auto constraint_formulas = [](Constraint c, std::vector<Formula>& out) {
    std::vector<Constraint> cs{c};
    while (!cs.empty()) {
      Constraint x = cs.back();
      cs.pop_back();
      if (x.null()) continue;
      switch (x.kind()) {
        case CKind::Atom:
          for (const auto& t : x.terms()) out.push_back(t.counted);
          break;
        case CKind::Not: cs.push_back(x.child()); break;
        case CKind::And:
        case CKind::Or:
          cs.push_back(x.rhs());
          cs.push_back(x.lhs());
          break;
        default: break;
      }
    }
  };
  while (!stack.empty()) {
    auto [f, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      visit(f);
      continue;
    }
    if (!seen.insert(f).second) continue;
    stack.push_back({f, true});
    std::vector<Formula> kids;
    switch (f.kind()) {
      case FKind::Not:
      case FKind::Now: kids.push_back(f.child()); break;
      case FKind::And:
      case FKind::Or:
        kids.push_back(f.lhs());
        kids.push_back(f.rhs());
        break;
      case FKind::EU:
      case FKind::AU:
        constraint_formulas(f.constraint(), kids);
        kids.push_back(f.lhs());
        kids.push_back(f.rhs());
        break;
      case FKind::Bind:
        kids.push_back(f.counted());
        kids.push_back(f.body());
        break;
      default: break;
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it)
      if (!seen.count(*it)) stack.push_back({*it, false});
  }
}

inline std::vector<Formula> postorder(Formula f) {
  std::vector<Formula> out;
  for_each_subformula(f, [&](Formula g) { out.push_back(g); });
  return out;
}

// Number of distinct subformulas.
inline std::size_t dag_size(Formula f) {
  std::size_t n = 0;
  for_each_subformula(f, [&](Formula) { ++n; });
  return n;
}

// Size of the formula written as a tree (shared nodes counted repeatedly),
// saturating at max.
inline std::uint64_t tree_size(Formula f, std::uint64_t max = 1ULL << 62);

namespace detail {
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t max) {
  return (a > max - b) ? max : a + b;
}
inline std::uint64_t ctree_size(Constraint c, std::unordered_map<Formula, std::uint64_t>& memo,
                                std::uint64_t max);
inline std::uint64_t ftree_size(Formula f, std::unordered_map<Formula, std::uint64_t>& memo,
                                std::uint64_t max) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  std::uint64_t r = 1;
  switch (f.kind()) {
    case FKind::Not:
    case FKind::Now: r = sat_add(r, ftree_size(f.child(), memo, max), max); break;
    case FKind::And:
    case FKind::Or:
      r = sat_add(r, ftree_size(f.lhs(), memo, max), max);
      r = sat_add(r, ftree_size(f.rhs(), memo, max), max);
      break;
    case FKind::EU:
    case FKind::AU:
      r = sat_add(r, ftree_size(f.lhs(), memo, max), max);
      r = sat_add(r, ftree_size(f.rhs(), memo, max), max);
      if (!f.constraint().null()) r = sat_add(r, ctree_size(f.constraint(), memo, max), max);
      break;
    case FKind::Bind:
      r = sat_add(r, ftree_size(f.counted(), memo, max), max);
      r = sat_add(r, ftree_size(f.body(), memo, max), max);
      break;
    default: break;
  }
  memo[f] = r;
  return r;
}
inline std::uint64_t ctree_size(Constraint c, std::unordered_map<Formula, std::uint64_t>& memo,
                                std::uint64_t max) {
  switch (c.kind()) {
    case CKind::Atom: {
      std::uint64_t r = 1;
      for (const auto& t : c.terms()) r = sat_add(r, ftree_size(t.counted, memo, max), max);
      return r;
    }
    case CKind::Not: return sat_add(1, ctree_size(c.child(), memo, max), max);
    case CKind::And:
    case CKind::Or:
      return sat_add(1, sat_add(ctree_size(c.lhs(), memo, max), ctree_size(c.rhs(), memo, max), max), max);
    default: return 1;
  }
}
}  // namespace detail

inline std::uint64_t tree_size(Formula f, std::uint64_t max) {
  std::unordered_map<Formula, std::uint64_t> memo;
  return detail::ftree_size(f, memo, max);
}

// Atomic constraints in left-to-right order.
inline void constraint_atoms(Constraint c, std::vector<Constraint>& out) {
  if (c.null()) return;
  switch (c.kind()) {
    case CKind::Atom: out.push_back(c); break;
    case CKind::Not: constraint_atoms(c.child(), out); break;
    case CKind::And:
    case CKind::Or:
      constraint_atoms(c.lhs(), out);
      constraint_atoms(c.rhs(), out);
      break;
    default: break;
  }
}

inline std::vector<Constraint> constraint_atoms(Constraint c) {
  std::vector<Constraint> out;
  constraint_atoms(c, out);
  return out;
}

// Same constraint with every counted formula replaced by fn(counted).
template <class Fn>
Constraint map_counted(Constraint c, Fn&& fn) {
  if (c.null()) return c;
  switch (c.kind()) {
    case CKind::Atom: {
      std::vector<Term> ts;
      for (const auto& t : c.terms()) ts.push_back({t.coeff, fn(t.counted)});
      return c_atom(ts, c.cmp(), c.bound());
    }
    case CKind::Not: return c_not(map_counted(c.child(), fn));
    case CKind::And: return c_and(map_counted(c.lhs(), fn), map_counted(c.rhs(), fn));
    case CKind::Or: return c_or(map_counted(c.lhs(), fn), map_counted(c.rhs(), fn));
    default: return c;
  }
}

inline std::int64_t max_abs_constant(Formula f) {
  std::int64_t k = 0;
  for_each_subformula(f, [&](Formula g) {
    if (g.is(FKind::VarCmp)) k = std::max(k, g.bound() < 0 ? -g.bound() : g.bound());
    if (g.is_until() && !g.constraint().null())
      for (auto a : constraint_atoms(g.constraint())) k = std::max(k, a.bound() < 0 ? -a.bound() : a.bound());
  });
  return k;
}

// Atomic propositions occurring in f.
inline std::set<std::string> atoms_of(Formula f) {
  std::set<std::string> r;
  for_each_subformula(f, [&](Formula g) {
    if (g.is(FKind::Atom)) r.insert(g.name());
  });
  return r;
}

// Free CCTLv variables.
inline std::set<std::string> free_vars(Formula f) {
  std::unordered_map<Formula, std::set<std::string>> memo;
  for_each_subformula(f, [&](Formula g) {
    std::set<std::string> s;
    auto add = [&](Formula h) { s.insert(memo[h].begin(), memo[h].end()); };
    switch (g.kind()) {
      case FKind::VarCmp:
        for (const auto& t : g.vterms()) s.insert(t.var);
        break;
      case FKind::Not:
      case FKind::Now: add(g.child()); break;
      case FKind::And:
      case FKind::Or:
        add(g.lhs());
        add(g.rhs());
        break;
      case FKind::EU:
      case FKind::AU: {
        add(g.lhs());
        add(g.rhs());
        for (auto a : constraint_atoms(g.constraint()))
          for (const auto& t : a.terms()) add(t.counted);
        break;
      }
      case FKind::Bind:
        add(g.counted());
        add(g.body());
        s.erase(g.name());
        break;
      default: break;
    }
    memo[g] = std::move(s);
  });
  return memo[f];
}

// ---------------------------------------------------------------------------
// Constraint operations.

// Evaluates c given the value of each atomic constraint's left-hand sum.
template <class SumFn>
bool eval_constraint(Constraint c, SumFn&& sum) {
  switch (c.kind()) {
    case CKind::True: return true;
    case CKind::False: return false;
    case CKind::Atom: return compare(sum(c), c.cmp(), c.bound());
    case CKind::Not: return !eval_constraint(c.child(), sum);
    case CKind::And: return eval_constraint(c.lhs(), sum) && eval_constraint(c.rhs(), sum);
    case CKind::Or: return eval_constraint(c.lhs(), sum) || eval_constraint(c.rhs(), sum);
  }
  return false;
}

// Truth of c on the empty prefix.
inline bool holds_on_empty(Constraint c) {
  return eval_constraint(c, [](Constraint) { return std::int64_t{0}; });
}

// Subtracts the coefficient of term j of atom i (0-based, left to right)
// from that atom's bound. No simplification is applied.
inline Constraint decr(Constraint c, std::size_t i, std::size_t j) {
  std::size_t pos = 0;
  std::function<Constraint(Constraint)> go = [&](Constraint x) -> Constraint {
    switch (x.kind()) {
      case CKind::Atom: {
        if (pos++ != i) return x;
        if (j >= x.terms().size()) throw std::out_of_range("decr: term index");
        return c_atom(x.terms(), x.cmp(), checked_add(x.bound(), -x.terms()[j].coeff));
      }
      case CKind::Not: return c_not(go(x.child()));
      case CKind::And: {
        Constraint l = go(x.lhs());
        return c_and(l, go(x.rhs()));
      }
      case CKind::Or: {
        Constraint l = go(x.lhs());
        return c_or(l, go(x.rhs()));
      }
      default: return x;
    }
  };
  Constraint r = go(c);
  if (i >= pos) throw std::out_of_range("decr: atom index");
  return r;
}

namespace detail {

inline Constraint simp_atom(std::vector<Term> terms, Cmp cmp, std::int64_t k) {
  // Merge repeated counted formulas, drop zero coefficients and terms whose
  // counted formula is FF (its count is always zero).
  std::map<std::uint32_t, Term> merged;
  for (const auto& t : terms) {
    if (t.counted.is(FKind::False)) continue;
    auto it = merged.find(t.counted.id());
    if (it == merged.end())
      merged.emplace(t.counted.id(), t);
    else
      it->second.coeff = checked_add(it->second.coeff, t.coeff);
  }
  std::vector<Term> ts;
  for (auto& [_, t] : merged)
    if (t.coeff != 0) ts.push_back(t);
  // Integer comparators: s < k is s <= k-1, s > k is s >= k+1.
  if (cmp == Cmp::Lt) cmp = Cmp::Le, k = checked_add(k, -1);
  if (cmp == Cmp::Gt) cmp = Cmp::Ge, k = checked_add(k, 1);
  if (ts.empty()) return compare(0, cmp, k) ? c_true() : c_false();
  bool all_pos = std::all_of(ts.begin(), ts.end(), [](const Term& t) { return t.coeff > 0; });
  bool all_neg = std::all_of(ts.begin(), ts.end(), [](const Term& t) { return t.coeff < 0; });
  if (all_neg) {
    // Normalise to positive coefficients.
    for (auto& t : ts) t.coeff = -t.coeff;
    k = checked_mul(k, -1);
    cmp = mirror(cmp);
    all_pos = true;
  }
  if (all_pos) {
    // The sum ranges over [0, +inf).
    if (cmp == Cmp::Ge && k <= 0) return c_true();
    if (cmp == Cmp::Le && k < 0) return c_false();
    if (cmp == Cmp::Eq && k < 0) return c_false();
    if (cmp == Cmp::Le && k == 0) cmp = Cmp::Eq;
  }
  return c_atom(std::move(ts), cmp, k);
}

inline void flatten(Constraint c, CKind k, std::vector<Constraint>& out) {
  if (c.is(k)) {
    flatten(c.lhs(), k, out);
    flatten(c.rhs(), k, out);
  } else {
    out.push_back(c);
  }
}

}  // namespace detail

// Canonical simplification: trivially true/false atoms collapse, Boolean
// structure is flattened, sorted and deduplicated. Equivalent to the input.
inline Constraint simp(Constraint c) {
  switch (c.kind()) {
    case CKind::True:
    case CKind::False: return c;
    case CKind::Atom: return detail::simp_atom(c.terms(), c.cmp(), c.bound());
    case CKind::Not: {
      Constraint x = simp(c.child());
      if (x.is(CKind::True)) return c_false();
      if (x.is(CKind::False)) return c_true();
      if (x.is(CKind::Not)) return x.child();
      if (x.is(CKind::Atom) && x.cmp() != Cmp::Eq) {
        Cmp n = x.cmp() == Cmp::Le ? Cmp::Gt : x.cmp() == Cmp::Ge ? Cmp::Lt : x.cmp() == Cmp::Lt ? Cmp::Ge : Cmp::Le;
        return detail::simp_atom(x.terms(), n, x.bound());
      }
      return c_not(x);
    }
    case CKind::And:
    case CKind::Or: {
      CKind k = c.kind();
      std::vector<Constraint> parts, flat;
      detail::flatten(c, k, parts);
      for (auto p : parts) detail::flatten(simp(p), k, flat);
      std::vector<Constraint> kept;
      for (auto p : flat) {
        if (p.is(k == CKind::And ? CKind::True : CKind::False)) continue;
        if (p.is(k == CKind::And ? CKind::False : CKind::True)) return p;
        kept.push_back(p);
      }
      std::sort(kept.begin(), kept.end(), [](Constraint a, Constraint b) { return a.id() < b.id(); });
      kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
      if (kept.empty()) return k == CKind::And ? c_true() : c_false();
      Constraint r = kept.back();
      for (std::size_t i = kept.size() - 1; i-- > 0;)
        r = k == CKind::And ? c_and(kept[i], r) : c_or(kept[i], r);
      return r;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Printing. The output parses back to the identical node.

std::string to_string(Formula f);
std::string to_string(Constraint c);

namespace detail {

inline void print_int_coeff(std::ostringstream& os, std::int64_t a, bool first) {
  if (first) {
    if (a == 1) return;
    if (a == -1) {
      os << "-";
      return;
    }
    os << a << "*";
    return;
  }
  if (a == 1)
    os << " + ";
  else if (a == -1)
    os << " - ";
  else if (a < 0 && a != std::numeric_limits<std::int64_t>::min())
    os << " - " << -a << "*";
  else
    os << " + " << a << "*";
}

inline std::string print_f(Formula f, int ctx);

inline std::string counted_term(Formula g) {
  if (g.is(FKind::Atom)) return "#" + g.name();
  if (g.is(FKind::True)) return "#TT";
  if (g.is(FKind::False)) return "#FF";
  return "#(" + print_f(g, 0) + ")";
}

inline std::string print_c(Constraint c, int ctx) {
  std::ostringstream os;
  switch (c.kind()) {
    case CKind::True: return "#TT >= 0";
    case CKind::False: return "#TT < 0";
    case CKind::Atom: {
      bool first = true;
      for (const auto& t : c.terms()) {
        print_int_coeff(os, t.coeff, first);
        first = false;
        os << counted_term(t.counted);
      }
      if (c.terms().empty()) os << "0*#TT";
      os << " " << to_string(c.cmp()) << " " << c.bound();
      return os.str();
    }
    case CKind::Not: return "!" + print_c(c.child(), 3);
    case CKind::And: {
      std::string s = print_c(c.lhs(), 2) + " & " + print_c(c.rhs(), 3);
      return ctx > 2 ? "(" + s + ")" : s;
    }
    case CKind::Or: {
      std::string s = print_c(c.lhs(), 1) + " | " + print_c(c.rhs(), 2);
      return ctx > 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

inline std::string cbraces(Constraint c) { return c.null() ? "" : "{" + print_c(c, 0) + "}"; }

inline std::string print_f(Formula f, int ctx) {
  auto paren = [&](int level, std::string s) { return ctx > level ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case FKind::True: return "TT";
    case FKind::False: return "FF";
    case FKind::Atom: return f.name();
    case FKind::Not: {
      Formula g = f.child();
      if (g.is_until() && g.lhs().is(FKind::True) && g.rhs().is(FKind::Not) && !is_next(g))
        return (g.is(FKind::EU) ? "AG" : "EG") + cbraces(g.constraint()) + " " + print_f(g.rhs().child(), 3);
      return "!" + print_f(g, 3);
    }
    case FKind::And: return paren(2, print_f(f.lhs(), 2) + " & " + print_f(f.rhs(), 3));
    case FKind::Or: return paren(1, print_f(f.lhs(), 1) + " | " + print_f(f.rhs(), 2));
    case FKind::EU:
    case FKind::AU: {
      const char* q = f.is(FKind::EU) ? "E" : "A";
      if (is_next(f)) return std::string(q) + "X " + print_f(f.rhs(), 3);
      if (f.lhs().is(FKind::True)) return std::string(q) + "F" + cbraces(f.constraint()) + " " + print_f(f.rhs(), 3);
      return std::string(q) + "(" + print_f(f.lhs(), 0) + " U" + cbraces(f.constraint()) + " " +
             print_f(f.rhs(), 0) + ")";
    }
    case FKind::Bind: return paren(0, f.name() + "[" + print_f(f.counted(), 0) + "]. " + print_f(f.body(), 0));
    case FKind::VarCmp: {
      std::ostringstream os;
      bool first = true;
      for (const auto& t : f.vterms()) {
        print_int_coeff(os, t.coeff, first);
        first = false;
        os << t.var;
      }
      os << " " << to_string(f.cmp()) << " " << f.bound();
      return os.str();
    }
    case FKind::Now: return "N " + print_f(f.child(), 3);
  }
  return "?";
}

}  // namespace detail

inline std::string to_string(Formula f) { return detail::print_f(f, 0); }
inline std::string to_string(Constraint c) { return detail::print_c(c, 0); }

inline std::ostream& operator<<(std::ostream& os, Formula f) { return os << to_string(f); }
inline std::ostream& operator<<(std::ostream& os, Constraint c) { return os << to_string(c); }

}  // namespace cctl
