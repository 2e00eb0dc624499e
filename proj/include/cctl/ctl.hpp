#pragma once

// Bottom-up labelling and the CTL fixpoint kernels shared by all engines.

#include <deque>
#include <unordered_map>

#include "cctl/formula.hpp"
#include "cctl/model.hpp"

namespace cctl {

using LabelingTable = std::unordered_map<Formula, StateSet>;

inline StateSet ctl_ex(const KripkeStructure& s, const StateSet& b) {
  StateSet r(s.size());
  for (int q = 0; q < s.size(); ++q)
    for (int p : s.succ(q))
      if (b[p]) {
        r.set(q);
        break;
      }
  return r;
}

inline StateSet ctl_ax(const KripkeStructure& s, const StateSet& b) {
  StateSet r(s.size());
  for (int q = 0; q < s.size(); ++q) {
    bool all = true;
    for (int p : s.succ(q)) all = all && b[p];
    r.set(q, all);
  }
  return r;
}

inline StateSet ctl_eu(const KripkeStructure& s, const StateSet& a, const StateSet& b) {
  StateSet r = b;
  std::deque<int> work;
  for (int q : b.elements()) work.push_back(q);
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : s.pred(q))
      if (!r[p] && a[p]) r.set(p), work.push_back(p);
  }
  return r;
}

inline StateSet ctl_au(const KripkeStructure& s, const StateSet& a, const StateSet& b) {
  StateSet r = b;
  std::vector<int> missing(s.size());
  std::deque<int> work;
  for (int q = 0; q < s.size(); ++q) {
    missing[q] = static_cast<int>(s.succ(q).size());
    if (b[q]) work.push_back(q);
  }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : s.pred(q)) {
      if (r[p]) continue;
      if (--missing[p] == 0 && a[p]) r.set(p), work.push_back(p);
    }
  }
  return r;
}

inline StateSet ctl_eg(const KripkeStructure& s, const StateSet& a) {
  return ~ctl_au(s, StateSet(s.size(), true), ~a);
}

// Labels every subformula of f bottom-up. `until` is called for each until
// node once its operands and counted formulas are labelled.
template <class UntilFn>
const StateSet& label_formula(const KripkeStructure& s, Formula f, LabelingTable& t, UntilFn&& until) {
  for (Formula g : postorder(f)) {
    if (t.count(g)) continue;
    StateSet r;
    switch (g.kind()) {
      case FKind::True: r = StateSet(s.size(), true); break;
      case FKind::False: r = StateSet(s.size()); break;
      case FKind::Atom: r = s.label_set(g.name()); break;
      case FKind::Not: r = ~t.at(g.child()); break;
      case FKind::And: r = t.at(g.lhs()) & t.at(g.rhs()); break;
      case FKind::Or: r = t.at(g.lhs()) | t.at(g.rhs()); break;
      case FKind::EU:
      case FKind::AU: r = until(g, t); break;
      case FKind::Bind:
      case FKind::VarCmp: throw fragment_error("variables need the CCTLv engine: " + to_string(g));
      case FKind::Now: throw fragment_error("N needs the cumulative engine: " + to_string(g));
    }
    t.emplace(g, std::move(r));
  }
  return t.at(f);
}

// Handles the until forms every engine treats alike: unconstrained, next
// step, and trivially true/false constraints. Returns false otherwise.
inline bool ctl_until(const KripkeStructure& s, Formula g, const LabelingTable& t, StateSet& out) {
  bool universal = g.is(FKind::AU);
  Constraint c = g.constraint();
  const StateSet& a = t.at(g.lhs());
  const StateSet& b = t.at(g.rhs());
  if (is_next(g)) {
    out = universal ? ctl_ax(s, b) : ctl_ex(s, b);
    return true;
  }
  if (c.null() || c.is(CKind::True)) {
    out = universal ? ctl_au(s, a, b) : ctl_eu(s, a, b);
    return true;
  }
  if (c.is(CKind::False)) {
    out = StateSet(s.size());
    return true;
  }
  return false;
}

inline StateSet mc_ctl(const KripkeStructure& s, Formula f, LabelingTable& t) {
  return label_formula(s, f, t, [&](Formula g, const LabelingTable& tt) {
    StateSet r;
    if (!ctl_until(s, g, tt, r)) throw fragment_error("counting constraint outside CTL: " + to_string(g));
    return r;
  });
}

inline StateSet mc_ctl(const KripkeStructure& s, Formula f) {
  LabelingTable t;
  return mc_ctl(s, f, t);
}

}  // namespace cctl
