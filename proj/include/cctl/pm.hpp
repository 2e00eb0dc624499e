#pragma once

// Single-constraint CCTL with integer coefficients (CCTL±) by reduction to
// TCTL on a DKS: a state whose counted formulas contribute c is followed by
// a chain of |c| transitions of weight sign(c). Polynomial when every
// coefficient is ±1, pseudo-polynomial otherwise.

#include <string>

#include "cctl/dks.hpp"

namespace cctl {

struct PmOptions {
  std::size_t max_states = 4096;
};

struct PmReduction {
  DurationalKS dks;
  std::vector<int> original;  // DKS index of each original state
};

// Builds the chain structure for one atomic constraint. Original copies
// carry "ok" plus "phi"/"psi" from the given sets.
inline PmReduction reduce_to_dks(const KripkeStructure& s, Constraint atom, const LabelingTable& t,
                                 const StateSet& phi, const StateSet& psi, const PmOptions& opt = {}) {
  if (!atom.is(CKind::Atom)) throw fragment_error("reduction needs a single atomic constraint");
  const int n = s.size();
  std::vector<std::int64_t> cost(n, 0);
  for (const auto& term : atom.terms()) {
    const StateSet& sat = t.at(term.counted);
    for (int q = 0; q < n; ++q)
      if (sat[q]) cost[q] = checked_add(cost[q], term.coeff);
  }
  std::size_t total = static_cast<std::size_t>(n);
  for (auto c : cost) {
    std::uint64_t a = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    total += a + 1;
    if (total > opt.max_states || a > opt.max_states)
      throw resource_cap_error("chain reduction exceeds " + std::to_string(opt.max_states) + " states");
  }
  PmReduction r;
  DurationalKS& d = r.dks;
  d.base.add_ap("ok");
  d.base.add_ap("phi");
  d.base.add_ap("psi");
  r.original.resize(n);
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> l{"ok"};
    if (phi[q]) l.push_back("phi");
    if (psi[q]) l.push_back("psi");
    r.original[q] = d.base.add_state(s.name(q), l);
  }
  std::vector<int> last(n);
  for (int q = 0; q < n; ++q) {
    const std::int64_t len = cost[q] < 0 ? -cost[q] : cost[q];
    const std::int64_t step = cost[q] < 0 ? -1 : 1;
    int prev = d.base.add_state(s.name(q) + "_0");
    d.add_edge(r.original[q], 0, prev);
    for (std::int64_t i = 1; i <= len; ++i) {
      int cur = d.base.add_state(s.name(q) + "_" + std::to_string(i));
      d.add_edge(prev, step, cur);
      prev = cur;
    }
    last[q] = prev;
  }
  for (int q = 0; q < n; ++q)
    for (int p : s.succ(q)) d.add_edge(last[q], 0, r.original[p]);
  return r;
}

inline StateSet pm_until(const KripkeStructure& s, Formula g, const LabelingTable& t, const PmOptions& opt = {}) {
  Constraint c = g.constraint();
  PmReduction red = reduce_to_dks(s, c, t, t.at(g.lhs()), t.at(g.rhs()), opt);
  const KripkeStructure& b = red.dks.base;
  StateSet ok = b.label_set("ok");
  StateSet left = ~ok | b.label_set("phi");
  StateSet right = ok & b.label_set("psi");
  StateSet r = tctl_until(red.dks, g.is(FKind::AU), left, right, c.cmp(), c.bound());
  StateSet out(s.size());
  for (int q = 0; q < s.size(); ++q) out.set(q, r[red.original[q]]);
  return out;
}

inline StateSet mc_cctl_pm(const KripkeStructure& s, Formula f, LabelingTable& t, const PmOptions& opt = {}) {
  return label_formula(s, f, t, [&](Formula g, const LabelingTable& tt) {
    StateSet r;
    if (ctl_until(s, g, tt, r)) return r;
    if (!g.constraint().is(CKind::Atom))
      throw fragment_error("Boolean constraints with this engine: " + to_string(g));
    return pm_until(s, g, tt, opt);
  });
}

inline StateSet mc_cctl_pm(const KripkeStructure& s, Formula f, const PmOptions& opt = {}) {
  LabelingTable t;
  return mc_cctl_pm(s, f, t, opt);
}

}  // namespace cctl
