#pragma once

// Random structures and formulas for the property tests and the acceptance
// corpus. All generators take an explicit engine so runs replay by seed.

#include <random>
#include <string>
#include <vector>

#include "cctl/formula.hpp"
#include "cctl/model.hpp"

namespace cctl::harness {

using Rng = std::mt19937_64;

inline int uniform(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }
inline bool coin(Rng& r, double p = 0.5) { return std::bernoulli_distribution(p)(r); }

inline std::vector<std::string> default_aps(int n = 2) {
  std::vector<std::string> a;
  for (int i = 0; i < n; ++i) a.push_back(std::string(1, static_cast<char>('P' + i)));
  return a;
}

// Total structure: each state gets 1..max_out successors.
inline KripkeStructure random_ks(Rng& r, int n, const std::vector<std::string>& aps, int max_out = 2) {
  KripkeStructure s;
  for (const auto& a : aps) s.add_ap(a);
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> l;
    for (const auto& a : aps)
      if (coin(r)) l.push_back(a);
    s.add_state("s" + std::to_string(q), l);
  }
  for (int q = 0; q < n; ++q) {
    int k = uniform(r, 1, max_out);
    for (int i = 0; i < k; ++i) s.add_edge(q, uniform(r, 0, n - 1));
  }
  return s;
}

inline DurationalKS random_dks(Rng& r, int n, const std::vector<std::string>& aps,
                               const std::vector<std::int64_t>& weights = {-1, 0, 1}, int max_out = 2) {
  DurationalKS d;
  KripkeStructure base = random_ks(r, n, aps, 1);
  for (const auto& a : aps) d.base.add_ap(a);
  for (int q = 0; q < n; ++q) d.base.add_state(base.name(q), base.label_names(q));
  for (int q = 0; q < n; ++q) {
    int k = uniform(r, 1, max_out);
    for (int i = 0; i < k; ++i)
      d.add_edge(q, weights[uniform(r, 0, static_cast<int>(weights.size()) - 1)], uniform(r, 0, n - 1));
  }
  return d;
}

inline Cmp random_cmp(Rng& r) {
  static const Cmp all[] = {Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ge, Cmp::Gt};
  return all[uniform(r, 0, 4)];
}

// Boolean combination of atoms.
inline Formula random_prop(Rng& r, const std::vector<std::string>& aps, int depth = 1) {
  if (depth == 0 || coin(r, 0.5)) {
    Formula a = mk_atom(aps[uniform(r, 0, static_cast<int>(aps.size()) - 1)]);
    if (coin(r, 0.15)) return mk_true();
    return coin(r, 0.3) ? mk_not(a) : a;
  }
  Formula x = random_prop(r, aps, depth - 1), y = random_prop(r, aps, depth - 1);
  return coin(r) ? mk_and(x, y) : mk_or(x, y);
}

struct CctlShape {
  int modalities = 2;
  int atoms = 2;                // atomic constraints per modality
  int terms = 2;                // terms per atomic constraint
  std::int64_t max_const = 3;
  std::int64_t min_coeff = 1, max_coeff = 2;
  bool boolean = true;          // allow Not/Or inside constraints
  bool single_counted = false;  // one counted formula per modality
};

inline Constraint random_constraint(Rng& r, const std::vector<std::string>& aps, const CctlShape& sh,
                                    std::vector<Formula> counted_pool) {
  Formula single = random_prop(r, aps);
  auto atom = [&]() {
    std::vector<Term> ts;
    int nt = sh.single_counted ? 1 : uniform(r, 1, sh.terms);
    for (int i = 0; i < nt; ++i) {
      std::int64_t c = 0;
      while (c == 0) c = std::uniform_int_distribution<std::int64_t>(sh.min_coeff, sh.max_coeff)(r);
      Formula h = sh.single_counted ? single
                  : (!counted_pool.empty() && coin(r, 0.3))
                      ? counted_pool[uniform(r, 0, static_cast<int>(counted_pool.size()) - 1)]
                      : random_prop(r, aps);
      ts.push_back({c, h});
    }
    return c_atom(ts, random_cmp(r), std::uniform_int_distribution<std::int64_t>(0, sh.max_const)(r));
  };
  int na = uniform(r, 1, sh.atoms);
  Constraint c = atom();
  for (int i = 1; i < na; ++i) {
    Constraint b = atom();
    if (c.is(CKind::Atom) && sh.boolean && coin(r, 0.3)) c = c_not(c);
    c = (sh.boolean && coin(r)) ? c_or(c, b) : c_and(c, b);
  }
  if (sh.boolean && coin(r, 0.2)) c = c_not(c);
  return c;
}

// A formula with up to sh.modalities constrained untils; operands of an
// outer modality may contain the inner one.
inline Formula random_cctl(Rng& r, const std::vector<std::string>& aps, const CctlShape& sh) {
  Formula f = random_prop(r, aps);
  int mods = uniform(r, 1, sh.modalities);
  for (int i = 0; i < mods; ++i) {
    Formula inner = f;
    Formula lhs = coin(r, 0.4) ? mk_true() : random_prop(r, aps);
    Formula rhs = random_prop(r, aps);
    int place = uniform(r, 0, 2);
    if (i > 0) {
      if (place == 0) lhs = coin(r) ? mk_and(lhs, inner) : mk_or(lhs, inner);
      else if (place == 1) rhs = coin(r) ? mk_and(rhs, inner) : mk_or(rhs, inner);
    }
    std::vector<Formula> pool;
    if (i > 0 && place == 2) pool.push_back(inner);
    Constraint c = random_constraint(r, aps, sh, pool);
    f = mk_until(coin(r), lhs, rhs, c);
    if (coin(r, 0.2)) f = mk_not(f);
  }
  return f;
}

// CCTL1 with a single atomic constraint sum_i #phi_i ~ k per modality
// (unit coefficients, one counted formula when single is set).
inline Formula random_cctl1(Rng& r, const std::vector<std::string>& aps, std::int64_t max_const = 4,
                            int modalities = 2) {
  CctlShape sh;
  sh.modalities = modalities;
  sh.atoms = 1;
  sh.terms = 1;
  sh.max_const = max_const;
  sh.min_coeff = sh.max_coeff = 1;
  sh.boolean = false;
  sh.single_counted = true;
  return random_cctl(r, aps, sh);
}

// TCTL over a DKS: constraints {#TT ~ k} with |k| <= max_const.
inline Formula random_tctl(Rng& r, const std::vector<std::string>& aps, std::int64_t max_const = 3,
                           int modalities = 1) {
  Formula f = random_prop(r, aps);
  for (int i = 0; i < modalities; ++i) {
    Formula lhs = coin(r, 0.4) ? mk_true() : random_prop(r, aps);
    Formula rhs = i > 0 && coin(r) ? mk_or(random_prop(r, aps), f) : random_prop(r, aps);
    std::int64_t k = std::uniform_int_distribution<std::int64_t>(-max_const, max_const)(r);
    f = mk_until(coin(r), lhs, rhs, c_atom({Term{1, mk_true()}}, random_cmp(r), k));
  }
  return f;
}

// Closed CCTLv: up to `binders` binders over propositional counted
// formulas (a later binder may count an earlier variable constraint), and a
// CTL body mixing atoms with variable constraints whose constants are <= K.
inline Formula random_cctlv(Rng& r, const std::vector<std::string>& aps, int binders = 2, std::int64_t K = 2) {
  int nb = uniform(r, 1, binders);
  std::vector<std::string> vars;
  for (int i = 0; i < nb; ++i) vars.push_back("z" + std::to_string(i));
  auto vc = [&](int upto) {
    std::vector<VarTerm> ts;
    int nt = uniform(r, 1, std::min(2, upto));
    for (int i = 0; i < nt; ++i) ts.push_back({uniform(r, 1, 2), vars[uniform(r, 0, upto - 1)]});
    return mk_varcmp(ts, random_cmp(r), std::uniform_int_distribution<std::int64_t>(0, K)(r));
  };
  auto leaf = [&]() { return coin(r, 0.5) ? vc(nb) : random_prop(r, aps); };
  std::function<Formula(int)> body = [&](int depth) -> Formula {
    if (depth == 0) return leaf();
    switch (uniform(r, 0, 4)) {
      case 0: return mk_and(leaf(), body(depth - 1));
      case 1: return mk_or(leaf(), body(depth - 1));
      case 2: return mk_not(body(depth - 1));
      default: return mk_until(coin(r), coin(r, 0.4) ? mk_true() : leaf(), body(depth - 1));
    }
  };
  Formula f = body(uniform(r, 1, 3));
  for (int i = nb - 1; i >= 0; --i) {
    Formula counted = (i > 0 && coin(r, 0.3)) ? mk_and(random_prop(r, aps), vc(i)) : random_prop(r, aps);
    f = mk_bind(vars[i], counted, f);
  }
  return f;
}

}  // namespace cctl::harness
