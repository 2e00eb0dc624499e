#pragma once

// Reduction generators: SNSAT (nested satisfiability) into CCTL model
// checking, QBF into CCTLv, and the embedding of a DKS into a Kripke
// structure with weight-labelled transition states.

#include <random>
#include <string>
#include <vector>

#include "cctl/formula.hpp"
#include "cctl/model.hpp"

namespace cctl::harness {

// ---------------------------------------------------------------------------
// SNSAT. Block i has variables x_i^1..x_i^m; its CNF may use those and the
// earlier z_1..z_{i-1}. Value: z_i = exists X_i. phi_i(z_1..z_{i-1}, X_i).

struct SnsatLiteral {
  bool is_z;  // refers to z_var (1-based) else x_block^var
  int block;  // for x literals
  int var;
  bool negated;
};

struct SnsatInstance {
  int p = 0, m = 0;
  std::vector<std::vector<std::vector<SnsatLiteral>>> cnf;  // cnf[i-1] = clauses of block i
};

inline SnsatInstance gen_snsat(std::mt19937_64& rng, int p, int m, int clauses_per_block, int width = 3) {
  SnsatInstance inst;
  inst.p = p;
  inst.m = m;
  inst.cnf.resize(p);
  for (int i = 1; i <= p; ++i) {
    for (int c = 0; c < clauses_per_block; ++c) {
      std::vector<SnsatLiteral> clause;
      for (int l = 0; l < width; ++l) {
        int choices = m + (i - 1);
        int pick = std::uniform_int_distribution<int>(0, choices - 1)(rng);
        bool neg = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        if (pick < m)
          clause.push_back({false, i, pick + 1, neg});
        else
          clause.push_back({true, 0, pick - m + 1, neg});
      }
      inst.cnf[i - 1].push_back(clause);
    }
  }
  return inst;
}

// Brute-force values of z_1..z_p.
inline std::vector<bool> snsat_values(const SnsatInstance& inst) {
  std::vector<bool> z(inst.p + 1, false);
  for (int i = 1; i <= inst.p; ++i) {
    bool any = false;
    for (std::uint64_t a = 0; a < (1ULL << inst.m) && !any; ++a) {
      bool all = true;
      for (const auto& clause : inst.cnf[i - 1]) {
        bool sat = false;
        for (const auto& l : clause) {
          bool v = l.is_z ? z[l.var] : ((a >> (l.var - 1)) & 1ULL);
          sat = sat || (v != l.negated);
        }
        all = all && sat;
      }
      any = all;
    }
    z[i] = any;
  }
  return std::vector<bool>(z.begin() + 1, z.end());
}

inline std::string snsat_x(int block, int var) { return "x" + std::to_string(block) + "_" + std::to_string(var); }
inline std::string snsat_z(int i) { return "z" + std::to_string(i); }

// Chain q_p -> z_p|zbar_p -> q_{p-1} -> ... -> z_1|zbar_1 -> q_0, then a
// diamond x|xbar per x variable (blocks descending), bullets in between,
// ending in a self-looping q_F.
inline KripkeStructure snsat_structure(const SnsatInstance& inst) {
  KripkeStructure s;
  s.add_ap("q");
  s.add_ap("zbar");
  s.add_ap("qF");
  for (int i = 1; i <= inst.p; ++i) s.add_ap(snsat_z(i));
  for (int i = inst.p; i >= 1; --i)
    for (int j = 1; j <= inst.m; ++j) s.add_ap(snsat_x(i, j));
  int prev = s.add_state("q" + std::to_string(inst.p), {"q"});
  for (int i = inst.p; i >= 1; --i) {
    int z = s.add_state(snsat_z(i), {snsat_z(i)});
    int zb = s.add_state("zbar" + std::to_string(i), {"zbar"});
    int next = s.add_state("q" + std::to_string(i - 1), {"q"});
    s.add_edge(prev, z);
    s.add_edge(prev, zb);
    s.add_edge(z, next);
    s.add_edge(zb, next);
    prev = next;
  }
  int counter = 0;
  std::vector<int> open;  // diamond tips waiting for the next join state
  for (int i = inst.p; i >= 1; --i)
    for (int j = 1; j <= inst.m; ++j) {
      if (!open.empty()) {
        int b = s.add_state("b" + std::to_string(counter++));
        for (int t : open) s.add_edge(t, b);
        prev = b;
      }
      int x = s.add_state(snsat_x(i, j), {snsat_x(i, j)});
      int xb = s.add_state("xbar" + std::to_string(i) + "_" + std::to_string(j));
      s.add_edge(prev, x);
      s.add_edge(prev, xb);
      open = {x, xb};
    }
  int f = s.add_state("qF", {"qF"});
  if (open.empty()) open = {prev};
  for (int t : open) s.add_edge(t, f);
  s.add_edge(f, f);
  return s;
}

namespace detail {
inline Constraint snsat_lit(const SnsatLiteral& l) {
  std::string name = l.is_z ? snsat_z(l.var) : snsat_x(l.block, l.var);
  Constraint a = c_atom({Term{1, mk_atom(name)}}, Cmp::Eq, 1);
  return l.negated ? c_not(a) : a;
}
inline Constraint snsat_cnf(const std::vector<std::vector<SnsatLiteral>>& cnf) {
  Constraint r;
  for (const auto& clause : cnf) {
    Constraint c;
    for (const auto& l : clause) c = c.null() ? snsat_lit(l) : c_or(c, snsat_lit(l));
    if (c.null()) c = c_false();
    r = r.null() ? c : c_and(r, c);
  }
  return r.null() ? c_true() : r;
}
}  // namespace detail

// Psi_0 = TT, Psi_k = EX E((zbar -> !Psi_{k-1}) U{C_k} qF) where C_k states,
// for l <= k, that having passed z_l (or having passed l q-states) implies
// the CNF of block l.
inline Formula snsat_formula(const SnsatInstance& inst, int k) {
  Formula psi = mk_true();
  for (int level = 1; level <= k; ++level) {
    Constraint c;
    auto conj = [&](Constraint x) { c = c.null() ? x : c_and(c, x); };
    for (int l = 1; l <= level; ++l)
      conj(c_implies(c_atom({Term{1, mk_atom(snsat_z(l))}}, Cmp::Eq, 1), detail::snsat_cnf(inst.cnf[l - 1])));
    for (int j = 1; j <= level; ++j)
      conj(c_implies(c_atom({Term{1, mk_atom("q")}}, Cmp::Eq, j), detail::snsat_cnf(inst.cnf[j - 1])));
    Formula lhs = mk_implies(mk_atom("zbar"), mk_not(psi));
    psi = mk_ex(mk_eu(lhs, mk_atom("qF"), c));
  }
  return psi;
}

// ---------------------------------------------------------------------------
// QBF: exists x1 forall x2 ... forall x_{2p}. /\ clauses, 3 literals each.

struct QbfLiteral {
  int var;  // 1-based
  bool negated;
};

struct QbfInstance {
  int p = 0;
  std::vector<std::vector<QbfLiteral>> clauses;
};

inline QbfInstance gen_qbf(std::mt19937_64& rng, int p, int m, int width = 3) {
  QbfInstance inst;
  inst.p = p;
  for (int c = 0; c < m; ++c) {
    std::vector<QbfLiteral> clause;
    for (int l = 0; l < width; ++l)
      clause.push_back({std::uniform_int_distribution<int>(1, 2 * p)(rng),
                        std::uniform_int_distribution<int>(0, 1)(rng) == 1});
    inst.clauses.push_back(clause);
  }
  return inst;
}

inline bool qbf_eval(const QbfInstance& inst) {
  const int n = 2 * inst.p;
  std::function<bool(int, std::uint64_t)> go = [&](int v, std::uint64_t a) -> bool {
    if (v > n) {
      for (const auto& clause : inst.clauses) {
        bool sat = false;
        for (const auto& l : clause) sat = sat || ((((a >> (l.var - 1)) & 1ULL) != 0) != l.negated);
        if (!sat) return false;
      }
      return true;
    }
    bool t = go(v + 1, a | (1ULL << (v - 1))), f = go(v + 1, a);
    return (v % 2 == 1) ? (t || f) : (t && f);
  };
  return go(1, 0);
}

// q1 -> x1|xbar1 -> q2 -> ... -> q_{2p+1} (looping). A literal state is
// labelled C_j when the literal occurs in clause j.
inline KripkeStructure qbf_structure(const QbfInstance& inst) {
  KripkeStructure s;
  const int n = 2 * inst.p;
  for (int i = 1; i <= n + 1; ++i) s.add_ap("q" + std::to_string(i));
  for (std::size_t j = 1; j <= inst.clauses.size(); ++j) s.add_ap("C" + std::to_string(j));
  auto labels = [&](int v, bool neg) {
    std::vector<std::string> l;
    for (std::size_t j = 0; j < inst.clauses.size(); ++j)
      for (const auto& lit : inst.clauses[j])
        if (lit.var == v && lit.negated == neg) {
          l.push_back("C" + std::to_string(j + 1));
          break;
        }
    return l;
  };
  int prev = s.add_state("q1", {"q1"});
  for (int v = 1; v <= n; ++v) {
    int x = s.add_state("x" + std::to_string(v), labels(v, false));
    int xb = s.add_state("xbar" + std::to_string(v), labels(v, true));
    int next = s.add_state("q" + std::to_string(v + 1), {"q" + std::to_string(v + 1)});
    s.add_edge(prev, x);
    s.add_edge(prev, xb);
    s.add_edge(x, next);
    s.add_edge(xb, next);
    prev = next;
  }
  s.add_edge(prev, prev);
  return s;
}

// z1[C1]...zm[Cm]. EF(q2 & AF(q3 & EF(q4 & ... (q_{2p+1} & /\ z_i >= 1)))).
inline Formula qbf_formula(const QbfInstance& inst) {
  const int n = 2 * inst.p;
  const std::size_t m = inst.clauses.size();
  Formula goal = mk_atom("q" + std::to_string(n + 1));
  for (std::size_t j = 1; j <= m; ++j)
    goal = mk_and(goal, mk_varcmp({VarTerm{1, "z" + std::to_string(j)}}, Cmp::Ge, 1));
  Formula f = goal;
  for (int v = n; v >= 1; --v) {
    Formula body = v == n ? f : mk_and(mk_atom("q" + std::to_string(v + 1)), f);
    f = (v % 2 == 1) ? mk_ef(body) : mk_af(body);
  }
  for (std::size_t j = m; j >= 1; --j) f = mk_bind("z" + std::to_string(j), mk_atom("C" + std::to_string(j)), f);
  return f;
}

// ---------------------------------------------------------------------------
// DKS embedding: every transition (q, d, q') becomes a state labelled P_d
// between q and q'; original states are labelled ok.

inline std::string weight_prop(std::int64_t d) {
  return d < 0 ? "P_m" + std::to_string(-d) : "P_" + std::to_string(d);
}

struct DksEmbedding {
  KripkeStructure ks;
  std::vector<int> original;
  std::vector<std::int64_t> weights;  // distinct weights present
};

inline DksEmbedding gen_dks_embedding(const DurationalKS& d) {
  DksEmbedding e;
  const KripkeStructure& b = d.base;
  for (const auto& a : b.aps()) e.ks.add_ap(a);
  e.ks.add_ap("ok");
  std::set<std::int64_t> ws;
  for (const auto& w : d.edges()) ws.insert(w.weight);
  for (auto w : ws) e.ks.add_ap(weight_prop(w));
  e.weights.assign(ws.begin(), ws.end());
  for (int q = 0; q < b.size(); ++q) {
    auto l = b.label_names(q);
    l.push_back("ok");
    e.original.push_back(e.ks.add_state(b.name(q), l));
  }
  for (const auto& w : d.edges()) {
    int t = e.ks.add_state(b.name(w.src) + "_" + weight_prop(w.weight) + "_" + b.name(w.dst), {weight_prop(w.weight)});
    e.ks.add_edge(e.original[w.src], t);
    e.ks.add_edge(t, e.original[w.dst]);
  }
  return e;
}

// Maps a TCTL formula over the DKS (constraints {#TT ~ c}) to CCTL over
// the embedding: E/A (ok -> phi) U{sum_d d*#P_d ~ c} (ok & psi).
inline Formula embed_formula(const DksEmbedding& e, Formula f) {
  std::unordered_map<Formula, Formula> memo;
  Formula ok = mk_atom("ok");
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    Formula r;
    switch (g.kind()) {
      case FKind::True:
      case FKind::False:
      case FKind::Atom: r = g; break;
      case FKind::Not: r = mk_not(go(g.child())); break;
      case FKind::And: r = mk_and(go(g.lhs()), go(g.rhs())); break;
      case FKind::Or: r = mk_or(go(g.lhs()), go(g.rhs())); break;
      case FKind::EU:
      case FKind::AU: {
        bool universal = g.is(FKind::AU);
        Formula lhs = mk_implies(ok, go(g.lhs())), rhs = mk_and(ok, go(g.rhs()));
        Constraint c = g.constraint();
        if (c.null()) {
          r = mk_until(universal, lhs, rhs);
          break;
        }
        if (!c.is(CKind::Atom) || c.terms().size() != 1 || c.terms()[0].coeff != 1 ||
            !c.terms()[0].counted.is(FKind::True))
          throw fragment_error("DKS constraints must read {#TT ~ k}: " + to_string(g));
        std::vector<Term> ts;
        for (auto w : e.weights) ts.push_back({w, mk_atom(weight_prop(w))});
        r = mk_until(universal, lhs, rhs, c_atom(ts, c.cmp(), c.bound()));
        break;
      }
      default: throw fragment_error("not a TCTL formula: " + to_string(g));
    }
    memo[g] = r;
    return r;
  };
  return go(f);
}

}  // namespace cctl::harness
