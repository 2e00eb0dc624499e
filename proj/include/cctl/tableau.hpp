#pragma once

// CTL satisfiability by an AND/OR tableau over Hintikka sets with
// elimination of unfulfillable eventualities. A satisfying model is
// extracted by pursuing one eventuality at a time and re-checked.

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cctl/ctl.hpp"

namespace cctl {

enum class SatStatus { Sat, Unsat, Undecidable, Capped };

inline const char* to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "SAT";
    case SatStatus::Unsat: return "UNSAT";
    case SatStatus::Undecidable: return "UNDECIDABLE";
    case SatStatus::Capped: return "CAPPED";
  }
  return "?";
}

struct TableauOptions {
  std::size_t max_states = 1u << 14;  // Hintikka sets
};

struct CtlSatResult {
  SatStatus status = SatStatus::Unsat;
  std::optional<KripkeStructure> model;
  int initial = 0;
  std::size_t hintikka_sets = 0;
};

namespace detail {

class Tableau {
 public:
  enum K { T, F, Lit, NLit, And, Or, EX, AX, EU, AU, ER, AR };
  struct Node {
    K k;
    int a = -1, b = -1;
    std::string prop;
  };

  explicit Tableau(const TableauOptions& opt) : opt_(opt) {}

  int nnf(Formula f, bool neg) {
    auto key = std::make_pair(f.id(), neg);
    auto it = nnf_memo_.find(key);
    if (it != nnf_memo_.end()) return it->second;
    int r = -1;
    switch (f.kind()) {
      case FKind::True: r = mk(neg ? F : T); break;
      case FKind::False: r = mk(neg ? T : F); break;
      case FKind::Atom: r = mk(neg ? NLit : Lit, -1, -1, f.name()); break;
      case FKind::Not: r = nnf(f.child(), !neg); break;
      case FKind::And: r = mk(neg ? Or : And, nnf(f.lhs(), neg), nnf(f.rhs(), neg)); break;
      case FKind::Or: r = mk(neg ? And : Or, nnf(f.lhs(), neg), nnf(f.rhs(), neg)); break;
      case FKind::EU:
      case FKind::AU: {
        bool universal = f.is(FKind::AU);
        Constraint c = f.constraint();
        if (is_next(f)) {
          r = mk((universal != neg) ? AX : EX, nnf(f.rhs(), neg));
        } else if (c.null() || c.is(CKind::True)) {
          int a = nnf(f.lhs(), neg), b = nnf(f.rhs(), neg);
          if (!neg)
            r = mk(universal ? AU : EU, a, b);
          else
            r = mk(universal ? ER : AR, a, b);  // not E(aUb) = A(!a R !b)
        } else if (c.is(CKind::False)) {
          r = mk(neg ? T : F);
        } else {
          throw fragment_error("CTL satisfiability on a counting formula: " + to_string(f));
        }
        break;
      }
      default: throw fragment_error("CTL satisfiability on a non-CTL formula: " + to_string(f));
    }
    nnf_memo_[key] = r;
    return r;
  }

  CtlSatResult run(Formula f) {
    root_ = nnf(f, false);
    CtlSatResult res;
    try {
      start_ = pre_state({root_});
      while (!pending_.empty()) {
        int h = pending_.front();
        pending_.pop_front();
        build_successors(h);
      }
    } catch (const resource_cap_error&) {
      res.status = SatStatus::Capped;
      res.hintikka_sets = states_.size();
      return res;
    }
    res.hintikka_sets = states_.size();
    eliminate();
    bool sat = false;
    for (int h : pre_[start_].states) sat = sat || alive_[h];
    if (!sat) {
      res.status = SatStatus::Unsat;
      return res;
    }
    res.status = SatStatus::Sat;
    res.model = extract(res.initial);
    return res;
  }

 private:
  struct State {
    std::vector<int> set;                        // sorted formula ids
    std::vector<std::pair<int, int>> succ;       // (EX formula or -1, pre-state)
  };
  struct Pre {
    std::vector<int> states;
  };

  int mk(K k, int a = -1, int b = -1, std::string prop = {}) {
    // Local simplifications keep the sets small.
    if (k == And) {
      if (nodes_[a].k == F || nodes_[b].k == F) return mk(F);
      if (nodes_[a].k == T) return b;
      if (nodes_[b].k == T) return a;
      if (a == b) return a;
    }
    if (k == Or) {
      if (nodes_[a].k == T || nodes_[b].k == T) return mk(T);
      if (nodes_[a].k == F) return b;
      if (nodes_[b].k == F) return a;
      if (a == b) return a;
    }
    auto key = std::make_tuple(static_cast<int>(k), a, b, prop);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({k, a, b, prop});
    index_[key] = id;
    return id;
  }

  bool contains(const std::vector<int>& s, int x) const { return std::binary_search(s.begin(), s.end(), x); }

  // All fully expanded sets reachable from `todo` by the expansion rules.
  void expand(std::vector<int> todo, std::vector<int> done, std::vector<std::vector<int>>& out) {
    while (!todo.empty()) {
      int f = todo.back();
      todo.pop_back();
      if (contains(done, f)) continue;
      const Node& n = nodes_[f];
      auto add_done = [&](int x) { done.insert(std::upper_bound(done.begin(), done.end(), x), x); };
      switch (n.k) {
        case T: add_done(f); break;
        case F: return;
        case Lit:
        case NLit: {
          int neg = mk(n.k == Lit ? NLit : Lit, -1, -1, n.prop);
          if (contains(done, neg)) return;
          add_done(f);
          break;
        }
        case EX:
        case AX: add_done(f); break;
        case And:
          add_done(f);
          todo.push_back(n.a);
          todo.push_back(n.b);
          break;
        case Or: {
          add_done(f);
          if (contains(done, n.a) || contains(done, n.b)) break;
          auto t2 = todo;
          t2.push_back(n.b);
          expand(t2, done, out);
          todo.push_back(n.a);
          break;
        }
        case EU:
        case AU: {
          add_done(f);
          if (contains(done, n.b)) break;
          int nx = mk(n.k == EU ? EX : AX, f);
          auto t2 = todo;
          t2.push_back(n.a);
          t2.push_back(nx);
          expand(t2, done, out);
          todo.push_back(n.b);
          break;
        }
        case ER:
        case AR: {
          add_done(f);
          todo.push_back(n.b);
          if (contains(done, n.a)) break;
          int nx = mk(n.k == ER ? EX : AX, f);
          auto t2 = todo;
          t2.push_back(nx);
          expand(t2, done, out);
          todo.push_back(n.a);
          break;
        }
      }
    }
    out.push_back(done);
  }

  int pre_state(std::vector<int> fs) {
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    auto it = pre_index_.find(fs);
    if (it != pre_index_.end()) return it->second;
    int id = static_cast<int>(pre_.size());
    pre_index_[fs] = id;
    pre_.emplace_back();
    std::vector<std::vector<int>> sets;
    expand(fs, {}, sets);
    std::vector<int> ids;
    for (auto& s : sets) ids.push_back(state(std::move(s)));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    pre_[id].states = ids;
    return id;
  }

  int state(std::vector<int> s) {
    auto it = state_index_.find(s);
    if (it != state_index_.end()) return it->second;
    if (states_.size() >= opt_.max_states) throw resource_cap_error("tableau exceeds Hintikka-set cap");
    int id = static_cast<int>(states_.size());
    state_index_[s] = id;
    states_.push_back({std::move(s), {}});
    pending_.push_back(id);
    return id;
  }

  void build_successors(int h) {
    std::vector<int> ax, ex;
    for (int f : states_[h].set) {
      if (nodes_[f].k == AX) ax.push_back(nodes_[f].a);
      if (nodes_[f].k == EX) ex.push_back(f);
    }
    std::vector<std::pair<int, int>> succ;
    if (ex.empty()) {
      auto fs = ax;
      if (fs.empty()) fs.push_back(mk(T));
      succ.push_back({-1, pre_state(fs)});
    }
    for (int e : ex) {
      auto fs = ax;
      fs.push_back(nodes_[e].a);
      succ.push_back({e, pre_state(fs)});
    }
    states_[h].succ = std::move(succ);
  }

  bool pre_alive(int p) const {
    for (int h : pre_[p].states)
      if (alive_[h]) return true;
    return false;
  }

  // rank[e][h]: steps needed to fulfil eventuality e from h, -1 if never.
  std::vector<int> ranks(int e) const {
    const Node& n = nodes_[e];
    std::vector<int> rank(states_.size(), -1);
    for (std::size_t h = 0; h < states_.size(); ++h)
      if (alive_[h] && contains(states_[h].set, e) && contains(states_[h].set, n.b)) rank[h] = 0;
    for (int round = 1;; ++round) {
      std::vector<int> newly;
      for (std::size_t h = 0; h < states_.size(); ++h) {
        if (!alive_[h] || rank[h] >= 0 || !contains(states_[h].set, e)) continue;
        auto pre_ok = [&](int p) {
          for (int x : pre_[p].states)
            if (alive_[x] && rank[x] >= 0 && rank[x] < round) return true;
          return false;
        };
        bool ok;
        if (n.k == EU) {
          int nx = index_.at(std::make_tuple(static_cast<int>(EX), e, -1, std::string()));
          ok = false;
          for (auto [f, p] : states_[h].succ)
            if (f == nx && pre_ok(p)) ok = true;
        } else {
          ok = !states_[h].succ.empty();
          for (auto [f, p] : states_[h].succ) ok = ok && pre_ok(p);
        }
        if (ok) newly.push_back(static_cast<int>(h));
      }
      if (newly.empty()) break;
      for (int h : newly) rank[h] = round;
    }
    return rank;
  }

  void eliminate() {
    alive_.assign(states_.size(), true);
    for (std::size_t f = 0; f < nodes_.size(); ++f)
      if (nodes_[f].k == EU || nodes_[f].k == AU) eventualities_.push_back(static_cast<int>(f));
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t h = 0; h < states_.size(); ++h) {
        if (!alive_[h]) continue;
        for (auto [f, p] : states_[h].succ)
          if (!pre_alive(p)) {
            alive_[h] = false;
            changed = true;
            break;
          }
      }
      for (int e : eventualities_) {
        auto rank = ranks(e);
        for (std::size_t h = 0; h < states_.size(); ++h)
          if (alive_[h] && contains(states_[h].set, e) && rank[h] < 0) alive_[h] = false, changed = true;
      }
    }
    for (int e : eventualities_) rank_.push_back(ranks(e));
  }

  KripkeStructure extract(int& initial) {
    const std::size_t ne = std::max<std::size_t>(1, eventualities_.size());
    std::map<std::pair<int, std::size_t>, int> ids;
    std::vector<std::pair<int, std::size_t>> order;
    std::vector<std::vector<int>> edges;
    auto node = [&](int h, std::size_t j) {
      auto key = std::make_pair(h, j);
      auto it = ids.find(key);
      if (it != ids.end()) return it->second;
      int id = static_cast<int>(order.size());
      ids[key] = id;
      order.push_back(key);
      edges.emplace_back();
      return id;
    };
    int h0 = -1;
    for (int h : pre_[start_].states)
      if (alive_[h]) {
        h0 = h;
        break;
      }
    initial = node(h0, 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto [h, j] = order[i];
      int e = eventualities_.empty() ? -1 : eventualities_[j];
      bool pursuing = e >= 0 && contains(states_[h].set, e) && rank_[j][h] > 0;
      int nx = -1;
      if (pursuing && nodes_[e].k == EU) nx = index_.at(std::make_tuple(static_cast<int>(EX), e, -1, std::string()));
      for (auto [f, p] : states_[h].succ) {
        bool chase = pursuing && (nodes_[e].k == AU || f == nx);
        int best = -1;
        for (int x : pre_[p].states) {
          if (!alive_[x]) continue;
          if (best < 0) best = x;
          if (chase && rank_[j][x] >= 0 && (rank_[j][best] < 0 || rank_[j][x] < rank_[j][best])) best = x;
        }
        std::size_t nj = chase ? j : (j + 1) % ne;
        int target = node(best, nj);
        edges[i].push_back(target);
      }
    }
    KripkeStructure m;
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::vector<std::string> labels;
      for (int f : states_[order[i].first].set)
        if (nodes_[f].k == Lit) labels.push_back(nodes_[f].prop);
      m.add_state("s" + std::to_string(i), labels);
    }
    for (std::size_t i = 0; i < order.size(); ++i)
      for (int t : edges[i]) m.add_edge(static_cast<int>(i), t);
    return m;
  }

  TableauOptions opt_;
  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, int, std::string>, int> index_;
  std::map<std::pair<std::uint32_t, bool>, int> nnf_memo_;
  int root_ = -1, start_ = -1;
  std::vector<State> states_;
  std::map<std::vector<int>, int> state_index_;
  std::vector<Pre> pre_;
  std::map<std::vector<int>, int> pre_index_;
  std::deque<int> pending_;
  std::vector<bool> alive_;
  std::vector<int> eventualities_;
  std::vector<std::vector<int>> rank_;
};

}  // namespace detail

// Keeps only states reachable from `initial`; returns the new initial index.
inline KripkeStructure restrict_reachable(const KripkeStructure& s, int& initial) {
  std::vector<int> map(s.size(), -1);
  std::vector<int> order{initial};
  map[initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int p : s.succ(order[i]))
      if (map[p] < 0) map[p] = static_cast<int>(order.size()), order.push_back(p);
  KripkeStructure r;
  for (const auto& a : s.aps()) r.add_ap(a);
  for (int q : order) r.add_state(s.name(q), s.label_names(q));
  for (int q : order)
    for (int p : s.succ(q)) r.add_edge(map[q], map[p]);
  initial = 0;
  return r;
}

// Greedily drops states while `holds` keeps accepting the structure.
template <class Check>
KripkeStructure minimize_witness(KripkeStructure s, int initial, Check&& holds, std::size_t max_states = 48) {
  s = restrict_reachable(s, initial);
  if (static_cast<std::size_t>(s.size()) > max_states) return s;
  // Removes `victim`, sending its incoming edges to `into` (or dropping them
  // when into < 0). Returns false when the result is not total.
  auto rebuild = [&](const KripkeStructure& m, int victim, int into, KripkeStructure& out) {
    out = KripkeStructure();
    for (const auto& a : m.aps()) out.add_ap(a);
    std::vector<int> map(m.size(), -1);
    for (int q = 0; q < m.size(); ++q)
      if (q != victim) map[q] = out.add_state(m.name(q), m.label_names(q));
    for (int q = 0; q < m.size(); ++q) {
      if (q == victim) continue;
      bool any = false;
      for (int p : m.succ(q)) {
        int d = p == victim ? (into < 0 ? -1 : map[into]) : map[p];
        if (d >= 0) out.add_edge(map[q], d), any = true;
      }
      if (!any) return false;
    }
    int init = 0;
    out = restrict_reachable(out, init);
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int victim = s.size() - 1; victim > 0 && !changed; --victim)
      for (int into = -1; into < s.size() && !changed; ++into) {
        if (into == victim) continue;
        KripkeStructure t;
        if (rebuild(s, victim, into, t) && holds(t, 0)) s = std::move(t), changed = true;
      }
    for (int q = 0; q < s.size() && !changed; ++q)
      for (int p : s.succ(q)) {
        if (s.succ(q).size() < 2) break;
        KripkeStructure t;
        for (const auto& a : s.aps()) t.add_ap(a);
        for (int x = 0; x < s.size(); ++x) t.add_state(s.name(x), s.label_names(x));
        for (int x = 0; x < s.size(); ++x)
          for (int y : s.succ(x))
            if (x != q || y != p) t.add_edge(x, y);
        int init = 0;
        t = restrict_reachable(t, init);
        if (holds(t, 0)) {
          s = std::move(t);
          changed = true;
          break;
        }
      }
  }
  return s;
}

inline CtlSatResult sat_ctl(Formula f, const TableauOptions& opt = {}) {
  detail::Tableau t(opt);
  CtlSatResult r = t.run(f);
  if (r.status == SatStatus::Sat) {
    if (!mc_ctl(*r.model, f)[r.initial]) throw cctl_error("internal: tableau model fails the formula");
    int init = r.initial;
    r.model = restrict_reachable(*r.model, init);
    r.initial = init;
  }
  return r;
}

}  // namespace cctl
