#pragma once

// Model checking CCTL with nonnegative coefficients through the product of
// the structure with capped counters. One counter per distinct left-hand
// sum; it saturates one above the largest bound compared against it, which
// keeps every comparison exact.

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cctl/ctl.hpp"

namespace cctl {

struct CountingOptions {
  std::size_t max_configs = 10'000'000;
};

// Truth of c on the prefix sigma, with counted formulas read off the table.
inline bool prefix_satisfies(const LabelingTable& t, const std::vector<int>& sigma, Constraint c) {
  return eval_constraint(c, [&](Constraint atom) {
    std::int64_t s = 0;
    for (const auto& term : atom.terms()) {
      const StateSet& sat = t.at(term.counted);
      for (int q : sigma)
        if (sat[q]) s = checked_add(s, term.coeff);
    }
    return s;
  });
}

struct Lasso {
  std::vector<int> states;
  std::optional<std::size_t> loop_start;  // set when the run is infinite
};

class CountingProduct {
 public:
  CountingProduct(const KripkeStructure& s, Formula g, const LabelingTable& t, const CountingOptions& opt)
      : s_(s), g_(g), t_(t), opt_(opt), universal_(g.is(FKind::AU)) {
    Constraint c = g.constraint();
    for (auto a : constraint_atoms(c)) {
      for (const auto& term : a.terms())
        if (term.coeff < 0) throw fragment_error("negative coefficient needs the pseudo-polynomial engine: " + to_string(g));
      auto it = std::find(sums_.begin(), sums_.end(), a.terms());
      std::size_t idx = static_cast<std::size_t>(it - sums_.begin());
      if (it == sums_.end()) sums_.push_back(a.terms()), caps_.push_back(0);
      caps_[idx] = std::max<std::int64_t>(caps_[idx], checked_add(a.bound(), 1));
      atom_sum_[a] = idx;
    }
    // Per-state contribution to each sum.
    delta_.assign(static_cast<std::size_t>(s.size()) * sums_.size(), 0);
    for (std::size_t i = 0; i < sums_.size(); ++i)
      for (const auto& term : sums_[i]) {
        const StateSet& sat = t.at(term.counted);
        for (int q = 0; q < s.size(); ++q)
          if (sat[q]) delta_[q * sums_.size() + i] = checked_add(delta_[q * sums_.size() + i], term.coeff);
      }
    explore();
    solve();
  }

  std::size_t config_count() const { return configs_.size(); }
  int initial(int q) const { return init_[q]; }
  bool value(int c) const { return val_[c]; }

  StateSet result() const {
    StateSet r(s_.size());
    for (int q = 0; q < s_.size(); ++q) r.set(q, val_[init_[q]]);
    return r;
  }

  int state_of(int c) const { return configs_[c][0]; }

  // Shortest run prefix from (q, 0) to an accepting configuration; its last
  // state satisfies the right operand.
  std::optional<std::vector<int>> witness(int q) const {
    int start = init_[q];
    if (!val_[start]) return std::nullopt;
    std::vector<int> parent(configs_.size(), -2);
    std::deque<int> work{start};
    parent[start] = -1;
    while (!work.empty()) {
      int c = work.front();
      work.pop_front();
      if (accept_[c]) {
        std::vector<int> run;
        for (int x = c; x != -1; x = parent[x]) run.push_back(state_of(x));
        return std::vector<int>(run.rbegin(), run.rend());
      }
      for (int d : succ_[c])
        if (parent[d] == -2 && val_[d]) parent[d] = c, work.push_back(d);
    }
    return std::nullopt;
  }

  // For a failing universal until: a run none of whose points is accepting
  // that either ends in a state violating the left operand or loops.
  std::optional<Lasso> counterexample(int q) const {
    int c = init_[q];
    if (val_[c] || !universal_) return std::nullopt;
    Lasso l;
    std::unordered_map<int, std::size_t> seen;
    for (;;) {
      auto it = seen.find(c);
      if (it != seen.end()) {
        l.loop_start = it->second;
        return l;
      }
      seen[c] = l.states.size();
      l.states.push_back(state_of(c));
      if (!expanded_[c]) return l;
      int next = -1;
      for (int d : succ_[c])
        if (!val_[d]) {
          next = d;
          break;
        }
      if (next < 0) return l;
      c = next;
    }
  }

 private:
  using Config = std::vector<std::int64_t>;  // state followed by counters

  int intern(const Config& cfg) {
    auto it = index_.find(cfg);
    if (it != index_.end()) return it->second;
    if (configs_.size() >= opt_.max_configs)
      throw resource_cap_error("counting product exceeds " + std::to_string(opt_.max_configs) + " configurations");
    int id = static_cast<int>(configs_.size());
    configs_.push_back(cfg);
    index_.emplace(cfg, id);
    succ_.emplace_back();
    work_.push_back(id);
    return id;
  }

  bool accepting(const Config& cfg) const {
    int q = static_cast<int>(cfg[0]);
    if (!t_.at(g_.rhs())[q]) return false;
    return eval_constraint(g_.constraint(), [&](Constraint a) { return cfg[1 + atom_sum_.at(a)]; });
  }

  void explore() {
    const std::size_t m = sums_.size();
    init_.resize(s_.size());
    for (int q = 0; q < s_.size(); ++q) {
      Config c(1 + m, 0);
      c[0] = q;
      init_[q] = intern(c);
    }
    const StateSet& left = t_.at(g_.lhs());
    while (!work_.empty()) {
      int id = work_.front();
      work_.pop_front();
      Config cfg = configs_[id];
      bool acc = accepting(cfg);
      accept_.resize(configs_.size(), false);
      expanded_.resize(configs_.size(), false);
      accept_[id] = acc;
      int q = static_cast<int>(cfg[0]);
      if (acc || !left[q]) continue;
      expanded_[id] = true;
      Config nxt = cfg;
      for (std::size_t i = 0; i < m; ++i)
        nxt[1 + i] = std::min(caps_[i] < 0 ? 0 : caps_[i], cfg[1 + i] + delta_[q * m + i]);
      for (int p : s_.succ(q)) {
        nxt[0] = p;
        int d = intern(nxt);
        succ_[id].push_back(d);
      }
    }
    accept_.resize(configs_.size(), false);
    expanded_.resize(configs_.size(), false);
  }

  void solve() {
    const std::size_t n = configs_.size();
    std::vector<std::vector<int>> pred(n);
    for (std::size_t c = 0; c < n; ++c)
      for (int d : succ_[c]) pred[d].push_back(static_cast<int>(c));
    val_.assign(n, false);
    std::deque<int> work;
    for (std::size_t c = 0; c < n; ++c)
      if (accept_[c]) val_[c] = true, work.push_back(static_cast<int>(c));
    std::vector<int> missing(n);
    for (std::size_t c = 0; c < n; ++c) missing[c] = static_cast<int>(succ_[c].size());
    while (!work.empty()) {
      int d = work.front();
      work.pop_front();
      for (int c : pred[d]) {
        if (val_[c]) continue;
        if (universal_) {
          if (--missing[c] == 0) val_[c] = true, work.push_back(c);
        } else {
          val_[c] = true, work.push_back(c);
        }
      }
    }
  }

  const KripkeStructure& s_;
  Formula g_;
  const LabelingTable& t_;
  CountingOptions opt_;
  bool universal_;
  std::vector<std::vector<Term>> sums_;
  std::vector<std::int64_t> caps_;
  std::unordered_map<Constraint, std::size_t> atom_sum_;
  std::vector<std::int64_t> delta_;
  std::vector<Config> configs_;
  std::unordered_map<Config, int, vector_hash> index_;
  std::vector<std::vector<int>> succ_;
  std::deque<int> work_;
  std::vector<bool> accept_, expanded_, val_;
  std::vector<int> init_;
};

inline StateSet mc_counting(const KripkeStructure& s, Formula f, LabelingTable& t, const CountingOptions& opt = {}) {
  return label_formula(s, f, t, [&](Formula g, const LabelingTable& tt) {
    StateSet r;
    if (ctl_until(s, g, tt, r)) return r;
    return CountingProduct(s, g, tt, opt).result();
  });
}

inline StateSet mc_counting(const KripkeStructure& s, Formula f, const CountingOptions& opt = {}) {
  LabelingTable t;
  return mc_counting(s, f, t, opt);
}

// Overload labelling the counted formulas with the counting engine.
inline bool prefix_satisfies(const KripkeStructure& s, const std::vector<int>& sigma, Constraint c) {
  LabelingTable t;
  for (auto a : constraint_atoms(c))
    for (const auto& term : a.terms()) mc_counting(s, term.counted, t);
  return prefix_satisfies(t, sigma, c);
}

// Witness prefix for an existential until f at state q, if f holds there.
inline std::optional<std::vector<int>> counting_witness(const KripkeStructure& s, Formula f, int q,
                                                        const CountingOptions& opt = {}) {
  if (!f.is(FKind::EU)) return std::nullopt;
  LabelingTable t;
  mc_counting(s, f.lhs(), t, opt);
  mc_counting(s, f.rhs(), t, opt);
  for (auto a : constraint_atoms(f.constraint()))
    for (const auto& term : a.terms()) mc_counting(s, term.counted, t, opt);
  Formula g = f.constraint().null() ? mk_eu(f.lhs(), f.rhs(), c_true()) : f;
  return CountingProduct(s, g, t, opt).witness(q);
}

inline std::optional<Lasso> counting_counterexample(const KripkeStructure& s, Formula f, int q,
                                                    const CountingOptions& opt = {}) {
  if (!f.is(FKind::AU)) return std::nullopt;
  LabelingTable t;
  mc_counting(s, f.lhs(), t, opt);
  mc_counting(s, f.rhs(), t, opt);
  for (auto a : constraint_atoms(f.constraint()))
    for (const auto& term : a.terms()) mc_counting(s, term.counted, t, opt);
  Formula g = f.constraint().null() ? mk_au(f.lhs(), f.rhs(), c_true()) : f;
  return CountingProduct(s, g, t, opt).counterexample(q);
}

}  // namespace cctl
