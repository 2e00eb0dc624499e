#pragma once

// Direct model checking of closed CCTLv over configurations
// (state, valuation of the relevant variables), values saturating at K+1.
// Cumulative CCTLc is handled by translating to CCTLv first.

#include <deque>
#include <unordered_map>

#include "cctl/ctl.hpp"
#include "cctl/translate.hpp"

namespace cctl {

struct CctlvOptions {
  std::size_t max_configs = 10'000'000;
  std::int64_t cap_extra = 0;  // raise the saturation point (for testing)
};

namespace detail {

struct ConfigKey {
  int q;
  std::uint32_t f;
  Valuation v;
  bool operator==(const ConfigKey& o) const { return q == o.q && f == o.f && v == o.v; }
};

struct ConfigKeyHash {
  std::size_t operator()(const ConfigKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.q) * 0x9e3779b1u + k.f;
    for (const auto& [z, val] : k.v) {
      hash_combine(h, static_cast<std::size_t>(z));
      hash_combine(h, static_cast<std::size_t>(val));
    }
    return h;
  }
};

class CctlvChecker {
 public:
  CctlvChecker(const KripkeStructure& s, Formula f, const CctlvOptions& opt)
      : s_(s), ctx_(f, opt.cap_extra), opt_(opt) {}

  VarContext& context() { return ctx_; }

  bool holds(int q, Formula g, const Valuation& v) {
    ConfigKey key{q, g.id(), v};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    struct Depth {
      int& d;
      explicit Depth(int& x, int& hi) : d(x) { hi = std::max(hi, ++d); }
      ~Depth() { --d; }
    } depth(depth_, max_depth_);
    bool r = false;
    switch (g.kind()) {
      case FKind::True: r = true; break;
      case FKind::False: r = false; break;
      case FKind::Atom: r = s_.has_label(q, g.name()); break;
      case FKind::Not: r = !sub(q, g.child(), v); break;
      case FKind::And: r = sub(q, g.lhs(), v) && sub(q, g.rhs(), v); break;
      case FKind::Or: r = sub(q, g.lhs(), v) || sub(q, g.rhs(), v); break;
      case FKind::VarCmp: r = ctx_.eval(g, v); break;
      case FKind::Bind: {
        Valuation w = v;
        int z = ctx_.index(g.name());
        w.insert(std::upper_bound(w.begin(), w.end(), std::make_pair(z, std::int64_t{0})), {z, 0});
        r = sub(q, g.body(), w);
        break;
      }
      case FKind::EU:
      case FKind::AU:
        if (is_next(g)) {
          Valuation w = step(q, v);
          bool universal = g.is(FKind::AU);
          r = universal;
          for (int p : s_.succ(q)) {
            bool x = sub(p, g.rhs(), w);
            if (universal ? !x : x) {
              r = !universal;
              break;
            }
          }
        } else {
          if (!g.constraint().null() && !g.constraint().is(CKind::True))
            throw fragment_error("counting constraint inside a CCTLv formula: " + to_string(g));
          return until(q, g, v);
        }
        break;
      case FKind::Now: throw fragment_error("N must be translated away first");
    }
    remember(key, r);
    return r;
  }

  std::size_t memo_size() const { return memo_.size(); }
  int max_depth() const { return max_depth_; }  // deepest nesting of uncached calls

 private:
  bool sub(int q, Formula g, const Valuation& v) { return holds(q, g, ctx_.restrict(v, g)); }

  void remember(const ConfigKey& k, bool r) {
    if (memo_.size() >= opt_.max_configs)
      throw resource_cap_error("CCTLv configurations exceed " + std::to_string(opt_.max_configs));
    memo_.emplace(k, r);
  }

  // Valuation after leaving q.
  Valuation step(int q, const Valuation& v) {
    Valuation w = v;
    for (auto& [z, val] : w)
      if (val < ctx_.cap() && sub(q, ctx_.eps(z), v)) val += 1;
    return w;
  }

  bool until(int q0, Formula g, const Valuation& v0) {
    const bool universal = g.is(FKind::AU);
    struct Node {
      int q;
      Valuation v;
      bool good, bad, expanded;
      std::vector<int> succ;
    };
    std::vector<Node> nodes;
    std::map<std::pair<int, Valuation>, int> index;
    std::deque<int> work;
    auto intern = [&](int q, const Valuation& v) {
      auto key = std::make_pair(q, v);
      auto it = index.find(key);
      if (it != index.end()) return it->second;
      if (nodes.size() >= opt_.max_configs) throw resource_cap_error("CCTLv until exploration exceeds cap");
      int id = static_cast<int>(nodes.size());
      index.emplace(key, id);
      nodes.push_back({q, v, false, false, false, {}});
      work.push_back(id);
      return id;
    };
    intern(q0, v0);
    while (!work.empty()) {
      int id = work.front();
      work.pop_front();
      int q = nodes[id].q;
      Valuation v = nodes[id].v;
      bool psi = sub(q, g.rhs(), v);
      bool phi = psi ? true : sub(q, g.lhs(), v);
      nodes[id].good = psi;
      nodes[id].bad = !psi && !phi;
      if (psi || !phi) continue;
      nodes[id].expanded = true;
      Valuation w = step(q, v);
      for (int p : s_.succ(q)) {
        int d = intern(p, w);
        nodes[id].succ.push_back(d);
      }
    }
    const std::size_t n = nodes.size();
    std::vector<std::vector<int>> pred(n);
    for (std::size_t c = 0; c < n; ++c)
      for (int d : nodes[c].succ) pred[d].push_back(static_cast<int>(c));
    std::vector<bool> val(n, false);
    std::deque<int> q;
    if (!universal) {
      for (std::size_t c = 0; c < n; ++c)
        if (nodes[c].good) val[c] = true, q.push_back(static_cast<int>(c));
      while (!q.empty()) {
        int d = q.front();
        q.pop_front();
        for (int c : pred[d])
          if (!val[c]) val[c] = true, q.push_back(c);
      }
    } else {
      // A phi U psi fails iff E(!psi U (!phi & !psi)) or EG !psi holds; both
      // are computed on the configurations expanded above.
      std::vector<bool> fail(n, false);
      for (std::size_t c = 0; c < n; ++c)
        if (nodes[c].bad) fail[c] = true, q.push_back(static_cast<int>(c));
      while (!q.empty()) {
        int d = q.front();
        q.pop_front();
        for (int c : pred[d])
          if (!fail[c]) fail[c] = true, q.push_back(c);
      }
      // Greatest fixpoint: expanded configurations with a successor that stays.
      std::vector<bool> stay(n);
      std::vector<int> live(n, 0);
      for (std::size_t c = 0; c < n; ++c) {
        stay[c] = nodes[c].expanded;
        for (int d : nodes[c].succ) live[c] += nodes[d].expanded ? 1 : 0;
      }
      for (std::size_t c = 0; c < n; ++c)
        if (stay[c] && live[c] == 0) stay[c] = false, q.push_back(static_cast<int>(c));
      while (!q.empty()) {
        int d = q.front();
        q.pop_front();
        for (int c : pred[d])
          if (stay[c] && --live[c] == 0) stay[c] = false, q.push_back(c);
      }
      for (std::size_t c = 0; c < n; ++c) val[c] = !(fail[c] || stay[c]);
    }
    for (std::size_t c = 0; c < n; ++c) {
      ConfigKey k{nodes[c].q, g.id(), nodes[c].v};
      if (!memo_.count(k)) remember(k, val[c]);
    }
    return val[0];
  }

  const KripkeStructure& s_;
  VarContext ctx_;
  CctlvOptions opt_;
  std::unordered_map<ConfigKey, bool, ConfigKeyHash> memo_;
  int depth_ = 0, max_depth_ = 0;
};

}  // namespace detail

inline StateSet check_cctlv(const KripkeStructure& s, Formula f, const CctlvOptions& opt = {}) {
  detail::CctlvChecker c(s, f, opt);
  StateSet r(s.size());
  for (int q = 0; q < s.size(); ++q) r.set(q, c.holds(q, f, {}));
  return r;
}

// Cumulative semantics: counting constraints count from the last N (or
// from the start of the run).
inline StateSet mc_cctlc(const KripkeStructure& s, Formula f, const CctlvOptions& opt = {}) {
  return check_cctlv(s, translate_cctlc_to_cctlv(f), opt);
}

}  // namespace cctl
