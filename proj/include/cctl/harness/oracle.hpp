#pragma once

// Reference evaluators used to cross-check the engines: explicit enumeration
// of run prefixes, a windowed (state, weight) product for DKS queries and an
// exhaustive small-model search for satisfiability.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cctl/ctl.hpp"
#include "cctl/model.hpp"

namespace cctl::harness {

enum class Tri { False, True, Unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    default: return "unknown";
  }
}
inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }
inline Tri tri_not(Tri a) { return a == Tri::Unknown ? a : tri(a == Tri::False); }
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  return (a == Tri::True && b == Tri::True) ? Tri::True : Tri::Unknown;
}
inline Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }

struct OracleOptions {
  int horizon = 8;
  std::size_t max_nodes = 2'000'000;
};

namespace detail {

class Enumerator {
 public:
  Enumerator(const KripkeStructure& s, const OracleOptions& opt) : s_(s), opt_(opt) {}

  const std::vector<Tri>& eval(Formula f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    const int n = s_.size();
    std::vector<Tri> r(n, Tri::Unknown);
    switch (f.kind()) {
      case FKind::True: r.assign(n, Tri::True); break;
      case FKind::False: r.assign(n, Tri::False); break;
      case FKind::Atom:
        for (int q = 0; q < n; ++q) r[q] = tri(s_.has_label(q, f.name()));
        break;
      case FKind::Not: {
        const auto& a = eval(f.child());
        for (int q = 0; q < n; ++q) r[q] = tri_not(a[q]);
        break;
      }
      case FKind::And:
      case FKind::Or: {
        const auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        for (int q = 0; q < n; ++q) r[q] = f.is(FKind::And) ? tri_and(a[q], b[q]) : tri_or(a[q], b[q]);
        break;
      }
      case FKind::EU:
      case FKind::AU: r = until(f); break;
      default: throw fragment_error("enumeration oracle handles CCTL only: " + to_string(f));
    }
    return memo_[f] = std::move(r);
  }

 private:
  std::vector<Tri> until(Formula g) {
    // Operands first: nested modalities reuse the member scratch state.
    eval(g.lhs());
    eval(g.rhs());
    if (!g.constraint().null())
      for (auto a : constraint_atoms(g.constraint()))
        for (const auto& t : a.terms()) eval(t.counted);
    universal_ = g.is(FKind::AU);
    phi_ = eval(g.lhs());
    psi_ = eval(g.rhs());
    c_ = g.constraint();
    counted_.clear();
    nonneg_ = true;
    cap_ = 0;
    if (!c_.null()) {
      for (auto a : constraint_atoms(c_)) {
        cap_ = std::max(cap_, std::abs(a.bound()) + 1);
        for (const auto& t : a.terms()) {
          if (t.coeff < 0) nonneg_ = false;
          if (std::find(counted_.begin(), counted_.end(), t.counted) == counted_.end()) counted_.push_back(t.counted);
        }
      }
    }
    cvals_.clear();
    for (auto h : counted_) cvals_.push_back(eval(h));
    compute_frozen();
    std::vector<Tri> r(s_.size());
    for (int q = 0; q < s_.size(); ++q) {
      std::vector<std::int64_t> counts(counted_.size(), 0);
      stack_.clear();
      r[q] = visit(q, counts, false, 0);
    }
    return r;
  }

  Tri constraint_value(const std::vector<std::int64_t>& counts, bool unknown) const {
    if (c_.null()) return Tri::True;
    if (unknown) return Tri::Unknown;
    return tri(eval_constraint(c_, [&](Constraint atom) {
      std::int64_t s = 0;
      for (const auto& t : atom.terms()) {
        auto i = std::find(counted_.begin(), counted_.end(), t.counted) - counted_.begin();
        s = checked_add(s, checked_mul(t.coeff, counts[i]));
      }
      return s;
    }));
  }

  // frozen_[q]: with nonnegative coefficients, no state reachable from q can
  // change a counter, so the constraint value is fixed from q on and the
  // rest is an unconstrained until, solved as a three-valued fixpoint.
  void compute_frozen() {
    const int n = s_.size();
    frozen_.assign(n, false);
    plain_.assign(n, Tri::Unknown);
    if (!nonneg_) return;
    std::vector<bool> counts_here(n, false);
    for (int q = 0; q < n; ++q)
      for (const auto& cv : cvals_) counts_here[q] = counts_here[q] || cv[q] != Tri::False;
    for (int q = 0; q < n; ++q) {
      std::vector<bool> seen(n, false);
      std::vector<int> todo{q};
      seen[q] = true;
      bool ok = true;
      while (!todo.empty() && ok) {
        int x = todo.back();
        todo.pop_back();
        if (counts_here[x]) ok = false;
        for (int y : s_.succ(x))
          if (!seen[y]) seen[y] = true, todo.push_back(y);
      }
      frozen_[q] = ok;
    }
    auto fix = [&](bool optimistic) {
      auto holds = [&](Tri t) { return t == Tri::True || (optimistic && t == Tri::Unknown); };
      std::vector<bool> x(n, false);
      for (bool changed = true; changed;) {
        changed = false;
        for (int q = 0; q < n; ++q) {
          if (x[q]) continue;
          bool step = universal_;
          for (int p : s_.succ(q)) step = universal_ ? (step && x[p]) : (step || x[p]);
          if (holds(psi_[q]) || (holds(phi_[q]) && step)) x[q] = true, changed = true;
        }
      }
      return x;
    };
    auto low = fix(false), high = fix(true);
    for (int q = 0; q < n; ++q) plain_[q] = low[q] ? Tri::True : high[q] ? Tri::Unknown : Tri::False;
  }

  // counts cover the strict prefix before q.
  Tri visit(int q, std::vector<std::int64_t>& counts, bool unknown, int depth) {
    if (++nodes_ > opt_.max_nodes) throw resource_cap_error("enumeration oracle exceeded its node budget");
    if (frozen_[q]) return tri_and(constraint_value(counts, unknown), plain_[q]);
    Tri acc = tri_and(psi_[q], constraint_value(counts, unknown));
    if (acc == Tri::True) return acc;
    Tri cont = phi_[q];
    if (cont == Tri::False) return acc;
    // A repeated (state, capped counts) pair on the current branch means the
    // run can loop forever without acceptance: the lasso adds no witness.
    std::vector<std::int64_t> key;
    if (nonneg_) {
      key.push_back(q);
      for (auto c : counts) key.push_back(std::min(c, cap_));
      key.push_back(unknown ? 1 : 0);
      if (stack_.count(key)) return acc;
    }
    if (depth >= opt_.horizon) return tri_or(acc, Tri::Unknown);
    std::vector<std::int64_t> next = counts;
    bool next_unknown = unknown;
    for (std::size_t i = 0; i < counted_.size(); ++i) {
      if (cvals_[i][q] == Tri::Unknown) next_unknown = true;
      if (cvals_[i][q] == Tri::True) next[i] += 1;
    }
    if (nonneg_) stack_.insert(key);
    Tri succ = universal_ ? Tri::True : Tri::False;
    for (int p : s_.succ(q)) {
      Tri x = visit(p, next, next_unknown, depth + 1);
      succ = universal_ ? tri_and(succ, x) : tri_or(succ, x);
      if (succ == (universal_ ? Tri::False : Tri::True)) break;
    }
    if (nonneg_) stack_.erase(key);
    return tri_or(acc, tri_and(cont, succ));
  }

  const KripkeStructure& s_;
  OracleOptions opt_;
  std::size_t nodes_ = 0;
  std::unordered_map<Formula, std::vector<Tri>> memo_;
  bool universal_ = false, nonneg_ = true;
  std::vector<Tri> phi_, psi_;
  Constraint c_;
  std::vector<Formula> counted_;
  std::vector<std::vector<Tri>> cvals_;
  std::int64_t cap_ = 0;
  std::set<std::vector<std::int64_t>> stack_;
  std::vector<bool> frozen_;
  std::vector<Tri> plain_;
};

}  // namespace detail

// Per-state verdicts from explicit prefix enumeration up to the horizon.
inline std::vector<Tri> oracle_enumerate(const KripkeStructure& s, Formula f, const OracleOptions& opt = {}) {
  detail::Enumerator e(s, opt);
  return e.eval(f);
}

// ---------------------------------------------------------------------------
// Windowed product for E/A phi U_{cmp k} psi on a DKS: configurations
// (state, prefix weight) with weights leaving [-W, W] folded into absorbing
// -inf/+inf values. The verdict is certified by recomputing at 2W; a
// disagreement means the window hid a witness and is reported as an error.

namespace detail {

inline StateSet windowed_until(const DurationalKS& d, bool universal, const StateSet& phi, const StateSet& psi,
                               Cmp cmp, std::int64_t k, std::int64_t window) {
  const KripkeStructure& g = d.base;
  const int n = g.size();
  const std::int64_t lo = -window - 1, hi = window + 1;  // lo/hi stand for -inf/+inf
  const std::int64_t width = hi - lo + 1;
  auto id = [&](int q, std::int64_t w) { return static_cast<std::size_t>(q) * width + (w - lo); };
  auto clamp = [&](std::int64_t w, std::int64_t dlt) {
    if (w == lo || w == hi) return w;
    std::int64_t x = w + dlt;
    return x < -window ? lo : (x > window ? hi : x);
  };
  auto accepts = [&](int q, std::int64_t w) {
    if (!psi[q]) return false;
    if (w == lo) return cmp == Cmp::Lt || cmp == Cmp::Le;
    if (w == hi) return cmp == Cmp::Gt || cmp == Cmp::Ge;
    return compare(w, cmp, k);
  };
  std::vector<std::vector<std::pair<int, std::int64_t>>> out(n);
  for (const auto& e : d.edges()) out[e.src].push_back({e.dst, e.weight});
  const std::size_t total = static_cast<std::size_t>(n) * width;
  std::vector<std::vector<std::size_t>> pred(total);
  std::vector<std::vector<std::size_t>> succ(total);
  std::vector<char> acc(total), cont(total);
  for (int q = 0; q < n; ++q)
    for (std::int64_t w = lo; w <= hi; ++w) {
      std::size_t c = id(q, w);
      acc[c] = accepts(q, w);
      cont[c] = !acc[c] && phi[q];
      if (!cont[c]) continue;
      for (auto [p, dlt] : out[q]) {
        std::size_t e = id(p, clamp(w, dlt));
        succ[c].push_back(e);
        pred[e].push_back(c);
      }
    }
  std::vector<char> val(total, 0);
  std::vector<std::size_t> work;
  if (!universal) {
    for (std::size_t c = 0; c < total; ++c)
      if (acc[c]) val[c] = 1, work.push_back(c);
    while (!work.empty()) {
      std::size_t e = work.back();
      work.pop_back();
      for (auto c : pred[e])
        if (!val[c]) val[c] = 1, work.push_back(c);
    }
  } else {
    // Failing configurations: reach a non-accepting !phi one, or stay
    // forever among continuing ones.
    std::vector<char> fail(total, 0);
    for (std::size_t c = 0; c < total; ++c)
      if (!acc[c] && !cont[c]) fail[c] = 1, work.push_back(c);
    std::vector<int> live(total, 0);
    std::vector<char> stay(total, 0);
    for (std::size_t c = 0; c < total; ++c) {
      stay[c] = cont[c];
      for (auto e : succ[c]) live[c] += cont[e] ? 1 : 0;
    }
    std::vector<std::size_t> drop;
    for (std::size_t c = 0; c < total; ++c)
      if (stay[c] && live[c] == 0) stay[c] = 0, drop.push_back(c);
    while (!drop.empty()) {
      std::size_t e = drop.back();
      drop.pop_back();
      for (auto c : pred[e])
        if (stay[c] && --live[c] == 0) stay[c] = 0, drop.push_back(c);
    }
    for (std::size_t c = 0; c < total; ++c)
      if (stay[c] && !fail[c]) fail[c] = 1, work.push_back(c);
    while (!work.empty()) {
      std::size_t e = work.back();
      work.pop_back();
      for (auto c : pred[e])
        if (!fail[c]) fail[c] = 1, work.push_back(c);
    }
    for (std::size_t c = 0; c < total; ++c) val[c] = !fail[c];
  }
  StateSet r(n);
  for (int q = 0; q < n; ++q) r.set(q, val[id(q, 0)]);
  return r;
}

}  // namespace detail

inline std::int64_t oracle_window(int n, std::int64_t k) { return std::abs(k) + 2LL * n * n + 4LL * n + 2; }

inline StateSet oracle_tctl(const DurationalKS& d, bool universal, const StateSet& phi, const StateSet& psi, Cmp cmp,
                            std::int64_t k) {
  std::int64_t w = oracle_window(d.base.size(), k);
  StateSet a = detail::windowed_until(d, universal, phi, psi, cmp, k, w);
  StateSet b = detail::windowed_until(d, universal, phi, psi, cmp, k, 2 * w);
  if (!(a == b)) throw cctl_error("windowed oracle: verdict changed when the window doubled");
  return a;
}

// Full formula evaluation with oracle_tctl for every constrained modality.
inline StateSet oracle_tctl_formula(const DurationalKS& d, Formula f) {
  LabelingTable t;
  return label_formula(d.base, f, t, [&](Formula g, const LabelingTable& tab) {
    StateSet out(d.base.size());
    if (ctl_until(d.base, g, tab, out) && !is_next(g)) return out;
    std::int64_t k;
    Cmp cmp;
    if (is_next(g)) {
      cmp = Cmp::Eq;
      k = 1;
    } else {
      Constraint c = g.constraint();
      if (!c.is(CKind::Atom) || c.terms().size() != 1 || !c.terms()[0].counted.is(FKind::True) ||
          c.terms()[0].coeff != 1)
        throw fragment_error("oracle expects {#TT ~ k} constraints");
      cmp = c.cmp();
      k = c.bound();
    }
    return oracle_tctl(d, g.is(FKind::AU), tab.at(g.lhs()), tab.at(g.rhs()), cmp, k);
  });
}

// ---------------------------------------------------------------------------
// Exhaustive search over all total structures with at most max_states
// states labelled by subsets of aps; returns a model accepted at state 0.

inline std::optional<KripkeStructure> small_model_search(
    const std::vector<std::string>& aps, int max_states,
    const std::function<bool(const KripkeStructure&, int)>& holds) {
  for (int n = 1; n <= max_states; ++n) {
    const std::uint64_t label_space = 1ULL << (aps.size() * n);
    const std::uint64_t succ_space = (1ULL << n) - 1;  // nonempty successor sets
    std::uint64_t edge_space = 1;
    for (int i = 0; i < n; ++i) edge_space *= succ_space;
    for (std::uint64_t lab = 0; lab < label_space; ++lab)
      for (std::uint64_t e = 0; e < edge_space; ++e) {
        KripkeStructure s;
        for (const auto& a : aps) s.add_ap(a);
        for (int q = 0; q < n; ++q) {
          std::vector<std::string> l;
          for (std::size_t a = 0; a < aps.size(); ++a)
            if ((lab >> (q * aps.size() + a)) & 1ULL) l.push_back(aps[a]);
          s.add_state("s" + std::to_string(q), l);
        }
        std::uint64_t code = e;
        for (int q = 0; q < n; ++q) {
          std::uint64_t set = code % succ_space + 1;
          code /= succ_space;
          for (int p = 0; p < n; ++p)
            if ((set >> p) & 1ULL) s.add_edge(q, p);
        }
        if (holds(s, 0)) return s;
      }
  }
  return std::nullopt;
}

}  // namespace cctl::harness
