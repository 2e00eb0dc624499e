#pragma once

// Translations into CTL (for CCTLb and CCTLv) and from cumulative CCTLc
// into CCTLv. Outputs are hash-consed DAGs; their tree form can be
// exponentially larger.

#include <deque>
#include <map>
#include <tuple>

#include "cctl/fragment.hpp"
#include "cctl/vars.hpp"

namespace cctl {

namespace detail {

class CctlbTranslator {
 public:
  Formula tr(Formula f) {
    auto it = memo_.find(f);
    if (it != memo_.end()) return it->second;
    Formula r;
    switch (f.kind()) {
      case FKind::True:
      case FKind::False:
      case FKind::Atom: r = f; break;
      case FKind::Not: r = s_not(tr(f.child())); break;
      case FKind::And: r = s_and(tr(f.lhs()), tr(f.rhs())); break;
      case FKind::Or: r = s_or(tr(f.lhs()), tr(f.rhs())); break;
      case FKind::EU:
      case FKind::AU: {
        bool universal = f.is(FKind::AU);
        Constraint c = f.constraint();
        if (is_next(f)) {
          r = s_next(universal, tr(f.rhs()));
        } else if (c.null() || c.is(CKind::True)) {
          r = s_until(universal, tr(f.lhs()), tr(f.rhs()));
        } else if (c.is(CKind::False)) {
          r = mk_false();
        } else {
          for (auto a : constraint_atoms(c))
            for (const auto& t : a.terms())
              if (t.coeff < 0) throw fragment_error("negative coefficients have no CTL translation: " + to_string(f));
          // Move the left operand into the constraint: #!phi = 0.
          Constraint c2 = f.lhs().is(FKind::True) ? c : c_and(c, c_atom({Term{1, mk_not(f.lhs())}}, Cmp::Eq, 0));
          r = ef(universal, simp(c2), tr(f.rhs()));
        }
        break;
      }
      default: throw fragment_error("not a CCTLb formula: " + to_string(f));
    }
    memo_[f] = r;
    return r;
  }

 private:
  struct Pos {
    std::size_t atom, term;
    Formula counted;
  };

  // Translation of E/A TT U{c} target, c in canonical form.
  Formula ef(bool universal, Constraint c, Formula target) {
    if (c.is(CKind::False)) return mk_false();
    if (c.is(CKind::True)) return s_until(universal, mk_true(), target);
    auto key = std::make_tuple(universal, c.id(), target.id());
    auto it = ef_memo_.find(key);
    if (it != ef_memo_.end()) return it->second;
    std::vector<Pos> pos;
    auto atoms = constraint_atoms(c);
    Formula guard = mk_true();
    std::set<Formula> seen;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = 0; j < atoms[i].terms().size(); ++j) {
        Formula g = atoms[i].terms()[j].counted;
        pos.push_back({i, j, g});
        if (seen.insert(g).second) guard = s_and(guard, s_not(tr(g)));
      }
    std::map<std::pair<std::size_t, std::uint32_t>, Formula> psi_memo;
    std::function<Formula(std::size_t, Constraint)> psi = [&](std::size_t p, Constraint cur) -> Formula {
      auto k = std::make_pair(p, cur.id());
      auto pit = psi_memo.find(k);
      if (pit != psi_memo.end()) return pit->second;
      Formula r;
      if (p == pos.size()) {
        r = cur == c ? mk_false() : s_next(universal, ef(universal, simp(cur), target));
      } else {
        Formula g = tr(pos[p].counted);
        Formula taken = psi(p + 1, decr(cur, pos[p].atom, pos[p].term));
        Formula skipped = psi(p + 1, cur);
        r = s_or(s_and(g, taken), s_and(s_not(g), skipped));
      }
      psi_memo[k] = r;
      return r;
    };
    Formula step = psi(0, c);
    Formula goal = holds_on_empty(c) ? s_or(target, step) : step;
    Formula r = s_until(universal, guard, goal);
    ef_memo_[key] = r;
    return r;
  }

  std::unordered_map<Formula, Formula> memo_;
  std::map<std::tuple<bool, std::uint32_t, std::uint32_t>, Formula> ef_memo_;
};

class CctlvTranslator {
 public:
  explicit CctlvTranslator(VarContext& ctx) : ctx_(ctx) {}

  Formula tr(Formula f, const Valuation& v) {
    auto key = std::make_pair(f.id(), v);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Formula r;
    switch (f.kind()) {
      case FKind::True:
      case FKind::False:
      case FKind::Atom: r = f; break;
      case FKind::Not: r = s_not(sub(f.child(), v)); break;
      case FKind::And: r = s_and(sub(f.lhs(), v), sub(f.rhs(), v)); break;
      case FKind::Or: r = s_or(sub(f.lhs(), v), sub(f.rhs(), v)); break;
      case FKind::VarCmp: r = ctx_.eval(f, v) ? mk_true() : mk_false(); break;
      case FKind::Bind: {
        Valuation w = v;
        int z = ctx_.index(f.name());
        w.insert(std::upper_bound(w.begin(), w.end(), std::make_pair(z, std::int64_t{0})), {z, 0});
        r = sub(f.body(), w);
        break;
      }
      case FKind::EU:
      case FKind::AU: r = until(f, v); break;
      case FKind::Now: throw fragment_error("N must be translated away first");
    }
    memo_[key] = r;
    return r;
  }

 private:
  Formula sub(Formula g, const Valuation& v) { return tr(g, ctx_.restrict(v, g)); }

  // Value of a counted formula for variable z at the current state.
  Formula counts(int z, const Valuation& v) { return sub(ctx_.eps(z), v); }

  // Branches over which unsaturated variables the current state increments.
  // `leaf` maps the successor valuation to a formula.
  template <class Leaf>
  Formula scan(const Valuation& v, std::size_t i, Valuation next, Leaf&& leaf) {
    while (i < v.size() && v[i].second >= ctx_.cap()) ++i;
    if (i == v.size()) return leaf(next);
    Formula c = counts(v[i].first, v);
    Valuation bumped = next;
    bumped[i].second += 1;
    Formula yes = scan(v, i + 1, bumped, leaf);
    Formula no = scan(v, i + 1, next, leaf);
    return s_or(s_and(c, yes), s_and(s_not(c), no));
  }

  Formula until(Formula f, const Valuation& v) {
    bool universal = f.is(FKind::AU);
    if (is_next(f)) {
      return scan(v, 0, v, [&](const Valuation& w) { return s_next(universal, sub(f.rhs(), w)); });
    }
    if (!f.constraint().null() && !f.constraint().is(CKind::True))
      throw fragment_error("counting constraint inside a CCTLv formula: " + to_string(f));
    Formula phi = sub(f.lhs(), v), psi = sub(f.rhs(), v);
    Formula theta = mk_true();
    for (const auto& [z, val] : v)
      if (val < ctx_.cap()) theta = s_and(theta, s_not(counts(z, v)));
    Formula gamma = scan(v, 0, v, [&](const Valuation& w) {
      return w == v ? mk_false() : s_next(universal, tr(f, w));
    });
    return s_until(universal, s_and(phi, theta), s_or(psi, s_and(phi, gamma)));
  }

  VarContext& ctx_;
  std::map<std::pair<std::uint32_t, Valuation>, Formula> memo_;
};

class CumulativeTranslator {
 public:
  explicit CumulativeTranslator(Formula f) {
    for_each_subformula(f, [&](Formula g) {
      if (g.is(FKind::Bind) || g.is(FKind::VarCmp))
        throw fragment_error("explicit variables inside a cumulative formula");
    });
  }

  Formula now(Formula phi) {
    auto it = now_memo_.find(phi);
    if (it != now_memo_.end()) return it->second;
    std::vector<Formula> counted = counted_at_top(phi);
    std::sort(counted.begin(), counted.end(), [](Formula a, Formula b) {
      auto sa = dag_size(a), sb = dag_size(b);
      return sa != sb ? sa < sb : a.id() < b.id();
    });
    const int tag = next_tag_++;
    scopes_.emplace_back();
    const std::size_t sc = scopes_.size() - 1;
    for (std::size_t i = 0; i < counted.size(); ++i)
      scopes_[sc][counted[i]] = "n" + std::to_string(tag) + "_" + std::to_string(i);
    Formula body = bar(phi, sc);
    for (std::size_t i = counted.size(); i-- > 0;)
      body = mk_bind(scopes_[sc][counted[i]], bar(counted[i], sc), body);
    now_memo_[phi] = body;
    return body;
  }

 private:
  // Counted formulas occurring in phi outside nested N.
  static std::vector<Formula> counted_at_top(Formula phi) {
    std::set<Formula> out, seen;
    std::function<void(Formula)> go = [&](Formula g) {
      if (!seen.insert(g).second) return;
      switch (g.kind()) {
        case FKind::Not: go(g.child()); break;
        case FKind::And:
        case FKind::Or:
          go(g.lhs());
          go(g.rhs());
          break;
        case FKind::EU:
        case FKind::AU:
          go(g.lhs());
          go(g.rhs());
          if (!is_next(g))
            for (auto a : constraint_atoms(g.constraint()))
              for (const auto& t : a.terms()) {
                out.insert(t.counted);
                go(t.counted);
              }
          break;
        default: break;
      }
    };
    go(phi);
    return {out.begin(), out.end()};
  }

  Formula cbar(Constraint c, std::size_t sc) {
    switch (c.kind()) {
      case CKind::True: return mk_true();
      case CKind::False: return mk_false();
      case CKind::Atom: {
        std::vector<VarTerm> ts;
        for (const auto& t : c.terms()) ts.push_back({t.coeff, scopes_[sc].at(t.counted)});
        return mk_varcmp(std::move(ts), c.cmp(), c.bound());
      }
      case CKind::Not: return mk_not(cbar(c.child(), sc));
      case CKind::And: return mk_and(cbar(c.lhs(), sc), cbar(c.rhs(), sc));
      case CKind::Or: return mk_or(cbar(c.lhs(), sc), cbar(c.rhs(), sc));
    }
    return mk_false();
  }

  Formula bar(Formula g, std::size_t sc) {
    auto key = std::make_pair(g.id(), sc);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Formula r;
    switch (g.kind()) {
      case FKind::True:
      case FKind::False:
      case FKind::Atom: r = g; break;
      case FKind::Not: r = mk_not(bar(g.child(), sc)); break;
      case FKind::And: r = mk_and(bar(g.lhs(), sc), bar(g.rhs(), sc)); break;
      case FKind::Or: r = mk_or(bar(g.lhs(), sc), bar(g.rhs(), sc)); break;
      case FKind::Now: r = now(g.child()); break;
      case FKind::EU:
      case FKind::AU: {
        bool universal = g.is(FKind::AU);
        Constraint c = g.constraint();
        if (is_next(g))
          r = universal ? mk_ax(bar(g.rhs(), sc)) : mk_ex(bar(g.rhs(), sc));
        else if (c.null())
          r = mk_until(universal, bar(g.lhs(), sc), bar(g.rhs(), sc));
        else
          r = mk_until(universal, bar(g.lhs(), sc), mk_and(cbar(c, sc), bar(g.rhs(), sc)));
        break;
      }
      default: throw fragment_error("unexpected node in a cumulative formula");
    }
    memo_[key] = r;
    return r;
  }

  int next_tag_ = 0;
  std::deque<std::map<Formula, std::string>> scopes_;
  std::map<std::pair<std::uint32_t, std::size_t>, Formula> memo_;
  std::unordered_map<Formula, Formula> now_memo_;
};

}  // namespace detail

// CCTLb (nonnegative coefficients) to an equivalent CTL formula.
inline Formula translate_cctlb_to_ctl(Formula f) {
  detail::CctlbTranslator t;
  return t.tr(f);
}

// Closed CCTLv (nonnegative coefficients) to an equivalent CTL formula.
// Variable values saturate at K+1 (+cap_extra), K the largest constant.
inline Formula translate_cctlv_to_ctl(Formula f, std::int64_t cap_extra = 0) {
  VarContext ctx(f, cap_extra);
  detail::CctlvTranslator t(ctx);
  return t.tr(f, {});
}

// Cumulative CCTLc to CCTLv; the whole formula is read under an implicit N.
inline Formula translate_cctlc_to_cctlv(Formula f) {
  detail::CumulativeTranslator t(f);
  return t.now(f);
}

// Places N in front of every constrained modality, so that a CCTL formula
// read cumulatively keeps its per-modality counting.
inline Formula guard_with_now(Formula f) {
  std::unordered_map<Formula, Formula> memo;
  std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    Formula r;
    switch (g.kind()) {
      case FKind::Not: r = mk_not(go(g.child())); break;
      case FKind::And: r = mk_and(go(g.lhs()), go(g.rhs())); break;
      case FKind::Or: r = mk_or(go(g.lhs()), go(g.rhs())); break;
      case FKind::EU:
      case FKind::AU: {
        Formula u = mk_until(g.is(FKind::AU), go(g.lhs()), go(g.rhs()), map_counted(g.constraint(), go));
        r = (g.constraint().null() || is_next(g)) ? u : mk_now(u);
        break;
      }
      case FKind::Bind:
      case FKind::VarCmp:
      case FKind::Now: throw fragment_error("guard_with_now expects a CCTL formula");
      default: r = g;
    }
    memo[g] = r;
    return r;
  };
  return go(f);
}

}  // namespace cctl
