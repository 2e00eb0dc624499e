#pragma once

// Variable bookkeeping for CCTLv: the binding environment (each variable is
// bound once, so the environment is global to the formula), a dependency
// order and the relevant variables of every subformula.

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cctl/fragment.hpp"
#include "cctl/parser.hpp"

namespace cctl {

// A valuation restricted to some variable set: (variable index, value)
// pairs sorted by index.
using Valuation = std::vector<std::pair<int, std::int64_t>>;

class VarContext {
 public:
  // Validates f as a closed, well-formed CCTLv formula.
  explicit VarContext(Formula f, std::int64_t cap_extra = 0) {
    check_wellformed(f);
    auto free = free_vars(f);
    if (!free.empty()) throw wellformedness_error("free variable '" + *free.begin() + "'");
    std::map<std::string, std::set<std::string>> deps;
    for_each_subformula(f, [&](Formula g) {
      if (g.is(FKind::Bind)) {
        eps_by_name_[g.name()] = g.counted();
        auto& d = deps[g.name()];
        for_each_subformula(g.counted(), [&](Formula h) {
          if (h.is(FKind::VarCmp))
            for (const auto& t : h.vterms()) d.insert(t.var);
        });
      }
      if (g.is(FKind::VarCmp))
        for (const auto& t : g.vterms())
          if (t.coeff < 0) throw undecidable_error(classify_fragment(f).name);
    });
    // Topological order: dependencies first, ties by name.
    std::map<std::string, int> state;
    std::function<void(const std::string&)> visit = [&](const std::string& z) {
      if (state[z] == 2) return;
      state[z] = 2;
      for (const auto& y : deps[z]) visit(y);
      index_[z] = static_cast<int>(names_.size());
      names_.push_back(z);
    };
    for (const auto& [z, _] : deps) visit(z);
    for (const auto& z : names_) eps_.push_back(eps_by_name_.at(z));
    k_ = max_abs_constant(f);
    cap_ = checked_add(checked_add(k_, 1), cap_extra);
  }

  std::int64_t max_constant() const { return k_; }
  std::int64_t cap() const { return cap_; }  // values saturate here
  int var_count() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  int index(const std::string& z) const { return index_.at(z); }
  Formula eps(int i) const { return eps_[i]; }

  // Relevant variables, sorted by index.
  const std::vector<int>& rv(Formula g) {
    auto it = rv_.find(g);
    if (it != rv_.end()) return it->second;
    std::set<int> s;
    auto add = [&](Formula h) {
      const auto& r = rv(h);
      s.insert(r.begin(), r.end());
    };
    switch (g.kind()) {
      case FKind::VarCmp:
        for (const auto& t : g.vterms()) {
          int z = index(t.var);
          s.insert(z);
          add(eps_[z]);
        }
        break;
      case FKind::Not:
      case FKind::Now: add(g.child()); break;
      case FKind::And:
      case FKind::Or:
      case FKind::EU:
      case FKind::AU:
        add(g.lhs());
        add(g.rhs());
        break;
      case FKind::Bind:
        add(g.body());
        s.erase(index(g.name()));
        break;
      default: break;
    }
    return rv_[g] = std::vector<int>(s.begin(), s.end());
  }

  Valuation restrict(const Valuation& v, Formula g) {
    const auto& keep = rv(g);
    Valuation r;
    std::size_t i = 0;
    for (const auto& [z, val] : v) {
      while (i < keep.size() && keep[i] < z) ++i;
      if (i < keep.size() && keep[i] == z) r.push_back({z, val});
    }
    return r;
  }

  static std::int64_t value(const Valuation& v, int z) {
    for (const auto& [x, val] : v)
      if (x == z) return val;
    throw cctl_error("internal: variable outside valuation");
  }

  bool eval(Formula varcmp, const Valuation& v) const {
    std::int64_t s = 0;
    for (const auto& t : varcmp.vterms()) s = checked_add(s, checked_mul(t.coeff, value(v, index_.at(t.var))));
    return compare(s, varcmp.cmp(), varcmp.bound());
  }

 private:
  std::map<std::string, Formula> eps_by_name_;
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<Formula> eps_;
  std::unordered_map<Formula, std::vector<int>> rv_;
  std::int64_t k_ = 0, cap_ = 1;
};

}  // namespace cctl
