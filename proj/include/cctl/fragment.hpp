#pragma once

#include <string>

#include "cctl/formula.hpp"

namespace cctl {

enum class Decidability { Decidable, PseudoPolynomial, Undecidable };

inline const char* to_string(Decidability d) {
  switch (d) {
    case Decidability::Decidable: return "decidable";
    case Decidability::PseudoPolynomial: return "pseudo-polynomial";
    case Decidability::Undecidable: return "undecidable";
  }
  return "?";
}

struct FragmentDescriptor {
  bool boolean_constraints = false;   // some modality constraint is not a single atom
  bool non_unit_coefficients = false; // some coefficient with |a| != 1
  bool negative_coefficients = false;
  bool uses_variables = false;        // binders or variable constraints
  bool uses_cumulative = false;       // contains N
  bool uses_counting = false;         // some constraint besides the next-step one
  bool closed = true;                 // no free variables
  std::string name;
  Decidability mc_status = Decidability::Decidable;
  Decidability sat_status = Decidability::Decidable;
  std::string mc_complexity;
};

inline FragmentDescriptor classify_fragment(Formula f) {
  FragmentDescriptor d;
  auto note_coeff = [&](std::int64_t a) {
    if (a < 0) d.negative_coefficients = true;
    if (a != 1 && a != -1) d.non_unit_coefficients = true;
  };
  for_each_subformula(f, [&](Formula g) {
    switch (g.kind()) {
      case FKind::Bind: d.uses_variables = true; break;
      case FKind::VarCmp:
        d.uses_variables = true;
        for (const auto& t : g.vterms()) note_coeff(t.coeff);
        break;
      case FKind::Now: d.uses_cumulative = true; break;
      case FKind::EU:
      case FKind::AU: {
        Constraint c = g.constraint();
        if (c.null() || is_next(g)) break;
        d.uses_counting = true;
        if (!c.is(CKind::Atom)) d.boolean_constraints = true;
        for (auto a : constraint_atoms(c))
          for (const auto& t : a.terms()) note_coeff(t.coeff);
        break;
      }
      default: break;
    }
  });
  d.closed = free_vars(f).empty();
  const std::string pm = d.negative_coefficients ? "±" : "";
  const std::string one = d.non_unit_coefficients ? "" : "1";
  if (d.uses_cumulative) {
    d.name = std::string("CCTLc") + (d.boolean_constraints ? "b" : "") + pm + (d.uses_counting ? one : "");
  } else if (d.uses_variables) {
    d.name = "CCTLv";
  } else if (!d.uses_counting) {
    d.name = "CTL";
  } else {
    d.name = std::string("CCTL") + (d.boolean_constraints ? "b" : "") + pm + one;
  }

  if (d.negative_coefficients) {
    d.sat_status = Decidability::Undecidable;
    if (d.uses_cumulative || d.uses_variables || d.boolean_constraints) {
      d.mc_status = Decidability::Undecidable;
      d.mc_complexity = "undecidable";
    } else if (d.non_unit_coefficients) {
      d.mc_status = Decidability::PseudoPolynomial;
      d.mc_complexity = "EXPTIME, Delta2P-hard";
    } else {
      d.mc_complexity = "P-complete";
    }
  } else if (d.uses_cumulative || d.uses_variables) {
    d.mc_complexity = "PSPACE-complete";
  } else if (!d.uses_counting) {
    d.mc_complexity = "P-complete";
  } else if (!d.boolean_constraints && !d.non_unit_coefficients) {
    d.mc_complexity = "P-complete";
  } else {
    d.mc_complexity = "Delta2P-complete";
  }
  return d;
}

// E phi U{C} psi  ==  E TT U{C & #!phi = 0} psi, likewise for A. Applied to
// every constrained until except next-step ones; unconstrained ones are kept.
inline Formula rewrite_until_to_f(Formula f) {
  std::unordered_map<Formula, Formula> memo;
  std::function<Formula(Formula)> go;
  std::function<Constraint(Constraint)> goc = [&](Constraint c) -> Constraint {
    switch (c.kind()) {
      case CKind::Atom: {
        std::vector<Term> ts;
        for (const auto& t : c.terms()) ts.push_back({t.coeff, go(t.counted)});
        return c_atom(std::move(ts), c.cmp(), c.bound());
      }
      case CKind::Not: return c_not(goc(c.child()));
      case CKind::And: return c_and(goc(c.lhs()), goc(c.rhs()));
      case CKind::Or: return c_or(goc(c.lhs()), goc(c.rhs()));
      default: return c;
    }
  };
  go = [&](Formula g) -> Formula {
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    Formula r = g;
    switch (g.kind()) {
      case FKind::Not: r = mk_not(go(g.child())); break;
      case FKind::Now: r = mk_now(go(g.child())); break;
      case FKind::And: r = mk_and(go(g.lhs()), go(g.rhs())); break;
      case FKind::Or: r = mk_or(go(g.lhs()), go(g.rhs())); break;
      case FKind::Bind: r = mk_bind(g.name(), go(g.counted()), go(g.body())); break;
      case FKind::EU:
      case FKind::AU: {
        bool universal = g.is(FKind::AU);
        Formula l = go(g.lhs()), rr = go(g.rhs());
        Constraint c = g.constraint();
        if (c.null() || is_next(g)) {
          r = mk_until(universal, l, rr, c);
        } else {
          Formula neg = l.is(FKind::True) ? mk_false() : mk_not(l);
          r = mk_until(universal, mk_true(), rr, c_and(goc(c), c_atom({Term{1, neg}}, Cmp::Eq, 0)));
        }
        break;
      }
      default: break;
    }
    memo[g] = r;
    return r;
  };
  return go(f);
}

}  // namespace cctl
