#pragma once

// Engine selection by fragment, following the complexity landscape:
// CTL labelling, the polynomial DKS-based engine for single-sum
// constraints, the capped-counter product for the rest of the nonnegative
// fragments, the CCTLv checker for variables, and an undecidability guard.

#include <string>
#include <variant>

#include "cctl/cctlv.hpp"
#include "cctl/counting.hpp"
#include "cctl/dks.hpp"
#include "cctl/harness/generators.hpp"
#include "cctl/pm.hpp"
#include "cctl/translate.hpp"

namespace cctl {

enum class Engine { Auto, Ctl, Counting, Polytime, Translate, Cctlv };

inline Engine parse_engine(const std::string& s) {
  if (s == "auto") return Engine::Auto;
  if (s == "ctl") return Engine::Ctl;
  if (s == "counting") return Engine::Counting;
  if (s == "polytime") return Engine::Polytime;
  if (s == "translate") return Engine::Translate;
  if (s == "cctlv") return Engine::Cctlv;
  throw cctl_error("unknown engine '" + s + "'");
}

struct CheckResult {
  StateSet sat;
  std::string engine;
  FragmentDescriptor fragment;
};

inline bool single_sum_constraints(Formula f) {
  bool ok = true;
  for_each_subformula(f, [&](Formula g) {
    if ((g.is(FKind::EU) || g.is(FKind::AU)) && !is_next(g) && !g.constraint().null() &&
        !g.constraint().is(CKind::True) && !g.constraint().is(CKind::False) && !g.constraint().is(CKind::Atom))
      ok = false;
  });
  return ok;
}

inline CheckResult check_formula(const KripkeStructure& s, Formula f, Engine e = Engine::Auto) {
  CheckResult r;
  r.fragment = classify_fragment(f);
  const FragmentDescriptor& d = r.fragment;
  if (d.mc_status == Decidability::Undecidable) throw undecidable_error(d.name);
  if (d.uses_variables && !d.closed) throw wellformedness_error("formula has free variables");
  auto run = [&](const char* name, auto&& fn) {
    r.engine = name;
    r.sat = fn();
    return r;
  };
  switch (e) {
    case Engine::Ctl: return run("ctl", [&] { return mc_ctl(s, f); });
    case Engine::Counting: return run("counting", [&] { return mc_counting(s, f); });
    case Engine::Polytime: return run("polytime", [&] { return mc_cctl_pm(s, f); });
    case Engine::Translate:
      return run("translate", [&] {
        Formula g = d.uses_cumulative   ? translate_cctlv_to_ctl(translate_cctlc_to_cctlv(f))
                    : d.uses_variables ? translate_cctlv_to_ctl(f)
                                       : translate_cctlb_to_ctl(f);
        return mc_ctl(s, g);
      });
    case Engine::Cctlv:
      return run("cctlv", [&] { return d.uses_variables && !d.uses_cumulative ? check_cctlv(s, f) : mc_cctlc(s, f); });
    case Engine::Auto: break;
  }
  if (d.uses_cumulative) return run("cctlc", [&] { return mc_cctlc(s, f); });
  if (d.uses_variables) return run("cctlv", [&] { return check_cctlv(s, f); });
  if (!d.uses_counting) return run("ctl", [&] { return mc_ctl(s, f); });
  if (d.negative_coefficients || (!d.non_unit_coefficients && single_sum_constraints(f)))
    return run(d.non_unit_coefficients ? "pseudo-polynomial" : "polytime", [&] { return mc_cctl_pm(s, f); });
  return run("counting", [&] { return mc_counting(s, f); });
}

// DKS queries: native for weights in {-1,0,1}, otherwise through the
// embedding into a Kripke structure.
inline CheckResult check_formula(const DurationalKS& dks, Formula f, Engine e = Engine::Auto) {
  CheckResult r;
  r.fragment = classify_fragment(f);
  if (dks.weight_class() != WeightClass::Arbitrary && (e == Engine::Auto || e == Engine::Polytime)) {
    r.engine = "tctl-dks";
    r.sat = mc_tctl_dks(dks, f);
    return r;
  }
  harness::DksEmbedding emb = harness::gen_dks_embedding(dks);
  Formula g = harness::embed_formula(emb, f);
  bool negative = false;
  for (auto w : emb.weights) negative = negative || w < 0;
  r.engine = negative ? "dks-embedding+pseudo-polynomial" : "dks-embedding+counting";
  StateSet inner = negative ? mc_cctl_pm(emb.ks, g) : mc_counting(emb.ks, g);
  r.sat = StateSet(dks.base.size());
  for (int q = 0; q < dks.base.size(); ++q) r.sat.set(q, inner[emb.original[q]]);
  return r;
}

inline CheckResult check_formula(const Model& m, Formula f, Engine e = Engine::Auto) {
  return std::visit([&](const auto& x) { return check_formula(x, f, e); }, m);
}

}  // namespace cctl
