#pragma once

// Satisfiability for the decidable counting logics: translate to CTL, run
// the tableau, and re-check the model with the engine for the input logic.

#include <optional>
#include <string>

#include "cctl/cctlv.hpp"
#include "cctl/counting.hpp"
#include "cctl/tableau.hpp"
#include "cctl/translate.hpp"

namespace cctl {

struct SatOptions {
  TableauOptions tableau;
  bool minimize = true;
};

struct SatResult {
  SatStatus status = SatStatus::Unsat;
  std::optional<KripkeStructure> model;
  int initial = 0;
  std::string fragment;
  std::size_t ctl_dag_size = 0;
  std::size_t hintikka_sets = 0;
};

inline SatResult sat_cctl(Formula f, const SatOptions& opt = {}) {
  SatResult r;
  FragmentDescriptor d = classify_fragment(f);
  r.fragment = d.name;
  if (d.sat_status == Decidability::Undecidable) {
    r.status = SatStatus::Undecidable;
    return r;
  }
  if (d.uses_variables && !d.closed) throw wellformedness_error("formula has free variables");
  Formula ctl;
  std::function<bool(const KripkeStructure&, int)> holds;
  if (d.uses_cumulative) {
    ctl = translate_cctlv_to_ctl(translate_cctlc_to_cctlv(f));
    holds = [f](const KripkeStructure& m, int q) { return mc_cctlc(m, f)[q]; };
  } else if (d.uses_variables) {
    ctl = translate_cctlv_to_ctl(f);
    holds = [f](const KripkeStructure& m, int q) { return check_cctlv(m, f)[q]; };
  } else {
    ctl = translate_cctlb_to_ctl(f);
    holds = [f](const KripkeStructure& m, int q) { return mc_counting(m, f)[q]; };
  }
  r.ctl_dag_size = dag_size(ctl);
  CtlSatResult c = sat_ctl(ctl, opt.tableau);
  r.status = c.status;
  r.hintikka_sets = c.hintikka_sets;
  if (c.status != SatStatus::Sat) return r;
  if (!holds(*c.model, c.initial)) throw cctl_error("internal: witness model fails the input formula");
  r.model = opt.minimize ? minimize_witness(*c.model, c.initial, holds) : *c.model;
  r.initial = 0;
  if (!opt.minimize) r.initial = c.initial;
  return r;
}

}  // namespace cctl
