// Command-line front end: check, translate, sat, gen, oracle.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "cctl/cctl.hpp"

using namespace cctl;
using json = nlohmann::json;

namespace {

constexpr int kExitError = 2;
constexpr int kExitUndecidable = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cctl_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula load_formula(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return parse_formula(read_file(arg));
  return parse_formula(arg);
}

const KripkeStructure& base_of(const Model& m) {
  if (auto* k = std::get_if<KripkeStructure>(&m)) return *k;
  return std::get<DurationalKS>(m).base;
}

int state_index(const Model& m, const std::string& name) {
  const KripkeStructure& b = base_of(m);
  if (name.empty()) return 0;
  auto q = b.find(name);
  if (!q) throw model_error("unknown state " + name);
  return *q;
}

std::string join_states(const KripkeStructure& s, const std::vector<int>& run) {
  std::string out;
  for (int q : run) out += (out.empty() ? "" : " ") + s.name(q);
  return out;
}

struct CheckArgs {
  std::string model, formula, state, engine = "auto";
  bool json_out = false, dump_gadget = false, dump_reduction = false;
};

int run_check(const CheckArgs& a) {
  auto t0 = std::chrono::steady_clock::now();
  Model m = load_model(a.model);
  Formula f = load_formula(a.formula);
  int q = state_index(m, a.state);
  CheckResult r = check_formula(m, f, parse_engine(a.engine));
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const KripkeStructure& b = base_of(m);
  bool verdict = r.sat[q];

  std::vector<std::string> witness;
  if (auto* ks = std::get_if<KripkeStructure>(&m);
      ks && f.is(FKind::EU) && !is_next(f) && !r.fragment.negative_coefficients && !r.fragment.uses_variables &&
      !r.fragment.uses_cumulative && verdict) {
    if (auto w = counting_witness(*ks, f, q)) witness.push_back(join_states(*ks, *w));
  }

  if (a.dump_gadget) {
    const auto* d = std::get_if<DurationalKS>(&m);
    auto dc = f.is(FKind::AU) ? duration_constraint(f.constraint()) : std::nullopt;
    if (!d || !dc) throw cctl_error("--dump-gadget needs a DKS and a top-level A(_ U{#TT ~ k} _)");
    LabelingTable t;
    mc_tctl_dks(*d, f, t);
    AuGadget g = build_au_gadget(d->base, d->edges(), t.at(f.lhs()), t.at(f.rhs()), dc->first, dc->second);
    std::cout << print_model(g.ks) << "# query: " << to_string(g.query) << "\n";
  }
  if (a.dump_reduction) {
    const auto* ks = std::get_if<KripkeStructure>(&m);
    if (!ks || !f.is_until() || f.constraint().null() || !f.constraint().is(CKind::Atom))
      throw cctl_error("--dump-reduction needs a Kripke structure and a top-level until with one atomic constraint");
    LabelingTable t;
    mc_ctl(*ks, mk_and(f.lhs(), f.rhs()), t);
    for (auto atom : constraint_atoms(f.constraint()))
      for (const auto& term : atom.terms()) mc_counting(*ks, term.counted, t);
    PmReduction red = reduce_to_dks(*ks, f.constraint(), t, t.at(f.lhs()), t.at(f.rhs()));
    std::cout << print_model(red.dks);
  }

  if (a.json_out) {
    json j;
    j["verdict"] = verdict;
    j["state"] = b.name(q);
    j["engine"] = r.engine;
    j["fragment"] = r.fragment.name;
    j["witness"] = witness;
    std::vector<std::string> sat;
    for (int p = 0; p < b.size(); ++p)
      if (r.sat[p]) sat.push_back(b.name(p));
    j["satisfying_states"] = sat;
    j["timings"] = {{"total_ms", ms}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << (verdict ? "true" : "false") << " at " << b.name(q) << "\n";
    std::cout << "engine: " << r.engine << "\nfragment: " << r.fragment.name << "\n";
    std::cout << "states:";
    for (int p = 0; p < b.size(); ++p)
      if (r.sat[p]) std::cout << " " << b.name(p);
    std::cout << "\n";
    for (const auto& w : witness) std::cout << "witness: " << w << "\n";
  }
  return verdict ? 0 : 1;
}

int run_translate(const std::string& formula) {
  Formula f = load_formula(formula);
  FragmentDescriptor d = classify_fragment(f);
  if (d.negative_coefficients) throw undecidable_error(d.name);
  Formula g = d.uses_cumulative  ? translate_cctlv_to_ctl(translate_cctlc_to_cctlv(f))
              : d.uses_variables ? translate_cctlv_to_ctl(f)
                                 : translate_cctlb_to_ctl(f);
  std::cout << to_string(g) << "\n" << "dag-size: " << dag_size(g) << "\n";
  return 0;
}

int run_sat(const std::string& formula, bool json_out) {
  Formula f = load_formula(formula);
  SatResult r = sat_cctl(f);
  if (json_out) {
    json j;
    j["verdict"] = to_string(r.status);
    j["fragment"] = r.fragment;
    if (r.model) j["witness"] = print_model(*r.model);
    std::cout << j.dump(2) << "\n";
  } else if (r.status == SatStatus::Undecidable) {
    std::cout << "UNDECIDABLE " << r.fragment << "\n";
  } else {
    std::cout << to_string(r.status) << "\n";
    if (r.model) std::cout << print_model(*r.model);
  }
  switch (r.status) {
    case SatStatus::Sat: return 0;
    case SatStatus::Unsat: return 1;
    case SatStatus::Undecidable: return kExitUndecidable;
    default: return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checking and satisfiability for counting CTL"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "model-check a formula");
  check->add_option("--model", ca.model, "model file")->required();
  check->add_option("--formula", ca.formula, "formula file or text")->required();
  check->add_option("--state", ca.state, "state whose verdict sets the exit code (default: first)");
  check->add_option("--engine", ca.engine, "auto|ctl|counting|polytime|translate|cctlv");
  check->add_flag("--json", ca.json_out, "machine-readable report");
  check->add_flag("--dump-gadget", ca.dump_gadget, "print the universal-until gadget (DKS input)");
  check->add_flag("--dump-reduction", ca.dump_reduction, "print the chain reduction to a DKS");

  std::string tformula;
  auto* translate = app.add_subcommand("translate", "translate to CTL");
  translate->add_option("--formula", tformula, "formula file or text")->required();

  std::string sformula;
  bool sjson = false;
  auto* sat = app.add_subcommand("sat", "decide satisfiability");
  sat->add_option("--formula", sformula, "formula file or text")->required();
  sat->add_flag("--json", sjson, "machine-readable report");

  auto* gen = app.add_subcommand("gen", "generate reduction instances");
  gen->require_subcommand(1);
  std::uint64_t seed = 1;
  int p = 2, m = 2, clauses = 3;
  auto* snsat = gen->add_subcommand("snsat", "nested SAT instance as model + formula");
  snsat->add_option("--p", p, "blocks");
  snsat->add_option("--m", m, "variables per block");
  snsat->add_option("--clauses", clauses, "clauses per block");
  snsat->add_option("--seed", seed, "random seed");
  auto* qbf = gen->add_subcommand("qbf", "QBF instance as model + CCTLv formula");
  qbf->add_option("--p", p, "quantifier pairs");
  qbf->add_option("--clauses", clauses, "clauses");
  qbf->add_option("--seed", seed, "random seed");
  std::string emodel, eformula;
  auto* embed = gen->add_subcommand("dks-embed", "embed a DKS into a Kripke structure");
  embed->add_option("--model", emodel, "DKS model file")->required();
  embed->add_option("--formula", eformula, "TCTL formula to transform");

  std::string omodel, oformula;
  int horizon = 8;
  auto* oracle = app.add_subcommand("oracle", "prefix-enumeration oracle");
  oracle->add_option("--model", omodel, "model file")->required();
  oracle->add_option("--formula", oformula, "formula file or text")->required();
  oracle->add_option("--horizon", horizon, "maximal prefix length");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return run_check(ca);
    if (*translate) return run_translate(tformula);
    if (*sat) return run_sat(sformula, sjson);
    if (*gen) {
      harness::Rng rng(seed);
      std::cout << "# seed: " << seed << "\n";
      if (*snsat) {
        auto inst = harness::gen_snsat(rng, p, m, clauses);
        auto values = harness::snsat_values(inst);
        std::cout << "# formula: " << to_string(harness::snsat_formula(inst, p)) << "\n# values:";
        for (int i = 0; i < p; ++i) std::cout << " z" << i + 1 << "=" << (values[i] ? 1 : 0);
        std::cout << "\n" << print_model(harness::snsat_structure(inst));
      } else if (*qbf) {
        auto inst = harness::gen_qbf(rng, p, clauses);
        std::cout << "# formula: " << to_string(harness::qbf_formula(inst)) << "\n";
        std::cout << "# truth: " << (harness::qbf_eval(inst) ? "true" : "false") << "\n";
        std::cout << print_model(harness::qbf_structure(inst));
      } else {
        Model mm = load_model(emodel);
        auto* d = std::get_if<DurationalKS>(&mm);
        if (!d) throw model_error("dks-embed needs weighted transitions");
        auto e = harness::gen_dks_embedding(*d);
        if (!eformula.empty())
          std::cout << "# formula: " << to_string(harness::embed_formula(e, load_formula(eformula))) << "\n";
        std::cout << print_model(e.ks);
      }
      return 0;
    }
    if (*oracle) {
      Model mm = load_model(omodel);
      auto* ks = std::get_if<KripkeStructure>(&mm);
      if (!ks) throw model_error("the oracle runs on Kripke structures");
      auto v = harness::oracle_enumerate(*ks, load_formula(oformula), {horizon, 2'000'000});
      for (int q = 0; q < ks->size(); ++q) std::cout << ks->name(q) << ": " << harness::to_string(v[q]) << "\n";
      return 0;
    }
  } catch (const undecidable_error& e) {
    std::cerr << "undecidable: " << e.what() << "\n";
    return kExitUndecidable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
