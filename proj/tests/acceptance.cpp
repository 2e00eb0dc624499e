// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string first_failure;
  void fail(const std::string& why) {
    if (ok) first_failure = why;
    ok = false;
  }
};

constexpr std::uint64_t kSeed = 20240607;

Outcome crit1_cross_engine() {
  Outcome o;
  Rng r(kSeed + 1);
  auto aps = default_aps(3);
  for (int i = 0; i < 500; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), aps);
    CctlShape sh;  // <= 2 modalities, <= 2 atoms, constants <= 3
    Formula f = random_cctl(r, aps, sh);
    if (mc_counting(s, f) != mc_ctl(s, translate_cctlb_to_ctl(f))) o.fail(to_string(f) + "\n" + print_model(s));
  }
  o.detail = "500 pairs";
  return o;
}

Outcome crit2_polytime() {
  Outcome o;
  Rng r(kSeed + 2);
  auto aps = default_aps(3);
  for (int i = 0; i < 300; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), aps);
    Formula f = random_cctl1(r, aps, 4);
    if (mc_cctl_pm(s, f) != mc_counting(s, f)) o.fail(to_string(f) + "\n" + print_model(s));
  }
  o.detail = "300 queries";
  return o;
}

Outcome crit3_dks() {
  Outcome o;
  Rng r(kSeed + 3);
  std::vector<std::string> aps{"P", "Q"};
  int shapes[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 200; ++i) {
    auto d = random_dks(r, uniform(r, 1, 5), aps);
    int shape = i % 6;
    bool universal = shape >= 3;
    std::int64_t k = uniform(r, -3, 3);
    Cmp c = Cmp::Eq;
    switch (shape) {
      case 0: c = coin(r) ? Cmp::Le : Cmp::Lt; break;
      case 1: c = coin(r) ? Cmp::Ge : Cmp::Gt; break;
      case 2: c = Cmp::Eq; break;
      case 3: c = Cmp::Eq, k = 0; break;
      case 4: c = Cmp::Eq, k = k == 0 ? 2 : k; break;
      default: {
        const Cmp cs[4] = {Cmp::Lt, Cmp::Le, Cmp::Ge, Cmp::Gt};
        c = cs[uniform(r, 0, 3)];
      }
    }
    ++shapes[shape];
    StateSet phi = coin(r, 0.3) ? StateSet(d.size(), true) : d.base.label_set("P");
    StateSet psi = d.base.label_set("Q");
    if (tctl_until(d, universal, phi, psi, c, k) != oracle_tctl(d, universal, phi, psi, c, k))
      o.fail(std::string(universal ? "A" : "E") + " " + to_string(c) + " " + std::to_string(k) + "\n" + print_model(d));
  }
  o.detail = "200 instances, shapes";
  for (int n : shapes) o.detail += " " + std::to_string(n);
  return o;
}

Outcome crit4_snsat() {
  Outcome o;
  Rng r(kSeed + 4);
  int checks = 0, trues = 0;
  for (int i = 0; i < 50; ++i) {
    int p = uniform(r, 1, 3), m = uniform(r, 1, 4);
    auto inst = gen_snsat(r, p, m, uniform(r, 2 * m, 5 * m + 2));
    auto s = snsat_structure(inst);
    auto values = snsat_values(inst);
    auto sat = mc_counting(s, snsat_formula(inst, p));
    for (int k = 1; k <= p; ++k) {
      ++checks;
      trues += values[k - 1];
      if (sat[*s.find(snsat_z(k))] != values[k - 1])
        o.fail("instance " + std::to_string(i) + " z" + std::to_string(k));
    }
  }
  o.detail = "50 instances, " + std::to_string(checks) + " z-states, " + std::to_string(trues) + " true";
  return o;
}

Outcome crit5_qbf() {
  Outcome o;
  Rng r(kSeed + 5);
  int trues = 0;
  for (int i = 0; i < 50; ++i) {
    auto inst = gen_qbf(r, uniform(r, 1, 3), uniform(r, 2, 10));
    auto s = qbf_structure(inst);
    bool expect = qbf_eval(inst);
    trues += expect;
    if (check_cctlv(s, qbf_formula(inst))[*s.find("q1")] != expect) o.fail("instance " + std::to_string(i));
  }
  o.detail = "50 instances, " + std::to_string(trues) + " true";
  return o;
}

struct CctlvCase {
  KripkeStructure s;
  Formula f;
};

std::vector<CctlvCase> cctlv_corpus() {
  Rng r(kSeed + 6);
  auto aps = default_aps(2);
  std::vector<CctlvCase> c;
  for (int i = 0; i < 200; ++i) {
    auto s = random_ks(r, uniform(r, 1, 4), aps);
    c.push_back({s, random_cctlv(r, aps, 2, 2)});
  }
  return c;
}

Outcome crit6_cctlv() {
  Outcome o;
  for (const auto& c : cctlv_corpus())
    if (check_cctlv(c.s, c.f) != mc_ctl(c.s, translate_cctlv_to_ctl(c.f))) o.fail(to_string(c.f) + "\n" + print_model(c.s));
  o.detail = "200 formulas";
  return o;
}

Outcome crit7_cumulative() {
  Outcome o;
  Rng r(kSeed + 7);
  auto aps = default_aps(2);
  Formula nested = parse_formula("N EF{#P >= 1} EF{#P <= 2} Q");
  Formula flat = parse_formula("EF{#P >= 1 & #P <= 2} Q");
  for (int i = 0; i < 100; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), aps);
    CctlShape sh;
    sh.max_const = 2;
    Formula f = random_cctl(r, aps, sh);
    if (mc_cctlc(s, guard_with_now(f)) != mc_counting(s, f)) o.fail("guard: " + to_string(f) + "\n" + print_model(s));
    if (mc_cctlc(s, nested) != mc_counting(s, flat)) o.fail("nested example\n" + print_model(s));
  }
  o.detail = "100 models";
  return o;
}

Outcome crit8_sat() {
  Outcome o;
  int sat = 0, unsat = 0, guarded = 0;
  for (const auto& e : test::load_corpus(test::sat_corpus_path())) {
    Formula f = parse_formula(e.formula);
    auto res = sat_cctl(f);
    if (to_string(res.status) != e.expected) o.fail(e.formula + ": " + to_string(res.status));
    if (classify_fragment(f).negative_coefficients && res.status != SatStatus::Undecidable)
      o.fail(e.formula + ": missing guard");
    if (res.status == SatStatus::Sat) {
      ++sat;
      if (!res.model || !check_formula(*res.model, f).sat[res.initial]) o.fail(e.formula + ": witness fails");
    }
    unsat += res.status == SatStatus::Unsat;
    guarded += res.status == SatStatus::Undecidable;
  }
  o.detail = std::to_string(sat) + " sat, " + std::to_string(unsat) + " unsat, " + std::to_string(guarded) + " guarded";
  if (sat + unsat != 20) o.fail("corpus must hold 20 decidable formulas");
  return o;
}

Outcome crit9_sizes() {
  Outcome o;
  std::vector<std::size_t> sizes;
  for (int k = 1; k <= 10; ++k)
    sizes.push_back(dag_size(translate_cctlb_to_ctl(parse_formula("EF{#p1 + #p2 = " + std::to_string(k) + "} phi"))));
  const std::size_t step = sizes[1] - sizes[0];
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] - sizes[i - 1] != step) o.fail("non-linear growth at k=" + std::to_string(i + 1));
  // 2^(c |f|^2) with c = 1 and |f| the DAG-size of the input.
  Rng r(kSeed + 1);
  auto aps = default_aps(3);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    Formula f = random_cctl(r, aps, CctlShape{});
    double n = static_cast<double>(dag_size(f));
    double t = std::log2(static_cast<double>(dag_size(translate_cctlb_to_ctl(f))));
    worst = std::max(worst, t / (n * n));
    if (t > n * n) o.fail(to_string(f));
  }
  std::ostringstream d;
  d << "dag(tr(Phi_k)) = " << sizes[0] << " + " << step << "(k-1); max log2(dag)/|f|^2 = " << worst;
  o.detail = d.str();
  return o;
}

Outcome crit10_cap() {
  Outcome o;
  for (const auto& c : cctlv_corpus()) {
    CctlvOptions wide;
    wide.cap_extra = 2;
    if (check_cctlv(c.s, c.f) != check_cctlv(c.s, c.f, wide)) o.fail(to_string(c.f) + "\n" + print_model(c.s));
    if (mc_ctl(c.s, translate_cctlv_to_ctl(c.f, 2)) != check_cctlv(c.s, c.f)) o.fail("translation: " + to_string(c.f));
  }
  o.detail = "200 formulas at cap K+3";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "counting engine = translation to CTL", 60, crit1_cross_engine},
      {2, "chain reduction = counting engine on unit sums", 60, crit2_polytime},
      {3, "weighted until = windowed product oracle", 120, crit3_dks},
      {4, "SNSAT reduction fidelity", 120, crit4_snsat},
      {5, "QBF reduction fidelity", 60, crit5_qbf},
      {6, "CCTLv checker = translation to CTL", 120, crit6_cctlv},
      {7, "cumulative pipeline equivalences", 60, crit7_cumulative},
      {8, "satisfiability corpus and witnesses", 60, crit8_sat},
      {9, "translation size bounds", 30, crit9_sizes},
      {10, "valuation cap invariance", 120, crit10_cap},
  };
  std::cout << "seed: " << kSeed << "\n";
  bool all_ok = true;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.fail("over time budget");
    all_ok = all_ok && o.ok;
    std::printf("%s %d %s (%s; %.2fs)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    if (!o.ok) std::printf("  first failure: %s\n", o.first_failure.c_str());
  }
  return all_ok ? 0 : 1;
}
