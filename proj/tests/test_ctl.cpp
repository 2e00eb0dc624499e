#include <gtest/gtest.h>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

TEST(Ctl, Examples) {
  auto loop = test::ks("state q0 {P}\ntrans q0 -> q0\n");
  EXPECT_TRUE(mc_ctl(loop, parse_formula("EF P"))[0]);
  auto chain = test::ks("state q0 {}\nstate q1 {P}\ntrans q0 -> q1\ntrans q1 -> q1\n");
  EXPECT_EQ(mc_ctl(chain, parse_formula("A(TT U P)")).count(), 2u);
  EXPECT_THROW(mc_ctl(chain, parse_formula("EF{#P >= 1} P")), fragment_error);
}

TEST(Ctl, AgreesWithEnumerationOracle) {
  Rng r(31);
  auto aps = default_aps(2);
  for (int i = 0; i < 150; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), aps);
    Formula p = random_prop(r, aps);
    for (Formula f : {mk_ef(p), mk_eg(p), mk_af(p), mk_ag(p), mk_eu(random_prop(r, aps), p)}) {
      auto v = oracle_enumerate(s, f, {2 * s.size(), 1'000'000});
      auto m = mc_ctl(s, f);
      for (int q = 0; q < s.size(); ++q)
        if (v[q] != Tri::Unknown) {
          EXPECT_EQ(v[q] == Tri::True, m[q]) << to_string(f) << "\n" << print_model(s);
        }
    }
  }
}

TEST(Ctl, DualityAndUntilExpansion) {
  Rng r(32);
  auto aps = default_aps(2);
  for (int i = 0; i < 200; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), aps);
    Formula a = random_prop(r, aps), b = random_prop(r, aps);
    Formula f = mk_eu(a, mk_ex(b));
    EXPECT_EQ(mc_ctl(s, mk_not(f)), ~mc_ctl(s, f));
    Formula au = mk_au(a, b);
    Formula expanded = mk_and(mk_not(mk_eu(mk_not(b), mk_and(mk_not(a), mk_not(b)))), mk_not(mk_eg(mk_not(b))));
    EXPECT_EQ(mc_ctl(s, au), mc_ctl(s, expanded));
  }
}

TEST(Tableau, Examples) {
  EXPECT_EQ(sat_ctl(parse_formula("P & !P")).status, SatStatus::Unsat);
  auto r = sat_ctl(parse_formula("P"));
  ASSERT_EQ(r.status, SatStatus::Sat);
  EXPECT_TRUE(mc_ctl(*r.model, parse_formula("P"))[r.initial]);
  EXPECT_EQ(sat_ctl(parse_formula("AG P & EF !P")).status, SatStatus::Unsat);
  EXPECT_EQ(sat_ctl(parse_formula("EG P & AF !P")).status, SatStatus::Unsat);
  EXPECT_EQ(sat_ctl(parse_formula("AG (P -> EX !P) & AG (!P -> EX P) & P")).status, SatStatus::Sat);
}

TEST(Tableau, TranslatedFamilyIsSatisfiable) {
  for (int k = 0; k <= 3; ++k) {
    Formula f = translate_cctlb_to_ctl(parse_formula("EF{#p1 + #p2 = " + std::to_string(k) + "} Q"));
    auto r = sat_ctl(f);
    ASSERT_EQ(r.status, SatStatus::Sat);
    EXPECT_TRUE(mc_ctl(*r.model, f)[r.initial]);
  }
}

// Random small CTL formulas: witnesses check, and Unsat verdicts survive an
// exhaustive search over pointed models with at most 3 states.
TEST(Tableau, RandomFormulasSelfCertify) {
  Rng r(33);
  std::vector<std::string> aps{"P"};
  int unsat = 0;
  for (int i = 0; i < 120; ++i) {
    std::function<Formula(int)> gen = [&](int d) -> Formula {
      if (d == 0) return coin(r) ? mk_atom("P") : mk_not(mk_atom("P"));
      switch (uniform(r, 0, 6)) {
        case 0: return mk_and(gen(d - 1), gen(d - 1));
        case 1: return mk_or(gen(d - 1), gen(d - 1));
        case 2: return mk_ex(gen(d - 1));
        case 3: return mk_ax(gen(d - 1));
        case 4: return mk_eu(gen(d - 1), gen(d - 1));
        case 5: return mk_au(gen(d - 1), gen(d - 1));
        default: return mk_not(gen(d - 1));
      }
    };
    Formula f = mk_and(gen(2), gen(2));
    if (dag_size(f) > 12) continue;
    auto res = sat_ctl(f);
    if (res.status == SatStatus::Sat) {
      EXPECT_TRUE(mc_ctl(*res.model, f)[res.initial]);
    } else {
      ASSERT_EQ(res.status, SatStatus::Unsat);
      ++unsat;
      auto m = small_model_search(aps, 3, [&](const KripkeStructure& s, int q) { return mc_ctl(s, f)[q]; });
      EXPECT_FALSE(m.has_value()) << to_string(f);
    }
  }
  EXPECT_GT(unsat, 0);
}
