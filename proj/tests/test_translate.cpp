#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

namespace {

Formula phi_k(int k) { return parse_formula("EF{#p1 + #p2 = " + std::to_string(k) + "} phi"); }

}  // namespace

TEST(TranslateCctlb, ZeroBound) {
  EXPECT_EQ(translate_cctlb_to_ctl(phi_k(0)), parse_formula("E(!p1 & !p2 U phi)"));
}

TEST(TranslateCctlb, OneBoundScansEachCountedProposition) {
  Formula phi0 = translate_cctlb_to_ctl(phi_k(0));
  Formula expect = mk_eu(parse_formula("!p1 & !p2"),
                         mk_or(mk_and(mk_atom("p1"), mk_and(mk_not(mk_atom("p2")), mk_ex(phi0))),
                               mk_and(mk_not(mk_atom("p1")), mk_and(mk_atom("p2"), mk_ex(phi0)))));
  EXPECT_EQ(translate_cctlb_to_ctl(phi_k(1)), expect) << to_string(translate_cctlb_to_ctl(phi_k(1)));
}

TEST(TranslateCctlb, DagSizeLinearInBound) {
  std::vector<std::size_t> sizes;
  for (int k = 1; k <= 10; ++k) sizes.push_back(dag_size(translate_cctlb_to_ctl(phi_k(k))));
  for (int k = 1; k <= 10; ++k) EXPECT_LE(sizes[k - 1], 12u * k + 8) << k;
  for (std::size_t i = 1; i < sizes.size(); ++i) EXPECT_EQ(sizes[i] - sizes[i - 1], sizes[1] - sizes[0]);
}

TEST(TranslateCctlb, AgreesWithCountingEngine) {
  Rng r(71);
  auto aps = default_aps(2);
  for (int i = 0; i < 200; ++i) {
    auto s = random_ks(r, 5, aps);
    Formula f = random_cctl(r, aps, CctlShape{});
    EXPECT_EQ(mc_ctl(s, translate_cctlb_to_ctl(f)), mc_counting(s, f)) << to_string(f) << "\n" << print_model(s);
  }
}

TEST(TranslateCctlb, RejectsSignedSums) {
  EXPECT_THROW(translate_cctlb_to_ctl(parse_formula("EF{#P - #Q = 0} TT")), fragment_error);
}

TEST(TranslateCctlv, NestedNextExample) {
  EXPECT_EQ(translate_cctlv_to_ctl(parse_formula("z[P]. z'[z > 0]. EF (z' > 0 & P')")),
            parse_formula("E(!P U P & EX EX EF P')"));
}

TEST(TranslateCctlv, ZeroAtBindingInstant) {
  Formula t = translate_cctlv_to_ctl(parse_formula("z[P]. (z = 0)"));
  Rng r(72);
  for (int i = 0; i < 20; ++i) {
    auto s = random_ks(r, uniform(r, 1, 5), default_aps(2));
    EXPECT_EQ(mc_ctl(s, t).count(), static_cast<std::size_t>(s.size()));
  }
}

TEST(TranslateCctlv, AgreesWithDirectChecker) {
  Rng r(73);
  auto aps = default_aps(2);
  for (int i = 0; i < 150; ++i) {
    auto s = random_ks(r, 4, aps);
    Formula f = random_cctlv(r, aps, 2, 2);
    EXPECT_EQ(mc_ctl(s, translate_cctlv_to_ctl(f)), check_cctlv(s, f)) << to_string(f) << "\n" << print_model(s);
  }
}

TEST(TranslateCctlv, RejectsOpenFormulas) {
  EXPECT_THROW(translate_cctlv_to_ctl(parse_formula("EF (z > 0)")), wellformedness_error);
}

TEST(TranslateCumulative, NowOfPropositionIsProposition) {
  EXPECT_EQ(translate_cctlv_to_ctl(translate_cctlc_to_cctlv(parse_formula("N P"))), mk_atom("P"));
}

TEST(TranslateCumulative, GuardedFormulaKeepsItsMeaning) {
  Rng r(74);
  auto aps = default_aps(2);
  for (int i = 0; i < 150; ++i) {
    auto s = random_ks(r, uniform(r, 1, 5), aps);
    CctlShape sh;
    sh.max_const = 2;
    Formula f = random_cctl(r, aps, sh);
    Formula g = guard_with_now(f);
    EXPECT_EQ(mc_cctlc(s, g), mc_counting(s, f)) << to_string(g) << "\n" << print_model(s);
  }
}

TEST(TranslateCumulative, NestedEventuallyMergesBounds) {
  Formula nested = parse_formula("N EF{#P >= 1} EF{#P <= 2} Q");
  Formula flat = parse_formula("EF{#P >= 1 & #P <= 2} Q");
  Formula ctl = translate_cctlv_to_ctl(translate_cctlc_to_cctlv(nested));
  Rng r(75);
  for (int i = 0; i < 100; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), default_aps(2));
    EXPECT_EQ(mc_cctlc(s, nested), mc_counting(s, flat)) << print_model(s);
    EXPECT_EQ(mc_ctl(s, ctl), mc_counting(s, flat));
  }
}

TEST(TranslateCumulative, OverlineIsLinear) {
  for (int n = 1; n <= 8; ++n) {
    Formula f = mk_atom("Q");
    for (int i = 0; i < n; ++i) f = mk_ef(f, parse_constraint("#P <= 2"));
    f = mk_now(f);
    EXPECT_LE(dag_size(translate_cctlc_to_cctlv(f)), 12u * dag_size(f));
  }
}
