#include <gtest/gtest.h>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

namespace {

PmReduction reduce(const KripkeStructure& s, const std::string& constraint) {
  Constraint c = parse_constraint(constraint);
  LabelingTable t;
  for (const auto& term : c.terms()) mc_ctl(s, term.counted, t);
  StateSet all(s.size(), true);
  return reduce_to_dks(s, c, t, all, all);
}

}  // namespace

TEST(Reduction, ChainShapes) {
  auto s = test::ks("state ab {S, T}\nstate a {S}\nstate none {}\ntrans ab -> a\ntrans a -> none\ntrans none -> ab\n");
  auto r = reduce(s, "#S - #T >= 0");
  const auto& b = r.dks.base;
  EXPECT_TRUE(b.find("ab_0") && !b.find("ab_1"));
  EXPECT_TRUE(b.find("a_1") && !b.find("a_2"));
  EXPECT_NE(r.dks.weight_class(), WeightClass::Arbitrary);
  EXPECT_TRUE(b.has_label(r.original[0], "ok"));
  EXPECT_FALSE(b.has_label(*b.find("a_0"), "ok"));
  // a -[0]-> a_0 -[1]-> a_1 -[0]-> none
  std::vector<WeightedEdge> expect{{*b.find("a"), 0, *b.find("a_0")},
                                   {*b.find("a_0"), 1, *b.find("a_1")},
                                   {*b.find("a_1"), 0, *b.find("none")}};
  for (const auto& e : expect)
    EXPECT_NE(std::find(r.dks.edges().begin(), r.dks.edges().end(), e), r.dks.edges().end());
}

TEST(Reduction, SizeMatchesCostSum) {
  Rng r(61);
  for (int i = 0; i < 100; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), default_aps(3));
    std::string c = "2*#P - 3*#Q + #R <= 1";
    auto red = reduce(s, c);
    std::size_t expect = static_cast<std::size_t>(s.size());
    for (int q = 0; q < s.size(); ++q) {
      std::int64_t cost = 2 * s.has_label(q, "P") - 3 * s.has_label(q, "Q") + s.has_label(q, "R");
      expect += static_cast<std::size_t>(std::abs(cost) + 1);
    }
    EXPECT_EQ(static_cast<std::size_t>(red.dks.size()), expect);
  }
}

// Walking the reduction and collapsing chain states gives a run of the
// original structure whose accumulated weight is the constraint sum.
TEST(Reduction, RunCorrespondence) {
  Rng r(62);
  for (int i = 0; i < 100; ++i) {
    auto s = random_ks(r, uniform(r, 1, 5), default_aps(2));
    Constraint c = parse_constraint("#P - 2*#Q = 0");
    auto red = reduce(s, "#P - 2*#Q = 0");
    const auto& b = red.dks.base;
    std::vector<int> back(b.size(), -1);
    for (int q = 0; q < s.size(); ++q) back[red.original[q]] = q;
    int cur = red.original[uniform(r, 0, s.size() - 1)];
    std::int64_t weight = 0;
    std::vector<int> run{back[cur]};
    for (int step = 0; step < 40; ++step) {
      std::vector<WeightedEdge> out;
      for (const auto& e : red.dks.edges())
        if (e.src == cur) out.push_back(e);
      ASSERT_FALSE(out.empty());
      const auto& e = out[uniform(r, 0, static_cast<int>(out.size()) - 1)];
      weight += e.weight;
      cur = e.dst;
      if (back[cur] >= 0) {
        // Weight so far covers exactly the states before the current one.
        std::int64_t sum = 0;
        for (int q : run) sum += s.has_label(q, "P") - 2 * s.has_label(q, "Q");
        EXPECT_EQ(weight, sum);
        EXPECT_EQ(prefix_satisfies(s, run, c), sum == 0);
        run.push_back(back[cur]);
      }
    }
    EXPECT_TRUE(validate_run(s, run));
  }
}

TEST(Pm, SendReceive) {
  auto s = test::ks(
      "state init {}\nstate send {send}\nstate work {}\nstate recv {receive}\n"
      "trans init -> send\ntrans send -> work\ntrans work -> recv\ntrans work -> send\ntrans recv -> init\n");
  Formula f = parse_formula("AG{#send - #receive < 0} FF");
  EXPECT_TRUE(mc_cctl_pm(s, f)[*s.find("init")]);
  EXPECT_FALSE(mc_cctl_pm(s, f)[*s.find("recv")]);
  // Window-bounded product search over (state, weight).
  DurationalKS w;
  w.base = s;
  for (int q = 0; q < s.size(); ++q)
    for (int p : s.succ(q)) w.add_edge(q, s.has_label(q, "send") - s.has_label(q, "receive"), p);
  StateSet all(s.size(), true);
  StateSet exists = oracle_tctl(w, false, all, all, Cmp::Lt, 0);
  EXPECT_EQ(mc_cctl_pm(s, f), ~exists);
}

TEST(Pm, CancellingSum) {
  Rng r(63);
  for (int i = 0; i < 50; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), default_aps(2));
    EXPECT_EQ(mc_cctl_pm(s, parse_formula("EF{#P - #P = 0} P")), mc_ctl(s, parse_formula("EF P")));
  }
}

TEST(Pm, ErrorRate) {
  for (int errors = 0; errors <= 3; ++errors) {
    std::string m;
    for (int i = 0; i < 12; ++i)
      m += "state s" + std::to_string(i) + (i < errors ? " {error}" : i == 11 ? " {P}" : " {}") + "\n";
    m += "state sink {}\ntrans sink -> sink\ntrans s11 -> sink\n";
    for (int i = 0; i < 11; ++i) m += "trans s" + std::to_string(i) + " -> s" + std::to_string(i + 1) + "\n";
    auto s = test::ks(m);
    std::vector<int> prefix;
    for (int i = 0; i < 11; ++i) prefix.push_back(i);
    bool expect = prefix_satisfies(s, prefix, parse_constraint("10*#error - #TT < 0"));
    EXPECT_EQ(expect, errors <= 1);
    EXPECT_EQ(mc_cctl_pm(s, parse_formula("EF{10*#error - #TT < 0} P"))[0], expect) << errors;
  }
}

TEST(Pm, AgreesWithCountingOnUnitCoefficients) {
  Rng r(64);
  auto aps = default_aps(3);
  for (int i = 0; i < 200; ++i) {
    auto s = random_ks(r, 5, aps);
    Formula f = random_cctl1(r, aps, 4);
    EXPECT_EQ(mc_cctl_pm(s, f), mc_counting(s, f)) << to_string(f) << "\n" << print_model(s);
  }
}

TEST(Pm, AgreesWithWindowedOracleOnSignedSums) {
  Rng r(65);
  auto aps = default_aps(2);
  for (int i = 0; i < 100; ++i) {
    auto s = random_ks(r, uniform(r, 1, 5), aps);
    std::int64_t a = uniform(r, -2, 2), b = uniform(r, -2, 2), k = uniform(r, -3, 3);
    Cmp c = random_cmp(r);
    bool universal = coin(r);
    Constraint con = c_atom({Term{a, mk_atom("P")}, Term{b, mk_atom("Q")}}, c, k);
    Formula phi = coin(r) ? mk_true() : mk_not(mk_atom("Q"));
    Formula f = mk_until(universal, phi, mk_atom("P"), con);
    DurationalKS w;
    w.base = s;
    for (int q = 0; q < s.size(); ++q)
      for (int p : s.succ(q)) w.add_edge(q, a * s.has_label(q, "P") + b * s.has_label(q, "Q"), p);
    if (w.weight_class() == WeightClass::Arbitrary) continue;
    StateSet phis = mc_ctl(s, phi), psis = s.label_set("P");
    EXPECT_EQ(mc_cctl_pm(s, f), oracle_tctl(w, universal, phis, psis, c, k)) << to_string(f) << "\n" << print_model(s);
  }
}

TEST(Pm, RejectsBooleanConstraintsAndHonoursCap) {
  auto s = test::ks("state q {P}\ntrans q -> q\n");
  EXPECT_THROW(mc_cctl_pm(s, parse_formula("EF{#P >= 1 | #P <= 0} P")), fragment_error);
  EXPECT_THROW(mc_cctl_pm(s, parse_formula("EF{5000*#P >= 1} P")), resource_cap_error);
}
