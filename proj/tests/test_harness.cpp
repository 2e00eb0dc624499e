#include <gtest/gtest.h>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

namespace {

SnsatInstance one_block(std::vector<std::vector<SnsatLiteral>> clauses) {
  SnsatInstance inst;
  inst.p = 1;
  inst.m = 1;
  inst.cnf = {std::move(clauses)};
  return inst;
}

SnsatLiteral x(bool neg) { return {false, 1, 1, neg}; }

}  // namespace

TEST(Snsat, SingleSatisfiableBlock) {
  auto inst = one_block({{x(false), x(false), x(false)}});
  auto s = snsat_structure(inst);
  EXPECT_EQ(s.size(), 7);
  EXPECT_EQ(snsat_values(inst), std::vector<bool>{true});
  EXPECT_TRUE(mc_counting(s, snsat_formula(inst, 1))[*s.find("z1")]);
}

TEST(Snsat, SingleUnsatisfiableBlock) {
  auto inst = one_block({{x(false), x(false), x(false)}, {x(true), x(true), x(true)}});
  auto s = snsat_structure(inst);
  EXPECT_EQ(snsat_values(inst), std::vector<bool>{false});
  auto sat = mc_counting(s, snsat_formula(inst, 1));
  EXPECT_FALSE(sat[*s.find("z1")]);
  EXPECT_FALSE(sat[*s.find("zbar1")]);
  EXPECT_TRUE(mc_counting(s, mk_not(snsat_formula(inst, 1)))[*s.find("zbar1")]);
}

TEST(Snsat, StructureShape) {
  Rng r(101);
  auto inst = gen_snsat(r, 3, 2, 3);
  auto s = snsat_structure(inst);
  // q-chain: p+1 q states, 2p z states; x part: 2pm diamond states, pm-1 bullets; qF.
  EXPECT_EQ(s.size(), (3 + 1) + 2 * 3 + 2 * 3 * 2 + (3 * 2 - 1) + 1);
  EXPECT_EQ(s.label_set("zbar").count(), 3u);
  EXPECT_EQ(s.label_set("q").count(), 4u);
  for (int q = 0; q < s.size(); ++q) EXPECT_FALSE(s.succ(q).empty());
  for (const auto& clauses : inst.cnf)
    for (const auto& c : clauses)
      for (const auto& l : c)
        if (l.is_z) {
          EXPECT_LT(l.var, &clauses - inst.cnf.data() + 1);
        }
}

TEST(Snsat, VerdictsMatchEvaluatorOnRandomInstances) {
  Rng r(102);
  for (int i = 0; i < 20; ++i) {
    int p = uniform(r, 1, 3), m = uniform(r, 1, 3);
    auto inst = gen_snsat(r, p, m, uniform(r, 1, 4));
    auto s = snsat_structure(inst);
    auto values = snsat_values(inst);
    auto sat = mc_counting(s, snsat_formula(inst, p));
    for (int k = 1; k <= p; ++k) EXPECT_EQ(sat[*s.find(snsat_z(k))], values[k - 1]) << "z" << k;
  }
}

TEST(Qbf, GeneratorShape) {
  Rng r(103);
  auto inst = gen_qbf(r, 2, 3);
  auto s = qbf_structure(inst);
  EXPECT_EQ(s.size(), 1 + 3 * 4);
  for (const auto& c : inst.clauses)
    for (const auto& l : c) {
      EXPECT_GE(l.var, 1);
      EXPECT_LE(l.var, 4);
    }
  EXPECT_EQ(classify_fragment(qbf_formula(inst)).name, "CCTLv");
}

TEST(DksEmbedding, SingleWeightTwoEdge) {
  auto d = test::dks("state a {}\nstate b {P}\ntrans a -[2]-> b\ntrans b -[1]-> b\n");
  auto e = gen_dks_embedding(d);
  EXPECT_EQ(e.ks.label_set("P_2").count(), 1u);
  EXPECT_TRUE(e.ks.find("a_P_2_b").has_value());
  Formula g = embed_formula(e, parse_formula("EF{#TT = 2} P"));
  EXPECT_EQ(g, parse_formula("E(ok -> TT U{#P_1 + 2*#P_2 = 2} ok & P)"));
  EXPECT_TRUE(mc_counting(e.ks, g)[e.original[0]]);
}

TEST(DksEmbedding, UnitWeightsAgreeWithNativeChecker) {
  Rng r(104);
  std::vector<std::string> aps{"P", "Q"};
  for (int i = 0; i < 100; ++i) {
    auto d = random_dks(r, uniform(r, 1, 5), aps, {1});
    Formula f = random_tctl(r, aps, 3, 2);
    auto e = gen_dks_embedding(d);
    auto native = mc_tctl_dks(d, f);
    auto embedded = mc_counting(e.ks, embed_formula(e, f));
    for (int q = 0; q < d.size(); ++q) EXPECT_EQ(native[q], embedded[e.original[q]]) << to_string(f);
  }
}

TEST(DksEmbedding, SignedWeightsAgreeWithNativeChecker) {
  Rng r(105);
  std::vector<std::string> aps{"P", "Q"};
  for (int i = 0; i < 100; ++i) {
    auto d = random_dks(r, uniform(r, 1, 4), aps);
    Formula f = random_tctl(r, aps, 3, 1);
    auto e = gen_dks_embedding(d);
    auto native = mc_tctl_dks(d, f);
    auto embedded = check_formula(e.ks, embed_formula(e, f)).sat;
    for (int q = 0; q < d.size(); ++q) EXPECT_EQ(native[q], embedded[e.original[q]]) << to_string(f);
  }
}

TEST(Oracle, Examples) {
  auto loop = test::ks("state q {P}\ntrans q -> q\n");
  EXPECT_EQ(oracle_enumerate(loop, parse_formula("EF P"), {1, 1000})[0], Tri::True);
  Rng r(106);
  for (int h : {1, 3, 6}) {
    auto s = random_ks(r, 4, {"Q"});
    for (Tri t : oracle_enumerate(s, parse_formula("EF{#P >= 2} TT"), {h, 100000})) EXPECT_EQ(t, Tri::False);
  }
}

TEST(Oracle, NeverContradictsCountingAndMostlyDecides) {
  Rng r(107);
  auto aps = default_aps(2);
  std::size_t unknown = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    auto s = random_ks(r, uniform(r, 1, 4), aps);
    CctlShape sh;
    sh.modalities = 2;
    sh.atoms = 2;
    sh.terms = 1;
    sh.max_const = 2;
    sh.single_counted = true;
    Formula f = random_cctl(r, aps, sh);
    auto v = oracle_enumerate(s, f, {10, 500000});
    auto m = mc_counting(s, f);
    for (int q = 0; q < s.size(); ++q) {
      ++total;
      if (v[q] == Tri::Unknown) {
        ++unknown;
        continue;
      }
      EXPECT_EQ(v[q] == Tri::True, m[q]) << to_string(f) << "\n" << print_model(s);
    }
  }
  RecordProperty("unknown_rate", std::to_string(static_cast<double>(unknown) / static_cast<double>(total)));
  EXPECT_LT(unknown * 4, total);
}

TEST(Router, AutoRouting) {
  auto s = test::ks("state q {P}\ntrans q -> q\n");
  EXPECT_EQ(check_formula(s, parse_formula("EF P")).engine, "ctl");
  EXPECT_EQ(check_formula(s, parse_formula("EF{#P >= 1 & #Q = 0} P")).engine, "counting");
  EXPECT_EQ(check_formula(s, parse_formula("EF{#P - #Q >= 1} P")).engine, "polytime");
  EXPECT_EQ(check_formula(s, parse_formula("EF{2*#P - #Q >= 1} P")).engine, "pseudo-polynomial");
  EXPECT_EQ(check_formula(s, parse_formula("z[P]. EF (z >= 1)")).engine, "cctlv");
  EXPECT_EQ(check_formula(s, parse_formula("N EF{#P >= 1} P")).engine, "cctlc");
  EXPECT_THROW(check_formula(s, parse_formula("EF{#P - #Q >= 1 | #P = 0} P")), undecidable_error);
  EXPECT_THROW(check_formula(s, parse_formula("N EF{#P - #Q >= 1} P")), undecidable_error);
}
