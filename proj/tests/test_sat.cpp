#include <gtest/gtest.h>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

namespace {

bool routed_check(const KripkeStructure& m, Formula f, int q) { return check_formula(m, f).sat[q]; }

}  // namespace

TEST(Sat, CountedEventually) {
  Formula f = parse_formula("EF{#P = 2} TT");
  auto r = sat_cctl(f);
  ASSERT_EQ(r.status, SatStatus::Sat);
  ASSERT_TRUE(r.model);
  EXPECT_TRUE(mc_counting(*r.model, f)[r.initial]);
  auto hand = test::ks("state a {P}\nstate b {P}\nstate c {}\ntrans a -> b\ntrans b -> c\ntrans c -> c\n");
  EXPECT_TRUE(mc_counting(hand, f)[0]);
}

TEST(Sat, SignedSumsAreRefused) {
  EXPECT_EQ(sat_cctl(parse_formula("EF{#P - #Q = 0} TT")).status, SatStatus::Undecidable);
  EXPECT_EQ(sat_cctl(parse_formula("z[P]. z'[Q]. EF (z - z' = 0)")).status, SatStatus::Undecidable);
  EXPECT_EQ(sat_cctl(parse_formula("N EF{#P - #Q >= 1} TT")).status, SatStatus::Undecidable);
}

TEST(Sat, Contradiction) {
  EXPECT_EQ(sat_cctl(parse_formula("A(FF U FF)")).status, SatStatus::Unsat);
  EXPECT_EQ(sat_cctl(parse_formula("AG !TT")).status, SatStatus::Unsat);
}

TEST(Sat, OpenFormulaIsRejected) {
  EXPECT_THROW(sat_cctl(parse_formula("EF (z > 0)")), wellformedness_error);
}

TEST(Sat, CorpusMatchesGroundTruth) {
  auto corpus = test::load_corpus(test::sat_corpus_path());
  int sat = 0, unsat = 0;
  for (const auto& e : corpus) {
    Formula f = parse_formula(e.formula);
    auto r = sat_cctl(f);
    EXPECT_EQ(to_string(r.status), e.expected) << e.formula;
    if (r.status == SatStatus::Sat) {
      ++sat;
      ASSERT_TRUE(r.model);
      EXPECT_TRUE(routed_check(*r.model, f, r.initial)) << e.formula;
    }
    if (r.status == SatStatus::Unsat) ++unsat;
  }
  EXPECT_EQ(sat, 10);
  EXPECT_EQ(unsat, 10);
}

// Small Unsat verdicts survive an exhaustive search over tiny models, and
// witnesses check with the routed engine.
TEST(Sat, RandomFormulasSelfCertify) {
  Rng r(91);
  std::vector<std::string> aps{"P"};
  for (int i = 0; i < 40; ++i) {
    CctlShape sh;
    sh.modalities = 1;
    sh.atoms = 1;
    sh.terms = 1;
    sh.max_const = 1;
    Formula f = random_cctl(r, aps, sh);
    if (coin(r)) f = mk_and(f, mk_not(random_cctl(r, aps, sh)));
    auto res = sat_cctl(f);
    if (res.status == SatStatus::Sat) {
      EXPECT_TRUE(mc_counting(*res.model, f)[res.initial]) << to_string(f);
    } else {
      ASSERT_EQ(res.status, SatStatus::Unsat);
      auto m = small_model_search(aps, 2, [&](const KripkeStructure& s, int q) { return mc_counting(s, f)[q]; });
      EXPECT_FALSE(m.has_value()) << to_string(f);
    }
  }
}

TEST(Sat, WitnessesAreMinimal) {
  auto r = sat_cctl(parse_formula("EF{#P = 2} TT"));
  ASSERT_TRUE(r.model);
  EXPECT_LE(r.model->size(), 3);
}
