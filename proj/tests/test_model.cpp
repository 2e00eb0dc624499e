#include <gtest/gtest.h>

#include "common.hpp"

using namespace cctl;
using namespace cctl::harness;

TEST(ModelParse, SmallestStructure) {
  auto s = test::ks("state q0 {P}\ntrans q0 -> q0\n");
  EXPECT_EQ(s.size(), 1);
  EXPECT_TRUE(s.has_label(0, "P"));
  EXPECT_EQ(s.succ(0), std::vector<int>{0});
}

TEST(ModelParse, WeightClassInference) {
  auto d = test::dks("state a {}\nstate b {}\ntrans a -[\xE2\x88\x92" "1]-> b\ntrans b -[1]-> a\n");
  EXPECT_EQ(d.weight_class(), WeightClass::MinusZeroOne);
  EXPECT_EQ(d.edges().front().weight, -1);
  EXPECT_EQ(test::dks("state a\ntrans a -[1]-> a\n").weight_class(), WeightClass::AllOne);
  EXPECT_EQ(test::dks("state a\nstate b\ntrans a -[0]-> b\ntrans b -[1]-> a\n").weight_class(),
            WeightClass::ZeroOne);
  EXPECT_EQ(test::dks("state a\ntrans a -[7]-> a\n").weight_class(), WeightClass::Arbitrary);
}

TEST(ModelParse, Errors) {
  try {
    parse_model("state q0 {}\nstate q1 {}\ntrans q0 -> q1\n");
    FAIL();
  } catch (const model_error& e) {
    EXPECT_NE(std::string(e.what()).find("relation not total at q1"), std::string::npos);
  }
  EXPECT_THROW(parse_model("ap P\nstate q0 {Q}\ntrans q0 -> q0\n"), model_error);
  EXPECT_THROW(parse_model("state q0 {}\nstate q0 {}\ntrans q0 -> q0\n"), model_error);
  EXPECT_THROW(parse_model("state q0 {}\ntrans q0 -> q9\n"), model_error);
  EXPECT_THROW(parse_model("state q0 {}\nstate q1 {}\ntrans q0 -> q1\ntrans q1 -[1]-> q0\n"), model_error);
  EXPECT_THROW(parse_model("bogus line\n"), model_error);
}

TEST(ModelParse, CommentsAndDeclarations) {
  auto s = test::ks("# a comment\nap P Q\nstate a {P, Q}  # trailing\nstate b\ntrans a -> b\ntrans b -> a\n");
  EXPECT_EQ(s.aps().size(), 2u);
  EXPECT_TRUE(s.has_label(0, "Q"));
  EXPECT_FALSE(s.has_label(1, "P"));
}

TEST(ModelPrint, RoundTrip) {
  Rng r(8);
  for (int i = 0; i < 100; ++i) {
    auto s = random_ks(r, uniform(r, 1, 6), default_aps(3));
    auto t = test::ks(print_model(s));
    ASSERT_EQ(t.size(), s.size());
    for (int q = 0; q < s.size(); ++q) {
      EXPECT_EQ(t.name(q), s.name(q));
      EXPECT_EQ(t.succ(q), s.succ(q));
      EXPECT_EQ(t.label_names(q), s.label_names(q));
    }
    auto d = random_dks(r, uniform(r, 1, 5), default_aps(2), {-2, -1, 0, 1, 3});
    auto e = test::dks(print_model(d));
    ASSERT_EQ(e.edges().size(), d.edges().size());
    for (std::size_t k = 0; k < d.edges().size(); ++k) {
      EXPECT_EQ(e.edges()[k].src, d.edges()[k].src);
      EXPECT_EQ(e.edges()[k].weight, d.edges()[k].weight);
      EXPECT_EQ(e.edges()[k].dst, d.edges()[k].dst);
    }
  }
}

TEST(ModelParse, EveryStateHasASuccessor) {
  Rng r(9);
  for (int i = 0; i < 200; ++i) {
    auto s = random_ks(r, uniform(r, 1, 5), default_aps(2));
    std::string text = print_model(s);
    // Drop a random transition line; the result either parses total or fails.
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::vector<std::size_t> trans;
    for (std::size_t k = 0; k < lines.size(); ++k)
      if (lines[k].rfind("trans", 0) == 0) trans.push_back(k);
    lines.erase(lines.begin() + static_cast<long>(trans[uniform(r, 0, static_cast<int>(trans.size()) - 1)]));
    std::string mutated;
    for (const auto& l : lines) mutated += l + "\n";
    try {
      auto t = test::ks(mutated);
      for (int q = 0; q < t.size(); ++q) EXPECT_FALSE(t.succ(q).empty());
    } catch (const model_error&) {
    }
  }
}

TEST(Runs, Validation) {
  auto loop = test::ks("state q0 {P}\ntrans q0 -> q0\n");
  EXPECT_TRUE(validate_run(loop, {}));
  EXPECT_TRUE(validate_run(loop, {0, 0, 0}));
  auto two = test::ks("state q0\nstate q1\ntrans q0 -> q0\ntrans q1 -> q0\n");
  EXPECT_FALSE(validate_run(two, {0, 1}));
  EXPECT_TRUE(validate_run(two, {1, 0}));
}
