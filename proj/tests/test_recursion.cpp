#include <gtest/gtest.h>

#include "ffd/optimal.hpp"
#include "ffd/recursion.hpp"

using namespace ffd;

namespace {
GeneratorSet gens(int q, const std::string& text) { return parse_generators(text, PrimeLevel(q)); }
}  // namespace

TEST(Classify, SevenLevelTypeII) {
  const GeneratorSet g = gens(7, "2,2");
  const RecursionWitness w = classify_with_witness(g);
  EXPECT_EQ(w.type, RecursiveType::TypeII);
  EXPECT_FALSE(closes_under(g, RecursiveType::TypeI));
  // {x1, x2} does not close; {x1, x3} does
  EXPECT_EQ(w.initial, (std::vector<int>{0, 2}));
  ASSERT_EQ(w.steps.size(), 1u);
  EXPECT_EQ(w.steps[0], (std::vector<int>{1}));
}

TEST(Classify, FiveFactorExamples) {
  EXPECT_EQ(classify(gens(5, "1,1,0;1,1,1")), RecursiveType::TypeI);
  EXPECT_EQ(classify(gens(5, "1,1,0;1,1,2")), RecursiveType::TypeII);
  EXPECT_EQ(classify(gens(5, "1,1,0;1,2,2")), RecursiveType::NotRecursive);
  EXPECT_EQ(classify(gens(5, "1,1,0;1,2,2;1,2,0")), RecursiveType::TypeII);
}

TEST(Classify, EightFactorTypeII) {
  const GeneratorSet g = gens(7, "1,1;1,2;1,4;1,5;2,5;2,6");
  EXPECT_GE(classify(g), RecursiveType::TypeII);
}

TEST(Classify, MonotoneRegimes) {
  for (int n = 3; n <= 6; ++n) {
    for (const GeneratorSet& g : enumerate_q2_generators(PrimeLevel(5), n)) {
      const RecursiveType t = classify(g);
      if (t >= RecursiveType::TypeI) EXPECT_TRUE(closes_under(g, RecursiveType::TypeII));
      if (t >= RecursiveType::TypeII) EXPECT_TRUE(closes_under(g, RecursiveType::TypeIII));
      // every q^2-run design is at least type III
      EXPECT_GE(t, RecursiveType::TypeIII);
    }
  }
}

TEST(Classify, WitnessClosesInFewSteps) {
  for (const GeneratorSet& g : enumerate_q2_generators(PrimeLevel(7), 6)) {
    const RecursionWitness w = classify_with_witness(g);
    std::size_t covered = w.initial.size();
    for (const auto& s : w.steps) {
      EXPECT_FALSE(s.empty());
      covered += s.size();
    }
    EXPECT_EQ(covered, 6u);
    EXPECT_LE(w.steps.size(), 6u);
  }
}

TEST(Classify, InvariantUnderGeneratorOrder) {
  EXPECT_EQ(classify(gens(5, "1,1,0;1,2,2;1,2,0")), classify(gens(5, "1,2,0;1,1,0;1,2,2")));
  for (const GeneratorSet& g : enumerate_q2_generators(PrimeLevel(7), 5)) {
    LevelMatrix c = g.coefficients().colwise().reverse();
    EXPECT_EQ(classify(g), classify(GeneratorSet(g.level(), c)));
  }
}

TEST(Classify, Names) {
  EXPECT_EQ(to_string(RecursiveType::TypeI), "TypeI");
  EXPECT_EQ(to_string(RecursiveType::NotRecursive), "NotRecursive");
  EXPECT_THROW(closes_under(gens(5, "1,1"), RecursiveType::NotRecursive), InvalidInput);
}

TEST(CountRecursive, TotalsAndTypeI) {
  // Type-I and type-III columns and the universe sizes are unambiguous.
  const std::int64_t t25[4][2] = {{2, 8}, {6, 24}, {20, 32}, {16, 16}};
  for (int n = 3; n <= 6; ++n) {
    const RecursiveCounts c = count_recursive(PrimeLevel(5), n);
    EXPECT_EQ(c.type_i, t25[n - 3][0]);
    EXPECT_EQ(c.type_iii, t25[n - 3][1]);
    EXPECT_EQ(c.total, count_q2_generators(PrimeLevel(5), n));
  }
  const std::int64_t t49[6][2] = {{2, 18}, {6, 135}, {20, 540}, {70, 1215}, {252, 1458}, {267, 729}};
  for (int n = 3; n <= 8; ++n) {
    const RecursiveCounts c = count_recursive(PrimeLevel(7), n, 2);
    EXPECT_EQ(c.type_i, t49[n - 3][0]);
    EXPECT_EQ(c.type_iii, t49[n - 3][1]);
  }
}

TEST(CountRecursive, JobsDoNotChangeCounts) {
  const RecursiveCounts a = count_recursive(PrimeLevel(7), 5, 1);
  const RecursiveCounts b = count_recursive(PrimeLevel(7), 5, 4);
  EXPECT_EQ(a.type_i, b.type_i);
  EXPECT_EQ(a.type_ii, b.type_ii);
  EXPECT_EQ(a.type_iii, b.type_iii);
}

TEST(CountRecursive, RangeErrors) {
  EXPECT_THROW(count_recursive(PrimeLevel(5), 7), InvalidInput);
  EXPECT_THROW(count_recursive(PrimeLevel(5), 2), InvalidInput);
}
