#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ffd/aberration.hpp"
#include "ffd/optimal.hpp"
#include "oracles.hpp"

using namespace ffd;

namespace {

// Random regular design: m generators over n-m independent columns.
GeneratorSet random_generators(std::mt19937& rng, int q, int free, int m) {
  std::uniform_int_distribution<int> level(0, q - 1);
  for (;;) {
    LevelMatrix c(m, free);
    for (Index i = 0; i < c.size(); ++i) c.data()[i] = level(rng);
    try {
      return GeneratorSet(PrimeLevel(q), c);
    } catch (const InvalidInput&) {
      // zero row or proportional columns; draw again
    }
  }
}

PermutationVector random_shifts(std::mt19937& rng, const GeneratorSet& g) {
  std::uniform_int_distribution<int> level(0, g.q() - 1);
  LevelVector b(g.dependent());
  for (Index i = 0; i < b.size(); ++i) b(i) = level(rng);
  return PermutationVector(g.level(), b);
}

// Row shuffle, column shuffle and reversal of some columns' level order.
Design geometric_image(std::mt19937& rng, const Design& d) {
  std::vector<Index> rows(static_cast<std::size_t>(d.runs())), cols(static_cast<std::size_t>(d.factors()));
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::bernoulli_distribution flip(0.5);
  std::vector<bool> reversed;
  for (std::size_t j = 0; j < cols.size(); ++j) reversed.push_back(flip(rng));
  LevelMatrix out(d.runs(), d.factors());
  for (Index i = 0; i < d.runs(); ++i)
    for (Index j = 0; j < d.factors(); ++j) {
      const int x = d(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      out(i, j) = reversed[static_cast<std::size_t>(j)] ? d.q() - 1 - x : x;
    }
  return Design(d.level(), out);
}

}  // namespace

TEST(Property, GeometricInvariance) {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    const int q = std::array{3, 5, 7}[static_cast<std::size_t>(trial % 3)];
    const GeneratorSet g = random_generators(rng, q, 2, 1 + trial % 3);
    const Design e = build(g, random_shifts(rng, g), trial % 2 ? Family::Williams : Family::Linear);
    const auto a = beta_pattern(e);
    const auto b = beta_pattern(geometric_image(rng, e));
    EXPECT_LE((a.values() - b.values()).cwiseAbs().maxCoeff(), 1e-9) << g.to_string();
  }
}

TEST(Property, StrengthPreservedByPermutationAndWilliams) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int q = std::array{3, 5, 7}[static_cast<std::size_t>(trial % 3)];
    const GeneratorSet g = random_generators(rng, q, 2 + trial % 2, 1 + trial % 3);
    const Design d = expand(g);
    const int t = strength(d, 4);
    const Design db = linear_permute(g, random_shifts(rng, g));
    EXPECT_EQ(strength(db, 4), t);
    EXPECT_EQ(strength(williams(db), 4), t);
    EXPECT_TRUE(oracle::balanced(williams(db), std::min(t, 2)));
  }
}

TEST(Property, LowOrdersVanishUpToStrength) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int q = std::array{3, 5, 7}[static_cast<std::size_t>(trial % 3)];
    const GeneratorSet g = random_generators(rng, q, 2, 1 + trial % 2);
    const Design e = build(g, random_shifts(rng, g), Family::Williams);
    const int t = strength(e, 3);
    const auto p = beta_pattern(e, 3);
    for (int k = 1; k <= t; ++k) EXPECT_LE(p[k], 1e-10) << k;
  }
}

TEST(Property, BetaSumIdentityOnRegularDesigns) {
  for (int q : {3, 5, 7}) {
    for (int n = 3; n <= std::min(q + 1, 6); ++n) {
      for (const GeneratorSet& g : enumerate_q2_generators(PrimeLevel(q), n)) {
        const Design d = expand(g);
        const double expected = std::pow(double(q), n) / double(d.runs()) - 1.0;
        EXPECT_NEAR(beta_sum_check(d), expected, 1e-6 * std::max(1.0, expected)) << g.to_string();
      }
    }
  }
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int q = std::array{3, 5, 7}[static_cast<std::size_t>(trial % 3)];
    const GeneratorSet g = random_generators(rng, q, 3, 1 + trial % 3);
    const Design d = expand(g);
    const double expected = std::pow(double(q), g.factors()) / double(d.runs()) - 1.0;
    EXPECT_NEAR(beta_sum_check(d), expected, 1e-6 * std::max(1.0, expected));
  }
}

TEST(Property, SumIdentityHoldsAfterTransforms) {
  // the identity only needs distinct rows: permutations and W keep them distinct
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int q = std::array{3, 5, 7}[static_cast<std::size_t>(trial % 3)];
    const GeneratorSet g = random_generators(rng, q, 2, 1 + trial % 3);
    const Design e = build(g, random_shifts(rng, g), Family::Williams);
    const double expected = std::pow(double(q), g.factors()) / double(e.runs()) - 1.0;
    EXPECT_NEAR(beta_sum_check(e), expected, 1e-6 * std::max(1.0, expected));
  }
}
