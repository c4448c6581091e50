#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ffd/design.hpp"

namespace ffd {

/// Ordered by strength of the coefficient restriction.
enum class RecursiveType { NotRecursive = 0, TypeIII = 1, TypeII = 2, TypeI = 3 };

std::string_view to_string(RecursiveType t);

/// How a design closes: the independent starting columns and the columns
/// added at each closure step (0-based design column indices).
struct RecursionWitness {
  RecursiveType type = RecursiveType::NotRecursive;
  std::vector<int> initial;
  std::vector<std::vector<int>> steps;
};

/// Coefficient regime of one closure test:
///   TypeI   c1, c2 in {1, q-1}
///   TypeII  c1 in {1, q-1}, c2 in Z_q
///   TypeIII c1, c2 in Z_q
/// Returns true (and fills `witness` if given) when some independent
/// (n-m)-subset of columns closes onto all n columns.
bool closes_under(const GeneratorSet& gen, RecursiveType regime, RecursionWitness* witness = nullptr);

/// Strongest regime that closes, or NotRecursive.
RecursiveType classify(const GeneratorSet& gen);
RecursionWitness classify_with_witness(const GeneratorSet& gen);

/// Cumulative tallies over the reduced q^2-run generator space: a type-I
/// design counts towards all three columns.
struct RecursiveCounts {
  int q = 0;
  int n = 0;
  std::int64_t type_i = 0;
  std::int64_t type_ii = 0;
  std::int64_t type_iii = 0;
  std::int64_t total = 0;
};

RecursiveCounts count_recursive(const PrimeLevel& q, int n, int jobs = 1);

}  // namespace ffd
