#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffd/aberration.hpp"
#include "ffd/design.hpp"
#include "ffd/parallel.hpp"

namespace ffd {

/// W^{-1}((q-1)/2): (q-1)/4 for q = 1 mod 4, (3q-1)/4 for q = 3 mod 4.
int gamma(const PrimeLevel& q);

/// b*_i = (1 - sum_j c_ij) gamma (mod q).
PermutationVector b_star(const GeneratorSet& gen);
/// b~_i = (1 - sum_j c_ij) (q-1)/2 (mod q).
PermutationVector b_tilde(const GeneratorSet& gen);

enum class Family { Linear, Williams };

std::string_view to_string(Family f);
Family parse_family(std::string_view text);

/// D_b, or E_b = W(D_b).
Design build(const GeneratorSet& gen, const PermutationVector& b, Family family,
             std::int64_t max_runs = kDefaultMaxRuns);

struct SearchOptions {
  int k_max = 0;  // <= 0: full K
  // Candidate count cap, and cap on candidates x runs x factors (cells
  // built); `force` lifts both.
  std::int64_t max_evaluations = 2'000'000;
  std::int64_t max_work = 5'000'000;
  bool force = false;
  int jobs = default_jobs();
  double tol = kPatternTolerance;
};

struct Candidate {
  GeneratorSet generators;
  PermutationVector b;
};

struct SearchReport {
  int q = 0;
  int n = 0;
  Family family = Family::Linear;
  Candidate winner;
  BetaPattern<double> beta;
  std::vector<Candidate> ties;  // every minimizer, canonical order; contains winner
  std::int64_t evaluations = 0;
  // Largest pattern index that separated a non-tied candidate from the
  // winner; 0 when everything tied.
  int deciding_k = 0;
};

/// Ranks all candidates by the sequential pattern order. The winner is the
/// earliest minimizer in the given order.
SearchReport search_candidates(const std::vector<Candidate>& candidates, Family family, const SearchOptions& opt);

/// Exhaustive scan over all q^m shifts, lexicographic in b.
SearchReport best_b(const GeneratorSet& gen, Family family, const SearchOptions& opt = {});

/// Number of reduced q^2-run generator sets: C(q-1, n-2) ((q-1)/2)^(n-2).
std::int64_t count_q2_generators(const PrimeLevel& q, int n);

/// Reduced q^2-run generator space: dependent columns (c1, c2) with
/// c1 in 1..(q-1)/2, c2 in 1..q-1 and distinct slopes c2/c1. Columns sorted
/// within a set, sets in lexicographic order.
std::vector<GeneratorSet> enumerate_q2_generators(const PrimeLevel& q, int n,
                                                  std::int64_t max_count = 2'000'000);

/// x1, x2, x1+x2, x1+2x2, ... truncated to n columns.
GeneratorSet standard_q2_generators(const PrimeLevel& q, int n);

struct Q2Report {
  int q = 0;
  int n = 0;
  GeneratorSet standard;
  BetaPattern<double> standard_beta;
  SearchReport linear;    // best D_{b~}
  SearchReport williams;  // best E_{b*}
};

Q2Report search_q2(const PrimeLevel& q, int n, const SearchOptions& opt = {});

/// {"q","n","family","generators","b","beta","ties","evaluations","deciding_k"}
std::string to_json(const SearchReport& r, int indent = -1);
std::string to_json(const Q2Report& r, int indent = -1);

}  // namespace ffd
