#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ffd/field.hpp"

namespace ffd {

inline constexpr std::int64_t kDefaultMaxRuns = 1'000'000;

/// An N x n array of levels in Z_q. Immutable once built.
class Design {
 public:
  Design(PrimeLevel q, LevelMatrix levels);

  const PrimeLevel& level() const noexcept { return q_; }
  int q() const noexcept { return q_.value(); }
  Index runs() const noexcept { return levels_.rows(); }
  Index factors() const noexcept { return levels_.cols(); }
  const LevelMatrix& levels() const noexcept { return levels_; }
  int operator()(Index run, Index factor) const { return levels_(run, factor); }

  /// Entry-wise equality (row order matters); see same_design for multisets.
  friend bool operator==(const Design& a, const Design& b) {
    return a.q_ == b.q_ && a.levels_.rows() == b.levels_.rows() && a.levels_.cols() == b.levels_.cols() &&
           a.levels_ == b.levels_;
  }

 private:
  PrimeLevel q_;
  LevelMatrix levels_;
};

/// m linear generators over n-m independent columns:
///   x_{n-m+i} = sum_j C(i,j) x_j  (mod q).
class GeneratorSet {
 public:
  /// `coefficients` is m x (n-m); entries are reduced mod q. Throws
  /// InvalidInput for a zero generator row or two proportional columns.
  GeneratorSet(PrimeLevel q, LevelMatrix coefficients);

  const PrimeLevel& level() const noexcept { return q_; }
  int q() const noexcept { return q_.value(); }
  int factors() const noexcept { return static_cast<int>(c_.rows() + c_.cols()); }
  int dependent() const noexcept { return static_cast<int>(c_.rows()); }
  int independent() const noexcept { return static_cast<int>(c_.cols()); }
  const LevelMatrix& coefficients() const noexcept { return c_; }

  /// n x (n-m): unit vectors for the independent columns followed by the
  /// generator rows. Row j expresses design column j in the independent basis.
  LevelMatrix column_vectors() const;

  /// "c11,c12;c21,c22" (the CLI grammar).
  std::string to_string() const;

  friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) {
    return a.q_ == b.q_ && a.c_.rows() == b.c_.rows() && a.c_.cols() == b.c_.cols() && a.c_ == b.c_;
  }

 private:
  PrimeLevel q_;
  LevelMatrix c_;
};

GeneratorSet parse_generators(std::string_view text, const PrimeLevel& q);

/// Level shifts b in Z_q^m applied to the dependent columns.
class PermutationVector {
 public:
  PermutationVector(const PrimeLevel& q, LevelVector shifts);
  static PermutationVector zeros(const PrimeLevel& q, int m);

  Index size() const noexcept { return b_.size(); }
  int operator[](Index i) const { return b_(i); }
  const LevelVector& values() const noexcept { return b_; }
  std::vector<int> to_vector() const { return {b_.data(), b_.data() + b_.size()}; }

  friend bool operator==(const PermutationVector& a, const PermutationVector& b) {
    return a.b_.size() == b.b_.size() && a.b_ == b.b_;
  }
  friend std::strong_ordering operator<=>(const PermutationVector& a, const PermutationVector& b) {
    return a.to_vector() <=> b.to_vector();
  }

 private:
  LevelVector b_;
};

PermutationVector parse_permutation(std::string_view text, const PrimeLevel& q);

/// Regular q^(n-m) design: independent columns in enumerate_tuples order.
Design expand(const GeneratorSet& gen, std::int64_t max_runs = kDefaultMaxRuns);

/// Coset D_b: dependent column i shifted by b_i.
Design linear_permute(const GeneratorSet& gen, const PermutationVector& b,
                      std::int64_t max_runs = kDefaultMaxRuns);

/// W(x) = 2x for x < q/2, 2(q-x)-1 otherwise.
int williams_value(int x, const PrimeLevel& q);
/// W^{-1}(x) = x/2 for even x, q-(x+1)/2 for odd x.
int williams_inverse(int x, const PrimeLevel& q);

/// Entry-wise Williams transformation.
Design williams(const Design& d);
/// Entry-wise x -> x + delta (mod q).
Design shift(const Design& d, int delta);
/// (q-1)J - D.
Design reflect(const Design& d);

/// Largest t <= t_max such that every t-column projection contains each of the
/// q^t level combinations equally often; 0 if a single column is unbalanced.
int strength(const Design& d, int t_max);

/// Row multisets of D and (q-1)J - D coincide.
bool is_mirror_symmetric(const Design& d);

/// Row-multiset equality. Throws InvalidInput on differing shapes or q.
bool same_design(const Design& a, const Design& b);

/// Text format: "# q=<q> N=<N> n=<n>" then N lines of n integers.
void write_design(std::ostream& os, const Design& d);
Design read_design(std::istream& is);
void save_design(const std::string& path, const Design& d);
Design load_design(const std::string& path);

}  // namespace ffd
