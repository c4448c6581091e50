#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "ffd/error.hpp"

namespace ffd {

using Index = Eigen::Index;

/// Integer arrays over Z_q. Row-major so that a design row is contiguous.
using LevelMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using LevelVector = Eigen::VectorXi;

/// An odd prime level count q. Construction validates primality.
class PrimeLevel {
 public:
  explicit PrimeLevel(int q);

  int value() const noexcept { return q_; }
  int center() const noexcept { return (q_ - 1) / 2; }

  int reduce(std::int64_t x) const noexcept {
    auto r = static_cast<int>(x % q_);
    return r < 0 ? r + q_ : r;
  }
  int add(int a, int b) const noexcept { return reduce(std::int64_t{a} + b); }
  int mul(int a, int b) const noexcept { return reduce(std::int64_t{a} * b); }
  int neg(int a) const noexcept { return reduce(-std::int64_t{a}); }
  /// Multiplicative inverse of a nonzero element (Fermat).
  int inverse(int a) const;

  friend bool operator==(const PrimeLevel&, const PrimeLevel&) = default;

 private:
  int q_;
};

/// Validates q; throws InvalidInput naming the violated condition.
PrimeLevel check_odd_prime(int q);

/// Reduce every entry of an integer array into {0,...,q-1}.
template <typename Derived>
LevelMatrix reduce_mod(const Eigen::MatrixBase<Derived>& m, const PrimeLevel& q) {
  return m.template cast<int>().unaryExpr([&q](int v) { return q.reduce(v); });
}

/// Rank over GF(q) by Gaussian elimination. Entries need not be pre-reduced.
int rank_mod(const LevelMatrix& m, const PrimeLevel& q);

/// All q^k tuples of Z_q^k as rows, lexicographic with the last coordinate
/// varying fastest. Throws CapExceeded past `max_rows`.
LevelMatrix enumerate_tuples(const PrimeLevel& q, int k, std::int64_t max_rows = 10'000'000);

/// q^k as a 64-bit integer, saturating at INT64_MAX.
std::int64_t checked_power(int q, int k);

}  // namespace ffd
