#include "ffd/field.hpp"

#include <limits>
#include <string>
#include <utility>

namespace ffd {

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; static_cast<std::int64_t>(d) * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

}  // namespace

PrimeLevel::PrimeLevel(int q) : q_(q) {
  if (q >= 2 && q % 2 == 0) {
    throw InvalidInput("level count q=" + std::to_string(q) + " is even; an odd prime is required");
  }
  if (q < 3) {
    throw InvalidInput("level count q=" + std::to_string(q) + " must be at least 3");
  }
  if (!is_prime(q)) {
    throw InvalidInput("level count q=" + std::to_string(q) + " is composite; an odd prime is required");
  }
}

int PrimeLevel::inverse(int a) const {
  a = reduce(a);
  if (a == 0) throw InvalidInput("zero has no inverse mod " + std::to_string(q_));
  std::int64_t result = 1, base = a;
  for (int e = q_ - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % q_;
    base = base * base % q_;
  }
  return static_cast<int>(result);
}

PrimeLevel check_odd_prime(int q) { return PrimeLevel(q); }

int rank_mod(const LevelMatrix& input, const PrimeLevel& q) {
  LevelMatrix m = reduce_mod(input, q);
  const Index rows = m.rows(), cols = m.cols();
  int rank = 0;
  for (Index c = 0; c < cols && rank < rows; ++c) {
    Index pivot = -1;
    for (Index r = rank; r < rows; ++r) {
      if (m(r, c) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(rank));
    const int inv = q.inverse(m(rank, c));
    for (Index j = c; j < cols; ++j) m(rank, j) = q.mul(m(rank, j), inv);
    for (Index r = 0; r < rows; ++r) {
      if (r == rank || m(r, c) == 0) continue;
      const int f = m(r, c);
      for (Index j = c; j < cols; ++j) m(r, j) = q.reduce(m(r, j) - std::int64_t{f} * m(rank, j));
    }
    ++rank;
  }
  return rank;
}

std::int64_t checked_power(int q, int k) {
  std::int64_t p = 1;
  for (int i = 0; i < k; ++i) {
    if (p > std::numeric_limits<std::int64_t>::max() / q) return std::numeric_limits<std::int64_t>::max();
    p *= q;
  }
  return p;
}

LevelMatrix enumerate_tuples(const PrimeLevel& q, int k, std::int64_t max_rows) {
  if (k < 1) throw InvalidInput("tuple length must be at least 1, got " + std::to_string(k));
  const std::int64_t count = checked_power(q.value(), k);
  if (count > max_rows) {
    throw CapExceeded(std::to_string(q.value()) + "^" + std::to_string(k) + " tuples exceed the cap of " +
                      std::to_string(max_rows));
  }
  LevelMatrix out(count, k);
  LevelVector t = LevelVector::Zero(k);
  for (std::int64_t r = 0; r < count; ++r) {
    out.row(r) = t.transpose();
    for (int j = k - 1; j >= 0; --j) {
      if (++t(j) < q.value()) break;
      t(j) = 0;
    }
  }
  return out;
}

}  // namespace ffd
