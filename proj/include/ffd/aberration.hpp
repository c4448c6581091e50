#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ffd/design.hpp"
#include "ffd/orthopoly.hpp"

namespace ffd {

/// (beta_1, ..., beta_k) for a q-level n-factor design; k <= K = n(q-1).
/// Negative rounding residue is clamped to zero on construction.
template <typename Scalar = double>
class BetaPattern {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BetaPattern() = default;
  BetaPattern(int q, int n, Vector values) : q_(q), n_(n), values_(std::move(values)) {
    if (values_.size() > max_order()) {
      throw InvalidInput("pattern length " + std::to_string(values_.size()) + " exceeds K=" +
                         std::to_string(max_order()));
    }
    values_ = values_.cwiseMax(Scalar(0));
  }

  int q() const noexcept { return q_; }
  int factors() const noexcept { return n_; }
  int max_order() const noexcept { return n_ * (q_ - 1); }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  bool complete() const noexcept { return size() == max_order(); }

  /// beta_k, 1-based.
  Scalar operator[](int k) const { return values_(k - 1); }
  const Vector& values() const noexcept { return values_; }
  std::vector<Scalar> to_vector() const { return {values_.data(), values_.data() + values_.size()}; }

 private:
  int q_ = 0;
  int n_ = 0;
  Vector values_;
};

enum class BetaMethod {
  Auto,        // cheaper of the two exact routes
  Direct,      // per-u accumulation over the rows
  PairKernel,  // generating polynomial over run pairs
};

inline constexpr double kZeroTolerance = 1e-8;
inline constexpr double kPatternTolerance = 1e-8;

/// Shared immutable basis per level count.
template <typename Scalar = double>
const OrthonormalBasis<Scalar>& cached_basis(const PrimeLevel& q) {
  static std::mutex mutex;
  static std::map<int, OrthonormalBasis<Scalar>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(q.value());
  if (it == cache.end()) it = cache.emplace(q.value(), orthonormal_basis<Scalar>(q)).first;
  return it->second;
}

namespace detail {

template <typename Scalar>
void check_basis(const Design& d, const OrthonormalBasis<Scalar>& basis) {
  if (basis.q != d.q()) {
    throw InvalidInput("basis has q=" + std::to_string(basis.q) + " but design has q=" + std::to_string(d.q()));
  }
}

// Per-column tables: column j, order u, run i -> p_u(x_ij), laid out as
// tables[j](u, i).
template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> column_tables(
    const Design& d, const OrthonormalBasis<Scalar>& basis) {
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> tables(
      static_cast<std::size_t>(d.factors()));
  for (Index j = 0; j < d.factors(); ++j) {
    auto& t = tables[static_cast<std::size_t>(j)];
    t.resize(d.q(), d.runs());
    for (Index i = 0; i < d.runs(); ++i) t.col(i) = basis.values.col(d(i, j));
  }
  return tables;
}

// Enumerates every u with 1 <= |u| <= k_max once, as the ordered list of its
// nonzero coordinates, carrying the running row-wise product.
template <typename Scalar>
class DirectAccumulator {
 public:
  DirectAccumulator(const Design& d, const OrthonormalBasis<Scalar>& basis, int k_min, int k_max)
      : tables_(column_tables(d, basis)),
        runs_(d.runs()),
        factors_(static_cast<int>(d.factors())),
        q_(d.q()),
        k_min_(k_min),
        k_max_(k_max),
        sums_(k_max + 1, Scalar(0)),
        stack_(static_cast<std::size_t>(std::max(k_max, 1)), std::vector<Scalar>(static_cast<std::size_t>(runs_))) {}

  std::vector<Scalar> run() {
    std::vector<Scalar> ones(static_cast<std::size_t>(runs_), Scalar(1));
    visit(0, 0, 0, ones.data());
    return sums_;
  }

 private:
  void visit(int first_col, int degree, int depth, const Scalar* current) {
    // A u-vector of degree `degree` still needs k_min - degree more units,
    // spread over at most (q-1) per remaining column.
    for (int c = first_col; c < factors_; ++c) {
      if ((k_min_ - degree) > (q_ - 1) * (factors_ - c)) return;
      const auto& table = tables_[static_cast<std::size_t>(c)];
      const int top = std::min(q_ - 1, k_max_ - degree);
      Scalar* buf = stack_[static_cast<std::size_t>(depth)].data();
      for (int u = 1; u <= top; ++u) {
        const Scalar* p = table.row(u).data();
        Scalar s(0);
        for (Index i = 0; i < runs_; ++i) {
          buf[i] = current[i] * p[i];
          s += buf[i];
        }
        const int deg = degree + u;
        if (deg >= k_min_) sums_[static_cast<std::size_t>(deg)] += s * s;
        if (deg < k_max_ && c + 1 < factors_) visit(c + 1, deg, depth + 1, buf);
      }
    }
  }

  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> tables_;
  Index runs_;
  int factors_;
  int q_;
  int k_min_;
  int k_max_;
  std::vector<Scalar> sums_;
  std::vector<std::vector<Scalar>> stack_;
};

// sum_k beta_k t^k = N^-2 sum_{i,l} prod_j sum_u p_u(x_ij) p_u(x_lj) t^u,
// truncated at t^k_max.
template <typename Scalar>
std::vector<Scalar> pair_kernel_sums(const Design& d, const OrthonormalBasis<Scalar>& basis, int k_max) {
  const int q = d.q();
  const Index runs = d.runs();
  const int n = static_cast<int>(d.factors());
  // kernel[(x*q + y)*q + u] = p_u(x) p_u(y)
  std::vector<Scalar> kernel(static_cast<std::size_t>(q) * q * q);
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y)
      for (int u = 0; u < q; ++u) kernel[(static_cast<std::size_t>(x) * q + y) * q + u] = basis(u, x) * basis(u, y);

  std::vector<Scalar> total(static_cast<std::size_t>(k_max) + 1, Scalar(0));
  std::vector<Scalar> poly(total.size()), next(total.size());
  for (Index i = 0; i < runs; ++i) {
    for (Index l = i; l < runs; ++l) {
      std::fill(poly.begin(), poly.end(), Scalar(0));
      poly[0] = Scalar(1);
      int deg = 0;
      for (int j = 0; j < n; ++j) {
        const Scalar* k = &kernel[(static_cast<std::size_t>(d(i, j)) * q + d(l, j)) * q];
        const int new_deg = std::min(deg + q - 1, k_max);
        std::fill(next.begin(), next.begin() + new_deg + 1, Scalar(0));
        for (int a = 0; a <= deg; ++a) {
          const Scalar pa = poly[a];
          if (pa == Scalar(0)) continue;
          const int top = std::min(q - 1, k_max - a);
          for (int b = 0; b <= top; ++b) next[a + b] += pa * k[b];
        }
        deg = new_deg;
        std::swap(poly, next);
      }
      const Scalar w = (i == l) ? Scalar(1) : Scalar(2);
      for (int k = 0; k <= deg; ++k) total[k] += w * poly[k];
    }
  }
  return total;
}

// Number of u in {0..q-1}^n with 1 <= |u| <= k_max (as a double; only used
// to estimate cost).
inline double count_orders(int q, int n, int k_max) {
  std::vector<double> ways(static_cast<std::size_t>(k_max) + 1, 0.0);
  ways[0] = 1.0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> next(ways.size(), 0.0);
    for (int a = 0; a <= k_max; ++a) {
      if (ways[a] == 0.0) continue;
      for (int u = 0; u < q && a + u <= k_max; ++u) next[a + u] += ways[a];
    }
    ways = std::move(next);
  }
  double s = 0;
  for (int k = 1; k <= k_max; ++k) s += ways[k];
  return s;
}

inline BetaMethod choose_method(const Design& d, int k_max) {
  const double n = static_cast<double>(d.factors());
  const double runs = static_cast<double>(d.runs());
  const double direct = count_orders(d.q(), static_cast<int>(d.factors()), k_max) * runs;
  double per_pair = 0;
  for (int j = 1; j <= static_cast<int>(n); ++j) {
    per_pair += (std::min(j * (d.q() - 1), k_max) + 1.0) * std::min(d.q(), k_max + 1);
  }
  const double pairs = runs * (runs + 1) / 2;
  return direct <= pairs * per_pair ? BetaMethod::Direct : BetaMethod::PairKernel;
}

inline void check_order(const Design& d, int k, const char* what) {
  const int top = static_cast<int>(d.factors()) * (d.q() - 1);
  if (k < 1 || k > top) {
    throw InvalidInput(std::string(what) + " " + std::to_string(k) + " outside 1.." + std::to_string(top));
  }
}

}  // namespace detail

/// beta_k(D) = N^-2 sum_{|u|=k} |sum_i prod_j p_{u_j}(x_ij)|^2, accumulated
/// per u over the runs.
template <typename Scalar = double>
Scalar beta_k(const Design& d, int k, const OrthonormalBasis<Scalar>& basis) {
  detail::check_basis(d, basis);
  detail::check_order(d, k, "order k");
  detail::DirectAccumulator<Scalar> acc(d, basis, k, k);
  const Scalar n2 = Scalar(d.runs()) * Scalar(d.runs());
  return std::max(Scalar(0), acc.run()[static_cast<std::size_t>(k)] / n2);
}

template <typename Scalar = double>
Scalar beta_k(const Design& d, int k) {
  return beta_k<Scalar>(d, k, cached_basis<Scalar>(d.level()));
}

/// beta_1..beta_{k_max}; k_max <= 0 means the full K = n(q-1).
template <typename Scalar = double>
BetaPattern<Scalar> beta_pattern(const Design& d, int k_max, const OrthonormalBasis<Scalar>& basis,
                                 BetaMethod method = BetaMethod::Auto) {
  detail::check_basis(d, basis);
  const int top = static_cast<int>(d.factors()) * (d.q() - 1);
  if (k_max <= 0) k_max = top;
  detail::check_order(d, k_max, "k_max");
  if (method == BetaMethod::Auto) method = detail::choose_method(d, k_max);
  std::vector<Scalar> sums;
  if (method == BetaMethod::Direct) {
    sums = detail::DirectAccumulator<Scalar>(d, basis, 1, k_max).run();
  } else {
    sums = detail::pair_kernel_sums(d, basis, k_max);
  }
  const Scalar n2 = Scalar(d.runs()) * Scalar(d.runs());
  typename BetaPattern<Scalar>::Vector v(k_max);
  for (int k = 1; k <= k_max; ++k) v(k - 1) = sums[static_cast<std::size_t>(k)] / n2;
  return BetaPattern<Scalar>(d.q(), static_cast<int>(d.factors()), std::move(v));
}

template <typename Scalar = double>
BetaPattern<Scalar> beta_pattern(const Design& d, int k_max = 0, BetaMethod method = BetaMethod::Auto) {
  return beta_pattern<Scalar>(d, k_max, cached_basis<Scalar>(d.level()), method);
}

/// 1-based index of the first k with |a_k - b_k| > tol * max(1, a_k, b_k),
/// or 0 if none.
template <typename Scalar>
int first_difference(const BetaPattern<Scalar>& a, const BetaPattern<Scalar>& b, double tol = kPatternTolerance) {
  if (a.size() != b.size()) {
    throw InvalidInput("pattern lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  using std::abs;
  for (int k = 1; k <= a.size(); ++k) {
    const Scalar scale = std::max({Scalar(1), abs(a[k]), abs(b[k])});
    if (abs(a[k] - b[k]) > Scalar(tol) * scale) return k;
  }
  return 0;
}

/// Sequential (minimum beta-aberration) comparison.
template <typename Scalar>
std::weak_ordering compare_patterns(const BetaPattern<Scalar>& a, const BetaPattern<Scalar>& b,
                                    double tol = kPatternTolerance) {
  const int k = first_difference(a, b, tol);
  if (k == 0) return std::weak_ordering::equivalent;
  return a[k] < b[k] ? std::weak_ordering::less : std::weak_ordering::greater;
}

/// sum_{k=1}^{K} beta_k. For N distinct runs this equals q^n / N - 1.
template <typename Scalar = double>
Scalar beta_sum_check(const Design& d) {
  return beta_pattern<Scalar>(d, 0).values().sum();
}

}  // namespace ffd
