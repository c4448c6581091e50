#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "ffd/field.hpp"

namespace ffd {

/// Orthonormal polynomials on Z_q under the uniform measure, scaled so that
/// sum_x p_i(x) p_j(x) = q * delta_ij. values(u, x) = p_u(x); p_0 = 1 and the
/// leading coefficient of every p_u is positive.
template <typename Scalar = double>
struct OrthonormalBasis {
  using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  int q = 0;
  Table values;
  Scalar rho{};  // p_1(x) = rho * (x - (q-1)/2)

  Scalar operator()(int u, int x) const { return values(u, x); }
  int degree() const { return q - 1; }
};

/// Gram-Schmidt over the nested spaces span{1, x, ..., x^u}. Each new
/// direction is taken as t * p_{u-1} with t the centred, scaled level; this
/// spans the same space as x^u but avoids the Vandermonde conditioning of raw
/// monomials. Two orthogonalisation passes per row.
template <typename Scalar = double>
OrthonormalBasis<Scalar> orthonormal_basis(const PrimeLevel& level) {
  using std::sqrt;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int q = level.value();
  const Scalar qs(q);
  const Scalar mid = Scalar(q - 1) / 2;

  Vec t(q);
  for (int x = 0; x < q; ++x) t(x) = (Scalar(x) - mid) / mid;

  OrthonormalBasis<Scalar> basis;
  basis.q = q;
  basis.values.resize(q, q);
  basis.values.row(0).setOnes();
  for (int u = 1; u < q; ++u) {
    Vec w = basis.values.row(u - 1).transpose().cwiseProduct(t);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < u; ++j) {
        const Scalar coef = basis.values.row(j).dot(w.transpose()) / qs;
        w -= coef * basis.values.row(j).transpose();
      }
    }
    w *= sqrt(qs / w.squaredNorm());
    basis.values.row(u) = w.transpose();
  }
  basis.rho = sqrt(Scalar(12) / (Scalar(q + 1) * Scalar(q - 1)));
  return basis;
}

/// p_1(x) through its finite cosine expansion
///   -(rho/2q) sum_{v<q} g(v) cos((2v+1) pi (x+1/2) / q),
///   g(v) = cos(pi (v+1/2)/q) / sin^2(pi (v+1/2)/q).
/// Independent of orthonormal_basis; used to cross-check it.
template <typename Scalar = double>
Scalar linear_poly_cosine(const PrimeLevel& level, int x) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const int q = level.value();
  if (x < 0 || x >= q) {
    throw InvalidInput("level " + std::to_string(x) + " outside Z_" + std::to_string(q));
  }
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar qs(q);
  const Scalar rho = sqrt(Scalar(12) / (Scalar(q + 1) * Scalar(q - 1)));
  Scalar sum(0);
  for (int v = 0; v < q; ++v) {
    const Scalar angle = pi * (Scalar(v) + Scalar(0.5)) / qs;
    const Scalar s = sin(angle);
    const Scalar g = cos(angle) / (s * s);
    sum += g * cos(Scalar(2 * v + 1) * pi * (Scalar(x) + Scalar(0.5)) / qs);
  }
  return -rho / (2 * qs) * sum;
}

}  // namespace ffd
