#pragma once

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ffd/aberration.hpp"
#include "ffd/design.hpp"

namespace ffd {

/// Second-order model columns: intercept; linear p1(x_j); quadratic p2(x_j);
/// bilinear p1(x_j) p1(x_k) for j < k in lexicographic order.
template <typename Scalar = double>
struct ModelMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<std::string> labels;
  Matrix values;
};

inline constexpr double kPivotThreshold = 1e-10;

namespace detail {

inline std::string effect_label(int n, int j, int k = 0) {
  std::string s = "a" + std::to_string(j);
  if (k > 0) s += (n >= 10 ? "_" : "") + std::to_string(k);
  return s;
}

}  // namespace detail

template <typename Scalar = double>
ModelMatrix<Scalar> model_matrix(const Design& d, const OrthonormalBasis<Scalar>& basis) {
  detail::check_basis(d, basis);
  const int n = static_cast<int>(d.factors());
  const Index runs = d.runs();
  const Index cols = 1 + 2 * n + n * (n - 1) / 2;
  ModelMatrix<Scalar> m;
  m.values.resize(runs, cols);
  m.labels.reserve(static_cast<std::size_t>(cols));

  m.labels.push_back("a0");
  m.values.col(0).setOnes();
  Index c = 1;
  for (int j = 0; j < n; ++j, ++c) {
    m.labels.push_back(detail::effect_label(n, j + 1));
    for (Index i = 0; i < runs; ++i) m.values(i, c) = basis(1, d(i, j));
  }
  for (int j = 0; j < n; ++j, ++c) {
    m.labels.push_back(detail::effect_label(n, j + 1, j + 1));
    for (Index i = 0; i < runs; ++i) m.values(i, c) = basis(2, d(i, j));
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k, ++c) {
      m.labels.push_back(detail::effect_label(n, j + 1, k + 1));
      for (Index i = 0; i < runs; ++i) m.values(i, c) = basis(1, d(i, j)) * basis(1, d(i, k));
    }
  return m;
}

template <typename Scalar = double>
ModelMatrix<Scalar> model_matrix(const Design& d) {
  return model_matrix<Scalar>(d, cached_basis<Scalar>(d.level()));
}

template <typename Scalar = double>
struct InfoSummary {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<std::string> labels;
  Matrix information;  // M^T M / N
  Index runs = 0;

  Index index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<Index>(i);
    throw InvalidInput("no model term '" + label + "'");
  }
  Scalar operator()(const std::string& a, const std::string& b) const {
    return information(index_of(a), index_of(b));
  }
};

template <typename Scalar = double>
InfoSummary<Scalar> information_matrix(const Design& d) {
  ModelMatrix<Scalar> m = model_matrix<Scalar>(d);
  InfoSummary<Scalar> s;
  s.labels = std::move(m.labels);
  s.information = (m.values.transpose() * m.values) / Scalar(d.runs());
  s.runs = d.runs();
  return s;
}

/// diag((M^T M)^{-1}) per term, in units of sigma^2. Throws InvalidInput when
/// elimination meets a pivot below kPivotThreshold (relative to the largest
/// entry): the model is not estimable on this design.
template <typename Scalar = double>
std::vector<std::pair<std::string, Scalar>> estimate_variances(const Design& d) {
  using std::abs;
  const ModelMatrix<Scalar> m = model_matrix<Scalar>(d);
  const typename ModelMatrix<Scalar>::Matrix mtm = m.values.transpose() * m.values;
  Eigen::PartialPivLU<typename ModelMatrix<Scalar>::Matrix> lu(mtm);
  const Scalar scale = std::max(Scalar(1), mtm.cwiseAbs().maxCoeff());
  const auto diag = lu.matrixLU().diagonal();
  for (Index i = 0; i < diag.size(); ++i) {
    if (abs(diag(i)) < Scalar(kPivotThreshold) * scale) {
      throw InvalidInput("information matrix is singular (" + std::to_string(d.runs()) + " runs, " +
                         std::to_string(mtm.rows()) + " terms): second-order model not estimable");
    }
  }
  const auto inv = lu.inverse();
  std::vector<std::pair<std::string, Scalar>> out;
  out.reserve(m.labels.size());
  for (std::size_t i = 0; i < m.labels.size(); ++i) out.emplace_back(m.labels[i], inv(static_cast<Index>(i), static_cast<Index>(i)));
  return out;
}

/// CSV with a header row of labels. decimals < 0: full round-trip precision;
/// otherwise fixed with that many decimals (3 gives the rounded view).
template <typename Scalar>
void write_matrix_csv(std::ostream& os, const std::vector<std::string>& labels,
                      const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& values, int decimals = -1) {
  std::ostringstream buf;
  if (decimals < 0) {
    buf << std::setprecision(17);
  } else {
    buf << std::fixed << std::setprecision(decimals);
  }
  buf << "term";
  for (const auto& l : labels) buf << ',' << l;
  buf << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    buf << labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < values.cols(); ++j) {
      Scalar v = values(i, j);
      // no "-0.000" in the rounded view
      if (decimals >= 0 && std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = Scalar(0);
      buf << ',' << v;
    }
    buf << '\n';
  }
  os << buf.str();
}

template <typename Scalar>
void write_variances_csv(std::ostream& os, const std::vector<std::pair<std::string, Scalar>>& variances,
                         int decimals = -1) {
  std::ostringstream buf;
  if (decimals < 0) {
    buf << std::setprecision(17);
  } else {
    buf << std::fixed << std::setprecision(decimals);
  }
  buf << "term,variance\n";
  for (const auto& [label, v] : variances) buf << label << ',' << v << '\n';
  os << buf.str();
}

}  // namespace ffd
