#include "grantmine/gaussian_process.h"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "grantmine/error.h"

namespace grantmine {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

double Matern52(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  const double s5r = std::sqrt(5.0 * sq);
  return (1.0 + s5r + 5.0 * sq / 3.0) * std::exp(-s5r);
}

GaussianProcess GaussianProcess::Fit(std::vector<std::vector<double>> points,
                                     std::vector<double> values) {
  if (points.empty()) throw Error("GP needs at least one observation");
  if (points.size() != values.size()) throw Error("GP points and values differ in length");
  const std::size_t d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw Error("GP points differ in dimension");
  }

  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = k(j, i) = Matern52(points[i], points[j]);
    }
    k(i, i) += kGpNoiseVariance;
  }
  const Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) throw Error("GP covariance is not positive definite");

  GaussianProcess gp;
  const Eigen::Map<const Eigen::VectorXd> y(values.data(), n);
  const Eigen::VectorXd alpha = llt.solve(y);
  gp.alpha_.assign(alpha.data(), alpha.data() + n);
  const Matrix lower = llt.matrixL();
  gp.chol_lower_.assign(lower.data(), lower.data() + n * n);
  gp.points_ = std::move(points);
  return gp;
}

GpPrediction GaussianProcess::Predict(std::span<const double> x) const {
  if (x.size() != dim()) throw Error("GP query has the wrong dimension");
  const auto n = static_cast<Eigen::Index>(points_.size());
  Eigen::VectorXd kx(n);
  for (Eigen::Index i = 0; i < n; ++i) kx(i) = Matern52(points_[i], x);
  const Eigen::Map<const Eigen::VectorXd> alpha(alpha_.data(), n);
  const Eigen::Map<const Matrix> lower(chol_lower_.data(), n, n);
  const Eigen::VectorXd v = lower.triangularView<Eigen::Lower>().solve(kx);
  GpPrediction out;
  out.mean = kx.dot(alpha);
  out.variance = std::max(0.0, 1.0 - v.squaredNorm());
  return out;
}

}  // namespace grantmine
