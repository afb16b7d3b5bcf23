#ifndef GRANTMINE_GAUSSIAN_PROCESS_H_
#define GRANTMINE_GAUSSIAN_PROCESS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace grantmine {

inline constexpr double kGpNoiseVariance = 1e-6;

// Matern 5/2 with unit length-scale and unit signal variance.
double Matern52(std::span<const double> a, std::span<const double> b);

struct GpPrediction {
  double mean = 0.0;
  double variance = 1.0;
};

// Zero-mean GP posterior over points in the unit cube with fixed kernel
// hyperparameters and noise variance kGpNoiseVariance.
class GaussianProcess {
 public:
  // All points must share one dimension. Throws Error for no observations or
  // mismatched sizes.
  static GaussianProcess Fit(std::vector<std::vector<double>> points, std::vector<double> values);

  GpPrediction Predict(std::span<const double> x) const;

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.empty() ? 0 : points_.front().size(); }

 private:
  std::vector<std::vector<double>> points_;
  std::vector<double> alpha_;       // (K + noise I)^-1 y
  std::vector<double> chol_lower_;  // row-major lower Cholesky factor of K + noise I
};

}  // namespace grantmine

#endif  // GRANTMINE_GAUSSIAN_PROCESS_H_
