#ifndef GRANTMINE_BAYES_TUNING_H_
#define GRANTMINE_BAYES_TUNING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "grantmine/gaussian_process.h"
#include "grantmine/tree_models.h"

namespace grantmine {

struct ParamDim {
  std::string name;
  double low = 0.0;
  double high = 1.0;
  bool integer = false;
};

class ParamSpace {
 public:
  ParamSpace() = default;
  // Throws Error unless every dim has low < high and names are unique.
  explicit ParamSpace(std::vector<ParamDim> dims);

  std::span<const ParamDim> dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }

  std::vector<double> ToUnit(std::span<const double> point) const;
  std::vector<double> FromUnit(std::span<const double> unit) const;
  // Clamps to bounds and rounds integer dims half-up.
  std::vector<double> Snap(std::span<const double> point) const;
  bool Contains(std::span<const double> point) const;

 private:
  std::vector<ParamDim> dims_;
};

// Forest box: max_depth 5..60, min_samples_split 10..100, max_features
// 0.1..0.999, min_samples_leaf 10..50, n_estimators 100..400.
ParamSpace ForestSearchSpace();
// Tree box: max_depth 3..10, min_samples_split 3..10, max_features
// 0.1..0.999, min_samples_leaf 3..10.
ParamSpace TreeSearchSpace();
ParamSpace SearchSpaceFor(ClassifierKind kind);

// Overrides the fields of `base` named by the space's dims.
Hyperparams ApplyPoint(const ParamSpace& space, std::span<const double> point, Hyperparams base);

struct Observation {
  std::vector<double> point;
  double score = 0.0;
  bool failed = false;  // objective threw; score recorded as 0
};

struct TuneConfig {
  int init_points = 5;
  int n_iter = 25;
  double kappa = 2.576;  // UCB exploration weight
  std::uint64_t seed = 0;
  int folds = 10;

  void Validate() const;
};

struct TuneResult {
  std::vector<double> best_point;
  double best_score = 0.0;
  std::vector<Observation> history;
};

// Folds partition [0, labels.size()); within each class the fold sizes differ
// by at most one. Throws Error when k < 2, k > |labels| or a class is missing.
std::vector<std::vector<std::uint32_t>> StratifiedKFold(std::span<const Label> labels, int k,
                                                        std::uint64_t seed);

// Mean held-out accuracy over k stratified folds.
double CrossValScore(const Dataset& data, ClassifierKind kind, const Hyperparams& params, int k,
                     std::uint64_t seed);

inline constexpr int kAcquisitionCandidates = 1000;
inline constexpr int kAcquisitionRefineStarts = 5;

// Maximizes mean + kappa * stddev over the unit cube by seeded random
// candidates followed by compass search from the best few. Returns a
// unit-cube point.
std::vector<double> AcquireNext(const GaussianProcess& gp, std::size_t dim, double kappa,
                                std::uint64_t seed);

using Objective = std::function<double(std::span<const double>)>;

// init_points seeded-uniform evaluations, then n_iter GP/UCB proposals. Points
// are snapped before evaluation and recorded snapped. Best score ties keep the
// earliest observation.
TuneResult Optimize(const Objective& objective, const ParamSpace& space, const TuneConfig& config);

// CSV: iteration, one column per dim, score, failed, config_hash, seed.
void WriteTuneTrace(const TuneResult& result, const ParamSpace& space,
                    const std::string& config_hash, std::uint64_t seed, std::ostream& out);

}  // namespace grantmine

#endif  // GRANTMINE_BAYES_TUNING_H_
