#ifndef GRANTMINE_METRICS_H_
#define GRANTMINE_METRICS_H_

#include <cstdint>
#include <span>
#include <string>

#include "grantmine/tree_models.h"

namespace grantmine {

// High is the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  void Add(Label truth, Label predicted);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct EvaluationReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double f1 = 0.0;
  // Set when tp + fp + fn == 0; f1 is then reported as 0.
  bool f1_undefined = false;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Accuracy (tp + tn) / total and F1 2tp / (2tp + fp + fn). Throws Error on an
// empty matrix.
EvaluationReport Summarize(const ConfusionMatrix& cm, std::string config_hash = {},
                           std::uint64_t seed = 0);

// Throws Error when `test` is empty.
EvaluationReport Evaluate(const Classifier& model, const Dataset& test,
                          std::string config_hash = {}, std::uint64_t seed = 0);

}  // namespace grantmine

#endif  // GRANTMINE_METRICS_H_
