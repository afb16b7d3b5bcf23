#include "grantmine/metrics.h"

#include "grantmine/error.h"

namespace grantmine {

void ConfusionMatrix::Add(Label truth, Label predicted) {
  if (truth == Label::kHigh) {
    (predicted == Label::kHigh ? tp : fn) += 1;
  } else {
    (predicted == Label::kHigh ? fp : tn) += 1;
  }
}

EvaluationReport Summarize(const ConfusionMatrix& cm, std::string config_hash,
                           std::uint64_t seed) {
  if (cm.tp < 0 || cm.fp < 0 || cm.fn < 0 || cm.tn < 0) {
    throw Error("confusion matrix has a negative cell");
  }
  if (cm.total() == 0) throw Error("cannot evaluate on an empty test set");
  EvaluationReport r;
  r.confusion = cm;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  const std::int64_t f1_den = 2 * cm.tp + cm.fp + cm.fn;
  if (f1_den == 0) {
    r.f1_undefined = true;
  } else {
    r.f1 = static_cast<double>(2 * cm.tp) / static_cast<double>(f1_den);
  }
  r.config_hash = std::move(config_hash);
  r.seed = seed;
  return r;
}

EvaluationReport Evaluate(const Classifier& model, const Dataset& test, std::string config_hash,
                          std::uint64_t seed) {
  test.Validate();
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < test.size(); ++i) cm.Add(test.labels[i], model.Predict(test.rows[i]));
  return Summarize(cm, std::move(config_hash), seed);
}

}  // namespace grantmine
