#include "grantmine/bayes_tuning.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <set>

#include "grantmine/error.h"
#include "grantmine/random.h"
#include "grantmine/report_format.h"

namespace grantmine {
namespace {

double Ucb(const GaussianProcess& gp, std::span<const double> x, double kappa) {
  const GpPrediction p = gp.Predict(x);
  return p.mean + kappa * std::sqrt(p.variance);
}

std::vector<double> RandomUnitPoint(Rng& rng, std::size_t dim) {
  std::vector<double> x(dim);
  for (double& v : x) v = UniformUnit(rng);
  return x;
}

void Shuffle(std::vector<std::uint32_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[UniformIndex(rng, i)]);
  }
}

}  // namespace

ParamSpace::ParamSpace(std::vector<ParamDim> dims) : dims_(std::move(dims)) {
  std::set<std::string> names;
  for (const ParamDim& d : dims_) {
    if (!(d.low < d.high)) throw Error("parameter " + d.name + " needs low < high");
    if (!names.insert(d.name).second) throw Error("duplicate parameter " + d.name);
  }
}

std::vector<double> ParamSpace::ToUnit(std::span<const double> point) const {
  if (point.size() != dims_.size()) throw Error("point has the wrong dimension");
  std::vector<double> unit(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    unit[i] = (point[i] - dims_[i].low) / (dims_[i].high - dims_[i].low);
  }
  return unit;
}

std::vector<double> ParamSpace::FromUnit(std::span<const double> unit) const {
  if (unit.size() != dims_.size()) throw Error("point has the wrong dimension");
  std::vector<double> point(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    point[i] = dims_[i].low + std::clamp(unit[i], 0.0, 1.0) * (dims_[i].high - dims_[i].low);
  }
  return point;
}

std::vector<double> ParamSpace::Snap(std::span<const double> point) const {
  if (point.size() != dims_.size()) throw Error("point has the wrong dimension");
  std::vector<double> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    double v = std::clamp(point[i], dims_[i].low, dims_[i].high);
    if (dims_[i].integer) v = std::clamp(std::floor(v + 0.5), dims_[i].low, dims_[i].high);
    out[i] = v;
  }
  return out;
}

bool ParamSpace::Contains(std::span<const double> point) const {
  if (point.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (!(point[i] >= dims_[i].low && point[i] <= dims_[i].high)) return false;
    if (dims_[i].integer && point[i] != std::floor(point[i])) return false;
  }
  return true;
}

ParamSpace ForestSearchSpace() {
  return ParamSpace({{"max_depth", 5, 60, true},
                     {"min_samples_split", 10, 100, true},
                     {"max_features", 0.1, 0.999, false},
                     {"min_samples_leaf", 10, 50, true},
                     {"n_estimators", 100, 400, true}});
}

ParamSpace TreeSearchSpace() {
  return ParamSpace({{"max_depth", 3, 10, true},
                     {"min_samples_split", 3, 10, true},
                     {"max_features", 0.1, 0.999, false},
                     {"min_samples_leaf", 3, 10, true}});
}

ParamSpace SearchSpaceFor(ClassifierKind kind) {
  return kind == ClassifierKind::kRandomForest ? ForestSearchSpace() : TreeSearchSpace();
}

Hyperparams ApplyPoint(const ParamSpace& space, std::span<const double> point, Hyperparams base) {
  const std::vector<double> p = space.Snap(point);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::string& name = space.dims()[i].name;
    const double v = p[i];
    if (name == "max_depth") {
      base.max_depth = static_cast<int>(v);
    } else if (name == "min_samples_split") {
      base.min_samples_split = static_cast<int>(v);
    } else if (name == "min_samples_leaf") {
      base.min_samples_leaf = static_cast<int>(v);
    } else if (name == "max_features") {
      base.max_features = v;
    } else if (name == "n_estimators") {
      base.n_estimators = static_cast<int>(v);
    } else {
      throw Error("unknown hyperparameter " + name);
    }
  }
  return base;
}

void TuneConfig::Validate() const {
  if (init_points < 1) throw Error("init_points must be >= 1");
  if (n_iter < 0) throw Error("n_iter must be >= 0");
  if (!(kappa > 0.0)) throw Error("kappa must be > 0");
  if (folds < 2) throw Error("folds must be >= 2");
}

std::vector<std::vector<std::uint32_t>> StratifiedKFold(std::span<const Label> labels, int k,
                                                        std::uint64_t seed) {
  if (k < 2) throw Error("k-fold needs k >= 2");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw Error("k-fold with k=" + std::to_string(k) + " exceeds " +
                std::to_string(labels.size()) + " samples");
  }
  std::vector<std::uint32_t> by_class[2];
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<int>(labels[i])].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) throw Error("k-fold needs both classes");

  Rng rng = MakeRng(seed, 0);
  std::vector<std::vector<std::uint32_t>> folds(k);
  std::size_t dealt = 0;
  for (auto& members : by_class) {
    Shuffle(members, rng);
    for (std::uint32_t i : members) folds[dealt++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

double CrossValScore(const Dataset& data, ClassifierKind kind, const Hyperparams& params, int k,
                     std::uint64_t seed) {
  data.Validate();
  const auto folds = StratifiedKFold(data.labels, k, seed);
  std::vector<int> fold_of(data.size());
  for (int f = 0; f < k; ++f) {
    for (std::uint32_t i : folds[f]) fold_of[i] = f;
  }
  double total = 0.0;
  for (int f = 0; f < k; ++f) {
    Dataset train;
    train.n_features = data.n_features;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] == f) continue;
      train.rows.push_back(data.rows[i]);
      train.labels.push_back(data.labels[i]);
    }
    const Classifier model = Classifier::Fit(kind, train, params);
    std::size_t correct = 0;
    for (std::uint32_t i : folds[f]) correct += model.Predict(data.rows[i]) == data.labels[i];
    total += static_cast<double>(correct) / static_cast<double>(folds[f].size());
  }
  return total / k;
}

std::vector<double> AcquireNext(const GaussianProcess& gp, std::size_t dim, double kappa,
                                std::uint64_t seed) {
  Rng rng = MakeRng(seed, 0);
  std::vector<std::vector<double>> candidates;
  std::vector<double> values;
  candidates.reserve(kAcquisitionCandidates);
  for (int c = 0; c < kAcquisitionCandidates; ++c) {
    candidates.push_back(RandomUnitPoint(rng, dim));
    values.push_back(Ucb(gp, candidates.back(), kappa));
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  const auto starts = std::min<std::size_t>(kAcquisitionRefineStarts, order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] != values[b] ? values[a] > values[b] : a < b;
                    });

  std::vector<double> best = candidates[order[0]];
  double best_value = values[order[0]];
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<double> x = candidates[order[s]];
    double fx = values[order[s]];
    for (double step = 0.1; step > 1e-4;) {
      bool moved = false;
      for (std::size_t d = 0; d < dim; ++d) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> y = x;
          y[d] = std::clamp(y[d] + sign * step, 0.0, 1.0);
          const double fy = Ucb(gp, y, kappa);
          if (fy > fx) {
            x = std::move(y);
            fx = fy;
            moved = true;
          }
        }
      }
      if (!moved) step /= 2.0;
    }
    if (fx > best_value) {
      best = x;
      best_value = fx;
    }
  }
  return best;
}

TuneResult Optimize(const Objective& objective, const ParamSpace& space,
                    const TuneConfig& config) {
  config.Validate();
  if (space.size() == 0) throw Error("cannot tune over an empty parameter space");

  TuneResult result;
  auto evaluate = [&](const std::vector<double>& unit) {
    Observation obs;
    obs.point = space.Snap(space.FromUnit(unit));
    try {
      obs.score = objective(obs.point);
      if (!std::isfinite(obs.score)) throw Error("non-finite objective value");
    } catch (const std::exception&) {
      obs.score = 0.0;
      obs.failed = true;
    }
    if (result.history.empty() || obs.score > result.best_score) {
      result.best_point = obs.point;
      result.best_score = obs.score;
    }
    result.history.push_back(std::move(obs));
  };

  Rng init_rng = MakeRng(config.seed, 0);
  for (int i = 0; i < config.init_points; ++i) evaluate(RandomUnitPoint(init_rng, space.size()));

  for (int it = 0; it < config.n_iter; ++it) {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const Observation& o : result.history) {
      xs.push_back(space.ToUnit(o.point));
      ys.push_back(o.score);
    }
    const GaussianProcess gp = GaussianProcess::Fit(std::move(xs), std::move(ys));
    evaluate(AcquireNext(gp, space.size(), config.kappa,
                         DeriveSeed(config.seed, 1 + static_cast<std::uint64_t>(it))));
  }
  return result;
}

void WriteTuneTrace(const TuneResult& result, const ParamSpace& space,
                    const std::string& config_hash, std::uint64_t seed, std::ostream& out) {
  out << "iteration";
  for (const ParamDim& d : space.dims()) out << ',' << CsvField(d.name);
  out << ",score,failed,config_hash,seed\n";
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    const Observation& o = result.history[i];
    out << i + 1;
    for (double v : o.point) out << ',' << FormatDouble(v);
    out << ',' << FormatDouble(o.score) << ',' << (o.failed ? 1 : 0) << ',' << config_hash << ','
        << seed << '\n';
  }
}

}  // namespace grantmine
