#include <benchmark/benchmark.h>

#include <numeric>

#include "grantmine/experiment.h"
#include "grantmine/synthetic.h"

namespace grantmine {
namespace {

Dataset MakeDataset(EncodingScheme scheme) {
  SyntheticSpec spec;
  spec.n_docs = 800;
  const SyntheticCorpus syn = GenerateSynthetic(spec);
  std::vector<const Document*> docs;
  std::vector<Label> labels;
  for (const Document& d : syn.corpus) {
    if (const auto label = MedianLabel(*d.ic_score, syn.median)) {
      docs.push_back(&d);
      labels.push_back(*label);
    }
  }
  const TextPipeline text =
      TextPipeline::Fit(docs, PreprocessConfig{}, {scheme, NgramLevel::kUnigram, PruneRule{}});
  return EncodeDataset(text, docs, labels);
}

const Dataset& Presence() {
  static const Dataset data = MakeDataset(EncodingScheme::kIdfPresence);
  return data;
}

const Dataset& TfIdf() {
  static const Dataset data = MakeDataset(EncodingScheme::kTfIdf);
  return data;
}

void BM_FindBestSplit(benchmark::State& state) {
  const Dataset& data = state.range(0) == 0 ? TfIdf() : Presence();
  std::vector<std::uint32_t> samples(data.size());
  std::iota(samples.begin(), samples.end(), 0u);
  std::vector<FeatureIndex> features(data.n_features);
  std::iota(features.begin(), features.end(), 0u);
  for (auto _ : state) benchmark::DoNotOptimize(FindBestSplit(data, samples, features));
}
BENCHMARK(BM_FindBestSplit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FitTree(benchmark::State& state) {
  const Dataset& data = state.range(0) == 0 ? TfIdf() : Presence();
  const Hyperparams params = DefaultTreeParams(0);
  for (auto _ : state) benchmark::DoNotOptimize(FitTree(data, params));
}
BENCHMARK(BM_FitTree)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FitForest(benchmark::State& state) {
  Hyperparams params = ProposedForestParams(0);
  params.n_estimators = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(FitForest(TfIdf(), params));
}
BENCHMARK(BM_FitForest)->Arg(10)->Arg(102)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State& state) {
  const Dataset& data = TfIdf();
  const RandomForestModel forest = FitForest(data, ProposedForestParams(0));
  for (auto _ : state) {
    for (const SparseVector& row : data.rows) benchmark::DoNotOptimize(forest.Predict(row));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_PredictForest)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace grantmine
