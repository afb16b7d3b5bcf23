#include <benchmark/benchmark.h>

#include "grantmine/feature_encoding.h"
#include "grantmine/porter_stemmer.h"
#include "grantmine/preprocess.h"
#include "grantmine/synthetic.h"

namespace grantmine {
namespace {

void BM_Stem(benchmark::State& state) {
  const std::vector<std::string> words = {"caresses", "relational", "generalizations",
                                          "hopefulness", "conditional", "electrical",
                                          "adjustment", "controlling", "sky", "innovation"};
  for (auto _ : state) {
    for (const std::string& w : words) benchmark::DoNotOptimize(Stem(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_Stem);

struct TextFixture {
  std::vector<TokenizedDocument> docs;

  explicit TextFixture(std::size_t n_docs) {
    SyntheticSpec spec;
    spec.n_docs = n_docs;
    const SyntheticCorpus syn = GenerateSynthetic(spec);
    docs = PreprocessCorpus(syn.corpus, PreprocessConfig{}).documents;
  }
};

void BM_PreprocessCorpus(benchmark::State& state) {
  SyntheticSpec spec;
  spec.n_docs = static_cast<std::size_t>(state.range(0));
  const SyntheticCorpus syn = GenerateSynthetic(spec);
  for (auto _ : state) benchmark::DoNotOptimize(PreprocessCorpus(syn.corpus, PreprocessConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PreprocessCorpus)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BuildVocabulary(benchmark::State& state) {
  const TextFixture fx(500);
  const auto level = static_cast<NgramLevel>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(BuildVocabulary(fx.docs, level, PruneRule{}));
}
BENCHMARK(BM_BuildVocabulary)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const TextFixture fx(500);
  const Vocabulary vocab = BuildVocabulary(fx.docs, NgramLevel::kBigram, PruneRule{1});
  const IdfTable idf = ComputeIdf(vocab);
  const auto scheme = state.range(0) == 0 ? EncodingScheme::kTfIdf : EncodingScheme::kIdfPresence;
  for (auto _ : state) {
    for (const TokenizedDocument& d : fx.docs) benchmark::DoNotOptimize(Encode(d, vocab, idf, scheme));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.docs.size()));
}
BENCHMARK(BM_Encode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace grantmine
