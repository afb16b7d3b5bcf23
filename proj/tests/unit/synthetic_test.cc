#include "grantmine/synthetic.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "grantmine/error.h"
#include "grantmine/porter_stemmer.h"
#include "grantmine/preprocess.h"

namespace grantmine {
namespace {

std::string Serialized(const Corpus& c) {
  std::ostringstream out;
  WriteCorpus(c, out);
  return out.str();
}

TEST(GenerateSynthetic, ScoreStatisticsMatchSpec) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.doc_length_mean = 20;
    const SyntheticCorpus s = GenerateSynthetic(spec);
    ASSERT_EQ(s.corpus.size(), 2000u);
    const ScoreStatistics stats = ComputeStatistics(s.corpus);
    EXPECT_NEAR(stats.mean, spec.score_mean, 0.05);
    EXPECT_NEAR(stats.std, spec.score_std, 0.05);
    EXPECT_GE(stats.min, spec.score_min);
    EXPECT_LE(stats.max, spec.score_max);
    EXPECT_DOUBLE_EQ(s.median, stats.median);
  }
}

TEST(GenerateSynthetic, PlantedTermsAreRareAndSkewed) {
  SyntheticSpec spec;
  spec.seed = 4;
  const SyntheticCorpus s = GenerateSynthetic(spec);
  ASSERT_EQ(s.planted.size(), 10u);
  const PreprocessConfig raw{.remove_stopwords = false, .stemming = false};
  std::vector<std::set<std::string>> tokens;
  for (const Document& d : s.corpus) {
    const auto t = Tokenize(Normalize(d.text, raw));
    tokens.emplace_back(t.begin(), t.end());
  }
  const double n = static_cast<double>(s.corpus.size());
  for (const std::string& term : s.planted) {
    int df = 0, above = 0, above_total = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const bool has = tokens[i].contains(term);
      const bool high = *s.corpus[i].ic_score > s.median;
      df += has;
      above += has && high;
      above_total += high;
    }
    EXPECT_LE(df / n, spec.signal_strength + 0.05) << term;
    EXPECT_GT(above, df / 2) << term;
    EXPECT_NEAR(static_cast<double>(above) / above_total, spec.signal_strength, 0.06) << term;
  }
}

TEST(GenerateSynthetic, WordsSurviveStemming) {
  SyntheticSpec spec;
  spec.n_docs = 50;
  const SyntheticCorpus s = GenerateSynthetic(spec);
  const PreprocessConfig raw{.remove_stopwords = false, .stemming = false};
  for (const Document& d : s.corpus) {
    for (const std::string& t : Tokenize(Normalize(d.text, raw))) EXPECT_EQ(Stem(t), t);
  }
  for (const std::string& t : s.planted) EXPECT_EQ(Stem(t), t);
}

TEST(GenerateSynthetic, DeterministicUnderSeed) {
  SyntheticSpec spec;
  spec.n_docs = 300;
  spec.seed = 12;
  const std::string a = Serialized(GenerateSynthetic(spec).corpus);
  EXPECT_EQ(a, Serialized(GenerateSynthetic(spec).corpus));
  spec.seed = 13;
  EXPECT_NE(a, Serialized(GenerateSynthetic(spec).corpus));
}

TEST(GenerateSynthetic, ScoresOnStepGridWithMedianTies) {
  SyntheticSpec spec;
  const SyntheticCorpus s = GenerateSynthetic(spec);
  int at_median = 0;
  for (const Document& d : s.corpus) {
    const double scaled = *d.ic_score * 100;
    EXPECT_NEAR(scaled, std::round(scaled), 1e-6);
    at_median += *d.ic_score == s.median;
  }
  EXPECT_GT(at_median, 0);
}

TEST(SyntheticSpec, Validation) {
  SyntheticSpec spec;
  spec.n_docs = 0;
  EXPECT_THROW(spec.Validate(), Error);
  spec = SyntheticSpec{};
  spec.signal_strength = 1.5;
  EXPECT_THROW(spec.Validate(), Error);
  spec = SyntheticSpec{};
  spec.score_min = 8;
  EXPECT_THROW(GenerateSynthetic(spec), Error);
}

}  // namespace
}  // namespace grantmine
