#ifndef GRANTMINE_SYNTHETIC_H_
#define GRANTMINE_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "grantmine/corpus.h"

namespace grantmine {

// A corpus with a known signal: a handful of planted terms that mostly occur
// in documents scoring above the median.
struct SyntheticSpec {
  std::size_t n_docs = 2000;
  std::size_t common_vocab_size = 2000;
  std::size_t rare_vocab_size = 3000;
  std::size_t planted_terms = 10;
  double doc_length_mean = 110.0;
  // Fraction of ordinary tokens taken from the rare vocabulary.
  double rare_token_rate = 0.05;
  double score_mean = 4.92;
  double score_std = 0.65;
  double score_min = 1.75;
  double score_max = 6.90;
  // Scores are rounded to this step so that ties, and documents sitting
  // exactly on the median, occur as they do with averaged reviewer scores.
  double score_step = 0.01;
  double signal_strength = 0.3;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<std::string> planted;  // planted terms in generation order
  double median = 0.0;               // nearest-rank median the planting used
};

// Every word is a consonant-vowel pseudo-word ending in a vowel, which the
// Porter stemmer leaves untouched. Documents above the median carry each
// planted term with probability signal_strength, the rest (including those at
// the median) with signal_strength / 10. Deterministic under spec.seed.
SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace grantmine

#endif  // GRANTMINE_SYNTHETIC_H_
