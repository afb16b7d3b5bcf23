#include "grantmine/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "grantmine/error.h"
#include "grantmine/random.h"

namespace grantmine {
namespace {

constexpr std::string_view kConsonants = "bdfgkmnprtvz";
constexpr std::string_view kVowels = "ao";

std::vector<std::string> MakeWords(Rng& rng, std::size_t count, int syllables,
                                   std::set<std::string>& used) {
  std::vector<std::string> words;
  words.reserve(count);
  while (words.size() < count) {
    std::string w;
    for (int s = 0; s < syllables; ++s) {
      w += kConsonants[UniformIndex(rng, kConsonants.size())];
      w += kVowels[UniformIndex(rng, kVowels.size())];
    }
    if (used.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

double StandardNormal(Rng& rng) {
  // Box-Muller, first variate only.
  const double u1 = 1.0 - UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Poisson(Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  std::size_t k = 0;
  for (double p = UniformUnit(rng); p > limit; p *= UniformUnit(rng)) ++k;
  return k;
}

std::string Capitalize(std::string w) {
  if (!w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (n_docs < 1 || common_vocab_size < 1 || rare_vocab_size < 1 || planted_terms < 1) {
    throw Error("synthetic sizes must be >= 1");
  }
  if (!(doc_length_mean >= 1.0)) throw Error("doc_length_mean must be >= 1");
  if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
    throw Error("signal_strength must lie in [0, 1]");
  }
  if (!(rare_token_rate >= 0.0 && rare_token_rate <= 1.0)) {
    throw Error("rare_token_rate must lie in [0, 1]");
  }
  if (!(score_std >= 0.0)) throw Error("score_std must be >= 0");
  if (!(score_min < score_max)) throw Error("score_min must be below score_max");
  if (!(score_step > 0.0)) throw Error("score_step must be > 0");
  if (common_vocab_size > 10000 || rare_vocab_size > 200000 || planted_terms > 1000000) {
    throw Error("synthetic vocabulary larger than the pseudo-word space");
  }
}

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng vocab_rng = MakeRng(spec.seed, 0);
  Rng score_rng = MakeRng(spec.seed, 1);
  Rng text_rng = MakeRng(spec.seed, 2);

  std::set<std::string> used;
  const std::vector<std::string> common = MakeWords(vocab_rng, spec.common_vocab_size, 3, used);
  const std::vector<std::string> rare = MakeWords(vocab_rng, spec.rare_vocab_size, 4, used);
  std::vector<std::string> planted = MakeWords(vocab_rng, spec.planted_terms, 5, used);

  std::vector<double> zipf_cdf(common.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < common.size(); ++r) zipf_cdf[r] = acc += 1.0 / static_cast<double>(r + 1);
  for (double& c : zipf_cdf) c /= acc;

  // Dividing by the reciprocal keeps 0.01-step scores at their shortest decimal form.
  const double per_unit = 1.0 / spec.score_step;
  std::vector<double> scores(spec.n_docs);
  for (double& s : scores) {
    const double raw = spec.score_mean + spec.score_std * StandardNormal(score_rng);
    s = std::clamp(std::round(raw * per_unit) / per_unit, spec.score_min, spec.score_max);
  }
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const double median = NearestRank(sorted, 0.5);

  static constexpr std::string_view kGrantTypes[] = {"Ideas", "Synergy", "Standard"};
  std::vector<Document> docs;
  docs.reserve(spec.n_docs);
  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    const double p_plant =
        scores[d] > median ? spec.signal_strength : spec.signal_strength / 10.0;
    std::vector<std::string> words;
    const std::size_t length = std::max<std::size_t>(1, Poisson(text_rng, spec.doc_length_mean));
    for (std::size_t t = 0; t < length; ++t) {
      if (UniformUnit(text_rng) < spec.rare_token_rate) {
        words.push_back(rare[UniformIndex(text_rng, rare.size())]);
      } else {
        const auto it = std::upper_bound(zipf_cdf.begin(), zipf_cdf.end(), UniformUnit(text_rng));
        words.push_back(common[std::min<std::size_t>(it - zipf_cdf.begin(), common.size() - 1)]);
      }
    }
    for (const std::string& term : planted) {
      if (UniformUnit(text_rng) < p_plant) {
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(UniformIndex(text_rng, words.size() + 1)),
                     term);
      }
    }

    // Surface noise the preprocessor has to undo: sentence punctuation,
    // capitals and the odd number.
    std::string text;
    bool sentence_start = true;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i > 0) text += ' ';
      text += sentence_start ? Capitalize(words[i]) : words[i];
      sentence_start = false;
      const std::uint64_t roll = UniformIndex(text_rng, 100);
      if (roll < 8) {
        text += '.';
        sentence_start = true;
      } else if (roll < 14) {
        text += ',';
      } else if (roll < 16) {
        text += " (" + std::to_string(2000 + UniformIndex(text_rng, 25)) + ")";
      }
    }
    if (!sentence_start) text += '.';

    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", d);
    doc.id = id;
    doc.text = std::move(text);
    doc.ic_score = scores[d];
    doc.grant_type = std::string(kGrantTypes[UniformIndex(text_rng, 3)]);
    docs.push_back(std::move(doc));
  }

  SyntheticCorpus out;
  out.corpus = Corpus(std::move(docs), Provenance{"synthetic", ""});
  out.planted = std::move(planted);
  out.median = median;
  return out;
}

}  // namespace grantmine
