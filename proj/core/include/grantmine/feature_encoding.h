#ifndef GRANTMINE_FEATURE_ENCODING_H_
#define GRANTMINE_FEATURE_ENCODING_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grantmine/preprocess.h"
#include "grantmine/sparse_vector.h"

namespace grantmine {

// Bigram means unigrams plus bigrams; Trigram adds trigrams on top.
enum class NgramLevel { kUnigram = 1, kBigram = 2, kTrigram = 3 };

enum class EncodingScheme {
  kTfIdf,        // count * idf, L2-normalized
  kIdfPresence,  // idf when the term occurs at all, otherwise absent
};

// A term survives iff its total occurrence count across the training documents
// exceeds `min_total_occurrences` (0 keeps everything).
struct PruneRule {
  int min_total_occurrences = 0;

  bool Keeps(std::int64_t total_count) const { return total_count > min_total_occurrences; }
  friend bool operator==(const PruneRule&, const PruneRule&) = default;
};

std::string_view ToString(NgramLevel level);
std::string_view ToString(EncodingScheme scheme);
NgramLevel ParseNgramLevel(std::string_view name);
EncodingScheme ParseEncodingScheme(std::string_view name);

inline constexpr char kNgramJoiner = '_';

// Lexicographically ordered term index with training-corpus statistics.
class Vocabulary {
 public:
  struct TermStats {
    std::string term;
    std::int64_t doc_freq;
    std::int64_t total_count;
  };

  Vocabulary() = default;
  // `terms` must be strictly ascending with 1 <= doc_freq <= n_docs.
  Vocabulary(std::vector<TermStats> terms, std::size_t n_docs, NgramLevel level,
             PruneRule prune);
  Vocabulary(const Vocabulary& other);
  Vocabulary& operator=(const Vocabulary& other);
  Vocabulary(Vocabulary&&) noexcept = default;
  Vocabulary& operator=(Vocabulary&&) noexcept = default;

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::size_t n_docs() const { return n_docs_; }
  NgramLevel level() const { return level_; }
  PruneRule prune() const { return prune_; }

  const std::string& term(std::size_t i) const { return terms_[i].term; }
  std::int64_t doc_freq(std::size_t i) const { return terms_[i].doc_freq; }
  std::int64_t total_count(std::size_t i) const { return terms_[i].total_count; }
  std::span<const TermStats> entries() const { return terms_; }

  std::optional<FeatureIndex> IndexOf(std::string_view term) const;

  // FNV-1a over the ordered term list, as 16 hex digits.
  std::string Fingerprint() const;

 private:
  void RebuildIndex();

  std::vector<TermStats> terms_;
  // Keys view into terms_.
  std::unordered_map<std::string_view, FeatureIndex> index_;
  std::size_t n_docs_ = 0;
  NgramLevel level_ = NgramLevel::kUnigram;
  PruneRule prune_;
};

// idf(t) = log2(N / df(t)), aligned with vocabulary indices.
class IdfTable {
 public:
  IdfTable() = default;
  explicit IdfTable(std::vector<double> idf) : idf_(std::move(idf)) {}

  double operator[](std::size_t i) const { return idf_[i]; }
  std::size_t size() const { return idf_.size(); }
  std::span<const double> values() const { return idf_; }

 private:
  std::vector<double> idf_;
};

// All n-grams up to `level` in document order: unigrams, then bigrams, then
// trigrams, joined with '_'.
std::vector<std::string> ExtractNgrams(std::span<const std::string> tokens, NgramLevel level);

// Throws Error for an empty document set.
Vocabulary BuildVocabulary(std::span<const TokenizedDocument> docs, NgramLevel level,
                           PruneRule prune);

IdfTable ComputeIdf(const Vocabulary& vocab);

// Out-of-vocabulary terms contribute nothing.
SparseVector Encode(const TokenizedDocument& doc, const Vocabulary& vocab, const IdfTable& idf,
                    EncodingScheme scheme);

// Inspection dump: header then `term,df,total_count,idf` rows in vocabulary order.
void WriteVocabularyCsv(const Vocabulary& vocab, const IdfTable& idf, std::ostream& out);

}  // namespace grantmine

#endif  // GRANTMINE_FEATURE_ENCODING_H_
