#ifndef GRANTMINE_PREPROCESS_H_
#define GRANTMINE_PREPROCESS_H_

#include <cstddef>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grantmine/corpus.h"

namespace grantmine {

struct PreprocessConfig {
  bool lowercase = true;
  bool strip_digits = true;
  bool strip_punct = true;
  bool remove_stopwords = true;
  // Unigrams whose IDF over the fitting documents is strictly below this are
  // stopwords.
  double stopword_idf_threshold = 1.0;
  bool stemming = true;

  void Validate() const;
  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

struct TokenizedDocument {
  std::string id;
  std::vector<std::string> tokens;

  friend bool operator==(const TokenizedDocument&, const TokenizedDocument&) = default;
};

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::set<std::string, std::less<>> terms, double threshold,
               std::size_t source_corpus_size)
      : terms_(std::move(terms)),
        threshold_(threshold),
        source_corpus_size_(source_corpus_size) {}

  bool Contains(std::string_view token) const { return terms_.contains(token); }
  const std::set<std::string, std::less<>>& terms() const { return terms_; }
  double threshold() const { return threshold_; }
  std::size_t source_corpus_size() const { return source_corpus_size_; }
  std::size_t size() const { return terms_.size(); }

  // Debug dump: sorted, one term per line.
  void WriteSorted(std::ostream& out) const;

 private:
  std::set<std::string, std::less<>> terms_;
  double threshold_ = 0.0;
  std::size_t source_corpus_size_ = 0;
};

// Lowercases ASCII letters, deletes ASCII digits and replaces punctuation
// (ASCII plus the U+2000..U+206F general-punctuation block) with a space.
// Other bytes, including non-ASCII letters, pass through.
std::string Normalize(std::string_view text, const PreprocessConfig& config);

// Splits on runs of ASCII whitespace; never yields empty tokens.
std::vector<std::string> Tokenize(std::string_view text);

// A token is a stopword iff log2(N / df) < threshold over `docs`.
// Throws Error when `docs` is empty.
StopwordList BuildStopwordList(std::span<const TokenizedDocument> docs, double threshold);

TokenizedDocument RemoveStopwords(TokenizedDocument doc, const StopwordList& stops);

struct PreprocessResult {
  std::vector<TokenizedDocument> documents;
  StopwordList stopwords;
};

// normalize -> tokenize -> stopwords (built from and applied to `corpus`) -> stem.
// Throws Error for an empty corpus.
PreprocessResult PreprocessCorpus(const Corpus& corpus, const PreprocessConfig& config);
PreprocessResult PreprocessDocuments(std::span<const Document* const> docs,
                                     const PreprocessConfig& config);

// Runs the same chain on unseen documents with a frozen stopword list.
TokenizedDocument PreprocessDocument(const Document& doc, const PreprocessConfig& config,
                                     const StopwordList& stops);

}  // namespace grantmine

#endif  // GRANTMINE_PREPROCESS_H_
