#ifndef GRANTMINE_CORPUS_H_
#define GRANTMINE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grantmine {

// Lowest IC score a proposal may carry and still be used.
inline constexpr double kMinValidScore = 1.0;

struct Document {
  std::string id;
  std::string text;
  std::optional<double> ic_score;
  // Every other assessment score ("feasibility", "significance", ...).
  std::map<std::string, double> other_scores;
  std::string grant_type;
  std::optional<std::string> section;

  bool HasValidScore() const {
    return ic_score.has_value() && *ic_score >= kMinValidScore;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

struct Provenance {
  std::string source;
  std::string loaded_at;  // ISO-8601 UTC; empty for derived corpora
};

// An ordered, id-unique collection of documents. Immutable once built.
class Corpus {
 public:
  Corpus() = default;
  // Throws Error on an empty or duplicate id.
  explicit Corpus(std::vector<Document> documents, Provenance provenance = {});

  const std::vector<Document>& documents() const { return documents_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  auto begin() const { return documents_.begin(); }
  auto end() const { return documents_.end(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  // Returns nullptr when absent.
  const Document* Find(std::string_view id) const;

 private:
  std::vector<Document> documents_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  Provenance provenance_;
};

struct ScoreStatistics {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double median = 0.0;
  double mode = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

// JSON Lines ingestion. Each line holds {"id", "text", "scores": {"ic", ...},
// "grant_type", "section"?}. Blank lines are skipped. Errors name the 1-based
// line number, or the offending id for duplicates.
Corpus LoadCorpus(const std::filesystem::path& path);
Corpus ParseCorpus(std::istream& in, std::string source_name);

// Canonical single-line JSON for one document (keys in load-format order).
std::string SerializeDocument(const Document& doc);
void WriteCorpus(const Corpus& corpus, std::ostream& out);
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path);

// Documents with an IC score present and >= 1.0.
Corpus FilterValid(const Corpus& corpus);

// Documents matching every provided filter, in order.
Corpus FilterBy(const Corpus& corpus,
                const std::optional<std::string>& grant_type,
                const std::optional<std::string>& section);

// Statistics over the valid IC scores. Quartiles and the median use the
// nearest-rank rule; mode ties go to the smaller score. Throws Error when no
// document has a valid score.
ScoreStatistics ComputeStatistics(const Corpus& corpus);
ScoreStatistics ComputeStatistics(std::span<const double> scores);

// Nearest-rank percentile of an ascending list: element ceil(fraction * n),
// 1-based, clamped to [1, n].
double NearestRank(std::span<const double> sorted, double fraction);
std::size_t NearestRankIndex(std::size_t n, double fraction);

}  // namespace grantmine

#endif  // GRANTMINE_CORPUS_H_
