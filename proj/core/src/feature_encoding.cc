#include "grantmine/feature_encoding.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <unordered_set>

#include "grantmine/error.h"
#include "grantmine/random.h"
#include "grantmine/report_format.h"

namespace grantmine {

std::string_view ToString(NgramLevel level) {
  switch (level) {
    case NgramLevel::kUnigram: return "unigram";
    case NgramLevel::kBigram: return "bigram";
    case NgramLevel::kTrigram: return "trigram";
  }
  return "unknown";
}

std::string_view ToString(EncodingScheme scheme) {
  switch (scheme) {
    case EncodingScheme::kTfIdf: return "tfidf";
    case EncodingScheme::kIdfPresence: return "idf-presence";
  }
  return "unknown";
}

NgramLevel ParseNgramLevel(std::string_view name) {
  if (name == "unigram" || name == "1") return NgramLevel::kUnigram;
  if (name == "bigram" || name == "2") return NgramLevel::kBigram;
  if (name == "trigram" || name == "3") return NgramLevel::kTrigram;
  throw Error("unknown n-gram level \"" + std::string(name) + "\"");
}

EncodingScheme ParseEncodingScheme(std::string_view name) {
  if (name == "tfidf" || name == "tf-idf") return EncodingScheme::kTfIdf;
  if (name == "idf-presence" || name == "idf_presence" || name == "presence") {
    return EncodingScheme::kIdfPresence;
  }
  throw Error("unknown encoding scheme \"" + std::string(name) + "\"");
}

Vocabulary::Vocabulary(std::vector<TermStats> terms, std::size_t n_docs, NgramLevel level,
                       PruneRule prune)
    : terms_(std::move(terms)), n_docs_(n_docs), level_(level), prune_(prune) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const TermStats& t = terms_[i];
    if (i > 0 && !(terms_[i - 1].term < t.term)) {
      throw Error("vocabulary terms must be strictly ascending at \"" + t.term + "\"");
    }
    if (t.doc_freq < 1 || static_cast<std::size_t>(t.doc_freq) > n_docs_) {
      throw Error("document frequency of \"" + t.term + "\" outside [1, N]");
    }
  }
  RebuildIndex();
}

Vocabulary::Vocabulary(const Vocabulary& other)
    : terms_(other.terms_), n_docs_(other.n_docs_), level_(other.level_), prune_(other.prune_) {
  RebuildIndex();
}

Vocabulary& Vocabulary::operator=(const Vocabulary& other) {
  if (this != &other) {
    terms_ = other.terms_;
    n_docs_ = other.n_docs_;
    level_ = other.level_;
    prune_ = other.prune_;
    RebuildIndex();
  }
  return *this;
}

void Vocabulary::RebuildIndex() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i].term, static_cast<FeatureIndex>(i));
  }
}

std::optional<FeatureIndex> Vocabulary::IndexOf(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::Fingerprint() const {
  std::string joined;
  for (const TermStats& t : terms_) {
    joined += t.term;
    joined.push_back('\n');
  }
  return Hex64(Fnv1a64(joined));
}

std::vector<std::string> ExtractNgrams(std::span<const std::string> tokens, NgramLevel level) {
  std::vector<std::string> grams(tokens.begin(), tokens.end());
  const auto max_n = static_cast<std::size_t>(level);
  for (std::size_t n = 2; n <= max_n; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (std::size_t k = 1; k < n; ++k) {
        g.push_back(kNgramJoiner);
        g += tokens[i + k];
      }
      grams.push_back(std::move(g));
    }
  }
  return grams;
}

Vocabulary BuildVocabulary(std::span<const TokenizedDocument> docs, NgramLevel level,
                           PruneRule prune) {
  if (docs.empty()) throw Error("cannot build a vocabulary from zero documents");
  struct Counts {
    std::int64_t df = 0;
    std::int64_t total = 0;
  };
  std::map<std::string, Counts, std::less<>> counts;
  for (const TokenizedDocument& doc : docs) {
    std::vector<std::string> grams = ExtractNgrams(doc.tokens, level);
    std::sort(grams.begin(), grams.end());
    for (std::size_t i = 0; i < grams.size();) {
      std::size_t j = i;
      while (j < grams.size() && grams[j] == grams[i]) ++j;
      Counts& c = counts[grams[i]];
      c.df += 1;
      c.total += static_cast<std::int64_t>(j - i);
      i = j;
    }
  }
  std::vector<Vocabulary::TermStats> terms;
  for (auto& [term, c] : counts) {
    if (prune.Keeps(c.total)) terms.push_back({term, c.df, c.total});
  }
  return Vocabulary(std::move(terms), docs.size(), level, prune);
}

IdfTable ComputeIdf(const Vocabulary& vocab) {
  std::vector<double> idf(vocab.size());
  const auto n = static_cast<double>(vocab.n_docs());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    idf[i] = std::log2(n / static_cast<double>(vocab.doc_freq(i)));
  }
  return IdfTable(std::move(idf));
}

SparseVector Encode(const TokenizedDocument& doc, const Vocabulary& vocab, const IdfTable& idf,
                    EncodingScheme scheme) {
  std::map<FeatureIndex, std::int64_t> counts;
  for (const std::string& gram : ExtractNgrams(doc.tokens, vocab.level())) {
    if (auto idx = vocab.IndexOf(gram)) ++counts[*idx];
  }
  std::vector<SparseEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [index, count] : counts) {
    const double w = scheme == EncodingScheme::kIdfPresence
                         ? idf[index]
                         : static_cast<double>(count) * idf[index];
    if (w != 0.0) entries.push_back({index, w});
  }
  if (scheme == EncodingScheme::kTfIdf && !entries.empty()) {
    double ss = 0.0;
    for (const SparseEntry& e : entries) ss += e.value * e.value;
    const double norm = std::sqrt(ss);
    for (SparseEntry& e : entries) e.value /= norm;
  }
  return SparseVector::FromEntries(vocab.size(), std::move(entries));
}

void WriteVocabularyCsv(const Vocabulary& vocab, const IdfTable& idf, std::ostream& out) {
  out << "term,df,total_count,idf\n";
  char buf[64];
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", idf[i]);
    out << vocab.term(i) << ',' << vocab.doc_freq(i) << ',' << vocab.total_count(i) << ','
        << buf << '\n';
  }
}

}  // namespace grantmine
