#include "grantmine/preprocess.h"

#include <cmath>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "grantmine/error.h"
#include "grantmine/porter_stemmer.h"

namespace grantmine {
namespace {

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

bool IsAsciiPunct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) || (c >= 0x5b && c <= 0x60) ||
         (c >= 0x7b && c <= 0x7e);
}

// U+2000..U+206F is E2 80 80 .. E2 81 AF in UTF-8.
bool IsGeneralPunctuation(std::string_view text, std::size_t i) {
  if (i + 2 >= text.size()) return false;
  const auto b0 = static_cast<unsigned char>(text[i]);
  const auto b1 = static_cast<unsigned char>(text[i + 1]);
  const auto b2 = static_cast<unsigned char>(text[i + 2]);
  return b0 == 0xe2 && (b1 == 0x80 || b1 == 0x81) && (b2 & 0xc0) == 0x80;
}

std::vector<std::string> TokenizeStage(const Document& doc, const PreprocessConfig& config) {
  return Tokenize(Normalize(doc.text, config));
}

void StemInPlace(std::vector<std::string>& tokens) {
  for (std::string& t : tokens) t = Stem(t);
}

}  // namespace

void PreprocessConfig::Validate() const {
  if (!(stopword_idf_threshold >= 0.0) || !std::isfinite(stopword_idf_threshold)) {
    throw Error("stopword_idf_threshold must be a finite value >= 0");
  }
}

void StopwordList::WriteSorted(std::ostream& out) const {
  for (const std::string& t : terms_) out << t << '\n';
}

std::string Normalize(std::string_view text, const PreprocessConfig& config) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (config.strip_digits && c >= '0' && c <= '9') continue;
    if (config.strip_punct) {
      if (IsAsciiPunct(c)) {
        out.push_back(' ');
        continue;
      }
      if (IsGeneralPunctuation(text, i)) {
        out.push_back(' ');
        i += 2;
        continue;
      }
    }
    if (config.lowercase && c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

StopwordList BuildStopwordList(std::span<const TokenizedDocument> docs, double threshold) {
  if (docs.empty()) throw Error("cannot build a stopword list from zero documents");
  std::unordered_map<std::string_view, std::size_t> df;
  for (const TokenizedDocument& doc : docs) {
    std::unordered_set<std::string_view> seen(doc.tokens.begin(), doc.tokens.end());
    for (std::string_view t : seen) ++df[t];
  }
  const auto n = static_cast<double>(docs.size());
  std::set<std::string, std::less<>> terms;
  for (const auto& [term, count] : df) {
    if (std::log2(n / static_cast<double>(count)) < threshold) terms.emplace(term);
  }
  return StopwordList(std::move(terms), threshold, docs.size());
}

TokenizedDocument RemoveStopwords(TokenizedDocument doc, const StopwordList& stops) {
  if (stops.size() == 0) return doc;
  std::erase_if(doc.tokens, [&](const std::string& t) { return stops.Contains(t); });
  return doc;
}

PreprocessResult PreprocessDocuments(std::span<const Document* const> docs,
                                     const PreprocessConfig& config) {
  config.Validate();
  if (docs.empty()) throw Error("cannot preprocess an empty corpus");
  PreprocessResult result;
  result.documents.reserve(docs.size());
  for (const Document* doc : docs) {
    result.documents.push_back({doc->id, TokenizeStage(*doc, config)});
  }
  result.stopwords = config.remove_stopwords
                         ? BuildStopwordList(result.documents, config.stopword_idf_threshold)
                         : StopwordList({}, config.stopword_idf_threshold, docs.size());
  for (TokenizedDocument& doc : result.documents) {
    doc = RemoveStopwords(std::move(doc), result.stopwords);
    if (config.stemming) StemInPlace(doc.tokens);
  }
  return result;
}

PreprocessResult PreprocessCorpus(const Corpus& corpus, const PreprocessConfig& config) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.size());
  for (const Document& doc : corpus) docs.push_back(&doc);
  return PreprocessDocuments(docs, config);
}

TokenizedDocument PreprocessDocument(const Document& doc, const PreprocessConfig& config,
                                     const StopwordList& stops) {
  TokenizedDocument out{doc.id, TokenizeStage(doc, config)};
  if (config.remove_stopwords) out = RemoveStopwords(std::move(out), stops);
  if (config.stemming) StemInPlace(out.tokens);
  return out;
}

}  // namespace grantmine
