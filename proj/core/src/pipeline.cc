#include "grantmine/pipeline.h"

#include "grantmine/error.h"

namespace grantmine {

TextPipeline::TextPipeline(PreprocessConfig preprocess, EncodingConfig encoding,
                           StopwordList stopwords, Vocabulary vocab)
    : preprocess_(preprocess),
      encoding_(encoding),
      stopwords_(std::move(stopwords)),
      vocab_(std::move(vocab)),
      idf_(ComputeIdf(vocab_)) {}

TextPipeline TextPipeline::Fit(std::span<const Document* const> train,
                               const PreprocessConfig& preprocess,
                               const EncodingConfig& encoding) {
  return Fit(PreprocessDocuments(train, preprocess), preprocess, encoding);
}

TextPipeline TextPipeline::Fit(const PreprocessResult& train, const PreprocessConfig& preprocess,
                               const EncodingConfig& encoding) {
  Vocabulary vocab = BuildVocabulary(train.documents, encoding.level, encoding.prune);
  if (vocab.empty()) throw Error("no terms survive preprocessing and pruning");
  return TextPipeline(preprocess, encoding, train.stopwords, std::move(vocab));
}

TokenizedDocument TextPipeline::Preprocess(const Document& doc) const {
  return PreprocessDocument(doc, preprocess_, stopwords_);
}

SparseVector TextPipeline::Encode(const TokenizedDocument& doc) const {
  return grantmine::Encode(doc, vocab_, idf_, encoding_.scheme);
}

SparseVector TextPipeline::Encode(const Document& doc) const { return Encode(Preprocess(doc)); }

Dataset EncodeDataset(const TextPipeline& pipeline, std::span<const Document* const> docs,
                      std::span<const Label> labels) {
  if (docs.size() != labels.size()) throw Error("documents and labels differ in length");
  Dataset data;
  data.n_features = pipeline.n_features();
  data.rows.reserve(docs.size());
  for (const Document* d : docs) data.rows.push_back(pipeline.Encode(*d));
  data.labels.assign(labels.begin(), labels.end());
  return data;
}

}  // namespace grantmine
