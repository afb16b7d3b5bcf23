#ifndef GRANTMINE_PIPELINE_H_
#define GRANTMINE_PIPELINE_H_

#include <span>
#include <string>
#include <vector>

#include "grantmine/corpus.h"
#include "grantmine/feature_encoding.h"
#include "grantmine/preprocess.h"
#include "grantmine/tree_models.h"

namespace grantmine {

struct EncodingConfig {
  EncodingScheme scheme = EncodingScheme::kTfIdf;
  NgramLevel level = NgramLevel::kUnigram;
  PruneRule prune;

  friend bool operator==(const EncodingConfig&, const EncodingConfig&) = default;
};

// Text side of a model: everything fitted on the training documents and then
// frozen for encoding unseen ones.
class TextPipeline {
 public:
  TextPipeline() = default;
  TextPipeline(PreprocessConfig preprocess, EncodingConfig encoding, StopwordList stopwords,
               Vocabulary vocab);

  // Throws Error for an empty document set or an empty fitted vocabulary.
  static TextPipeline Fit(std::span<const Document* const> train,
                          const PreprocessConfig& preprocess, const EncodingConfig& encoding);
  // Same, reusing documents already run through PreprocessDocuments(train, preprocess).
  static TextPipeline Fit(const PreprocessResult& train, const PreprocessConfig& preprocess,
                          const EncodingConfig& encoding);

  SparseVector Encode(const Document& doc) const;
  SparseVector Encode(const TokenizedDocument& doc) const;
  TokenizedDocument Preprocess(const Document& doc) const;

  const PreprocessConfig& preprocess() const { return preprocess_; }
  const EncodingConfig& encoding() const { return encoding_; }
  const StopwordList& stopwords() const { return stopwords_; }
  const Vocabulary& vocab() const { return vocab_; }
  const IdfTable& idf() const { return idf_; }
  std::size_t n_features() const { return vocab_.size(); }

 private:
  PreprocessConfig preprocess_;
  EncodingConfig encoding_;
  StopwordList stopwords_;
  Vocabulary vocab_;
  IdfTable idf_;
};

// Pairs each document with its label and encodes it.
Dataset EncodeDataset(const TextPipeline& pipeline, std::span<const Document* const> docs,
                      std::span<const Label> labels);

struct PipelineModel {
  TextPipeline text;
  Classifier classifier;

  Label Predict(const Document& doc) const { return classifier.Predict(text.Encode(doc)); }
};

}  // namespace grantmine

#endif  // GRANTMINE_PIPELINE_H_
