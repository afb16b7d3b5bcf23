#ifndef GRANTMINE_MODEL_IO_H_
#define GRANTMINE_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "grantmine/pipeline.h"

namespace grantmine {

struct ModelMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  // Resolved configuration echoed into the file, in insertion order.
  std::vector<std::pair<std::string, std::string>> config;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

struct LoadedModel {
  PipelineModel model;
  ModelMetadata metadata;
};

// Self-describing JSON: preprocessing and encoding settings, stopwords,
// vocabulary with its fingerprint, and every tree node. Doubles are written in
// shortest round-trip form, so a reloaded model predicts identically.
void SaveModel(const PipelineModel& model, const ModelMetadata& metadata, std::ostream& out);
void SaveModel(const PipelineModel& model, const ModelMetadata& metadata,
               const std::filesystem::path& path);

// Throws Error on malformed documents or a vocabulary fingerprint mismatch.
LoadedModel LoadModel(std::istream& in);
LoadedModel LoadModel(const std::filesystem::path& path);

std::string ClassifierToJson(const Classifier& model);
Classifier ClassifierFromJson(const std::string& text);

}  // namespace grantmine

#endif  // GRANTMINE_MODEL_IO_H_
