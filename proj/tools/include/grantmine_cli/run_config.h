#ifndef GRANTMINE_CLI_RUN_CONFIG_H_
#define GRANTMINE_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grantmine/bayes_tuning.h"
#include "grantmine/experiment.h"
#include "grantmine/synthetic.h"

namespace grantmine::cli {

// Flat "section.key" -> value settings, seeded with every known key's default.
class Settings {
 public:
  Settings();

  // INI file with [section] headers. Throws Error on syntax errors or
  // unknown keys.
  void MergeIni(const std::filesystem::path& path);
  // "section.key=value". Throws Error on malformed input or unknown keys.
  void MergeAssignment(const std::string& assignment);
  void Set(const std::string& key, const std::string& value);

  const std::string& Get(const std::string& key) const;
  // Keys in declaration order.
  const std::vector<std::string>& keys() const;

 private:
  std::map<std::string, std::string> values_;
};

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path model;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  std::optional<std::string> grant_type;
  std::optional<std::string> section;

  PreprocessConfig preprocess;
  EncodingConfig encoding;
  ClassifierKind classifier = ClassifierKind::kRandomForest;
  Hyperparams params;
  CutoffSpec cutoff;
  SelectionConfig selection;
  std::optional<double> median;  // unset: the corpus median
  TuneConfig tune;
  SyntheticSpec synth;
  std::size_t top_k = 100;

  // Resolved settings minus paths and the seed, in key order. These are what
  // an artifact depends on besides the seed and its input data.
  std::vector<std::pair<std::string, std::string>> echo;
};

// Parses and validates every setting. Throws Error naming the offending key.
RunConfig Resolve(const Settings& settings);

// FNV-1a over the echoed settings plus any extra pairs, as 16 hex digits.
std::string ConfigHash(const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace grantmine::cli

#endif  // GRANTMINE_CLI_RUN_CONFIG_H_
