#include "grantmine_cli/run_config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>

#include "grantmine/error.h"
#include "grantmine/random.h"
#include "grantmine/report_format.h"

namespace grantmine::cli {
namespace {

struct KeyDefault {
  const char* key;
  const char* value;
};

constexpr KeyDefault kKeys[] = {
    {"run.seed", "0"},
    {"run.out", "."},
    {"corpus.path", ""},
    {"corpus.grant_type", ""},
    {"corpus.section", ""},
    {"preprocess.lowercase", "true"},
    {"preprocess.strip_digits", "true"},
    {"preprocess.strip_punct", "true"},
    {"preprocess.remove_stopwords", "true"},
    {"preprocess.stopword_idf_threshold", "1"},
    {"preprocess.stemming", "true"},
    {"encoding.scheme", "tfidf"},
    {"encoding.ngram", "unigram"},
    {"encoding.prune", "0"},
    {"model.path", ""},
    {"model.classifier", "rf"},
    {"model.preset", "auto"},
    {"model.max_depth", ""},
    {"model.min_samples_split", ""},
    {"model.min_samples_leaf", ""},
    {"model.max_features", ""},
    {"model.n_estimators", ""},
    {"model.bootstrap", "true"},
    {"selection.low_pct", "0.15"},
    {"selection.high_pct", "0.85"},
    {"selection.per_class", "400"},
    {"selection.train_frac", "0.85"},
    {"selection.moderate_frac", "0.15"},
    {"selection.median", "corpus"},
    {"tuning.init_points", "5"},
    {"tuning.n_iter", "25"},
    {"tuning.kappa", "2.576"},
    {"tuning.folds", "10"},
    {"synth.n_docs", "2000"},
    {"synth.common_vocab", "2000"},
    {"synth.rare_vocab", "3000"},
    {"synth.planted_terms", "10"},
    {"synth.doc_length_mean", "110"},
    {"synth.rare_token_rate", "0.05"},
    {"synth.score_mean", "4.92"},
    {"synth.score_std", "0.65"},
    {"synth.score_min", "1.75"},
    {"synth.score_max", "6.9"},
    {"synth.score_step", "0.01"},
    {"synth.signal_strength", "0.3"},
    {"top_features.k", "100"},
};

constexpr std::string_view kUnechoed[] = {"run.seed", "run.out", "corpus.path", "model.path"};

const std::vector<std::string>& KeyOrder() {
  static const std::vector<std::string> order = [] {
    std::vector<std::string> keys;
    for (const KeyDefault& k : kKeys) keys.emplace_back(k.key);
    return keys;
  }();
  return order;
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void Invalid(const std::string& key, const std::string& value, const char* expected) {
  throw Error("config: " + key + " = \"" + value + "\" is not " + expected);
}

template <typename Int>
Int ParseInt(const Settings& s, const std::string& key) {
  const std::string& v = s.Get(key);
  Int out{};
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size()) Invalid(key, v, "an integer");
  return out;
}

double ParseDouble(const Settings& s, const std::string& key) {
  const std::string& v = s.Get(key);
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out)) {
    Invalid(key, v, "a number");
  }
  return out;
}

bool ParseBool(const Settings& s, const std::string& key) {
  const std::string& v = s.Get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  Invalid(key, v, "a boolean");
}

std::optional<std::string> OptionalString(const Settings& s, const std::string& key) {
  const std::string& v = s.Get(key);
  if (v.empty()) return std::nullopt;
  return v;
}

template <typename Fn>
auto Wrap(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error("config: " + key + ": " + e.what());
  }
}

Hyperparams ResolveParams(const Settings& s, ClassifierKind kind, std::uint64_t seed) {
  const std::string& preset = s.Get("model.preset");
  Hyperparams p;
  if (preset == "auto") {
    p = kind == ClassifierKind::kRandomForest ? ProposedForestParams() : DefaultTreeParams();
  } else if (preset == "proposed") {
    p = ProposedForestParams();
  } else if (preset == "tree-default") {
    p = DefaultTreeParams();
  } else if (preset == "full") {
    p = Hyperparams{};
  } else {
    Invalid("model.preset", preset, "one of auto, proposed, tree-default, full");
  }
  if (const std::string& v = s.Get("model.max_depth"); v == "none") {
    p.max_depth = kUnlimitedDepth;
  } else if (!v.empty()) {
    p.max_depth = ParseInt<int>(s, "model.max_depth");
  }
  if (!s.Get("model.min_samples_split").empty()) {
    p.min_samples_split = ParseInt<int>(s, "model.min_samples_split");
  }
  if (!s.Get("model.min_samples_leaf").empty()) {
    p.min_samples_leaf = ParseInt<int>(s, "model.min_samples_leaf");
  }
  if (!s.Get("model.max_features").empty()) p.max_features = ParseDouble(s, "model.max_features");
  if (!s.Get("model.n_estimators").empty()) {
    p.n_estimators = ParseInt<int>(s, "model.n_estimators");
  }
  p.bootstrap = ParseBool(s, "model.bootstrap");
  p.seed = seed;
  Wrap("model", [&] {
    p.Validate();
    return 0;
  });
  return p;
}

}  // namespace

Settings::Settings() {
  for (const KeyDefault& k : kKeys) values_[k.key] = k.value;
}

void Settings::Set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error("config: unknown key " + key);
  it->second = value;
}

const std::string& Settings::Get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error("config: unknown key " + key);
  return it->second;
}

const std::vector<std::string>& Settings::keys() const { return KeyOrder(); }

void Settings::MergeIni(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error("config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw Error("config: key " + section + " outside any [section]");
    for (const auto& [key, value] : body) Set(section + "." + key, Trim(value.data()));
  }
}

void Settings::MergeAssignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw Error("config: override \"" + assignment + "\" is not section.key=value");
  }
  Set(Trim(std::string_view(assignment).substr(0, eq)),
      Trim(std::string_view(assignment).substr(eq + 1)));
}

RunConfig Resolve(const Settings& s) {
  RunConfig c;
  c.seed = ParseInt<std::uint64_t>(s, "run.seed");
  c.out = s.Get("run.out");
  if (c.out.empty()) c.out = ".";
  c.corpus = s.Get("corpus.path");
  c.model = s.Get("model.path");
  c.grant_type = OptionalString(s, "corpus.grant_type");
  c.section = OptionalString(s, "corpus.section");

  c.preprocess.lowercase = ParseBool(s, "preprocess.lowercase");
  c.preprocess.strip_digits = ParseBool(s, "preprocess.strip_digits");
  c.preprocess.strip_punct = ParseBool(s, "preprocess.strip_punct");
  c.preprocess.remove_stopwords = ParseBool(s, "preprocess.remove_stopwords");
  c.preprocess.stopword_idf_threshold = ParseDouble(s, "preprocess.stopword_idf_threshold");
  c.preprocess.stemming = ParseBool(s, "preprocess.stemming");
  Wrap("preprocess", [&] {
    c.preprocess.Validate();
    return 0;
  });

  c.encoding.scheme =
      Wrap("encoding.scheme", [&] { return ParseEncodingScheme(s.Get("encoding.scheme")); });
  c.encoding.level = Wrap("encoding.ngram", [&] { return ParseNgramLevel(s.Get("encoding.ngram")); });
  c.encoding.prune.min_total_occurrences = ParseInt<int>(s, "encoding.prune");
  if (c.encoding.prune.min_total_occurrences < 0) {
    Invalid("encoding.prune", s.Get("encoding.prune"), "a nonnegative integer");
  }

  c.classifier =
      Wrap("model.classifier", [&] { return ParseClassifierKind(s.Get("model.classifier")); });
  c.params = ResolveParams(s, c.classifier, c.seed);

  c.cutoff.low_pct = ParseDouble(s, "selection.low_pct");
  c.cutoff.high_pct = ParseDouble(s, "selection.high_pct");
  Wrap("selection", [&] {
    c.cutoff.Validate();
    return 0;
  });
  c.selection.per_class = ParseInt<std::size_t>(s, "selection.per_class");
  c.selection.train_frac = ParseDouble(s, "selection.train_frac");
  c.selection.moderate_frac = ParseDouble(s, "selection.moderate_frac");
  Wrap("selection", [&] {
    c.selection.Validate();
    return 0;
  });
  if (s.Get("selection.median") != "corpus") c.median = ParseDouble(s, "selection.median");

  c.tune.init_points = ParseInt<int>(s, "tuning.init_points");
  c.tune.n_iter = ParseInt<int>(s, "tuning.n_iter");
  c.tune.kappa = ParseDouble(s, "tuning.kappa");
  c.tune.folds = ParseInt<int>(s, "tuning.folds");
  c.tune.seed = c.seed;
  Wrap("tuning", [&] {
    c.tune.Validate();
    return 0;
  });

  c.synth.n_docs = ParseInt<std::size_t>(s, "synth.n_docs");
  c.synth.common_vocab_size = ParseInt<std::size_t>(s, "synth.common_vocab");
  c.synth.rare_vocab_size = ParseInt<std::size_t>(s, "synth.rare_vocab");
  c.synth.planted_terms = ParseInt<std::size_t>(s, "synth.planted_terms");
  c.synth.doc_length_mean = ParseDouble(s, "synth.doc_length_mean");
  c.synth.rare_token_rate = ParseDouble(s, "synth.rare_token_rate");
  c.synth.score_mean = ParseDouble(s, "synth.score_mean");
  c.synth.score_std = ParseDouble(s, "synth.score_std");
  c.synth.score_min = ParseDouble(s, "synth.score_min");
  c.synth.score_max = ParseDouble(s, "synth.score_max");
  c.synth.score_step = ParseDouble(s, "synth.score_step");
  c.synth.signal_strength = ParseDouble(s, "synth.signal_strength");
  c.synth.seed = c.seed;
  Wrap("synth", [&] {
    c.synth.Validate();
    return 0;
  });

  c.top_k = ParseInt<std::size_t>(s, "top_features.k");
  if (c.top_k == 0) Invalid("top_features.k", s.Get("top_features.k"), "a positive integer");

  for (const std::string& key : s.keys()) {
    if (std::find(std::begin(kUnechoed), std::end(kUnechoed), key) != std::end(kUnechoed)) continue;
    c.echo.emplace_back(key, s.Get(key));
  }
  return c;
}

std::string ConfigHash(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string joined;
  for (const auto& [key, value] : pairs) {
    joined += key;
    joined += '=';
    joined += value;
    joined += '\n';
  }
  return Hex64(Fnv1a64(joined));
}

}  // namespace grantmine::cli
