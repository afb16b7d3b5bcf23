#include "grantmine/model_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "grantmine/error.h"
#include "json.hpp"

namespace grantmine {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFormat = "grantmine-model";
constexpr int kFormatVersion = 1;

Json ParamsToJson(const Hyperparams& p) {
  return Json{{"max_depth", p.max_depth},
              {"min_samples_split", p.min_samples_split},
              {"min_samples_leaf", p.min_samples_leaf},
              {"max_features", p.max_features},
              {"n_estimators", p.n_estimators},
              {"seed", p.seed},
              {"bootstrap", p.bootstrap}};
}

Hyperparams ParamsFromJson(const Json& j) {
  Hyperparams p;
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_split = j.at("min_samples_split").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  p.max_features = j.at("max_features").get<double>();
  p.n_estimators = j.at("n_estimators").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.Validate();
  return p;
}

// One node per row: left, right, feature, threshold, gain, impurity, low, high, label.
Json TreeToJson(const DecisionTreeModel& tree) {
  Json nodes = Json::array();
  for (const TreeNode& n : tree.nodes()) {
    nodes.push_back(Json::array({n.left, n.right, n.feature, n.threshold, n.gain, n.impurity,
                                 n.counts.low, n.counts.high, static_cast<int>(n.label)}));
  }
  return nodes;
}

DecisionTreeModel TreeFromJson(const Json& nodes, const Hyperparams& params,
                               std::size_t n_features) {
  std::vector<TreeNode> out;
  out.reserve(nodes.size());
  for (const Json& row : nodes) {
    if (!row.is_array() || row.size() != 9) throw Error("model: malformed tree node");
    TreeNode n;
    n.left = row[0].get<std::int32_t>();
    n.right = row[1].get<std::int32_t>();
    n.feature = row[2].get<FeatureIndex>();
    n.threshold = row[3].get<double>();
    n.gain = row[4].get<double>();
    n.impurity = row[5].get<double>();
    n.counts.low = row[6].get<std::int64_t>();
    n.counts.high = row[7].get<std::int64_t>();
    const int label = row[8].get<int>();
    if (label != 0 && label != 1) throw Error("model: node label must be 0 or 1");
    n.label = static_cast<Label>(label);
    out.push_back(n);
  }
  return DecisionTreeModel(std::move(out), params, n_features);
}

Json ClassifierJson(const Classifier& model) {
  Json j{{"kind", ToString(model.kind())},
         {"params", ParamsToJson(model.params())},
         {"n_features", model.n_features()}};
  Json trees = Json::array();
  if (const RandomForestModel* forest = model.forest()) {
    for (const DecisionTreeModel& t : forest->trees()) trees.push_back(TreeToJson(t));
  } else {
    trees.push_back(TreeToJson(*model.tree()));
  }
  j["trees"] = std::move(trees);
  return j;
}

Classifier ClassifierFromJsonValue(const Json& j) {
  const ClassifierKind kind = ParseClassifierKind(j.at("kind").get<std::string>());
  const Hyperparams params = ParamsFromJson(j.at("params"));
  const auto n_features = j.at("n_features").get<std::size_t>();
  const Json& trees = j.at("trees");
  if (!trees.is_array() || trees.empty()) throw Error("model: no trees");
  if (kind == ClassifierKind::kDecisionTree) {
    if (trees.size() != 1) throw Error("model: a decision tree must hold exactly one tree");
    return Classifier(TreeFromJson(trees[0], params, n_features));
  }
  std::vector<DecisionTreeModel> fitted;
  fitted.reserve(trees.size());
  for (const Json& t : trees) fitted.push_back(TreeFromJson(t, params, n_features));
  return Classifier(RandomForestModel(std::move(fitted), params, n_features));
}

Json PreprocessToJson(const PreprocessConfig& c) {
  return Json{{"lowercase", c.lowercase},
              {"strip_digits", c.strip_digits},
              {"strip_punct", c.strip_punct},
              {"remove_stopwords", c.remove_stopwords},
              {"stopword_idf_threshold", c.stopword_idf_threshold},
              {"stemming", c.stemming}};
}

PreprocessConfig PreprocessFromJson(const Json& j) {
  PreprocessConfig c;
  c.lowercase = j.at("lowercase").get<bool>();
  c.strip_digits = j.at("strip_digits").get<bool>();
  c.strip_punct = j.at("strip_punct").get<bool>();
  c.remove_stopwords = j.at("remove_stopwords").get<bool>();
  c.stopword_idf_threshold = j.at("stopword_idf_threshold").get<double>();
  c.stemming = j.at("stemming").get<bool>();
  c.Validate();
  return c;
}

Json VocabularyToJson(const Vocabulary& v) {
  Json terms = Json::array();
  for (const Vocabulary::TermStats& t : v.entries()) {
    terms.push_back(Json::array({t.term, t.doc_freq, t.total_count}));
  }
  return Json{{"n_docs", v.n_docs()},
              {"fingerprint", v.Fingerprint()},
              {"terms", std::move(terms)}};
}

Vocabulary VocabularyFromJson(const Json& j, const EncodingConfig& enc) {
  std::vector<Vocabulary::TermStats> terms;
  for (const Json& row : j.at("terms")) {
    if (!row.is_array() || row.size() != 3) throw Error("model: malformed vocabulary entry");
    terms.push_back({row[0].get<std::string>(), row[1].get<std::int64_t>(),
                     row[2].get<std::int64_t>()});
  }
  Vocabulary vocab(std::move(terms), j.at("n_docs").get<std::size_t>(), enc.level, enc.prune);
  const auto expected = j.at("fingerprint").get<std::string>();
  if (vocab.Fingerprint() != expected) {
    throw Error("model: vocabulary fingerprint " + vocab.Fingerprint() + " does not match " +
                expected);
  }
  return vocab;
}

}  // namespace

std::string ClassifierToJson(const Classifier& model) { return ClassifierJson(model).dump(); }

Classifier ClassifierFromJson(const std::string& text) {
  try {
    return ClassifierFromJsonValue(Json::parse(text));
  } catch (const Json::exception& e) {
    throw Error(std::string("model: ") + e.what());
  }
}

void SaveModel(const PipelineModel& model, const ModelMetadata& metadata, std::ostream& out) {
  Json config = Json::object();
  for (const auto& [key, value] : metadata.config) config[key] = value;
  const TextPipeline& text = model.text;
  Json doc{
      {"format", kFormat},
      {"version", kFormatVersion},
      {"config_hash", metadata.config_hash},
      {"seed", metadata.seed},
      {"config", std::move(config)},
      {"preprocess", PreprocessToJson(text.preprocess())},
      {"encoding",
       Json{{"scheme", ToString(text.encoding().scheme)},
            {"ngram", ToString(text.encoding().level)},
            {"prune_min_total", text.encoding().prune.min_total_occurrences}}},
      {"stopwords",
       Json{{"threshold", text.stopwords().threshold()},
            {"source_corpus_size", text.stopwords().source_corpus_size()},
            {"terms", text.stopwords().terms()}}},
      {"vocabulary", VocabularyToJson(text.vocab())},
      {"classifier", ClassifierJson(model.classifier)},
  };
  out << doc.dump(1) << '\n';
  if (!out) throw Error("model: write failed");
}

void SaveModel(const PipelineModel& model, const ModelMetadata& metadata,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  SaveModel(model, metadata, out);
}

LoadedModel LoadModel(std::istream& in) {
  try {
    const Json doc = Json::parse(in);
    if (doc.at("format").get<std::string>() != kFormat) throw Error("model: unknown format");
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw Error("model: unsupported version " + doc.at("version").dump());
    }
    LoadedModel loaded;
    loaded.metadata.config_hash = doc.at("config_hash").get<std::string>();
    loaded.metadata.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : doc.at("config").items()) {
      loaded.metadata.config.emplace_back(key, value.get<std::string>());
    }

    EncodingConfig enc;
    const Json& e = doc.at("encoding");
    enc.scheme = ParseEncodingScheme(e.at("scheme").get<std::string>());
    enc.level = ParseNgramLevel(e.at("ngram").get<std::string>());
    enc.prune.min_total_occurrences = e.at("prune_min_total").get<int>();

    const Json& s = doc.at("stopwords");
    StopwordList stops(s.at("terms").get<std::set<std::string, std::less<>>>(),
                       s.at("threshold").get<double>(),
                       s.at("source_corpus_size").get<std::size_t>());

    loaded.model.text =
        TextPipeline(PreprocessFromJson(doc.at("preprocess")), enc, std::move(stops),
                     VocabularyFromJson(doc.at("vocabulary"), enc));
    loaded.model.classifier = ClassifierFromJsonValue(doc.at("classifier"));
    if (loaded.model.classifier.n_features() != loaded.model.text.n_features()) {
      throw Error("model: classifier and vocabulary sizes differ");
    }
    return loaded;
  } catch (const Json::exception& e) {
    throw Error(std::string("model: ") + e.what());
  }
}

LoadedModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path.string());
  return LoadModel(in);
}

}  // namespace grantmine
