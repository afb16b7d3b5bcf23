#include "grantmine/corpus.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "grantmine/error.h"
#include "json.hpp"

namespace grantmine {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

Document ParseDocument(const json& j, std::size_t line_no) {
  auto fail = [line_no](const std::string& what) -> Error {
    return Error("corpus line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("expected a JSON object");
  Document doc;
  auto required_string = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw fail(std::string("missing or non-string field \"") + key + "\"");
    }
    return it->get<std::string>();
  };
  doc.id = required_string("id");
  if (doc.id.empty()) throw fail("empty id");
  doc.text = required_string("text");
  doc.grant_type = required_string("grant_type");

  auto scores = j.find("scores");
  if (scores == j.end() || !scores->is_object()) {
    throw fail("missing or non-object field \"scores\"");
  }
  for (const auto& [name, value] : scores->items()) {
    if (value.is_null()) continue;
    if (!value.is_number()) throw fail("score \"" + name + "\" is not a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw fail("score \"" + name + "\" is not finite");
    if (name == "ic") {
      doc.ic_score = v;
    } else {
      doc.other_scores.emplace(name, v);
    }
  }
  if (auto section = j.find("section"); section != j.end() && !section->is_null()) {
    if (!section->is_string()) throw fail("non-string field \"section\"");
    doc.section = section->get<std::string>();
  }
  return doc;
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents, Provenance provenance)
    : documents_(std::move(documents)), provenance_(std::move(provenance)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const std::string& id = documents_[i].id;
    if (id.empty()) throw Error("document " + std::to_string(i) + " has an empty id");
    if (!by_id_.emplace(id, i).second) throw Error("duplicate document id \"" + id + "\"");
  }
}

const Document* Corpus::Find(std::string_view id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

Corpus ParseCorpus(std::istream& in, std::string source_name) {
  std::vector<Document> docs;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error("corpus line " + std::to_string(line_no) + ": malformed JSON (" +
                  e.what() + ")");
    }
    Document doc = ParseDocument(j, line_no);
    if (auto [it, inserted] = seen.emplace(doc.id, line_no); !inserted) {
      throw Error("corpus line " + std::to_string(line_no) + ": duplicate id \"" +
                  doc.id + "\" (first seen on line " + std::to_string(it->second) + ")");
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), Provenance{std::move(source_name), UtcNow()});
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return ParseCorpus(in, path.string());
}

std::string SerializeDocument(const Document& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  ordered_json scores = ordered_json::object();
  if (doc.ic_score) scores["ic"] = *doc.ic_score;
  for (const auto& [name, value] : doc.other_scores) scores[name] = value;
  j["scores"] = std::move(scores);
  j["grant_type"] = doc.grant_type;
  if (doc.section) j["section"] = *doc.section;
  return j.dump();
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus) out << SerializeDocument(doc) << '\n';
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path.string());
  WriteCorpus(corpus, out);
  if (!out) throw Error("failed writing corpus file " + path.string());
}

Corpus FilterValid(const Corpus& corpus) {
  std::vector<Document> kept;
  for (const Document& doc : corpus) {
    if (doc.HasValidScore()) kept.push_back(doc);
  }
  return Corpus(std::move(kept), {corpus.provenance().source, {}});
}

Corpus FilterBy(const Corpus& corpus, const std::optional<std::string>& grant_type,
                const std::optional<std::string>& section) {
  std::vector<Document> kept;
  for (const Document& doc : corpus) {
    if (grant_type && doc.grant_type != *grant_type) continue;
    if (section && doc.section != *section) continue;
    kept.push_back(doc);
  }
  return Corpus(std::move(kept), {corpus.provenance().source, {}});
}

std::size_t NearestRankIndex(std::size_t n, double fraction) {
  if (n == 0) throw Error("nearest rank of an empty list");
  // The epsilon absorbs representation error such as 0.15 * 20 = 3.0000000000000004.
  const double rank = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  const auto clamped = std::clamp(rank, 1.0, static_cast<double>(n));
  return static_cast<std::size_t>(clamped) - 1;
}

double NearestRank(std::span<const double> sorted, double fraction) {
  return sorted[NearestRankIndex(sorted.size(), fraction)];
}

ScoreStatistics ComputeStatistics(std::span<const double> scores) {
  if (scores.empty()) throw Error("no valid scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());

  ScoreStatistics s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  s.min = sorted.front();
  s.max = sorted.back();
  s.q25 = NearestRank(sorted, 0.25);
  s.q50 = NearestRank(sorted, 0.50);
  s.q75 = NearestRank(sorted, 0.75);
  s.median = s.q50;

  // Sorted ascending, so the first run of maximal length is the smallest mode.
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > best_run) {
      best_run = j - i;
      s.mode = sorted[i];
    }
    i = j;
  }
  return s;
}

ScoreStatistics ComputeStatistics(const Corpus& corpus) {
  std::vector<double> scores;
  for (const Document& doc : corpus) {
    if (doc.HasValidScore()) scores.push_back(*doc.ic_score);
  }
  return ComputeStatistics(scores);
}

}  // namespace grantmine
