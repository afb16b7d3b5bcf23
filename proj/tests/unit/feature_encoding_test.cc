#include "grantmine/feature_encoding.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "grantmine/error.h"

namespace grantmine {
namespace {

using Tokens = std::vector<std::string>;

std::vector<TokenizedDocument> Docs(const std::vector<Tokens>& docs) {
  std::vector<TokenizedDocument> out;
  for (std::size_t i = 0; i < docs.size(); ++i) out.push_back({"d" + std::to_string(i), docs[i]});
  return out;
}

std::vector<TokenizedDocument> RandomDocs(std::mt19937_64& rng, std::size_t n, int alphabet,
                                          std::size_t max_len) {
  std::vector<Tokens> raw(n);
  for (Tokens& d : raw) {
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) d.push_back(std::string(1, static_cast<char>('a' + rng() % alphabet)));
  }
  return Docs(raw);
}

TEST(ExtractNgrams, Windows) {
  const Tokens abc{"a", "b", "c"};
  EXPECT_EQ(ExtractNgrams(abc, NgramLevel::kBigram), (Tokens{"a", "b", "c", "a_b", "b_c"}));
  EXPECT_EQ(ExtractNgrams(abc, NgramLevel::kTrigram),
            (Tokens{"a", "b", "c", "a_b", "b_c", "a_b_c"}));
  EXPECT_EQ(ExtractNgrams(Tokens{"a"}, NgramLevel::kTrigram), Tokens{"a"});
  EXPECT_EQ(ExtractNgrams(Tokens{}, NgramLevel::kBigram), Tokens{});
}

TEST(BuildVocabulary, CountsAndOrder) {
  const auto docs = Docs({{"b", "a"}, {"a"}});
  const Vocabulary v = BuildVocabulary(docs, NgramLevel::kUnigram, PruneRule{});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.term(0), "a");
  EXPECT_EQ(v.term(1), "b");
  EXPECT_EQ(v.doc_freq(0), 2);
  EXPECT_EQ(v.doc_freq(1), 1);
  EXPECT_EQ(v.n_docs(), 2u);
  EXPECT_EQ(v.IndexOf("b"), FeatureIndex{1});
  EXPECT_FALSE(v.IndexOf("zz").has_value());
}

TEST(BuildVocabulary, PruneRuleDropsRareTerms) {
  const auto docs = Docs({{"a", "b"}, {"a"}});
  const Vocabulary v = BuildVocabulary(docs, NgramLevel::kUnigram, PruneRule{1});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.term(0), "a");
}

TEST(BuildVocabulary, TotalCountsRepeatsWithinDocument) {
  const auto docs = Docs({{"a", "a", "a"}, {"b"}});
  const Vocabulary v = BuildVocabulary(docs, NgramLevel::kUnigram, PruneRule{2});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.doc_freq(0), 1);
  EXPECT_EQ(v.total_count(0), 3);
}

TEST(BuildVocabulary, EmptyIsAnError) {
  EXPECT_THROW(BuildVocabulary({}, NgramLevel::kUnigram, PruneRule{}), Error);
}

TEST(BuildVocabulary, CopyKeepsIndexUsable) {
  const auto docs = Docs({{"x", "y"}});
  Vocabulary copy;
  {
    const Vocabulary v = BuildVocabulary(docs, NgramLevel::kUnigram, PruneRule{});
    copy = v;
  }
  EXPECT_EQ(copy.IndexOf("y"), FeatureIndex{1});
}

TEST(ComputeIdf, Log2Examples) {
  const Vocabulary v({{"a", 1, 1}, {"b", 4, 4}}, 4, NgramLevel::kUnigram, PruneRule{});
  const IdfTable idf = ComputeIdf(v);
  EXPECT_DOUBLE_EQ(idf[0], 2.0);
  EXPECT_DOUBLE_EQ(idf[1], 0.0);
  const Vocabulary w({{"c", 2, 2}}, 8, NgramLevel::kUnigram, PruneRule{});
  EXPECT_DOUBLE_EQ(ComputeIdf(w)[0], 2.0);
}

TEST(Encode, PresenceIgnoresCounts) {
  const Vocabulary v({{"t", 1, 7}, {"u", 1, 1}}, 4, NgramLevel::kUnigram, PruneRule{});
  const IdfTable idf = ComputeIdf(v);
  const TokenizedDocument doc{"d", Tokens(7, "t")};
  const SparseVector x = Encode(doc, v, idf, EncodingScheme::kIdfPresence);
  EXPECT_EQ(x.nnz(), 1u);
  EXPECT_DOUBLE_EQ(x.Get(0), 2.0);
  EXPECT_EQ(x.Get(1), 0.0);
  EXPECT_EQ(Encode(doc, v, idf, EncodingScheme::kTfIdf).Get(1), 0.0);
}

TEST(Encode, TfIdfNormalizes) {
  // Raw weights (2*1, 1*2) = (2, 2).
  const Vocabulary v({{"a", 2, 2}, {"b", 1, 1}}, 4, NgramLevel::kUnigram, PruneRule{});
  const IdfTable idf({1.0, 2.0});
  const SparseVector x = Encode({"d", {"a", "a", "b"}}, v, idf, EncodingScheme::kTfIdf);
  EXPECT_NEAR(x.Get(0), 0.7071, 1e-4);
  EXPECT_NEAR(x.Get(1), 0.7071, 1e-4);
  EXPECT_NEAR(x.Norm(), 1.0, 1e-12);
}

TEST(Encode, OutOfVocabularyOnly) {
  const Vocabulary v({{"a", 1, 1}}, 2, NgramLevel::kUnigram, PruneRule{});
  const IdfTable idf = ComputeIdf(v);
  for (EncodingScheme s : {EncodingScheme::kTfIdf, EncodingScheme::kIdfPresence}) {
    const SparseVector x = Encode({"d", {"q", "r"}}, v, idf, s);
    EXPECT_TRUE(x.empty());
    EXPECT_EQ(x.dim(), 1u);
  }
}

TEST(Encode, UsesNgramsOfVocabularyLevel) {
  const auto docs = Docs({{"a", "b"}, {"c"}});
  const Vocabulary v = BuildVocabulary(docs, NgramLevel::kBigram, PruneRule{});
  const SparseVector x = Encode(docs[0], v, ComputeIdf(v), EncodingScheme::kIdfPresence);
  EXPECT_TRUE(x.Get(*v.IndexOf("a_b")) > 0.0);
}

TEST(EncodingProperties, RandomCorpora) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto docs = RandomDocs(rng, 1 + rng() % 40, 10, 15);
    const auto level = static_cast<NgramLevel>(1 + rng() % 3);
    const PruneRule prune{static_cast<int>(rng() % 3)};
    const Vocabulary v = BuildVocabulary(docs, level, prune);
    const IdfTable idf = ComputeIdf(v);
    ASSERT_EQ(idf.size(), v.size());
    const double n = static_cast<double>(v.n_docs());
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (t > 0) {
        EXPECT_LT(v.term(t - 1), v.term(t));
      }
      EXPECT_NEAR(std::exp2(idf[t]) * static_cast<double>(v.doc_freq(t)), n, 1e-9 * n);
      EXPECT_TRUE(prune.Keeps(v.total_count(t)));
    }
    const std::set<double> image(idf.values().begin(), idf.values().end());
    for (const TokenizedDocument& d : docs) {
      const SparseVector p = Encode(d, v, idf, EncodingScheme::kIdfPresence);
      for (const SparseEntry& e : p.entries()) EXPECT_TRUE(image.contains(e.value));
      const SparseVector tf = Encode(d, v, idf, EncodingScheme::kTfIdf);
      if (!tf.empty()) {
        EXPECT_NEAR(tf.Norm(), 1.0, 1e-9);
      }

      // Nonzero presence entries are exactly the surviving terms with idf > 0.
      std::set<FeatureIndex> expected;
      for (const std::string& g : ExtractNgrams(d.tokens, level)) {
        if (auto i = v.IndexOf(g); i && idf[*i] > 0.0) expected.insert(*i);
      }
      std::set<FeatureIndex> got;
      for (const SparseEntry& e : p.entries()) got.insert(e.index);
      EXPECT_EQ(got, expected);
    }
  }
}

TEST(EncodingProperties, PresenceInvariantUnderDuplication) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    // Unigrams only: a duplicated token creates new higher-order n-grams.
    auto docs = RandomDocs(rng, 2 + rng() % 10, 6, 10);
    const Vocabulary v = BuildVocabulary(docs, NgramLevel::kUnigram, PruneRule{});
    const IdfTable idf = ComputeIdf(v);
    TokenizedDocument d = docs[rng() % docs.size()];
    const SparseVector before = Encode(d, v, idf, EncodingScheme::kIdfPresence);
    const std::string token = d.tokens[rng() % d.tokens.size()];
    d.tokens.insert(d.tokens.begin() + static_cast<std::ptrdiff_t>(rng() % (d.tokens.size() + 1)),
                    token);
    EXPECT_EQ(Encode(d, v, idf, EncodingScheme::kIdfPresence), before);
  }
}

TEST(Vocabulary, FingerprintTracksTerms) {
  const Vocabulary a({{"a", 1, 1}}, 1, NgramLevel::kUnigram, PruneRule{});
  const Vocabulary b({{"b", 1, 1}}, 1, NgramLevel::kUnigram, PruneRule{});
  EXPECT_EQ(a.Fingerprint().size(), 16u);
  EXPECT_NE(a.Fingerprint(), b.Fingerprint());
}

TEST(Vocabulary, RejectsUnsortedTerms) {
  EXPECT_THROW(Vocabulary({{"b", 1, 1}, {"a", 1, 1}}, 1, NgramLevel::kUnigram, PruneRule{}),
               Error);
}

TEST(Names, RoundTrip) {
  for (NgramLevel l : {NgramLevel::kUnigram, NgramLevel::kBigram, NgramLevel::kTrigram}) {
    EXPECT_EQ(ParseNgramLevel(ToString(l)), l);
  }
  for (EncodingScheme s : {EncodingScheme::kTfIdf, EncodingScheme::kIdfPresence}) {
    EXPECT_EQ(ParseEncodingScheme(ToString(s)), s);
  }
  EXPECT_THROW(ParseEncodingScheme("bm25"), Error);
}

TEST(WriteVocabularyCsv, HeaderAndRows) {
  const Vocabulary v({{"a", 1, 3}}, 2, NgramLevel::kUnigram, PruneRule{});
  std::ostringstream out;
  WriteVocabularyCsv(v, ComputeIdf(v), out);
  EXPECT_EQ(out.str(), "term,df,total_count,idf\na,1,3,1\n");
}

}  // namespace
}  // namespace grantmine
