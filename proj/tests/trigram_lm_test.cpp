// Copyright 2026 The rwspell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rwspell/trigram_lm.hpp"

namespace rwspell {
namespace {

using Sentences = std::vector<std::vector<std::string>>;

Sentences parse_corpus(std::initializer_list<const char*> lines) {
  Sentences out;
  for (const char* l : lines) out.push_back(tokenize(l));
  return out;
}

TrigramModel train(const Sentences& c, double delta = 0.5) {
  return TrigramModel::train(c, build_vocabulary(c, 1000), TrigramOptions{delta});
}

double sum_over_vocabulary(const TrigramModel& m, WordId u, WordId v) {
  double s = 0.0;
  for (WordId w = 1; w < m.num_tokens(); ++w) s += std::exp(m.log_prob(u, v, w));
  return s;
}

TEST(TrigramModel, MaximumLikelihoodComponent) {
  TrigramModel m = train(parse_corpus({"a b c", "a b c"}));
  EXPECT_DOUBLE_EQ(m.mle("a", "b", "c"), 1.0);
  EXPECT_DOUBLE_EQ(m.mle("a", "b", "a"), 0.0);
  EXPECT_LT(m.log_prob("a", "b", "c"), 0.0);  // discounted below 1
}

TEST(TrigramModel, SentenceIsProductOfFourConditionals) {
  TrigramModel m = train(parse_corpus({"a b c", "a b c"}));
  std::vector<std::string> s{"a", "b", "c"};
  double expect = m.log_prob("<s>", "<s>", "a") + m.log_prob("<s>", "a", "b") + m.log_prob("a", "b", "c") +
                  m.log_prob("b", "c", "</s>");
  EXPECT_DOUBLE_EQ(m.sentence_log_prob(s), expect);
}

TEST(TrigramModel, UnsmoothedTrainingSentenceHasProbabilityOne) {
  TrigramModel m = train(parse_corpus({"x y z"}), 0.0);
  EXPECT_DOUBLE_EQ(m.sentence_log_prob(tokenize("x y z")), 0.0);
}

TEST(TrigramModel, EmptySentenceScoresEndMarker) {
  TrigramModel m = train(parse_corpus({"a b", "c"}));
  EXPECT_DOUBLE_EQ(m.sentence_log_prob({}), m.log_prob("<s>", "<s>", "</s>"));
}

TEST(TrigramModel, OutOfVocabularyTokensCountAsUnknown) {
  Sentences c = parse_corpus({"a b a", "a c"});
  TrigramModel m = TrigramModel::train(c, Vocabulary({"a"}));
  EXPECT_EQ(m.id("b"), TrigramModel::kUnkId);
  EXPECT_DOUBLE_EQ(m.mle("<s>", "a", "<unk>"), 1.0);
  EXPECT_DOUBLE_EQ(m.log_prob("a", "b", "a"), m.log_prob("a", "zzz", "a"));
}

TEST(TrigramModel, Errors) {
  EXPECT_THROW(TrigramModel::train({}, Vocabulary({"a"})), Error);
  Sentences c = parse_corpus({"a"});
  EXPECT_THROW(TrigramModel::train(c, Vocabulary({"a"}), TrigramOptions{1.0}), Error);
  EXPECT_THROW(TrigramModel::train(c, Vocabulary({"<unk>"})), Error);
}

TEST(TrigramModel, NormalizedAtEveryObservedContext) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 20; ++trial) {
    Sentences c;
    for (int s = 0; s < 15; ++s) {
      std::vector<std::string> sent;
      int len = std::uniform_int_distribution<int>(0, 6)(rng);
      for (int k = 0; k < len; ++k) sent.push_back(words[std::uniform_int_distribution<std::size_t>(0, 5)(rng)]);
      c.push_back(sent);
    }
    double delta = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    TrigramModel m = TrigramModel::train(c, build_vocabulary(std::vector<std::string>(words.begin(), words.begin() + 4), 4),
                                         TrigramOptions{delta});
    std::set<std::pair<WordId, WordId>> contexts;
    for (const auto& sent : c) {
      std::vector<WordId> ids{0, 0};
      for (const auto& t : sent) ids.push_back(m.id(t));
      for (std::size_t i = 1; i < ids.size(); ++i) contexts.emplace(ids[i - 1], ids[i]);
    }
    for (auto [u, v] : contexts) EXPECT_NEAR(sum_over_vocabulary(m, u, v), 1.0, 1e-6);
    // Contexts never observed back off to a normalized bigram.
    EXPECT_NEAR(sum_over_vocabulary(m, m.id("d"), m.id("c")), 1.0, 1e-6);
    for (WordId u = 0; u < m.num_tokens(); ++u) {
      for (WordId v = 0; v < m.num_tokens(); ++v) {
        for (WordId w = 1; w < m.num_tokens(); ++w) {
          double p = std::exp(m.log_prob(u, v, w));
          EXPECT_GT(p, 0.0);
          EXPECT_LE(p, 1.0);
        }
      }
    }
  }
}

TEST(TrigramModel, ObservedTrigramBeatsItsBackoffEstimate) {
  Sentences c = parse_corpus({"the cat sat", "the cat ran", "a dog sat", "the dog ran", "a cat sat", "the cat sat down",
                              "a dog ran off", "the dog sat down", "a cat ran off", "the dog sat"});
  const Vocabulary vocab = build_vocabulary(c, 1000);
  TrigramModel m = TrigramModel::train(c, vocab);
  // Singletons are excluded: a count of one keeps only (1 - delta) of itself and
  // can fall below a strong backoff estimate.
  std::map<std::array<std::string, 3>, int> trigrams;
  for (const auto& s : c) {
    std::vector<std::string> p{"<s>", "<s>"};
    p.insert(p.end(), s.begin(), s.end());
    p.emplace_back("</s>");
    for (std::size_t i = 2; i < p.size(); ++i) ++trigrams[{p[i - 2], p[i - 1], p[i]}];
  }
  // Hold out every sentence containing the trigram and retrain on the rest.
  int checked = 0;
  for (const auto& [t, count] : trigrams) {
    if (count < 2) continue;
    Sentences rest;
    for (const auto& s : c) {
      std::vector<std::string> p{"<s>", "<s>"};
      p.insert(p.end(), s.begin(), s.end());
      p.emplace_back("</s>");
      bool has = false;
      for (std::size_t i = 2; i < p.size(); ++i) has |= p[i - 2] == t[0] && p[i - 1] == t[1] && p[i] == t[2];
      if (!has) rest.push_back(s);
    }
    if (rest.empty()) continue;
    TrigramModel without = TrigramModel::train(rest, vocab);
    ASSERT_EQ(without.mle(t[0], t[1], t[2]), 0.0);
    EXPECT_GT(m.log_prob(t[0], t[1], t[2]), without.log_prob(t[0], t[1], t[2]))
        << t[0] << " " << t[1] << " " << t[2];
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(TrigramModel, SpanTilingMatchesSentenceScore) {
  std::mt19937_64 rng(5);
  Sentences c = parse_corpus({"a b c d", "b c a", "d d a b", "c a b d a", "a"});
  TrigramModel m = train(c);
  const std::vector<std::string> words{"a", "b", "c", "d", "z"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> s;
    int len = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int k = 0; k < len; ++k) s.push_back(words[std::uniform_int_distribution<std::size_t>(0, 4)(rng)]);
    std::vector<std::string> padded{"<s>", "<s>"};
    padded.insert(padded.end(), s.begin(), s.end());
    padded.emplace_back("</s>");
    // Disjoint spans, each scored without right context; </s> rides in the last one.
    double tiled = 0.0;
    std::size_t i = 2;
    while (i < padded.size()) {
      std::size_t len_span = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
      std::size_t e = std::min(i + len_span, padded.size());
      tiled += m.span_log_prob({padded[i - 2], padded[i - 1]},
                               std::span<const std::string>(padded.data() + i, e - i));
      i = e;
    }
    EXPECT_NEAR(tiled, m.sentence_log_prob(s), 1e-9);
    // Whole sentence as one span with </s> as right context.
    std::vector<std::string> eos{"</s>"};
    EXPECT_NEAR(m.span_log_prob({"<s>", "<s>"}, s, eos), m.sentence_log_prob(s), 1e-12);
  }
}

TEST(TrigramModel, WindowOfOneWordUsesThreeTrigrams) {
  TrigramModel m = train(parse_corpus({"a b c d e", "a c e"}));
  std::vector<std::string> span{"c"}, right{"d", "e"};
  double expect = m.log_prob("a", "b", "c") + m.log_prob("b", "c", "d") + m.log_prob("c", "d", "e");
  EXPECT_DOUBLE_EQ(m.span_log_prob({"a", "b"}, span, right), expect);
  EXPECT_DOUBLE_EQ(m.span_log_prob({"a", "b"}, {}, right), 0.0);
  // Scoring stops after </s>.
  std::vector<std::string> end{"</s>", "x"};
  EXPECT_DOUBLE_EQ(m.span_log_prob({"a", "b"}, span, end), m.log_prob("a", "b", "c") + m.log_prob("b", "c", "</s>"));
}

TEST(TrigramModel, AppendingATokenNeverRaisesTheScore) {
  TrigramModel m = train(parse_corpus({"a b c", "b a", "c c c a"}));
  std::vector<std::string> s;
  double prev = 0.0;
  for (const char* t : {"a", "b", "c", "a", "q"}) {
    s.emplace_back(t);
    double cur = m.span_log_prob({"<s>", "<s>"}, s);
    EXPECT_LE(cur, prev);
    prev = cur;
  }
}

TEST(TrigramModel, SaveLoadIsBitExact) {
  Sentences c = parse_corpus({"the senate voted to support aid", "they aim to win", "we told them the truth",
                              "two of the men came home"});
  TrigramModel m = train(c);
  std::ostringstream out;
  m.save(out);
  std::istringstream in(out.str());
  TrigramModel back = TrigramModel::load(in);
  EXPECT_EQ(back.num_bigrams(), m.num_bigrams());
  EXPECT_EQ(back.num_trigrams(), m.num_trigrams());
  for (WordId u = 0; u < m.num_tokens(); ++u) {
    for (WordId v = 0; v < m.num_tokens(); ++v) {
      for (WordId w = 1; w < m.num_tokens(); ++w) ASSERT_EQ(back.log_prob(u, v, w), m.log_prob(u, v, w));
    }
  }
  std::ostringstream again;
  back.save(again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(TrigramModel, TrainingIsDeterministic) {
  Sentences c = parse_corpus({"a b c", "c b a", "b b"});
  std::ostringstream x, y;
  train(c).save(x);
  train(c).save(y);
  EXPECT_EQ(x.str(), y.str());
}

TEST(TrigramModel, LoadRejectsMalformedFiles) {
  std::istringstream empty("");
  EXPECT_THROW(TrigramModel::load(empty), Error);
  std::istringstream bad("\\data\\\n\\1-grams:\n-1\t<s>\t0\n-1\t</s>\t0\n-1\t<unk>\t0\n\\2-grams:\n-1\t<s> nope\t0\n");
  EXPECT_THROW(TrigramModel::load(bad), Error);
  std::istringstream order("\\data\\\n\\1-grams:\n-1\t<s> </s>\t0\n");
  EXPECT_THROW(TrigramModel::load(order), Error);
}

}  // namespace
}  // namespace rwspell
