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

// Backoff trigram language model.
//
// Counts come from sentences padded as <s> <s> w1 .. wn </s>. Every observed
// n-gram keeps its count minus a fixed discount delta; the freed mass of a
// context goes to the next lower order, renormalized over the words that
// context never saw (Katz backoff). Unigrams are add-delta estimates over the
// vocabulary plus </s> and <unk>. All tables hold log10 values so that a
// saved model reloads to bit-identical scores; queries return natural logs.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rwspell/lexicon.hpp"
#include "rwspell/text.hpp"

namespace rwspell {

using WordId = std::uint32_t;

struct TrigramOptions {
  // Absolute discount taken from every observed bigram and trigram count and
  // the additive constant of the unigram estimate. Must lie in [0, 1).
  double delta = 0.5;
};

class TrigramModel {
 public:
  static constexpr WordId kBosId = 0;
  static constexpr WordId kEosId = 1;
  static constexpr WordId kUnkId = 2;

  TrigramModel() = default;

  std::size_t num_tokens() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  WordId id(std::string_view tok) const {
    auto it = index_.find(tok);
    return it == index_.end() ? kUnkId : it->second;
  }
  const std::string& token(WordId id) const { return tokens_.at(id); }

  /// Natural-log P(w | u v).
  double log_prob(WordId u, WordId v, WordId w) const {
    return log10_prob(u, v, w) * std::numbers::ln10;
  }

  double log_prob(std::string_view u, std::string_view v, std::string_view w) const {
    return log_prob(id(u), id(v), id(w));
  }

  double log10_prob(WordId u, WordId v, WordId w) const {
    if (auto it = trigrams_.find(key3(u, v, w)); it != trigrams_.end()) return it->second;
    double bow = 0.0;
    if (auto it = bigrams_.find(key2(u, v)); it != bigrams_.end()) bow = it->second.log10_bow;
    return bow + log10_bigram(v, w);
  }

  /// Maximum-likelihood ratio c(u v w) / c(u v) from the training counts.
  /// Only available on a freshly trained model.
  double mle(std::string_view u, std::string_view v, std::string_view w) const {
    auto ctx = context_counts_.find(key2(id(u), id(v)));
    if (ctx == context_counts_.end() || ctx->second == 0) return 0.0;
    auto it = trigram_counts_.find(key3(id(u), id(v), id(w)));
    double c = it == trigram_counts_.end() ? 0.0 : static_cast<double>(it->second);
    return c / static_cast<double>(ctx->second);
  }

  /// Sum over i = 1..n+1 of log P(w_i | w_{i-2} w_{i-1}), position n+1 being
  /// </s>. Tokens must not include sentinels.
  double sentence_log_prob(std::span<const std::string> toks) const {
    std::vector<WordId> ids;
    ids.reserve(toks.size());
    for (const auto& t : toks) ids.push_back(id(t));
    return sentence_log_prob_ids(ids);
  }

  double sentence_log_prob_ids(std::span<const WordId> ids) const {
    double sum = 0.0;
    WordId u = kBosId;
    WordId v = kBosId;
    for (WordId w : ids) {
      sum += log_prob(u, v, w);
      u = v;
      v = w;
    }
    return sum + log_prob(u, v, kEosId);
  }

  /// Log-probability of every token whose trigram touches `span`: the span
  /// tokens themselves plus up to two following tokens from `right_context`
  /// (stopping after </s>). An empty span scores 0.
  double span_log_prob(const std::array<std::string, 2>& left_context, std::span<const std::string> span,
                       std::span<const std::string> right_context = {}) const {
    std::vector<WordId> s;
    std::vector<WordId> r;
    for (const auto& t : span) s.push_back(id(t));
    for (const auto& t : right_context) r.push_back(id(t));
    return span_log_prob_ids({id(left_context[0]), id(left_context[1])}, s, r);
  }

  double span_log_prob_ids(std::array<WordId, 2> left_context, std::span<const WordId> span,
                           std::span<const WordId> right_context = {}) const {
    if (span.empty()) return 0.0;
    double sum = 0.0;
    WordId u = left_context[0];
    WordId v = left_context[1];
    for (WordId w : span) {
      sum += log_prob(u, v, w);
      u = v;
      v = w;
      if (w == kEosId) return sum;
    }
    std::size_t extra = std::min<std::size_t>(2, right_context.size());
    for (std::size_t i = 0; i < extra; ++i) {
      WordId w = right_context[i];
      sum += log_prob(u, v, w);
      u = v;
      v = w;
      if (w == kEosId) break;
    }
    return sum;
  }

  std::size_t num_bigrams() const { return bigrams_.size(); }
  std::size_t num_trigrams() const { return trigrams_.size(); }

  /// Text model file. Field order on every n-gram line is
  /// "log10-prob<TAB>space-separated tokens[<TAB>log10-backoff]".
  void save(std::ostream& os) const;
  static TrigramModel load(std::istream& is);

  static TrigramModel train(const std::vector<std::vector<std::string>>& corpus, const Vocabulary& vocab,
                            TrigramOptions opts = {});

 private:
  struct BigramEntry {
    double log10_prob = 0.0;
    double log10_bow = 0.0;
  };

  static std::uint64_t key2(WordId u, WordId v) { return (std::uint64_t{u} << 21) | v; }
  static std::uint64_t key3(WordId u, WordId v, WordId w) {
    return (std::uint64_t{u} << 42) | (std::uint64_t{v} << 21) | w;
  }

  double log10_bigram(WordId v, WordId w) const {
    if (auto it = bigrams_.find(key2(v, w)); it != bigrams_.end()) return it->second.log10_prob;
    return unigram_bow_[v] + unigram_[w];
  }

  void init_tokens(std::vector<std::string> tokens) {
    if (tokens.size() >= (1u << 21)) throw Error("vocabulary too large for the trigram key packing");
    tokens_ = std::move(tokens);
    index_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!index_.emplace(tokens_[i], static_cast<WordId>(i)).second) {
        throw Error("duplicate token in model: '" + tokens_[i] + "'");
      }
    }
    unigram_.assign(tokens_.size(), 0.0);
    unigram_bow_.assign(tokens_.size(), 0.0);
  }

  std::vector<std::string> tokens_;  // <s>, </s>, <unk>, then vocabulary by rank
  std::unordered_map<std::string, WordId, TransparentStringHash, std::equal_to<>> index_;
  std::vector<double> unigram_;
  std::vector<double> unigram_bow_;
  std::unordered_map<std::uint64_t, BigramEntry> bigrams_;
  std::unordered_map<std::uint64_t, double> trigrams_;

  // Raw counts, kept for inspection after training; not serialized.
  std::unordered_map<std::uint64_t, std::uint64_t> trigram_counts_;
  std::unordered_map<std::uint64_t, std::uint64_t> context_counts_;
};

inline TrigramModel TrigramModel::train(const std::vector<std::vector<std::string>>& corpus,
                                        const Vocabulary& vocab, TrigramOptions opts) {
  if (corpus.empty()) throw Error("empty corpus");
  if (!(opts.delta >= 0.0 && opts.delta < 1.0)) throw Error("discount must lie in [0, 1)");
  TrigramModel m;
  std::vector<std::string> toks{std::string(kBos), std::string(kEos), std::string(kUnk)};
  for (const auto& w : vocab.words()) {
    if (w == kBos || w == kEos || w == kUnk) throw Error("vocabulary contains a reserved token: " + w);
    toks.push_back(w);
  }
  m.init_tokens(std::move(toks));
  const std::size_t V = m.tokens_.size();
  const double delta = opts.delta;

  std::vector<std::uint64_t> c1(V, 0);
  std::unordered_map<std::uint64_t, std::uint64_t> c2;
  std::unordered_map<std::uint64_t, std::uint64_t>& c3 = m.trigram_counts_;
  std::uint64_t events = 0;
  std::vector<WordId> ids;
  for (const auto& sent : corpus) {
    ids.assign({kBosId, kBosId});
    for (const auto& t : sent) ids.push_back(m.id(t));
    ids.push_back(kEosId);
    for (std::size_t i = 2; i < ids.size(); ++i) {
      ++c1[ids[i]];
      ++c2[key2(ids[i - 1], ids[i])];
      ++c3[key3(ids[i - 2], ids[i - 1], ids[i])];
      ++events;
    }
  }

  // Unigrams: add-delta over every predictable token (all but <s>).
  const double denom1 = static_cast<double>(events) + delta * static_cast<double>(V - 1);
  std::vector<double> p1(V, 0.0);
  for (WordId w = 1; w < V; ++w) {
    p1[w] = (static_cast<double>(c1[w]) + delta) / denom1;
  }

  // Group bigram events by context.
  struct Ctx {
    std::uint64_t total = 0;
    std::vector<std::pair<WordId, std::uint64_t>> seen;
  };
  std::unordered_map<WordId, Ctx> ctx2;
  for (const auto& [k, c] : c2) {
    auto& e = ctx2[static_cast<WordId>(k >> 21)];
    e.total += c;
    e.seen.emplace_back(static_cast<WordId>(k & 0x1FFFFF), c);
  }
  std::vector<double> bow1(V, 1.0);
  std::unordered_map<std::uint64_t, double> p2;  // seen bigram probabilities
  for (auto& [v, e] : ctx2) {
    std::sort(e.seen.begin(), e.seen.end());
    const double total = static_cast<double>(e.total);
    double seen_lower = 0.0;
    for (const auto& [w, c] : e.seen) seen_lower += p1[w];
    double unseen_lower = 1.0 - seen_lower;
    double d = unseen_lower > 1e-12 ? delta : 0.0;
    for (const auto& [w, c] : e.seen) p2[key2(v, w)] = (static_cast<double>(c) - d) / total;
    double reserved = d * static_cast<double>(e.seen.size()) / total;
    bow1[v] = d > 0.0 ? reserved / unseen_lower : 0.0;
  }
  auto full_p2 = [&](WordId v, WordId w) {
    if (auto it = p2.find(key2(v, w)); it != p2.end()) return it->second;
    return bow1[v] * p1[w];
  };

  std::unordered_map<std::uint64_t, Ctx> ctx3;
  for (const auto& [k, c] : c3) {
    auto& e = ctx3[k >> 21];
    e.total += c;
    e.seen.emplace_back(static_cast<WordId>(k & 0x1FFFFF), c);
  }
  std::unordered_map<std::uint64_t, double> bow2;
  for (auto& [uv, e] : ctx3) {
    std::sort(e.seen.begin(), e.seen.end());
    const WordId v = static_cast<WordId>(uv & 0x1FFFFF);
    const double total = static_cast<double>(e.total);
    m.context_counts_[uv] = e.total;
    double seen_lower = 0.0;
    for (const auto& [w, c] : e.seen) seen_lower += full_p2(v, w);
    double unseen_lower = 1.0 - seen_lower;
    double d = unseen_lower > 1e-12 ? delta : 0.0;
    for (const auto& [w, c] : e.seen) {
      m.trigrams_[(uv << 21) | w] = std::log10((static_cast<double>(c) - d) / total);
    }
    double reserved = d * static_cast<double>(e.seen.size()) / total;
    bow2[uv] = d > 0.0 ? reserved / unseen_lower : 0.0;
  }

  for (WordId w = 0; w < V; ++w) {
    m.unigram_[w] = w == kBosId ? -99.0 : std::log10(p1[w]);
    m.unigram_bow_[w] = std::log10(bow1[w]);
  }
  for (const auto& [k, p] : p2) {
    BigramEntry e;
    e.log10_prob = std::log10(p);
    auto it = bow2.find(k);
    e.log10_bow = std::log10(it == bow2.end() ? 1.0 : it->second);
    m.bigrams_.emplace(k, e);
  }
  // Contexts such as (<s>, <s>) are histories without being predicted bigrams.
  for (const auto& [k, b] : bow2) {
    if (!m.bigrams_.count(k)) {
      m.bigrams_.emplace(k, BigramEntry{-99.0, std::log10(b)});
    }
  }
  return m;
}

inline void TrigramModel::save(std::ostream& os) const {
  std::vector<std::uint64_t> bkeys;
  bkeys.reserve(bigrams_.size());
  for (const auto& [k, e] : bigrams_) bkeys.push_back(k);
  std::sort(bkeys.begin(), bkeys.end());
  std::vector<std::uint64_t> tkeys;
  tkeys.reserve(trigrams_.size());
  for (const auto& [k, p] : trigrams_) tkeys.push_back(k);
  std::sort(tkeys.begin(), tkeys.end());

  os << "\\data\\\n";
  os << "ngram 1=" << tokens_.size() << '\n';
  os << "ngram 2=" << bkeys.size() << '\n';
  os << "ngram 3=" << tkeys.size() << "\n\n";
  os << "\\1-grams:\n";
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    os << detail::format_double(unigram_[i]) << '\t' << tokens_[i] << '\t'
       << detail::format_double(unigram_bow_[i]) << '\n';
  }
  os << "\n\\2-grams:\n";
  for (auto k : bkeys) {
    const auto& e = bigrams_.at(k);
    os << detail::format_double(e.log10_prob) << '\t' << tokens_[k >> 21] << ' ' << tokens_[k & 0x1FFFFF] << '\t'
       << detail::format_double(e.log10_bow) << '\n';
  }
  os << "\n\\3-grams:\n";
  for (auto k : tkeys) {
    os << detail::format_double(trigrams_.at(k)) << '\t' << tokens_[k >> 42] << ' ' << tokens_[(k >> 21) & 0x1FFFFF]
       << ' ' << tokens_[k & 0x1FFFFF] << '\n';
  }
  os << "\n\\end\\\n";
}

inline TrigramModel TrigramModel::load(std::istream& is) {
  TrigramModel m;
  std::string line;
  int section = 0;
  std::size_t lineno = 0;
  std::vector<std::string> toks;
  std::vector<std::pair<double, double>> uni;
  auto fail = [&](const std::string& why) {
    throw Error("model file line " + std::to_string(lineno) + ": " + why);
  };
  auto lookup = [&](std::string_view t) -> WordId {
    auto it = m.index_.find(t);
    if (it == m.index_.end()) fail("unknown token '" + std::string(t) + "'");
    return it->second;
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view v = detail::strip_cr(line);
    if (v.empty()) continue;
    if (v == "\\data\\" || v.starts_with("ngram ")) continue;
    if (v == "\\1-grams:") {
      section = 1;
      continue;
    }
    if (v == "\\2-grams:" || v == "\\3-grams:") {
      if (section == 1) {
        m.init_tokens(toks);
        for (std::size_t i = 0; i < uni.size(); ++i) {
          m.unigram_[i] = uni[i].first;
          m.unigram_bow_[i] = uni[i].second;
        }
      }
      section = v[1] - '0';
      continue;
    }
    if (v == "\\end\\") break;
    auto fields = detail::split_tabs(v);
    if (fields.size() < 2) fail("expected tab-separated fields");
    double p = detail::parse_double(fields[0]);
    double bow = fields.size() > 2 ? detail::parse_double(fields[2]) : 0.0;
    auto words = split_whitespace(fields[1]);
    if (static_cast<int>(words.size()) != section) fail("wrong n-gram order");
    if (section == 1) {
      toks.push_back(words[0]);
      uni.emplace_back(p, bow);
    } else if (section == 2) {
      m.bigrams_[key2(lookup(words[0]), lookup(words[1]))] = BigramEntry{p, bow};
    } else if (section == 3) {
      m.trigrams_[key3(lookup(words[0]), lookup(words[1]), lookup(words[2]))] = p;
    } else {
      fail("n-gram line outside a section");
    }
  }
  if (m.tokens_.empty()) {
    if (toks.empty()) throw Error("model file has no unigrams");
    m.init_tokens(toks);
    for (std::size_t i = 0; i < uni.size(); ++i) {
      m.unigram_[i] = uni[i].first;
      m.unigram_bow_[i] = uni[i].second;
    }
  }
  if (m.tokens_.size() < 3 || m.tokens_[kBosId] != kBos || m.tokens_[kEosId] != kEos || m.tokens_[kUnkId] != kUnk) {
    throw Error("model file must list <s>, </s>, <unk> as its first unigrams");
  }
  return m;
}

}  // namespace rwspell
