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

// Vocabulary construction and edit-distance-1 spelling variations.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwspell/text.hpp"

namespace rwspell {

/// Closed word list ordered by descending corpus frequency. Rank 1 is the
/// most frequent word.
class Vocabulary {
 public:
  Vocabulary() = default;

  explicit Vocabulary(std::vector<std::string> words_by_rank) : words_(std::move(words_by_rank)) {
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const std::string& w = words_[i];
      if (w.empty()) throw Error("vocabulary word is empty");
      for (char c : w) {
        if (std::isspace(static_cast<unsigned char>(c))) {
          throw Error("vocabulary word contains whitespace: '" + w + "'");
        }
      }
      if (!index_.emplace(w, i).second) throw Error("duplicate vocabulary word '" + w + "'");
    }
    std::set<char32_t> chars;
    for (const auto& w : words_) {
      for (char32_t c : utf8_decode(w)) chars.insert(c);
    }
    alphabet_.assign(chars.begin(), chars.end());
  }

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  bool contains(std::string_view w) const { return index_.find(w) != index_.end(); }

  /// 1-based frequency rank, or nullopt for words outside the vocabulary.
  std::optional<std::size_t> rank(std::string_view w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second + 1;
  }

  const std::vector<std::string>& words() const { return words_; }
  const std::u32string& alphabet() const { return alphabet_; }

  // One word per line, rank order.
  void save(std::ostream& os) const {
    for (const auto& w : words_) os << w << '\n';
  }

  static Vocabulary load(std::istream& is) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(is, line)) {
      std::string_view v = detail::strip_cr(line);
      if (v.empty()) continue;
      words.emplace_back(v);
    }
    return Vocabulary(std::move(words));
  }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, TransparentStringHash, std::equal_to<>> index_;
  std::u32string alphabet_;
};

/// Accumulates token frequencies for build_vocabulary.
class VocabularyCounter {
 public:
  void add(std::string_view tok) {
    auto it = counts_.find(tok);
    if (it == counts_.end()) {
      counts_.emplace(std::string(tok), 1);
    } else {
      ++it->second;
    }
    ++total_;
  }

  void add_sentence(std::span<const std::string> toks) {
    for (const auto& t : toks) add(t);
  }

  std::uint64_t total() const { return total_; }

  /// The `size_limit` most frequent types; ties go to the lexicographically
  /// smaller word.
  Vocabulary build(std::size_t size_limit) const {
    if (size_limit == 0) throw Error("vocabulary size limit must be positive");
    if (total_ == 0) throw Error("empty corpus");
    std::vector<std::pair<std::string_view, std::uint64_t>> entries(counts_.begin(), counts_.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (entries.size() > size_limit) entries.resize(size_limit);
    std::vector<std::string> words;
    words.reserve(entries.size());
    for (const auto& [w, c] : entries) words.emplace_back(w);
    return Vocabulary(std::move(words));
  }

 private:
  std::unordered_map<std::string, std::uint64_t, TransparentStringHash, std::equal_to<>> counts_;
  std::uint64_t total_ = 0;
};

inline Vocabulary build_vocabulary(std::span<const std::string> corpus, std::size_t size_limit) {
  VocabularyCounter counter;
  counter.add_sentence(corpus);
  return counter.build(size_limit);
}

inline Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& sentences,
                                   std::size_t size_limit) {
  VocabularyCounter counter;
  for (const auto& s : sentences) counter.add_sentence(s);
  return counter.build(size_limit);
}

/// S_c(w): vocabulary words one insertion, deletion, substitution or adjacent
/// transposition away from `source`. Sorted, never contains `source`. Only
/// word tokens take part on either side.
struct CandidateSet {
  std::string source;
  std::vector<std::string> variations;

  std::size_t size() const { return variations.size(); }
  bool contains(std::string_view w) const {
    return std::binary_search(variations.begin(), variations.end(), w);
  }
};

/// Enumerates every edit-distance-1 string of `w` over the vocabulary's
/// alphabet and keeps the ones the vocabulary contains.
inline CandidateSet spelling_variations(std::string_view w, const Vocabulary& vocab) {
  CandidateSet out{std::string(w), {}};
  if (vocab.empty() || !is_word_token(w)) return out;
  const std::u32string src = utf8_decode(w);
  const std::u32string& alpha = vocab.alphabet();
  std::set<std::string> found;
  std::u32string buf;
  auto probe = [&](const std::u32string& s) {
    std::string enc = utf8_encode(s);
    if (enc != w && vocab.contains(enc) && is_word_token(enc)) found.insert(std::move(enc));
  };
  const std::size_t n = src.size();
  for (std::size_t i = 0; i < n; ++i) {  // deletion
    buf = src;
    buf.erase(i, 1);
    if (!buf.empty()) probe(buf);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {  // transposition
    if (src[i] == src[i + 1]) continue;
    buf = src;
    std::swap(buf[i], buf[i + 1]);
    probe(buf);
  }
  for (std::size_t i = 0; i < n; ++i) {  // substitution
    for (char32_t c : alpha) {
      if (c == src[i]) continue;
      buf = src;
      buf[i] = c;
      probe(buf);
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {  // insertion
    for (char32_t c : alpha) {
      buf = src;
      buf.insert(buf.begin() + static_cast<std::ptrdiff_t>(i), c);
      probe(buf);
    }
  }
  out.variations.assign(found.begin(), found.end());
  return out;
}

/// Vocabulary plus the precomputed variation set of every vocabulary word.
/// Immutable once built, so concurrent readers need no locking.
class Lexicon {
 public:
  Lexicon() = default;

  explicit Lexicon(Vocabulary vocab) : vocab_(std::move(vocab)) {
    sets_.reserve(vocab_.size());
    for (const auto& w : vocab_.words()) sets_.push_back(spelling_variations(w, vocab_));
  }

  const Vocabulary& vocabulary() const { return vocab_; }
  bool contains(std::string_view w) const { return vocab_.contains(w); }

  /// S_c(w) for vocabulary words. Words outside the vocabulary are not
  /// real-word error sites and get the empty set.
  const CandidateSet& variations(std::string_view w) const {
    auto r = vocab_.rank(w);
    if (!r) {
      static const CandidateSet kEmpty;
      return kEmpty;
    }
    return sets_[*r - 1];
  }

 private:
  Vocabulary vocab_;
  std::vector<CandidateSet> sets_;
};

}  // namespace rwspell
