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

// Independent reference implementations used by the tests. Nothing here
// calls the search code; models are only queried through their public
// per-trigram and per-parse entry points.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "rwspell/rwspell.hpp"

namespace rwspell::testing {

/// Optimal string alignment distance over code points.
inline std::size_t osa_distance(const std::string& a8, const std::string& b8) {
  std::u32string a = utf8_decode(a8), b = utf8_decode(b8);
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

/// Vocabulary words at distance exactly 1, sorted, word tokens only.
inline std::vector<std::string> brute_variations(const std::string& w, const Vocabulary& vocab) {
  std::vector<std::string> out;
  if (!vocab.contains(w) || !is_word_token(w)) return out;
  for (const auto& v : vocab.words()) {
    if (is_word_token(v) && osa_distance(w, v) == 1) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

using VariationTable = std::map<std::string, std::vector<std::string>>;

inline VariationTable brute_table(const Vocabulary& vocab) {
  VariationTable t;
  for (const auto& w : vocab.words()) t[w] = brute_variations(w, vocab);
  return t;
}

inline const std::vector<std::string>& lookup(const VariationTable& t, const std::string& w) {
  static const std::vector<std::string> kNone;
  auto it = t.find(w);
  return it == t.end() ? kNone : it->second;
}

/// Channel term written out from the definition.
inline double ref_channel(double alpha, const VariationTable& t, const std::string& intended,
                          const std::string& typed) {
  const std::size_t n = lookup(t, intended).size();
  if (intended == typed) return n == 0 ? 0.0 : std::log(alpha);
  return std::log((1.0 - alpha) / static_cast<double>(n));
}

inline double ref_sentence_lm(const TrigramModel& lm, const std::vector<std::string>& s) {
  std::string u(kBos), v(kBos);
  double sum = 0.0;
  for (const auto& w : s) {
    sum += lm.log_prob(u, v, w);
    u = v;
    v = w;
  }
  return sum + lm.log_prob(u, v, kEos);
}

/// Exhaustive single-substitution search; the original wins ties and
/// earlier (position, variation) pairs win among equals.
inline std::vector<std::string> oracle_mdm(const TrigramModel& lm, const VariationTable& t, double alpha,
                                           const std::vector<std::string>& typed) {
  auto score = [&](const std::vector<std::string>& s) {
    double ch = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) ch += ref_channel(alpha, t, s[i], typed[i]);
    return ref_sentence_lm(lm, s) + ch;
  };
  std::vector<std::string> best = typed;
  double best_score = score(typed);
  for (std::size_t i = 0; i < typed.size(); ++i) {
    for (const auto& v : lookup(t, typed[i])) {
      auto s = typed;
      s[i] = v;
      double sc = score(s);
      if (sc > best_score) {
        best_score = sc;
        best = s;
      }
    }
  }
  return best;
}

struct RefWindow {
  std::size_t span_begin;  // padded index
  std::size_t span_end;
  std::size_t end;  // one past the last window token
};

inline std::vector<RefWindow> ref_windows(std::size_t n, std::size_t d) {
  std::vector<RefWindow> out;
  for (std::size_t s = 0; s < n; s += d) {
    std::size_t b = s + 2, e = std::min(s + d, n) + 2;
    out.push_back({b, e, std::min(e + 2, n + 3)});
  }
  return out;
}

inline std::vector<std::string> ref_pad(const std::vector<std::string>& s) {
  std::vector<std::string> p{std::string(kBos), std::string(kBos)};
  p.insert(p.end(), s.begin(), s.end());
  p.emplace_back(kEos);
  return p;
}

/// LM terms of the span and the following context, then the channel terms
/// of the span, in that order.
inline double ref_window_score(const TrigramModel& lm, const VariationTable& t, double alpha,
                               const std::vector<std::string>& cand_padded,
                               const std::vector<std::string>& typed_padded, const RefWindow& w) {
  double sum = 0.0;
  std::string u = cand_padded[w.span_begin - 2], v = cand_padded[w.span_begin - 1];
  for (std::size_t i = w.span_begin; i < w.end; ++i) {
    sum += lm.log_prob(u, v, cand_padded[i]);
    u = v;
    v = cand_padded[i];
    if (cand_padded[i] == kEos) break;
  }
  double ch = 0.0;
  for (std::size_t i = w.span_begin; i < w.span_end; ++i) ch += ref_channel(alpha, t, cand_padded[i], typed_padded[i]);
  return sum + ch;
}

inline std::vector<std::string> ref_window_words(const std::vector<std::string>& padded, const RefWindow& w) {
  std::vector<std::string> out;
  for (std::size_t i = w.span_begin - 2; i < w.end; ++i) {
    if (!is_sentinel(padded[i])) out.push_back(padded[i]);
  }
  return out;
}

/// Enumerates every multi-substitution sentence in lexicographic order of
/// its choice vector and applies the six gates directly: per-window parse
/// and statistical gates for every changed window, strict improvement per
/// changed window, sentence parse gate, and strict improvement of the
/// window-score sum. Ties go to the earliest choice vector.
inline std::vector<std::string> oracle_multi(const TrigramModel& lm, const Grammar& g, const VariationTable& t,
                                             double alpha, const std::vector<std::string>& typed, std::size_t d,
                                             double floor = kDefaultParseFloor) {
  const auto windows = ref_windows(typed.size(), d);
  const auto typed_padded = ref_pad(typed);
  std::vector<double> orig_score, orig_frag;
  double orig_total = 0.0;
  for (const auto& w : windows) {
    orig_score.push_back(ref_window_score(lm, t, alpha, typed_padded, typed_padded, w));
    orig_frag.push_back(g.fragment_log_prob_or_floor(ref_window_words(typed_padded, w), floor));
    orig_total += orig_score.back();
  }
  const double orig_parse = g.parse_log_prob_or_floor(typed, floor);

  std::vector<std::size_t> choice(typed.size(), 0);
  std::vector<std::string> best = typed;
  double best_total = orig_total;
  auto next = [&]() {
    for (std::size_t i = typed.size(); i-- > 0;) {
      if (choice[i] < lookup(t, typed[i]).size()) {
        ++choice[i];
        return true;
      }
      choice[i] = 0;
    }
    return false;
  };
  while (next()) {
    std::vector<std::string> cand = typed;
    for (std::size_t i = 0; i < typed.size(); ++i) {
      if (choice[i]) cand[i] = lookup(t, typed[i])[choice[i] - 1];
    }
    const auto cand_padded = ref_pad(cand);
    double total = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < windows.size() && ok; ++j) {
      const auto& w = windows[j];
      bool changed = false;
      for (std::size_t i = w.span_begin; i < w.span_end; ++i) changed = changed || cand_padded[i] != typed_padded[i];
      if (!changed) {
        total += orig_score[j];
        continue;
      }
      // The window is judged with its own span substituted and the typed
      // text everywhere else.
      auto local = typed_padded;
      for (std::size_t i = w.span_begin; i < w.span_end; ++i) local[i] = cand_padded[i];
      if (!(g.fragment_log_prob_or_floor(ref_window_words(local, w), floor) > orig_frag[j])) ok = false;
      double s = ref_window_score(lm, t, alpha, local, typed_padded, w);
      if (!(s > orig_score[j])) ok = false;
      total += s;
    }
    if (!ok || !(total > orig_total)) continue;
    if (!(g.parse_log_prob_or_floor(cand, floor) > orig_parse)) continue;
    if (total > best_total) {
      best_total = total;
      best = cand;
    }
  }
  return best;
}

/// Plain rule lists for a small grammar, shared by the CKY oracle and the
/// builder.
struct ToyGrammar {
  struct Bin {
    std::string a, b, c;
    double p;
  };
  struct Lex {
    std::string a, w;
    double p;
  };
  std::vector<Bin> binary;
  std::vector<Lex> lexical;
  std::map<std::string, double> roots;
  std::map<std::string, double> fragment_roots;
  std::map<std::string, double> unknown;

  Grammar build() const {
    Grammar::Builder b;
    for (const auto& r : binary) b.binary(r.a, r.b, r.c, r.p);
    for (const auto& r : lexical) b.lexical(r.a, r.w, r.p);
    for (const auto& [s, p] : roots) b.root(s, p);
    for (const auto& [s, p] : fragment_roots) b.fragment_root(s, p);
    for (const auto& [s, p] : unknown) b.unknown(s, p);
    return b.build();
  }
};

/// Every derivation of words[i, j), listed explicitly as (root, ln prob).
inline std::vector<std::pair<std::string, double>> all_derivations(const ToyGrammar& g,
                                                                   const std::vector<std::string>& words,
                                                                   std::size_t i, std::size_t j) {
  std::vector<std::pair<std::string, double>> out;
  if (j - i == 1) {
    bool known = false;
    for (const auto& r : g.lexical) known = known || r.w == words[i];
    if (known) {
      for (const auto& r : g.lexical) {
        if (r.w == words[i]) out.emplace_back(r.a, std::log(r.p));
      }
    } else {
      for (const auto& [s, p] : g.unknown) out.emplace_back(s, std::log(p));
    }
    return out;
  }
  for (std::size_t k = i + 1; k < j; ++k) {
    auto left = all_derivations(g, words, i, k);
    auto right = all_derivations(g, words, k, j);
    for (const auto& [lb, lp] : left) {
      for (const auto& [rc, rp] : right) {
        for (const auto& r : g.binary) {
          if (r.b == lb && r.c == rc) out.emplace_back(r.a, std::log(r.p) + lp + rp);
        }
      }
    }
  }
  return out;
}

inline std::optional<double> oracle_viterbi(const ToyGrammar& g, const std::vector<std::string>& words) {
  std::optional<double> best;
  for (const auto& [root, lp] : all_derivations(g, words, 0, words.size())) {
    auto it = g.roots.find(root);
    if (it == g.roots.end()) continue;
    double v = lp + std::log(it->second);
    if (!best || v > *best) best = v;
  }
  return best;
}

/// Best split of words into adjacent derivations, each weighted by the
/// fragment-root table; enumerated over all 2^(n-1) segmentations.
inline std::optional<double> oracle_fragment(const ToyGrammar& g, const std::vector<std::string>& words) {
  const std::size_t n = words.size();
  std::optional<double> best;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    double total = 0.0;
    bool ok = true;
    std::size_t start = 0;
    for (std::size_t k = 1; k <= n && ok; ++k) {
      if (k < n && !(mask & (1u << (k - 1)))) continue;
      std::optional<double> piece;
      for (const auto& [root, lp] : all_derivations(g, words, start, k)) {
        auto it = g.fragment_roots.find(root);
        if (it == g.fragment_roots.end()) continue;
        double v = lp + std::log(it->second);
        if (!piece || v > *piece) piece = v;
      }
      if (!piece) ok = false;
      else total += *piece;
      start = k;
    }
    if (ok && (!best || total > *best)) best = total;
  }
  return best;
}

/// Random grammar over symbols S, A, B, C with at most `max_rules` binary
/// plus lexical rules; words outside the lexical rules use the unknown
/// table.
inline ToyGrammar random_grammar(std::mt19937_64& rng, const std::vector<std::string>& words,
                                 std::size_t max_rules = 10) {
  const std::vector<std::string> syms{"A", "B", "C", "S"};
  auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
  std::uniform_real_distribution<double> prob(0.05, 1.0);
  ToyGrammar g;
  std::size_t nbin = std::uniform_int_distribution<std::size_t>(2, max_rules - 3)(rng);
  std::size_t nlex = std::uniform_int_distribution<std::size_t>(1, max_rules - nbin)(rng);
  std::map<std::tuple<std::string, std::string, std::string>, bool> seen;
  for (std::size_t k = 0; k < nbin; ++k) {
    auto key = std::make_tuple(pick(syms), pick(syms), pick(syms));
    if (seen[key]) continue;
    seen[key] = true;
    g.binary.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), prob(rng)});
  }
  std::map<std::pair<std::string, std::string>, bool> seen_lex;
  for (std::size_t k = 0; k < nlex; ++k) {
    auto key = std::make_pair(pick(syms), pick(words));
    if (seen_lex[key]) continue;
    seen_lex[key] = true;
    g.lexical.push_back({key.first, key.second, prob(rng)});
  }
  for (const auto& s : syms) {
    if (std::bernoulli_distribution(0.6)(rng)) g.unknown[s] = prob(rng) * 0.2;
    if (std::bernoulli_distribution(0.7)(rng)) g.fragment_roots[s] = prob(rng);
  }
  g.roots["S"] = 1.0;
  if (g.unknown.empty()) g.unknown["A"] = 0.1;
  if (g.fragment_roots.empty()) g.fragment_roots["S"] = 1.0;
  return g;
}

/// Small random world: a vocabulary of short strings over {a, b, c}, a
/// trigram model trained on random sentences, a random grammar and a typed
/// sentence.
struct ToyWorld {
  Lexicon lexicon;
  TrigramModel lm;
  VariationTable table;
  ToyGrammar grammar_spec;
  Grammar grammar;
  std::vector<std::string> typed;
  double alpha = 0.9;
};

inline ToyWorld random_world(std::uint64_t seed, std::size_t max_vocab, std::size_t max_len,
                             std::size_t max_grammar_rules = 10) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> pool;
  for (const char* w : {"a", "b", "c", "aa", "ab", "ac", "ba", "bb", "bc", "ca", "cb", "cc", "aab", "aba",
                        "abc", "acb", "bac", "bca", "cab", "cba", "abb", "bba", "cca", "acc", "bcb", "cbc"}) {
    pool.emplace_back(w);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t vsize = std::uniform_int_distribution<std::size_t>(4, std::min(max_vocab, pool.size()))(rng);
  pool.resize(vsize);

  // Zipf-like weights so the model has frequent and rare words.
  std::vector<double> weights;
  for (std::size_t i = 0; i < vsize; ++i) weights.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> word(weights.begin(), weights.end());
  std::vector<std::vector<std::string>> corpus;
  std::size_t nsent = std::uniform_int_distribution<std::size_t>(10, 40)(rng);
  for (std::size_t s = 0; s < nsent; ++s) {
    std::vector<std::string> sent;
    std::size_t len = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    for (std::size_t k = 0; k < len; ++k) sent.push_back(pool[word(rng)]);
    corpus.push_back(std::move(sent));
  }
  for (const auto& w : pool) corpus.push_back({w});  // every pool word is in the vocabulary

  ToyWorld world;
  Vocabulary vocab = build_vocabulary(corpus, max_vocab);
  world.lm = TrigramModel::train(corpus, vocab, TrigramOptions{0.5});
  world.table = brute_table(vocab);
  world.lexicon = Lexicon(vocab);
  const std::vector<double> alphas{0.9, 0.99, 0.995, 0.999};
  world.alpha = alphas[std::uniform_int_distribution<std::size_t>(0, alphas.size() - 1)(rng)];
  std::size_t len = std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
  for (std::size_t k = 0; k < len; ++k) world.typed.push_back(vocab.words()[word(rng) % vocab.size()]);
  world.grammar_spec = random_grammar(rng, vocab.words(), max_grammar_rules);
  world.grammar = world.grammar_spec.build();
  return world;
}

/// A world built so that corrections happen: the model is trained on a few
/// repeated template sentences, the typed sentence is a template with
/// real-word errors planted in it, and the grammar knows the intended words
/// while every other word is an unlikely unknown word.
inline ToyWorld planted_world(std::uint64_t seed, std::size_t max_vocab, std::size_t max_len,
                              std::size_t max_grammar_rules = 10) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> pool;
  for (const char* w : {"a", "b", "c", "aa", "ab", "ac", "ba", "bb", "bc", "ca", "cb", "cc", "aab", "aba",
                        "abc", "acb", "bac", "bca", "cab", "cba", "abb", "bba", "cca", "acc", "bcb", "cbc"}) {
    pool.emplace_back(w);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::uniform_int_distribution<std::size_t>(6, std::min(max_vocab, pool.size()))(rng));
  auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };

  std::vector<std::vector<std::string>> templates(std::uniform_int_distribution<std::size_t>(2, 5)(rng));
  for (auto& t : templates) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(2, std::max<std::size_t>(2, max_len))(rng);
    for (std::size_t k = 0; k < len; ++k) t.push_back(pick(pool));
  }
  std::vector<std::vector<std::string>> corpus;
  for (const auto& t : templates) {
    for (std::size_t r = std::uniform_int_distribution<std::size_t>(2, 6)(rng); r > 0; --r) corpus.push_back(t);
  }
  for (std::size_t s = std::uniform_int_distribution<std::size_t>(0, 8)(rng); s > 0; --s) {
    std::vector<std::string> noise;
    for (std::size_t k = std::uniform_int_distribution<std::size_t>(1, 5)(rng); k > 0; --k) noise.push_back(pick(pool));
    corpus.push_back(std::move(noise));
  }
  for (const auto& w : pool) corpus.push_back({w});

  ToyWorld world;
  Vocabulary vocab = build_vocabulary(corpus, max_vocab);
  world.lm = TrigramModel::train(corpus, vocab, TrigramOptions{0.5});
  world.table = brute_table(vocab);
  world.lexicon = Lexicon(vocab);
  world.alpha = std::bernoulli_distribution(0.7)(rng) ? 0.9 : 0.99;

  const auto& intended = pick(templates);
  world.typed = intended;
  const double rate = std::uniform_real_distribution<double>(0.2, 0.5)(rng);
  for (auto& w : world.typed) {
    const auto& vars = lookup(world.table, w);
    if (!vars.empty() && std::bernoulli_distribution(rate)(rng)) w = pick(vars);
  }

  // S -> S A | A A; the intended words are known to A, everything else is an
  // unknown word with little mass. Leftover rule budget goes to random rules.
  ToyGrammar& g = world.grammar_spec;
  std::uniform_real_distribution<double> prob(0.05, 1.0);
  g.binary.push_back({"S", "S", "A", prob(rng)});
  g.binary.push_back({"S", "A", "A", prob(rng)});
  std::set<std::tuple<std::string, std::string, std::string>> seen{{"S", "S", "A"}, {"S", "A", "A"}};
  std::set<std::pair<std::string, std::string>> seen_lex;
  for (const auto& w : intended) {
    if (g.binary.size() + g.lexical.size() == max_grammar_rules) break;
    if (seen_lex.insert({"A", w}).second) g.lexical.push_back({"A", w, std::uniform_real_distribution<double>(0.3, 1.0)(rng)});
  }
  const std::vector<std::string> syms{"A", "B", "S"};
  while (g.binary.size() + g.lexical.size() < max_grammar_rules && std::bernoulli_distribution(0.5)(rng)) {
    if (std::bernoulli_distribution(0.5)(rng)) {
      auto key = std::make_tuple(pick(syms), pick(syms), pick(syms));
      if (seen.insert(key).second) g.binary.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), prob(rng)});
    } else {
      auto key = std::make_pair(pick(syms), pick(vocab.words()));
      if (seen_lex.insert(key).second) g.lexical.push_back({key.first, key.second, prob(rng)});
    }
  }
  g.unknown["A"] = std::uniform_real_distribution<double>(0.005, 0.05)(rng);
  if (std::bernoulli_distribution(0.3)(rng)) g.unknown["B"] = std::uniform_real_distribution<double>(0.005, 0.05)(rng);
  g.roots["S"] = 1.0;
  g.fragment_roots["S"] = prob(rng);
  g.fragment_roots["A"] = prob(rng);
  if (std::bernoulli_distribution(0.5)(rng)) g.fragment_roots["B"] = prob(rng);
  world.grammar = g.build();
  return world;
}

/// Size of the full multi-substitution space of a sentence.
inline double full_space(const VariationTable& t, const std::vector<std::string>& s) {
  double n = 1.0;
  for (const auto& w : s) n *= 1.0 + static_cast<double>(lookup(t, w).size());
  return n - 1.0;
}

}  // namespace rwspell::testing
