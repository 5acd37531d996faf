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

// Treebank-induced PCFG with CKY Viterbi scoring.
//
// Induction collapses unary chains into joined labels ("NP+PRP"), binarizes
// wider nodes left to right through "@PARENT|C1|C2..." intermediate symbols,
// and sets every rule probability to its relative frequency per left-hand
// side. Besides the rules the grammar keeps three distributions:
//   roots          empirical distribution of tree roots (whole sentences)
//   fragment roots empirical distribution of node labels (sentence pieces)
//   unknown        emission score of an unseen word from each preterminal
// All tables are stored as log10; parse results are natural logs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwspell/text.hpp"

namespace rwspell {

inline constexpr double kDefaultParseFloor = -1e9;

/// Bracketed tree. Leaves (words) have no children.
struct Tree {
  std::string label;
  std::vector<Tree> children;

  bool is_leaf() const { return children.empty(); }
  bool is_preterminal() const { return children.size() == 1 && children[0].is_leaf(); }

  std::vector<std::string> yield() const {
    std::vector<std::string> out;
    collect_yield(out);
    return out;
  }

  std::string to_string() const {
    if (is_leaf()) return label;
    std::string s = "(" + label;
    for (const auto& c : children) s += " " + c.to_string();
    return s + ")";
  }

 private:
  void collect_yield(std::vector<std::string>& out) const {
    if (is_leaf()) {
      out.push_back(label);
      return;
    }
    for (const auto& c : children) c.collect_yield(out);
  }
};

namespace detail {

inline std::string strip_function_tags(const std::string& label) {
  if (label.empty() || label[0] == '-' || label[0] == '@') return label;
  std::size_t cut = label.find_first_of("-=");
  return cut == std::string::npos || cut == 0 ? label : label.substr(0, cut);
}

class TreeReader {
 public:
  explicit TreeReader(std::string_view text) : text_(text) {}

  Tree read() {
    skip_space();
    Tree t = node();
    skip_space();
    if (pos_ != text_.size()) throw Error("trailing characters after tree");
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string atom() {
    std::size_t b = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    return std::string(text_.substr(b, pos_ - b));
  }

  Tree node() {
    if (pos_ >= text_.size() || text_[pos_] != '(') throw Error("expected '('");
    ++pos_;
    skip_space();
    Tree t;
    if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')') t.label = atom();
    skip_space();
    while (pos_ < text_.size() && text_[pos_] != ')') {
      if (text_[pos_] == '(') {
        t.children.push_back(node());
      } else {
        t.children.push_back(Tree{atom(), {}});
      }
      skip_space();
    }
    if (pos_ >= text_.size()) throw Error("unbalanced brackets");
    ++pos_;
    if (t.children.empty()) throw Error("empty constituent");
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Treebank escapes for bracket words.
inline std::string unescape_word(const std::string& w) {
  if (w == "-LRB-") return "(";
  if (w == "-RRB-") return ")";
  if (w == "-LCB-") return "{";
  if (w == "-RCB-") return "}";
  if (w == "-LSB-") return "[";
  if (w == "-RSB-") return "]";
  return to_lower(w);
}

// Drops -NONE- elements, strips function tags, lowercases words. Returns
// false when nothing is left of the node.
inline bool normalize_tree(Tree& t) {
  if (t.is_leaf()) {
    t.label = unescape_word(t.label);
    return true;
  }
  if (t.label == "-NONE-") return false;
  t.label = strip_function_tags(t.label);
  std::vector<Tree> kept;
  for (auto& c : t.children) {
    if (normalize_tree(c)) kept.push_back(std::move(c));
  }
  t.children = std::move(kept);
  return !t.children.empty();
}

}  // namespace detail

/// Parses one Penn-style bracketed tree. A root with an empty label and a
/// single child, as in "( (S ...) )", is unwrapped.
inline Tree parse_tree(std::string_view text) {
  Tree t = detail::TreeReader(text).read();
  if (t.label.empty() && t.children.size() == 1 && !t.children[0].is_leaf()) t = std::move(t.children[0]);
  if (t.is_leaf()) throw Error("tree has no constituent");
  if (!detail::normalize_tree(t)) throw Error("tree is empty after removing empty elements");
  return t;
}

/// One tree per non-blank line. Errors carry the 1-based line number.
inline std::vector<Tree> read_treebank(std::istream& is) {
  std::vector<Tree> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view v = detail::strip_cr(line);
    if (v.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      out.push_back(parse_tree(v));
    } catch (const Error& e) {
      throw Error("treebank line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

/// Merges every unary chain A -> B into a node labelled "A+B". A chain
/// ending in a preterminal yields a preterminal.
inline Tree collapse_unaries(Tree t) {
  if (t.is_leaf() || t.is_preterminal()) return t;
  while (t.children.size() == 1 && !t.children[0].is_leaf()) {
    Tree child = std::move(t.children[0]);
    t.label += "+" + child.label;
    t.children = std::move(child.children);
  }
  if (t.is_preterminal()) return t;
  for (auto& c : t.children) {
    if (c.is_leaf()) throw Error("words must sit under a preterminal: '" + c.label + "' in " + t.label);
    c = collapse_unaries(std::move(c));
  }
  return t;
}

/// Left-to-right binarization: (A c1 c2 c3) becomes (A (@A|c1|c2 c1 c2) c3).
inline Tree binarize(Tree t) {
  if (t.is_leaf() || t.is_preterminal()) return t;
  for (auto& c : t.children) c = binarize(std::move(c));
  if (t.children.size() <= 2) return t;
  std::vector<Tree> kids = std::move(t.children);
  Tree acc{"@" + t.label + "|" + kids[0].label + "|" + kids[1].label, {}};
  acc.children.push_back(std::move(kids[0]));
  acc.children.push_back(std::move(kids[1]));
  for (std::size_t i = 2; i + 1 < kids.size(); ++i) {
    Tree next{acc.label + "|" + kids[i].label, {}};
    next.children.push_back(std::move(acc));
    next.children.push_back(std::move(kids[i]));
    acc = std::move(next);
  }
  t.children.clear();
  t.children.push_back(std::move(acc));
  t.children.push_back(std::move(kids.back()));
  return t;
}

struct ParseResult {
  bool parseable = false;
  double viterbi_log_prob = -std::numeric_limits<double>::infinity();

  bool operator==(const ParseResult&) const = default;
};

class Grammar {
 public:
  using SymbolId = std::uint32_t;

  struct BinaryRule {
    SymbolId lhs;
    SymbolId left;
    SymbolId right;
    double log10_prob;
  };

  struct LexicalRule {
    SymbolId lhs;
    std::string word;
    double log10_prob;
  };

  /// Explicit construction, mostly for hand-written grammars. Probabilities
  /// are taken as given; nothing is renormalized.
  class Builder {
   public:
    Builder& binary(std::string lhs, std::string left, std::string right, double prob) {
      binary_.push_back({std::move(lhs), std::move(left), std::move(right), prob});
      return *this;
    }
    Builder& lexical(std::string lhs, std::string word, double prob) {
      lexical_.push_back({std::move(lhs), std::move(word), prob});
      return *this;
    }
    Builder& root(std::string sym, double prob) {
      roots_.emplace_back(std::move(sym), prob);
      return *this;
    }
    Builder& fragment_root(std::string sym, double prob) {
      fragment_roots_.emplace_back(std::move(sym), prob);
      return *this;
    }
    Builder& unknown(std::string sym, double prob) {
      unknown_.emplace_back(std::move(sym), prob);
      return *this;
    }

    Grammar build() const {
      Grammar g;
      std::vector<std::string> names;
      for (const auto& r : binary_) names.insert(names.end(), {r.lhs, r.left, r.right});
      for (const auto& r : lexical_) names.push_back(r.lhs);
      for (const auto& [s, p] : roots_) names.push_back(s);
      for (const auto& [s, p] : fragment_roots_) names.push_back(s);
      for (const auto& [s, p] : unknown_) names.push_back(s);
      g.set_symbols(std::move(names));
      for (const auto& r : binary_) {
        g.binary_.push_back({g.symbol(r.lhs), g.symbol(r.left), g.symbol(r.right), std::log10(r.prob)});
      }
      for (const auto& r : lexical_) g.lexical_.push_back({g.symbol(r.lhs), r.word, std::log10(r.prob)});
      for (const auto& [s, p] : roots_) g.root_[g.symbol(s)] = std::log10(p);
      for (const auto& [s, p] : fragment_roots_) g.fragment_root_[g.symbol(s)] = std::log10(p);
      for (const auto& [s, p] : unknown_) g.unknown_[g.symbol(s)] = std::log10(p);
      g.finalize();
      return g;
    }

   private:
    struct B {
      std::string lhs, left, right;
      double prob;
    };
    struct L {
      std::string lhs, word;
      double prob;
    };
    std::vector<B> binary_;
    std::vector<L> lexical_;
    std::vector<std::pair<std::string, double>> roots_, fragment_roots_, unknown_;
  };

  Grammar() = default;

  /// Relative-frequency estimation over the collapsed, binarized treebank.
  static Grammar induce(std::span<const Tree> treebank);

  std::size_t num_symbols() const { return names_.size(); }
  const std::string& symbol_name(SymbolId s) const { return names_.at(s); }
  SymbolId symbol(std::string_view name) const {
    auto it = symbol_index_.find(name);
    if (it == symbol_index_.end()) throw Error("unknown grammar symbol '" + std::string(name) + "'");
    return it->second;
  }
  bool has_symbol(std::string_view name) const { return symbol_index_.count(name) != 0; }

  const std::vector<BinaryRule>& binary_rules() const { return binary_; }
  const std::vector<LexicalRule>& lexical_rules() const { return lexical_; }
  std::size_t num_rules() const { return binary_.size() + lexical_.size(); }

  /// log10 of the root, fragment-root and unknown-word tables (-inf if absent).
  double root_log10(SymbolId s) const { return root_.at(s); }
  double fragment_root_log10(SymbolId s) const { return fragment_root_.at(s); }
  double unknown_log10(SymbolId s) const { return unknown_.at(s); }

  /// Natural-log probability of a rule, -inf when the grammar lacks it.
  double rule_log_prob(std::string_view lhs, std::string_view left, std::string_view right) const {
    if (!has_symbol(lhs) || !has_symbol(left) || !has_symbol(right)) return -kInf;
    SymbolId a = symbol(lhs), b = symbol(left), c = symbol(right);
    for (const auto& r : binary_) {
      if (r.lhs == a && r.left == b && r.right == c) return r.log10_prob * std::numbers::ln10;
    }
    return -kInf;
  }
  double rule_log_prob(std::string_view lhs, std::string_view word) const {
    if (!has_symbol(lhs)) return -kInf;
    SymbolId a = symbol(lhs);
    auto it = lexicon_.find(word);
    if (it == lexicon_.end()) return -kInf;
    for (const auto& [s, p] : it->second) {
      if (s == a) return p * std::numbers::ln10;
    }
    return -kInf;
  }

  bool knows_word(std::string_view w) const { return lexicon_.count(w) != 0; }

  /// Best derivation of the whole sequence from a root symbol, weighted by
  /// the root distribution. Standard CKY, O(n^3 * |rules|).
  ParseResult viterbi_parse(std::span<const std::string> tokens) const {
    Chart chart = fill_chart(tokens);
    const std::size_t n = tokens.size();
    double best = -kInf;
    if (n > 0) {
      for (SymbolId a : chart.active(0, n)) {
        double v = chart.at(0, n, a) + root_[a];
        if (v > best) best = v;
      }
    }
    return to_result(best);
  }

  /// Best score of a sentence fragment: the fragment is covered by a
  /// sequence of one or more adjacent constituents, each rooted in a node
  /// label weighted by the fragment-root distribution. A fragment that is
  /// one constituent A scores inside(A) * P_fragment_root(A).
  ParseResult fragment_parse(std::span<const std::string> tokens) const {
    Chart chart = fill_chart(tokens);
    const std::size_t n = tokens.size();
    if (n == 0) return {};
    std::vector<double> frag((n + 1) * (n + 1), -kInf);
    auto F = [&](std::size_t i, std::size_t j) -> double& { return frag[i * (n + 1) + j]; };
    for (std::size_t len = 1; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        std::size_t j = i + len;
        double best = -kInf;
        for (SymbolId a : chart.active(i, j)) {
          double v = chart.at(i, j, a) + fragment_root_[a];
          if (v > best) best = v;
        }
        for (std::size_t k = i + 1; k < j; ++k) {
          double v = F(i, k) + F(k, j);
          if (v > best) best = v;
        }
        F(i, j) = best;
      }
    }
    return to_result(F(0, n));
  }

  double parse_log_prob_or_floor(std::span<const std::string> tokens, double floor = kDefaultParseFloor) const {
    ParseResult r = viterbi_parse(tokens);
    return r.parseable ? r.viterbi_log_prob : floor;
  }

  double fragment_log_prob_or_floor(std::span<const std::string> tokens, double floor = kDefaultParseFloor) const {
    ParseResult r = fragment_parse(tokens);
    return r.parseable ? r.viterbi_log_prob : floor;
  }

  /// "LHS → RHS1 [RHS2]<TAB>log10-prob" rule lines, followed by the root,
  /// fragment-root and unknown-word tables as "SYMBOL<TAB>log10-prob".
  void save(std::ostream& os) const;
  static Grammar load(std::istream& is);

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  class Chart {
   public:
    Chart(std::size_t n, std::size_t num_symbols)
        : n_(n), s_(num_symbols), score_((n + 1) * (n + 1) * num_symbols, -kInf), active_((n + 1) * (n + 1)) {}

    double& at(std::size_t i, std::size_t j, SymbolId a) { return score_[(i * (n_ + 1) + j) * s_ + a]; }
    double at(std::size_t i, std::size_t j, SymbolId a) const { return score_[(i * (n_ + 1) + j) * s_ + a]; }
    const std::vector<SymbolId>& active(std::size_t i, std::size_t j) const { return active_[i * (n_ + 1) + j]; }

    void relax(std::size_t i, std::size_t j, SymbolId a, double v) {
      double& cur = at(i, j, a);
      if (v > cur) {
        if (cur == -kInf) active_[i * (n_ + 1) + j].push_back(a);
        cur = v;
      }
    }

   private:
    std::size_t n_;
    std::size_t s_;
    std::vector<double> score_;
    std::vector<std::vector<SymbolId>> active_;
  };

  struct RightEntry {
    SymbolId right;
    SymbolId lhs;
    double log10_prob;
  };

  Chart fill_chart(std::span<const std::string> tokens) const {
    const std::size_t n = tokens.size();
    Chart chart(n, names_.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto it = lexicon_.find(tokens[i]);
      if (it != lexicon_.end()) {
        for (const auto& [a, p] : it->second) chart.relax(i, i + 1, a, p);
      } else {
        for (const auto& [a, p] : unknown_list_) chart.relax(i, i + 1, a, p);
      }
    }
    for (std::size_t len = 2; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        const std::size_t j = i + len;
        for (std::size_t k = i + 1; k < j; ++k) {
          for (SymbolId b : chart.active(i, k)) {
            const double sb = chart.at(i, k, b);
            for (const RightEntry& r : by_left_[b]) {
              const double sc = chart.at(k, j, r.right);
              if (sc == -kInf) continue;
              chart.relax(i, j, r.lhs, r.log10_prob + sb + sc);
            }
          }
        }
      }
    }
    return chart;
  }

  static ParseResult to_result(double log10_best) {
    if (log10_best == -kInf) return {};
    return {true, log10_best * std::numbers::ln10};
  }

  void set_symbols(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    names_ = std::move(names);
    symbol_index_.clear();
    for (std::size_t i = 0; i < names_.size(); ++i) symbol_index_.emplace(names_[i], static_cast<SymbolId>(i));
    root_.assign(names_.size(), -kInf);
    fragment_root_.assign(names_.size(), -kInf);
    unknown_.assign(names_.size(), -kInf);
  }

  // Sorts the rule lists and builds the lookup indexes used by the parser.
  void finalize() {
    std::sort(binary_.begin(), binary_.end(), [&](const BinaryRule& x, const BinaryRule& y) {
      return std::tie(names_[x.lhs], names_[x.left], names_[x.right]) <
             std::tie(names_[y.lhs], names_[y.left], names_[y.right]);
    });
    std::sort(lexical_.begin(), lexical_.end(), [&](const LexicalRule& x, const LexicalRule& y) {
      return std::tie(names_[x.lhs], x.word) < std::tie(names_[y.lhs], y.word);
    });
    by_left_.assign(names_.size(), {});
    for (const auto& r : binary_) by_left_[r.left].push_back({r.right, r.lhs, r.log10_prob});
    lexicon_.clear();
    for (const auto& r : lexical_) lexicon_[r.word].emplace_back(r.lhs, r.log10_prob);
    unknown_list_.clear();
    for (SymbolId a = 0; a < names_.size(); ++a) {
      if (unknown_[a] != -kInf) unknown_list_.emplace_back(a, unknown_[a]);
    }
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId, TransparentStringHash, std::equal_to<>> symbol_index_;
  std::vector<BinaryRule> binary_;
  std::vector<LexicalRule> lexical_;
  std::vector<double> root_;
  std::vector<double> fragment_root_;
  std::vector<double> unknown_;

  std::vector<std::vector<RightEntry>> by_left_;
  std::unordered_map<std::string, std::vector<std::pair<SymbolId, double>>, TransparentStringHash, std::equal_to<>>
      lexicon_;
  std::vector<std::pair<SymbolId, double>> unknown_list_;
};

inline Grammar Grammar::induce(std::span<const Tree> treebank) {
  if (treebank.empty()) throw Error("empty treebank");
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> binary_counts;
  std::map<std::pair<std::string, std::string>, std::uint64_t> lexical_counts;
  std::map<std::string, std::uint64_t> lhs_counts;
  std::map<std::string, std::uint64_t> root_counts;
  std::map<std::string, std::uint64_t> node_counts;
  std::unordered_map<std::string, std::uint64_t> word_freq;
  std::uint64_t total_nodes = 0;

  auto visit = [&](auto&& self, const Tree& t) -> void {
    ++node_counts[t.label];
    ++total_nodes;
    ++lhs_counts[t.label];
    if (t.is_preterminal()) {
      ++lexical_counts[{t.label, t.children[0].label}];
      ++word_freq[t.children[0].label];
      return;
    }
    if (t.children.size() != 2) throw Error("internal: tree not binary after transformation");
    ++binary_counts[{t.label, t.children[0].label, t.children[1].label}];
    self(self, t.children[0]);
    self(self, t.children[1]);
  };
  for (const Tree& raw : treebank) {
    Tree t = binarize(collapse_unaries(raw));
    ++root_counts[t.label];
    visit(visit, t);
  }

  Grammar g;
  std::vector<std::string> names;
  for (const auto& [lhs, c] : lhs_counts) names.push_back(lhs);
  g.set_symbols(std::move(names));
  for (const auto& [k, c] : binary_counts) {
    const auto& [lhs, l, r] = k;
    double p = static_cast<double>(c) / static_cast<double>(lhs_counts.at(lhs));
    g.binary_.push_back({g.symbol(lhs), g.symbol(l), g.symbol(r), std::log10(p)});
  }
  // Unseen words: a preterminal emits one with the probability mass it gave
  // to frequency-1 training words, spread over the rare-word inventory.
  std::uint64_t rare_types = 0;
  for (const auto& [w, c] : word_freq) rare_types += c == 1;
  std::vector<double> rare_mass(g.names_.size(), 0.0);
  for (const auto& [k, c] : lexical_counts) {
    const auto& [lhs, w] = k;
    double p = static_cast<double>(c) / static_cast<double>(lhs_counts.at(lhs));
    g.lexical_.push_back({g.symbol(lhs), w, std::log10(p)});
    if (word_freq.at(w) == 1) rare_mass[g.symbol(lhs)] += p;
  }
  const double n_trees = static_cast<double>(treebank.size());
  for (const auto& [s, c] : root_counts) g.root_[g.symbol(s)] = std::log10(static_cast<double>(c) / n_trees);
  for (const auto& [s, c] : node_counts) {
    g.fragment_root_[g.symbol(s)] = std::log10(static_cast<double>(c) / static_cast<double>(total_nodes));
  }
  if (rare_types > 0) {
    for (SymbolId a = 0; a < g.names_.size(); ++a) {
      if (rare_mass[a] > 0.0) g.unknown_[a] = std::log10(rare_mass[a] / static_cast<double>(rare_types));
    }
  }
  g.finalize();
  return g;
}

inline void Grammar::save(std::ostream& os) const {
  os << "\\rules\n";
  for (const auto& r : binary_) {
    os << names_[r.lhs] << " → " << names_[r.left] << ' ' << names_[r.right] << '\t'
       << detail::format_double(r.log10_prob) << '\n';
  }
  for (const auto& r : lexical_) {
    os << names_[r.lhs] << " → " << r.word << '\t' << detail::format_double(r.log10_prob) << '\n';
  }
  auto table = [&](const char* header, const std::vector<double>& v) {
    os << header << '\n';
    for (SymbolId a = 0; a < names_.size(); ++a) {
      if (v[a] != -kInf) os << names_[a] << '\t' << detail::format_double(v[a]) << '\n';
    }
  };
  table("\\roots", root_);
  table("\\fragment-roots", fragment_root_);
  table("\\unknown", unknown_);
}

inline Grammar Grammar::load(std::istream& is) {
  struct Raw {
    std::vector<std::string> lhs_rhs;
    double p;
  };
  std::vector<Raw> rules;
  std::vector<std::pair<std::string, double>> tables[3];
  int section = -1;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error("grammar file line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view v = detail::strip_cr(line);
    if (v.empty()) continue;
    if (v == "\\rules") {
      section = 0;
      continue;
    }
    if (v == "\\roots" || v == "\\fragment-roots" || v == "\\unknown") {
      section = v == "\\roots" ? 1 : v == "\\fragment-roots" ? 2 : 3;
      continue;
    }
    auto fields = detail::split_tabs(v);
    if (fields.size() != 2) fail("expected '<entry><TAB><log10-prob>'");
    double p = detail::parse_double(fields[1]);
    if (section == 0) {
      auto parts = split_whitespace(fields[0]);
      if (parts.size() < 3 || parts.size() > 4 || parts[1] != "→") fail("expected 'LHS → RHS1 [RHS2]'");
      parts.erase(parts.begin() + 1);
      rules.push_back({std::move(parts), p});
    } else if (section >= 1) {
      tables[section - 1].emplace_back(std::string(fields[0]), p);
    } else {
      fail("entry before the \\rules header");
    }
  }
  Grammar g;
  std::vector<std::string> names;
  for (const auto& r : rules) {
    names.push_back(r.lhs_rhs[0]);
    if (r.lhs_rhs.size() == 3) names.insert(names.end(), {r.lhs_rhs[1], r.lhs_rhs[2]});
  }
  for (const auto& t : tables) {
    for (const auto& [s, p] : t) names.push_back(s);
  }
  g.set_symbols(std::move(names));
  for (const auto& r : rules) {
    if (r.lhs_rhs.size() == 3) {
      g.binary_.push_back({g.symbol(r.lhs_rhs[0]), g.symbol(r.lhs_rhs[1]), g.symbol(r.lhs_rhs[2]), r.p});
    } else {
      g.lexical_.push_back({g.symbol(r.lhs_rhs[0]), r.lhs_rhs[1], r.p});
    }
  }
  for (const auto& [s, p] : tables[0]) g.root_[g.symbol(s)] = p;
  for (const auto& [s, p] : tables[1]) g.fragment_root_[g.symbol(s)] = p;
  for (const auto& [s, p] : tables[2]) g.unknown_[g.symbol(s)] = p;
  g.finalize();
  return g;
}

}  // namespace rwspell
