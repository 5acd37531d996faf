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

// Real-word error correction engines.
//
// Three searches share one objective, log P(S') + log P(S | S'):
//   mdm            whole sentence, at most one substituted word
//   window-single  fixed windows of d + 4 tokens, at most one substitution
//                  per window, windows applied left to right
//   window-multi   fixed windows, any number of substitutions per window,
//                  pruned by parse probability and recombined globally

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rwspell/channel.hpp"
#include "rwspell/lexicon.hpp"
#include "rwspell/pcfg.hpp"
#include "rwspell/text.hpp"
#include "rwspell/trigram_lm.hpp"

namespace rwspell {

enum class Mode { kSentence, kWindowSingle, kWindowMulti };

inline std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::kSentence:
      return "mdm";
    case Mode::kWindowSingle:
      return "window-single";
    case Mode::kWindowMulti:
      return "window-multi";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "mdm") return Mode::kSentence;
  if (s == "window-single") return Mode::kWindowSingle;
  if (s == "window-multi") return Mode::kWindowMulti;
  throw Error("unknown mode '" + std::string(s) + "' (expected mdm, window-single or window-multi)");
}

/// <s> <s> tokens... </s>
inline std::vector<std::string> pad_sentence(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + 3);
  out.emplace_back(kBos);
  out.emplace_back(kBos);
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.emplace_back(kEos);
  return out;
}

/// A run of d replaceable tokens with the two tokens on each side whose
/// trigrams overlap it. Indices refer to the padded sentence.
struct Window {
  std::size_t start = 0;
  std::vector<std::string> tokens;
  std::size_t span_start = 0;
  std::size_t span_length = 0;
  std::array<std::string, 2> left_context;

  std::size_t span_offset() const { return span_start - start; }
  std::span<const std::string> span() const { return {tokens.data() + span_offset(), span_length}; }
  std::span<const std::string> right_context() const {
    std::size_t b = span_offset() + span_length;
    return {tokens.data() + b, tokens.size() - b};
  }

  /// Window tokens without sentinels, as handed to the parser.
  std::vector<std::string> words() const {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
      if (!is_sentinel(t)) out.push_back(t);
    }
    return out;
  }
};

/// Spans start at the first real token and advance by d; the last span is
/// cut short at </s>, so every real token lies in exactly one span.
inline std::vector<Window> enumerate_windows(std::span<const std::string> padded, std::size_t d) {
  if (d == 0) throw Error("span length d must be at least 1");
  if (padded.size() < 3 || padded[0] != kBos || padded[1] != kBos || padded.back() != kEos) {
    throw Error("sentence must be padded as <s> <s> ... </s>");
  }
  const std::size_t n = padded.size() - 3;
  std::vector<Window> out;
  for (std::size_t s = 0; s < n; s += d) {
    Window w;
    w.span_start = s + 2;
    w.span_length = std::min(d, n - s);
    w.start = s;
    std::size_t end = std::min(w.span_start + w.span_length + 2, padded.size());
    w.tokens.assign(padded.begin() + static_cast<std::ptrdiff_t>(w.start),
                    padded.begin() + static_cast<std::ptrdiff_t>(end));
    w.left_context = {w.tokens[0], w.tokens[1]};
    out.push_back(std::move(w));
  }
  return out;
}

/// One member of a window's search space.
struct CandidateSequence {
  std::size_t window = 0;
  std::vector<std::string> tokens;
  std::vector<std::size_t> changed_positions;  // indices into tokens
  double lm_channel_log_prob = std::numeric_limits<double>::quiet_NaN();
  double parse_log_prob = std::numeric_limits<double>::quiet_NaN();
};

/// Visits every member of the window's search space: the product over span
/// positions of {original} + S_c(original), minus the unchanged window.
/// Order: leftmost position most significant, original first, variations in
/// lexicographic order. `fn` receives the span tokens; returning false stops.
template <typename Fn>
void for_each_candidate(const Window& w, const Lexicon& lexicon, Fn&& fn) {
  const std::size_t k = w.span_length;
  std::vector<const CandidateSet*> sets(k);
  bool any = false;
  for (std::size_t i = 0; i < k; ++i) {
    sets[i] = &lexicon.variations(w.span()[i]);
    any = any || sets[i]->size() > 0;
  }
  if (!any) return;
  std::vector<std::size_t> choice(k, 0);
  std::vector<std::string> span(w.span().begin(), w.span().end());
  auto set_pos = [&](std::size_t i) {
    span[i] = choice[i] == 0 ? w.span()[i] : sets[i]->variations[choice[i] - 1];
  };
  while (true) {
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (choice[i] < sets[i]->size()) {
        ++choice[i];
        set_pos(i);
        break;
      }
      choice[i] = 0;
      set_pos(i);
      if (i == 0) return;
    }
    if (!fn(std::span<const std::string>(span), std::span<const std::size_t>(choice))) return;
  }
}

/// |C(S'')| without enumerating it.
inline double search_space_size(const Window& w, const Lexicon& lexicon) {
  double size = 1.0;
  for (const auto& t : w.span()) size *= 1.0 + static_cast<double>(lexicon.variations(t).size());
  return size - 1.0;
}

inline std::vector<CandidateSequence> generate_search_space(const Window& w, const Lexicon& lexicon,
                                                            std::size_t window_index = 0) {
  std::vector<CandidateSequence> out;
  const std::size_t off = w.span_offset();
  for_each_candidate(w, lexicon, [&](std::span<const std::string> span, std::span<const std::size_t> choice) {
    CandidateSequence c;
    c.window = window_index;
    c.tokens = w.tokens;
    for (std::size_t i = 0; i < span.size(); ++i) {
      c.tokens[off + i] = span[i];
      if (choice[i] != 0) c.changed_positions.push_back(off + i);
    }
    out.push_back(std::move(c));
    return true;
  });
  return out;
}

struct Edit {
  std::size_t position = 0;  // index into the unpadded sentence
  std::string original;
  std::string replacement;

  bool operator==(const Edit&) const = default;
};

/// Search-space sizes of one window: before parsing, after the parse gate,
/// and after the statistical gate.
struct WindowStats {
  std::size_t initial = 0;
  std::size_t after_parse = 0;
  std::size_t final = 0;

  bool operator==(const WindowStats&) const = default;
};

struct CorrectionResult {
  std::vector<std::string> original;
  std::vector<std::string> corrected;
  std::vector<Edit> edits;
  Mode mode = Mode::kSentence;
  double score_delta = 0.0;
  std::vector<WindowStats> window_stats;  // window-multi only

  bool operator==(const CorrectionResult&) const = default;
};

class CombinatorialBlowup : public Error {
 public:
  CombinatorialBlowup(double count, std::vector<WindowStats> stats)
      : Error(make_message(count, stats)), count_(count), stats_(std::move(stats)) {}

  double count() const { return count_; }
  const std::vector<WindowStats>& window_stats() const { return stats_; }

 private:
  static std::string make_message(double count, const std::vector<WindowStats>& stats) {
    std::string msg = "combinatorial blowup: " + detail::format_double(count) + " combinations; window lists";
    for (const auto& s : stats) msg += " " + std::to_string(s.final);
    return msg;
  }

  double count_;
  std::vector<WindowStats> stats_;
};

struct SearchOptions {
  std::size_t d = 1;
  double combination_cap = 1e6;
  double parse_floor = kDefaultParseFloor;
};

/// Statistical score of a window whose span reads `span`: every trigram
/// touching the span plus the channel terms of the span words against what
/// was typed.
inline double window_log_prob(const TrigramModel& model, const ChannelParams& channel, const Lexicon& lexicon,
                              const Window& w, std::span<const std::string> span,
                              std::span<const std::string> observed_span) {
  return model.span_log_prob(w.left_context, span, w.right_context()) +
         sequence_channel_log_prob(channel, span, observed_span, lexicon);
}

/// Combination score in log space: windows with a chosen candidate contribute its stored
/// score, the rest contribute the original span's score. Summed left to right.
struct WindowChoice {
  double original_log_prob = 0.0;
  std::optional<double> chosen_log_prob;
};

inline double combination_log_prob(std::span<const WindowChoice> windows) {
  double sum = 0.0;
  for (const auto& w : windows) sum += w.chosen_log_prob ? *w.chosen_log_prob : w.original_log_prob;
  return sum;
}

namespace detail {

inline std::vector<Edit> diff_edits(std::span<const std::string> original, std::span<const std::string> corrected) {
  std::vector<Edit> edits;
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (original[i] != corrected[i]) edits.push_back({i, original[i], corrected[i]});
  }
  return edits;
}

inline CorrectionResult make_result(std::span<const std::string> original, std::vector<std::string> corrected,
                                    Mode mode, double delta) {
  CorrectionResult r;
  r.original.assign(original.begin(), original.end());
  r.corrected = std::move(corrected);
  r.edits = diff_edits(r.original, r.corrected);
  r.mode = mode;
  r.score_delta = r.edits.empty() ? 0.0 : delta;
  return r;
}

}  // namespace detail

/// Sentence-level search over every single-word substitution. The original
/// sentence wins ties.
inline CorrectionResult correct_sentence_mdm(std::span<const std::string> tokens, const TrigramModel& model,
                                             const ChannelParams& channel, const Lexicon& lexicon) {
  auto score = [&](std::span<const std::string> s) {
    return model.sentence_log_prob(s) + sequence_channel_log_prob(channel, s, tokens, lexicon);
  };
  const double original = score(tokens);
  double best = original;
  std::vector<std::string> best_sentence(tokens.begin(), tokens.end());
  std::vector<std::string> cand(tokens.begin(), tokens.end());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& v : lexicon.variations(tokens[i]).variations) {
      cand[i] = v;
      double s = score(cand);
      if (s > best) {
        best = s;
        best_sentence = cand;
      }
    }
    cand[i] = tokens[i];
  }
  return detail::make_result(tokens, std::move(best_sentence), Mode::kSentence, best - original);
}

/// Fixed windows with one substitution each. Each window is scored against
/// the text as already corrected by the windows before it.
inline CorrectionResult correct_fixed_window_single(std::span<const std::string> tokens, std::size_t d,
                                                    const TrigramModel& model, const ChannelParams& channel,
                                                    const Lexicon& lexicon) {
  std::vector<std::string> current = pad_sentence(tokens);
  const std::vector<Window> layout = enumerate_windows(current, d);
  double delta = 0.0;
  for (const Window& proto : layout) {
    Window w = proto;
    std::copy(current.begin() + static_cast<std::ptrdiff_t>(w.start),
              current.begin() + static_cast<std::ptrdiff_t>(w.start + w.tokens.size()), w.tokens.begin());
    w.left_context = {w.tokens[0], w.tokens[1]};
    const std::span<const std::string> observed = proto.span();
    const double original = window_log_prob(model, channel, lexicon, w, observed, observed);
    double best = original;
    std::optional<std::pair<std::size_t, std::string>> pick;
    std::vector<std::string> span(observed.begin(), observed.end());
    for (std::size_t i = 0; i < span.size(); ++i) {
      for (const auto& v : lexicon.variations(observed[i]).variations) {
        span[i] = v;
        double s = window_log_prob(model, channel, lexicon, w, span, observed);
        if (s > best) {
          best = s;
          pick.emplace(i, v);
        }
      }
      span[i] = observed[i];
    }
    if (pick) {
      current[w.span_start + pick->first] = pick->second;
      delta += best - original;
    }
  }
  std::vector<std::string> corrected(current.begin() + 2, current.end() - 1);
  return detail::make_result(tokens, std::move(corrected), Mode::kWindowSingle, delta);
}

/// Multiple corrections per window with parse-probability pruning.
///  1. parse every window candidate; keep those parsing strictly better
///     than the original window
///  2. keep survivors whose statistical score is at least the original's
///  3. repeat for every window, each scored against the original text
///  4. combine, across windows, candidates scoring strictly above their
///     window's original (at most one per window)
///  5. keep combinations whose full-sentence parse beats the original's
///  6. return the combination with the highest summed window score if it
///     beats the original sentence's sum; earlier combinations win ties
inline CorrectionResult correct_multi_per_window(std::span<const std::string> tokens, const TrigramModel& model,
                                                 const ChannelParams& channel, const Lexicon& lexicon,
                                                 const Grammar& grammar, const SearchOptions& opts = {}) {
  const std::vector<std::string> padded = pad_sentence(tokens);
  const std::vector<Window> windows = enumerate_windows(padded, opts.d);

  struct Stored {
    std::vector<std::string> span;
    double log_prob;
  };
  std::vector<std::vector<Stored>> lists(windows.size());
  std::vector<double> original_scores(windows.size());
  std::vector<WindowStats> stats(windows.size());

  for (std::size_t j = 0; j < windows.size(); ++j) {
    const Window& w = windows[j];
    const std::span<const std::string> observed = w.span();
    original_scores[j] = window_log_prob(model, channel, lexicon, w, observed, observed);
    const double original_parse = grammar.fragment_log_prob_or_floor(w.words(), opts.parse_floor);
    std::vector<std::string> words = w.words();
    // Offset of the span inside the sentinel-free word list.
    std::size_t word_off = 0;
    for (std::size_t i = 0; i < w.span_offset(); ++i) word_off += !is_sentinel(w.tokens[i]);
    for_each_candidate(w, lexicon, [&](std::span<const std::string> span, std::span<const std::size_t>) {
      ++stats[j].initial;
      std::copy(span.begin(), span.end(), words.begin() + static_cast<std::ptrdiff_t>(word_off));
      double parse = grammar.fragment_log_prob_or_floor(words, opts.parse_floor);
      if (!(parse > original_parse)) return true;
      ++stats[j].after_parse;
      double s = window_log_prob(model, channel, lexicon, w, span, observed);
      if (s >= original_scores[j]) lists[j].push_back({std::vector<std::string>(span.begin(), span.end()), s});
      return true;
    });
    stats[j].final = lists[j].size();
  }

  // Step 4: strict improvement only.
  std::vector<std::vector<const Stored*>> pool(windows.size());
  double count = 1.0;
  for (std::size_t j = 0; j < windows.size(); ++j) {
    for (const auto& s : lists[j]) {
      if (s.log_prob > original_scores[j]) pool[j].push_back(&s);
    }
    count *= 1.0 + static_cast<double>(pool[j].size());
  }
  count -= 1.0;

  CorrectionResult none = detail::make_result(tokens, std::vector<std::string>(tokens.begin(), tokens.end()),
                                              Mode::kWindowMulti, 0.0);
  none.window_stats = stats;
  if (count == 0.0) return none;
  if (count > opts.combination_cap) throw CombinatorialBlowup(count, stats);

  // Mixed-radix combination codes; the last window varies fastest.
  const auto total = static_cast<std::uint64_t>(count) + 1;
  std::vector<WindowChoice> choices(windows.size());
  auto decode = [&](std::uint64_t code, std::vector<std::size_t>& pick) {
    pick.assign(windows.size(), 0);
    for (std::size_t j = windows.size(); j-- > 0;) {
      std::uint64_t radix = pool[j].size() + 1;
      pick[j] = static_cast<std::size_t>(code % radix);
      code /= radix;
    }
  };
  std::vector<std::pair<double, std::uint64_t>> ranked;
  ranked.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> pick;
  for (std::uint64_t code = 1; code < total; ++code) {
    decode(code, pick);
    for (std::size_t j = 0; j < windows.size(); ++j) {
      choices[j].original_log_prob = original_scores[j];
      choices[j].chosen_log_prob.reset();
      if (pick[j]) choices[j].chosen_log_prob = pool[j][pick[j] - 1]->log_prob;
    }
    ranked.emplace_back(combination_log_prob(choices), code);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  double original_total = 0.0;
  for (double s : original_scores) original_total += s;
  const double original_parse = grammar.parse_log_prob_or_floor(tokens, opts.parse_floor);

  // Steps 5 and 6: the first combination in score order that passes the
  // sentence parse gate is the best passing one.
  for (const auto& [score, code] : ranked) {
    if (!(score > original_total)) break;
    decode(code, pick);
    std::vector<std::string> sentence(tokens.begin(), tokens.end());
    for (std::size_t j = 0; j < windows.size(); ++j) {
      if (!pick[j]) continue;
      const auto& span = pool[j][pick[j] - 1]->span;
      std::copy(span.begin(), span.end(), sentence.begin() + static_cast<std::ptrdiff_t>(windows[j].span_start - 2));
    }
    if (grammar.parse_log_prob_or_floor(sentence, opts.parse_floor) > original_parse) {
      CorrectionResult r =
          detail::make_result(tokens, std::move(sentence), Mode::kWindowMulti, score - original_total);
      r.window_stats = std::move(stats);
      return r;
    }
  }
  return none;
}

/// Bundles the models for repeated correction. Const and stateless, so one
/// instance may serve many threads.
class Corrector {
 public:
  Corrector(const Lexicon& lexicon, const TrigramModel& model, ChannelParams channel,
            const Grammar* grammar = nullptr, SearchOptions opts = {})
      : lexicon_(lexicon), model_(model), channel_(channel), grammar_(grammar), opts_(opts) {}

  CorrectionResult correct(std::span<const std::string> tokens, Mode mode) const {
    switch (mode) {
      case Mode::kSentence:
        return correct_sentence_mdm(tokens, model_, channel_, lexicon_);
      case Mode::kWindowSingle:
        return correct_fixed_window_single(tokens, opts_.d, model_, channel_, lexicon_);
      case Mode::kWindowMulti:
        if (!grammar_) throw Error("window-multi mode needs a grammar");
        return correct_multi_per_window(tokens, model_, channel_, lexicon_, *grammar_, opts_);
    }
    throw Error("unknown mode");
  }

  const SearchOptions& options() const { return opts_; }
  const ChannelParams& channel() const { return channel_; }

 private:
  const Lexicon& lexicon_;
  const TrigramModel& model_;
  ChannelParams channel_;
  const Grammar* grammar_;
  SearchOptions opts_;
};

}  // namespace rwspell
