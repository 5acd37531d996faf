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

// Synthetic real-word error injection, per-word scoring and benchmarking.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rwspell/channel.hpp"
#include "rwspell/lexicon.hpp"
#include "rwspell/pcfg.hpp"
#include "rwspell/search.hpp"
#include "rwspell/text.hpp"
#include "rwspell/trigram_lm.hpp"

namespace rwspell {

using NounList = std::unordered_set<std::string, TransparentStringHash, std::equal_to<>>;

/// One word per line; blank lines and surrounding whitespace are ignored.
inline NounList load_noun_list(std::istream& is) {
  NounList out;
  std::string line;
  while (std::getline(is, line)) {
    for (auto& w : split_whitespace(line)) out.insert(to_lower(w));
  }
  return out;
}

enum class TestSet { kS62000, kMalp };

inline std::string_view test_set_name(TestSet t) { return t == TestSet::kS62000 ? "S62000" : "MALP"; }

inline TestSet parse_test_set(std::string_view s) {
  std::string l = to_lower(s);
  if (l == "s62000") return TestSet::kS62000;
  if (l == "malp") return TestSet::kMalp;
  throw Error("unknown test set '" + std::string(s) + "' (expected S62000 or MALP)");
}

struct CorruptionSpec {
  double alpha = 0.99;
  TestSet test_set = TestSet::kS62000;
  std::uint64_t seed = 0;
  const NounList* nouns = nullptr;  // MALP only

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (test_set == TestSet::kMalp && (nouns == nullptr || nouns->empty())) {
      throw Error("MALP corruption needs a non-empty noun list");
    }
  }
};

struct Injection {
  std::size_t position = 0;
  std::string intended;
  std::string error;

  bool operator==(const Injection&) const = default;
};

/// Invariant: corrupted differs from original exactly at the injected
/// positions, and each error word is in S_c of its intended word.
struct CorruptedSentence {
  std::vector<std::string> original;
  std::vector<std::string> corrupted;
  std::vector<Injection> injected;

  bool operator==(const CorruptedSentence&) const = default;
};

inline bool is_eligible(std::string_view word, const CorruptionSpec& spec, const Lexicon& lexicon) {
  if (lexicon.variations(word).size() == 0) return false;
  if (spec.test_set == TestSet::kS62000) return true;
  if (spec.nouns->find(word) != spec.nouns->end()) return true;
  return word.size() > 1 && word.back() == 's' && spec.nouns->find(word.substr(0, word.size() - 1)) != spec.nouns->end();
}

/// Injects errors with mt19937_64 seeded by spec.seed. Every eligible word,
/// in corpus order, consumes exactly two outputs x1, x2 mapped to [0, 1) as
/// u = (x >> 11) * 2^-53. The word is replaced when u1 < 1 - alpha, by
/// variation floor(u2 * |S_c|). Draws do not depend on alpha, so with one
/// seed the errors at a higher alpha are a subset of those at a lower one.
inline std::vector<CorruptedSentence> corrupt(const std::vector<std::vector<std::string>>& sentences,
                                              const CorruptionSpec& spec, const Lexicon& lexicon) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double p = 1.0 - spec.alpha;
  std::vector<CorruptedSentence> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    CorruptedSentence c{s, s, {}};
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!is_eligible(s[i], spec, lexicon)) continue;
      const double u1 = uniform();
      const double u2 = uniform();
      if (u1 >= p) continue;
      const auto& vars = lexicon.variations(s[i]).variations;
      auto k = std::min(static_cast<std::size_t>(u2 * static_cast<double>(vars.size())), vars.size() - 1);
      c.corrupted[i] = vars[k];
      c.injected.push_back({i, s[i], vars[k]});
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// original TAB corrupted TAB pos:intended:error;...  (third field may be empty)
inline void write_corrupted(std::ostream& os, std::span<const CorruptedSentence> set) {
  for (const auto& c : set) {
    os << join(c.original) << '\t' << join(c.corrupted) << '\t';
    for (std::size_t k = 0; k < c.injected.size(); ++k) {
      if (k) os << ';';
      os << c.injected[k].position << ':' << c.injected[k].intended << ':' << c.injected[k].error;
    }
    os << '\n';
  }
}

inline std::vector<CorruptedSentence> read_corrupted(std::istream& is) {
  std::vector<CorruptedSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto fail = [&](const std::string& why) {
      throw Error("corrupted set line " + std::to_string(lineno) + ": " + why);
    };
    auto fields = detail::split_tabs(detail::strip_cr(line));
    if (fields.size() != 3) fail("expected 3 tab-separated fields");
    CorruptedSentence c{split_whitespace(fields[0]), split_whitespace(fields[1]), {}};
    if (c.original.size() != c.corrupted.size()) fail("original and corrupted lengths differ");
    std::string_view rest = fields[2];
    while (!rest.empty()) {
      auto semi = rest.find(';');
      std::string_view item = rest.substr(0, semi);
      rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
      // Words may themselves contain ':', so the remainder is checked
      // against the sentences rather than split.
      auto a = item.find(':');
      if (a == std::string_view::npos) fail("malformed injection '" + std::string(item) + "'");
      Injection inj;
      std::string pos(item.substr(0, a));
      char* end = nullptr;
      inj.position = std::strtoull(pos.c_str(), &end, 10);
      if (pos.empty() || *end != '\0' || inj.position >= c.original.size()) fail("bad position '" + pos + "'");
      inj.intended = c.original[inj.position];
      inj.error = c.corrupted[inj.position];
      if (item.substr(a + 1) != inj.intended + ":" + inj.error || inj.intended == inj.error) {
        fail("injection does not match the sentences");
      }
      c.injected.push_back(std::move(inj));
    }
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < c.original.size(); ++i) diffs += c.original[i] != c.corrupted[i];
    if (diffs != c.injected.size()) fail("sentences differ outside the listed injections");
    out.push_back(std::move(c));
  }
  return out;
}

struct Counts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

/// Harmonic mean; 0 when p + r = 0.
inline double f1_score(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PRF from_counts(const Counts& c) {
    PRF out;
    out.precision = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    out.recall = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    out.f1 = f1_score(out.precision, out.recall);
    return out;
  }
};

struct Scores {
  Counts detection;
  Counts correction;

  Scores& operator+=(const Scores& o) {
    detection += o.detection;
    correction += o.correction;
    return *this;
  }
};

/// Per-position scoring of one sentence. A flagged position is one the
/// corrector changed.
inline Scores score_sentence(const CorruptedSentence& c, const CorrectionResult& r) {
  if (r.original != c.corrupted || r.corrected.size() != c.corrupted.size()) {
    throw Error("correction result does not belong to this corrupted sentence");
  }
  Scores s;
  std::vector<const Injection*> at(c.corrupted.size(), nullptr);
  for (const auto& inj : c.injected) at.at(inj.position) = &inj;
  for (std::size_t i = 0; i < c.corrupted.size(); ++i) {
    const bool flagged = r.corrected[i] != c.corrupted[i];
    const Injection* inj = at[i];
    if (flagged && inj) {
      ++s.detection.tp;
      if (r.corrected[i] == inj->intended) {
        ++s.correction.tp;
      } else {
        ++s.correction.fp;
        ++s.correction.fn;
      }
    } else if (flagged) {
      ++s.detection.fp;
      ++s.correction.fp;
    } else if (inj) {
      ++s.detection.fn;
      ++s.correction.fn;
    }
  }
  return s;
}

inline Scores score(std::span<const CorruptedSentence> set, std::span<const CorrectionResult> results) {
  if (set.size() != results.size()) throw Error("corrupted set and results differ in length");
  Scores total;
  for (std::size_t i = 0; i < set.size(); ++i) total += score_sentence(set[i], results[i]);
  return total;
}

/// One (mode, d, alpha) cell. Search-space means are over windows and only
/// filled for window-multi.
struct EvalCell {
  Mode mode = Mode::kWindowSingle;
  std::size_t d = 1;
  double alpha = 0.0;
  std::size_t sentences = 0;
  std::size_t injected = 0;
  Scores scores;
  std::size_t blowups = 0;
  std::size_t windows = 0;
  double mean_initial_space = 0.0;
  double mean_final_space = 0.0;
  double mean_time_ms = 0.0;

  PRF detection() const { return PRF::from_counts(scores.detection); }
  PRF correction() const { return PRF::from_counts(scores.correction); }
};

struct EvalReport {
  TestSet test_set = TestSet::kS62000;
  std::uint64_t seed = 0;
  std::vector<EvalCell> cells;

  /// One table per (mode, d), rows by alpha, three decimals.
  std::string to_text(bool with_timing = true) const {
    std::ostringstream os;
    char buf[160];
    std::vector<bool> done(cells.size(), false);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (done[i]) continue;
      os << "test set " << test_set_name(test_set) << ", mode " << mode_name(cells[i].mode) << ", d=" << cells[i].d
         << "\n";
      os << "  alpha   det.P  det.R  det.F   cor.P  cor.R  cor.F   init.space  final.space";
      if (with_timing) os << "   ms/sent";
      os << "\n";
      for (std::size_t j = i; j < cells.size(); ++j) {
        const EvalCell& c = cells[j];
        if (done[j] || c.mode != cells[i].mode || c.d != cells[i].d) continue;
        done[j] = true;
        PRF dp = c.detection();
        PRF cp = c.correction();
        std::snprintf(buf, sizeof buf, "  %.3f   %.3f  %.3f  %.3f   %.3f  %.3f  %.3f   %10.3f  %11.3f", c.alpha,
                      dp.precision, dp.recall, dp.f1, cp.precision, cp.recall, cp.f1, c.mean_initial_space,
                      c.mean_final_space);
        os << buf;
        if (with_timing) {
          std::snprintf(buf, sizeof buf, "   %8.3f", c.mean_time_ms);
          os << buf;
        }
        os << "\n";
      }
      os << "\n";
    }
    return os.str();
  }

  /// key=value records, one line per cell, full precision.
  std::string to_records(bool with_timing = true) const {
    std::ostringstream os;
    auto f = [](double v) { return detail::format_double(v); };
    for (const EvalCell& c : cells) {
      PRF dp = c.detection();
      PRF cp = c.correction();
      os << "test_set=" << test_set_name(test_set) << " seed=" << seed << " mode=" << mode_name(c.mode)
         << " d=" << c.d << " alpha=" << f(c.alpha) << " sentences=" << c.sentences << " injected=" << c.injected
         << " det_tp=" << c.scores.detection.tp << " det_fp=" << c.scores.detection.fp
         << " det_fn=" << c.scores.detection.fn << " det_p=" << f(dp.precision) << " det_r=" << f(dp.recall)
         << " det_f=" << f(dp.f1) << " cor_tp=" << c.scores.correction.tp << " cor_fp=" << c.scores.correction.fp
         << " cor_fn=" << c.scores.correction.fn << " cor_p=" << f(cp.precision) << " cor_r=" << f(cp.recall)
         << " cor_f=" << f(cp.f1) << " blowups=" << c.blowups << " windows=" << c.windows
         << " init_space=" << f(c.mean_initial_space) << " final_space=" << f(c.mean_final_space);
      if (with_timing) os << " ms_per_sentence=" << f(c.mean_time_ms);
      os << "\n";
    }
    return os.str();
  }
};

struct Models {
  const Lexicon& lexicon;
  const TrigramModel& lm;
  const Grammar* grammar = nullptr;
};

struct BenchOptions {
  double combination_cap = 1e6;
  double parse_floor = kDefaultParseFloor;
  std::size_t warmup = 2;   // leading sentences corrected once, untimed, before the timed passes
  std::size_t repeats = 1;  // timed passes; each sentence keeps its fastest time
};

/// Corrects every sentence of `set` in one configuration. Blowups leave the
/// sentence unchanged and are counted.
inline EvalCell run_cell(std::span<const CorruptedSentence> set, Mode mode, std::size_t d, double alpha,
                         const Models& models, const BenchOptions& opts = {},
                         std::vector<CorrectionResult>* results_out = nullptr) {
  if (mode == Mode::kWindowMulti && models.grammar == nullptr) throw Error("window-multi mode needs a grammar");
  SearchOptions so{d, opts.combination_cap, opts.parse_floor};
  Corrector corrector(models.lexicon, models.lm, ChannelParams(alpha), models.grammar, so);
  EvalCell cell;
  cell.mode = mode;
  cell.d = d;
  cell.alpha = alpha;
  cell.sentences = set.size();

  auto correct = [&](const CorruptedSentence& c, EvalCell* acc) {
    try {
      return corrector.correct(c.corrupted, mode);
    } catch (const CombinatorialBlowup& e) {
      if (acc) {
        ++acc->blowups;
        for (const auto& w : e.window_stats()) {
          ++acc->windows;
          acc->mean_initial_space += static_cast<double>(w.initial);
          acc->mean_final_space += static_cast<double>(w.final);
        }
      }
      CorrectionResult r;
      r.original = c.corrupted;
      r.corrected = c.corrupted;
      r.mode = mode;
      return r;
    }
  };

  for (std::size_t i = 0; i < std::min(opts.warmup, set.size()); ++i) (void)correct(set[i], nullptr);

  std::vector<CorrectionResult> results;
  results.reserve(set.size());
  // Per-sentence minimum over passes: scheduler noise only ever adds time.
  std::vector<double> best_ms(set.size(), 0.0);
  for (std::size_t pass = 0; pass < std::max<std::size_t>(opts.repeats, 1); ++pass) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      auto t0 = std::chrono::steady_clock::now();
      CorrectionResult r = correct(set[i], pass == 0 ? &cell : nullptr);
      auto t1 = std::chrono::steady_clock::now();
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (pass == 0 || ms < best_ms[i]) best_ms[i] = ms;
      if (pass == 0) results.push_back(std::move(r));
    }
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    cell.injected += set[i].injected.size();
    for (const auto& w : results[i].window_stats) {
      ++cell.windows;
      cell.mean_initial_space += static_cast<double>(w.initial);
      cell.mean_final_space += static_cast<double>(w.final);
    }
    cell.scores += score_sentence(set[i], results[i]);
  }
  if (cell.windows) {
    cell.mean_initial_space /= static_cast<double>(cell.windows);
    cell.mean_final_space /= static_cast<double>(cell.windows);
  }
  cell.mean_time_ms = set.empty() ? 0.0 : std::accumulate(best_ms.begin(), best_ms.end(), 0.0) / static_cast<double>(set.size());
  if (results_out) *results_out = std::move(results);
  return cell;
}

struct EvalGrid {
  std::vector<double> alphas{0.9, 0.99, 0.995, 0.999};
  std::vector<std::size_t> d_values{1, 3, 6, 10};
  std::vector<Mode> modes{Mode::kWindowSingle, Mode::kWindowMulti};
};

/// Corrupts `sentences` once per alpha (same seed throughout) and runs every
/// (mode, d) on the result. Cells are ordered mode, d, alpha. Sequential so
/// timings stay clean.
inline EvalReport evaluate(const std::vector<std::vector<std::string>>& sentences, const EvalGrid& grid,
                           CorruptionSpec spec, const Models& models, const BenchOptions& opts = {},
                           const std::function<void(const EvalCell&)>& on_cell = {}) {
  if (grid.alphas.empty() || grid.d_values.empty() || grid.modes.empty()) throw Error("empty evaluation grid");
  for (std::size_t d : grid.d_values) {
    if (d == 0) throw Error("span length d must be at least 1");
  }
  std::vector<std::vector<CorruptedSentence>> sets;
  for (double a : grid.alphas) {
    spec.alpha = a;
    sets.push_back(corrupt(sentences, spec, models.lexicon));
  }
  EvalReport report;
  report.test_set = spec.test_set;
  report.seed = spec.seed;
  for (Mode m : grid.modes) {
    for (std::size_t d : grid.d_values) {
      for (std::size_t k = 0; k < grid.alphas.size(); ++k) {
        report.cells.push_back(run_cell(sets[k], m, d, grid.alphas[k], models, opts));
        if (on_cell) on_cell(report.cells.back());
      }
    }
  }
  return report;
}

}  // namespace rwspell
