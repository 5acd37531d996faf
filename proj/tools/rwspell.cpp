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

// rwspell: train models, correct text, corrupt corpora and evaluate.
//
// Exit status: 0 success (warnings possible), 1 usage error, 2 data or model
// error. Outputs are written to a temporary file and renamed into place, so
// a failed run leaves no partial file behind.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rwspell/rwspell.hpp"

namespace fs = std::filesystem;

namespace {

using rwspell::Error;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  return in;
}

/// Collects output files and renames them into place only on commit.
class Staged {
 public:
  ~Staged() {
    for (const auto& [tmp, dst] : files_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  std::ostream& open(const std::string& path) {
    std::string tmp = path + ".tmp";
    streams_.push_back(std::make_unique<std::ofstream>(tmp, std::ios::binary | std::ios::trunc));
    if (!*streams_.back()) throw Error("cannot write '" + path + "'");
    files_.emplace_back(tmp, path);
    return *streams_.back();
  }

  void commit() {
    for (auto& s : streams_) {
      s->flush();
      if (!*s) throw Error("write failed");
      s->close();
    }
    for (const auto& [tmp, dst] : files_) fs::rename(tmp, dst);
    files_.clear();
  }

 private:
  std::vector<std::unique_ptr<std::ofstream>> streams_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<std::vector<std::string>> read_sentences(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = rwspell::tokenize(line);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

rwspell::Lexicon load_lexicon(const std::string& path) {
  auto in = open_input(path);
  return rwspell::Lexicon(rwspell::Vocabulary::load(in));
}

rwspell::TrigramModel load_lm(const std::string& path) {
  auto in = open_input(path);
  return rwspell::TrigramModel::load(in);
}

rwspell::Grammar load_grammar(const std::string& path) {
  auto in = open_input(path);
  return rwspell::Grammar::load(in);
}

rwspell::NounList load_nouns(const std::string& path) {
  auto in = open_input(path);
  return rwspell::load_noun_list(in);
}

struct ModelPaths {
  std::string vocab;
  std::string lm;
  std::string grammar;
};

struct SearchFlags {
  double alpha = 0.99;
  std::size_t d = 1;
  std::string mode = "window-multi";
  double cap = 1e6;
  double parse_floor = rwspell::kDefaultParseFloor;
};

void add_model_flags(CLI::App* app, ModelPaths& m, bool need_grammar) {
  app->add_option("--vocab", m.vocab, "vocabulary file")->required()->check(CLI::ExistingFile);
  app->add_option("--lm", m.lm, "trigram model file")->required()->check(CLI::ExistingFile);
  auto* g = app->add_option("--grammar", m.grammar, "grammar file (window-multi)")->check(CLI::ExistingFile);
  if (need_grammar) g->required();
}

void add_search_flags(CLI::App* app, SearchFlags& s) {
  app->add_option("--cap", s.cap, "maximum window-multi combinations per sentence")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--parse-floor", s.parse_floor, "log-probability assigned to unparseable input")
      ->capture_default_str();
}

int cmd_train_lm(const std::string& corpus_path, std::size_t vocab_size, double delta, const std::string& vocab_out,
                 const std::string& lm_out) {
  auto in = open_input(corpus_path);
  auto corpus = read_sentences(in);
  rwspell::VocabularyCounter counter;
  for (const auto& s : corpus) counter.add_sentence(s);
  rwspell::Vocabulary vocab = counter.build(vocab_size);
  rwspell::TrigramModel lm = rwspell::TrigramModel::train(corpus, vocab, rwspell::TrigramOptions{delta});
  Staged out;
  vocab.save(out.open(vocab_out));
  lm.save(out.open(lm_out));
  out.commit();
  std::cout << "sentences " << corpus.size() << "\ntokens " << counter.total() << "\nvocabulary " << vocab.size()
            << "\nbigrams " << lm.num_bigrams() << "\ntrigrams " << lm.num_trigrams() << "\n";
  return 0;
}

int cmd_train_grammar(const std::string& treebank_path, const std::string& grammar_out) {
  auto in = open_input(treebank_path);
  auto trees = rwspell::read_treebank(in);
  rwspell::Grammar g = rwspell::Grammar::induce(trees);
  Staged out;
  g.save(out.open(grammar_out));
  out.commit();
  std::cout << "trees " << trees.size() << "\nsymbols " << g.num_symbols() << "\nrules " << g.num_rules() << "\n";
  return 0;
}

int cmd_correct(const ModelPaths& paths, const SearchFlags& flags, const std::string& input,
                const std::string& output, const std::string& edits_path) {
  rwspell::Mode mode = rwspell::parse_mode(flags.mode);
  if (mode == rwspell::Mode::kWindowMulti && paths.grammar.empty()) {
    throw CLI::ValidationError("--grammar", "window-multi mode needs a grammar");
  }
  rwspell::Lexicon lexicon = load_lexicon(paths.vocab);
  rwspell::TrigramModel lm = load_lm(paths.lm);
  std::optional<rwspell::Grammar> grammar;
  if (!paths.grammar.empty()) grammar = load_grammar(paths.grammar);
  rwspell::Corrector corrector(lexicon, lm, rwspell::ChannelParams(flags.alpha), grammar ? &*grammar : nullptr,
                               {flags.d, flags.cap, flags.parse_floor});

  std::ifstream file_in;
  if (input != "-") file_in = open_input(input);
  std::istream& in = input == "-" ? std::cin : file_in;

  Staged staged;
  std::ostream& out = output == "-" ? std::cout : staged.open(output);
  std::ostringstream edit_log;
  std::size_t warnings = 0;
  std::size_t lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = rwspell::tokenize(line);
    std::vector<std::string> corrected = toks;
    try {
      auto r = corrector.correct(toks, mode);
      corrected = r.corrected;
      for (const auto& e : r.edits) {
        edit_log << lineno << '\t' << e.position << '\t' << e.original << '\t' << e.replacement << '\n';
      }
    } catch (const rwspell::CombinatorialBlowup& e) {
      ++warnings;
      std::cerr << "warning: line " << lineno << ": " << e.what() << "; left unchanged\n";
    }
    out << rwspell::join(corrected) << '\n';
  }
  if (!edits_path.empty()) {
    staged.open(edits_path) << edit_log.str();
  } else {
    std::cerr << edit_log.str();
  }
  staged.commit();
  if (warnings) std::cerr << "warnings " << warnings << "\n";
  return 0;
}

// Flag problems are usage errors (exit 1), not data errors.
rwspell::CorruptionSpec make_spec(double alpha, std::uint64_t seed, const std::string& test_set,
                                  const rwspell::NounList* nouns) {
  rwspell::CorruptionSpec spec;
  spec.seed = seed;
  spec.nouns = nouns;
  try {
    spec.alpha = alpha;
    spec.test_set = rwspell::parse_test_set(test_set);
    spec.validate();
  } catch (const Error& e) {
    throw CLI::ValidationError(e.what());
  }
  return spec;
}

int cmd_corrupt(const std::string& vocab, const std::string& input, const std::string& nouns_path, double alpha,
                std::uint64_t seed, const std::string& test_set, const std::string& output) {
  rwspell::NounList nouns;
  if (!nouns_path.empty()) nouns = load_nouns(nouns_path);
  auto spec = make_spec(alpha, seed, test_set, nouns_path.empty() ? nullptr : &nouns);
  rwspell::Lexicon lexicon = load_lexicon(vocab);
  auto in = open_input(input);
  auto set = rwspell::corrupt(read_sentences(in), spec, lexicon);
  Staged staged;
  rwspell::write_corrupted(staged.open(output), set);
  staged.commit();
  std::size_t n = 0;
  for (const auto& c : set) n += c.injected.size();
  std::cout << "sentences " << set.size() << "\ninjected " << n << "\n";
  return 0;
}

struct EvalFlags {
  std::string test;
  std::string nouns;
  std::string test_set = "S62000";
  std::uint64_t seed = 20261019;
  std::vector<double> alphas{0.9, 0.99, 0.995, 0.999};
  std::vector<std::size_t> ds{1, 3, 6, 10};
  std::vector<std::string> modes{"window-single", "window-multi"};
  std::size_t limit = 0;
  std::size_t warmup = 2;
  std::size_t repeats = 1;
  bool no_timing = false;
  bool quiet = false;
  std::string output;
};

int cmd_evaluate(const ModelPaths& paths, const SearchFlags& sflags, const EvalFlags& ef) {
  rwspell::EvalGrid grid;
  grid.alphas = ef.alphas;
  grid.d_values = ef.ds;
  grid.modes.clear();
  bool need_grammar = false;
  for (const auto& m : ef.modes) {
    grid.modes.push_back(rwspell::parse_mode(m));
    need_grammar = need_grammar || grid.modes.back() == rwspell::Mode::kWindowMulti;
  }
  if (need_grammar && paths.grammar.empty()) {
    throw CLI::ValidationError("--grammar", "window-multi mode needs a grammar");
  }
  rwspell::NounList nouns;
  if (!ef.nouns.empty()) nouns = load_nouns(ef.nouns);
  if (grid.alphas.empty()) throw CLI::ValidationError("--alpha", "needs at least one value");
  rwspell::CorruptionSpec spec;
  for (double a : grid.alphas) spec = make_spec(a, ef.seed, ef.test_set, ef.nouns.empty() ? nullptr : &nouns);

  rwspell::Lexicon lexicon = load_lexicon(paths.vocab);
  rwspell::TrigramModel lm = load_lm(paths.lm);
  std::optional<rwspell::Grammar> grammar;
  if (!paths.grammar.empty()) grammar = load_grammar(paths.grammar);
  auto in = open_input(ef.test);
  auto sentences = read_sentences(in);
  if (ef.limit && sentences.size() > ef.limit) sentences.resize(ef.limit);

  rwspell::Models models{lexicon, lm, grammar ? &*grammar : nullptr};
  rwspell::BenchOptions bo{sflags.cap, sflags.parse_floor, ef.warmup, ef.repeats};
  auto progress = [&](const rwspell::EvalCell& c) {
    if (ef.quiet) return;
    auto p = c.detection();
    std::cerr << rwspell::mode_name(c.mode) << " d=" << c.d << " alpha=" << c.alpha << " det.F=" << p.f1
              << " ms/sent=" << c.mean_time_ms << "\n";
  };
  auto report = rwspell::evaluate(sentences, grid, spec, models, bo, progress);

  Staged staged;
  staged.open(ef.output + ".txt") << report.to_text(!ef.no_timing);
  staged.open(ef.output + ".records") << report.to_records(!ef.no_timing);
  staged.commit();
  std::cout << report.to_text(!ef.no_timing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-word spelling correction with a noisy-channel trigram model"};
  app.require_subcommand(1);

  std::string corpus, vocab_out, lm_out;
  std::size_t vocab_size = 62000;
  double delta = 0.5;
  auto* train_lm = app.add_subcommand("train-lm", "build a vocabulary and trigram model from a corpus");
  train_lm->add_option("corpus", corpus, "one sentence per line")->required()->check(CLI::ExistingFile);
  train_lm->add_option("--vocab-size", vocab_size, "number of most frequent tokens kept")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_lm->add_option("--delta", delta, "discount in [0, 1)")->check(CLI::Range(0.0, 0.999999))->capture_default_str();
  train_lm->add_option("--vocab", vocab_out, "vocabulary output")->required();
  train_lm->add_option("--lm", lm_out, "model output")->required();

  std::string treebank, grammar_out;
  auto* train_grammar = app.add_subcommand("train-grammar", "induce a PCFG from bracketed trees");
  train_grammar->add_option("treebank", treebank, "one bracketed tree per line")
      ->required()
      ->check(CLI::ExistingFile);
  train_grammar->add_option("--grammar", grammar_out, "grammar output")->required();

  ModelPaths cpaths;
  SearchFlags cflags;
  std::string input = "-", output = "-", edits;
  auto* correct = app.add_subcommand("correct", "correct one sentence per line");
  add_model_flags(correct, cpaths, false);
  add_search_flags(correct, cflags);
  correct->add_option("--alpha", cflags.alpha, "probability a word is typed correctly")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  correct->add_option("--d", cflags.d, "span length")->check(CLI::PositiveNumber)->capture_default_str();
  correct->add_option("--mode", cflags.mode, "mdm, window-single or window-multi")
      ->check(CLI::IsMember({"mdm", "window-single", "window-multi"}))
      ->capture_default_str();
  correct->add_option("--input", input, "input file, - for stdin")->capture_default_str();
  correct->add_option("--output", output, "output file, - for stdout")->capture_default_str();
  correct->add_option("--edits", edits, "edit log file (default stderr)");

  std::string cvocab, cinput, cnouns, coutput, ctest_set = "S62000";
  double calpha = 0.99;
  std::uint64_t cseed = 20261019;
  auto* corrupt = app.add_subcommand("corrupt", "inject real-word errors");
  corrupt->add_option("--vocab", cvocab, "vocabulary file")->required()->check(CLI::ExistingFile);
  corrupt->add_option("--input", cinput, "clean sentences")->required()->check(CLI::ExistingFile);
  corrupt->add_option("--alpha", calpha, "probability a word is kept")->capture_default_str();
  corrupt->add_option("--seed", cseed, "mt19937_64 seed")->capture_default_str();
  corrupt->add_option("--test-set", ctest_set, "S62000 or MALP")->capture_default_str();
  corrupt->add_option("--nouns", cnouns, "noun list (MALP)")->check(CLI::ExistingFile);
  corrupt->add_option("--output", coutput, "corrupted set output")->required();

  ModelPaths epaths;
  SearchFlags eflags;
  EvalFlags ef;
  auto* evaluate = app.add_subcommand("evaluate", "corrupt, correct and score over a grid");
  add_model_flags(evaluate, epaths, false);
  add_search_flags(evaluate, eflags);
  evaluate->add_option("--test", ef.test, "clean test sentences")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--alpha", ef.alphas, "alpha grid")->capture_default_str();
  evaluate->add_option("--d", ef.ds, "span length grid")->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--mode", ef.modes, "mode grid")
      ->check(CLI::IsMember({"mdm", "window-single", "window-multi"}))
      ->capture_default_str();
  evaluate->add_option("--seed", ef.seed, "mt19937_64 seed")->capture_default_str();
  evaluate->add_option("--test-set", ef.test_set, "S62000 or MALP")->capture_default_str();
  evaluate->add_option("--nouns", ef.nouns, "noun list (MALP)")->check(CLI::ExistingFile);
  evaluate->add_option("--limit", ef.limit, "use only the first N sentences");
  evaluate->add_option("--warmup", ef.warmup, "untimed warm-up sentences per cell")->capture_default_str();
  evaluate->add_option("--repeats", ef.repeats, "timed passes per cell; each sentence keeps its fastest time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_flag("--no-timing", ef.no_timing, "omit wall-clock columns so reports are reproducible");
  evaluate->add_flag("--quiet", ef.quiet, "no per-cell progress on stderr");
  evaluate->add_option("--output", ef.output, "report prefix; writes PREFIX.txt and PREFIX.records")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*train_lm) return cmd_train_lm(corpus, vocab_size, delta, vocab_out, lm_out);
    if (*train_grammar) return cmd_train_grammar(treebank, grammar_out);
    if (*correct) {
      if (!(cflags.alpha > 0.0 && cflags.alpha < 1.0)) throw CLI::ValidationError("--alpha", "must lie in (0, 1)");
      return cmd_correct(cpaths, cflags, input, output, edits);
    }
    if (*corrupt) return cmd_corrupt(cvocab, cinput, cnouns, calpha, cseed, ctest_set, coutput);
    if (*evaluate) return cmd_evaluate(epaths, eflags, ef);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
