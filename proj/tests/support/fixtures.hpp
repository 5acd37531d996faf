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

// A hand-built world in which two adjacent real-word errors are both
// recoverable: "two of the" typed as "to of thew", and "aid ... the" typed
// as "aim ... them".

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "rwspell/rwspell.hpp"

namespace rwspell::testing {

inline std::string fixture_corpus() {
  std::string out;
  auto add = [&](const char* s, int times) {
    for (int i = 0; i < times; ++i) out += std::string(s) + "\n";
  };
  add("two of the men came home .", 12);
  add("two of the boys left early .", 8);
  add("the senate voted to support aid for the contras .", 12);
  add("the senate to support aid for the contras .", 4);
  add("he went to the city .", 10);
  add("she went to the market .", 6);
  add("they aim to win .", 3);
  add("we told them the truth .", 3);
  add("a man of thew and sinew .", 1);
  add("the men came home .", 5);
  add("the boys came home early .", 3);
  return out;
}

inline std::string fixture_treebank() {
  std::string out;
  auto add = [&](const char* s, int times) {
    for (int i = 0; i < times; ++i) out += std::string(s) + "\n";
  };
  add("(S (NP (NP (CD two)) (PP (IN of) (NP (DT the) (NNS men)))) (VP (VBD came) (ADVP (RB home))) (. .))", 6);
  add("(S (NP (NP (CD two)) (PP (IN of) (NP (DT the) (NNS boys)))) (VP (VBD left) (ADVP (RB early))) (. .))", 4);
  add("(S (NP (DT the) (NNP senate)) (VP (VBD voted) (S (VP (TO to) (VP (VB support) (NP (NN aid)) "
      "(PP (IN for) (NP (DT the) (NNPS contras))))))) (. .))",
      6);
  add("(S (NP (DT the) (NNP senate)) (S (VP (TO to) (VP (VB support) (NP (NN aid)) "
      "(PP (IN for) (NP (DT the) (NNPS contras)))))) (. .))",
      2);
  add("(S (NP (PRP he)) (VP (VBD went) (PP (TO to) (NP (DT the) (NN city)))) (. .))", 5);
  add("(S (NP (PRP she)) (VP (VBD went) (PP (TO to) (NP (DT the) (NN market)))) (. .))", 3);
  add("(S (NP (PRP they)) (VP (VBP aim) (S (VP (TO to) (VP (VB win))))) (. .))", 1);
  add("(S (NP (PRP we)) (VP (VBD told) (NP (PRP them)) (NP (DT the) (NN truth))) (. .))", 1);
  add("(S (NP (NP (DT a) (NN man)) (PP (IN of) (NP (NN thew) (CC and) (NN sinew)))) (. .))", 1);
  add("(S (NP (DT the) (NNS men)) (VP (VBD came) (ADVP (RB home))) (. .))", 3);
  return out;
}

struct FixtureWorld {
  Lexicon lexicon;
  TrigramModel lm;
  Grammar grammar;
};

inline FixtureWorld fixture_world() {
  std::istringstream corpus_in(fixture_corpus());
  std::vector<std::vector<std::string>> corpus;
  std::string line;
  while (std::getline(corpus_in, line)) corpus.push_back(tokenize(line));
  Vocabulary vocab = build_vocabulary(corpus, 1000);
  FixtureWorld w;
  w.lm = TrigramModel::train(corpus, vocab);
  w.lexicon = Lexicon(vocab);
  std::istringstream tb(fixture_treebank());
  w.grammar = Grammar::induce(read_treebank(tb));
  return w;
}

inline constexpr double kFixtureAlpha = 0.9;

}  // namespace rwspell::testing
