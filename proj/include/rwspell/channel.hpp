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

// Noisy-channel word confusion model: a word is typed as intended with
// probability alpha, otherwise as one of its spelling variations chosen
// uniformly.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "rwspell/lexicon.hpp"
#include "rwspell/text.hpp"

namespace rwspell {

class ChannelParams {
 public:
  explicit ChannelParams(double alpha = 0.99) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0, 1]");
  }

  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// log P(observed | intended) given |S_c(intended)| = `num_variations`.
/// A word without variations keeps the whole mass on correct typing.
inline double channel_log_prob(const ChannelParams& params, bool typed_correctly, std::size_t num_variations) {
  if (typed_correctly) return num_variations == 0 ? 0.0 : std::log(params.alpha());
  if (num_variations == 0) throw Error("not a channel-reachable pair");
  if (params.alpha() == 1.0) throw Error("alpha = 1 gives a mistyping zero probability");
  return std::log((1.0 - params.alpha()) / static_cast<double>(num_variations));
}

inline double channel_log_prob(const ChannelParams& params, std::string_view intended, std::string_view observed,
                               const CandidateSet& candidates) {
  if (observed == intended) return channel_log_prob(params, true, candidates.size());
  if (!candidates.contains(observed)) throw Error("not a channel-reachable pair");
  return channel_log_prob(params, false, candidates.size());
}

/// Sum of the per-word channel terms over aligned positions.
inline double sequence_channel_log_prob(const ChannelParams& params, std::span<const std::string> intended,
                                        std::span<const std::string> observed, const Lexicon& lexicon) {
  if (intended.size() != observed.size()) throw Error("intended and observed lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < intended.size(); ++i) {
    sum += channel_log_prob(params, intended[i], observed[i], lexicon.variations(intended[i]));
  }
  return sum;
}

}  // namespace rwspell
