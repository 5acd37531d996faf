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

// Tokenization, UTF-8 helpers and the shared error type.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rwspell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sentence sentinels and the out-of-vocabulary token shared by every model.
inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

inline bool is_sentinel(std::string_view tok) {
  return tok == kBos || tok == kEos;
}

/// True if the token holds a letter or digit. Pure punctuation tokens are
/// never error sites and never correction candidates. Non-ASCII bytes count
/// as letters.
inline bool is_word_token(std::string_view tok) {
  if (is_sentinel(tok)) return false;
  for (char c : tok) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u)) return true;
  }
  return false;
}

// Heterogeneous lookup for string-keyed unordered containers.
struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

inline std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

/// Splits a line into lowercase tokens. Whitespace separates chunks; leading
/// and trailing ASCII punctuation is peeled off each chunk one character at a
/// time, so "them," becomes {"them", ","}. Word-internal punctuation
/// ("don't", "well-known") stays attached. Idempotent on its own output.
inline std::vector<std::string> tokenize(std::string_view line) {
  auto is_punct = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
  };
  std::vector<std::string> out;
  for (const std::string& chunk : split_whitespace(line)) {
    std::size_t b = 0;
    std::size_t e = chunk.size();
    while (b < e && is_punct(chunk[b])) {
      out.emplace_back(1, chunk[b]);
      ++b;
    }
    std::size_t tail = e;
    while (tail > b && is_punct(chunk[tail - 1])) --tail;
    if (tail > b) out.push_back(to_lower(std::string_view(chunk).substr(b, tail - b)));
    for (std::size_t k = tail; k < e; ++k) out.emplace_back(1, chunk[k]);
  }
  return out;
}

inline std::string join(const std::vector<std::string>& toks, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out.append(sep);
    out.append(toks[i]);
  }
  return out;
}

// Lenient UTF-8 decoding: malformed bytes decode to themselves so that
// encode(decode(s)) == s for any input.
inline std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    bool ok = len > 0 && i + len <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(s[i + k]) >> 6) == 0x2;
    }
    char32_t cp = b0;
    if (ok && len > 1) {
      cp = b0 & (0x7F >> len);
      for (int k = 1; k < len; ++k) {
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
      }
      // Overlong forms, surrogates and out-of-range values are malformed.
      static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= kMin[len] && cp <= 0x10FFFF && (cp < 0xD800 || cp > 0xDFFF);
    }
    if (!ok) {
      // Each malformed byte maps into a lone-surrogate range to survive the trip.
      out.push_back(0xDC00u + b0);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp >= 0xDC80u && cp <= 0xDCFFu) {
      out.push_back(static_cast<char>(cp - 0xDC00u));
    } else if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

namespace detail {

// Shortest decimal form that reads back to the same double ("-inf" included).
inline std::string format_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  std::string tmp(s);
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw Error("bad number '" + tmp + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail
}  // namespace rwspell
