// Copyright 2026 The teigo Authors.
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

#include "teigo/text.h"

#include <algorithm>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "teigo/error.h"
#include "teigo/unicode.h"

namespace teigo {
namespace {

bool IsPeelable(char32_t c) {
  return !unicode::IsLetter(c) && !unicode::IsDigit(c) && !unicode::IsSpace(c);
}

bool IsSentenceFinal(std::string_view surface) {
  return surface == "." || surface == "!" || surface == "?" ||
         surface == "…" || surface == "。" || surface == "！" ||
         surface == "？";
}

bool StartsLowercase(std::string_view surface) {
  if (surface.empty()) return false;
  size_t len = 1;
  const auto b0 = static_cast<unsigned char>(surface[0]);
  if (b0 >= 0xF0) len = 4;
  else if (b0 >= 0xE0) len = 3;
  else if (b0 >= 0xC0) len = 2;
  const std::u32string first = unicode::Decode(surface.substr(0, len));
  return !first.empty() && unicode::IsLower(first[0]);
}

// Keeps the longer span on conflict (ties: the earlier one).
template <typename Span, typename Less>
std::vector<Span> ResolveOverlaps(std::vector<Span> spans, Less by_start,
                                  size_t* dropped) {
  std::vector<size_t> order(spans.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (spans[a].length() != spans[b].length()) {
      return spans[a].length() > spans[b].length();
    }
    return by_start(spans[a], spans[b]);
  });
  std::vector<Span> kept;
  for (size_t i : order) {
    const Span& s = spans[i];
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const Span& k) {
      return !(by_start(s, k) ? s.last < k.first : k.last < s.first);
    });
    if (clash) {
      if (dropped) ++*dropped;
      continue;
    }
    kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end(), by_start);
  return kept;
}

}  // namespace

char TagChar(BiluoTag tag) {
  static constexpr char kChars[] = {'B', 'I', 'L', 'U', 'O'};
  return kChars[static_cast<int>(tag)];
}

std::string TagString(std::span<const BiluoTag> tags) {
  std::string out;
  out.reserve(tags.size());
  for (BiluoTag t : tags) out.push_back(TagChar(t));
  return out;
}

Tokenizer::Tokenizer(TokenizerConfig config) : config_(std::move(config)) {
  if (config_.version != TokenizerConfig::kCurrentVersion) {
    throw Error(ErrorKind::kFormat,
                fmt::format("unsupported tokenizer version {}", config_.version));
  }
  ordinal_period_ = config_.language == "de";
}

std::vector<Token> Tokenizer::Tokenize(std::string_view utf8) const {
  return Tokenize(unicode::Decode(utf8));
}

std::vector<Token> Tokenizer::Tokenize(std::u32string_view text) const {
  std::vector<Token> tokens;
  auto emit = [&](size_t a, size_t b) {
    Token t;
    t.surface = unicode::Encode(text.substr(a, b - a));
    t.start = a;
    t.end = b;
    t.index = tokens.size();
    tokens.push_back(std::move(t));
  };

  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (unicode::IsSpace(text[i])) {
      ++i;
      continue;
    }
    size_t a = i;
    size_t b = i;
    while (b < n && !unicode::IsSpace(text[b])) ++b;
    i = b;

    while (a < b && IsPeelable(text[a])) {
      emit(a, a + 1);
      ++a;
    }
    size_t core_end = b;
    while (core_end > a && IsPeelable(text[core_end - 1])) {
      if (ordinal_period_ && text[core_end - 1] == U'.') {
        const size_t digits = core_end - 1 - a;
        const bool all_digits =
            digits >= 1 && digits <= 2 &&
            std::all_of(text.begin() + a, text.begin() + core_end - 1,
                        unicode::IsDigit);
        if (all_digits) break;
      }
      --core_end;
    }
    if (core_end > a) emit(a, core_end);
    for (size_t p = core_end; p < b; ++p) emit(p, p + 1);
  }
  return tokens;
}

Tokenization TokenizeText(const Tokenizer& tokenizer, std::string_view utf8) {
  return Tokenization{tokenizer.config(), tokenizer.Tokenize(utf8)};
}

std::vector<Sentence> SplitSentences(std::span<const Token> tokens) {
  std::vector<Sentence> sentences;
  size_t first = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!IsSentenceFinal(tokens[i].surface)) continue;
    if (i + 1 < tokens.size() && StartsLowercase(tokens[i + 1].surface)) {
      continue;
    }
    sentences.push_back({first, i});
    first = i + 1;
  }
  if (first < tokens.size()) sentences.push_back({first, tokens.size() - 1});
  return sentences;
}

std::vector<TokenSpan> AlignSpans(std::span<const TimexSpan> spans,
                                  std::span<const Token> tokens,
                                  AlignStats* stats) {
  AlignStats local;
  std::vector<TokenSpan> covered;
  for (const TimexSpan& s : spans) {
    // First token ending after the span start.
    auto it = std::upper_bound(
        tokens.begin(), tokens.end(), s.start,
        [](size_t pos, const Token& t) { return pos < t.end; });
    if (it == tokens.end() || it->start >= s.end) {
      ++local.dropped_empty;
      spdlog::debug("dropping span [{}, {}) covering no token", s.start, s.end);
      continue;
    }
    TokenSpan ts{static_cast<size_t>(it - tokens.begin()), 0};
    ts.last = ts.first;
    while (ts.last + 1 < tokens.size() && tokens[ts.last + 1].start < s.end) {
      ++ts.last;
    }
    covered.push_back(ts);
  }
  auto result = ResolveOverlaps(
      std::move(covered),
      [](const TokenSpan& a, const TokenSpan& b) { return a.first < b.first; },
      &local.dropped_overlap);
  if (local.dropped_overlap > 0) {
    spdlog::debug("dropped {} overlapping token spans", local.dropped_overlap);
  }
  if (stats) *stats = local;
  return result;
}

TimexSpan ToCharSpan(const TokenSpan& span, std::span<const Token> tokens,
                     std::u32string_view text) {
  TimexSpan out;
  out.start = tokens[span.first].start;
  out.end = tokens[span.last].end;
  out.surface = unicode::Encode(text.substr(out.start, out.end - out.start));
  return out;
}

std::vector<BiluoTag> EncodeBiluo(std::span<const TokenSpan> spans,
                                  size_t n_tokens) {
  std::vector<TokenSpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const TokenSpan& a, const TokenSpan& b) { return a.first < b.first; });
  std::vector<BiluoTag> tags(n_tokens, BiluoTag::kO);
  for (size_t i = 0; i < sorted.size(); ++i) {
    const TokenSpan& s = sorted[i];
    if (s.first > s.last || s.last >= n_tokens) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("token span ({}, {}) outside [0, {})", s.first,
                              s.last, n_tokens));
    }
    if (i > 0 && sorted[i - 1].last >= s.first) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("token spans ({}, {}) and ({}, {}) overlap",
                              sorted[i - 1].first, sorted[i - 1].last, s.first,
                              s.last));
    }
    if (s.first == s.last) {
      tags[s.first] = BiluoTag::kU;
      continue;
    }
    tags[s.first] = BiluoTag::kB;
    for (size_t k = s.first + 1; k < s.last; ++k) tags[k] = BiluoTag::kI;
    tags[s.last] = BiluoTag::kL;
  }
  return tags;
}

std::ptrdiff_t FirstBiluoViolation(std::span<const BiluoTag> tags) {
  bool open = false;
  for (size_t i = 0; i < tags.size(); ++i) {
    switch (tags[i]) {
      case BiluoTag::kB:
      case BiluoTag::kU:
      case BiluoTag::kO:
        if (open) return static_cast<std::ptrdiff_t>(i);
        open = tags[i] == BiluoTag::kB;
        break;
      case BiluoTag::kI:
        if (!open) return static_cast<std::ptrdiff_t>(i);
        break;
      case BiluoTag::kL:
        if (!open) return static_cast<std::ptrdiff_t>(i);
        open = false;
        break;
    }
  }
  return open ? static_cast<std::ptrdiff_t>(tags.size()) : -1;
}

std::vector<TokenSpan> DecodeBiluo(std::span<const BiluoTag> tags) {
  const std::ptrdiff_t bad = FirstBiluoViolation(tags);
  if (bad >= 0) {
    throw Error(ErrorKind::kValidation,
                fmt::format("invalid BILUO sequence {} at index {}",
                            TagString(tags), bad));
  }
  std::vector<TokenSpan> spans;
  size_t start = 0;
  for (size_t i = 0; i < tags.size(); ++i) {
    switch (tags[i]) {
      case BiluoTag::kB: start = i; break;
      case BiluoTag::kL: spans.push_back({start, i}); break;
      case BiluoTag::kU: spans.push_back({i, i}); break;
      default: break;
    }
  }
  return spans;
}

}  // namespace teigo
