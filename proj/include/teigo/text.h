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

#ifndef TEIGO_TEXT_H_
#define TEIGO_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teigo/timex_span.h"

namespace teigo {

struct Token {
  std::string surface;  // UTF-8
  size_t start = 0;     // scalar-value offsets into the source text
  size_t end = 0;
  size_t index = 0;
};

// Inclusive token range of one sentence.
struct Sentence {
  size_t first_token = 0;
  size_t last_token = 0;
  bool operator==(const Sentence&) const = default;
};

// Inclusive token range of one timex.
struct TokenSpan {
  size_t first = 0;
  size_t last = 0;
  size_t length() const { return last - first + 1; }
  bool operator==(const TokenSpan&) const = default;
};

enum class BiluoTag : uint8_t { kB = 0, kI = 1, kL = 2, kU = 3, kO = 4 };

char TagChar(BiluoTag tag);
std::string TagString(std::span<const BiluoTag> tags);

// Identifies the tokenization rules. Models record it so that decoding
// can reject token streams produced by a different tokenizer.
struct TokenizerConfig {
  static constexpr uint32_t kCurrentVersion = 1;

  uint32_t version = kCurrentVersion;
  std::string language = "en";

  bool operator==(const TokenizerConfig&) const = default;
};

// Rule-based, whitespace-first tokenizer. Each whitespace-delimited chunk
// has its leading and trailing punctuation peeled into one-character
// tokens; the remainder (including mixed digit/letter runs such as
// "1990s" or "10:30") stays whole. German keeps the period of one- or
// two-digit ordinals attached ("26. Mai").
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(TokenizerConfig config);

  const TokenizerConfig& config() const { return config_; }

  std::vector<Token> Tokenize(std::string_view utf8) const;
  std::vector<Token> Tokenize(std::u32string_view text) const;

 private:
  TokenizerConfig config_;
  bool ordinal_period_ = false;
};

// A token sequence tagged with the tokenizer that produced it.
struct Tokenization {
  TokenizerConfig tokenizer;
  std::vector<Token> tokens;
};

Tokenization TokenizeText(const Tokenizer& tokenizer, std::string_view utf8);

// Sentence boundary after ".", "!", "?" (and a few non-Latin equivalents)
// unless the next token starts with a lowercase letter.
std::vector<Sentence> SplitSentences(std::span<const Token> tokens);

struct AlignStats {
  size_t dropped_empty = 0;    // overlapped no token
  size_t dropped_overlap = 0;  // lost a longest-span-wins conflict
};

// Maps character spans to the minimal covering token range. Spans that
// overlap no token are dropped; overlapping results keep the longer span
// (ties: the earlier one). Output is sorted and non-overlapping.
std::vector<TokenSpan> AlignSpans(std::span<const TimexSpan> spans,
                                  std::span<const Token> tokens,
                                  AlignStats* stats = nullptr);

// Character span covered by an inclusive token range.
TimexSpan ToCharSpan(const TokenSpan& span, std::span<const Token> tokens,
                     std::u32string_view text);

// Throws Error(kValidation) when spans overlap or exceed n_tokens.
std::vector<BiluoTag> EncodeBiluo(std::span<const TokenSpan> spans,
                                  size_t n_tokens);

// Throws Error(kValidation) naming the first offending index.
std::vector<TokenSpan> DecodeBiluo(std::span<const BiluoTag> tags);

// Index of the first violation, or -1 when the sequence is valid.
std::ptrdiff_t FirstBiluoViolation(std::span<const BiluoTag> tags);

}  // namespace teigo

#endif  // TEIGO_TEXT_H_
