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

#include <set>

#include "doctest.h"
#include "teigo/error.h"
#include "teigo/rng.h"
#include "teigo/text.h"
#include "teigo/unicode.h"

using namespace teigo;

namespace {

std::vector<std::string> Surfaces(std::string_view text, std::string lang = "en") {
  Tokenizer tok(TokenizerConfig{1, lang});
  std::vector<std::string> out;
  for (const Token& t : tok.Tokenize(text)) out.push_back(t.surface);
  return out;
}

std::vector<Token> Toks(std::initializer_list<const char*> surfaces) {
  std::vector<Token> out;
  size_t pos = 0;
  for (const char* s : surfaces) {
    Token t;
    t.surface = s;
    t.start = pos;
    t.end = pos + unicode::Length(s);
    t.index = out.size();
    pos = t.end + 1;
    out.push_back(t);
  }
  return out;
}

std::vector<BiluoTag> Tags(std::string_view s) {
  std::vector<BiluoTag> out;
  for (char c : s) {
    switch (c) {
      case 'B': out.push_back(BiluoTag::kB); break;
      case 'I': out.push_back(BiluoTag::kI); break;
      case 'L': out.push_back(BiluoTag::kL); break;
      case 'U': out.push_back(BiluoTag::kU); break;
      default: out.push_back(BiluoTag::kO); break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("utf8 decode and validity") {
  CHECK(unicode::IsValidUtf8("Zürich 2023"));
  CHECK_FALSE(unicode::IsValidUtf8("bad \xff byte"));
  CHECK_FALSE(unicode::IsValidUtf8("\xc3"));
  CHECK_FALSE(unicode::IsValidUtf8("\xed\xa0\x80"));  // surrogate
  CHECK_FALSE(unicode::IsValidUtf8("\xc0\xaf"));      // overlong
  CHECK(unicode::Length("São") == 3);
  CHECK(unicode::Slice("São Paulo", 4, 9) == "Paulo");
  CHECK_THROWS_AS(unicode::Decode("\xff"), Error);
  CHECK(unicode::ToLowerUtf8("ÉCOLE Straße") == "école straße");
}

TEST_CASE("tokenizer examples") {
  CHECK(Surfaces("").empty());
  CHECK(Surfaces("on 26 May 2023.") ==
        std::vector<std::string>{"on", "26", "May", "2023", "."});
  CHECK(Surfaces("(at 10:30, \"today\")") ==
        std::vector<std::string>{"(", "at", "10:30", ",", "\"", "today", "\"", ")"});
  CHECK(Surfaces("the 1990s and 2023-05-26") ==
        std::vector<std::string>{"the", "1990s", "and", "2023-05-26"});
  CHECK(Surfaces("am 26. Mai", "de") == std::vector<std::string>{"am", "26.", "Mai"});
  CHECK(Surfaces("am 26. Mai", "en") == std::vector<std::string>{"am", "26", ".", "Mai"});
}

TEST_CASE("tokenizer offsets are scalar values and reconstruct the text") {
  const std::string text = "São Paulo, 26 de maio — às 10h.";
  Tokenizer tok;
  const auto tokens = tok.Tokenize(text);
  const std::u32string u32 = unicode::Decode(text);
  size_t last_end = 0;
  for (const Token& t : tokens) {
    CHECK(t.start >= last_end);
    CHECK(t.end > t.start);
    CHECK(unicode::Encode(std::u32string_view(u32).substr(t.start, t.end - t.start)) ==
          t.surface);
    for (size_t i = last_end; i < t.start; ++i) CHECK(unicode::IsSpace(u32[i]));
    last_end = t.end;
  }
  // Idempotence: re-tokenizing the joined surfaces yields the same surfaces.
  std::string joined;
  for (const Token& t : tokens) joined += t.surface + " ";
  std::vector<std::string> again;
  for (const Token& t : tok.Tokenize(joined)) again.push_back(t.surface);
  std::vector<std::string> first;
  for (const Token& t : tokens) first.push_back(t.surface);
  CHECK(again == first);
}

TEST_CASE("sentence splitting") {
  CHECK(SplitSentences({}).empty());
  CHECK(SplitSentences(Toks({"Hi", "."})) == std::vector<Sentence>{{0, 1}});
  CHECK(SplitSentences(Toks({"A", ".", "B", "."})) == std::vector<Sentence>{{0, 1}, {2, 3}});
  CHECK(SplitSentences(Toks({"at", "5", "p.m", ".", "then"})).size() == 1);
  CHECK(SplitSentences(Toks({"No", "end"})) == std::vector<Sentence>{{0, 1}});
  // Sentences partition the token range.
  Tokenizer tok;
  const auto tokens =
      tok.Tokenize("It rained. Was it cold? yes. We met on Monday! The end");
  const auto sentences = SplitSentences(tokens);
  size_t next = 0;
  for (const Sentence& s : sentences) {
    CHECK(s.first_token == next);
    next = s.last_token + 1;
  }
  CHECK(next == tokens.size());
  CHECK(sentences.size() == 4);
}

TEST_CASE("align spans snaps to cover") {
  const auto tokens = Toks({"on", "26", "May", "2023", "."});  // 0-2 3-5 6-9 10-14 15-16
  CHECK(AlignSpans(std::vector<TimexSpan>{{3, 14, ""}}, tokens) ==
        std::vector<TokenSpan>{{1, 3}});
  CHECK(AlignSpans(std::vector<TimexSpan>{{7, 8, ""}}, tokens) ==
        std::vector<TokenSpan>{{2, 2}});
  AlignStats stats;
  CHECK(AlignSpans(std::vector<TimexSpan>{{2, 3, ""}}, tokens, &stats).empty());
  CHECK(stats.dropped_empty == 1);
  // Two spans snapping onto overlapping ranges: the longer survives.
  stats = {};
  CHECK(AlignSpans(std::vector<TimexSpan>{{4, 7, ""}, {8, 16, ""}}, tokens, &stats) ==
        std::vector<TokenSpan>{{2, 4}});
  CHECK(stats.dropped_overlap == 1);
  // Equal length: the earlier one.
  CHECK(AlignSpans(std::vector<TimexSpan>{{4, 7, ""}, {7, 11, ""}}, tokens) ==
        std::vector<TokenSpan>{{1, 2}});
}

TEST_CASE("biluo encode and decode examples") {
  CHECK(EncodeBiluo(std::vector<TokenSpan>{{1, 3}}, 5) == Tags("OBILO"));
  CHECK(EncodeBiluo(std::vector<TokenSpan>{{2, 2}}, 5) == Tags("OOUOO"));
  CHECK(EncodeBiluo({}, 3) == Tags("OOO"));
  CHECK(DecodeBiluo(Tags("OBILO")) == std::vector<TokenSpan>{{1, 3}});
  CHECK(DecodeBiluo(Tags("UU")) == std::vector<TokenSpan>{{0, 0}, {1, 1}});
  CHECK_THROWS_WITH_AS(DecodeBiluo(Tags("OIO")), doctest::Contains("index 1"), Error);
  CHECK(FirstBiluoViolation(Tags("OIO")) == 1);
  CHECK(FirstBiluoViolation(Tags("BL")) == -1);
  CHECK(FirstBiluoViolation(Tags("BIO")) == 2);
  CHECK(FirstBiluoViolation(Tags("OB")) == 2);  // unclosed at the end
  CHECK(FirstBiluoViolation(Tags("L")) == 0);
  CHECK(FirstBiluoViolation(Tags("BU")) == 1);
  CHECK_THROWS_AS(EncodeBiluo(std::vector<TokenSpan>{{0, 2}, {2, 3}}, 5), Error);
  CHECK_THROWS_AS(EncodeBiluo(std::vector<TokenSpan>{{3, 5}}, 5), Error);
}

TEST_CASE("biluo round trip over random span sets") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 1 + rng.Below(60);
    std::vector<TokenSpan> spans;
    size_t i = 0;
    while (i < n) {
      i += rng.Below(4);
      if (i >= n) break;
      const size_t len = 1 + rng.Below(std::min<uint64_t>(5, n - i));
      spans.push_back({i, i + len - 1});
      i += len;
    }
    const auto tags = EncodeBiluo(spans, n);
    CHECK(tags.size() == n);
    CHECK(FirstBiluoViolation(tags) == -1);
    CHECK(DecodeBiluo(tags) == spans);
  }
}

TEST_CASE("char span of a token range") {
  const std::string text = "met on 26 of May 2023.";
  Tokenizer tok;
  const auto tokens = tok.Tokenize(text);
  const TimexSpan s = ToCharSpan({2, 5}, tokens, unicode::Decode(text));
  CHECK(s.start == 7);
  CHECK(s.end == 21);
  CHECK(s.surface == "26 of May 2023");
}
