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

#ifndef TEIGO_TEACHER_H_
#define TEIGO_TEACHER_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teigo/corpus.h"
#include "teigo/text.h"
#include "teigo/timex_span.h"

namespace teigo {

// Token classes usable in rule patterns as "@name".
enum class TokenClass {
  kYear,     // four digits, 1000-2999
  kDay,      // 1-31, bare or ordinal ("26", "26th")
  kNum,      // any run of digits
  kHour,     // 1-12
  kTime,     // h:mm or hh:mm[:ss], optionally with am/pm attached
  kIsoDate,  // YYYY-MM-DD
  kDecade,   // "1990s", "90s"
};

std::optional<TokenClass> ParseTokenClass(std::string_view name);
const char* TokenClassName(TokenClass c);
bool MatchesClass(TokenClass c, std::string_view surface);

// One token test: a class, a named word set (optionally requiring an
// initial capital) or a literal word. Word comparisons are lowercase.
struct PatternAtom {
  enum class Kind { kClass, kSet, kWord };
  Kind kind = Kind::kWord;
  TokenClass token_class = TokenClass::kNum;
  std::string text;  // set name or lowercased word
  bool capitalized = false;
};

// A pattern element matches one of its alternatives; an alternative is a
// sequence of atoms written joined by '+'.
struct PatternElement {
  std::vector<std::vector<PatternAtom>> alternatives;
  bool optional = false;
};

struct Rule {
  std::string id;
  int priority = 0;
  std::vector<PatternElement> pattern;
  std::string language;
};

// A language's word sets and rules. File format, one entry per line:
//
//   teigo-rules 1
//   language en
//   set month january february ...
//   rule month-day-year 90 $month! @day ,+@year|@year?
//
// '#' starts a comment. In a rule, elements are separated by spaces, '|'
// separates alternatives, '+' joins atoms into a sequence and a trailing
// '?' makes the element optional. "$name!" requires a capitalized token.
class RuleSet {
 public:
  // Throws Error(kFormat) naming the line on malformed input.
  static RuleSet Parse(std::string_view text);
  static RuleSet Load(const std::string& path);
  // Shipped rules. Throws Error(kLanguage) for a language without rules.
  static RuleSet Builtin(std::string_view language);
  static std::vector<std::string> BuiltinLanguages();

  const std::string& language() const { return language_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::map<std::string, std::set<std::string>>& sets() const { return sets_; }

  // Matches every rule at every token and resolves overlaps by priority,
  // then length, then earlier start. Output is sorted and disjoint.
  std::vector<TokenSpan> Match(std::span<const Token> tokens) const;

 private:
  std::string language_;
  std::vector<Rule> rules_;
  std::map<std::string, std::set<std::string>> sets_;
};

// Character spans of every timex the rules find. The DCT anchors
// normalization only, so extents do not depend on it.
std::vector<TimexSpan> Annotate(std::string_view text, const std::optional<Date>& dct,
                                const RuleSet& rules);

// Throws Error(kLanguage) when the document and rule languages differ.
std::vector<TimexSpan> AnnotateDocument(const Document& doc, const RuleSet& rules);

// ---------------------------------------------------------------------------
// Weak corpus construction

struct RawDocument {
  std::string id;
  std::string text;  // raw bytes, not yet validated
  std::optional<std::string> dct;
  std::string fetched_at;
};

enum class FilterOutcome { kKeep, kNonUtf8, kBadDct, kHtml };
const char* FilterOutcomeName(FilterOutcome outcome);

// "<" followed by a letter (or "/" and a letter), closed by a later ">".
bool ContainsHtmlTag(std::string_view text);

// Checks, in order: UTF-8 validity, a parseable day-precision DCT, and
// the absence of HTML tags.
FilterOutcome FilterDocument(const RawDocument& raw);

struct FilterReport {
  size_t kept = 0;
  size_t rejected_non_utf8 = 0;
  size_t rejected_bad_dct = 0;
  size_t rejected_html = 0;
  size_t rejected_zero_timex = 0;

  size_t total() const {
    return kept + rejected_non_utf8 + rejected_bad_dct + rejected_html +
           rejected_zero_timex;
  }
  bool operator==(const FilterReport&) const = default;
};

std::string FilterReportJson(const FilterReport& report);

// Any extent annotator; receives validated text and its DCT.
using Annotator =
    std::function<std::vector<TimexSpan>(const std::string& text, const Date& dct)>;
Annotator RuleAnnotator(RuleSet rules);

// Next raw document, or nullopt at the end of the stream.
using RawStream = std::function<std::optional<RawDocument>()>;

struct WeakCorpusOptions {
  std::string name = "weak";
  std::string language = "en";
  std::chrono::nanoseconds budget = std::chrono::hours(1);
};

struct WeakCorpusResult {
  Corpus corpus;
  FilterReport report;
  bool budget_exhausted = false;
};

// Filters and annotates documents strictly in stream order until the
// stream ends or the budget elapses; the budget is checked before each
// document is pulled. Documents with no timex are rejected. Kept documents
// are marked weak. Throws Error(kUsage) for a non-positive budget.
WeakCorpusResult BuildWeakCorpus(const RawStream& stream, const Annotator& annotator,
                                 const WeakCorpusOptions& options);

}  // namespace teigo

#endif  // TEIGO_TEACHER_H_
