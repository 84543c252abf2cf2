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

#include <functional>
#include <memory>
#include <thread>

#include "doctest.h"
#include "teigo/error.h"
#include "teigo/synthetic.h"
#include "teigo/teacher.h"

using namespace teigo;

namespace {

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

std::vector<std::string> Surfaces(std::string_view text) {
  static const RuleSet rules = RuleSet::Builtin("en");
  std::vector<std::string> out;
  for (const auto& s : Annotate(text, std::nullopt, rules)) out.push_back(s.surface);
  return out;
}

RawStream FromVector(std::vector<RawDocument> docs) {
  auto shared = std::make_shared<std::vector<RawDocument>>(std::move(docs));
  auto pos = std::make_shared<size_t>(0);
  return [shared, pos]() -> std::optional<RawDocument> {
    if (*pos >= shared->size()) return std::nullopt;
    return (*shared)[(*pos)++];
  };
}

std::vector<RawDocument> TenDocuments() {
  const std::string dct = "2023-05-26";
  return {
      {"a", "The summit opened on 26 May 2023 in Lisbon.", dct, ""},
      {"b", "<div>Sales rose last year.</div>", dct, ""},
      {"c", "The cat sat on the mat.", dct, ""},
      {"d", "Voting ends next Monday.", dct, ""},
      {"e", "Rates were cut in March 2020.", std::string("not-a-date"), ""},
      {"f", "Nobody said anything useful.", dct, ""},
      {"g", "The <b>vote</b> was held in 2019.", dct, ""},
      {"h", "Two weeks ago the bridge closed.", dct, ""},
      {"i", "Fans cheered and sang.", dct, ""},
      {"j", "The report is due on 2024-01-15.", dct, ""},
  };
}

}  // namespace

TEST_CASE("rule examples") {
  CHECK(Surfaces("26 of May 2023") == std::vector<std::string>{"26 of May 2023"});
  CHECK(Surfaces("last year") == std::vector<std::string>{"last year"});
  CHECK(Surfaces("the cat sat").empty());
  CHECK(Surfaces("It happened on Friday, 26 May 2023 at 10:30 pm.") ==
        std::vector<std::string>{"Friday, 26 May 2023", "10:30 pm"});
  CHECK(Surfaces("Prices doubled in the 1990s and fell three years ago.") ==
        std::vector<std::string>{"the 1990s", "three years ago"});
  CHECK(Surfaces("He scored 42 points.").empty());
  CHECK(Surfaces("May I come in?").empty());
  CHECK(Surfaces("We met on 2023-05-26.") == std::vector<std::string>{"2023-05-26"});
}

TEST_CASE("token classes") {
  CHECK(MatchesClass(TokenClass::kYear, "2023"));
  CHECK_FALSE(MatchesClass(TokenClass::kYear, "3023"));
  CHECK(MatchesClass(TokenClass::kDay, "26th"));
  CHECK_FALSE(MatchesClass(TokenClass::kDay, "32"));
  CHECK(MatchesClass(TokenClass::kTime, "10:30"));
  CHECK(MatchesClass(TokenClass::kTime, "9:05pm"));
  CHECK_FALSE(MatchesClass(TokenClass::kTime, "10:75"));
  CHECK(MatchesClass(TokenClass::kIsoDate, "2023-05-26"));
  CHECK_FALSE(MatchesClass(TokenClass::kIsoDate, "2023-13-26"));
  CHECK(MatchesClass(TokenClass::kDecade, "1990s"));
  CHECK(MatchesClass(TokenClass::kDecade, "90s"));
  for (auto c : {TokenClass::kYear, TokenClass::kDay, TokenClass::kNum, TokenClass::kHour,
                 TokenClass::kTime, TokenClass::kIsoDate, TokenClass::kDecade}) {
    CHECK(ParseTokenClass(TokenClassName(c)) == c);
  }
  CHECK_FALSE(ParseTokenClass("nope").has_value());
}

TEST_CASE("rule file parsing") {
  const RuleSet r = RuleSet::Parse(
      "teigo-rules 1\n"
      "language en\n"
      "# comment\n"
      "set unit Day week\n"
      "rule span 10 @num $unit+s|$unit ago?\n");
  CHECK(r.language() == "en");
  REQUIRE(r.rules().size() == 1);
  CHECK(r.sets().at("unit").count("day") == 1);
  const auto& el = r.rules()[0].pattern;
  REQUIRE(el.size() == 3);
  CHECK(el[1].alternatives.size() == 2);
  CHECK(el[1].alternatives[0].size() == 2);
  CHECK(el[2].optional);

  CHECK(KindOf([] { RuleSet::Parse("language en\n"); }) == ErrorKind::kFormat);
  CHECK(KindOf([] { RuleSet::Parse("teigo-rules 1\nrule a 1 x\n"); }) == ErrorKind::kFormat);
  CHECK(KindOf([] { RuleSet::Parse("teigo-rules 1\nlanguage en\nrule a 1 $missing\n"); }) ==
        ErrorKind::kFormat);
  CHECK(KindOf([] { RuleSet::Parse("teigo-rules 1\nlanguage en\nrule a x word\n"); }) ==
        ErrorKind::kFormat);
  CHECK(KindOf([] { RuleSet::Parse("teigo-rules 1\nlanguage en\nrule a 1 @bogus\n"); }) ==
        ErrorKind::kFormat);
  CHECK(KindOf([] {
          RuleSet::Parse("teigo-rules 1\nlanguage en\nrule a 1 x\nrule a 2 y\n");
        }) == ErrorKind::kFormat);
  CHECK(KindOf([] { RuleSet::Parse("teigo-rules 1\nlanguage en\nfoo bar\n"); }) ==
        ErrorKind::kFormat);
  CHECK(KindOf([] { RuleSet::Load("/nonexistent.rules"); }) == ErrorKind::kIo);
  CHECK(KindOf([] { RuleSet::Builtin("xx"); }) == ErrorKind::kLanguage);
  CHECK(RuleSet::BuiltinLanguages() == std::vector<std::string>{"en", "pt"});
}

TEST_CASE("overlap resolution prefers priority, then length, then earlier start") {
  const RuleSet r = RuleSet::Parse(
      "teigo-rules 1\nlanguage en\n"
      "rule short 5 a b\n"
      "rule long 5 a b c\n"
      "rule high 9 c d\n"
      "rule first 1 x y\n"
      "rule second 1 y z\n");
  Tokenizer tok;
  auto match = [&](std::string_view text) {
    std::string out;
    for (const auto& s : r.Match(TokenizeText(tok, text).tokens)) {
      out += "[" + std::to_string(s.first) + "," + std::to_string(s.last) + "]";
    }
    return out;
  };
  CHECK(match("a b c") == "[0,2]");
  CHECK(match("a b c d") == "[0,1][2,3]");
  CHECK(match("x y z") == "[0,1]");
}

TEST_CASE("annotation is independent of the creation time and checks language") {
  const RuleSet rules = RuleSet::Builtin("en");
  const std::string text = "Next year the plant closes, as announced on 3 March.";
  CHECK(Annotate(text, Date{2020, 1, 1}, rules) == Annotate(text, std::nullopt, rules));
  Document doc{"d", text, std::nullopt, "pt"};
  CHECK(KindOf([&] { AnnotateDocument(doc, rules); }) == ErrorKind::kLanguage);
  doc.language = "en";
  CHECK(AnnotateDocument(doc, rules).size() == 2);

  const RuleSet pt = RuleSet::Builtin("pt");
  CHECK(pt.language() == "pt");
  const auto spans = Annotate("A reunião foi em 26 de maio de 2023.", std::nullopt, pt);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].surface == "26 de maio de 2023");
}

TEST_CASE("document filter") {
  CHECK(ContainsHtmlTag("a <div> b"));
  CHECK(ContainsHtmlTag("x</p>"));
  CHECK_FALSE(ContainsHtmlTag("3 < 4 and 5 > 2"));
  CHECK_FALSE(ContainsHtmlTag("a <div"));
  const std::string dct = "2023-05-26";
  CHECK(FilterDocument({"a", "see <div>here</div>", dct, ""}) == FilterOutcome::kHtml);
  CHECK(FilterDocument({"a", "On Monday.", std::string("not-a-date"), ""}) ==
        FilterOutcome::kBadDct);
  CHECK(FilterDocument({"a", "On Monday.", std::nullopt, ""}) == FilterOutcome::kBadDct);
  CHECK(FilterDocument({"a", "On Monday.", dct, ""}) == FilterOutcome::kKeep);
  CHECK(FilterDocument({"a", "On Monday.", std::string("2023-05-26T08:15:00"), ""}) ==
        FilterOutcome::kKeep);
  CHECK(FilterDocument({"a", "bad \xff <div>", std::string("nope"), ""}) ==
        FilterOutcome::kNonUtf8);
  CHECK(std::string(FilterOutcomeName(FilterOutcome::kBadDct)) == "bad_dct");
}

TEST_CASE("ten-document stream gives the expected filter report") {
  const WeakCorpusResult r = BuildWeakCorpus(FromVector(TenDocuments()),
                                             RuleAnnotator(RuleSet::Builtin("en")), {});
  const FilterReport expected{4, 0, 1, 2, 3};
  CHECK(r.report == expected);
  CHECK(r.report.total() == 10);
  CHECK_FALSE(r.budget_exhausted);
  REQUIRE(r.corpus.documents.size() == 4);
  std::vector<std::string> ids;
  for (const auto& d : r.corpus.documents) {
    ids.push_back(d.id);
    CHECK(d.provenance == Provenance::kWeak);
    CHECK(d.dct == Date{2023, 5, 26});
    CHECK_FALSE(d.spans.empty());
  }
  CHECK(ids == std::vector<std::string>{"a", "d", "h", "j"});
  CHECK(FilterReportJson(r.report).find("\"schema_version\"") != std::string::npos);
}

TEST_CASE("weak corpus conservation and determinism") {
  NewsStreamOptions o;
  o.seed = 11;
  o.n_docs = 300;
  o.non_utf8_rate = 0.05;
  o.bad_dct_rate = 0.05;
  o.html_rate = 0.05;
  const Annotator teacher = RuleAnnotator(RuleSet::Builtin("en"));
  const WeakCorpusResult a = BuildWeakCorpus(NewsStream(o), teacher, {});
  const WeakCorpusResult b = BuildWeakCorpus(NewsStream(o), teacher, {});
  CHECK(a.report.total() == 300);
  CHECK(a.report.kept == a.corpus.documents.size());
  CHECK(a.report.rejected_non_utf8 > 0);
  CHECK(a.report.rejected_bad_dct > 0);
  CHECK(a.report.rejected_html > 0);
  CHECK(a.report == b.report);
  REQUIRE(a.corpus.documents.size() == b.corpus.documents.size());
  for (size_t i = 0; i < a.corpus.documents.size(); ++i) {
    CHECK(WriteJsonl(a.corpus.documents[i]) == WriteJsonl(b.corpus.documents[i]));
  }
  ValidateCorpus(a.corpus);
}

TEST_CASE("the budget is checked before each pull") {
  const Annotator teacher = RuleAnnotator(RuleSet::Builtin("en"));
  CHECK(KindOf([&] {
          BuildWeakCorpus(FromVector({}), teacher, {.budget = std::chrono::nanoseconds(0)});
        }) == ErrorKind::kUsage);

  size_t pulled = 0;
  RawStream slow = [&]() -> std::optional<RawDocument> {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    return RawDocument{"s" + std::to_string(pulled++), "It rained last year.",
                       std::string("2023-01-01"), ""};
  };
  const WeakCorpusResult r =
      BuildWeakCorpus(slow, teacher, {.budget = std::chrono::milliseconds(70)});
  CHECK(r.budget_exhausted);
  CHECK(r.report.total() == pulled);
  CHECK(pulled >= 1);
  CHECK(pulled <= 5);
  CHECK(r.report.kept == pulled);
}
