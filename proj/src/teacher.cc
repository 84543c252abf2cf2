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

#include "teigo/teacher.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "teigo/error.h"
#include "teigo/unicode.h"

namespace teigo {

extern const char kBuiltinRulesEn[];
extern const char kBuiltinRulesPt[];

namespace {

constexpr std::string_view kRulesHeader = "teigo-rules 1";

bool AllDigits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int ToInt(std::string_view digits) {
  int v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

bool InRange(std::string_view digits, size_t max_len, int lo, int hi) {
  if (!AllDigits(digits) || digits.size() > max_len) return false;
  const int v = ToInt(digits);
  return v >= lo && v <= hi;
}

bool IEquals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
  }
  return true;
}

bool EndsWithMeridiem(std::string_view s, std::string_view* rest) {
  if (s.size() < 3) return false;
  const std::string_view tail = s.substr(s.size() - 2);
  if (!IEquals(tail, "am") && !IEquals(tail, "pm")) return false;
  *rest = s.substr(0, s.size() - 2);
  return true;
}

bool IsClockTime(std::string_view s) {
  std::string_view core = s;
  std::string_view bare;
  if (EndsWithMeridiem(s, &bare)) {
    if (InRange(bare, 2, 1, 12)) return true;  // "5pm"
    core = bare;
  }
  const size_t colon = core.find(':');
  if (colon == std::string_view::npos) return false;
  if (!InRange(core.substr(0, colon), 2, 0, 24)) return false;
  std::string_view rest = core.substr(colon + 1);
  if (rest.size() != 2 && !(rest.size() == 5 && rest[2] == ':')) return false;
  if (!InRange(rest.substr(0, 2), 2, 0, 59)) return false;
  return rest.size() == 2 || InRange(rest.substr(3, 2), 2, 0, 59);
}

std::vector<std::string_view> SplitWords(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

PatternAtom ParseAtom(std::string_view text, size_t line_no) {
  auto fail = [&](std::string_view why) {
    return Error(ErrorKind::kFormat,
                 fmt::format("rules line {}: {} in '{}'", line_no, why, text));
  };
  if (text.empty()) throw fail("empty atom");
  PatternAtom atom;
  if (text[0] == '@') {
    const auto c = ParseTokenClass(text.substr(1));
    if (!c) throw fail("unknown token class");
    atom.kind = PatternAtom::Kind::kClass;
    atom.token_class = *c;
  } else if (text[0] == '$') {
    std::string_view name = text.substr(1);
    if (!name.empty() && name.back() == '!') {
      atom.capitalized = true;
      name.remove_suffix(1);
    }
    if (name.empty()) throw fail("empty set name");
    atom.kind = PatternAtom::Kind::kSet;
    atom.text = std::string(name);
  } else {
    atom.kind = PatternAtom::Kind::kWord;
    atom.text = unicode::ToLowerUtf8(text);
  }
  return atom;
}

PatternElement ParseElement(std::string_view text, size_t line_no) {
  PatternElement element;
  if (text.size() > 1 && text.back() == '?') {
    element.optional = true;
    text.remove_suffix(1);
  }
  for (std::string_view alt : SplitOn(text, '|')) {
    std::vector<PatternAtom> seq;
    for (std::string_view atom : SplitOn(alt, '+')) seq.push_back(ParseAtom(atom, line_no));
    element.alternatives.push_back(std::move(seq));
  }
  return element;
}

struct MatchContext {
  std::span<const Token> tokens;
  std::vector<std::string> lower;
  const std::map<std::string, std::set<std::string>>* sets;
};

bool AtomMatches(const PatternAtom& atom, const MatchContext& ctx, size_t i) {
  const Token& token = ctx.tokens[i];
  switch (atom.kind) {
    case PatternAtom::Kind::kClass:
      return MatchesClass(atom.token_class, token.surface);
    case PatternAtom::Kind::kWord:
      return ctx.lower[i] == atom.text;
    case PatternAtom::Kind::kSet: {
      const auto& set = ctx.sets->at(atom.text);
      if (!set.count(ctx.lower[i])) return false;
      if (!atom.capitalized) return true;
      const std::u32string head = unicode::Decode(token.surface);
      return !head.empty() && unicode::IsUpper(head[0]);
    }
  }
  return false;
}

size_t LongestMatch(const Rule& rule, const MatchContext& ctx, size_t start) {
  const size_t n = ctx.tokens.size();
  std::vector<size_t> positions{start};
  std::vector<size_t> next;
  for (const PatternElement& element : rule.pattern) {
    next.clear();
    for (size_t p : positions) {
      if (element.optional) next.push_back(p);
      for (const auto& seq : element.alternatives) {
        size_t q = p;
        bool ok = true;
        for (const PatternAtom& atom : seq) {
          if (q >= n || !AtomMatches(atom, ctx, q)) {
            ok = false;
            break;
          }
          ++q;
        }
        if (ok) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.empty()) return 0;
    positions.swap(next);
  }
  return positions.back() - start;
}

}  // namespace

std::optional<TokenClass> ParseTokenClass(std::string_view name) {
  if (name == "year") return TokenClass::kYear;
  if (name == "day") return TokenClass::kDay;
  if (name == "num") return TokenClass::kNum;
  if (name == "hour") return TokenClass::kHour;
  if (name == "time") return TokenClass::kTime;
  if (name == "isodate") return TokenClass::kIsoDate;
  if (name == "decade") return TokenClass::kDecade;
  return std::nullopt;
}

const char* TokenClassName(TokenClass c) {
  switch (c) {
    case TokenClass::kYear: return "year";
    case TokenClass::kDay: return "day";
    case TokenClass::kNum: return "num";
    case TokenClass::kHour: return "hour";
    case TokenClass::kTime: return "time";
    case TokenClass::kIsoDate: return "isodate";
    case TokenClass::kDecade: return "decade";
  }
  return "?";
}

bool MatchesClass(TokenClass c, std::string_view s) {
  switch (c) {
    case TokenClass::kYear:
      return s.size() == 4 && InRange(s, 4, 1000, 2999);
    case TokenClass::kDay: {
      if (InRange(s, 2, 1, 31)) return true;
      if (s.size() < 3) return false;
      const std::string_view suffix = s.substr(s.size() - 2);
      if (!IEquals(suffix, "st") && !IEquals(suffix, "nd") && !IEquals(suffix, "rd") &&
          !IEquals(suffix, "th")) {
        return false;
      }
      return InRange(s.substr(0, s.size() - 2), 2, 1, 31);
    }
    case TokenClass::kNum:
      return AllDigits(s);
    case TokenClass::kHour:
      return InRange(s, 2, 1, 12);
    case TokenClass::kTime:
      return IsClockTime(s);
    case TokenClass::kIsoDate:
      return s.size() == 10 && Date::Parse(s).has_value();
    case TokenClass::kDecade:
      if (s.size() == 3) return AllDigits(s.substr(0, 2)) && s[1] == '0' && s[2] == 's';
      if (s.size() == 5) {
        return InRange(s.substr(0, 4), 4, 1000, 2999) && s[3] == '0' && s[4] == 's';
      }
      return false;
  }
  return false;
}

RuleSet RuleSet::Parse(std::string_view text) {
  RuleSet rs;
  std::istringstream in{std::string(text)};
  std::string raw;
  size_t line_no = 0;
  bool header = false;
  std::set<std::string> rule_ids;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::vector<std::string_view> words = SplitWords(line);
    if (words.empty()) continue;
    const std::string_view head = words[0];
    if (!header) {
      if (words.size() != 2 || head != "teigo-rules" || words[1] != "1") {
        throw Error(ErrorKind::kFormat,
                    fmt::format("rules line {}: expected '{}'", line_no, kRulesHeader));
      }
      header = true;
      continue;
    }
    if (head == "language") {
      if (words.size() != 2) {
        throw Error(ErrorKind::kFormat, fmt::format("rules line {}: bad language", line_no));
      }
      rs.language_ = std::string(words[1]);
    } else if (head == "set") {
      if (words.size() < 3) {
        throw Error(ErrorKind::kFormat, fmt::format("rules line {}: empty set", line_no));
      }
      auto& set = rs.sets_[std::string(words[1])];
      for (size_t i = 2; i < words.size(); ++i) set.insert(unicode::ToLowerUtf8(words[i]));
    } else if (head == "rule") {
      if (words.size() < 4) {
        throw Error(ErrorKind::kFormat,
                    fmt::format("rules line {}: rule needs an id, a priority and a pattern",
                                line_no));
      }
      Rule rule;
      rule.id = std::string(words[1]);
      if (!rule_ids.insert(rule.id).second) {
        throw Error(ErrorKind::kFormat,
                    fmt::format("rules line {}: duplicate rule '{}'", line_no, rule.id));
      }
      const std::string prio(words[2]);
      char* end = nullptr;
      const long p = std::strtol(prio.c_str(), &end, 10);
      if (prio.empty() || *end != '\0') {
        throw Error(ErrorKind::kFormat,
                    fmt::format("rules line {}: bad priority '{}'", line_no, prio));
      }
      rule.priority = static_cast<int>(p);
      for (size_t i = 3; i < words.size(); ++i) {
        rule.pattern.push_back(ParseElement(words[i], line_no));
      }
      for (const PatternElement& e : rule.pattern) {
        for (const auto& seq : e.alternatives) {
          for (const PatternAtom& a : seq) {
            if (a.kind == PatternAtom::Kind::kSet && !rs.sets_.count(a.text)) {
              throw Error(ErrorKind::kFormat,
                          fmt::format("rules line {}: undefined set '{}'", line_no, a.text));
            }
          }
        }
      }
      rs.rules_.push_back(std::move(rule));
    } else {
      throw Error(ErrorKind::kFormat,
                  fmt::format("rules line {}: unknown directive '{}'", line_no, head));
    }
  }
  if (!header) throw Error(ErrorKind::kFormat, "rules: missing header");
  if (rs.language_.empty()) throw Error(ErrorKind::kFormat, "rules: missing language line");
  for (Rule& r : rs.rules_) r.language = rs.language_;
  return rs;
}

RuleSet RuleSet::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open rules file '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

RuleSet RuleSet::Builtin(std::string_view language) {
  if (language == "en") return Parse(kBuiltinRulesEn);
  if (language == "pt") return Parse(kBuiltinRulesPt);
  throw Error(ErrorKind::kLanguage, fmt::format("no rules for language '{}'", language));
}

std::vector<std::string> RuleSet::BuiltinLanguages() { return {"en", "pt"}; }

std::vector<TokenSpan> RuleSet::Match(std::span<const Token> tokens) const {
  MatchContext ctx{tokens, {}, &sets_};
  ctx.lower.reserve(tokens.size());
  for (const Token& t : tokens) ctx.lower.push_back(unicode::ToLowerUtf8(t.surface));

  struct Candidate {
    int priority;
    size_t start;
    size_t length;
  };
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < tokens.size(); ++i) {
    for (const Rule& rule : rules_) {
      const size_t len = LongestMatch(rule, ctx, i);
      if (len > 0) candidates.push_back({rule.priority, i, len});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.length != b.length) return a.length > b.length;
    return a.start < b.start;
  });
  std::vector<bool> taken(tokens.size(), false);
  std::vector<TokenSpan> out;
  for (const Candidate& c : candidates) {
    const auto first = taken.begin() + static_cast<std::ptrdiff_t>(c.start);
    if (std::any_of(first, first + static_cast<std::ptrdiff_t>(c.length),
                    [](bool b) { return b; })) {
      continue;
    }
    std::fill(first, first + static_cast<std::ptrdiff_t>(c.length), true);
    out.push_back({c.start, c.start + c.length - 1});
  }
  std::sort(out.begin(), out.end(),
            [](const TokenSpan& a, const TokenSpan& b) { return a.first < b.first; });
  return out;
}

std::vector<TimexSpan> Annotate(std::string_view text, const std::optional<Date>& /*dct*/,
                                const RuleSet& rules) {
  const std::u32string u32 = unicode::Decode(text);
  const Tokenizer tokenizer(TokenizerConfig{TokenizerConfig::kCurrentVersion, rules.language()});
  const std::vector<Token> tokens = tokenizer.Tokenize(std::u32string_view(u32));
  std::vector<TimexSpan> out;
  for (const TokenSpan& span : rules.Match(tokens)) {
    out.push_back(ToCharSpan(span, tokens, u32));
  }
  return out;
}

std::vector<TimexSpan> AnnotateDocument(const Document& doc, const RuleSet& rules) {
  if (doc.language != rules.language()) {
    throw Error(ErrorKind::kLanguage,
                fmt::format("document '{}' is '{}' but the rules are '{}'", doc.id,
                            doc.language, rules.language()));
  }
  return Annotate(doc.text, doc.dct, rules);
}

const char* FilterOutcomeName(FilterOutcome outcome) {
  switch (outcome) {
    case FilterOutcome::kKeep: return "keep";
    case FilterOutcome::kNonUtf8: return "non_utf8";
    case FilterOutcome::kBadDct: return "bad_dct";
    case FilterOutcome::kHtml: return "html";
  }
  return "?";
}

bool ContainsHtmlTag(std::string_view text) {
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  for (size_t i = text.find('<'); i != std::string_view::npos; i = text.find('<', i + 1)) {
    size_t j = i + 1;
    if (j < text.size() && text[j] == '/') ++j;
    if (j < text.size() && is_alpha(text[j]) &&
        text.find('>', j + 1) != std::string_view::npos) {
      return true;
    }
  }
  return false;
}

FilterOutcome FilterDocument(const RawDocument& raw) {
  if (!unicode::IsValidUtf8(raw.text)) return FilterOutcome::kNonUtf8;
  if (!raw.dct || !Date::Parse(*raw.dct)) return FilterOutcome::kBadDct;
  if (ContainsHtmlTag(raw.text)) return FilterOutcome::kHtml;
  return FilterOutcome::kKeep;
}

std::string FilterReportJson(const FilterReport& r) {
  const nlohmann::json j = {{"schema_version", 1},
                            {"consumed", r.total()},
                            {"kept", r.kept},
                            {"rejected_non_utf8", r.rejected_non_utf8},
                            {"rejected_bad_dct", r.rejected_bad_dct},
                            {"rejected_html", r.rejected_html},
                            {"rejected_zero_timex", r.rejected_zero_timex}};
  return j.dump(2);
}

Annotator RuleAnnotator(RuleSet rules) {
  auto shared = std::make_shared<const RuleSet>(std::move(rules));
  return [shared](const std::string& text, const Date& dct) {
    return Annotate(text, dct, *shared);
  };
}

WeakCorpusResult BuildWeakCorpus(const RawStream& stream, const Annotator& annotator,
                                 const WeakCorpusOptions& options) {
  if (options.budget.count() <= 0) throw Error(ErrorKind::kUsage, "budget must be positive");
  WeakCorpusResult result;
  result.corpus.name = options.name;
  result.corpus.language = options.language;
  FilterReport& report = result.report;
  const auto deadline = std::chrono::steady_clock::now() + options.budget;
  while (true) {
    if (std::chrono::steady_clock::now() >= deadline) {
      result.budget_exhausted = true;
      break;
    }
    std::optional<RawDocument> raw = stream();
    if (!raw) break;
    switch (FilterDocument(*raw)) {
      case FilterOutcome::kNonUtf8: ++report.rejected_non_utf8; continue;
      case FilterOutcome::kBadDct: ++report.rejected_bad_dct; continue;
      case FilterOutcome::kHtml: ++report.rejected_html; continue;
      case FilterOutcome::kKeep: break;
    }
    Document doc;
    doc.id = raw->id.empty() ? fmt::format("{}-{}", options.name, report.total() + 1) : raw->id;
    doc.text = std::move(raw->text);
    doc.dct = Date::Parse(*raw->dct);
    doc.language = options.language;
    doc.provenance = Provenance::kWeak;
    doc.spans = annotator(doc.text, *doc.dct);
    NormalizeSpans(&doc);
    if (doc.spans.empty()) {
      ++report.rejected_zero_timex;
      continue;
    }
    ++report.kept;
    result.corpus.documents.push_back(std::move(doc));
  }
  return result;
}

}  // namespace teigo
