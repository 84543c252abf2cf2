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

#include "teigo/synthetic.h"

#include <string_view>

#include <fmt/format.h>

#include "teigo/error.h"
#include "teigo/rng.h"
#include "teigo/text.h"
#include "teigo/unicode.h"

namespace teigo {
namespace {

using Words = std::vector<std::string_view>;

const Words kMonths = {"January", "February", "March",     "April",   "May",      "June",
                       "July",    "August",   "September", "October", "November", "December"};
const Words kWeekdays = {"Monday", "Tuesday", "Wednesday", "Thursday",
                         "Friday", "Saturday", "Sunday"};
const Words kNumberWords = {"two", "three", "four", "five", "six", "seven", "eight", "ten"};
const Words kPeople = {"Maria Silva", "John Carter", "Ana Costa", "Peter Novak", "Li Wei",
                       "Sarah Moore", "David Klein", "Elena Petrova", "James Wright",
                       "Fatima Haddad", "José Álvarez", "Jürgen Weiß"};
const Words kOrgs = {"the ministry", "the council", "the central bank", "the union",
                     "the company", "the university", "the hospital", "the federation",
                     "the court", "the agency", "the board", "the police"};
const Words kCities = {"Lisbon", "Porto", "Boston", "Berlin", "Madrid", "Chicago", "Rome",
                       "Oslo", "Denver", "Leeds", "São Paulo", "Zürich"};
const Words kThings = {"budget", "report", "contract", "proposal", "bridge", "festival",
                       "election", "merger", "strike", "trial", "vaccine", "museum"};

std::string_view PickWord(Rng& rng, const Words& words) { return words[rng.Below(words.size())]; }

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

int DaysIn(int month, int year) {
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && ((year % 4 == 0 && year % 100 != 0) || year % 400 == 0)) return 29;
  return kDays[month - 1];
}

struct RandomDate {
  int year, month, day;
};

RandomDate PickDate(Rng& rng) {
  RandomDate d;
  d.year = 1950 + static_cast<int>(rng.Below(76));
  d.month = 1 + static_cast<int>(rng.Below(12));
  d.day = 1 + static_cast<int>(rng.Below(static_cast<uint64_t>(DaysIn(d.month, d.year))));
  return d;
}

std::string Ordinal(int day) {
  const char* suffix = "th";
  if (day % 10 == 1 && day != 11) suffix = "st";
  if (day % 10 == 2 && day != 12) suffix = "nd";
  if (day % 10 == 3 && day != 13) suffix = "rd";
  return fmt::format("{}{}", day, suffix);
}

std::string_view MonthName(int month) { return kMonths[static_cast<size_t>(month - 1)]; }

std::string SmallCount(Rng& rng) {
  if (rng.Bernoulli(0.5)) return std::string(PickWord(rng, kNumberWords));
  return fmt::format("{}", 2 + rng.Below(29));
}

// A temporal expression and the preposition that introduces it ("" when
// it stands alone).
struct Timex {
  std::string preposition;
  std::string text;
};

Timex TemplateTimex(Rng& rng, size_t pattern) {
  const RandomDate d = PickDate(rng);
  switch (pattern) {
    case 0: return {"on", fmt::format("{} {} {}", d.day, MonthName(d.month), d.year)};
    case 1: return {"on", fmt::format("{} {}, {}", MonthName(d.month), d.day, d.year)};
    case 2: return {"on", fmt::format("{} of {} {}", d.day, MonthName(d.month), d.year)};
    case 3: return {"on", fmt::format("{:04d}-{:02d}-{:02d}", d.year, d.month, d.day)};
    case 4: return {"in", fmt::format("{} {}", MonthName(d.month), d.year)};
    case 5: return {"in", fmt::format("{}", d.year)};
    case 6: return {"on", std::string(PickWord(rng, kWeekdays))};
    case 7: return {"", std::string(PickWord(rng, {"yesterday", "today", "tomorrow"}))};
    case 8:
      return {"", fmt::format("{} {}", PickWord(rng, {"last", "next", "this"}),
                              PickWord(rng, {"week", "month", "year"}))};
    default:
      return {"", fmt::format("{} {} ago", SmallCount(rng),
                              PickWord(rng, {"days", "weeks", "months", "years"}))};
  }
}

Timex NewsTimex(Rng& rng) {
  const RandomDate d = PickDate(rng);
  const std::string_view month = MonthName(d.month);
  switch (rng.Below(20)) {
    case 0: return {"on", fmt::format("{} {} {}", d.day, month, d.year)};
    case 1: return {"on", fmt::format("{} {}, {}", month, d.day, d.year)};
    case 2:
      return {"on", fmt::format("{}, {} {}, {}", PickWord(rng, kWeekdays), month, d.day, d.year)};
    case 3: return {"on", fmt::format("the {} of {} {}", Ordinal(d.day), month, d.year)};
    case 4: return {"on", fmt::format("{:04d}-{:02d}-{:02d}", d.year, d.month, d.day)};
    case 5: return {"in", fmt::format("{} {}", month, d.year)};
    case 6:
      return {"in", rng.Bernoulli(0.5) ? std::string(month)
                                       : fmt::format("{} {}",
                                                     PickWord(rng, {"early", "late", "mid"}),
                                                     month)};
    case 7: return {std::string(PickWord(rng, {"in", "since", "by"})), fmt::format("{}", d.year)};
    case 8: return {"in", fmt::format("the {}0s", d.year / 10)};
    case 9:
      return {"on", fmt::format("{}{}", PickWord(rng, kWeekdays),
                                rng.Bernoulli(0.3) ? " morning" : "")};
    case 10:
      return {"", fmt::format("{} {}", PickWord(rng, {"last", "next", "this"}),
                              PickWord(rng, kWeekdays))};
    case 11:
      return {"", std::string(PickWord(rng, {"yesterday", "today", "tomorrow", "tonight",
                                             "yesterday morning", "tomorrow afternoon"}))};
    case 12:
      return {"", fmt::format("{} {}", PickWord(rng, {"last", "next", "this", "early next"}),
                              PickWord(rng, {"week", "month", "year", "morning", "summer",
                                             "weekend", "quarter"}))};
    case 13:
      return {"", fmt::format("{} {} ago", SmallCount(rng),
                              PickWord(rng, {"days", "weeks", "months", "years"}))};
    case 14:
      return {"for", fmt::format("{} {}", SmallCount(rng),
                                 PickWord(rng, {"hours", "days", "weeks", "months", "years"}))};
    case 15:
      return {"over the", fmt::format("past {} {}", SmallCount(rng),
                                      PickWord(rng, {"days", "weeks", "months", "years"}))};
    case 16:
      return {"at", fmt::format("{}:{:02d}{}", 1 + rng.Below(12), 5 * rng.Below(12),
                                rng.Bernoulli(0.5) ? PickWord(rng, {" am", " pm"}) : "")};
    case 17:
      return {"at", rng.Bernoulli(0.5) ? fmt::format("{} pm", 1 + rng.Below(11))
                                       : std::string(PickWord(rng, {"noon", "midnight"}))};
    case 18: return {"", fmt::format("a {} ago", PickWord(rng, {"week", "month", "year"}))};
    default:
      return {"in", fmt::format("{} {}", PickWord(rng, {"spring", "summer", "autumn", "winter"}),
                                d.year)};
  }
}

// Builds a document while tracking character offsets of the inserted
// temporal expressions.
class TextBuilder {
 public:
  void Append(std::string_view piece) {
    text_ += piece;
    length_ += unicode::Length(piece);
  }
  void AppendTimex(std::string_view timex) {
    const size_t start = length_;
    Append(timex);
    spans_.push_back({start, length_, std::string(timex)});
  }
  void AppendPhrase(const Timex& t, bool sentence_start) {
    if (t.preposition.empty()) {
      AppendTimex(sentence_start ? Capitalize(t.text) : t.text);
    } else {
      Append(sentence_start ? Capitalize(t.preposition) : t.preposition);
      Append(" ");
      AppendTimex(t.text);
    }
  }
  std::string& text() { return text_; }
  std::vector<TimexSpan>& spans() { return spans_; }

 private:
  std::string text_;
  size_t length_ = 0;
  std::vector<TimexSpan> spans_;
};

// Frame pieces: "{T}" is the temporal phrase, "{P}" a person, "{O}" an
// organisation, "{C}" a city, "{X}" a thing and "{N}" a small number.
const Words kTimexFrames = {
    "{O} approved the {X} {T}.",
    "{P} arrived in {C} {T}.",
    "{T}, {O} announced a new {X}.",
    "The {X} was signed {T} in {C}.",
    "{P} said {T} that the {X} would go ahead.",
    "Prices in {C} rose {N} percent {T}.",
    "{O} will review the {X} {T}, {P} said.",
    "{T} the {X} drew {N} visitors to {C}.",
    "The {X} that {O} presented {T} was rejected.",
    "Talks between {O} and {P} ended {T}.",
};
const Words kPlainFrames = {
    "{N} people attended the {X} in {C}.",
    "{P} spoke to {N} reporters about the {X}.",
    "{O} may delay the {X} again.",
    "The {X} costs {N} million euros, {P} said.",
    "{O} hired {N} new staff in {C}.",
    "Officials in {C} expect the {X} to grow.",
    "{P} won {N} of the {N} votes cast.",
    "The team scored {N} points in {C}.",
};

void FillFrame(Rng& rng, std::string_view frame, const std::optional<Timex>& timex,
               TextBuilder* out) {
  const bool at_start = frame.substr(0, 3) == "{T}";
  for (size_t i = 0; i < frame.size();) {
    if (frame[i] == '{' && i + 2 < frame.size() && frame[i + 2] == '}') {
      const bool first = i == 0;
      switch (frame[i + 1]) {
        case 'T': out->AppendPhrase(*timex, at_start); break;
        case 'P': out->Append(PickWord(rng, kPeople)); break;
        case 'O': {
          const std::string org(PickWord(rng, kOrgs));
          out->Append(first ? Capitalize(org) : org);
          break;
        }
        case 'C': out->Append(PickWord(rng, kCities)); break;
        case 'X': out->Append(PickWord(rng, kThings)); break;
        case 'N': out->Append(fmt::format("{}", 2 + rng.Below(898))); break;
        default: throw Error(ErrorKind::kInternal, "bad frame slot");
      }
      i += 3;
    } else {
      out->Append(frame.substr(i, 1));
      ++i;
    }
  }
}

}  // namespace

std::vector<std::string> TemplatePatternNames() {
  return {"day-month-year", "month-day-year", "day-of-month-year", "iso-date", "month-year",
          "year",           "weekday",        "relative-day",      "direction-unit",
          "units-ago"};
}

Corpus TemplateCorpus(size_t n_docs, uint64_t seed) {
  Rng rng(seed);
  Corpus corpus;
  corpus.name = "template";
  corpus.language = "en";
  for (size_t d = 0; d < n_docs; ++d) {
    TextBuilder b;
    const size_t n_sentences = 2 + rng.Below(3);
    for (size_t s = 0; s < n_sentences; ++s) {
      if (s > 0) b.Append(" ");
      if (rng.Bernoulli(0.7)) {
        const Timex t = TemplateTimex(rng, rng.Below(10));
        FillFrame(rng, PickWord(rng, kTimexFrames), t, &b);
      } else {
        FillFrame(rng, PickWord(rng, kPlainFrames), std::nullopt, &b);
      }
    }
    Document doc;
    doc.id = fmt::format("template-{:04d}", d);
    doc.text = std::move(b.text());
    doc.spans = std::move(b.spans());
    const RandomDate dct = PickDate(rng);
    doc.dct = Date{dct.year, dct.month, dct.day};
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

NewsGenerator::NewsGenerator(NewsStreamOptions options)
    : options_(std::move(options)), rng_(options_.seed) {
  if (options_.min_sentences == 0 || options_.max_sentences < options_.min_sentences) {
    throw Error(ErrorKind::kUsage, "news stream: bad sentence range");
  }
}

std::optional<RawDocument> NewsGenerator::Next() {
  if (produced_ >= options_.n_docs) return std::nullopt;
  ++produced_;
  const bool non_utf8 = rng_.Bernoulli(options_.non_utf8_rate);
  const bool bad_dct = rng_.Bernoulli(options_.bad_dct_rate);
  const bool html = rng_.Bernoulli(options_.html_rate);

  TextBuilder b;
  const size_t n_sentences =
      options_.min_sentences + rng_.Below(options_.max_sentences - options_.min_sentences + 1);
  for (size_t s = 0; s < n_sentences; ++s) {
    if (s > 0) b.Append(" ");
    if (rng_.Bernoulli(0.65)) {
      FillFrame(rng_, PickWord(rng_, kTimexFrames), NewsTimex(rng_), &b);
    } else {
      FillFrame(rng_, PickWord(rng_, kPlainFrames), std::nullopt, &b);
    }
  }
  RawDocument raw;
  raw.id = fmt::format("{}-{:06d}", options_.id_prefix, produced_);
  raw.text = std::move(b.text());
  if (html) raw.text = "<p>" + raw.text + "</p>";
  if (non_utf8) raw.text += " \xff\xfe";
  const RandomDate dct = PickDate(rng_);
  if (bad_dct) {
    if (rng_.Bernoulli(0.5)) raw.dct = fmt::format("{}/{}/{}", dct.day, dct.month, dct.year);
  } else {
    raw.dct = fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:00", dct.year, dct.month, dct.day,
                          rng_.Below(24), rng_.Below(60));
  }
  raw.fetched_at = fmt::format("{:04d}-{:02d}-{:02d}", dct.year, dct.month, dct.day);
  return raw;
}

RawStream NewsStream(NewsStreamOptions options) {
  auto generator = std::make_shared<NewsGenerator>(std::move(options));
  return [generator] { return generator->Next(); };
}

std::string SyntheticSentence(size_t n_tokens, uint64_t seed) {
  if (n_tokens < 2) throw Error(ErrorKind::kUsage, "synthetic sentence needs >= 2 tokens");
  Rng rng(seed);
  const Tokenizer tokenizer;
  TextBuilder b;
  size_t count = 0;
  while (count < n_tokens) {
    TextBuilder piece;
    FillFrame(rng, PickWord(rng, kTimexFrames), NewsTimex(rng), &piece);
    std::string& text = piece.text();
    if (!text.empty() && text.back() == '.') text.pop_back();
    if (count > 0) b.Append(" and ");
    b.Append(text);
    count = tokenizer.Tokenize(b.text()).size();
  }
  std::vector<Token> tokens = tokenizer.Tokenize(b.text());
  const std::u32string u32 = unicode::Decode(b.text());
  return unicode::Encode(std::u32string_view(u32).substr(0, tokens[n_tokens - 2].end)) + ".";
}

}  // namespace teigo
