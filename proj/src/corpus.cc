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

#include "teigo/corpus.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "teigo/error.h"
#include "teigo/rng.h"
#include "teigo/text.h"
#include "teigo/unicode.h"

namespace teigo {
namespace {

using json = nlohmann::json;

bool IsLeapYear(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int DaysInMonth(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && IsLeapYear(y) ? 29 : kDays[m - 1];
}

bool ParseDigits(std::string_view s, int* out) {
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  *out = v;
  return !s.empty();
}

// Rounds n * 0.2 half-up.
size_t FifthHalfUp(size_t n) { return (2 * n + 5) / 10; }

}  // namespace

std::optional<Date> Date::Parse(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  Date d;
  if (!ParseDigits(text.substr(0, 4), &d.year) ||
      !ParseDigits(text.substr(5, 2), &d.month) ||
      !ParseDigits(text.substr(8, 2), &d.day)) {
    return std::nullopt;
  }
  if (d.year < 1 || d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > DaysInMonth(d.year, d.month)) {
    return std::nullopt;
  }
  if (text.size() > 10) {
    // Time of day: HH:MM with optional :SS and anything after.
    const std::string_view rest = text.substr(11);
    int hh, mm;
    if (rest.size() < 5 || rest[2] != ':' || !ParseDigits(rest.substr(0, 2), &hh) ||
        !ParseDigits(rest.substr(3, 2), &mm) || hh > 23 || mm > 59) {
      return std::nullopt;
    }
  }
  return d;
}

std::string Date::ToString() const {
  return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day);
}

const char* ProvenanceName(Provenance p) {
  return p == Provenance::kGold ? "gold" : "weak";
}

const char* DomainName(Domain d) {
  return d == Domain::kNews ? "news" : "narrative";
}

size_t Document::length() const { return unicode::Length(text); }

size_t NormalizeSpans(Document* doc) {
  const size_t n = doc->length();
  for (const TimexSpan& s : doc->spans) {
    if (s.start >= s.end || s.end > n) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("document '{}': span [{}, {}) invalid for text of "
                              "length {}",
                              doc->id, s.start, s.end, n));
    }
  }
  std::vector<TimexSpan> by_priority = doc->spans;
  std::stable_sort(by_priority.begin(), by_priority.end(),
                   [](const TimexSpan& a, const TimexSpan& b) {
                     if (a.length() != b.length()) return a.length() > b.length();
                     return a.start < b.start;
                   });
  std::vector<TimexSpan> kept;
  size_t dropped = 0;
  for (TimexSpan& s : by_priority) {
    const bool clash = std::any_of(kept.begin(), kept.end(),
                                   [&](const TimexSpan& k) { return k.Overlaps(s); });
    if (clash) {
      spdlog::warn("document '{}': dropping overlapping span [{}, {})", doc->id,
                   s.start, s.end);
      ++dropped;
      continue;
    }
    kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(),
            [](const TimexSpan& a, const TimexSpan& b) { return a.start < b.start; });
  const std::u32string text = unicode::Decode(doc->text);
  for (TimexSpan& s : kept) {
    s.surface = unicode::Encode(std::u32string_view(text).substr(s.start, s.length()));
  }
  doc->spans = std::move(kept);
  return dropped;
}

void ValidateCorpus(const Corpus& corpus) {
  std::set<std::string_view> ids;
  for (const Document& doc : corpus.documents) {
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("corpus '{}': duplicate document id '{}'",
                              corpus.name, doc.id));
    }
    const size_t n = doc.length();
    for (size_t i = 0; i < doc.spans.size(); ++i) {
      const TimexSpan& s = doc.spans[i];
      if (s.start >= s.end || s.end > n ||
          (i > 0 && doc.spans[i - 1].end > s.start)) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("document '{}': span [{}, {}) violates span "
                                "invariants",
                                doc.id, s.start, s.end));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// JSONL

Document ReadJsonl(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, fmt::format("JSONL: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorKind::kFormat, "JSONL: line is not an object");
  auto text = j.find("text");
  if (text == j.end() || !text->is_string()) {
    throw Error(ErrorKind::kFormat, "JSONL: missing string field 'text'");
  }
  Document doc;
  doc.text = text->get<std::string>();
  if (auto id = j.find("id"); id != j.end()) {
    if (!id->is_string()) throw Error(ErrorKind::kFormat, "JSONL: 'id' must be a string");
    doc.id = id->get<std::string>();
  }
  if (auto lang = j.find("language"); lang != j.end()) {
    if (!lang->is_string()) {
      throw Error(ErrorKind::kFormat, "JSONL: 'language' must be a string");
    }
    doc.language = lang->get<std::string>();
  }
  if (auto dct = j.find("dct"); dct != j.end() && !dct->is_null()) {
    if (!dct->is_string()) throw Error(ErrorKind::kFormat, "JSONL: 'dct' must be a string");
    doc.dct = Date::Parse(dct->get<std::string>());
    if (!doc.dct) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("JSONL: unparseable dct '{}'", dct->get<std::string>()));
    }
  }
  if (auto prov = j.find("provenance"); prov != j.end()) {
    const std::string p = prov->is_string() ? prov->get<std::string>() : "";
    if (p == "gold") doc.provenance = Provenance::kGold;
    else if (p == "weak") doc.provenance = Provenance::kWeak;
    else throw Error(ErrorKind::kFormat, "JSONL: provenance must be gold or weak");
  }
  if (auto domain = j.find("domain"); domain != j.end()) {
    const std::string d = domain->is_string() ? domain->get<std::string>() : "";
    if (d == "news") doc.domain = Domain::kNews;
    else if (d == "narrative") doc.domain = Domain::kNarrative;
    else throw Error(ErrorKind::kFormat, "JSONL: domain must be news or narrative");
  }
  auto spans = j.find("spans");
  if (spans != j.end()) {
    if (!spans->is_array()) throw Error(ErrorKind::kFormat, "JSONL: 'spans' must be an array");
    const size_t n = doc.length();
    for (const json& s : *spans) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
          !s[1].is_number_integer()) {
        throw Error(ErrorKind::kFormat,
                    fmt::format("JSONL: span {} is not [start, end]", s.dump()));
      }
      const int64_t start = s[0].get<int64_t>();
      const int64_t end = s[1].get<int64_t>();
      if (start < 0 || start >= end || static_cast<size_t>(end) > n) {
        throw Error(ErrorKind::kValidation,
                    fmt::format("JSONL: span [{}, {}] invalid for text of length {}",
                                start, end, n));
      }
      doc.spans.push_back({static_cast<size_t>(start), static_cast<size_t>(end), {}});
    }
  }
  NormalizeSpans(&doc);
  return doc;
}

std::string WriteJsonl(const Document& doc) {
  json j = json::object();
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["language"] = doc.language;
  j["provenance"] = ProvenanceName(doc.provenance);
  if (doc.dct) j["dct"] = doc.dct->ToString();
  if (doc.domain != Domain::kNews) j["domain"] = DomainName(doc.domain);
  json spans = json::array();
  for (const TimexSpan& s : doc.spans) spans.push_back({s.start, s.end});
  j["spans"] = std::move(spans);
  return j.dump();
}

Corpus LoadCorpus(const std::string& path, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open corpus '{}'", path));
  Corpus corpus;
  corpus.name = name.empty() ? std::filesystem::path(path).stem().string() : name;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Document doc;
    try {
      doc = ReadJsonl(line);
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("{}:{}: {}", path, line_no, e.what()));
    }
    if (doc.id.empty()) doc.id = fmt::format("{}-{}", corpus.name, line_no);
    corpus.documents.push_back(std::move(doc));
  }
  if (!corpus.documents.empty()) corpus.language = corpus.documents.front().language;
  ValidateCorpus(corpus);
  return corpus;
}

void SaveCorpus(const Corpus& corpus, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", path));
    for (const Document& doc : corpus.documents) out << WriteJsonl(doc) << '\n';
    if (!out) throw Error(ErrorKind::kIo, fmt::format("write failed for '{}'", path));
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Splitting and mixing

const char* PartitionName(Partition p) {
  switch (p) {
    case Partition::kTrain: return "train";
    case Partition::kValidation: return "validation";
    case Partition::kTest: return "test";
  }
  return "?";
}

size_t SplitAssignment::Count(Partition p) const {
  return static_cast<size_t>(std::count_if(
      assignment.begin(), assignment.end(),
      [p](const auto& entry) { return entry.second == p; }));
}

SplitAssignment SplitCorpus(const Corpus& corpus, uint64_t seed) {
  if (corpus.documents.empty()) {
    throw Error(ErrorKind::kValidation,
                fmt::format("cannot split empty corpus '{}'", corpus.name));
  }
  const size_t n = corpus.documents.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(order);

  const size_t n_test = FifthHalfUp(n);
  const size_t n_val = FifthHalfUp(n - n_test);
  SplitAssignment split;
  split.seed = seed;
  for (size_t rank = 0; rank < n; ++rank) {
    const Partition p = rank < n_test             ? Partition::kTest
                        : rank < n_test + n_val   ? Partition::kValidation
                                                  : Partition::kTrain;
    if (!split.assignment.emplace(corpus.documents[order[rank]].id, p).second) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("corpus '{}': duplicate document id '{}'",
                              corpus.name, corpus.documents[order[rank]].id));
    }
  }
  return split;
}

std::vector<Document> SelectPartition(const Corpus& corpus,
                                      const SplitAssignment& split,
                                      Partition partition) {
  std::vector<Document> out;
  for (const Document& doc : corpus.documents) {
    auto it = split.assignment.find(doc.id);
    if (it == split.assignment.end()) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("document '{}' missing from split", doc.id));
    }
    if (it->second == partition) out.push_back(doc);
  }
  return out;
}

const char* MixModeName(MixMode m) {
  switch (m) {
    case MixMode::kBase: return "base";
    case MixMode::kCompilation: return "compilation";
    case MixMode::kAll: return "all";
  }
  return "?";
}

std::optional<MixMode> ParseMixMode(std::string_view name) {
  std::string lower = unicode::ToLowerUtf8(name);
  if (lower == "base") return MixMode::kBase;
  if (lower == "compilation") return MixMode::kCompilation;
  if (lower == "all") return MixMode::kAll;
  return std::nullopt;
}

std::vector<std::string> MixSpec::Selected() const {
  std::vector<std::string> names{reference};
  if (mode != MixMode::kBase) {
    names.insert(names.end(), auxiliary.begin(), auxiliary.end());
  }
  if (mode == MixMode::kAll) names.insert(names.end(), weak.begin(), weak.end());
  return names;
}

Corpus Mix(const MixSpec& spec, const std::map<std::string, Corpus>& corpora,
           const std::map<std::string, SplitAssignment>& splits,
           Partition partition) {
  Corpus out;
  out.name = fmt::format("mix-{}", MixModeName(spec.mode));
  bool first = true;
  for (const std::string& name : spec.Selected()) {
    auto corpus = corpora.find(name);
    if (corpus == corpora.end()) {
      throw Error(ErrorKind::kUsage, fmt::format("mix: missing corpus '{}'", name));
    }
    auto split = splits.find(name);
    if (split == splits.end()) {
      throw Error(ErrorKind::kUsage, fmt::format("mix: no split for corpus '{}'", name));
    }
    if (first) {
      out.language = corpus->second.language;
      first = false;
    } else if (corpus->second.language != out.language) {
      throw Error(ErrorKind::kLanguage,
                  fmt::format("mix: corpus '{}' is '{}' but the mix is '{}'", name,
                              corpus->second.language, out.language));
    }
    for (Document& doc : SelectPartition(corpus->second, split->second, partition)) {
      doc.id = name + "/" + doc.id;
      out.documents.push_back(std::move(doc));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

CorpusStats ComputeStats(const Corpus& corpus, const Tokenizer& tokenizer) {
  CorpusStats stats;
  for (const Document& doc : corpus.documents) {
    const std::vector<Token> tokens = tokenizer.Tokenize(doc.text);
    ++stats.n_docs;
    stats.n_tokens += tokens.size();
    stats.n_sentences += SplitSentences(tokens).size();
    stats.n_timexs += doc.spans.size();
  }
  return stats;
}

const std::vector<ReferenceStatsRow>& WeakCollectionReferenceStats() {
  static const std::vector<ReferenceStatsRow> kRows = {
      {"en", {24642, 725011, 18755616, 254803}},
      {"pt", {24293, 129101, 5929377, 111810}},
      {"es", {33266, 410806, 21617888, 348011}},
      {"it", {9619, 135813, 3296898, 58823}},
      {"fr", {27154, 53266, 1673053, 83431}},
      {"de", {19095, 634851, 12515410, 194043}},
      {"all", {138069, 2088848, 63788242, 1050921}},
  };
  return kRows;
}

}  // namespace teigo
