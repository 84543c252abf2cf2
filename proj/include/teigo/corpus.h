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

#ifndef TEIGO_CORPUS_H_
#define TEIGO_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teigo/timex_span.h"

namespace teigo {

class Tokenizer;

// Calendar date at day precision.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  bool operator==(const Date&) const = default;

  // Accepts "YYYY-MM-DD" optionally followed by a 'T' or ' ' and a time
  // of day. Returns nullopt for anything else, including impossible
  // calendar dates.
  static std::optional<Date> Parse(std::string_view text);
  std::string ToString() const;
};

enum class Provenance { kGold, kWeak };
enum class Domain { kNews, kNarrative };

const char* ProvenanceName(Provenance p);
const char* DomainName(Domain d);

struct Document {
  std::string id;
  std::string text;  // UTF-8
  std::optional<Date> dct;
  std::string language = "en";
  std::vector<TimexSpan> spans;  // sorted, non-overlapping
  Provenance provenance = Provenance::kGold;
  Domain domain = Domain::kNews;

  size_t length() const;  // in scalar values
};

struct Corpus {
  std::string name;
  std::string language = "en";
  std::vector<Document> documents;
};

// Sorts spans, refreshes surfaces, and resolves overlaps by keeping the
// longer span (ties: the earlier one). Throws Error(kValidation) for spans
// outside the text. Returns the number of spans dropped.
size_t NormalizeSpans(Document* doc);

// Throws Error(kValidation) when a corpus violates its invariants
// (duplicate ids, invalid spans).
void ValidateCorpus(const Corpus& corpus);

// ---------------------------------------------------------------------------
// TimeML

// Parses one TimeML document. The body is the content of <TEXT> when
// present, otherwise the whole root element minus <DCT> and <DOCID>.
// Every TIMEX3 in the body becomes a span, except the one carrying
// functionInDocument="CREATION_TIME", which supplies the DCT.
// Throws Error(kParse) with a byte offset on malformed XML and
// Error(kSchema) on nested TIMEX3.
Document ReadTimeMl(std::string_view xml, std::string id = {},
                    std::string language = "en");

// ---------------------------------------------------------------------------
// JSONL

// Parses one canonical JSONL line. Missing "text" is Error(kFormat); spans
// out of bounds or empty are Error(kValidation).
Document ReadJsonl(std::string_view line);

// Canonical line: keys sorted, no whitespace, no trailing newline.
std::string WriteJsonl(const Document& doc);

// Reads a JSONL file (blank lines skipped). Documents without an id get
// "<name>-<line>". Corpus name defaults to the file stem.
Corpus LoadCorpus(const std::string& path, std::string name = {});
void SaveCorpus(const Corpus& corpus, const std::string& path);

// ---------------------------------------------------------------------------
// Splitting and mixing

enum class Partition { kTrain, kValidation, kTest };
const char* PartitionName(Partition p);

struct SplitAssignment {
  uint64_t seed = 0;
  std::map<std::string, Partition> assignment;

  size_t Count(Partition p) const;
};

// Document-level 80/20 development/test cut followed by an 80/20
// train/validation cut of the development part. Each cut rounds half-up.
// Deterministic for a fixed corpus order and seed.
SplitAssignment SplitCorpus(const Corpus& corpus, uint64_t seed);

std::vector<Document> SelectPartition(const Corpus& corpus,
                                      const SplitAssignment& split,
                                      Partition partition);

enum class MixMode { kBase, kCompilation, kAll };
const char* MixModeName(MixMode m);
std::optional<MixMode> ParseMixMode(std::string_view name);

struct MixSpec {
  MixMode mode = MixMode::kBase;
  std::string reference;
  std::vector<std::string> auxiliary;  // gold
  std::vector<std::string> weak;

  // Corpus names taking part under `mode`, reference first.
  std::vector<std::string> Selected() const;
};

// Concatenates the `partition` documents of every selected corpus, with
// ids namespaced as "<corpus>/<id>". Throws Error(kUsage) for a missing
// corpus or split and Error(kLanguage) on mixed languages.
Corpus Mix(const MixSpec& spec, const std::map<std::string, Corpus>& corpora,
           const std::map<std::string, SplitAssignment>& splits,
           Partition partition = Partition::kTrain);

// ---------------------------------------------------------------------------
// Statistics

struct CorpusStats {
  size_t n_docs = 0;
  size_t n_sentences = 0;
  size_t n_tokens = 0;
  size_t n_timexs = 0;
  bool operator==(const CorpusStats&) const = default;
};

CorpusStats ComputeStats(const Corpus& corpus, const Tokenizer& tokenizer);

struct ReferenceStatsRow {
  const char* language;
  CorpusStats stats;
};

// Published statistics of the HeidelTime-annotated news collections, one
// row per language followed by the "All" total. Used as loader
// validation targets when the released annotations are available.
const std::vector<ReferenceStatsRow>& WeakCollectionReferenceStats();

}  // namespace teigo

#endif  // TEIGO_CORPUS_H_
