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

#ifndef TEIGO_SYNTHETIC_H_
#define TEIGO_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teigo/corpus.h"
#include "teigo/rng.h"
#include "teigo/teacher.h"

namespace teigo {

// Generated corpora for tests, demos and benchmarks. Everything is a pure
// function of the seed.

// The ten date patterns of the template corpus.
std::vector<std::string> TemplatePatternNames();

// Short news-like documents, each sentence carrying at most one timex drawn
// from the ten patterns, with gold spans known by construction. Filler
// sentences include non-temporal numbers.
Corpus TemplateCorpus(size_t n_docs, uint64_t seed);

struct NewsStreamOptions {
  uint64_t seed = 1;
  size_t n_docs = 1000;
  size_t min_sentences = 2;
  size_t max_sentences = 5;
  // Per-document corruption rates, applied before any text is generated.
  double non_utf8_rate = 0.0;
  double bad_dct_rate = 0.0;
  double html_rate = 0.0;
  std::string id_prefix = "news";
};

// Unlabelled news documents with a wide mix of temporal expressions, for
// weak labelling by the teacher.
class NewsGenerator {
 public:
  explicit NewsGenerator(NewsStreamOptions options);
  std::optional<RawDocument> Next();

 private:
  NewsStreamOptions options_;
  Rng rng_;
  size_t produced_ = 0;
};

RawStream NewsStream(NewsStreamOptions options);

// One sentence of exactly `n_tokens` tokens, final period included, with
// temporal expressions mixed into filler text. Used for latency tests.
std::string SyntheticSentence(size_t n_tokens, uint64_t seed);

}  // namespace teigo

#endif  // TEIGO_SYNTHETIC_H_
