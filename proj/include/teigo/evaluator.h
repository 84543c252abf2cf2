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

#ifndef TEIGO_EVALUATOR_H_
#define TEIGO_EVALUATOR_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "teigo/corpus.h"
#include "teigo/timex_span.h"

namespace teigo {

struct TaggerModel;

enum class MatchMode { kStrict, kRelaxed };

struct MatchCounts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  MatchMode mode = MatchMode::kStrict;

  MatchCounts& operator+=(const MatchCounts& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
};

// One-to-one matching built greedily over gold spans in document order:
// each gold span takes the first unmatched prediction that equals it
// (strict) or shares at least one character with it (relaxed). Throws
// Error(kValidation) when either list is unsorted or overlapping.
MatchCounts MatchSpans(std::span<const TimexSpan> gold,
                       std::span<const TimexSpan> predicted, MatchMode mode);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Zero-denominator conventions: P = 1 when nothing was predicted and
// nothing was missed, else 0; R = 1 when there is no gold span; F1 = 0
// when P + R = 0, except that the all-empty case scores 1.
Prf ComputePrf(const MatchCounts& counts);

struct LatencyStats {
  double mean_ms_per_sentence = 0.0;
  double stddev_ms_per_sentence = 0.0;
  size_t repetitions = 0;
  std::vector<double> samples;  // ms per sentence, one per repetition
};

struct EvalReport {
  Prf strict;
  Prf relaxed;
  MatchCounts strict_counts;
  MatchCounts relaxed_counts;
  LatencyStats latency;
  size_t n_docs = 0;
  size_t n_sentences = 0;
};

// Anything that maps a document to predicted character spans.
using SpanPredictor = std::function<std::vector<TimexSpan>(const Document&)>;

struct EvalOptions {
  size_t benchmark_repetitions = 1;  // 0 skips the latency benchmark
  size_t threads = 1;                // tagging parallelism for scores
};

// Micro-averaged strict and relaxed scores over the corpus.
EvalReport EvaluatePredictor(const SpanPredictor& predictor, const Corpus& corpus,
                             const EvalOptions& options = {});

// Throws Error(kLanguage) when the corpus and model languages differ.
EvalReport Evaluate(const TaggerModel& model, const Corpus& corpus,
                    const EvalOptions& options = {});

// Strict F1 only, no timing. Used for model selection during training.
double StrictF1(const TaggerModel& model, std::span<const Document> docs);

// Mean wall milliseconds per sentence over `repetitions` timed passes
// after one untimed warm-up pass; single-threaded. Each pass tags every
// document from raw text. Throws Error(kValidation) on an empty corpus
// and Error(kUsage) when repetitions is 0.
LatencyStats Benchmark(const SpanPredictor& predictor, const Corpus& corpus,
                       size_t repetitions);
LatencyStats Benchmark(const TaggerModel& model, const Corpus& corpus,
                       size_t repetitions);

SpanPredictor ModelPredictor(const TaggerModel& model);

std::string EvalReportJson(const EvalReport& report, const std::string& corpus,
                           const std::string& model);

// "corpus  F1  F1R  Time" row in percent and milliseconds.
std::string EvalTableRow(const EvalReport& report, const std::string& corpus);
std::string EvalTableHeader();

}  // namespace teigo

#endif  // TEIGO_EVALUATOR_H_
