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

#include "teigo/evaluator.h"

#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "teigo/error.h"
#include "teigo/tagger.h"
#include "teigo/text.h"

namespace teigo {
namespace {

void CheckSortedDisjoint(std::span<const TimexSpan> spans, const char* which) {
  for (size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start >= spans[i].end) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("{} span [{}, {}) is empty", which, spans[i].start,
                              spans[i].end));
    }
    if (i > 0 && spans[i - 1].end > spans[i].start) {
      throw Error(ErrorKind::kValidation,
                  fmt::format("{} spans unsorted or overlapping at index {}", which, i));
    }
  }
}

double Ratio(size_t num, size_t den, bool zero_case_is_one) {
  if (den == 0) return zero_case_is_one ? 1.0 : 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MatchCounts MatchSpans(std::span<const TimexSpan> gold,
                       std::span<const TimexSpan> predicted, MatchMode mode) {
  CheckSortedDisjoint(gold, "gold");
  CheckSortedDisjoint(predicted, "predicted");
  MatchCounts counts;
  counts.mode = mode;
  std::vector<bool> used(predicted.size(), false);
  // Both lists are sorted and disjoint, so candidates for successive gold
  // spans move monotonically; `first` skips predictions ending before the
  // current gold span.
  size_t first = 0;
  for (const TimexSpan& g : gold) {
    while (first < predicted.size() && predicted[first].end <= g.start) ++first;
    for (size_t j = first; j < predicted.size() && predicted[j].start < g.end; ++j) {
      if (used[j]) continue;
      const bool match = mode == MatchMode::kStrict ? SameExtent(g, predicted[j])
                                                    : g.Overlaps(predicted[j]);
      if (match) {
        used[j] = true;
        ++counts.tp;
        break;
      }
    }
  }
  counts.fp = predicted.size() - counts.tp;
  counts.fn = gold.size() - counts.tp;
  return counts;
}

Prf ComputePrf(const MatchCounts& c) {
  Prf out;
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) return {1.0, 1.0, 1.0};
  out.precision = Ratio(c.tp, c.tp + c.fp, c.fn == 0);
  out.recall = Ratio(c.tp, c.tp + c.fn, true);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

SpanPredictor ModelPredictor(const TaggerModel& model) {
  return [&model](const Document& doc) { return Tag(model, doc.text); };
}

EvalReport EvaluatePredictor(const SpanPredictor& predictor, const Corpus& corpus,
                             const EvalOptions& options) {
  const size_t n = corpus.documents.size();
  const size_t threads = std::max<size_t>(1, std::min(options.threads, n));
  std::vector<MatchCounts> strict(threads), relaxed(threads);
  std::vector<size_t> sentences(threads, 0);
  std::vector<std::exception_ptr> errors(threads);

  auto work = [&](size_t worker) {
    try {
      strict[worker].mode = MatchMode::kStrict;
      relaxed[worker].mode = MatchMode::kRelaxed;
      Tokenizer tokenizer(TokenizerConfig{TokenizerConfig::kCurrentVersion,
                                          corpus.language});
      for (size_t i = worker; i < n; i += threads) {
        const Document& doc = corpus.documents[i];
        const std::vector<TimexSpan> predicted = predictor(doc);
        strict[worker] += MatchSpans(doc.spans, predicted, MatchMode::kStrict);
        relaxed[worker] += MatchSpans(doc.spans, predicted, MatchMode::kRelaxed);
        sentences[worker] += SplitSentences(tokenizer.Tokenize(doc.text)).size();
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EvalReport report;
  report.strict_counts.mode = MatchMode::kStrict;
  report.relaxed_counts.mode = MatchMode::kRelaxed;
  for (size_t t = 0; t < threads; ++t) {
    report.strict_counts += strict[t];
    report.relaxed_counts += relaxed[t];
    report.n_sentences += sentences[t];
  }
  report.n_docs = n;
  report.strict = ComputePrf(report.strict_counts);
  report.relaxed = ComputePrf(report.relaxed_counts);
  if (options.benchmark_repetitions > 0 && n > 0) {
    report.latency = Benchmark(predictor, corpus, options.benchmark_repetitions);
  }
  return report;
}

EvalReport Evaluate(const TaggerModel& model, const Corpus& corpus,
                    const EvalOptions& options) {
  if (corpus.language != model.language) {
    throw Error(ErrorKind::kLanguage,
                fmt::format("corpus '{}' is '{}' but the model is '{}'", corpus.name,
                            corpus.language, model.language));
  }
  return EvaluatePredictor(ModelPredictor(model), corpus, options);
}

double StrictF1(const TaggerModel& model, std::span<const Document> docs) {
  MatchCounts counts;
  for (const Document& doc : docs) {
    counts += MatchSpans(doc.spans, Tag(model, doc.text), MatchMode::kStrict);
  }
  return ComputePrf(counts).f1;
}

LatencyStats Benchmark(const SpanPredictor& predictor, const Corpus& corpus,
                       size_t repetitions) {
  if (corpus.documents.empty()) {
    throw Error(ErrorKind::kValidation, "benchmark needs a non-empty corpus");
  }
  if (repetitions == 0) throw Error(ErrorKind::kUsage, "benchmark repetitions must be >= 1");

  Tokenizer tokenizer(TokenizerConfig{TokenizerConfig::kCurrentVersion, corpus.language});
  size_t n_sentences = 0;
  for (const Document& doc : corpus.documents) {
    n_sentences += SplitSentences(tokenizer.Tokenize(doc.text)).size();
  }
  n_sentences = std::max<size_t>(n_sentences, 1);

  size_t sink = 0;
  for (const Document& doc : corpus.documents) sink += predictor(doc).size();

  LatencyStats stats;
  stats.repetitions = repetitions;
  using Clock = std::chrono::steady_clock;
  for (size_t r = 0; r < repetitions; ++r) {
    Clock::duration total{};
    for (const Document& doc : corpus.documents) {
      const auto start = Clock::now();
      sink += predictor(doc).size();
      total += Clock::now() - start;
    }
    const double ms = std::chrono::duration<double, std::milli>(total).count();
    stats.samples.push_back(ms / static_cast<double>(n_sentences));
  }
  double sum = 0.0;
  for (double s : stats.samples) sum += s;
  stats.mean_ms_per_sentence = sum / static_cast<double>(repetitions);
  double var = 0.0;
  for (double s : stats.samples) {
    var += (s - stats.mean_ms_per_sentence) * (s - stats.mean_ms_per_sentence);
  }
  stats.stddev_ms_per_sentence =
      repetitions > 1 ? std::sqrt(var / static_cast<double>(repetitions - 1)) : 0.0;
  // Keeps the tagging calls observable to the optimizer.
  if (sink == static_cast<size_t>(-1)) stats.repetitions = 0;
  return stats;
}

LatencyStats Benchmark(const TaggerModel& model, const Corpus& corpus,
                       size_t repetitions) {
  return Benchmark(ModelPredictor(model), corpus, repetitions);
}

std::string EvalReportJson(const EvalReport& report, const std::string& corpus,
                           const std::string& model) {
  using json = nlohmann::json;
  auto prf = [](const Prf& p, const MatchCounts& c) {
    return json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
                {"tp", c.tp},               {"fp", c.fp},         {"fn", c.fn}};
  };
  json j = {
      {"schema_version", 1},
      {"corpus", corpus},
      {"model", model},
      {"n_docs", report.n_docs},
      {"n_sentences", report.n_sentences},
      {"strict", prf(report.strict, report.strict_counts)},
      {"relaxed", prf(report.relaxed, report.relaxed_counts)},
      {"ms_per_sentence",
       {{"mean", report.latency.mean_ms_per_sentence},
        {"stddev", report.latency.stddev_ms_per_sentence},
        {"repetitions", report.latency.repetitions}}},
  };
  return j.dump(2);
}

std::string EvalTableHeader() {
  return fmt::format("{:<24} {:>6} {:>6} {:>8}", "corpus", "F1", "F1R", "Time");
}

std::string EvalTableRow(const EvalReport& report, const std::string& corpus) {
  return fmt::format("{:<24} {:>6.1f} {:>6.1f} {:>8.2f}", corpus,
                     100.0 * report.strict.f1, 100.0 * report.relaxed.f1,
                     report.latency.mean_ms_per_sentence);
}

}  // namespace teigo
