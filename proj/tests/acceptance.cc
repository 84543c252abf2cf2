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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oracles.h"
#include "teigo/corpus.h"
#include "teigo/error.h"
#include "teigo/evaluator.h"
#include "teigo/kernels.h"
#include "teigo/network.h"
#include "teigo/rng.h"
#include "teigo/synthetic.h"
#include "teigo/tagger.h"
#include "teigo/teacher.h"
#include "teigo/text.h"
#include "teigo/trainer.h"

using namespace teigo;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const char* title, const std::function<Outcome()>& check) {
  Outcome o;
  const auto start = Clock::now();
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), Seconds(start));
  std::fflush(stdout);
}

// Sorted, disjoint spans in [0, limit).
std::vector<TimexSpan> RandomSpans(Rng& rng, size_t max_count, size_t limit) {
  std::vector<TimexSpan> out;
  const size_t count = rng.Below(max_count + 1);
  size_t pos = rng.Below(4);
  while (out.size() < count && pos + 1 < limit) {
    const size_t len = 1 + rng.Below(std::min<size_t>(8, limit - pos - 1));
    out.push_back({pos, pos + len, ""});
    pos += len + rng.Below(6);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome BiluoRoundTrip() {
  const auto start = Clock::now();
  Rng rng(101);
  size_t failed = 0, spans_total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng.Below(200);
    std::vector<TokenSpan> spans;
    size_t pos = rng.Below(3);
    while (pos < n) {
      if (rng.Bernoulli(0.5)) {
        const size_t len = 1 + rng.Below(std::min<size_t>(6, n - pos));
        spans.push_back({pos, pos + len - 1});
        pos += len;
      }
      pos += 1 + rng.Below(4);
    }
    spans_total += spans.size();
    const auto tags = EncodeBiluo(spans, n);
    if (tags.size() != n || DecodeBiluo(tags) != spans) ++failed;
  }
  const double wall = Seconds(start);
  return {failed == 0 && wall < 5.0,
          fmt::format("1000 sets, {} spans, {} failures", spans_total, failed)};
}

Outcome DecoderFuzz() {
  Rng rng(202);
  Tokenizer tok;
  size_t violations = 0, tokens = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ModelShape shape;
    shape.rows = 32 << rng.Below(4);
    shape.dim = 2 + rng.Below(12);
    shape.hash_count = 1 + rng.Below(3);
    shape.window = rng.Below(3);
    shape.hidden.assign(1 + rng.Below(2), 4 + rng.Below(24));
    TaggerModel m = MakeModel(shape, trial);
    InitializeWeights(&m, trial, static_cast<float>(rng.Uniform(0.05, 3.0)));
    for (auto& layer : m.params.mlp.layers) {
      for (float& b : layer.bias) b = static_cast<float>(rng.Uniform(-3, 3));
    }
    std::string text;
    const size_t sentences = 1 + rng.Below(3);
    for (size_t s = 0; s < sentences; ++s) {
      text += SyntheticSentence(2 + rng.Below(40), rng.Below(1u << 30)) + " ";
    }
    const Tokenization t = TokenizeText(tok, text);
    const DecodeResult r = GreedyDecode(m, t);
    tokens += t.tokens.size();
    if (r.tags.size() != t.tokens.size() || FirstBiluoViolation(r.tags) != -1 ||
        r.scorer_calls != t.tokens.size() || DecodeBiluo(r.tags) != r.token_spans) {
      ++violations;
    }
  }
  return {violations == 0,
          fmt::format("1000 models, {} tokens, {} invalid sequences", tokens, violations)};
}

Outcome MetricOracle() {
  Rng rng(303);
  size_t strict_mismatch = 0, deficit = 0, deficit_instances = 0, disjoint_instances = 0,
         disjoint_mismatch = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto gold = RandomSpans(rng, 6, 50);
    const auto pred = RandomSpans(rng, 6, 50);
    if (MatchSpans(gold, pred, MatchMode::kStrict).tp !=
        oracle::MaxMatching(gold, pred, MatchMode::kStrict)) {
      ++strict_mismatch;
    }
    const size_t greedy = MatchSpans(gold, pred, MatchMode::kRelaxed).tp;
    const size_t best = oracle::MaxMatching(gold, pred, MatchMode::kRelaxed);
    if (best > greedy) {
      deficit += best - greedy;
      ++deficit_instances;
    }
    bool disjoint = true;
    for (const auto& g : gold) {
      size_t k = 0;
      for (const auto& p : pred) k += g.Overlaps(p);
      disjoint &= k <= 1;
    }
    for (const auto& p : pred) {
      size_t k = 0;
      for (const auto& g : gold) k += g.Overlaps(p);
      disjoint &= k <= 1;
    }
    if (disjoint) {
      ++disjoint_instances;
      if (greedy != best) ++disjoint_mismatch;
    }
  }
  const std::vector<TimexSpan> gold = {{0, 5, ""}, {10, 20, ""}};
  const std::vector<TimexSpan> pred = {{0, 5, ""}, {12, 18, ""}, {30, 35, ""}};
  const double f1 = ComputePrf(MatchSpans(gold, pred, MatchMode::kStrict)).f1;
  const double f1r = ComputePrf(MatchSpans(gold, pred, MatchMode::kRelaxed)).f1;
  const bool example = std::abs(f1 - 0.4) < 1e-12 && std::abs(f1r - 0.8) < 1e-12;
  return {strict_mismatch == 0 && disjoint_mismatch == 0 && example,
          fmt::format("strict mismatches {}, relaxed greedy short by {} in {} of 500 trials, "
                      "{} disjoint-overlap instances with {} mismatches, worked example "
                      "F1 {} F1R {}",
                      strict_mismatch, deficit, deficit_instances, disjoint_instances,
                      disjoint_mismatch, f1, f1r)};
}

Outcome GradientCheck() {
  Rng rng(404);
  BasicScorerParams<double> p;
  p.table = BasicBloomTable<double>(16, 3, {5, 6});
  p.boundary.assign(p.table.token_width(), 0.0);
  const ContextConfig context{1};
  p.mlp = BasicMlp<double>::WithShape(std::vector<size_t>{
      ContextWidth(context, p.table.token_width()) + kStateFeatures, 7, 6, kNumActions});
  oracle::Randomize(&p, &rng, 0.5);
  const std::vector<TokenRows> rows = {p.table.Rows("on"), p.table.Rows("26"),
                                       p.table.Rows("May")};
  const std::vector<BiluoTag> gold = {BiluoTag::kO, BiluoTag::kB, BiluoTag::kL};
  BasicScorerParams<double> grad = p.ZerosLike();
  SequenceLoss<double>(p, context, rows, gold, 0, 3, &grad);
  const auto r = oracle::GradientCheck(
      &p, &grad, [&] { return SequenceLoss<double>(p, context, rows, gold, 0, 3, nullptr); },
      1e-4, 1e-3);
  return {r.failures == 0 && r.parameters > 0,
          fmt::format("{} parameters, {} above 1e-3, max relative error {:.2e}", r.parameters,
                      r.failures, r.max_relative_error)};
}

Outcome Memorization() {
  const auto start = Clock::now();
  const Corpus corpus = TemplateCorpus(200, 7);
  const SplitAssignment split = SplitCorpus(corpus, 1);
  const auto train = SelectPartition(corpus, split, Partition::kTrain);
  const auto val = SelectPartition(corpus, split, Partition::kValidation);
  const auto test = SelectPartition(corpus, split, Partition::kTest);
  int found = 0, selected = 0;
  double best_val = -1, selected_train = 0, selected_test = 0;
  size_t runs = 0;
  std::vector<std::string> winners;
  for (const HyperConfig& c : DefaultGrid()) {
    const TrainResult r = Train(c, train, val);
    ++runs;
    const double f_train = StrictF1(r.model, train);
    const double f_test = StrictF1(r.model, test);
    if (f_train >= 0.95 && f_test >= 0.85) {
      ++found;
      if (winners.size() < 5) winners.push_back(std::to_string(c.id));
    }
    if (r.report.best_val_f1 > best_val) {
      best_val = r.report.best_val_f1;
      selected = c.id;
      selected_train = f_train;
      selected_test = f_test;
    }
  }
  const double wall = Seconds(start);
  return {found > 0 && wall < 600.0,
          fmt::format("{} of {} configs reach train F1 >= 0.95 and held-out F1 >= 0.85 "
                      "(e.g. {}); validation pick {}: train {:.3f} held-out {:.3f}; grid "
                      "wall {:.0f} s",
                      found, runs, fmt::join(winners, ","), selected, selected_train,
                      selected_test, wall)};
}

std::optional<TaggerModel> distilled;

Outcome Distillation() {
  const auto start = Clock::now();
  const RuleSet rules = RuleSet::Builtin("en");
  const Annotator teacher = RuleAnnotator(rules);
  size_t annotated = 0;
  const Annotator counting = [&](const std::string& text, const Date& dct) {
    auto spans = teacher(text, dct);
    annotated += !spans.empty();
    return spans;
  };
  NewsStreamOptions news;
  news.seed = 2026;
  news.n_docs = 50000;
  news.html_rate = 0.02;
  news.bad_dct_rate = 0.02;
  news.non_utf8_rate = 0.01;
  RawStream inner = NewsStream(news);
  const RawStream stream = [&]() -> std::optional<RawDocument> {
    if (annotated >= 5000) return std::nullopt;
    return inner();
  };
  WeakCorpusOptions wo;
  wo.name = "news";
  const WeakCorpusResult weak = BuildWeakCorpus(stream, counting, wo);

  std::map<std::string, Corpus> corpora;
  corpora["news"] = weak.corpus;
  corpora["ref"] = TemplateCorpus(200, 11);
  corpora["ref"].name = "ref";
  corpora["aux"] = TemplateCorpus(100, 12);
  corpora["aux"].name = "aux";
  std::map<std::string, SplitAssignment> splits;
  for (const auto& [name, c] : corpora) splits[name] = SplitCorpus(c, 5);
  MixSpec spec;
  spec.mode = MixMode::kAll;
  spec.reference = "ref";
  spec.auxiliary = {"aux"};
  spec.weak = {"news"};
  const Corpus train = Mix(spec, corpora, splits, Partition::kTrain);
  const Corpus val = Mix(spec, corpora, splits, Partition::kValidation);
  Corpus test = corpora["news"];
  test.documents = SelectPartition(corpora["news"], splits["news"], Partition::kTest);

  const auto grid = DefaultGrid();
  const auto it = std::find_if(grid.begin(), grid.end(), [](const HyperConfig& c) {
    return c.window == 2 && c.hidden_width == 128 && c.hidden_depth == 1 && c.dim == 64 &&
           c.rows == 4096 && c.learning_rate == 1e-3 && c.dropout == 0.0;
  });
  if (it == grid.end()) return {false, "default config missing from the grid"};
  TrainOptions options;
  options.metadata.mix_mode = "all";
  const TrainResult r = Train(*it, train.documents, val.documents, options);
  const EvalReport e = Evaluate(r.model, test, {.benchmark_repetitions = 0});
  distilled = r.model;
  const double wall = Seconds(start);
  return {e.strict.f1 >= 0.90 && wall < 1800.0,
          fmt::format("{} weak documents (filter: {}), config {}, {} epochs; held-out strict "
                      "F1 {:.4f}, relaxed {:.4f} on {} documents; wall {:.0f} s",
                      weak.corpus.documents.size(), weak.report.total(), it->id,
                      r.report.epochs.size(), e.strict.f1, e.relaxed.f1, test.documents.size(),
                      wall)};
}

double TimeTag(const TaggerModel& m, const std::string& text, int reps) {
  Tag(m, text);
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    const auto spans = Tag(m, text);
    best = std::min(best, Seconds(start));
    if (spans.size() == static_cast<size_t>(-1)) std::puts("");
  }
  return best;
}

Outcome Latency() {
  TaggerModel model;
  if (distilled) {
    model = *distilled;
  } else {
    model = MakeModel(ModelShape{}, 1);
    InitializeWeights(&model, 1);
  }
  const ModelShape defaults;
  if (model.params.table.rows() != defaults.rows || model.params.table.dim() != defaults.dim ||
      model.context.window != defaults.window || model.params.mlp.layers.size() != 2 ||
      model.params.mlp.layers[0].out != 128) {
    return {false, "model does not have the default shape"};
  }
  Corpus sentences;
  Tokenizer tok;
  size_t tokens = 0;
  for (int i = 0; i < 500; ++i) {
    Document d;
    d.id = std::to_string(i);
    d.text = SyntheticSentence(20, 9000 + i);
    tokens += tok.Tokenize(d.text).size();
    sentences.documents.push_back(std::move(d));
  }
  const LatencyStats stats = Benchmark(model, sentences, 5);

  std::string doc_n, doc_2n;
  size_t n_tokens = 0;
  for (uint64_t i = 0; n_tokens < 20000; ++i) {
    const std::string s = SyntheticSentence(20, 100 + i) + " ";
    if (n_tokens < 10000) doc_n += s;
    doc_2n += s;
    n_tokens += 20;
  }
  const double t_n = TimeTag(model, doc_n, 5);
  const double t_2n = TimeTag(model, doc_2n, 5);
  const double ratio = t_2n / t_n;
  return {stats.mean_ms_per_sentence <= 10.0 && ratio <= 2.5,
          fmt::format("{} kernels, {:.3f} ms per 20-token sentence (sd {:.3f}, {} tokens); "
                      "t(10k tokens) {:.1f} ms, t(20k) {:.1f} ms, ratio {:.2f}",
                      kernels::IsaName(kernels::Active().isa), stats.mean_ms_per_sentence,
                      stats.stddev_ms_per_sentence, tokens, 1e3 * t_n, 1e3 * t_2n, ratio)};
}

Outcome Protocol() {
  const Corpus corpus = TemplateCorpus(30, 4);
  std::vector<Document> train, val;
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    (i % 5 == 0 ? val : train).push_back(corpus.documents[i]);
  }
  HyperConfig small;
  small.id = 1;
  small.window = 1;
  small.hidden_width = 16;
  small.rows = 512;
  small.dim = 16;
  TrainOptions plateau;
  plateau.validation_override = [](const HyperConfig&, int epoch, const TaggerModel&) {
    return std::min(epoch, 5) * 0.1;
  };
  const TrainResult r = Train(small, train, val, plateau);
  const bool stop_ok = r.report.best_epoch == 5 && r.report.epochs.size() == 8 &&
                       r.report.stop_reason == StopReason::kPatience;

  // Every config plateaus at once; ids divisible by 5 tie for the best.
  std::set<int> seen;
  TrainOptions injected;
  injected.validation_override = [&](const HyperConfig& c, int, const TaggerModel&) {
    seen.insert(c.id);
    return c.id % 5 == 0 ? 0.9 : 0.5;
  };
  auto grid = DefaultGrid();
  for (auto& c : grid) {
    c.rows = 512;
    c.dim = 8;
    c.hidden_width = 8;
  }
  const GridResult g = GridSearch(grid, train, val, injected, 1);
  size_t completed = 0;
  for (const auto& run : g.runs) completed += run.report.has_value();
  const bool grid_ok = g.runs.size() == 26 && completed == 26 && seen.size() == 26 &&
                       g.best_id == 5 && g.best_model.metadata.config_id == 5;
  return {stop_ok && grid_ok,
          fmt::format("plateau after epoch 5: best {} stopped after {} ({}); grid ran {} of "
                      "{} configs, picked {} among tied 5,10,15,20,25",
                      r.report.best_epoch, r.report.epochs.size(),
                      StopReasonName(r.report.stop_reason), completed, g.runs.size(),
                      g.best_id)};
}

RawStream FromVector(std::vector<RawDocument> docs) {
  auto shared = std::make_shared<std::vector<RawDocument>>(std::move(docs));
  auto pos = std::make_shared<size_t>(0);
  return [shared, pos]() -> std::optional<RawDocument> {
    if (*pos >= shared->size()) return std::nullopt;
    return (*shared)[(*pos)++];
  };
}

Outcome FilterConformance() {
  const std::string dct = "2024-03-01";
  std::vector<RawDocument> docs = {
      {"1", "The ceasefire began on 12 March 2024.", dct, ""},
      {"2", "<p>Shares fell on Tuesday.</p>", dct, ""},
      {"3", "The orchestra played beautifully.", dct, ""},
      {"4", "Elections are due next year.", dct, ""},
      {"5", "Talks resumed three weeks ago.", std::string("01/03/2024"), ""},
      {"6", "Officials declined to comment.", dct, ""},
      {"7", "Click <a href=x>here</a> for the 2023 report.", dct, ""},
      {"8", "The museum reopens in June 2025.", dct, ""},
      {"9", "Rain is expected across the north.", dct, ""},
      {"10", "The law took effect on 2024-01-01.", dct, ""},
  };
  const WeakCorpusResult r =
      BuildWeakCorpus(FromVector(docs), RuleAnnotator(RuleSet::Builtin("en")), {});
  const FilterReport expected{4, 0, 1, 2, 3};
  return {r.report == expected && r.report.total() == 10 && r.corpus.documents.size() == 4,
          fmt::format("kept {}, non_utf8 {}, bad_dct {}, html {}, zero_timex {}, total {}",
                      r.report.kept, r.report.rejected_non_utf8, r.report.rejected_bad_dct,
                      r.report.rejected_html, r.report.rejected_zero_timex, r.report.total())};
}

Outcome Serialization() {
  const Corpus corpus = TemplateCorpus(60, 8);
  const SplitAssignment split = SplitCorpus(corpus, 2);
  HyperConfig c;
  c.id = 1;
  c.window = 2;
  c.hidden_width = 32;
  c.rows = 1024;
  c.dim = 16;
  c.learning_rate = 0.01;
  TrainOptions options;
  options.max_epochs = 10;
  const TrainResult r = Train(c, SelectPartition(corpus, split, Partition::kTrain),
                              SelectPartition(corpus, split, Partition::kValidation), options);
  const std::string bytes = SaveModel(r.model);
  const TaggerModel back = LoadModel(bytes);
  size_t differ = 0, spans = 0;
  for (uint64_t i = 0; i < 100; ++i) {
    const std::string s = SyntheticSentence(5 + i % 30, 500 + i);
    const auto a = Tag(r.model, s);
    spans += a.size();
    differ += a != Tag(back, s);
  }
  auto rejected = [](std::string_view b, ErrorKind want) {
    try {
      LoadModel(b);
    } catch (const Error& e) {
      return e.kind() == want;
    }
    return false;
  };
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  // Cuts inside the magic read as a foreign file, later ones as damage.
  bool truncations = true;
  size_t cuts = 0;
  for (size_t cut = 0; cut < bytes.size(); cut += std::max<size_t>(1, bytes.size() / 97)) {
    const ErrorKind want = cut < 5 ? ErrorKind::kFormat : ErrorKind::kIntegrity;
    truncations &= rejected(std::string_view(bytes).substr(0, cut), want);
    ++cuts;
  }
  const bool magic = rejected(bad_magic, ErrorKind::kFormat);
  return {differ == 0 && spans > 0 && magic && truncations,
          fmt::format("100 sentences, {} spans, {} differ; bad magic {}; {} truncations {}",
                      spans, differ, magic ? "rejected" : "ACCEPTED", cuts,
                      truncations ? "rejected" : "NOT all rejected")};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  Report(1, "BILUO round trip", BiluoRoundTrip);
  Report(2, "decoder validity fuzz", DecoderFuzz);
  Report(3, "metric oracle", MetricOracle);
  Report(4, "gradient check", GradientCheck);
  Report(5, "memorization convergence", Memorization);
  Report(6, "distillation analogue", Distillation);
  Report(7, "latency and linear time", Latency);
  Report(8, "protocol conformance", Protocol);
  Report(9, "filter conformance", FilterConformance);
  Report(10, "serialization", Serialization);
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
