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

#include "teigo/trainer.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "teigo/error.h"
#include "teigo/evaluator.h"
#include "teigo/network.h"
#include "teigo/rng.h"
#include "teigo/text.h"

namespace teigo {

extern const char kBuiltinGrid26[];

namespace {

constexpr std::string_view kGridHeader = "teigo-grid 1";

struct PreparedDoc {
  std::vector<TokenRows> rows;
  std::vector<BiluoTag> gold;
};

struct Unit {
  uint32_t doc;
  uint32_t begin;
  uint32_t end;  // exclusive
};

std::vector<std::span<float>> Arrays(BasicScorerParams<float>& p) {
  std::vector<std::span<float>> out;
  p.ForEachArray([&](std::span<float> a) { out.push_back(a); });
  return out;
}

void CheckLanguage(std::span<const Document> docs, const std::string& language) {
  for (const Document& doc : docs) {
    if (doc.language != language) {
      throw Error(ErrorKind::kLanguage,
                  fmt::format("document '{}' is '{}' but training is '{}'", doc.id,
                              doc.language, language));
    }
  }
}

}  // namespace

ModelShape ShapeOf(const HyperConfig& c) {
  ModelShape shape;
  shape.rows = c.rows;
  shape.dim = c.dim;
  shape.hash_count = c.hash_count;
  shape.window = c.window;
  shape.hidden.assign(c.hidden_depth, c.hidden_width);
  return shape;
}

std::string_view BuiltinGridText() { return kBuiltinGrid26; }

std::vector<HyperConfig> DefaultGrid() { return ParseGrid(BuiltinGridText()); }

std::vector<HyperConfig> ParseGrid(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::vector<HyperConfig> configs;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!header) {
      if (line != kGridHeader) {
        throw Error(ErrorKind::kFormat,
                    fmt::format("grid: expected '{}' header, got '{}'", kGridHeader, line));
      }
      header = true;
      continue;
    }
    std::istringstream fields(line);
    HyperConfig c;
    std::string extra;
    if (!(fields >> c.id >> c.window >> c.hidden_width >> c.hidden_depth >>
          c.learning_rate >> c.batch_size >> c.dropout >> c.rows >> c.hash_count >>
          c.dim >> c.seed) ||
        (fields >> extra)) {
      throw Error(ErrorKind::kFormat, fmt::format("grid line {}: expected 11 fields", line_no));
    }
    if (c.hidden_width == 0 || c.hidden_depth == 0 || c.batch_size == 0 ||
        c.rows == 0 || c.dim == 0 || c.hash_count == 0 || c.hash_count > kMaxHashes ||
        !(c.learning_rate > 0.0) || c.dropout < 0.0 || c.dropout >= 1.0) {
      throw Error(ErrorKind::kFormat, fmt::format("grid line {}: value out of range", line_no));
    }
    for (const HyperConfig& other : configs) {
      if (other.id == c.id) {
        throw Error(ErrorKind::kFormat, fmt::format("grid: duplicate id {}", c.id));
      }
    }
    configs.push_back(c);
  }
  if (!header) throw Error(ErrorKind::kFormat, "grid: missing header");
  return configs;
}

std::string FormatGrid(std::span<const HyperConfig> configs) {
  std::string out = std::string(kGridHeader) + "\n";
  out += "# id window hidden_width hidden_depth learning_rate batch_size dropout rows hash_count dim seed\n";
  for (const HyperConfig& c : configs) {
    out += fmt::format("{} {} {} {} {} {} {} {} {} {} {}\n", c.id, c.window,
                       c.hidden_width, c.hidden_depth, c.learning_rate, c.batch_size,
                       c.dropout, c.rows, c.hash_count, c.dim, c.seed);
  }
  return out;
}

std::vector<HyperConfig> LoadGrid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open grid file '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseGrid(buffer.str());
}

std::vector<Action> OracleActions(std::span<const BiluoTag> gold) {
  const std::ptrdiff_t bad = FirstBiluoViolation(gold);
  if (bad >= 0) {
    throw Error(ErrorKind::kValidation,
                fmt::format("gold tags {} invalid at index {}", TagString(gold), bad));
  }
  std::vector<Action> actions;
  actions.reserve(gold.size());
  for (BiluoTag t : gold) actions.push_back(TagAction(t));
  return actions;
}

const char* StopReasonName(StopReason r) {
  return r == StopReason::kPatience ? "patience" : "max_epochs";
}

TrainResult Train(const HyperConfig& config, std::span<const Document> train_docs,
                  std::span<const Document> val_docs, const TrainOptions& options) {
  if (train_docs.empty()) throw Error(ErrorKind::kValidation, "train: no training documents");
  if (val_docs.empty()) throw Error(ErrorKind::kValidation, "train: no validation documents");
  const std::string language = train_docs.front().language;
  CheckLanguage(train_docs, language);
  CheckLanguage(val_docs, language);

  const auto started = std::chrono::steady_clock::now();
  TrainResult result;
  TaggerModel& model = result.model;
  model = MakeModel(ShapeOf(config), config.seed, language);
  InitializeWeights(&model, config.seed);
  model.metadata = options.metadata;
  model.metadata.config_id = config.id;

  const Tokenizer tokenizer(model.tokenizer);
  std::vector<PreparedDoc> prepared;
  std::vector<Unit> units;
  size_t n_tokens = 0;
  for (const Document& doc : train_docs) {
    const std::vector<Token> tokens = tokenizer.Tokenize(doc.text);
    if (tokens.empty()) continue;
    PreparedDoc p;
    p.gold = EncodeBiluo(AlignSpans(doc.spans, tokens), tokens.size());
    p.rows.reserve(tokens.size());
    for (const Token& t : tokens) p.rows.push_back(model.params.table.Rows(t.surface));
    const auto doc_index = static_cast<uint32_t>(prepared.size());
    for (const Sentence& s : SplitSentences(tokens)) {
      units.push_back({doc_index, static_cast<uint32_t>(s.first_token),
                       static_cast<uint32_t>(s.last_token + 1)});
    }
    n_tokens += tokens.size();
    prepared.push_back(std::move(p));
  }
  if (units.empty()) throw Error(ErrorKind::kValidation, "train: training documents have no tokens");

  BasicScorerParams<float>& params = model.params;
  BasicScorerParams<float> grads = params.ZerosLike();
  BasicScorerParams<float> velocity = params.ZerosLike();
  const auto param_arrays = Arrays(params);
  const auto grad_arrays = Arrays(grads);
  const auto velocity_arrays = Arrays(velocity);

  Rng rng(config.seed * 0x9E3779B97F4A7C15ULL + 17);
  const auto lr = static_cast<float>(config.learning_rate);
  const auto mu = static_cast<float>(options.momentum);

  TrainReport& report = result.report;
  report.config_id = config.id;
  BasicScorerParams<float> best_params = params;
  bool have_best = false;

  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    rng.Shuffle(units);
    double epoch_loss = 0.0;
    for (size_t b = 0; b < units.size(); b += config.batch_size) {
      for (auto a : grad_arrays) std::fill(a.begin(), a.end(), 0.0f);
      const size_t e = std::min(units.size(), b + config.batch_size);
      double batch_loss = 0.0;
      for (size_t u = b; u < e; ++u) {
        const PreparedDoc& doc = prepared[units[u].doc];
        batch_loss += SequenceLoss<float>(params, model.context, doc.rows, doc.gold,
                                          units[u].begin, units[u].end, &grads,
                                          config.dropout, &rng);
      }
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorKind::kNumeric,
                    fmt::format("config {}: non-finite loss in epoch {} batch {} "
                                "(lr {}, batch size {})",
                                config.id, epoch, b / config.batch_size,
                                config.learning_rate, config.batch_size));
      }
      epoch_loss += batch_loss;

      double norm_sq = 0.0;
      for (auto a : grad_arrays) norm_sq += kernels::SumSquares(a.data(), a.size());
      const double norm = std::sqrt(norm_sq);
      if (!std::isfinite(norm)) {
        throw Error(ErrorKind::kNumeric,
                    fmt::format("config {}: non-finite gradient in epoch {}", config.id,
                                epoch));
      }
      if (norm > options.clip_norm) {
        const auto scale = static_cast<float>(options.clip_norm / norm);
        for (auto a : grad_arrays) kernels::Scale(scale, a.data(), a.size());
      }
      for (size_t i = 0; i < param_arrays.size(); ++i) {
        kernels::MomentumStep(param_arrays[i].data(), velocity_arrays[i].data(),
                              grad_arrays[i].data(), lr, mu, param_arrays[i].size());
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss / static_cast<double>(n_tokens);
    record.val_f1 = options.validation_override
                        ? options.validation_override(config, epoch, model)
                        : StrictF1(model, val_docs);
    report.epochs.push_back(record);
    if (options.on_epoch) options.on_epoch(config, record);

    if (!have_best || record.val_f1 > report.best_val_f1) {
      have_best = true;
      report.best_epoch = epoch;
      report.best_val_f1 = record.val_f1;
      best_params = params;
    } else if (epoch - report.best_epoch >= options.patience) {
      report.stop_reason = StopReason::kPatience;
      break;
    }
    report.stop_reason = StopReason::kMaxEpochs;
  }

  params = std::move(best_params);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

GridResult GridSearch(std::span<const HyperConfig> configs,
                      std::span<const Document> train_docs,
                      std::span<const Document> val_docs, const TrainOptions& options,
                      size_t threads) {
  GridResult result;
  result.runs.resize(configs.size());
  std::vector<std::optional<TaggerModel>> models(configs.size());
  std::atomic<size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (size_t i = next++; i < configs.size(); i = next++) {
      GridRun& run = result.runs[i];
      run.config = configs[i];
      try {
        TrainResult trained = Train(configs[i], train_docs, val_docs, options);
        run.report = std::move(trained.report);
        models[i] = std::move(trained.model);
      } catch (const Error& e) {
        run.error = fmt::format("{}: {}", ErrorKindName(e.kind()), e.what());
        std::lock_guard<std::mutex> lock(log_mutex);
        spdlog::warn("grid config {} aborted: {}", configs[i].id, run.error);
      }
    }
  };
  threads = std::max<size_t>(1, std::min(threads, configs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::optional<size_t> best;
  for (size_t i = 0; i < result.runs.size(); ++i) {
    const GridRun& run = result.runs[i];
    if (!run.report) continue;
    if (!best) {
      best = i;
      continue;
    }
    const GridRun& incumbent = result.runs[*best];
    const double f = run.report->best_val_f1;
    const double g = incumbent.report->best_val_f1;
    if (f > g || (f == g && run.config.id < incumbent.config.id)) best = i;
  }
  if (!best) throw Error(ErrorKind::kInternal, "grid search: every configuration aborted");
  result.best_id = result.runs[*best].config.id;
  result.best_model = std::move(*models[*best]);
  return result;
}

std::string TrainReportJson(const TrainReport& report, bool include_timing) {
  using json = nlohmann::json;
  json epochs = json::array();
  for (const EpochRecord& e : report.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_f1", e.val_f1}});
  }
  json j = {{"schema_version", 1},
            {"config_id", report.config_id},
            {"epochs", std::move(epochs)},
            {"best_epoch", report.best_epoch},
            {"best_val_f1", report.best_val_f1},
            {"stop_reason", StopReasonName(report.stop_reason)}};
  if (include_timing) j["wall_seconds"] = report.wall_seconds;
  return j.dump(2);
}

std::string LeaderboardJson(const GridResult& result) {
  using json = nlohmann::json;
  json rows = json::array();
  json aborted = json::array();
  for (const GridRun& run : result.runs) {
    if (run.report) {
      rows.push_back({{"id", run.config.id},
                      {"best_val_f1", run.report->best_val_f1},
                      {"best_epoch", run.report->best_epoch},
                      {"epochs_run", run.report->epochs.size()},
                      {"stop_reason", StopReasonName(run.report->stop_reason)}});
    } else {
      aborted.push_back({{"id", run.config.id}, {"error", run.error}});
    }
  }
  json j = {{"schema_version", 1},
            {"best_id", result.best_id},
            {"leaderboard", std::move(rows)},
            {"aborted", std::move(aborted)}};
  return j.dump(2);
}

std::string LeaderboardTable(const GridResult& result) {
  std::string out = fmt::format("{:>4} {:>6} {:>6} {:>5} {:>7} {:>8} {:>8} {:>6}\n", "id",
                                "window", "hidden", "depth", "lr", "dropout",
                                "val_F1", "epoch");
  for (const GridRun& run : result.runs) {
    const HyperConfig& c = run.config;
    if (run.report) {
      out += fmt::format("{:>4} {:>6} {:>6} {:>5} {:>7} {:>8} {:>8.4f} {:>6}{}\n", c.id,
                         c.window, c.hidden_width, c.hidden_depth, c.learning_rate,
                         c.dropout, run.report->best_val_f1, run.report->best_epoch,
                         c.id == result.best_id ? "  *" : "");
    } else {
      out += fmt::format("{:>4} aborted: {}\n", c.id, run.error);
    }
  }
  return out;
}

}  // namespace teigo
