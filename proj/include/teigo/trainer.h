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

#ifndef TEIGO_TRAINER_H_
#define TEIGO_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teigo/corpus.h"
#include "teigo/tagger.h"

namespace teigo {

struct HyperConfig {
  int id = 0;
  size_t window = 2;
  size_t hidden_width = 128;
  size_t hidden_depth = 1;
  double learning_rate = 1e-3;
  size_t batch_size = 8;  // sentences
  double dropout = 0.0;
  size_t rows = 4096;
  size_t hash_count = 2;
  size_t dim = 64;
  uint64_t seed = 1;

  bool operator==(const HyperConfig&) const = default;
};

ModelShape ShapeOf(const HyperConfig& config);

// The shipped 26-entry grid (configs/grid26, compiled in).
std::string_view BuiltinGridText();
std::vector<HyperConfig> DefaultGrid();

// Grid file: a "teigo-grid 1" line, then one config per line as
// "id window hidden_width hidden_depth learning_rate batch_size dropout
// rows hash_count dim seed". '#' starts a comment. Throws Error(kFormat).
std::vector<HyperConfig> ParseGrid(std::string_view text);
std::string FormatGrid(std::span<const HyperConfig> configs);
std::vector<HyperConfig> LoadGrid(const std::string& path);

// Static oracle: the action emitting each gold tag. Throws
// Error(kValidation) on an invalid tag sequence.
std::vector<Action> OracleActions(std::span<const BiluoTag> gold);

enum class StopReason { kPatience, kMaxEpochs };
const char* StopReasonName(StopReason r);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;  // mean per token
  double val_f1 = 0.0;
};

struct TrainReport {
  int config_id = 0;
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_f1 = 0.0;
  StopReason stop_reason = StopReason::kMaxEpochs;
  double wall_seconds = 0.0;
};

struct TrainOptions {
  int max_epochs = 30;
  int patience = 3;
  double clip_norm = 5.0;
  double momentum = 0.9;
  ModelMetadata metadata;
  // When set, replaces validation strict F1 after each epoch.
  std::function<double(const HyperConfig&, int epoch, const TaggerModel&)>
      validation_override;
  // Called after every epoch.
  std::function<void(const HyperConfig&, const EpochRecord&)> on_epoch;
};

struct TrainResult {
  TaggerModel model;  // weights from the best epoch
  TrainReport report;
};

// Teacher-forced training with minibatch SGD, momentum and gradient-norm
// clipping; early stopping on validation strict F1. Throws
// Error(kValidation) on empty inputs, Error(kLanguage) on mixed languages
// and Error(kNumeric) on a non-finite loss.
TrainResult Train(const HyperConfig& config, std::span<const Document> train_docs,
                  std::span<const Document> val_docs, const TrainOptions& options = {});

struct GridRun {
  HyperConfig config;
  std::optional<TrainReport> report;
  std::string error;  // set when the run aborted
};

struct GridResult {
  TaggerModel best_model;
  int best_id = 0;
  std::vector<GridRun> runs;  // in config order
};

// Trains every config (up to `threads` at once) and keeps the highest best
// validation F1, ties to the lowest id. Aborted runs are recorded; throws
// Error(kInternal) only when every run aborts.
GridResult GridSearch(std::span<const HyperConfig> configs,
                      std::span<const Document> train_docs,
                      std::span<const Document> val_docs,
                      const TrainOptions& options = {}, size_t threads = 1);

// Canonical JSON. Timing is omitted unless include_timing is set so that
// reruns produce identical bytes.
std::string TrainReportJson(const TrainReport& report, bool include_timing = false);
std::string LeaderboardJson(const GridResult& result);
std::string LeaderboardTable(const GridResult& result);

}  // namespace teigo

#endif  // TEIGO_TRAINER_H_
