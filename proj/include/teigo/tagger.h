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

#ifndef TEIGO_TAGGER_H_
#define TEIGO_TAGGER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teigo/encoder.h"
#include "teigo/network.h"
#include "teigo/text.h"
#include "teigo/timex_span.h"

namespace teigo {

// One action per token, emitting B, I, L, U, O respectively. Ordinals are
// the tie-breaking order of greedy decoding.
enum class Action : uint8_t { kBegin = 0, kIn = 1, kLast = 2, kUnit = 3, kOut = 4 };

const char* ActionName(Action a);
inline BiluoTag ActionTag(Action a) { return static_cast<BiluoTag>(a); }
inline Action TagAction(BiluoTag t) { return static_cast<Action>(t); }

class ActionSet {
 public:
  ActionSet() = default;
  explicit ActionSet(const ActionMask& mask) : mask_(mask) {}

  bool contains(Action a) const { return mask_[static_cast<size_t>(a)]; }
  bool empty() const;
  size_t size() const;
  const ActionMask& mask() const { return mask_; }
  std::vector<Action> actions() const;

  bool operator==(const ActionSet&) const = default;

 private:
  ActionMask mask_{};
};

struct ParserState {
  size_t position = 0;
  bool inside = false;
  std::optional<size_t> entity_start;
  std::vector<BiluoTag> emitted;
};

// Throws Error(kUsage) when position >= n_tokens.
ActionSet ValidActions(const ParserState& state, size_t n_tokens);

// Throws Error(kValidation) when the action is not valid in `state`.
ParserState Step(const ParserState& state, Action action, size_t n_tokens);

struct ModelMetadata {
  std::string mix_mode;  // base, compilation, all, or empty
  int config_id = 0;
};

struct TaggerModel {
  static constexpr uint32_t kFormatVersion = 1;

  uint32_t format_version = kFormatVersion;
  std::string language = "en";
  TokenizerConfig tokenizer;
  ContextConfig context;
  BasicScorerParams<float> params;
  std::string hash_algorithm = kHashAlgorithm;
  uint64_t training_seed = 0;
  ModelMetadata metadata;

  size_t input_size() const {
    return ContextWidth(context, params.table.token_width()) + kStateFeatures;
  }
};

struct ModelShape {
  size_t rows = 4096;
  size_t dim = 64;
  size_t hash_count = 2;
  size_t window = 2;
  std::vector<size_t> hidden = {128};
};

// All-zero model of the given shape, hash seeds derived from `seed`.
TaggerModel MakeModel(const ModelShape& shape, uint64_t seed,
                      std::string language = "en");

// Fills every weight uniformly: bloom rows and the boundary vector in
// +-bloom_scale, dense layers in +-sqrt(6 / (fan_in + fan_out)), biases 0.
void InitializeWeights(TaggerModel* model, uint64_t seed, float bloom_scale = 0.1f);

struct DecodeResult {
  std::vector<BiluoTag> tags;
  std::vector<TokenSpan> token_spans;
  size_t scorer_calls = 0;
};

// Single left-to-right greedy pass: one scorer call per token, invalid
// actions masked, ties broken toward the lowest action ordinal. Throws
// Error(kFormat) when the tokens came from another tokenizer.
DecodeResult GreedyDecode(const TaggerModel& model, const Tokenization& tokens);

// Tokenizes and decodes `text`, returning character spans.
std::vector<TimexSpan> Tag(const TaggerModel& model, std::string_view text);

// Binary model file; see docs/model-format.md.
std::string SaveModel(const TaggerModel& model);
TaggerModel LoadModel(std::string_view bytes);

void SaveModelFile(const TaggerModel& model, const std::string& path);
TaggerModel LoadModelFile(const std::string& path);

}  // namespace teigo

#endif  // TEIGO_TAGGER_H_
