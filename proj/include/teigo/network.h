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

#ifndef TEIGO_NETWORK_H_
#define TEIGO_NETWORK_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "teigo/encoder.h"
#include "teigo/kernels.h"
#include "teigo/rng.h"
#include "teigo/text.h"

// The transition scorer and its gradients, generic over the scalar type so
// the same code runs in float for training and inference and in double for
// finite-difference checks.
namespace teigo {

inline constexpr size_t kNumActions = 5;
inline constexpr size_t kStateFeatures = 2;
inline constexpr size_t kMaxEntityDistance = 8;

// Parse-state summary appended to the context vector: the inside flag and
// tokens since the entity start, clipped to kMaxEntityDistance and scaled
// to [0, 1].
template <typename T>
std::array<T, kStateFeatures> StateFeatures(bool inside, size_t distance) {
  if (!inside) return {T(0), T(0)};
  const size_t clipped = std::min(distance, kMaxEntityDistance);
  return {T(1), static_cast<T>(clipped) / static_cast<T>(kMaxEntityDistance)};
}

// Valid-action mask over {BEGIN, IN, LAST, UNIT, OUT}.
using ActionMask = std::array<bool, kNumActions>;

inline ActionMask ValidActionMask(bool inside, bool last_token) {
  if (inside) return {false, !last_token, true, false, false};
  return {!last_token, false, false, true, true};
}

template <typename T>
struct DenseLayer {
  size_t in = 0;
  size_t out = 0;
  std::vector<T> weight;  // out x in, row-major
  std::vector<T> bias;
};

// Rectifier on hidden layers, identity on the output layer.
template <typename T>
struct BasicMlp {
  std::vector<DenseLayer<T>> layers;

  size_t input_size() const { return layers.empty() ? 0 : layers.front().in; }
  size_t output_size() const { return layers.empty() ? 0 : layers.back().out; }

  // sizes = {input, hidden..., output}
  static BasicMlp WithShape(std::span<const size_t> sizes) {
    BasicMlp mlp;
    for (size_t i = 0; i + 1 < sizes.size(); ++i) {
      DenseLayer<T> layer;
      layer.in = sizes[i];
      layer.out = sizes[i + 1];
      layer.weight.assign(layer.in * layer.out, T(0));
      layer.bias.assign(layer.out, T(0));
      mlp.layers.push_back(std::move(layer));
    }
    return mlp;
  }
};

// Per-call activations kept for the backward pass.
template <typename T>
struct MlpTrace {
  std::vector<std::vector<T>> activations;  // [0] = input, back() = scores
  std::vector<std::vector<T>> masks;        // dropout multipliers per hidden layer
};

template <typename T>
void MlpForward(const BasicMlp<T>& mlp, std::span<const T> input,
                MlpTrace<T>* trace, double dropout = 0.0, Rng* rng = nullptr) {
  const size_t n_layers = mlp.layers.size();
  trace->activations.resize(n_layers + 1);
  trace->masks.resize(n_layers);
  trace->activations[0].assign(input.begin(), input.end());
  for (size_t l = 0; l < n_layers; ++l) {
    const DenseLayer<T>& layer = mlp.layers[l];
    std::vector<T>& out = trace->activations[l + 1];
    out.resize(layer.out);
    kernels::Gemv(layer.weight.data(), trace->activations[l].data(),
                  layer.bias.data(), out.data(), layer.out, layer.in);
    std::vector<T>& mask = trace->masks[l];
    mask.clear();
    if (l + 1 == n_layers) break;
    for (T& v : out) v = v > T(0) ? v : T(0);
    if (dropout > 0.0 && rng) {
      const T keep_scale = static_cast<T>(1.0 / (1.0 - dropout));
      mask.resize(layer.out);
      for (size_t i = 0; i < layer.out; ++i) {
        mask[i] = rng->Bernoulli(dropout) ? T(0) : keep_scale;
        out[i] *= mask[i];
      }
    }
  }
}

// Backpropagates d_scores; accumulates parameter gradients into `grad`
// and, when d_input is non-null, writes the input gradient.
template <typename T>
void MlpBackward(const BasicMlp<T>& mlp, const MlpTrace<T>& trace,
                 std::span<const T> d_scores, BasicMlp<T>* grad,
                 std::vector<T>* d_input) {
  std::vector<T> delta(d_scores.begin(), d_scores.end());
  std::vector<T> below;
  for (size_t l = mlp.layers.size(); l-- > 0;) {
    const DenseLayer<T>& layer = mlp.layers[l];
    DenseLayer<T>& g = grad->layers[l];
    const std::vector<T>& x = trace.activations[l];
    kernels::GerAccum(delta.data(), x.data(), g.weight.data(), layer.out, layer.in);
    for (size_t i = 0; i < layer.out; ++i) g.bias[i] += delta[i];
    if (l == 0 && !d_input) break;
    below.assign(layer.in, T(0));
    kernels::GemvTAccum(layer.weight.data(), delta.data(), below.data(),
                        layer.out, layer.in);
    if (l > 0) {
      // Through dropout and the rectifier of the layer below.
      const std::vector<T>& mask = trace.masks[l - 1];
      for (size_t i = 0; i < layer.in; ++i) {
        if (x[i] <= T(0)) below[i] = T(0);
        else if (!mask.empty()) below[i] *= mask[i];
      }
    }
    delta.swap(below);
  }
  if (d_input) d_input->swap(delta);
}

// Bloom table, learned boundary vector and scorer.
template <typename T>
struct BasicScorerParams {
  BasicBloomTable<T> table;
  std::vector<T> boundary;  // token_width values
  BasicMlp<T> mlp;

  // Zero-valued parameters of identical shape.
  BasicScorerParams ZerosLike() const {
    BasicScorerParams z = *this;
    std::fill(z.table.weights().begin(), z.table.weights().end(), T(0));
    std::fill(z.boundary.begin(), z.boundary.end(), T(0));
    for (auto& layer : z.mlp.layers) {
      std::fill(layer.weight.begin(), layer.weight.end(), T(0));
      std::fill(layer.bias.begin(), layer.bias.end(), T(0));
    }
    return z;
  }

  // Visits every parameter array in a fixed order.
  template <typename F>
  void ForEachArray(F&& f) {
    f(std::span<T>(table.weights()));
    f(std::span<T>(boundary));
    for (auto& layer : mlp.layers) {
      f(std::span<T>(layer.weight));
      f(std::span<T>(layer.bias));
    }
  }
};

// Masked softmax cross-entropy of the gold action. Writes d loss / d
// scores (zero on invalid actions) and returns the loss.
template <typename T>
T MaskedCrossEntropy(std::span<const T> scores, const ActionMask& valid,
                     size_t gold, std::span<T> d_scores) {
  T max_score = -std::numeric_limits<T>::infinity();
  for (size_t a = 0; a < kNumActions; ++a) {
    if (valid[a]) max_score = std::max(max_score, scores[a]);
  }
  T z = 0;
  for (size_t a = 0; a < kNumActions; ++a) {
    if (valid[a]) z += std::exp(scores[a] - max_score);
  }
  for (size_t a = 0; a < kNumActions; ++a) {
    d_scores[a] = valid[a] ? std::exp(scores[a] - max_score) / z : T(0);
  }
  d_scores[gold] -= T(1);
  return std::log(z) - (scores[gold] - max_score);
}

// Teacher-forced loss over tokens [begin, end) of a sequence whose full
// row list is `rows` and whose gold tags are `gold`. The parse state at
// every token comes from the gold tags, so the loss at token t does not
// depend on any prediction. Context reaches across [begin, end) into the
// rest of the sequence. Gradients are accumulated into `grad` when it is
// non-null. Returns the summed loss.
template <typename T>
T SequenceLoss(const BasicScorerParams<T>& params, const ContextConfig& context,
               std::span<const TokenRows> rows, std::span<const BiluoTag> gold,
               size_t begin, size_t end, BasicScorerParams<T>* grad,
               double dropout = 0.0, Rng* rng = nullptr) {
  const size_t n = rows.size();
  const size_t width = params.table.token_width();
  const size_t w = context.window;
  const size_t lo = begin >= w ? begin - w : 0;
  const size_t hi = std::min(n, end + w);
  const size_t m = hi - lo;

  std::vector<T> vectors(m * width);
  for (size_t p = lo; p < hi; ++p) {
    params.table.Embed(rows[p], vectors.data() + (p - lo) * width);
  }
  std::vector<T> d_vectors(grad ? m * width : 0, T(0));

  const size_t ctx_width = ContextWidth(context, width);
  std::vector<T> input(ctx_width + kStateFeatures);
  MlpTrace<T> trace;
  std::vector<T> d_input;
  std::array<T, kNumActions> d_scores{};

  // Gold state entering `begin`.
  bool inside = false;
  size_t entity_start = 0;
  for (size_t t = begin; t-- > 0;) {
    if (gold[t] == BiluoTag::kB) {
      inside = true;
      entity_start = t;
      break;
    }
    if (gold[t] != BiluoTag::kI) break;
  }

  T loss = 0;
  for (size_t t = begin; t < end; ++t) {
    T* out = input.data();
    for (std::ptrdiff_t off = -static_cast<std::ptrdiff_t>(w);
         off <= static_cast<std::ptrdiff_t>(w); ++off) {
      const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(t) + off;
      const T* src = (p < 0 || p >= static_cast<std::ptrdiff_t>(n))
                         ? params.boundary.data()
                         : vectors.data() + (static_cast<size_t>(p) - lo) * width;
      std::copy(src, src + width, out);
      out += width;
    }
    const auto state = StateFeatures<T>(inside, t - entity_start);
    out[0] = state[0];
    out[1] = state[1];

    MlpForward(params.mlp, std::span<const T>(input), &trace, dropout, rng);
    const ActionMask valid = ValidActionMask(inside, t + 1 == n);
    const size_t action = static_cast<size_t>(gold[t]);
    loss += MaskedCrossEntropy(std::span<const T>(trace.activations.back()), valid,
                               action, std::span<T>(d_scores));

    if (grad) {
      MlpBackward(params.mlp, trace, std::span<const T>(d_scores), &grad->mlp,
                  &d_input);
      for (std::ptrdiff_t off = -static_cast<std::ptrdiff_t>(w);
           off <= static_cast<std::ptrdiff_t>(w); ++off) {
        const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(t) + off;
        const T* src = d_input.data() + static_cast<size_t>(off + w) * width;
        T* dst = (p < 0 || p >= static_cast<std::ptrdiff_t>(n))
                     ? grad->boundary.data()
                     : d_vectors.data() + (static_cast<size_t>(p) - lo) * width;
        kernels::Axpy(T(1), src, dst, width);
      }
    }

    switch (gold[t]) {
      case BiluoTag::kB: inside = true; entity_start = t; break;
      case BiluoTag::kL:
      case BiluoTag::kU: inside = false; break;
      default: break;
    }
  }

  if (grad) {
    for (size_t p = lo; p < hi; ++p) {
      params.table.Backward(rows[p], d_vectors.data() + (p - lo) * width,
                            &grad->table);
    }
  }
  return loss;
}

}  // namespace teigo

#endif  // TEIGO_NETWORK_H_
