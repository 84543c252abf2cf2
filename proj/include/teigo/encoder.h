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

#ifndef TEIGO_ENCODER_H_
#define TEIGO_ENCODER_H_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teigo/kernels.h"

// Token features and the hashed (Bloom) embedding table.
//
// Every token yields four features: NORM (lowercased surface), PREFIX
// (first character), SUFFIX (last three characters) and SHAPE (letters to
// x/X, digits to d, runs capped at four). A feature is hashed to a 64-bit
// code; k seeded mixes of the code select k rows of an R x d table whose
// sum is the feature's vector. The four feature vectors are concatenated,
// so a token vector is 4d wide.
namespace teigo {

enum class FeatureKind : uint8_t { kNorm = 0, kPrefix = 1, kSuffix = 2, kShape = 3 };
inline constexpr size_t kFeatureKinds = 4;
inline constexpr size_t kMaxHashes = 8;

// Name and version of the feature hash; stored in model files.
inline constexpr char kHashAlgorithm[] = "fnv1a64-splitmix64/v1";

const char* FeatureKindName(FeatureKind kind);

struct FeatureId {
  FeatureKind kind;
  std::string value;
  uint64_t code;
};

// FNV-1a over the kind byte followed by the UTF-8 value.
uint64_t FeatureCode(FeatureKind kind, std::string_view value);

// splitmix64 finalizer applied to code ^ seed.
uint64_t MixHash(uint64_t code, uint64_t seed);

std::string WordShape(std::string_view surface);

// NORM, PREFIX, SUFFIX, SHAPE in that order.
std::array<FeatureId, kFeatureKinds> ExtractFeatures(std::string_view surface);

// Row indices of every feature of one token: rows[f * k + j].
struct TokenRows {
  std::array<uint32_t, kFeatureKinds * kMaxHashes> rows{};
};

struct ContextConfig {
  size_t window = 2;  // tokens on each side
};

template <typename T>
class BasicBloomTable {
 public:
  BasicBloomTable() = default;
  // Weights start at zero. Throws Error(kUsage) on zero sizes, more than
  // kMaxHashes seeds or repeated seeds.
  BasicBloomTable(size_t rows, size_t dim, std::vector<uint64_t> seeds);

  size_t rows() const { return rows_; }
  size_t dim() const { return dim_; }
  size_t hash_count() const { return seeds_.size(); }
  size_t token_width() const { return kFeatureKinds * dim_; }
  const std::vector<uint64_t>& seeds() const { return seeds_; }

  std::vector<T>& weights() { return weights_; }
  const std::vector<T>& weights() const { return weights_; }
  T* row(size_t r) { return weights_.data() + r * dim_; }
  const T* row(size_t r) const { return weights_.data() + r * dim_; }

  void RowIndices(uint64_t code, uint32_t* out) const {
    for (size_t j = 0; j < seeds_.size(); ++j) {
      out[j] = static_cast<uint32_t>(MixHash(code, seeds_[j]) % rows_);
    }
  }

  TokenRows Rows(const std::array<FeatureId, kFeatureKinds>& features) const {
    TokenRows out;
    for (size_t f = 0; f < kFeatureKinds; ++f) {
      RowIndices(features[f].code, out.rows.data() + f * seeds_.size());
    }
    return out;
  }

  TokenRows Rows(std::string_view surface) const {
    return Rows(ExtractFeatures(surface));
  }

  // Writes the 4d-wide token vector.
  void Embed(const TokenRows& rows, T* out) const {
    const size_t k = seeds_.size();
    for (size_t f = 0; f < kFeatureKinds; ++f) {
      T* dst = out + f * dim_;
      std::fill(dst, dst + dim_, T(0));
      for (size_t j = 0; j < k; ++j) {
        kernels::Axpy(T(1), row(rows.rows[f * k + j]), dst, dim_);
      }
    }
  }

  // Scatters the gradient of one token vector into `grad` (same shape).
  void Backward(const TokenRows& rows, const T* d_vector,
                BasicBloomTable* grad) const {
    const size_t k = seeds_.size();
    for (size_t f = 0; f < kFeatureKinds; ++f) {
      for (size_t j = 0; j < k; ++j) {
        kernels::Axpy(T(1), d_vector + f * dim_, grad->row(rows.rows[f * k + j]),
                      dim_);
      }
    }
  }

 private:
  size_t rows_ = 0;
  size_t dim_ = 0;
  std::vector<uint64_t> seeds_;
  std::vector<T> weights_;
};

using BloomTable = BasicBloomTable<float>;

// Token vector for a surface form.
template <typename T>
std::vector<T> EmbedToken(const BasicBloomTable<T>& table,
                          std::string_view surface) {
  std::vector<T> out(table.token_width());
  table.Embed(table.Rows(surface), out.data());
  return out;
}

// Context vector at position i: token vectors i-w .. i+w, with `boundary`
// in place of positions outside [0, n). `token_vectors` holds n rows of
// `width` values. Output width is (2w+1) * width.
template <typename T>
void EncodeContext(std::span<const T> token_vectors, size_t width,
                   std::span<const T> boundary, const ContextConfig& config,
                   size_t i, T* out) {
  const size_t n = token_vectors.size() / width;
  const auto w = static_cast<std::ptrdiff_t>(config.window);
  for (std::ptrdiff_t off = -w; off <= w; ++off) {
    const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i) + off;
    const T* src = (p < 0 || p >= static_cast<std::ptrdiff_t>(n))
                       ? boundary.data()
                       : token_vectors.data() + static_cast<size_t>(p) * width;
    std::copy(src, src + width, out);
    out += width;
  }
}

inline size_t ContextWidth(const ContextConfig& config, size_t token_width) {
  return (2 * config.window + 1) * token_width;
}

// Seeds for k hash functions derived deterministically from one seed.
std::vector<uint64_t> DeriveHashSeeds(uint64_t seed, size_t count);

extern template class BasicBloomTable<float>;
extern template class BasicBloomTable<double>;

}  // namespace teigo

#endif  // TEIGO_ENCODER_H_
