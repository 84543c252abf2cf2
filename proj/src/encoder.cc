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

#include "teigo/encoder.h"

#include <set>

#include <fmt/format.h>

#include "teigo/error.h"
#include "teigo/rng.h"
#include "teigo/unicode.h"

namespace teigo {

const char* FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kNorm: return "NORM";
    case FeatureKind::kPrefix: return "PREFIX";
    case FeatureKind::kSuffix: return "SUFFIX";
    case FeatureKind::kShape: return "SHAPE";
  }
  return "?";
}

uint64_t FeatureCode(FeatureKind kind, std::string_view value) {
  constexpr uint64_t kOffset = 0xcbf29ce484222325ULL;
  constexpr uint64_t kPrime = 0x100000001b3ULL;
  uint64_t h = kOffset;
  h ^= static_cast<uint8_t>(kind);
  h *= kPrime;
  for (char c : value) {
    h ^= static_cast<uint8_t>(c);
    h *= kPrime;
  }
  return h;
}

uint64_t MixHash(uint64_t code, uint64_t seed) {
  uint64_t z = code ^ seed;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string WordShape(std::string_view surface) {
  std::string shape;
  char last = 0;
  int run = 0;
  for (char32_t c : unicode::Decode(surface)) {
    char32_t mapped = c;
    if (unicode::IsDigit(c)) mapped = U'd';
    else if (unicode::IsUpper(c)) mapped = U'X';
    else if (unicode::IsLetter(c)) mapped = U'x';
    if (mapped < 0x80 && static_cast<char>(mapped) == last) {
      if (++run > 4) continue;
    } else {
      last = mapped < 0x80 ? static_cast<char>(mapped) : 0;
      run = 1;
    }
    unicode::AppendUtf8(mapped, &shape);
  }
  return shape;
}

std::array<FeatureId, kFeatureKinds> ExtractFeatures(std::string_view surface) {
  const std::u32string chars = unicode::Decode(surface);
  const size_t suffix_len = std::min<size_t>(3, chars.size());
  std::string norm = unicode::ToLowerUtf8(surface);
  std::string prefix = unicode::Encode(std::u32string_view(chars).substr(0, 1));
  std::string suffix = unicode::Encode(
      std::u32string_view(chars).substr(chars.size() - suffix_len));
  std::string shape = WordShape(surface);
  auto make = [](FeatureKind kind, std::string value) {
    const uint64_t code = FeatureCode(kind, value);
    return FeatureId{kind, std::move(value), code};
  };
  return {make(FeatureKind::kNorm, std::move(norm)),
          make(FeatureKind::kPrefix, std::move(prefix)),
          make(FeatureKind::kSuffix, std::move(suffix)),
          make(FeatureKind::kShape, std::move(shape))};
}

template <typename T>
BasicBloomTable<T>::BasicBloomTable(size_t rows, size_t dim,
                                    std::vector<uint64_t> seeds)
    : rows_(rows), dim_(dim), seeds_(std::move(seeds)) {
  if (rows_ == 0 || dim_ == 0 || seeds_.empty()) {
    throw Error(ErrorKind::kUsage, "bloom table needs rows, dim and hash count > 0");
  }
  if (seeds_.size() > kMaxHashes) {
    throw Error(ErrorKind::kUsage,
                fmt::format("bloom table supports at most {} hashes", kMaxHashes));
  }
  if (std::set<uint64_t>(seeds_.begin(), seeds_.end()).size() != seeds_.size()) {
    throw Error(ErrorKind::kUsage, "bloom table seeds must be distinct");
  }
  if (rows_ > UINT32_MAX) throw Error(ErrorKind::kUsage, "bloom table too large");
  weights_.assign(rows_ * dim_, T(0));
}

std::vector<uint64_t> DeriveHashSeeds(uint64_t seed, size_t count) {
  Rng rng(seed ^ 0x5eed5eed5eed5eedULL);
  std::vector<uint64_t> seeds;
  std::set<uint64_t> seen;
  while (seeds.size() < count) {
    const uint64_t s = rng.Next();
    if (seen.insert(s).second) seeds.push_back(s);
  }
  return seeds;
}

template class BasicBloomTable<float>;
template class BasicBloomTable<double>;

}  // namespace teigo
