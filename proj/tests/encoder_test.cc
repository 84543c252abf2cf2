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

#include <cmath>
#include <set>

#include "doctest.h"
#include "teigo/encoder.h"
#include "teigo/error.h"
#include "teigo/rng.h"

using namespace teigo;

namespace {

uint64_t Fnv1a(std::string_view bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

BloomTable RandomTable(size_t rows, size_t dim, size_t k, uint64_t seed) {
  BloomTable t(rows, dim, DeriveHashSeeds(seed, k));
  Rng rng(seed);
  for (float& w : t.weights()) w = static_cast<float>(rng.Uniform(-1, 1));
  return t;
}

}  // namespace

TEST_CASE("feature extraction examples") {
  const auto f = ExtractFeatures("2023");
  CHECK(f[0].value == "2023");
  CHECK(f[1].value == "2");
  CHECK(f[2].value == "023");
  CHECK(f[3].value == "dddd");
  CHECK(WordShape("May") == "Xxx");
  CHECK(WordShape("Donaudampfschiff") == "Xxxxx");
  CHECK(WordShape("10:30") == "dd:dd");
  CHECK(WordShape("1990s") == "ddddx");
  CHECK(WordShape("Zürich") == "Xxxxx");
  const auto g = ExtractFeatures("Mai");
  CHECK(g[0].value == "mai");
  CHECK(g[2].value == "Mai");
  const auto h = ExtractFeatures("É");
  CHECK(h[1].value == "É");
  CHECK(h[2].value == "É");
}

TEST_CASE("feature codes match an independent fnv-1a") {
  CHECK(Fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  for (const char* v : {"", "may", "2023", "Xxx", "straße"}) {
    for (int k = 0; k < 4; ++k) {
      std::string bytes(1, static_cast<char>(k));
      bytes += v;
      CHECK(FeatureCode(static_cast<FeatureKind>(k), v) == Fnv1a(bytes));
    }
  }
  // splitmix64 first output for state 0.
  CHECK(MixHash(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(std::string(kHashAlgorithm) == "fnv1a64-splitmix64/v1");
}

TEST_CASE("identical features give identical vectors") {
  const BloomTable t = RandomTable(512, 8, 2, 3);
  CHECK(EmbedToken(t, "May") == EmbedToken(t, "May"));
  CHECK(EmbedToken(t, "May") != EmbedToken(t, "June"));
}

TEST_CASE("single-row table collapses every feature") {
  const BloomTable t = RandomTable(1, 4, 3, 5);
  const auto v = EmbedToken(t, "anything");
  for (size_t f = 0; f < kFeatureKinds; ++f) {
    for (size_t j = 0; j < 4; ++j) CHECK(v[f * 4 + j] == doctest::Approx(3 * t.weights()[j]));
  }
  CHECK(EmbedToken(t, "other") == v);
}

TEST_CASE("embedding sums the hashed rows") {
  const BloomTable t = RandomTable(64, 3, 2, 9);
  const auto features = ExtractFeatures("Monday");
  const auto rows = t.Rows(features);
  const auto v = EmbedToken(t, "Monday");
  for (size_t f = 0; f < kFeatureKinds; ++f) {
    for (size_t d = 0; d < 3; ++d) {
      float expected = 0;
      for (size_t j = 0; j < 2; ++j) {
        const uint64_t r = MixHash(features[f].code, t.seeds()[j]) % 64;
        CHECK(rows.rows[f * 2 + j] == r);
        expected += t.weights()[r * 3 + d];
      }
      CHECK(v[f * 3 + d] == doctest::Approx(expected));
    }
  }
}

TEST_CASE("bloom backward is the adjoint of embed") {
  const BloomTable t = RandomTable(32, 4, 2, 2);
  BloomTable grad(32, 4, t.seeds());
  const auto rows = t.Rows("yesterday");
  std::vector<float> d(t.token_width());
  Rng rng(1);
  for (float& x : d) x = static_cast<float>(rng.Uniform(-1, 1));
  t.Backward(rows, d.data(), &grad);
  // <d, Embed(w)> is linear in w with gradient `grad`.
  std::vector<float> v(t.token_width());
  t.Embed(rows, v.data());
  double lhs = 0, rhs = 0;
  for (size_t i = 0; i < v.size(); ++i) lhs += double(d[i]) * v[i];
  for (size_t i = 0; i < t.weights().size(); ++i) rhs += double(grad.weights()[i]) * t.weights()[i];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
}

TEST_CASE("context windows") {
  const std::vector<float> tokens = {1, 2, 3, 4, 5, 6};  // three tokens of width 2
  const std::vector<float> pad = {-1, -2};
  std::vector<float> out(2);
  EncodeContext<float>(tokens, 2, pad, ContextConfig{0}, 1, out.data());
  CHECK(out == std::vector<float>{3, 4});
  const std::vector<float> one = {7, 8};
  out.assign(10, 0);
  EncodeContext<float>(one, 2, pad, ContextConfig{2}, 0, out.data());
  CHECK(out == std::vector<float>{-1, -2, -1, -2, 7, 8, -1, -2, -1, -2});
  CHECK(ContextWidth(ContextConfig{2}, 256) == 1280);
}

TEST_CASE("table construction errors") {
  CHECK_THROWS_AS(BloomTable(0, 4, {1}), Error);
  CHECK_THROWS_AS(BloomTable(4, 0, {1}), Error);
  CHECK_THROWS_AS(BloomTable(4, 4, {}), Error);
  CHECK_THROWS_AS(BloomTable(4, 4, {1, 1}), Error);
  CHECK_THROWS_AS(BloomTable(4, 4, std::vector<uint64_t>(kMaxHashes + 1, 0)), Error);
  const auto seeds = DeriveHashSeeds(7, 4);
  CHECK(std::set<uint64_t>(seeds.begin(), seeds.end()).size() == 4);
  CHECK(DeriveHashSeeds(7, 4) == seeds);
}

TEST_CASE("hashed rows behave like uniform draws") {
  // Monte Carlo over 1e6 distinct feature pairs with R = 4096, k = 2.
  const size_t rows = 4096;
  const auto seeds = DeriveHashSeeds(1, 2);
  const size_t pairs = 1000000;
  size_t single = 0;  // first hash collides
  size_t full = 0;    // both hashes collide
  std::vector<size_t> histogram(rows, 0);
  for (size_t i = 0; i < pairs; ++i) {
    const uint64_t a = FeatureCode(FeatureKind::kNorm, "w" + std::to_string(2 * i));
    const uint64_t b = FeatureCode(FeatureKind::kNorm, "w" + std::to_string(2 * i + 1));
    const uint64_t a0 = MixHash(a, seeds[0]) % rows;
    const uint64_t b0 = MixHash(b, seeds[0]) % rows;
    ++histogram[a0];
    if (a0 == b0) {
      ++single;
      if (MixHash(a, seeds[1]) % rows == MixHash(b, seeds[1]) % rows) ++full;
    }
  }
  // Expected single collisions: pairs / R = 244.1, sd ~15.6.
  const double expected = double(pairs) / rows;
  CHECK(std::abs(double(single) - expected) < 5 * std::sqrt(expected));
  // Expected full collisions: pairs / R^2 ~ 0.06.
  CHECK(full <= 3);
  // Chi-square of the first-hash histogram, 4095 degrees of freedom.
  const double mean = double(pairs) / rows;
  double chi2 = 0;
  for (size_t c : histogram) chi2 += (double(c) - mean) * (double(c) - mean) / mean;
  CHECK(chi2 < 4095 + 6 * std::sqrt(2.0 * 4095));
  CHECK(chi2 > 4095 - 6 * std::sqrt(2.0 * 4095));
}
