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

#include "doctest.h"
#include "oracles.h"
#include "teigo/network.h"

using namespace teigo;

namespace {

BasicScorerParams<double> SmallScorer(size_t window, std::vector<size_t> hidden, Rng* rng) {
  BasicScorerParams<double> p;
  p.table = BasicBloomTable<double>(16, 3, {11, 22});
  p.boundary.assign(p.table.token_width(), 0.0);
  std::vector<size_t> sizes = {ContextWidth(ContextConfig{window}, p.table.token_width()) +
                               kStateFeatures};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(kNumActions);
  p.mlp = BasicMlp<double>::WithShape(sizes);
  oracle::Randomize(&p, rng, 0.5);
  return p;
}

std::vector<TokenRows> RowsFor(const BasicBloomTable<double>& table,
                               std::initializer_list<const char*> words) {
  std::vector<TokenRows> rows;
  for (const char* w : words) rows.push_back(table.Rows(w));
  return rows;
}

}  // namespace

TEST_CASE("valid action masks") {
  auto set = [](bool inside, bool last) {
    const ActionMask m = ValidActionMask(inside, last);
    std::string s;
    for (size_t a = 0; a < kNumActions; ++a) s += m[a] ? "1" : "0";
    return s;
  };
  CHECK(set(false, false) == "10011");
  CHECK(set(false, true) == "00011");
  CHECK(set(true, false) == "01100");
  CHECK(set(true, true) == "00100");
}

TEST_CASE("state features") {
  CHECK(StateFeatures<double>(false, 3) == std::array<double, 2>{0, 0});
  CHECK(StateFeatures<double>(true, 0) == std::array<double, 2>{1, 0});
  CHECK(StateFeatures<double>(true, 4) == std::array<double, 2>{1, 0.5});
  CHECK(StateFeatures<double>(true, 50) == std::array<double, 2>{1, 1});
}

TEST_CASE("masked cross entropy") {
  const std::array<double, 5> scores = {1.0, 100.0, -2.0, 0.5, 0.0};
  std::array<double, 5> d{};
  const ActionMask mask = ValidActionMask(false, false);  // B, U, O
  const double loss = MaskedCrossEntropy<double>(scores, mask, 3, d);
  const double z = std::exp(1.0) + std::exp(0.5) + std::exp(0.0);
  CHECK(loss == doctest::Approx(std::log(z) - 0.5));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 0.0);
  CHECK(d[0] == doctest::Approx(std::exp(1.0) / z));
  CHECK(d[3] == doctest::Approx(std::exp(0.5) / z - 1));
  CHECK(d[0] + d[3] + d[4] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(5);
  for (size_t window : {0, 1, 2}) {
    for (const auto& hidden : {std::vector<size_t>{7}, std::vector<size_t>{6, 5}}) {
      CAPTURE(window);
      CAPTURE(hidden.size());
      BasicScorerParams<double> params = SmallScorer(window, hidden, &rng);
      const ContextConfig context{window};
      const auto rows = RowsFor(params.table, {"in", "May", "2023"});
      const std::vector<BiluoTag> gold = {BiluoTag::kO, BiluoTag::kB, BiluoTag::kL};
      BasicScorerParams<double> grad = params.ZerosLike();
      SequenceLoss<double>(params, context, rows, gold, 0, 3, &grad);
      const auto result = oracle::GradientCheck(
          &params, &grad,
          [&] { return SequenceLoss<double>(params, context, rows, gold, 0, 3, nullptr); },
          1e-4, 1e-3);
      CHECK(result.failures == 0);
      CHECK(result.max_relative_error < 1e-3);
    }
  }
}

TEST_CASE("a sub-range loss sees gold state and context from outside the range") {
  Rng rng(8);
  BasicScorerParams<double> params = SmallScorer(1, {6}, &rng);
  const auto rows = RowsFor(params.table, {"on", "26", "May", "2023", "."});
  const std::vector<BiluoTag> gold = {BiluoTag::kO, BiluoTag::kB, BiluoTag::kI,
                                      BiluoTag::kL, BiluoTag::kO};
  const ContextConfig context{1};
  double parts = 0;
  for (size_t t = 0; t < 5; ++t) {
    parts += SequenceLoss<double>(params, context, rows, gold, t, t + 1, nullptr);
  }
  CHECK(parts == doctest::Approx(SequenceLoss<double>(params, context, rows, gold, 0, 5, nullptr)));
}

TEST_CASE("teacher forcing makes each token loss independent of earlier scores") {
  Rng rng(9);
  BasicScorerParams<double> params = SmallScorer(0, {4}, &rng);
  const auto rows = RowsFor(params.table, {"a", "b", "c"});
  const std::vector<BiluoTag> gold = {BiluoTag::kO, BiluoTag::kO, BiluoTag::kU};
  const double last = SequenceLoss<double>(params, ContextConfig{0}, rows, gold, 2, 3, nullptr);
  // With window 0, changing token 0's features cannot change token 2's loss.
  auto other = rows;
  other[0] = params.table.Rows("zzz");
  CHECK(SequenceLoss<double>(params, ContextConfig{0}, other, gold, 2, 3, nullptr) == last);
}

TEST_CASE("dropout is inverted and recorded in the trace") {
  Rng rng(3);
  BasicMlp<double> mlp = BasicMlp<double>::WithShape(std::vector<size_t>{4, 50, 5});
  for (auto& l : mlp.layers) {
    for (double& w : l.weight) w = rng.Uniform(0.1, 1.0);
  }
  const std::vector<double> x = {1, 1, 1, 1};
  MlpTrace<double> trace;
  Rng drop(1);
  MlpForward<double>(mlp, x, &trace, 0.5, &drop);
  REQUIRE(trace.masks[0].size() == 50);
  size_t zeros = 0;
  for (double m : trace.masks[0]) {
    CHECK((m == 0.0 || m == 2.0));
    zeros += m == 0.0;
  }
  CHECK(zeros > 10);
  CHECK(zeros < 40);
  MlpForward<double>(mlp, x, &trace, 0.0, &drop);
  CHECK(trace.masks[0].empty());
}
