// Copyright 2026 The MarketGuard Authors.
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

#include "marketguard/qp_oracle.h"

#include <cmath>
#include <random>

#include "doctest.h"
#include "marketguard/error.h"
#include "test_util.h"

namespace marketguard {
namespace {

using testing::Dataset;

void CheckFeasible(const DualSolution &s, const Dataset &data, double c) {
  double balance = 0.0;
  for (std::size_t i = 0; i < s.alphas.size(); ++i) {
    CHECK(s.alphas[i] >= 0.0);
    CHECK(s.alphas[i] <= c);
    balance += s.alphas[i] * ToSign(data.labels[i]);
  }
  CHECK(std::abs(balance) <= 1e-9 * std::max(1.0, c));
}

TEST_CASE("two-point dual solution") {
  // Hand derivation: w = (1, 0) needs alpha_1 = alpha_2 = 1/2 and gives a
  // dual objective of 1 - 1/2 |w|^2 = 0.5.
  const Dataset data{{{-1.0, 0.0}, {1.0, 0.0}},
                     {Label::kNormal, Label::kFraudulent}};
  const auto s = qp_oracle(data.samples, data.labels, Kernel::Linear(), 1e6);
  REQUIRE(s.alphas.size() == 2);
  CHECK(s.alphas[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(s.alphas[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(s.objective == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(s.bias) <= 1e-9);
  CheckFeasible(s, data, 1e6);
}

TEST_CASE("vanishing c collapses every alpha") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = testing::RandomDataset(rng);
    const double c = 1e-9;
    const auto s = qp_oracle(data.samples, data.labels, Kernel::Rbf(1.0), c);
    for (double a : s.alphas) CHECK(a <= c);
    CheckFeasible(s, data, c);
  }
}

TEST_CASE("size limit") {
  std::vector<Sample> x(13, Sample{0.0});
  std::vector<Label> y(13, Label::kNormal);
  y[0] = Label::kFraudulent;
  CHECK_THROWS_AS(qp_oracle(x, y, Kernel::Linear(), 1.0), OracleError);
}

TEST_CASE("iteration budget exhaustion is reported") {
  const Dataset data{{{0, 0}, {1, 1}, {0, 1}, {1, 0}},
                     {Label::kFraudulent, Label::kFraudulent, Label::kNormal,
                      Label::kNormal}};
  OracleConfig config;
  config.max_iterations = 1;
  CHECK_THROWS_AS(qp_oracle(data.samples, data.labels, Kernel::Rbf(1.0), 10.0,
                            config),
                  OracleError);
}

TEST_CASE("objective is stable under 10x more iterations") {
  std::mt19937_64 rng(21);
  const double cs[] = {1.0, 10.0, 1e4};
  for (int trial = 0; trial < 15; ++trial) {
    const Dataset data = testing::RandomDataset(rng);
    const double c = cs[trial % 3];
    const Kernel kernel = testing::KernelForIndex(trial);
    OracleConfig base;
    base.tolerance = 0.0;
    base.max_iterations = 20000;
    OracleConfig longer = base;
    longer.max_iterations = 200000;
    const auto a = qp_oracle(data.samples, data.labels, kernel, c, base);
    const auto b = qp_oracle(data.samples, data.labels, kernel, c, longer);
    CHECK(std::abs(a.objective - b.objective) <= 1e-6);
    CheckFeasible(a, data, c);
    CheckFeasible(b, data, c);
  }
}

TEST_CASE("xor oracle agrees with smo") {
  const Dataset data{{{0, 0}, {1, 1}, {0, 1}, {1, 0}},
                     {Label::kFraudulent, Label::kFraudulent, Label::kNormal,
                      Label::kNormal}};
  const Kernel kernel = Kernel::Rbf(1.0);
  const auto oracle = qp_oracle(data.samples, data.labels, kernel, 10.0);
  TrainConfig config;
  config.c = 10.0;
  const SvmModel model = train_smo(data.samples, data.labels, kernel, config);
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const double expected = oracle_decision_value(oracle, data.samples, data.labels,
                                                  kernel, data.samples[i]);
    CHECK(std::abs(decision_value(model, data.samples[i]) - expected) <= 1e-2);
    CHECK((expected >= 0.0) == (data.labels[i] == Label::kFraudulent));
  }
  CHECK(dual_objective(model) == doctest::Approx(oracle.objective).epsilon(1e-3));
}

TEST_CASE("oracle and smo agree on random problems") {
  std::mt19937_64 rng(2024);
  const double cs[] = {1.0, 10.0, 1e4};
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset data = testing::RandomDataset(rng);
    const double c = cs[trial % 3];
    const Kernel kernel = testing::KernelForIndex(trial / 3);
    const auto oracle = qp_oracle(data.samples, data.labels, kernel, c);
    CheckFeasible(oracle, data, c);
    TrainConfig config;
    config.c = c;
    const SvmModel model = train_smo(data.samples, data.labels, kernel, config);
    CHECK(std::abs(dual_objective(model) - oracle.objective) <=
          1e-3 * std::abs(oracle.objective));
    for (int p = 0; p < 20; ++p) {
      const Sample x = testing::RandomProbe(rng, data.samples[0].size());
      const double expected =
          oracle_decision_value(oracle, data.samples, data.labels, kernel, x);
      CHECK(std::abs(decision_value(model, x) - expected) <= 1e-2);
    }
  }
}

}  // namespace
}  // namespace marketguard
