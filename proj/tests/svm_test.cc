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

#include "marketguard/svm.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "marketguard/error.h"
#include "marketguard/model_io.h"
#include "test_util.h"

namespace marketguard {
namespace {

using testing::Dataset;

// Two symmetric points. The hard-margin solution is w = (1, 0), b = 0 with
// both points on their boundaries, alpha = (1/2, 1/2).
Dataset TwoPoint() {
  return {{{-1.0, 0.0}, {1.0, 0.0}}, {Label::kNormal, Label::kFraudulent}};
}

TrainConfig HardMargin() {
  TrainConfig config;
  config.c = 1e6;
  return config;
}

Dataset Xor() {
  return {{{0, 0}, {1, 1}, {0, 1}, {1, 0}},
          {Label::kFraudulent, Label::kFraudulent, Label::kNormal,
           Label::kNormal}};
}

TEST_CASE("kernel_eval examples") {
  const Sample a{1, 2}, b{3, 4};
  CHECK(kernel_eval(Kernel::Linear(), a, b) == 11.0);
  const Sample p{0.3, 0.7};
  CHECK(kernel_eval(Kernel::Rbf(1.0), p, p) == 1.0);
  CHECK(kernel_eval(Kernel::Polynomial(2, 1.0), Sample{1, 0}, Sample{0, 1}) ==
        1.0);
  CHECK_THROWS_AS(kernel_eval(Kernel::Linear(), Sample{1}, Sample{1, 2}),
                  InvalidInputError);
}

TEST_CASE("kernel factories reject invalid parameters") {
  CHECK_THROWS_AS(Kernel::Rbf(0.0), InvalidInputError);
  CHECK_THROWS_AS(Kernel::Rbf(-1.0), InvalidInputError);
  CHECK_THROWS_AS(Kernel::Polynomial(0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(Kernel::Polynomial(2, -0.5), InvalidInputError);
  CHECK(std::get<RbfKernel>(Kernel::DefaultRbf(4).variant()).gamma == 0.25);
}

TEST_CASE("kernels are symmetric and rbf lies in (0, 1]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = static_cast<std::size_t>(1 + trial % 5);
    const Sample a = testing::RandomProbe(rng, d);
    const Sample b = testing::RandomProbe(rng, d);
    for (int k = 0; k < 3; ++k) {
      const Kernel kernel = testing::KernelForIndex(k);
      CHECK(kernel_eval(kernel, a, b) == kernel_eval(kernel, b, a));
    }
    const double r = kernel_eval(Kernel::Rbf(0.5), a, b);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("two-point hard margin matches the analytic solution") {
  const auto data = TwoPoint();
  const SvmModel model =
      train_smo(data.samples, data.labels, Kernel::Linear(), HardMargin());
  const auto w = primal_weights(model);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(w[1]) <= 1e-4);
  CHECK(std::abs(model.bias) <= 1e-4);
  CHECK(margin(model) == doctest::Approx(1.0).epsilon(1e-4));
  REQUIRE(model.alphas.size() == 2);
  CHECK(model.alphas[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(model.alphas[1] == doctest::Approx(0.5).epsilon(1e-6));

  CHECK(decision_value(model, Sample{2, 0}) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(std::abs(decision_value(model, Sample{0, 0})) <= 1e-4);
  CHECK(decision_value(model, Sample{-1, 0}) == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(decision_value(model, Sample{1, 0}) == doctest::Approx(1.0).epsilon(1e-4));

  CHECK(classify(model, Sample{2, 0}) == Label::kFraudulent);
  CHECK(classify(model, Sample{-1, 0}) == Label::kNormal);
}

TEST_CASE("classify sends exact zero to the fraudulent class") {
  SvmModel model;
  model.kernel = Kernel::Linear();
  model.dimension = 2;
  model.bias = 0.0;
  CHECK(decision_value(model, Sample{5, 5}) == 0.0);
  CHECK(classify(model, Sample{5, 5}) == Label::kFraudulent);
  model.bias = -1.0;
  CHECK(classify(model, Sample{5, 5}) == Label::kNormal);
  model.bias = 2.0;
  CHECK(classify(model, Sample{5, 5}) == Label::kFraudulent);
}

TEST_CASE("margin and boundary distance") {
  const auto data = TwoPoint();
  const SvmModel model =
      train_smo(data.samples, data.labels, Kernel::Linear(), HardMargin());
  const auto w = primal_weights(model);
  const double norm = std::hypot(w[0], w[1]);
  CHECK(margin(model) == doctest::Approx(1.0 / norm).epsilon(1e-12));
  CHECK(2.0 * margin(model) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("margin of a model without weight is degenerate") {
  SvmModel model;
  model.kernel = Kernel::Linear();
  model.dimension = 2;
  CHECK_THROWS_AS(margin(model), DegenerateModelError);
  model.support_samples = {{1, 0}, {-1, 0}};
  model.support_labels = {Label::kFraudulent, Label::kNormal};
  model.alphas = {0.0, 0.0};
  CHECK_THROWS_AS(margin(model), DegenerateModelError);
}

// Under x -> -x the optimal hyperplane is (-w, b); under y -> -y it is
// (-w, -b). Applying both leaves w unchanged and flips b.
TEST_CASE("primal weights under mirrored data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = testing::RandomDataset(rng, 8, 3);
    Dataset negated = data;
    for (auto &s : negated.samples) {
      for (auto &v : s) v = -v;
    }
    Dataset swapped = data;
    for (auto &l : swapped.labels) {
      l = l == Label::kFraudulent ? Label::kNormal : Label::kFraudulent;
    }
    Dataset both = negated;
    both.labels = swapped.labels;

    TrainConfig config;
    config.c = 10.0;
    const SvmModel base =
        train_smo(data.samples, data.labels, Kernel::Linear(), config);
    const SvmModel neg =
        train_smo(negated.samples, negated.labels, Kernel::Linear(), config);
    const SvmModel swp =
        train_smo(swapped.samples, swapped.labels, Kernel::Linear(), config);
    const SvmModel mir =
        train_smo(both.samples, both.labels, Kernel::Linear(), config);
    const auto w = primal_weights(base);
    const auto wn = primal_weights(neg);
    const auto ws = primal_weights(swp);
    const auto wm = primal_weights(mir);
    for (std::size_t k = 0; k < w.size(); ++k) {
      CHECK(wn[k] == doctest::Approx(-w[k]).epsilon(1e-2).scale(1.0));
      CHECK(ws[k] == doctest::Approx(-w[k]).epsilon(1e-2).scale(1.0));
      CHECK(wm[k] == doctest::Approx(w[k]).epsilon(1e-2).scale(1.0));
    }
  }
}

TEST_CASE("primal weights are unsupported for non-linear kernels") {
  const auto data = Xor();
  TrainConfig config;
  config.c = 10.0;
  const SvmModel model =
      train_smo(data.samples, data.labels, Kernel::Rbf(1.0), config);
  CHECK_THROWS_AS(primal_weights(model), UnsupportedOperationError);
}

TEST_CASE("xor is separated by the rbf kernel") {
  const auto data = Xor();
  TrainConfig config;
  config.c = 10.0;
  const SvmModel model =
      train_smo(data.samples, data.labels, Kernel::Rbf(1.0), config);
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    CHECK(classify(model, data.samples[i]) == data.labels[i]);
  }
  // A linear machine cannot get all four right.
  const SvmModel linear =
      train_smo(data.samples, data.labels, Kernel::Linear(), config);
  int correct = 0;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    correct += classify(linear, data.samples[i]) == data.labels[i];
  }
  CHECK(correct < 4);
}

TEST_CASE("train_smo input errors") {
  TrainConfig config;
  SUBCASE("single class") {
    const std::vector<Sample> x{{0, 0}, {1, 1}, {2, 2}};
    const std::vector<Label> y(3, Label::kFraudulent);
    try {
      train_smo(x, y, Kernel::Linear(), config);
      FAIL("expected TrainingError");
    } catch (const TrainingError &e) {
      CHECK(std::string(e.what()) == "degenerate labels");
    }
  }
  SUBCASE("dimension mismatch") {
    const std::vector<Sample> x{{0, 0}, {1}};
    const std::vector<Label> y{Label::kFraudulent, Label::kNormal};
    CHECK_THROWS_AS(train_smo(x, y, Kernel::Linear(), config), InvalidInputError);
  }
  SUBCASE("too few samples") {
    const std::vector<Sample> x{{0, 0}};
    const std::vector<Label> y{Label::kFraudulent};
    CHECK_THROWS_AS(train_smo(x, y, Kernel::Linear(), config), InvalidInputError);
  }
  SUBCASE("invalid config") {
    const auto data = TwoPoint();
    config.c = 0.0;
    CHECK_THROWS_AS(train_smo(data.samples, data.labels, Kernel::Linear(), config),
                    InvalidInputError);
  }
}

TEST_CASE("pass budget exhaustion raises a convergence error") {
  std::mt19937_64 rng(3);
  Dataset data;
  for (int i = 0; i < 60; ++i) {
    data.samples.push_back(testing::RandomProbe(rng, 3));
    data.labels.push_back(i % 2 ? Label::kFraudulent : Label::kNormal);
  }
  TrainConfig config;
  config.c = 100.0;
  config.max_passes = 1;
  try {
    train_smo(data.samples, data.labels, Kernel::Rbf(2.0), config);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError &e) {
    CHECK(e.passes() == 1);
    CHECK(e.kkt_gap() >= 0.0);
    CHECK(e.support_count() > 0);
  }
}

TEST_CASE("kkt_violation examples") {
  const auto data = TwoPoint();
  const TrainConfig config = HardMargin();
  SvmModel model = train_smo(data.samples, data.labels, Kernel::Linear(), config);
  CHECK(kkt_violation(model, data.samples, data.labels, config) <= config.kkt_tol);
  CHECK(kkt_violation(model, {}, {}, config) == 0.0);

  // Shifting the bias by +1 moves both points one unit off their boundaries.
  model.bias += 1.0;
  CHECK(kkt_violation(model, data.samples, data.labels, config) >=
        1.0 - config.kkt_tol);
  CHECK_THROWS_AS(kkt_violation(model, std::vector<Sample>{{1.0}},
                                std::vector<Label>{Label::kNormal}, config),
                  InvalidInputError);
}

TEST_CASE("trained models are dual feasible and KKT converged") {
  std::mt19937_64 rng(1234);
  const double cs[] = {0.1, 1.0, 10.0, 1e4};
  for (int trial = 0; trial < 120; ++trial) {
    const Dataset data = testing::RandomDataset(rng, 40, 4);
    TrainConfig config;
    config.c = cs[trial % 4];
    config.rng_seed = static_cast<std::uint64_t>(trial);
    const Kernel kernel = testing::KernelForIndex(trial);
    const SvmModel model = train_smo(data.samples, data.labels, kernel, config);
    double balance = 0.0;
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < model.support_count(); ++i) {
      CHECK(model.alphas[i] > 0.0);
      CHECK(model.alphas[i] <= config.c);
      balance += model.alphas[i] * ToSign(model.support_labels[i]);
      has_pos |= model.support_labels[i] == Label::kFraudulent;
      has_neg |= model.support_labels[i] == Label::kNormal;
    }
    CHECK(std::abs(balance) <= config.kkt_tol);
    CHECK(has_pos);
    CHECK(has_neg);
    CHECK(kkt_violation(model, data.samples, data.labels, config) <=
          config.kkt_tol);
  }
}

TEST_CASE("separable data puts support vectors on the boundaries") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const Dataset data = testing::SeparableDataset(rng, 6 + trial % 20, d);
    TrainConfig config;
    config.c = 1e3;
    const SvmModel model =
        train_smo(data.samples, data.labels, Kernel::Linear(), config);
    double min_abs = 1e300;
    for (const auto &sv : model.support_samples) {
      min_abs = std::min(min_abs, std::abs(decision_value(model, sv)));
    }
    CHECK(min_abs >= 1.0 - 10 * config.kkt_tol);
    CHECK(min_abs <= 1.0 + 10 * config.kkt_tol);
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      CHECK(ToSign(data.labels[i]) * decision_value(model, data.samples[i]) >=
            1.0 - 10 * config.kkt_tol);
    }
  }
}

TEST_CASE("linear decision value equals w.x + b") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = testing::RandomDataset(rng, 20, 3);
    TrainConfig config;
    const SvmModel model =
        train_smo(data.samples, data.labels, Kernel::Linear(), config);
    const auto w = primal_weights(model);
    for (int p = 0; p < 10; ++p) {
      const Sample x = testing::RandomProbe(rng, model.dimension);
      double primal = model.bias;
      for (std::size_t k = 0; k < w.size(); ++k) primal += w[k] * x[k];
      CHECK(std::abs(decision_value(model, x) - primal) <= 1e-9);
    }
  }
}

TEST_CASE("training is deterministic and order independent") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = testing::RandomDataset(rng, 30, 3);
    TrainConfig config;
    config.rng_seed = 17;
    const Kernel kernel = testing::KernelForIndex(trial);
    const SvmModel a = train_smo(data.samples, data.labels, kernel, config);
    const SvmModel b = train_smo(data.samples, data.labels, kernel, config);
    std::ostringstream sa, sb;
    write_model(sa, a);
    write_model(sb, b);
    CHECK(sa.str() == sb.str());

    Dataset shuffled = data;
    std::vector<std::size_t> perm(data.samples.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.samples[i] = data.samples[perm[i]];
      shuffled.labels[i] = data.labels[perm[i]];
    }
    const SvmModel c = train_smo(shuffled.samples, shuffled.labels, kernel, config);
    for (int p = 0; p < 10; ++p) {
      const Sample x = testing::RandomProbe(rng, a.dimension);
      CHECK(std::abs(decision_value(a, x) - decision_value(c, x)) <= 1e-6);
    }
  }
}

}  // namespace
}  // namespace marketguard
