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

// Soft-margin (C-SVM) binary classifier trained with sequential minimal
// optimization.
//
// The decision function is
//
//   f(x) = sum_i alpha_i * y_i * k(x_i, x) + b
//
// which reduces to w.x + b for the linear kernel, with
// w = sum_i alpha_i * y_i * x_i. The classification boundaries are the level
// sets f = -1 and f = +1; their distance from the hyperplane f = 0 is the
// margin 1/|w|.

#ifndef MARKETGUARD_SVM_H_
#define MARKETGUARD_SVM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "marketguard/types.h"

namespace marketguard {

struct LinearKernel {
  bool operator==(const LinearKernel &) const = default;
};

// (a.b + offset)^degree
struct PolynomialKernel {
  int degree = 2;
  double offset = 1.0;
  bool operator==(const PolynomialKernel &) const = default;
};

// exp(-gamma * |a - b|^2)
struct RbfKernel {
  double gamma = 1.0;
  bool operator==(const RbfKernel &) const = default;
};

// A validated kernel. Construct through the factories, which reject
// gamma <= 0, degree < 1 and offset < 0.
class Kernel {
 public:
  using Variant = std::variant<LinearKernel, PolynomialKernel, RbfKernel>;

  Kernel() = default;

  static Kernel Linear();
  static Kernel Polynomial(int degree, double offset);
  static Kernel Rbf(double gamma);
  // Conventional default gamma = 1/d.
  static Kernel DefaultRbf(std::size_t dimension);

  const Variant &variant() const { return variant_; }
  bool is_linear() const {
    return std::holds_alternative<LinearKernel>(variant_);
  }
  std::string name() const;

  bool operator==(const Kernel &) const = default;

 private:
  explicit Kernel(Variant v) : variant_(v) {}
  Variant variant_;
};

double kernel_eval(const Kernel &kernel, std::span<const double> a,
                   std::span<const double> b);

struct TrainConfig {
  double c = 1.0;
  // Convergence threshold on the maximum KKT violation.
  double kkt_tol = 1e-3;
  // Numeric equality for alpha bound tests.
  double value_eps = 1e-8;
  int max_passes = 200;
  std::uint64_t rng_seed = 0;

  // Throws InvalidInputError unless every field is positive.
  void Validate() const;
  // Alphas below this (or within it of c) are treated as at bound.
  double bound_eps() const;

  bool operator==(const TrainConfig &) const = default;
};

// A trained classifier. Only support samples (alpha > 0) are kept.
struct SvmModel {
  Kernel kernel;
  std::size_t dimension = 0;
  std::vector<Sample> support_samples;
  std::vector<Label> support_labels;
  std::vector<double> alphas;
  double bias = 0.0;
  TrainConfig config;

  std::size_t support_count() const { return support_samples.size(); }
};

// Extra information reported by train_smo.
struct TrainStats {
  int passes = 0;
  int steps = 0;
  // Final gap between the most violating lower and upper bias bounds.
  double kkt_gap = 0.0;
};

// Trains a C-SVM with Platt's SMO. The training set is sorted
// lexicographically before optimisation, so the result does not depend on
// input order. Throws TrainingError("degenerate labels") when only one class
// is present and ConvergenceError when max_passes is exhausted.
SvmModel train_smo(std::span<const Sample> samples,
                   std::span<const Label> labels, const Kernel &kernel,
                   const TrainConfig &config, TrainStats *stats = nullptr);

double decision_value(const SvmModel &model, std::span<const double> x);

// +1 when decision_value >= 0 (ties go to the fraudulent class).
Label classify(const SvmModel &model, std::span<const double> x);

// |w|^2 = sum_ij alpha_i alpha_j y_i y_j k(x_i, x_j).
double weight_norm_squared(const SvmModel &model);

// M = 1/|w|. Throws DegenerateModelError when |w|^2 <= value_eps.
double margin(const SvmModel &model);

// w = sum_i alpha_i y_i x_i. Linear kernel only.
std::vector<double> primal_weights(const SvmModel &model);

// sum_i alpha_i - 1/2 |w|^2
double dual_objective(const SvmModel &model);

// Maximum KKT violation of the model over a training set:
//   alpha = 0      -> max(0, 1 - y f)
//   0 < alpha < c  -> |y f - 1|
//   alpha = c      -> max(0, y f - 1)
// Training points are matched to support samples by value; unmatched points
// have alpha = 0. Returns 0 for an empty set.
double kkt_violation(const SvmModel &model, std::span<const Sample> samples,
                     std::span<const Label> labels, const TrainConfig &config);

}  // namespace marketguard

#endif  // MARKETGUARD_SVM_H_
