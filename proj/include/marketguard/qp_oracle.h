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

// Reference solver for the C-SVM dual on tiny problems. It shares no code
// with the SMO trainer and exists to cross-check it.
//
//   maximise   sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)
//   subject to 0 <= a_i <= c,  sum_i a_i y_i = 0
//
// Solved by accelerated projected-gradient ascent. The projection onto the
// box intersected with the hyperplane is computed by bisection on the
// multiplier of the equality constraint.

#ifndef MARKETGUARD_QP_ORACLE_H_
#define MARKETGUARD_QP_ORACLE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "marketguard/svm.h"
#include "marketguard/types.h"

namespace marketguard {

inline constexpr std::size_t kOracleMaxSamples = 12;

struct OracleConfig {
  int max_iterations = 200000;
  // Stop once the projected-gradient step moves no coordinate by more than
  // tolerance * max(1, c). Zero runs exactly max_iterations.
  double tolerance = 1e-13;
  // Residual accepted after max_iterations before reporting non-convergence.
  double accept_residual = 1e-7;
};

struct DualSolution {
  std::vector<double> alphas;  // one per training sample, zeros included
  double objective = 0.0;
  double bias = 0.0;
  int iterations = 0;
};

// Throws OracleError for m > 12 or non-convergence.
DualSolution qp_oracle(std::span<const Sample> samples,
                       std::span<const Label> labels, const Kernel &kernel,
                       double c, const OracleConfig &config = {});

double oracle_decision_value(const DualSolution &solution,
                             std::span<const Sample> samples,
                             std::span<const Label> labels,
                             const Kernel &kernel, std::span<const double> x);

}  // namespace marketguard

#endif  // MARKETGUARD_QP_ORACLE_H_
