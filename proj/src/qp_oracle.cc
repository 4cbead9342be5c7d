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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "marketguard/error.h"

namespace marketguard {
namespace {

using Vec = std::vector<double>;

struct DualProblem {
  std::size_t m;
  double c;
  Vec y;
  Vec q;  // q[i*m+j] = y_i y_j k(x_i, x_j)

  double Q(std::size_t i, std::size_t j) const { return q[i * m + j]; }

  double Objective(const Vec &a) const {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      lin += a[i];
      for (std::size_t j = 0; j < m; ++j) quad += a[i] * a[j] * Q(i, j);
    }
    return lin - 0.5 * quad;
  }

  // Gradient of the objective: 1 - Q a.
  Vec Gradient(const Vec &a) const {
    Vec g(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) g[i] -= Q(i, j) * a[j];
    }
    return g;
  }

  // Euclidean projection onto {0 <= a <= c, y.a = 0}. The projection is
  // clip(v - mu y) for the mu solving h(mu) = y.clip(v - mu y) = 0. h is
  // piecewise linear and non-increasing, so the root is found exactly by
  // locating the bracketing pair of breakpoints and interpolating.
  Vec Project(const Vec &v) const {
    auto h = [&](double mu) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        s += y[i] * std::clamp(v[i] - mu * y[i], 0.0, c);
      }
      return s;
    };
    Vec points;
    points.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      points.push_back(v[i] * y[i]);
      points.push_back((v[i] - c) * y[i]);
    }
    std::sort(points.begin(), points.end());
    double mu = points.front();
    double h_prev = h(points.front());
    if (h_prev > 0.0) {
      for (std::size_t k = 1; k < points.size(); ++k) {
        const double h_next = h(points[k]);
        if (h_next <= 0.0) {
          const double t = h_prev / (h_prev - h_next);
          mu = points[k - 1] + t * (points[k] - points[k - 1]);
          break;
        }
        h_prev = h_next;
        mu = points[k];
      }
    }
    Vec out(m);
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = std::clamp(v[i] - mu * y[i], 0.0, c);
    }
    return out;
  }
};

double Bias(const DualProblem &p, const Vec &a) {
  const Vec grad = p.Gradient(a);
  // y_i - g_i where g_i = sum_j a_j y_j k_ij; (Qa)_i = y_i g_i.
  const double delta = 1e-9 * p.c;
  double sum = 0.0;
  int free = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.m; ++i) {
    const double g = p.y[i] * (1.0 - grad[i]);
    const double bound = p.y[i] - g;
    const bool at_zero = a[i] <= delta;
    const bool at_c = a[i] >= p.c - delta;
    if (!at_zero && !at_c) {
      sum += bound;
      ++free;
      continue;
    }
    const bool lower_side = at_zero ? p.y[i] > 0 : p.y[i] < 0;
    if (lower_side) {
      lower = std::max(lower, bound);
    } else {
      upper = std::min(upper, bound);
    }
  }
  if (free > 0) return sum / free;
  if (!std::isfinite(lower)) return upper;
  if (!std::isfinite(upper)) return lower;
  return 0.5 * (lower + upper);
}

}  // namespace

DualSolution qp_oracle(std::span<const Sample> samples,
                       std::span<const Label> labels, const Kernel &kernel,
                       double c, const OracleConfig &config) {
  const std::size_t m = samples.size();
  if (m > kOracleMaxSamples) {
    throw OracleError("qp oracle size limit exceeded: " + std::to_string(m) +
                      " > " + std::to_string(kOracleMaxSamples) + " samples");
  }
  if (labels.size() != m) throw InvalidInputError("samples and labels differ in length");
  if (!(c > 0.0)) throw InvalidInputError("c must be > 0");

  DualProblem p{m, c, Vec(m), Vec(m * m)};
  for (std::size_t i = 0; i < m; ++i) p.y[i] = ToSign(labels[i]);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      p.q[i * m + j] = p.y[i] * p.y[j] * kernel_eval(kernel, samples[i], samples[j]);
    }
  }

  // Frobenius norm bounds the largest eigenvalue of Q from above.
  double lipschitz = 0.0;
  for (double v : p.q) lipschitz += v * v;
  lipschitz = std::sqrt(lipschitz) + 1e-12;
  const double step = 1.0 / lipschitz;
  const double scale = std::max(1.0, c);

  Vec a(m, 0.0);
  Vec z = a;
  double t = 1.0;
  double value = p.Objective(a);
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < config.max_iterations; ++it) {
    Vec g = p.Gradient(z);
    for (std::size_t i = 0; i < m; ++i) g[i] = z[i] + step * g[i];
    Vec next = p.Project(g);
    const double next_value = p.Objective(next);
    if (next_value < value) {
      // Function-value restart.
      t = 1.0;
      z = a;
      continue;
    }
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      residual = std::max(residual, std::abs(next[i] - a[i]));
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < m; ++i) {
      z[i] = next[i] + ((t - 1.0) / t_next) * (next[i] - a[i]);
    }
    a = std::move(next);
    value = next_value;
    t = t_next;
    if (config.tolerance > 0.0 && residual <= config.tolerance * scale) {
      ++it;
      break;
    }
  }

  // Plain projected-gradient residual at the final iterate.
  {
    Vec g = p.Gradient(a);
    for (std::size_t i = 0; i < m; ++i) g[i] = a[i] + step * g[i];
    const Vec pg = p.Project(g);
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      residual = std::max(residual, std::abs(pg[i] - a[i]));
    }
  }
  if (residual > config.accept_residual * scale) {
    throw OracleError("qp oracle did not converge: residual " +
                      std::to_string(residual));
  }

  DualSolution out;
  out.objective = p.Objective(a);
  out.bias = Bias(p, a);
  out.alphas = std::move(a);
  out.iterations = it;
  return out;
}

double oracle_decision_value(const DualSolution &solution,
                             std::span<const Sample> samples,
                             std::span<const Label> labels,
                             const Kernel &kernel, std::span<const double> x) {
  double sum = solution.bias;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (solution.alphas[i] == 0.0) continue;
    sum += solution.alphas[i] * ToSign(labels[i]) * kernel_eval(kernel, samples[i], x);
  }
  return sum;
}

}  // namespace marketguard
