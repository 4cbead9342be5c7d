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
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "marketguard/error.h"

namespace marketguard {

Kernel Kernel::Linear() { return Kernel(LinearKernel{}); }

Kernel Kernel::Polynomial(int degree, double offset) {
  if (degree < 1) {
    throw InvalidInputError("polynomial kernel degree must be >= 1");
  }
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw InvalidInputError("polynomial kernel offset must be >= 0");
  }
  return Kernel(PolynomialKernel{degree, offset});
}

Kernel Kernel::Rbf(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInputError("rbf kernel gamma must be > 0");
  }
  return Kernel(RbfKernel{gamma});
}

Kernel Kernel::DefaultRbf(std::size_t dimension) {
  if (dimension == 0) throw InvalidInputError("dimension must be > 0");
  return Rbf(1.0 / static_cast<double>(dimension));
}

std::string Kernel::name() const {
  struct Visitor {
    std::string operator()(const LinearKernel &) const { return "linear"; }
    std::string operator()(const PolynomialKernel &) const {
      return "polynomial";
    }
    std::string operator()(const RbfKernel &) const { return "rbf"; }
  };
  return std::visit(Visitor{}, variant_);
}

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// Evaluates without the dimension check; callers have validated.
double KernelUnchecked(const Kernel &kernel, std::span<const double> a,
                       std::span<const double> b) {
  struct Visitor {
    std::span<const double> a, b;
    double operator()(const LinearKernel &) const { return Dot(a, b); }
    double operator()(const PolynomialKernel &k) const {
      // Integer power keeps the result exactly symmetric.
      const double base = Dot(a, b) + k.offset;
      double out = 1.0;
      for (int i = 0; i < k.degree; ++i) out *= base;
      return out;
    }
    double operator()(const RbfKernel &k) const {
      return std::exp(-k.gamma * SquaredDistance(a, b));
    }
  };
  return std::visit(Visitor{a, b}, kernel.variant());
}

void CheckDimension(std::size_t expected, std::size_t got) {
  if (expected != got) {
    std::ostringstream msg;
    msg << "dimension mismatch: expected " << expected << ", got " << got;
    throw InvalidInputError(msg.str());
  }
}

double Sign(Label label) { return ToSign(label); }

}  // namespace

double kernel_eval(const Kernel &kernel, std::span<const double> a,
                   std::span<const double> b) {
  CheckDimension(a.size(), b.size());
  return KernelUnchecked(kernel, a, b);
}

void TrainConfig::Validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidInputError("train config: c must be > 0");
  }
  if (!(kkt_tol > 0.0)) throw InvalidInputError("train config: kkt_tol must be > 0");
  if (!(value_eps > 0.0)) {
    throw InvalidInputError("train config: value_eps must be > 0");
  }
  if (max_passes <= 0) {
    throw InvalidInputError("train config: max_passes must be > 0");
  }
}

double TrainConfig::bound_eps() const { return value_eps * std::min(1.0, c); }

namespace {

// Working state of one SMO run over the canonically sorted training set.
//
// grad_[i] holds sum_j alpha_j y_j K_ij - y_i, i.e. the prediction error
// without the bias term. For a candidate bias b each point imposes either a
// lower bound b >= y_i - g_i or an upper bound b <= y_i - g_i depending on its
// alpha and label; free points impose both. The problem is optimal when the
// largest lower bound does not exceed the smallest upper bound.
class SmoSolver {
 public:
  SmoSolver(std::vector<Sample> x, std::vector<double> y, const Kernel &kernel,
            const TrainConfig &config)
      : x_(std::move(x)),
        y_(std::move(y)),
        m_(x_.size()),
        c_(config.c),
        eps_(config.bound_eps()),
        // Slightly below the configured tolerance so the final bias check
        // survives roundoff in the recomputed decision values.
        tol_(config.kkt_tol * 0.99),
        max_passes_(config.max_passes),
        rng_(config.rng_seed),
        alpha_(m_, 0.0),
        grad_(m_),
        kernel_(m_ * m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = i; j < m_; ++j) {
        const double k = KernelUnchecked(kernel, x_[i], x_[j]);
        kernel_[i * m_ + j] = k;
        kernel_[j * m_ + i] = k;
      }
      grad_[i] = -y_[i];
    }
    UpdateBounds();
  }

  void Run(TrainStats &stats) {
    int passes = 0;
    int changed = 0;
    bool examine_all = true;
    double best_gap = Gap();
    while (changed > 0 || examine_all) {
      if (examine_all && passes >= max_passes_) {
        throw ConvergenceError(
            "smo did not converge within " + std::to_string(max_passes_) +
                " passes (best kkt gap " + std::to_string(best_gap) + ")",
            passes, best_gap, SupportCount());
      }
      changed = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (examine_all || IsFree(i)) changed += ExamineExample(i);
      }
      // A pass is one sweep over the whole training set; the free-only
      // sweeps that follow it belong to the same pass.
      if (examine_all) ++passes;
      best_gap = std::min(best_gap, Gap());
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    stats.passes = passes;
    stats.steps = steps_;
    stats.kkt_gap = std::max(0.0, Gap());
    if (Gap() > tol_) {
      // Only reachable when every remaining violating pair has eta <= 0.
      throw ConvergenceError("smo stalled on pairs with non-positive eta",
                             passes, Gap(), SupportCount());
    }
  }

  // Average over free support vectors, else the midpoint of the bounds.
  double Bias() const {
    double sum = 0.0;
    std::size_t free = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (IsFree(i)) {
        sum += -grad_[i];  // y_i - g_i
        ++free;
      }
    }
    if (free > 0) return sum / static_cast<double>(free);
    return 0.5 * (lower_ + upper_);
  }

  const std::vector<double> &alphas() const { return alpha_; }

 private:
  double K(std::size_t i, std::size_t j) const { return kernel_[i * m_ + j]; }

  bool IsFree(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }

  // Point imposes b >= y_i - g_i.
  bool InLower(std::size_t i) const {
    if (IsFree(i)) return true;
    return alpha_[i] <= 0.0 ? y_[i] > 0 : y_[i] < 0;
  }

  // Point imposes b <= y_i - g_i.
  bool InUpper(std::size_t i) const {
    if (IsFree(i)) return true;
    return alpha_[i] <= 0.0 ? y_[i] < 0 : y_[i] > 0;
  }

  double Gap() const { return lower_ - upper_; }

  std::size_t SupportCount() const {
    return static_cast<std::size_t>(
        std::count_if(alpha_.begin(), alpha_.end(), [](double a) { return a > 0; }));
  }

  void UpdateBounds() {
    lower_ = -std::numeric_limits<double>::infinity();
    upper_ = std::numeric_limits<double>::infinity();
    lower_index_ = upper_index_ = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double bound = -grad_[i];
      if (InLower(i) && bound > lower_) {
        lower_ = bound;
        lower_index_ = i;
      }
      if (InUpper(i) && bound < upper_) {
        upper_ = bound;
        upper_index_ = i;
      }
    }
  }

  int ExamineExample(std::size_t i2) {
    const double bound2 = -grad_[i2];
    // Partner that forms a violating pair with i2, chosen to maximise
    // |E1 - E2| (Platt's second-choice heuristic).
    std::size_t partner = m_;
    double best = 0.0;
    if (InLower(i2) && bound2 > upper_ + tol_ && upper_index_ < m_) {
      partner = upper_index_;
      best = bound2 - upper_;
    }
    if (InUpper(i2) && bound2 < lower_ - tol_ && lower_index_ < m_ &&
        lower_ - bound2 > best) {
      partner = lower_index_;
    }
    if (partner == m_) return 0;
    if (TakeStep(partner, i2)) return 1;

    // Fall back to free points, then to all points, each from a random start.
    if (m_ == 0) return 0;
    std::size_t start = static_cast<std::size_t>(rng_() % m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t i1 = (start + k) % m_;
      if (IsFree(i1) && TakeStep(i1, i2)) return 1;
    }
    start = static_cast<std::size_t>(rng_() % m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t i1 = (start + k) % m_;
      if (TakeStep(i1, i2)) return 1;
    }
    return 0;
  }

  // Solves the two-variable subproblem analytically. Returns false when the
  // pair cannot make progress.
  bool TakeStep(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const double e1 = grad_[i1];
    const double e2 = grad_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (lo >= hi) return false;

    const double eta = K(i1, i1) + K(i2, i2) - 2.0 * K(i1, i2);
    if (eta <= 0.0) return false;

    double new_a2 = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    if (new_a2 < eps_) {
      new_a2 = 0.0;
    } else if (new_a2 > c_ - eps_) {
      new_a2 = c_;
    }
    if (std::abs(new_a2 - a2) < eps_ * (new_a2 + a2 + eps_)) return false;

    double new_a1 = a1 + s * (a2 - new_a2);
    if (new_a1 < eps_) {
      new_a1 = 0.0;
    } else if (new_a1 > c_ - eps_) {
      new_a1 = c_;
    }

    const double d1 = y1 * (new_a1 - a1);
    const double d2 = y2 * (new_a2 - a2);
    for (std::size_t k = 0; k < m_; ++k) {
      grad_[k] += d1 * K(i1, k) + d2 * K(i2, k);
    }
    alpha_[i1] = new_a1;
    alpha_[i2] = new_a2;
    ++steps_;
    UpdateBounds();
    return true;
  }

  std::vector<Sample> x_;
  std::vector<double> y_;
  std::size_t m_;
  double c_;
  double eps_;
  double tol_;
  int max_passes_;
  std::mt19937_64 rng_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  std::vector<double> kernel_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::size_t lower_index_ = 0;
  std::size_t upper_index_ = 0;
  int steps_ = 0;
};

void ValidateTrainingSet(std::span<const Sample> samples,
                         std::span<const Label> labels) {
  if (samples.size() != labels.size()) {
    throw InvalidInputError("samples and labels differ in length");
  }
  if (samples.size() < 2) {
    throw InvalidInputError("training requires at least 2 samples");
  }
  const std::size_t d = samples.front().size();
  if (d == 0) throw InvalidInputError("samples must have dimension > 0");
  for (const auto &s : samples) {
    CheckDimension(d, s.size());
    for (double v : s) {
      if (!std::isfinite(v)) throw InvalidInputError("non-finite feature value");
    }
  }
  const bool has_pos = std::find(labels.begin(), labels.end(),
                                 Label::kFraudulent) != labels.end();
  const bool has_neg =
      std::find(labels.begin(), labels.end(), Label::kNormal) != labels.end();
  if (!has_pos || !has_neg) throw TrainingError("degenerate labels");
}

}  // namespace

SvmModel train_smo(std::span<const Sample> samples,
                   std::span<const Label> labels, const Kernel &kernel,
                   const TrainConfig &config, TrainStats *stats) {
  config.Validate();
  ValidateTrainingSet(samples, labels);

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (samples[a] != samples[b]) return samples[a] < samples[b];
                     return ToInt(labels[a]) < ToInt(labels[b]);
                   });
  std::vector<Sample> x;
  std::vector<double> y;
  x.reserve(order.size());
  y.reserve(order.size());
  for (std::size_t i : order) {
    x.push_back(samples[i]);
    y.push_back(Sign(labels[i]));
  }

  SmoSolver solver(x, y, kernel, config);
  TrainStats local;
  solver.Run(local);
  if (stats != nullptr) *stats = local;

  SvmModel model;
  model.kernel = kernel;
  model.dimension = samples.front().size();
  model.config = config;
  model.bias = solver.Bias();
  const auto &alpha = solver.alphas();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (alpha[i] > 0.0) {
      model.support_samples.push_back(x[i]);
      model.support_labels.push_back(y[i] > 0 ? Label::kFraudulent
                                              : Label::kNormal);
      model.alphas.push_back(alpha[i]);
    }
  }
  return model;
}

double decision_value(const SvmModel &model, std::span<const double> x) {
  CheckDimension(model.dimension, x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < model.support_samples.size(); ++i) {
    sum += model.alphas[i] * Sign(model.support_labels[i]) *
           KernelUnchecked(model.kernel, model.support_samples[i], x);
  }
  return sum + model.bias;
}

Label classify(const SvmModel &model, std::span<const double> x) {
  return decision_value(model, x) >= 0.0 ? Label::kFraudulent : Label::kNormal;
}

double weight_norm_squared(const SvmModel &model) {
  const auto &sv = model.support_samples;
  double sum = 0.0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const double ai = model.alphas[i] * Sign(model.support_labels[i]);
    for (std::size_t j = 0; j < sv.size(); ++j) {
      const double aj = model.alphas[j] * Sign(model.support_labels[j]);
      sum += ai * aj * KernelUnchecked(model.kernel, sv[i], sv[j]);
    }
  }
  return sum;
}

double margin(const SvmModel &model) {
  const double w2 = weight_norm_squared(model);
  if (model.support_samples.empty() || w2 <= model.config.value_eps) {
    throw DegenerateModelError("degenerate model: |w|^2 is zero");
  }
  return 1.0 / std::sqrt(w2);
}

std::vector<double> primal_weights(const SvmModel &model) {
  if (!model.kernel.is_linear()) {
    throw UnsupportedOperationError(
        "primal weights exist only for the linear kernel, not " +
        model.kernel.name());
  }
  std::vector<double> w(model.dimension, 0.0);
  for (std::size_t i = 0; i < model.support_samples.size(); ++i) {
    const double coef = model.alphas[i] * Sign(model.support_labels[i]);
    for (std::size_t k = 0; k < model.dimension; ++k) {
      w[k] += coef * model.support_samples[i][k];
    }
  }
  return w;
}

double dual_objective(const SvmModel &model) {
  const double sum = std::accumulate(model.alphas.begin(), model.alphas.end(), 0.0);
  return sum - 0.5 * weight_norm_squared(model);
}

double kkt_violation(const SvmModel &model, std::span<const Sample> samples,
                     std::span<const Label> labels, const TrainConfig &config) {
  if (samples.size() != labels.size()) {
    throw InvalidInputError("samples and labels differ in length");
  }
  const double c = config.c;
  const double eps = config.bound_eps();
  std::vector<bool> used(model.support_samples.size(), false);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CheckDimension(model.dimension, samples[i].size());
    double alpha = 0.0;
    for (std::size_t s = 0; s < model.support_samples.size(); ++s) {
      if (!used[s] && model.support_labels[s] == labels[i] &&
          model.support_samples[s] == samples[i]) {
        used[s] = true;
        alpha = model.alphas[s];
        break;
      }
    }
    const double yf = Sign(labels[i]) * decision_value(model, samples[i]);
    double v;
    if (alpha <= eps) {
      v = std::max(0.0, 1.0 - yf);
    } else if (alpha >= c - eps) {
      v = std::max(0.0, yf - 1.0);
    } else {
      v = std::abs(yf - 1.0);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace marketguard
