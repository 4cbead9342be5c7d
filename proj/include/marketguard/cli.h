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

// The marketguard command-line front end.
//
//   marketguard [--config FILE] [--seed N] [--output human|machine] COMMAND ...
//
// Commands: generate, train, detect, evaluate, act, rules-check.
// Settings come from built-in defaults, then the JSON config file, then
// command-line flags. Relative paths in the config file are resolved against
// the config file's directory. When no dataset is given, train reads
// paths.train_dataset and detect/evaluate read paths.holdout_dataset.
//
// Exit codes: 0 success, 2 input or configuration error, 3 training failure
// (degenerate labels or non-convergence), 4 feature-manifest mismatch.

#ifndef MARKETGUARD_CLI_H_
#define MARKETGUARD_CLI_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "marketguard/detection.h"
#include "marketguard/management.h"
#include "marketguard/marketplace.h"
#include "marketguard/svm.h"

namespace marketguard {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitTrainingError = 3;
inline constexpr int kExitManifestMismatch = 4;

enum class OutputFormat { kHuman, kMachine };

struct RunPaths {
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> train_dataset;
  std::optional<std::filesystem::path> holdout_dataset;
  std::optional<std::filesystem::path> ruleset;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> reputation;
  std::optional<std::filesystem::path> experts;
  std::optional<std::filesystem::path> verdicts;
  std::optional<std::filesystem::path> ledger;
};

// Kernel choice; a missing gamma means 1 / feature count.
struct KernelSpec {
  std::string type = "rbf";  // linear | rbf | polynomial
  std::optional<double> gamma;
  int degree = 3;
  double offset = 1.0;

  // Throws ConfigError for an unknown type or invalid parameters.
  Kernel Build(std::size_t dimension) const;
};

struct RunConfig {
  RunPaths paths;
  GeneratorConfig generator;
  double train_fraction = 0.7;
  KernelSpec kernel;
  TrainConfig train;
  FusionPolicy fusion;
  PolicyConfig policy;
  OutputFormat output = OutputFormat::kHuman;
};

// Parses a JSON config document. Unknown keys and ill-typed values are
// reported together as one ConfigError.
//
//   {
//     "paths": {"dataset": "...", "train_dataset": "...", "holdout_dataset":
//               "...", "ruleset": "...", "model": "...", "reputation": "...",
//               "experts": "...", "verdicts": "...", "ledger": "..."},
//     "generator": {"n_sellers": 500, "fraud_fraction": 0.2, "window_days": 90,
//                   "cold_start_fraction": 0.05, "rng_seed": 0,
//                   "window_start": 1767225600, "train_fraction": 0.7,
//                   "effect_sizes": {"listing_error": 0.2, ...}},
//     "train": {"kernel": "rbf", "gamma": 0.5, "degree": 3, "offset": 1,
//               "c": 1, "kkt_tol": 0.001, "value_eps": 1e-8,
//               "max_passes": 200, "rng_seed": 0},
//     "fusion": {"w_rules": 0.4, "w_svm": 0.6, "fusion_threshold": 0.5},
//     "policy": {"warn_band": [0.5, 0.7], "suspend_band": [0.7, 0.9],
//                "ban_floor": 0.9, "grace_period_days": 14,
//                "repeat_escalation": true},
//     "output": "human"
//   }
RunConfig parse_run_config(std::string_view text, const std::filesystem::path &base_dir);
RunConfig load_run_config(const std::filesystem::path &path);

// Runs one invocation. `args` excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err);

}  // namespace marketguard

#endif  // MARKETGUARD_CLI_H_
