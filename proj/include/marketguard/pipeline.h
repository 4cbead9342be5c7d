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

// A trained seller classifier: the SVM together with the feature manifest and
// scaling parameters it was trained under.
//
// File layout: an SVM document (see model_io.h) followed by
//
//   features <manifest-version> <count>
//   feature <name> <min> <max>                 (count lines, sample order)
//   end

#ifndef MARKETGUARD_PIPELINE_H_
#define MARKETGUARD_PIPELINE_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>

#include "marketguard/features.h"
#include "marketguard/marketplace.h"
#include "marketguard/svm.h"

namespace marketguard {

struct PipelineModel {
  SvmModel svm;
  FeatureManifest manifest;
  ScalingParams scaling;
};

struct PipelineTrainStats {
  TrainStats svm;
  std::size_t used = 0;        // sellers with history, fed to the SVM
  std::size_t cold_start = 0;  // sellers without orders, excluded
};

// Extracts features, fits scaling on sellers that have order history, and
// trains the SVM on their scaled samples. Sellers without orders are excluded
// (they are routed away from the SVM at detection time as well).
// Throws TrainingError / ConvergenceError / InvalidInputError.
PipelineModel train_pipeline(std::span<const LabeledSeller> sellers,
                             const Kernel &kernel, const TrainConfig &config,
                             PipelineTrainStats *stats = nullptr);

// Throws ManifestMismatchError when the model was trained under a different
// feature manifest than this build extracts.
void check_manifest(const PipelineModel &model);

// Scaled sample for `features` under the model's scaling.
Sample pipeline_sample(const PipelineModel &model, const FeatureVector &features);

void write_pipeline(std::ostream &out, const PipelineModel &model);
// Throws ParseError. Does not check the manifest against this build.
PipelineModel read_pipeline(std::istream &in);

void save_pipeline(const std::filesystem::path &path, const PipelineModel &model);
PipelineModel load_pipeline(const std::filesystem::path &path);

}  // namespace marketguard

#endif  // MARKETGUARD_PIPELINE_H_
