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

#include "marketguard/pipeline.h"

#include <cmath>
#include <fstream>
#include <string>

#include "marketguard/error.h"
#include "marketguard/model_io.h"
#include "marketguard/text_io.h"

namespace marketguard {

PipelineModel train_pipeline(std::span<const LabeledSeller> sellers,
                             const Kernel &kernel, const TrainConfig &config,
                             PipelineTrainStats *stats) {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
  std::size_t cold = 0;
  for (const auto &s : sellers) {
    FeatureVector v = extract(s.history);
    if (!v.has_history) {
      ++cold;
      continue;
    }
    vectors.push_back(v);
    labels.push_back(s.label);
  }
  if (vectors.size() < 2) {
    throw InvalidInputError("need at least 2 sellers with order history to train");
  }
  PipelineModel model;
  model.manifest = CurrentManifest();
  model.scaling = fit_scaling(vectors);
  std::vector<Sample> samples;
  samples.reserve(vectors.size());
  for (const auto &v : vectors) samples.push_back(apply_scaling(model.scaling, v));

  TrainStats train_stats;
  model.svm = train_smo(samples, labels, kernel, config, &train_stats);
  if (stats != nullptr) {
    stats->svm = train_stats;
    stats->used = vectors.size();
    stats->cold_start = cold;
  }
  return model;
}

void check_manifest(const PipelineModel &model) {
  const FeatureManifest current = CurrentManifest();
  if (model.manifest != current) {
    std::string names;
    for (const auto &n : model.manifest.names) names += (names.empty() ? "" : ",") + n;
    throw ManifestMismatchError("model feature manifest '" + model.manifest.version +
                                "' [" + names + "] does not match extractor manifest '" +
                                current.version + "'");
  }
  if (model.svm.dimension != kFeatureCount) {
    throw ManifestMismatchError("model dimension " + std::to_string(model.svm.dimension) +
                                " does not match " + std::to_string(kFeatureCount) +
                                " extracted features");
  }
}

Sample pipeline_sample(const PipelineModel &model, const FeatureVector &features) {
  return apply_scaling(model.scaling, features);
}

void write_pipeline(std::ostream &out, const PipelineModel &model) {
  if (model.manifest.names.size() != kFeatureCount) {
    throw InvalidInputError("manifest must list exactly " + std::to_string(kFeatureCount) +
                            " features");
  }
  write_model(out, model.svm);
  out << "features " << model.manifest.version << ' ' << model.manifest.names.size()
      << '\n';
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    out << "feature " << model.manifest.names[k] << ' '
        << FormatDouble(model.scaling.ranges[k].min) << ' '
        << FormatDouble(model.scaling.ranges[k].max) << '\n';
  }
  out << "end\n";
}

PipelineModel read_pipeline(std::istream &in) {
  std::size_t line = 0;
  PipelineModel model;
  model.svm = read_model(in, &line);

  std::string text;
  auto next = [&](std::string_view key) {
    if (!std::getline(in, text)) {
      throw ParseError(line + 1, "unexpected end of model, expected '" +
                                     std::string(key) + "'");
    }
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    auto tokens = SplitWhitespace(text);
    if (tokens.empty() || tokens[0] != key) {
      throw ParseError(line, "expected '" + std::string(key) + "'");
    }
    return tokens;
  };
  auto real = [&](std::string_view token) {
    auto v = ParseDouble(token);
    if (!v || !std::isfinite(*v)) {
      throw ParseError(line, "invalid real '" + std::string(token) + "'");
    }
    return *v;
  };

  const auto header = next("features");
  if (header.size() != 3) throw ParseError(line, "expected 'features <version> <count>'");
  model.manifest.version = std::string(header[1]);
  const auto count = ParseUint(header[2]);
  if (!count) throw ParseError(line, "invalid feature count");
  // A manifest of a different length is read faithfully so that the mismatch
  // is reported by check_manifest, but scaling ranges only exist for ours.
  for (std::uint64_t k = 0; k < *count; ++k) {
    const auto t = next("feature");
    if (t.size() != 4) throw ParseError(line, "expected 'feature <name> <min> <max>'");
    model.manifest.names.emplace_back(t[1]);
    const FeatureRange range{real(t[2]), real(t[3])};
    if (range.max < range.min) throw ParseError(line, "feature range max < min");
    if (k < kFeatureCount) model.scaling.ranges[k] = range;
  }
  const auto end = next("end");
  if (end.size() != 1) throw ParseError(line, "trailing tokens after 'end'");
  return model;
}

void save_pipeline(const std::filesystem::path &path, const PipelineModel &model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError("cannot write model '" + path.string() + "'");
  write_pipeline(out, model);
  out.flush();
  if (!out) throw InvalidInputError("failed writing model '" + path.string() + "'");
}

PipelineModel load_pipeline(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open model '" + path.string() + "'");
  return read_pipeline(in);
}

}  // namespace marketguard
