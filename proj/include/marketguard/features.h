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

// Seller feature extraction and min-max scaling.
//
// Feature definitions over the seller's window:
//
//   listing_accuracy       listings with declared attributes ok / listings
//                          (1 when there are no listings)
//   transaction_volume     number of orders
//   sla_adherence          shipped orders with actual_ship <= promised_ship /
//                          shipped orders (1 when nothing has shipped)
//   return_ratio           returns / orders, clamped to [0, 1]
//   complaint_rate         sum of complaint severities / orders
//   customer_satisfaction  1 - clamp(complaint_rate / 5, 0, 1)
//   social_sentiment       mention-weighted mean sentiment (0 without
//                          mentions)
//
// With zero orders the order-based features default to return_ratio 0,
// complaint_rate 0, sla_adherence 1, customer_satisfaction 1, and
// has_history is false.

#ifndef MARKETGUARD_FEATURES_H_
#define MARKETGUARD_FEATURES_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marketguard/marketplace.h"
#include "marketguard/types.h"

namespace marketguard {

inline constexpr std::string_view kFeatureManifestVersion =
    "marketguard-features/1";

// Sample index order. Changing it requires a new manifest version.
inline constexpr std::array<std::string_view, 7> kFeatureNames = {
    "listing_accuracy", "transaction_volume",    "sla_adherence",
    "return_ratio",     "complaint_rate",        "customer_satisfaction",
    "social_sentiment"};

inline constexpr std::size_t kFeatureCount = kFeatureNames.size();

struct FeatureManifest {
  std::string version;
  std::vector<std::string> names;

  bool operator==(const FeatureManifest &) const = default;
};

// The manifest this build extracts.
FeatureManifest CurrentManifest();

std::optional<std::size_t> FeatureIndex(std::string_view name);

struct FeatureVector {
  double listing_accuracy = 1.0;
  double transaction_volume = 0.0;
  double sla_adherence = 1.0;
  double return_ratio = 0.0;
  double complaint_rate = 0.0;
  double customer_satisfaction = 1.0;
  double social_sentiment = 0.0;
  bool has_history = false;

  // Values in manifest order.
  std::array<double, kFeatureCount> values() const;
  double value(std::size_t index) const { return values()[index]; }

  bool operator==(const FeatureVector &) const = default;
};

FeatureVector extract(const SellerHistory &history);

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const FeatureRange &) const = default;
};

struct ScalingParams {
  std::array<FeatureRange, kFeatureCount> ranges;
  bool operator==(const ScalingParams &) const = default;
};

// Throws InvalidInputError for an empty corpus.
ScalingParams fit_scaling(std::span<const FeatureVector> vectors);

// (x - min) / (max - min) clamped to [0, 1]; constant features map to 0.5.
Sample apply_scaling(const ScalingParams &params, const FeatureVector &v);

}  // namespace marketguard

#endif  // MARKETGUARD_FEATURES_H_
