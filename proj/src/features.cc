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

#include "marketguard/features.h"

#include <algorithm>

#include "marketguard/error.h"

namespace marketguard {

FeatureManifest CurrentManifest() {
  FeatureManifest m;
  m.version = std::string(kFeatureManifestVersion);
  for (auto name : kFeatureNames) m.names.emplace_back(name);
  return m;
}

std::optional<std::size_t> FeatureIndex(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    if (kFeatureNames[i] == name) return i;
  }
  return std::nullopt;
}

std::array<double, kFeatureCount> FeatureVector::values() const {
  return {listing_accuracy, transaction_volume, sla_adherence,
          return_ratio,     complaint_rate,     customer_satisfaction,
          social_sentiment};
}

FeatureVector extract(const SellerHistory &history) {
  std::size_t listings = 0, listings_ok = 0;
  std::size_t orders = 0, shipped = 0, on_time = 0;
  std::size_t returns = 0;
  double severity = 0.0;
  double weighted_sentiment = 0.0;
  double mentions = 0.0;

  for (const auto &r : history.records) {
    if (const auto *l = std::get_if<Listing>(&r.event)) {
      ++listings;
      listings_ok += l->declared_attributes_ok;
    } else if (const auto *o = std::get_if<Order>(&r.event)) {
      ++orders;
      if (o->actual_ship) {
        ++shipped;
        on_time += *o->actual_ship <= o->promised_ship;
      }
    } else if (std::holds_alternative<Return>(r.event)) {
      ++returns;
    } else if (const auto *c = std::get_if<Complaint>(&r.event)) {
      severity += c->severity;
    } else if (const auto *s = std::get_if<SocialSignal>(&r.event)) {
      weighted_sentiment += s->sentiment * static_cast<double>(s->mentions);
      mentions += static_cast<double>(s->mentions);
    }
  }

  FeatureVector v;
  v.listing_accuracy =
      listings == 0 ? 1.0 : static_cast<double>(listings_ok) / listings;
  v.transaction_volume = static_cast<double>(orders);
  v.sla_adherence = shipped == 0 ? 1.0 : static_cast<double>(on_time) / shipped;
  v.has_history = orders > 0;
  if (orders > 0) {
    const double n = static_cast<double>(orders);
    v.return_ratio = std::min(1.0, static_cast<double>(returns) / n);
    v.complaint_rate = severity / n;
    v.customer_satisfaction = 1.0 - std::clamp(v.complaint_rate / 5.0, 0.0, 1.0);
  }
  v.social_sentiment =
      mentions > 0.0 ? std::clamp(weighted_sentiment / mentions, -1.0, 1.0) : 0.0;
  return v;
}

ScalingParams fit_scaling(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) {
    throw InvalidInputError("cannot fit scaling on an empty corpus");
  }
  ScalingParams params;
  const auto first = vectors.front().values();
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    params.ranges[k] = {first[k], first[k]};
  }
  for (const auto &v : vectors) {
    const auto values = v.values();
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      params.ranges[k].min = std::min(params.ranges[k].min, values[k]);
      params.ranges[k].max = std::max(params.ranges[k].max, values[k]);
    }
  }
  return params;
}

Sample apply_scaling(const ScalingParams &params, const FeatureVector &v) {
  const auto values = v.values();
  Sample out(kFeatureCount);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const FeatureRange &r = params.ranges[k];
    if (r.max <= r.min) {
      out[k] = 0.5;
    } else {
      out[k] = std::clamp((values[k] - r.min) / (r.max - r.min), 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace marketguard
