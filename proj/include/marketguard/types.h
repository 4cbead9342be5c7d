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

#ifndef MARKETGUARD_TYPES_H_
#define MARKETGUARD_TYPES_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace marketguard {

// Integer seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

// Binary class. Normal sellers are class 0 (-1), fraudulent ones class 1 (+1).
enum class Label : int { kNormal = -1, kFraudulent = 1 };

inline constexpr double ToSign(Label label) {
  return label == Label::kFraudulent ? 1.0 : -1.0;
}

inline constexpr int ToInt(Label label) { return static_cast<int>(label); }

// Accepts exactly -1 or +1.
inline std::optional<Label> LabelFromInt(long long value) {
  if (value == 1) return Label::kFraudulent;
  if (value == -1) return Label::kNormal;
  return std::nullopt;
}

// A point in feature space. Entries are finite; the dimension is fixed per
// dataset.
using Sample = std::vector<double>;

}  // namespace marketguard

#endif  // MARKETGUARD_TYPES_H_
