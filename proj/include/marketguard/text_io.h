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

// Helpers for the line-oriented text formats.

#ifndef MARKETGUARD_TEXT_IO_H_
#define MARKETGUARD_TEXT_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace marketguard {

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<std::int64_t> ParseInt(std::string_view text);
std::optional<std::uint64_t> ParseUint(std::string_view text);

// Splits on runs of spaces and tabs.
std::vector<std::string_view> SplitWhitespace(std::string_view line);

// 64-bit FNV-1a, hex encoded.
std::string Fnv1aHex(std::string_view data);

}  // namespace marketguard

#endif  // MARKETGUARD_TEXT_IO_H_
