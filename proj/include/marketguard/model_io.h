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

// Text serialization of SvmModel ("marketguard-svm/1").
//
//   marketguard-svm/1
//   kernel rbf <gamma> | kernel linear | kernel polynomial <degree> <offset>
//   dimension <d>
//   train_config c <c> kkt_tol <t> value_eps <e> max_passes <n> rng_seed <s>
//   bias <b>
//   support_vectors <n>
//   sv <label> <alpha> <x_1> ... <x_d>        (n lines)
//   end
//
// Reals are written in shortest round-trip form, so a loaded model
// reproduces decision values bit for bit.

#ifndef MARKETGUARD_MODEL_IO_H_
#define MARKETGUARD_MODEL_IO_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string_view>

#include "marketguard/svm.h"

namespace marketguard {

inline constexpr std::string_view kSvmFormatTag = "marketguard-svm/1";

void write_model(std::ostream &out, const SvmModel &model);

// Reads one model document, consuming through its "end" line. Throws
// ParseError. `line`, when given, holds the number of lines already consumed
// from the stream and is advanced past the document.
SvmModel read_model(std::istream &in, std::size_t *line = nullptr);

}  // namespace marketguard

#endif  // MARKETGUARD_MODEL_IO_H_
