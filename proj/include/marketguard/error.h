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

#ifndef MARKETGUARD_ERROR_H_
#define MARKETGUARD_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace marketguard {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, empty corpus, bad config values.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Training cannot proceed, e.g. only one class present ("degenerate labels").
class TrainingError : public Error {
 public:
  using Error::Error;
};

// SMO ran out of passes before meeting the KKT tolerance.
class ConvergenceError : public TrainingError {
 public:
  ConvergenceError(const std::string &what, int passes, double kkt_gap,
                   std::size_t support_count)
      : TrainingError(what),
        passes_(passes),
        kkt_gap_(kkt_gap),
        support_count_(support_count) {}

  int passes() const { return passes_; }
  // Best (smallest) violating-pair gap reached before giving up.
  double kkt_gap() const { return kkt_gap_; }
  std::size_t support_count() const { return support_count_; }

 private:
  int passes_;
  double kkt_gap_;
  std::size_t support_count_;
};

// ‖w‖² vanishes, so no margin exists.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

class OracleError : public Error {
 public:
  using Error::Error;
};

// A line in a newline-delimited file could not be parsed.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Parsed data violates a dataset-level invariant (e.g. duplicate seller).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Rule sets, policies and run configs. Carries every violation found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(Join(violations)), violations_(std::move(violations)) {}
  explicit ConfigError(const std::string &violation)
      : ConfigError(std::vector<std::string>{violation}) {}

  const std::vector<std::string> &violations() const { return violations_; }

 private:
  static std::string Join(const std::vector<std::string> &parts) {
    std::string out;
    for (const auto &p : parts) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// The feature manifest stored with a model differs from the extractor's.
class ManifestMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace marketguard

#endif  // MARKETGUARD_ERROR_H_
