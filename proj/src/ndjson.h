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

// Internal helpers for the newline-delimited JSON file formats.

#ifndef MARKETGUARD_SRC_NDJSON_H_
#define MARKETGUARD_SRC_NDJSON_H_

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "json.hpp"
#include "marketguard/error.h"
#include "marketguard/marketplace.h"

namespace marketguard {

// Field accessors that turn type errors into ParseErrors for the line.
class LineObject {
 public:
  LineObject(const nlohmann::json &obj, std::size_t line) : obj_(obj), line_(line) {}

  [[noreturn]] void Fail(const std::string &message) const {
    throw ParseError(line_, message);
  }

  const nlohmann::json &Field(const char *name) const {
    auto it = obj_.find(name);
    if (it == obj_.end()) Fail(std::string("missing field '") + name + "'");
    return *it;
  }

  std::string String(const char *name) const {
    const nlohmann::json &f = Field(name);
    if (!f.is_string()) Fail(std::string("field '") + name + "' must be a string");
    return f.get<std::string>();
  }

  std::optional<std::string> OptionalString(const char *name) const {
    auto it = obj_.find(name);
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) Fail(std::string("field '") + name + "' must be a string");
    return it->get<std::string>();
  }

  std::int64_t Int(const char *name) const {
    const nlohmann::json &f = Field(name);
    if (!f.is_number_integer()) {
      Fail(std::string("field '") + name + "' must be an integer");
    }
    return f.get<std::int64_t>();
  }

  std::optional<std::int64_t> OptionalInt(const char *name) const {
    auto it = obj_.find(name);
    if (it == obj_.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) {
      Fail(std::string("field '") + name + "' must be an integer");
    }
    return it->get<std::int64_t>();
  }

  double Real(const char *name) const {
    const nlohmann::json &f = Field(name);
    if (!f.is_number()) Fail(std::string("field '") + name + "' must be a number");
    const double v = f.get<double>();
    if (!std::isfinite(v)) Fail(std::string("field '") + name + "' is not finite");
    return v;
  }

  bool Bool(const char *name) const {
    const nlohmann::json &f = Field(name);
    if (!f.is_boolean()) Fail(std::string("field '") + name + "' must be a boolean");
    return f.get<bool>();
  }

  std::size_t line() const { return line_; }

 private:
  const nlohmann::json &obj_;
  std::size_t line_;
};

// Calls fn(LineObject) for every non-blank line, which must hold a JSON
// object; invalid JSON is a ParseError for that line.
template <typename Fn>
void ForEachObjectLine(std::istream &in, Fn &&fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line, "expected a JSON object");
    fn(LineObject(obj, line));
  }
}

// Profile fields (seller_id through enrolled_at) appended to `out`.
void AppendProfileJson(nlohmann::ordered_json &out, const SellerProfile &p);
SellerProfile ParseProfile(const LineObject &o);

}  // namespace marketguard

#endif  // MARKETGUARD_SRC_NDJSON_H_
