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

#include "marketguard/rules.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "marketguard/error.h"

namespace marketguard {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view ToString(Comparator c) {
  switch (c) {
    case Comparator::kLess:
      return "<";
    case Comparator::kLessEqual:
      return "<=";
    case Comparator::kGreater:
      return ">";
    case Comparator::kGreaterEqual:
      return ">=";
    case Comparator::kEqual:
      return "=";
  }
  return "=";
}

std::optional<Comparator> ParseComparator(std::string_view token) {
  if (token == "<") return Comparator::kLess;
  if (token == "<=" || token == "≤") return Comparator::kLessEqual;
  if (token == ">") return Comparator::kGreater;
  if (token == ">=" || token == "≥") return Comparator::kGreaterEqual;
  if (token == "=" || token == "==") return Comparator::kEqual;
  return std::nullopt;
}

namespace {

void CheckThreshold(double threshold, std::vector<std::string> &v) {
  if (!(std::isfinite(threshold) && threshold >= 0.0)) {
    v.push_back("decision_threshold must be a finite number >= 0");
  }
}

// Per-rule semantic checks; duplicate ids are tracked through `seen`.
void CheckRule(const Rule &r, const std::string &where, std::set<std::string> &seen,
               std::vector<std::string> &v) {
  if (r.id.empty()) v.push_back(where + ": empty id");
  if (!seen.insert(r.id).second) v.push_back(where + ": duplicate rule id '" + r.id + "'");
  if (!FeatureIndex(r.feature)) v.push_back(where + ": unknown feature '" + r.feature + "'");
  if (!std::isfinite(r.threshold_value)) v.push_back(where + ": value must be finite");
  if (!std::isfinite(r.weight)) {
    v.push_back(where + ": weight must be finite");
  } else if (r.weight < 0.0) {
    v.push_back(where + ": negative weight");
  }
}

std::string RuleLocation(std::size_t i) { return "rule #" + std::to_string(i + 1); }

}  // namespace

std::vector<std::string> validate_ruleset(const RuleSet &ruleset) {
  std::vector<std::string> v;
  CheckThreshold(ruleset.decision_threshold, v);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < ruleset.rules.size(); ++i) {
    CheckRule(ruleset.rules[i], RuleLocation(i), seen, v);
  }
  return v;
}

bool rule_fires(const Rule &rule, const FeatureVector &features) {
  const auto index = FeatureIndex(rule.feature);
  if (!index) throw ConfigError("unknown feature '" + rule.feature + "'");
  const double x = features.value(*index);
  const double t = rule.threshold_value;
  switch (rule.comparator) {
    case Comparator::kLess:
      return x < t;
    case Comparator::kLessEqual:
      return x <= t;
    case Comparator::kGreater:
      return x > t;
    case Comparator::kGreaterEqual:
      return x >= t;
    case Comparator::kEqual:
      return std::abs(x - t) <= kRuleEqualityTolerance;
  }
  return false;
}

RuleOutcome evaluate(const RuleSet &ruleset, const FeatureVector &features) {
  RuleOutcome out;
  for (const Rule &rule : ruleset.rules) {
    if (rule_fires(rule, features)) {
      out.fired.push_back(rule.id);
      out.aggregate_score += rule.weight;
    }
  }
  out.flagged = out.aggregate_score >= ruleset.decision_threshold;
  return out;
}

namespace {

// Reads a field into `out`, recording a violation instead of throwing.
template <typename T>
bool Field(const json &obj, const char *name, const std::string &where,
           std::vector<std::string> &violations, T &out) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    violations.push_back(where + ": missing field '" + name + "'");
    return false;
  }
  if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) {
      violations.push_back(where + ": field '" + name + "' must be a string");
      return false;
    }
  } else {
    if (!it->is_number()) {
      violations.push_back(where + ": field '" + name + "' must be a number");
      return false;
    }
  }
  out = it->get<T>();
  return true;
}

}  // namespace

RuleSet parse_ruleset(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("invalid JSON in rule set: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("rule set must be a JSON object");

  std::vector<std::string> violations;
  std::string format;
  if (Field(doc, "format", "rule set", violations, format) && format != kRulesFormatTag) {
    violations.push_back("rule set: unsupported format '" + format + "', expected '" +
                         std::string(kRulesFormatTag) + "'");
  }
  RuleSet ruleset;
  if (Field(doc, "decision_threshold", "rule set", violations, ruleset.decision_threshold)) {
    CheckThreshold(ruleset.decision_threshold, violations);
  }

  auto rules = doc.find("rules");
  if (rules == doc.end() || !rules->is_array()) {
    violations.push_back("rule set: 'rules' must be an array");
  } else {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rules->size(); ++i) {
      const json &entry = (*rules)[i];
      const std::string where = RuleLocation(i);
      if (!entry.is_object()) {
        violations.push_back(where + ": must be an object");
        continue;
      }
      Rule r;
      bool complete = Field(entry, "id", where, violations, r.id);
      complete &= Field(entry, "feature", where, violations, r.feature);
      std::string comparator;
      if (Field(entry, "comparator", where, violations, comparator)) {
        if (auto c = ParseComparator(comparator)) {
          r.comparator = *c;
        } else {
          violations.push_back(where + ": unsupported comparator '" + comparator + "'");
        }
      }
      complete &= Field(entry, "value", where, violations, r.threshold_value);
      complete &= Field(entry, "weight", where, violations, r.weight);
      Field(entry, "description", where, violations, r.description);
      if (complete) CheckRule(r, where, seen, violations);
      ruleset.rules.push_back(std::move(r));
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return ruleset;
}

RuleSet load_ruleset(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open rule set '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ruleset(ss.str());
}

std::string serialize_ruleset(const RuleSet &ruleset) {
  ordered_json doc;
  doc["format"] = std::string(kRulesFormatTag);
  doc["decision_threshold"] = ruleset.decision_threshold;
  doc["rules"] = ordered_json::array();
  for (const Rule &r : ruleset.rules) {
    ordered_json j;
    j["id"] = r.id;
    j["feature"] = r.feature;
    j["comparator"] = std::string(ToString(r.comparator));
    j["value"] = r.threshold_value;
    j["weight"] = r.weight;
    j["description"] = r.description;
    doc["rules"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

RuleSet default_ruleset() {
  RuleSet rs;
  rs.decision_threshold = 2.0;
  rs.rules = {
      {"inaccurate-listings", "listing_accuracy", Comparator::kLess, 0.85, 1.0,
       "More than 15% of listings misstate their declared attributes."},
      {"late-shipping", "sla_adherence", Comparator::kLess, 0.8, 1.0,
       "Fewer than 80% of shipped orders left by the promised date."},
      {"high-returns", "return_ratio", Comparator::kGreater, 0.12, 1.0,
       "More than 12% of orders are returned."},
      {"complaint-heavy", "complaint_rate", Comparator::kGreater, 0.35, 1.0,
       "Severity-weighted complaints exceed 0.35 per order."},
      {"negative-buzz", "social_sentiment", Comparator::kLess, 0.0, 1.0,
       "Mention-weighted social sentiment is negative."},
  };
  return rs;
}

}  // namespace marketguard
