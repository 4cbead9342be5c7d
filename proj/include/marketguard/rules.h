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

// Weighted rules engine. Each rule compares one extracted feature against a
// constant; the weights of the rules that fire are summed and the seller is
// flagged when the sum reaches the rule set's decision threshold.
//
// Rule sets are JSON documents:
//
//   {
//     "format": "marketguard-rules/1",
//     "decision_threshold": 2.0,
//     "rules": [
//       {"id": "high-returns", "feature": "return_ratio", "comparator": ">",
//        "value": 0.15, "weight": 1.0, "description": "..."}
//     ]
//   }
//
// Comparators: <  <=  >  >=  =   ("=" uses an absolute tolerance of 1e-9).

#ifndef MARKETGUARD_RULES_H_
#define MARKETGUARD_RULES_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marketguard/features.h"

namespace marketguard {

inline constexpr std::string_view kRulesFormatTag = "marketguard-rules/1";
inline constexpr double kRuleEqualityTolerance = 1e-9;

enum class Comparator { kLess, kLessEqual, kGreater, kGreaterEqual, kEqual };

std::string_view ToString(Comparator c);
std::optional<Comparator> ParseComparator(std::string_view token);

struct Rule {
  std::string id;
  std::string feature;
  Comparator comparator = Comparator::kGreater;
  double threshold_value = 0.0;
  double weight = 0.0;
  std::string description;

  bool operator==(const Rule &) const = default;
};

struct RuleSet {
  std::vector<Rule> rules;
  double decision_threshold = 0.0;

  bool operator==(const RuleSet &) const = default;
};

struct RuleOutcome {
  std::vector<std::string> fired;
  double aggregate_score = 0.0;
  bool flagged = false;
};

// Lists every violation (unknown feature, duplicate id, negative weight,
// negative threshold). Empty means valid.
std::vector<std::string> validate_ruleset(const RuleSet &ruleset);

bool rule_fires(const Rule &rule, const FeatureVector &features);

// Precondition: the rule set passed validate_ruleset.
RuleOutcome evaluate(const RuleSet &ruleset, const FeatureVector &features);

// Throw ConfigError listing all violations.
RuleSet parse_ruleset(std::string_view text);
RuleSet load_ruleset(const std::filesystem::path &path);

std::string serialize_ruleset(const RuleSet &ruleset);

// The illustrative rule set shipped as docs/rules.example.json.
RuleSet default_ruleset();

}  // namespace marketguard

#endif  // MARKETGUARD_RULES_H_
