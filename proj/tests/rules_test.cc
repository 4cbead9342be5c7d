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

#include <random>
#include <string>

#include "doctest.h"
#include "marketguard/error.h"
#include "marketguard/rules.h"
#include "test_util.h"

#ifndef MARKETGUARD_SOURCE_DIR
#error "MARKETGUARD_SOURCE_DIR must be defined"
#endif

namespace marketguard {
namespace {

Rule MakeRule(std::string id, std::string feature, Comparator c, double value,
              double weight) {
  return {std::move(id), std::move(feature), c, value, weight, ""};
}

// Random rule set of up to `max_rules` rules with unique ids prefixed by
// `prefix`.
RuleSet RandomRuleSet(std::mt19937_64 &rng, int max_rules, const std::string &prefix) {
  RuleSet rs;
  rs.decision_threshold = testing::Uniform(rng, 0.0, 5.0);
  const int n = std::uniform_int_distribution<int>(0, max_rules)(rng);
  for (int i = 0; i < n; ++i) {
    Rule r;
    r.id = prefix + std::to_string(i);
    r.feature = std::string(kFeatureNames[rng() % kFeatureCount]);
    r.comparator = static_cast<Comparator>(rng() % 5);
    r.threshold_value = testing::Uniform(rng, -0.2, 1.2);
    r.weight = testing::Uniform(rng, 0.0, 3.0);
    rs.rules.push_back(r);
  }
  return rs;
}

FeatureVector RandomFeatures(std::mt19937_64 &rng) {
  FeatureVector v;
  v.listing_accuracy = testing::Uniform(rng, 0.0, 1.0);
  v.transaction_volume = testing::Uniform(rng, 0.0, 1.0);
  v.sla_adherence = testing::Uniform(rng, 0.0, 1.0);
  v.return_ratio = testing::Uniform(rng, 0.0, 1.0);
  v.complaint_rate = testing::Uniform(rng, 0.0, 1.0);
  v.customer_satisfaction = testing::Uniform(rng, 0.0, 1.0);
  v.social_sentiment = testing::Uniform(rng, -1.0, 1.0);
  v.has_history = true;
  return v;
}

TEST_CASE("empty rule set scores zero") {
  RuleSet rs;
  rs.decision_threshold = 1.0;
  const auto out = evaluate(rs, FeatureVector{});
  CHECK(out.aggregate_score == 0.0);
  CHECK_FALSE(out.flagged);
  CHECK(out.fired.empty());
}

TEST_CASE("single firing rule reaches the threshold") {
  RuleSet rs;
  rs.decision_threshold = 2.0;
  rs.rules.push_back(MakeRule("r", "return_ratio", Comparator::kGreater, 0.5, 2.0));
  FeatureVector v;
  v.return_ratio = 0.6;
  const auto out = evaluate(rs, v);
  CHECK(out.aggregate_score == 2.0);
  CHECK(out.flagged);
  CHECK(out.fired == std::vector<std::string>{"r"});
}

TEST_CASE("non-firing weight does not count") {
  RuleSet rs;
  rs.decision_threshold = 2.0;
  rs.rules.push_back(MakeRule("a", "return_ratio", Comparator::kGreater, 0.1, 1.0));
  rs.rules.push_back(MakeRule("b", "return_ratio", Comparator::kGreater, 0.9, 3.0));
  FeatureVector v;
  v.return_ratio = 0.5;
  const auto out = evaluate(rs, v);
  CHECK(out.aggregate_score == 1.0);
  CHECK_FALSE(out.flagged);
}

TEST_CASE("comparators") {
  FeatureVector v;
  v.return_ratio = 0.5;
  auto fires = [&](Comparator c, double t) {
    return rule_fires(MakeRule("x", "return_ratio", c, t, 1.0), v);
  };
  CHECK(fires(Comparator::kLess, 0.6));
  CHECK_FALSE(fires(Comparator::kLess, 0.5));
  CHECK(fires(Comparator::kLessEqual, 0.5));
  CHECK(fires(Comparator::kGreater, 0.4));
  CHECK_FALSE(fires(Comparator::kGreater, 0.5));
  CHECK(fires(Comparator::kGreaterEqual, 0.5));
  CHECK(fires(Comparator::kEqual, 0.5 + 5e-10));
  CHECK_FALSE(fires(Comparator::kEqual, 0.5 + 5e-9));
  CHECK(ParseComparator("≤") == Comparator::kLessEqual);
  CHECK(ParseComparator("≥") == Comparator::kGreaterEqual);
  CHECK_FALSE(ParseComparator("!=").has_value());
}

std::string RuleJson(const std::string &id, const std::string &feature,
                     const std::string &comparator, const std::string &weight = "1") {
  return R"({"id":")" + id + R"(","feature":")" + feature + R"(","comparator":")" +
         comparator + R"(","value":0.5,"weight":)" + weight + R"(,"description":"d"})";
}

std::string Doc(const std::string &rules) {
  return R"({"format":"marketguard-rules/1","decision_threshold":2,"rules":[)" + rules +
         "]}";
}

TEST_CASE("loading a well-formed rule set") {
  const auto dir = testing::ScratchDir("rules_load");
  testing::WriteFile(dir / "r.json",
                     Doc(RuleJson("a", "return_ratio", ">") + "," +
                         RuleJson("b", "sla_adherence", "<=") + "," +
                         RuleJson("c", "social_sentiment", "=")));
  const auto rs = load_ruleset(dir / "r.json");
  REQUIRE(rs.rules.size() == 3);
  CHECK(rs.decision_threshold == 2.0);
  CHECK(rs.rules[1].comparator == Comparator::kLessEqual);
  CHECK(rs.rules[2].description == "d");
}

std::string ConfigMessage(const std::string &text) {
  try {
    parse_ruleset(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

TEST_CASE("rule set errors are reported together") {
  const auto dup = ConfigMessage(Doc(RuleJson("same", "return_ratio", ">") + "," +
                                     RuleJson("same", "return_ratio", "<")));
  CHECK(dup.find("duplicate rule id 'same'") != std::string::npos);

  const auto neq = ConfigMessage(Doc(RuleJson("a", "return_ratio", "!=")));
  CHECK(neq.find("unsupported comparator") != std::string::npos);

  try {
    parse_ruleset(Doc(RuleJson("a", "no_such_feature", ">") + "," +
                      RuleJson("b", "return_ratio", ">", "-1") + "," +
                      RuleJson("a", "return_ratio", ">")));
    FAIL("expected a configuration error");
  } catch (const ConfigError &e) {
    CHECK(e.violations().size() == 3);
    const std::string msg = e.what();
    CHECK(msg.find("unknown feature 'no_such_feature'") != std::string::npos);
    CHECK(msg.find("negative weight") != std::string::npos);
    CHECK(msg.find("duplicate rule id 'a'") != std::string::npos);
  }

  CHECK(ConfigMessage(R"({"format":"other/1","decision_threshold":1,"rules":[]})")
            .find("unsupported format") != std::string::npos);
  CHECK(ConfigMessage(R"({"format":"marketguard-rules/1","rules":[]})")
            .find("decision_threshold") != std::string::npos);
  CHECK_FALSE(ConfigMessage("not json").empty());
  CHECK_THROWS_AS(load_ruleset("/nonexistent/rules.json"), ConfigError);
}

TEST_CASE("serialization round trip") {
  const RuleSet rs = default_ruleset();
  CHECK(validate_ruleset(rs).empty());
  CHECK(parse_ruleset(serialize_ruleset(rs)) == rs);
}

TEST_CASE("shipped example matches the built-in default") {
  const auto text = testing::ReadFile(std::filesystem::path(MARKETGUARD_SOURCE_DIR) /
                                      "docs" / "rules.example.json");
  REQUIRE_FALSE(text.empty());
  CHECK(parse_ruleset(text) == default_ruleset());
  CHECK(text == serialize_ruleset(default_ruleset()));
}

TEST_CASE("additivity over disjoint rule sets") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    RuleSet a = RandomRuleSet(rng, 10, "a");
    RuleSet b = RandomRuleSet(rng, 10, "b");
    b.decision_threshold = a.decision_threshold;
    RuleSet both = a;
    both.rules.insert(both.rules.end(), b.rules.begin(), b.rules.end());
    REQUIRE(validate_ruleset(both).empty());
    const auto v = RandomFeatures(rng);
    const double sa = evaluate(a, v).aggregate_score;
    const double sb = evaluate(b, v).aggregate_score;
    CHECK(evaluate(both, v).aggregate_score == doctest::Approx(sa + sb).epsilon(1e-12));
  }
}

TEST_CASE("adding a rule never lowers the score") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    RuleSet rs = RandomRuleSet(rng, 9, "r");
    const auto v = RandomFeatures(rng);
    const double before = evaluate(rs, v).aggregate_score;
    RuleSet extra = RandomRuleSet(rng, 1, "extra");
    if (extra.rules.empty()) continue;
    rs.rules.insert(rs.rules.begin() + static_cast<long>(rng() % (rs.rules.size() + 1)),
                    extra.rules[0]);
    CHECK(evaluate(rs, v).aggregate_score >= before);
  }
}

TEST_CASE("flagging matches an independent recomputation") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    const RuleSet rs = RandomRuleSet(rng, 10, "r");
    const auto v = RandomFeatures(rng);
    const auto values = v.values();
    double expected = 0.0;
    std::vector<std::string> fired;
    for (const Rule &r : rs.rules) {
      const double x = values[*FeatureIndex(r.feature)];
      bool hit = false;
      switch (r.comparator) {
        case Comparator::kLess: hit = x < r.threshold_value; break;
        case Comparator::kLessEqual: hit = x <= r.threshold_value; break;
        case Comparator::kGreater: hit = x > r.threshold_value; break;
        case Comparator::kGreaterEqual: hit = x >= r.threshold_value; break;
        case Comparator::kEqual: hit = std::abs(x - r.threshold_value) <= 1e-9; break;
      }
      if (hit) {
        expected += r.weight;
        fired.push_back(r.id);
      }
    }
    const auto out = evaluate(rs, v);
    CHECK(out.fired == fired);
    CHECK(out.aggregate_score == expected);
    CHECK(out.flagged == (expected >= rs.decision_threshold));
  }
}

}  // namespace
}  // namespace marketguard
