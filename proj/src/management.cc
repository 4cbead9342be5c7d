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

#include "marketguard/management.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "marketguard/error.h"
#include "marketguard/text_io.h"
#include "ndjson.h"

namespace marketguard {

using nlohmann::ordered_json;

std::string_view ToString(Action a) {
  switch (a) {
    case Action::kNoAction:
      return "NoAction";
    case Action::kWarn:
      return "Warn";
    case Action::kSuspendWithGrace:
      return "SuspendWithGrace";
    case Action::kBan:
      return "Ban";
  }
  return "NoAction";
}

std::optional<Action> ParseAction(std::string_view text) {
  for (Action a : {Action::kNoAction, Action::kWarn, Action::kSuspendWithGrace, Action::kBan}) {
    if (ToString(a) == text) return a;
  }
  return std::nullopt;
}

void PolicyConfig::Validate() const {
  std::vector<std::string> v;
  auto check_band = [&](const ConfidenceBand &b, const char *name) {
    if (!(b.lower >= 0.0 && b.upper <= 1.0 && b.lower < b.upper)) {
      v.push_back(std::string(name) + " must satisfy 0 <= lower < upper <= 1");
    }
  };
  check_band(warn_band, "warn_band");
  check_band(suspend_band, "suspend_band");
  if (!(ban_floor >= 0.0 && ban_floor <= 1.0)) v.push_back("ban_floor must be in [0, 1]");
  if (warn_band.upper > suspend_band.lower) {
    v.push_back("warn_band must end at or below the start of suspend_band");
  }
  if (suspend_band.upper > ban_floor) {
    v.push_back("suspend_band must end at or below ban_floor");
  }
  if (grace_period_days <= 0) v.push_back("grace_period_days must be > 0");
  if (!v.empty()) throw ConfigError(std::move(v));
}

namespace {

std::string FormatConfidence(double confidence) {
  std::ostringstream ss;
  ss.precision(3);
  ss << confidence;
  return ss.str();
}

}  // namespace

ActionDecision decide_action(const FraudVerdict &verdict, const PolicyConfig &policy,
                             std::span<const ActionDecision> prior_actions, Timestamp now) {
  policy.Validate();
  ActionDecision out;
  out.seller_id = verdict.seller_id;
  if (verdict.verdict != Verdict::kFraudulent) {
    out.rationale = std::string("verdict ") + std::string(ToString(verdict.verdict));
    return out;
  }

  const double c = verdict.confidence;
  if (verdict.decided_by == DecisionBasis::kReputation) {
    out.action = Action::kBan;
    out.rationale = "matches a banned seller in the reputation database";
  } else {
    if (c >= policy.ban_floor) {
      out.action = Action::kBan;
    } else if (c >= policy.suspend_band.lower) {
      out.action = Action::kSuspendWithGrace;
    } else if (c >= policy.warn_band.lower) {
      out.action = Action::kWarn;
    }
    out.rationale = "fraudulent with confidence " + FormatConfidence(c) + " (" +
                    std::string(ToString(verdict.decided_by)) + ")";
    if (out.action == Action::kNoAction) out.rationale += ", below the warn band";
  }

  if (policy.repeat_escalation && out.action != Action::kNoAction &&
      out.action != Action::kBan) {
    const bool repeat = std::any_of(
        prior_actions.begin(), prior_actions.end(), [&](const ActionDecision &p) {
          return p.seller_id == verdict.seller_id &&
                 (p.action == Action::kWarn || p.action == Action::kSuspendWithGrace);
        });
    if (repeat) {
      out.action = static_cast<Action>(static_cast<int>(out.action) + 1);
      out.rationale += "; escalated for a prior warning or suspension";
    }
  }
  if (out.action == Action::kSuspendWithGrace) {
    out.deadline = now + static_cast<Timestamp>(policy.grace_period_days) * kSecondsPerDay;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ledger

std::vector<LedgerEntry> read_ledger(std::istream &in) {
  std::vector<LedgerEntry> out;
  ForEachObjectLine(in, [&](const LineObject &o) {
    if (o.String("kind") != "action") o.Fail("expected kind 'action'");
    LedgerEntry e;
    e.batch = o.String("batch");
    e.decided_at = o.Int("decided_at");
    e.decision.seller_id = o.String("seller_id");
    if (e.decision.seller_id.empty()) o.Fail("seller_id must be non-empty");
    auto action = ParseAction(o.String("action"));
    if (!action) o.Fail("unknown action");
    e.decision.action = *action;
    e.decision.deadline = o.OptionalInt("deadline");
    if (e.decision.deadline.has_value() != (*action == Action::kSuspendWithGrace)) {
      o.Fail("deadline must be present exactly for SuspendWithGrace");
    }
    e.decision.rationale = o.String("rationale");
    out.push_back(std::move(e));
  });
  return out;
}

void write_ledger(std::ostream &out, std::span<const LedgerEntry> entries) {
  for (const auto &e : entries) {
    ordered_json j;
    j["kind"] = "action";
    j["batch"] = e.batch;
    j["decided_at"] = e.decided_at;
    j["seller_id"] = e.decision.seller_id;
    j["action"] = std::string(ToString(e.decision.action));
    j["deadline"] = e.decision.deadline ? ordered_json(*e.decision.deadline)
                                        : ordered_json(nullptr);
    j["rationale"] = e.decision.rationale;
    out << j.dump() << '\n';
  }
}

std::vector<LedgerEntry> load_ledger(const std::filesystem::path &path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot read actions ledger '" + path.string() + "'");
  return read_ledger(in);
}

std::vector<ActionDecision> PriorDecisions(std::span<const LedgerEntry> ledger,
                                           std::string_view exclude_batch) {
  std::vector<ActionDecision> out;
  for (const auto &e : ledger) {
    if (e.batch != exclude_batch) out.push_back(e.decision);
  }
  return out;
}

std::vector<LedgerEntry> append_to_ledger(const std::filesystem::path &path,
                                          std::span<const LedgerEntry> entries) {
  const auto existing = load_ledger(path);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto &e : existing) seen.emplace(e.batch, e.decision.seller_id);

  std::vector<LedgerEntry> fresh;
  for (const auto &e : entries) {
    if (e.decision.action == Action::kNoAction) continue;
    if (!seen.emplace(e.batch, e.decision.seller_id).second) continue;
    fresh.push_back(e);
  }
  if (fresh.empty()) return fresh;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw InvalidInputError("cannot append to actions ledger '" + path.string() + "'");
  write_ledger(out, fresh);
  out.flush();
  if (!out) throw InvalidInputError("failed writing actions ledger '" + path.string() + "'");
  return fresh;
}

std::string BatchId(std::span<const FraudVerdict> verdicts) {
  std::ostringstream ss;
  write_verdicts(ss, verdicts);
  return Fnv1aHex(ss.str());
}

}  // namespace marketguard
