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

// Fraud management: maps verdicts to marketplace actions along the ladder
// NoAction < Warn < SuspendWithGrace < Ban, and keeps an append-only ledger
// of the actions taken.
//
// A Fraudulent verdict selects the highest band whose lower bound its
// confidence reaches (ban_floor, then suspend_band, then warn_band); below
// warn_band it selects NoAction. Verdicts decided by a reputation hit always
// Ban. With repeat_escalation, a seller with a prior Warn or
// SuspendWithGrace moves one step up the ladder (never beyond Ban).

#ifndef MARKETGUARD_MANAGEMENT_H_
#define MARKETGUARD_MANAGEMENT_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marketguard/detection.h"
#include "marketguard/types.h"

namespace marketguard {

enum class Action { kNoAction = 0, kWarn = 1, kSuspendWithGrace = 2, kBan = 3 };

std::string_view ToString(Action a);
std::optional<Action> ParseAction(std::string_view text);

// Half-open confidence interval [lower, upper).
struct ConfidenceBand {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const ConfidenceBand &) const = default;
};

struct PolicyConfig {
  ConfidenceBand warn_band{0.5, 0.7};
  ConfidenceBand suspend_band{0.7, 0.9};
  double ban_floor = 0.9;
  int grace_period_days = 14;
  bool repeat_escalation = true;

  // Throws ConfigError listing every violation: bands must be non-empty,
  // inside [0, 1], disjoint and ordered warn < suspend < ban_floor; grace
  // period must be > 0.
  void Validate() const;
  bool operator==(const PolicyConfig &) const = default;
};

struct ActionDecision {
  std::string seller_id;
  Action action = Action::kNoAction;
  std::optional<Timestamp> deadline;  // set iff action is SuspendWithGrace
  std::string rationale;

  bool operator==(const ActionDecision &) const = default;
};

// `prior_actions` may hold decisions for any seller; only the verdict's
// seller's entries count. `now` is the decision time used for deadlines.
ActionDecision decide_action(const FraudVerdict &verdict, const PolicyConfig &policy,
                             std::span<const ActionDecision> prior_actions, Timestamp now);

// ---------------------------------------------------------------------------
// Actions ledger: one object per line,
//   {"kind":"action","batch":..,"decided_at":..,"seller_id":..,
//    "action":"SuspendWithGrace","deadline":..|null,"rationale":..}
// `batch` identifies the verdict batch the decision came from; a seller
// appears at most once per batch.

struct LedgerEntry {
  std::string batch;
  Timestamp decided_at = 0;
  ActionDecision decision;

  bool operator==(const LedgerEntry &) const = default;
};

std::vector<LedgerEntry> read_ledger(std::istream &in);
void write_ledger(std::ostream &out, std::span<const LedgerEntry> entries);
// A missing file is an empty ledger; an unreadable or malformed one throws.
std::vector<LedgerEntry> load_ledger(const std::filesystem::path &path);

// Decisions from `ledger` for use as priors, leaving out `exclude_batch`.
std::vector<ActionDecision> PriorDecisions(std::span<const LedgerEntry> ledger,
                                           std::string_view exclude_batch);

// Appends the entries whose (batch, seller) pair is not yet in the ledger
// file and whose action is not NoAction. Returns the entries written.
std::vector<LedgerEntry> append_to_ledger(const std::filesystem::path &path,
                                          std::span<const LedgerEntry> entries);

// Stable identifier for a verdict batch: FNV-1a of its serialized form.
std::string BatchId(std::span<const FraudVerdict> verdicts);

}  // namespace marketguard

#endif  // MARKETGUARD_MANAGEMENT_H_
