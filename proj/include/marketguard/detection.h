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

// Fraud detection: reputation matching, expert inputs, and fusion of all
// signals (expert, reputation, rules, SVM) into one verdict per seller.
//
// Fusion precedence, first applicable branch wins:
//   1. an expert verdict decides, confidence 1.0;
//   2. a banned reputation match means Fraudulent, confidence 0.95;
//   3. no order history means InsufficientHistory, confidence 0.0;
//   4. s = w_rules * min(rule_score / decision_threshold, 1)
//          + w_svm * sigmoid(svm_score);
//      Fraudulent iff s >= fusion_threshold, confidence s (Fraudulent) or
//      1 - s (Normal).

#ifndef MARKETGUARD_DETECTION_H_
#define MARKETGUARD_DETECTION_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "marketguard/marketplace.h"
#include "marketguard/pipeline.h"
#include "marketguard/rules.h"

namespace marketguard {

// ---------------------------------------------------------------------------
// Reputation

enum class ReputationStatus { kBanned, kClean };
enum class ReputationSource { kInternal, kExternal };

struct ReputationRecord {
  SellerProfile attributes;
  ReputationStatus status = ReputationStatus::kBanned;
  ReputationSource source = ReputationSource::kInternal;
  Timestamp recorded_at = 0;

  bool operator==(const ReputationRecord &) const = default;
};

struct ReputationMatch {
  std::size_t record_index = 0;      // position in the reputation database
  std::string matched_seller_id;     // the banned record's seller id
  std::vector<std::string> fields;   // identifiers that matched
  bool strong = false;               // matched on tax_id or bank_account_hash

  bool operator==(const ReputationMatch &) const = default;
};

// Lower-cased alphanumeric words joined by single spaces, so that
// "ACME  Traders!" and "acme traders" compare equal.
std::string NormalizeIdentifier(std::string_view text);

// A banned record matches on any equal strong identifier (tax_id,
// bank_account_hash) or on at least two equal weak identifiers (address,
// email_domain, display_name; compared after NormalizeIdentifier). Empty
// identifiers never match. Clean records are ignored. The first matching
// record wins.
std::optional<ReputationMatch> reputation_match(std::span<const ReputationRecord> db,
                                                const SellerProfile &profile);

// ---------------------------------------------------------------------------
// Expert inputs

struct ExpertInput {
  std::string seller_id;
  Label verdict = Label::kFraudulent;
  std::string note;
  std::string expert_id;
  Timestamp recorded_at = 0;

  bool operator==(const ExpertInput &) const = default;
};

// Persisted expert inputs in ingest order.
class ExpertStore {
 public:
  ExpertStore() = default;
  explicit ExpertStore(std::vector<ExpertInput> inputs);

  const std::vector<ExpertInput> &inputs() const { return inputs_; }

  // True when an input with the same expert, seller and verdict exists.
  bool Contains(const ExpertInput &input) const;
  void Append(ExpertInput input);

  // The deciding input for a seller: latest recorded_at, later ingests
  // winning ties.
  std::optional<ExpertInput> Latest(std::string_view seller_id) const;

 private:
  std::vector<ExpertInput> inputs_;
};

enum class IngestResult { kAccepted, kDuplicate };

// Persists `input` in `store` and appends (history, expert label) to
// `training_pool`. Re-ingesting the same expert/seller/verdict is a no-op.
// Throws NotFoundError when the seller is not among `known`, and
// InvalidInputError for an empty seller id.
IngestResult ingest_expert_input(ExpertStore &store, const ExpertInput &input,
                                 std::span<const SellerHistory> known,
                                 std::vector<LabeledSeller> &training_pool);

// ---------------------------------------------------------------------------
// Stores: one JSON object per line.
//   {"kind":"reputation","seller_id":..,<profile fields>,"status":"banned",
//    "source":"internal","recorded_at":..}
//   {"kind":"expert","seller_id":..,"verdict":"fraudulent","note":..,
//    "expert_id":..,"recorded_at":..}
// Malformed lines throw ParseError with the line number.

std::vector<ReputationRecord> read_reputation(std::istream &in);
void write_reputation(std::ostream &out, std::span<const ReputationRecord> records);
std::vector<ReputationRecord> load_reputation(const std::filesystem::path &path);
void save_reputation(const std::filesystem::path &path,
                     std::span<const ReputationRecord> records);

std::vector<ExpertInput> read_expert_inputs(std::istream &in);
void write_expert_inputs(std::ostream &out, std::span<const ExpertInput> inputs);
std::vector<ExpertInput> load_expert_inputs(const std::filesystem::path &path);
void save_expert_inputs(const std::filesystem::path &path,
                        std::span<const ExpertInput> inputs);

// ---------------------------------------------------------------------------
// Fusion

struct FusionPolicy {
  double w_rules = 0.4;
  double w_svm = 0.6;
  double fusion_threshold = 0.5;

  // Throws ConfigError: weights must be finite, >= 0 and sum to 1 (within
  // 1e-9); the threshold must lie in [0, 1].
  void Validate() const;
  bool operator==(const FusionPolicy &) const = default;
};

inline constexpr double kExpertConfidence = 1.0;
inline constexpr double kReputationConfidence = 0.95;

struct SignalBundle {
  std::optional<ReputationMatch> reputation;   // banned-record hit
  std::optional<ExpertInput> expert_verdict;
  RuleOutcome rule_outcome;
  double rule_threshold = 0.0;                 // the rule set's decision threshold
  std::optional<double> svm_score;             // present iff has_history
  bool has_history = false;
};

enum class Verdict { kFraudulent, kNormal, kInsufficientHistory };

// Which fusion branch produced the verdict.
enum class DecisionBasis { kExpert, kReputation, kColdStart, kScore };

std::string_view ToString(Verdict v);
std::optional<Verdict> ParseVerdict(std::string_view text);
std::string_view ToString(DecisionBasis b);
std::optional<DecisionBasis> ParseDecisionBasis(std::string_view text);

struct Contribution {
  std::string name;
  double value = 0.0;
  bool operator==(const Contribution &) const = default;
};

struct FraudVerdict {
  std::string seller_id;
  Verdict verdict = Verdict::kNormal;
  double confidence = 0.0;
  DecisionBasis decided_by = DecisionBasis::kScore;
  std::vector<Contribution> contributing;
  Timestamp as_of = 0;  // end of the observation window the verdict covers

  bool operator==(const FraudVerdict &) const = default;
};

double Sigmoid(double t);

// min(aggregate / threshold, 1); a zero threshold flags every seller, so the
// normalized score is then 1.
double NormalizedRuleScore(const RuleOutcome &outcome, double decision_threshold);

// Throws ConfigError for an invalid policy and InvalidInputError for a bundle
// whose svm_score presence disagrees with has_history. The returned verdict
// has an empty seller_id.
FraudVerdict fuse(const SignalBundle &bundle, const FusionPolicy &policy);

// ---------------------------------------------------------------------------
// End-to-end detection

struct PipelineContext {
  PipelineModel model;
  RuleSet rules;
  std::vector<ReputationRecord> reputation;
  ExpertStore experts;
  FusionPolicy fusion;
};

// Throws ManifestMismatchError when the model's manifest differs from the
// extractor's, and ConfigError for an invalid rule set or fusion policy.
void validate_context(const PipelineContext &context);

// Builds the signal bundle for one seller. The SVM is consulted only for
// sellers with order history.
SignalBundle collect_signals(const PipelineContext &context, const SellerHistory &history);

// collect_signals then fuse, after validate_context. The verdict carries the
// seller id and the history's window end as as_of.
FraudVerdict detect_seller(const PipelineContext &context, const SellerHistory &history);

// ---------------------------------------------------------------------------
// Verdict files: one object per line,
//   {"kind":"verdict","seller_id":..,"verdict":"Fraudulent","confidence":..,
//    "decided_by":"score","as_of":..,
//    "contributing":[{"name":"rules","value":..},...]}

void write_verdicts(std::ostream &out, std::span<const FraudVerdict> verdicts);
std::vector<FraudVerdict> read_verdicts(std::istream &in);
void save_verdicts(const std::filesystem::path &path, std::span<const FraudVerdict> verdicts);
std::vector<FraudVerdict> load_verdicts(const std::filesystem::path &path);

}  // namespace marketguard

#endif  // MARKETGUARD_DETECTION_H_
