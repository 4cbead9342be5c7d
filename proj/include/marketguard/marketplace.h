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

// Seller activity data: profiles, time-stamped activity records, the
// newline-delimited dataset format, and a seeded synthetic generator.

#ifndef MARKETGUARD_MARKETPLACE_H_
#define MARKETGUARD_MARKETPLACE_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "marketguard/types.h"

namespace marketguard {

struct SellerProfile {
  std::string seller_id;
  std::string display_name;
  std::optional<std::string> tax_id;
  std::optional<std::string> bank_account_hash;
  std::string address;
  std::string email_domain;
  Timestamp enrolled_at = 0;

  bool operator==(const SellerProfile &) const = default;
};

struct Listing {
  bool declared_attributes_ok = true;
  bool operator==(const Listing &) const = default;
};

struct Order {
  std::string order_id;
  double amount = 0.0;
  Timestamp promised_ship = 0;
  std::optional<Timestamp> actual_ship;  // absent while unshipped
  bool operator==(const Order &) const = default;
};

enum class ReturnReason { kDefective, kNotAsDescribed, kNeverArrived, kOther };

struct Return {
  std::string order_ref;
  ReturnReason reason = ReturnReason::kOther;
  bool operator==(const Return &) const = default;
};

struct Complaint {
  int severity = 1;  // 1..5
  bool operator==(const Complaint &) const = default;
};

// Pre-aggregated social media analytics for the seller.
struct SocialSignal {
  double sentiment = 0.0;  // [-1, 1]
  std::int64_t mentions = 0;
  bool operator==(const SocialSignal &) const = default;
};

struct ActivityRecord {
  Timestamp occurred_at = 0;
  std::variant<Listing, Order, Return, Complaint, SocialSignal> event;

  bool operator==(const ActivityRecord &) const = default;
};

struct SellerHistory {
  SellerProfile profile;
  std::vector<ActivityRecord> records;  // sorted by occurred_at
  Timestamp window_start = 0;
  Timestamp window_end = 0;

  bool operator==(const SellerHistory &) const = default;
};

struct LabeledSeller {
  SellerHistory history;
  Label label = Label::kNormal;

  bool operator==(const LabeledSeller &) const = default;
};

// One seller as stored in a dataset file; the label line is optional.
struct DatasetEntry {
  SellerHistory history;
  std::optional<Label> label;

  bool operator==(const DatasetEntry &) const = default;
};

std::string_view ToString(ReturnReason reason);
std::optional<ReturnReason> ParseReturnReason(std::string_view text);

// Every invariant violation of a history; empty means valid.
struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_history(const SellerHistory &history);

// Dataset file: one JSON object per line, each with a "kind" of profile,
// listing, order, return, complaint, social or label. A seller's profile line
// precedes its other lines. Records are re-sorted by occurred_at on load
// (stable for equal timestamps). Throws ParseError with the line number for
// malformed lines and ValidationError for duplicate sellers or histories that
// fail validate_history.
std::vector<DatasetEntry> read_dataset(std::istream &in);
std::vector<DatasetEntry> load_dataset(const std::filesystem::path &path);
std::vector<SellerHistory> load_histories(const std::filesystem::path &path);
// Throws ValidationError if any seller lacks a label line.
std::vector<LabeledSeller> load_labeled(const std::filesystem::path &path);

void write_dataset(std::ostream &out, std::span<const DatasetEntry> entries);
void save_dataset(const std::filesystem::path &path,
                  std::span<const DatasetEntry> entries);
std::vector<DatasetEntry> ToEntries(std::span<const LabeledSeller> sellers);

// Shift magnitudes applied to fraudulent sellers' generating distributions.
struct EffectSizes {
  double listing_error = 0.20;       // lower P(listing attributes ok)
  double return_rate = 0.15;         // higher P(return) per order
  double late_shipment = 0.25;       // higher P(ship after promise)
  double complaint_rate = 0.15;      // higher P(complaint) per order
  double complaint_severity = 1.0;   // higher mean severity
  double sentiment = 0.6;            // lower mean social sentiment

  bool operator==(const EffectSizes &) const = default;
};

struct GeneratorConfig {
  int n_sellers = 500;
  double fraud_fraction = 0.2;
  int window_days = 90;
  // Sellers with no orders in the window (new enrolments).
  double cold_start_fraction = 0.05;
  EffectSizes effect_sizes;
  std::uint64_t rng_seed = 0;
  Timestamp window_start = 1767225600;  // 2026-01-01T00:00:00Z

  // Throws InvalidInputError.
  void Validate() const;
};

// floor(n_sellers * fraud_fraction) sellers are labelled fraudulent.
std::vector<LabeledSeller> generate_synthetic(const GeneratorConfig &config);

// Stratified split: within each class, a seeded shuffle sends
// round(train_fraction * class size) sellers to the first part.
std::pair<std::vector<LabeledSeller>, std::vector<LabeledSeller>>
split_dataset(std::span<const LabeledSeller> sellers, double train_fraction,
              std::uint64_t seed);

}  // namespace marketguard

#endif  // MARKETGUARD_MARKETPLACE_H_
