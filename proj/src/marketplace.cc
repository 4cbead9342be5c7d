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

#include "marketguard/marketplace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "marketguard/error.h"
#include "ndjson.h"

namespace marketguard {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view ToString(ReturnReason reason) {
  switch (reason) {
    case ReturnReason::kDefective:
      return "defective";
    case ReturnReason::kNotAsDescribed:
      return "not_as_described";
    case ReturnReason::kNeverArrived:
      return "never_arrived";
    case ReturnReason::kOther:
      return "other";
  }
  return "other";
}

std::optional<ReturnReason> ParseReturnReason(std::string_view text) {
  if (text == "defective") return ReturnReason::kDefective;
  if (text == "not_as_described") return ReturnReason::kNotAsDescribed;
  if (text == "never_arrived") return ReturnReason::kNeverArrived;
  if (text == "other") return ReturnReason::kOther;
  return std::nullopt;
}

namespace {

std::string Describe(const ActivityRecord &r, std::size_t index) {
  static constexpr const char *kNames[] = {"listing", "order", "return",
                                           "complaint", "social"};
  return std::string(kNames[r.event.index()]) + " record #" +
         std::to_string(index) + " at " + std::to_string(r.occurred_at);
}

}  // namespace

ValidationReport validate_history(const SellerHistory &history) {
  ValidationReport report;
  auto &v = report.violations;
  if (history.profile.seller_id.empty()) v.push_back("seller_id is empty");
  if (history.window_start > history.window_end) {
    v.push_back("window start is after window end");
  }
  const auto &records = history.records;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].occurred_at < records[i - 1].occurred_at) {
      v.push_back("records not time-ordered");
      break;
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ActivityRecord &r = records[i];
    if (r.occurred_at < history.window_start) {
      v.push_back(Describe(r, i) + " is before window start");
    } else if (r.occurred_at > history.window_end) {
      v.push_back(Describe(r, i) + " is after window end");
    }
    if (const auto *o = std::get_if<Order>(&r.event)) {
      if (!(o->amount >= 0.0) || !std::isfinite(o->amount)) {
        v.push_back(Describe(r, i) + " has a negative amount");
      }
    } else if (const auto *c = std::get_if<Complaint>(&r.event)) {
      if (c->severity < 1 || c->severity > 5) {
        v.push_back(Describe(r, i) + " has severity outside [1, 5]");
      }
    } else if (const auto *s = std::get_if<SocialSignal>(&r.event)) {
      if (!(s->sentiment >= -1.0 && s->sentiment <= 1.0)) {
        v.push_back(Describe(r, i) + " has sentiment outside [-1, 1]");
      }
      if (s->mentions < 0) {
        v.push_back(Describe(r, i) + " has negative mentions");
      }
    }
  }
  return report;
}

namespace {

ActivityRecord ParseRecord(const std::string &kind, const LineObject &o) {
  ActivityRecord r;
  r.occurred_at = o.Int("occurred_at");
  if (kind == "listing") {
    r.event = Listing{o.Bool("declared_attributes_ok")};
  } else if (kind == "order") {
    Order order;
    order.order_id = o.String("order_id");
    order.amount = o.Real("amount");
    if (order.amount < 0.0) o.Fail("order amount must be >= 0");
    order.promised_ship = o.Int("promised_ship");
    order.actual_ship = o.OptionalInt("actual_ship");
    r.event = std::move(order);
  } else if (kind == "return") {
    auto reason = ParseReturnReason(o.String("reason"));
    if (!reason) o.Fail("unknown return reason");
    r.event = Return{o.String("order_ref"), *reason};
  } else if (kind == "complaint") {
    const std::int64_t severity = o.Int("severity");
    if (severity < 1 || severity > 5) o.Fail("complaint severity must be in [1, 5]");
    r.event = Complaint{static_cast<int>(severity)};
  } else {
    SocialSignal s;
    s.sentiment = o.Real("sentiment");
    if (s.sentiment < -1.0 || s.sentiment > 1.0) {
      o.Fail("sentiment must be in [-1, 1]");
    }
    s.mentions = o.Int("mentions");
    if (s.mentions < 0) o.Fail("mentions must be >= 0");
    r.event = s;
  }
  return r;
}

ordered_json RecordJson(const std::string &seller_id, const ActivityRecord &r) {
  ordered_json j;
  struct Visitor {
    ordered_json &j;
    void operator()(const Listing &l) const {
      j["kind"] = "listing";
      j["declared_attributes_ok"] = l.declared_attributes_ok;
    }
    void operator()(const Order &o) const {
      j["kind"] = "order";
      j["order_id"] = o.order_id;
      j["amount"] = o.amount;
      j["promised_ship"] = o.promised_ship;
      if (o.actual_ship) {
        j["actual_ship"] = *o.actual_ship;
      } else {
        j["actual_ship"] = nullptr;
      }
    }
    void operator()(const Return &ret) const {
      j["kind"] = "return";
      j["order_ref"] = ret.order_ref;
      j["reason"] = std::string(ToString(ret.reason));
    }
    void operator()(const Complaint &c) const {
      j["kind"] = "complaint";
      j["severity"] = c.severity;
    }
    void operator()(const SocialSignal &s) const {
      j["kind"] = "social";
      j["sentiment"] = s.sentiment;
      j["mentions"] = s.mentions;
    }
  };
  // "kind" first, then the seller, then the timestamp.
  ordered_json body;
  std::visit(Visitor{body}, r.event);
  j["kind"] = body["kind"];
  j["seller_id"] = seller_id;
  j["occurred_at"] = r.occurred_at;
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (it.key() != "kind") j[it.key()] = it.value();
  }
  return j;
}

}  // namespace

void AppendProfileJson(ordered_json &out, const SellerProfile &p) {
  out["seller_id"] = p.seller_id;
  out["display_name"] = p.display_name;
  out["tax_id"] = p.tax_id ? ordered_json(*p.tax_id) : ordered_json(nullptr);
  out["bank_account_hash"] =
      p.bank_account_hash ? ordered_json(*p.bank_account_hash) : ordered_json(nullptr);
  out["address"] = p.address;
  out["email_domain"] = p.email_domain;
  out["enrolled_at"] = p.enrolled_at;
}

SellerProfile ParseProfile(const LineObject &o) {
  SellerProfile p;
  p.seller_id = o.String("seller_id");
  p.display_name = o.String("display_name");
  p.tax_id = o.OptionalString("tax_id");
  p.bank_account_hash = o.OptionalString("bank_account_hash");
  p.address = o.String("address");
  p.email_domain = o.String("email_domain");
  p.enrolled_at = o.Int("enrolled_at");
  return p;
}

std::vector<DatasetEntry> read_dataset(std::istream &in) {
  std::vector<DatasetEntry> entries;
  std::unordered_map<std::string, std::size_t> index;
  ForEachObjectLine(in, [&](const LineObject &o) {
    const std::size_t line = o.line();
    const std::string kind = o.String("kind");
    const std::string seller_id = o.String("seller_id");
    if (seller_id.empty()) o.Fail("seller_id must be non-empty");

    if (kind == "profile") {
      if (index.count(seller_id)) {
        throw ValidationError("line " + std::to_string(line) +
                              ": duplicate seller_id '" + seller_id + "'");
      }
      DatasetEntry entry;
      entry.history.profile = ParseProfile(o);
      entry.history.window_start = o.Int("window_start");
      entry.history.window_end = o.Int("window_end");
      index.emplace(seller_id, entries.size());
      entries.push_back(std::move(entry));
      return;
    }

    auto it = index.find(seller_id);
    if (it == index.end()) {
      o.Fail("record for seller '" + seller_id + "' precedes its profile");
    }
    DatasetEntry &entry = entries[it->second];
    if (kind == "label") {
      if (entry.label) o.Fail("duplicate label for seller '" + seller_id + "'");
      auto label = LabelFromInt(o.Int("label"));
      if (!label) o.Fail("label must be -1 or 1");
      entry.label = *label;
    } else if (kind == "listing" || kind == "order" || kind == "return" ||
               kind == "complaint" || kind == "social") {
      entry.history.records.push_back(ParseRecord(kind, o));
    } else {
      o.Fail("unknown kind '" + kind + "'");
    }
  });

  for (auto &entry : entries) {
    auto &records = entry.history.records;
    std::stable_sort(records.begin(), records.end(),
                     [](const ActivityRecord &a, const ActivityRecord &b) {
                       return a.occurred_at < b.occurred_at;
                     });
    const ValidationReport report = validate_history(entry.history);
    if (!report.ok()) {
      throw ValidationError("seller '" + entry.history.profile.seller_id +
                            "': " + report.violations.front());
    }
  }
  return entries;
}

std::vector<DatasetEntry> load_dataset(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open dataset '" + path.string() + "'");
  return read_dataset(in);
}

std::vector<SellerHistory> load_histories(const std::filesystem::path &path) {
  std::vector<SellerHistory> out;
  for (auto &entry : load_dataset(path)) out.push_back(std::move(entry.history));
  return out;
}

std::vector<LabeledSeller> load_labeled(const std::filesystem::path &path) {
  std::vector<LabeledSeller> out;
  for (auto &entry : load_dataset(path)) {
    if (!entry.label) {
      throw ValidationError("seller '" + entry.history.profile.seller_id +
                            "' has no label");
    }
    out.push_back({std::move(entry.history), *entry.label});
  }
  return out;
}

void write_dataset(std::ostream &out, std::span<const DatasetEntry> entries) {
  for (const auto &entry : entries) {
    const SellerHistory &h = entry.history;
    const SellerProfile &p = h.profile;
    ordered_json profile;
    profile["kind"] = "profile";
    AppendProfileJson(profile, p);
    profile["window_start"] = h.window_start;
    profile["window_end"] = h.window_end;
    out << profile.dump() << '\n';
    for (const auto &r : h.records) out << RecordJson(p.seller_id, r).dump() << '\n';
    if (entry.label) {
      ordered_json label;
      label["kind"] = "label";
      label["seller_id"] = p.seller_id;
      label["label"] = ToInt(*entry.label);
      out << label.dump() << '\n';
    }
  }
}

void save_dataset(const std::filesystem::path &path,
                  std::span<const DatasetEntry> entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError("cannot write dataset '" + path.string() + "'");
  write_dataset(out, entries);
  out.flush();
  if (!out) throw InvalidInputError("failed writing dataset '" + path.string() + "'");
}

std::vector<DatasetEntry> ToEntries(std::span<const LabeledSeller> sellers) {
  std::vector<DatasetEntry> out;
  out.reserve(sellers.size());
  for (const auto &s : sellers) out.push_back({s.history, s.label});
  return out;
}

}  // namespace marketguard
