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

#include "marketguard/detection.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "marketguard/error.h"
#include "ndjson.h"

namespace marketguard {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Reputation

std::string NormalizeIdentifier(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

namespace {

bool SameStrong(const std::optional<std::string> &a, const std::optional<std::string> &b) {
  return a && b && !a->empty() && *a == *b;
}

bool SameWeak(std::string_view a, std::string_view b) {
  const std::string na = NormalizeIdentifier(a);
  return !na.empty() && na == NormalizeIdentifier(b);
}

}  // namespace

std::optional<ReputationMatch> reputation_match(std::span<const ReputationRecord> db,
                                                const SellerProfile &profile) {
  for (std::size_t i = 0; i < db.size(); ++i) {
    const ReputationRecord &rec = db[i];
    if (rec.status != ReputationStatus::kBanned) continue;
    const SellerProfile &banned = rec.attributes;
    ReputationMatch m;
    m.record_index = i;
    m.matched_seller_id = banned.seller_id;
    if (SameStrong(profile.tax_id, banned.tax_id)) m.fields.push_back("tax_id");
    if (SameStrong(profile.bank_account_hash, banned.bank_account_hash)) {
      m.fields.push_back("bank_account_hash");
    }
    m.strong = !m.fields.empty();
    std::size_t weak = 0;
    if (SameWeak(profile.address, banned.address)) {
      m.fields.push_back("address");
      ++weak;
    }
    if (SameWeak(profile.email_domain, banned.email_domain)) {
      m.fields.push_back("email_domain");
      ++weak;
    }
    if (SameWeak(profile.display_name, banned.display_name)) {
      m.fields.push_back("display_name");
      ++weak;
    }
    if (m.strong || weak >= 2) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Expert inputs

ExpertStore::ExpertStore(std::vector<ExpertInput> inputs) : inputs_(std::move(inputs)) {}

bool ExpertStore::Contains(const ExpertInput &input) const {
  return std::any_of(inputs_.begin(), inputs_.end(), [&](const ExpertInput &e) {
    return e.expert_id == input.expert_id && e.seller_id == input.seller_id &&
           e.verdict == input.verdict;
  });
}

void ExpertStore::Append(ExpertInput input) { inputs_.push_back(std::move(input)); }

std::optional<ExpertInput> ExpertStore::Latest(std::string_view seller_id) const {
  const ExpertInput *best = nullptr;
  for (const auto &e : inputs_) {
    if (e.seller_id != seller_id) continue;
    if (best == nullptr || e.recorded_at >= best->recorded_at) best = &e;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

IngestResult ingest_expert_input(ExpertStore &store, const ExpertInput &input,
                                 std::span<const SellerHistory> known,
                                 std::vector<LabeledSeller> &training_pool) {
  if (input.seller_id.empty()) throw InvalidInputError("expert input has an empty seller_id");
  auto it = std::find_if(known.begin(), known.end(), [&](const SellerHistory &h) {
    return h.profile.seller_id == input.seller_id;
  });
  if (it == known.end()) throw NotFoundError("unknown seller '" + input.seller_id + "'");
  if (store.Contains(input)) return IngestResult::kDuplicate;
  store.Append(input);
  training_pool.push_back({*it, input.verdict});
  return IngestResult::kAccepted;
}

// ---------------------------------------------------------------------------
// Stores

namespace {

std::string_view StatusName(ReputationStatus s) {
  return s == ReputationStatus::kBanned ? "banned" : "clean";
}

std::string_view SourceName(ReputationSource s) {
  return s == ReputationSource::kInternal ? "internal" : "external";
}

std::string_view LabelName(Label l) {
  return l == Label::kFraudulent ? "fraudulent" : "normal";
}

void RequireKind(const LineObject &o, const char *expected) {
  if (o.String("kind") != expected) {
    o.Fail(std::string("expected kind '") + expected + "'");
  }
}

}  // namespace

std::vector<ReputationRecord> read_reputation(std::istream &in) {
  std::vector<ReputationRecord> out;
  ForEachObjectLine(in, [&](const LineObject &o) {
    RequireKind(o, "reputation");
    ReputationRecord r;
    r.attributes = ParseProfile(o);
    const std::string status = o.String("status");
    if (status == "banned") {
      r.status = ReputationStatus::kBanned;
    } else if (status == "clean") {
      r.status = ReputationStatus::kClean;
    } else {
      o.Fail("status must be 'banned' or 'clean'");
    }
    const std::string source = o.String("source");
    if (source == "internal") {
      r.source = ReputationSource::kInternal;
    } else if (source == "external") {
      r.source = ReputationSource::kExternal;
    } else {
      o.Fail("source must be 'internal' or 'external'");
    }
    r.recorded_at = o.Int("recorded_at");
    out.push_back(std::move(r));
  });
  return out;
}

void write_reputation(std::ostream &out, std::span<const ReputationRecord> records) {
  for (const auto &r : records) {
    ordered_json j;
    j["kind"] = "reputation";
    AppendProfileJson(j, r.attributes);
    j["status"] = std::string(StatusName(r.status));
    j["source"] = std::string(SourceName(r.source));
    j["recorded_at"] = r.recorded_at;
    out << j.dump() << '\n';
  }
}

std::vector<ExpertInput> read_expert_inputs(std::istream &in) {
  std::vector<ExpertInput> out;
  ForEachObjectLine(in, [&](const LineObject &o) {
    RequireKind(o, "expert");
    ExpertInput e;
    e.seller_id = o.String("seller_id");
    if (e.seller_id.empty()) o.Fail("seller_id must be non-empty");
    const std::string verdict = o.String("verdict");
    if (verdict == "fraudulent") {
      e.verdict = Label::kFraudulent;
    } else if (verdict == "normal") {
      e.verdict = Label::kNormal;
    } else {
      o.Fail("verdict must be 'fraudulent' or 'normal'");
    }
    e.note = o.String("note");
    e.expert_id = o.String("expert_id");
    e.recorded_at = o.Int("recorded_at");
    out.push_back(std::move(e));
  });
  return out;
}

void write_expert_inputs(std::ostream &out, std::span<const ExpertInput> inputs) {
  for (const auto &e : inputs) {
    ordered_json j;
    j["kind"] = "expert";
    j["seller_id"] = e.seller_id;
    j["verdict"] = std::string(LabelName(e.verdict));
    j["note"] = e.note;
    j["expert_id"] = e.expert_id;
    j["recorded_at"] = e.recorded_at;
    out << j.dump() << '\n';
  }
}

namespace {

template <typename T, typename Reader>
std::vector<T> LoadFile(const std::filesystem::path &path, const char *what, Reader read) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError(std::string("cannot open ") + what + " '" + path.string() + "'");
  return read(in);
}

template <typename T, typename Writer>
void SaveFile(const std::filesystem::path &path, std::span<const T> items, const char *what,
              Writer write) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError(std::string("cannot write ") + what + " '" + path.string() + "'");
  write(out, items);
  out.flush();
  if (!out) throw InvalidInputError(std::string("failed writing ") + what + " '" + path.string() + "'");
}

}  // namespace

std::vector<ReputationRecord> load_reputation(const std::filesystem::path &path) {
  return LoadFile<ReputationRecord>(path, "reputation file",
                                    [](std::istream &in) { return read_reputation(in); });
}

void save_reputation(const std::filesystem::path &path,
                     std::span<const ReputationRecord> records) {
  SaveFile(path, records, "reputation file",
           [](std::ostream &out, auto items) { write_reputation(out, items); });
}

std::vector<ExpertInput> load_expert_inputs(const std::filesystem::path &path) {
  return LoadFile<ExpertInput>(path, "expert inputs",
                               [](std::istream &in) { return read_expert_inputs(in); });
}

void save_expert_inputs(const std::filesystem::path &path,
                        std::span<const ExpertInput> inputs) {
  SaveFile(path, inputs, "expert inputs",
           [](std::ostream &out, auto items) { write_expert_inputs(out, items); });
}

// ---------------------------------------------------------------------------
// Fusion

void FusionPolicy::Validate() const {
  std::vector<std::string> v;
  if (!(std::isfinite(w_rules) && w_rules >= 0.0)) v.push_back("w_rules must be >= 0");
  if (!(std::isfinite(w_svm) && w_svm >= 0.0)) v.push_back("w_svm must be >= 0");
  if (v.empty() && std::abs(w_rules + w_svm - 1.0) > 1e-9) {
    v.push_back("w_rules + w_svm must equal 1");
  }
  if (!(fusion_threshold >= 0.0 && fusion_threshold <= 1.0)) {
    v.push_back("fusion_threshold must be in [0, 1]");
  }
  if (!v.empty()) throw ConfigError(std::move(v));
}

std::string_view ToString(Verdict v) {
  switch (v) {
    case Verdict::kFraudulent:
      return "Fraudulent";
    case Verdict::kNormal:
      return "Normal";
    case Verdict::kInsufficientHistory:
      return "InsufficientHistory";
  }
  return "Normal";
}

std::optional<Verdict> ParseVerdict(std::string_view text) {
  for (Verdict v : {Verdict::kFraudulent, Verdict::kNormal, Verdict::kInsufficientHistory}) {
    if (ToString(v) == text) return v;
  }
  return std::nullopt;
}

std::string_view ToString(DecisionBasis b) {
  switch (b) {
    case DecisionBasis::kExpert:
      return "expert";
    case DecisionBasis::kReputation:
      return "reputation";
    case DecisionBasis::kColdStart:
      return "cold_start";
    case DecisionBasis::kScore:
      return "score";
  }
  return "score";
}

std::optional<DecisionBasis> ParseDecisionBasis(std::string_view text) {
  for (DecisionBasis b : {DecisionBasis::kExpert, DecisionBasis::kReputation,
                          DecisionBasis::kColdStart, DecisionBasis::kScore}) {
    if (ToString(b) == text) return b;
  }
  return std::nullopt;
}

double Sigmoid(double t) {
  // Split by sign so that exp never overflows.
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double NormalizedRuleScore(const RuleOutcome &outcome, double decision_threshold) {
  if (decision_threshold <= 0.0) return 1.0;
  return std::min(outcome.aggregate_score / decision_threshold, 1.0);
}

FraudVerdict fuse(const SignalBundle &bundle, const FusionPolicy &policy) {
  policy.Validate();
  if (bundle.svm_score.has_value() != bundle.has_history) {
    throw InvalidInputError("svm_score must be present exactly when the seller has history");
  }
  if (bundle.svm_score && !std::isfinite(*bundle.svm_score)) {
    throw InvalidInputError("svm_score must be finite");
  }
  const double rule_score = NormalizedRuleScore(bundle.rule_outcome, bundle.rule_threshold);

  FraudVerdict out;
  if (bundle.expert_verdict) {
    const bool fraud = bundle.expert_verdict->verdict == Label::kFraudulent;
    out.verdict = fraud ? Verdict::kFraudulent : Verdict::kNormal;
    out.confidence = kExpertConfidence;
    out.decided_by = DecisionBasis::kExpert;
    out.contributing.push_back({"expert", fraud ? 1.0 : -1.0});
    return out;
  }
  if (bundle.reputation) {
    out.verdict = Verdict::kFraudulent;
    out.confidence = kReputationConfidence;
    out.decided_by = DecisionBasis::kReputation;
    out.contributing.push_back({"reputation", 1.0});
    return out;
  }
  if (!bundle.has_history) {
    out.verdict = Verdict::kInsufficientHistory;
    out.confidence = 0.0;
    out.decided_by = DecisionBasis::kColdStart;
    out.contributing.push_back({"rules", rule_score});
    return out;
  }
  const double svm_probability = Sigmoid(*bundle.svm_score);
  const double s = std::clamp(policy.w_rules * rule_score + policy.w_svm * svm_probability,
                              0.0, 1.0);
  const bool fraud = s >= policy.fusion_threshold;
  out.verdict = fraud ? Verdict::kFraudulent : Verdict::kNormal;
  out.confidence = fraud ? s : 1.0 - s;
  out.decided_by = DecisionBasis::kScore;
  out.contributing.push_back({"rules", rule_score});
  out.contributing.push_back({"svm", svm_probability});
  out.contributing.push_back({"combined", s});
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end detection

void validate_context(const PipelineContext &context) {
  check_manifest(context.model);
  auto violations = validate_ruleset(context.rules);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  context.fusion.Validate();
}

SignalBundle collect_signals(const PipelineContext &context, const SellerHistory &history) {
  const FeatureVector features = extract(history);
  SignalBundle bundle;
  bundle.reputation = reputation_match(context.reputation, history.profile);
  bundle.expert_verdict = context.experts.Latest(history.profile.seller_id);
  bundle.rule_outcome = evaluate(context.rules, features);
  bundle.rule_threshold = context.rules.decision_threshold;
  bundle.has_history = features.has_history;
  if (features.has_history) {
    bundle.svm_score = decision_value(context.model.svm, pipeline_sample(context.model, features));
  }
  return bundle;
}

FraudVerdict detect_seller(const PipelineContext &context, const SellerHistory &history) {
  validate_context(context);
  FraudVerdict v = fuse(collect_signals(context, history), context.fusion);
  v.seller_id = history.profile.seller_id;
  v.as_of = history.window_end;
  return v;
}

// ---------------------------------------------------------------------------
// Verdict files

void write_verdicts(std::ostream &out, std::span<const FraudVerdict> verdicts) {
  for (const auto &v : verdicts) {
    ordered_json j;
    j["kind"] = "verdict";
    j["seller_id"] = v.seller_id;
    j["verdict"] = std::string(ToString(v.verdict));
    j["confidence"] = v.confidence;
    j["decided_by"] = std::string(ToString(v.decided_by));
    j["as_of"] = v.as_of;
    j["contributing"] = ordered_json::array();
    for (const auto &c : v.contributing) {
      ordered_json item;
      item["name"] = c.name;
      item["value"] = c.value;
      j["contributing"].push_back(std::move(item));
    }
    out << j.dump() << '\n';
  }
}

std::vector<FraudVerdict> read_verdicts(std::istream &in) {
  std::vector<FraudVerdict> out;
  ForEachObjectLine(in, [&](const LineObject &o) {
    RequireKind(o, "verdict");
    FraudVerdict v;
    v.seller_id = o.String("seller_id");
    if (v.seller_id.empty()) o.Fail("seller_id must be non-empty");
    auto verdict = ParseVerdict(o.String("verdict"));
    if (!verdict) o.Fail("unknown verdict");
    v.verdict = *verdict;
    v.confidence = o.Real("confidence");
    if (v.confidence < 0.0 || v.confidence > 1.0) o.Fail("confidence must be in [0, 1]");
    auto basis = ParseDecisionBasis(o.String("decided_by"));
    if (!basis) o.Fail("unknown decided_by");
    v.decided_by = *basis;
    v.as_of = o.Int("as_of");
    const auto &items = o.Field("contributing");
    if (!items.is_array()) o.Fail("contributing must be an array");
    for (const auto &item : items) {
      const LineObject c(item, o.line());
      v.contributing.push_back({c.String("name"), c.Real("value")});
    }
    out.push_back(std::move(v));
  });
  return out;
}

void save_verdicts(const std::filesystem::path &path, std::span<const FraudVerdict> verdicts) {
  SaveFile(path, verdicts, "verdicts",
           [](std::ostream &out, auto items) { write_verdicts(out, items); });
}

std::vector<FraudVerdict> load_verdicts(const std::filesystem::path &path) {
  return LoadFile<FraudVerdict>(path, "verdicts",
                                [](std::istream &in) { return read_verdicts(in); });
}

}  // namespace marketguard
