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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "marketguard/error.h"
#include "marketguard/marketplace.h"

namespace marketguard {

void GeneratorConfig::Validate() const {
  if (n_sellers <= 0) throw InvalidInputError("n_sellers must be > 0");
  if (!(fraud_fraction >= 0.0 && fraud_fraction <= 1.0)) {
    throw InvalidInputError("fraud_fraction must be in [0, 1]");
  }
  if (!(cold_start_fraction >= 0.0 && cold_start_fraction <= 1.0)) {
    throw InvalidInputError("cold_start_fraction must be in [0, 1]");
  }
  if (window_days <= 0) throw InvalidInputError("window_days must be > 0");
  const EffectSizes &e = effect_sizes;
  for (double v : {e.listing_error, e.return_rate, e.late_shipment,
                   e.complaint_rate, e.complaint_severity, e.sentiment}) {
    if (!std::isfinite(v)) throw InvalidInputError("effect sizes must be finite");
  }
}

namespace {

constexpr std::array kFirstWords = {"Acme",   "Blue",  "Cedar",  "Delta",
                                    "Evergreen", "Falcon", "Granite", "Harbor",
                                    "Ivory",  "Juniper", "Kestrel", "Lumen"};
constexpr std::array kSecondWords = {"Traders", "Goods",  "Outlet", "Supply",
                                     "Market",  "Bazaar", "Depot",  "Emporium"};
constexpr std::array kStreets = {"Main",  "Oak",   "Pine",  "Maple",
                                 "Cedar", "Elm",   "Lake",  "Hill",
                                 "River", "Park",  "Mill",  "Station"};
constexpr std::array kCities = {"Springfield", "Riverton", "Lakeside",
                                "Fairview",    "Georgetown", "Ashland"};
constexpr std::array kDomains = {"mailbox.example", "shopmail.example",
                                 "inbox.example",   "post.example",
                                 "merchant.example", "trade.example"};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double Normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(rng_);
  }
  int Poisson(double mean) {
    return std::poisson_distribution<int>(mean)(rng_);
  }
  bool Bernoulli(double p) {
    return Uniform(0.0, 1.0) < std::clamp(p, 0.0, 1.0);
  }
  template <typename Array>
  auto Pick(const Array &a) {
    return a[static_cast<std::size_t>(UniformInt(0, static_cast<std::int64_t>(a.size()) - 1))];
  }
  std::string Digits(int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + UniformInt(0, 9)));
    return s;
  }
  std::string Hex(int n) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(kHex[UniformInt(0, 15)]);
    return s;
  }
  std::mt19937_64 &engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

double Prob(double p) { return std::clamp(p, 0.0, 1.0); }

SellerHistory MakeSeller(Sampler &s, const GeneratorConfig &config,
                         std::size_t index, bool fraud, bool cold_start) {
  const EffectSizes &fx = config.effect_sizes;
  const double f = fraud ? 1.0 : 0.0;
  const Timestamp start = config.window_start;
  const Timestamp end = start + config.window_days * kSecondsPerDay;

  SellerHistory h;
  h.window_start = start;
  h.window_end = end;
  char id[32];
  std::snprintf(id, sizeof(id), "S%05zu", index + 1);
  SellerProfile &p = h.profile;
  p.seller_id = id;
  p.display_name = std::string(s.Pick(kFirstWords)) + " " + s.Pick(kSecondWords) +
                   " " + std::to_string(index + 1);
  if (s.Bernoulli(0.9)) p.tax_id = "TX-" + s.Digits(9);
  if (s.Bernoulli(0.95)) p.bank_account_hash = s.Hex(16);
  p.address = std::to_string(s.UniformInt(1, 9999)) + " " + s.Pick(kStreets) +
              " St, " + s.Pick(kCities);
  p.email_domain = s.Pick(kDomains);
  p.enrolled_at = cold_start ? end - s.UniformInt(1, 14) * kSecondsPerDay
                             : start - s.UniformInt(30, 720) * kSecondsPerDay;

  const Timestamp active_from = std::max(start, p.enrolled_at);
  auto when = [&] { return s.UniformInt(active_from, end); };

  // Per-seller behaviour rates; fraudulent sellers are shifted.
  const double listing_ok = Prob(s.Normal(0.95, 0.03) - f * fx.listing_error);
  const double return_p = Prob(s.Normal(0.05, 0.02) + f * fx.return_rate);
  const double late_p = Prob(s.Normal(0.08, 0.04) + f * fx.late_shipment);
  const double complaint_p = Prob(s.Normal(0.04, 0.02) + f * fx.complaint_rate);
  const double severity_mean = 2.0 + f * fx.complaint_severity;
  const double sentiment_mean = 0.35 - f * fx.sentiment;

  std::vector<ActivityRecord> records;
  const int listings = cold_start ? s.Poisson(3.0) : s.Poisson(20.0);
  for (int i = 0; i < listings; ++i) {
    records.push_back({when(), Listing{s.Bernoulli(listing_ok)}});
  }

  const int orders = cold_start ? 0 : std::max(1, s.Poisson(s.Uniform(15.0, 60.0)));
  for (int i = 0; i < orders; ++i) {
    Order o;
    o.order_id = p.seller_id + "-O" + std::to_string(i + 1);
    o.amount = std::round(s.Uniform(5.0, 250.0) * 100.0) / 100.0;
    const Timestamp placed = when();
    o.promised_ship = placed + 2 * kSecondsPerDay;
    if (s.Bernoulli(0.97)) {
      const bool late = s.Bernoulli(late_p);
      const Timestamp delay = late ? s.UniformInt(2 * kSecondsPerDay + 3600, 8 * kSecondsPerDay)
                                   : s.UniformInt(3600, 2 * kSecondsPerDay);
      o.actual_ship = placed + delay;
    }
    const std::string order_id = o.order_id;
    records.push_back({placed, std::move(o)});

    if (s.Bernoulli(return_p)) {
      Return r;
      r.order_ref = order_id;
      const double u = s.Uniform(0.0, 1.0);
      if (fraud) {
        r.reason = u < 0.4 ? ReturnReason::kNotAsDescribed
                   : u < 0.7 ? ReturnReason::kNeverArrived
                   : u < 0.9 ? ReturnReason::kDefective
                             : ReturnReason::kOther;
      } else {
        r.reason = u < 0.5 ? ReturnReason::kDefective
                   : u < 0.7 ? ReturnReason::kNotAsDescribed
                             : ReturnReason::kOther;
      }
      records.push_back({std::min(end, placed + s.UniformInt(3, 10) * kSecondsPerDay), r});
    }
    if (s.Bernoulli(complaint_p)) {
      const int severity = static_cast<int>(
          std::clamp(std::lround(s.Normal(severity_mean, 1.0)), 1L, 5L));
      records.push_back({std::min(end, placed + s.UniformInt(1, 12) * kSecondsPerDay),
                         Complaint{severity}});
    }
  }

  const int signals = cold_start ? s.Poisson(1.0) : s.Poisson(6.0);
  for (int i = 0; i < signals; ++i) {
    SocialSignal sig;
    sig.sentiment = std::clamp(std::round(s.Normal(sentiment_mean, 0.3) * 1000.0) / 1000.0,
                               -1.0, 1.0);
    sig.mentions = 1 + s.Poisson(20.0);
    records.push_back({when(), sig});
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const ActivityRecord &a, const ActivityRecord &b) {
                     return a.occurred_at < b.occurred_at;
                   });
  h.records = std::move(records);
  return h;
}

}  // namespace

std::vector<LabeledSeller> generate_synthetic(const GeneratorConfig &config) {
  config.Validate();
  const auto n = static_cast<std::size_t>(config.n_sellers);
  const auto n_fraud = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * config.fraud_fraction));
  const auto n_cold = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * config.cold_start_fraction));

  Sampler s(config.rng_seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), s.engine());
  std::vector<bool> fraud(n, false);
  for (std::size_t i = 0; i < n_fraud; ++i) fraud[order[i]] = true;
  std::shuffle(order.begin(), order.end(), s.engine());
  std::vector<bool> cold(n, false);
  for (std::size_t i = 0; i < n_cold; ++i) cold[order[i]] = true;

  std::vector<LabeledSeller> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({MakeSeller(s, config, i, fraud[i], cold[i]),
                   fraud[i] ? Label::kFraudulent : Label::kNormal});
  }
  return out;
}

std::pair<std::vector<LabeledSeller>, std::vector<LabeledSeller>>
split_dataset(std::span<const LabeledSeller> sellers, double train_fraction,
              std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw InvalidInputError("train fraction must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<bool> to_train(sellers.size(), false);
  for (Label cls : {Label::kNormal, Label::kFraudulent}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < sellers.size(); ++i) {
      if (sellers[i].label == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto k = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < k; ++i) to_train[members[i]] = true;
  }
  std::pair<std::vector<LabeledSeller>, std::vector<LabeledSeller>> out;
  for (std::size_t i = 0; i < sellers.size(); ++i) {
    (to_train[i] ? out.first : out.second).push_back(sellers[i]);
  }
  return out;
}

}  // namespace marketguard
