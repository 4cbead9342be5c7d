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

#include "marketguard/cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"
#include "marketguard/error.h"
#include "marketguard/features.h"
#include "marketguard/pipeline.h"
#include "marketguard/rules.h"

namespace marketguard {

using nlohmann::json;
using nlohmann::ordered_json;

Kernel KernelSpec::Build(std::size_t dimension) const {
  try {
    if (type == "linear") return Kernel::Linear();
    if (type == "rbf") return gamma ? Kernel::Rbf(*gamma) : Kernel::DefaultRbf(dimension);
    if (type == "polynomial") return Kernel::Polynomial(degree, offset);
  } catch (const InvalidInputError &e) {
    throw ConfigError(std::string("invalid kernel: ") + e.what());
  }
  throw ConfigError("unknown kernel '" + type + "' (expected linear, rbf or polynomial)");
}

// ---------------------------------------------------------------------------
// Config file

namespace {

// Typed access to one JSON object of the config file. Every problem is
// recorded in `violations`; keys never read are reported as unknown.
class Section {
 public:
  Section(const json &obj, std::string name, std::vector<std::string> &violations)
      : obj_(obj), name_(std::move(name)), violations_(violations) {
    if (!obj_.is_object()) Violation(name_ + " must be an object");
  }

  ~Section() {
    if (!obj_.is_object()) return;
    for (const auto &[key, value] : obj_.items()) {
      if (!known_.count(key)) Violation("unknown key '" + Qualified(key) + "'");
    }
  }

  Section(const Section &) = delete;
  Section &operator=(const Section &) = delete;

  const json *Find(const std::string &key) {
    known_.insert(key);
    if (!obj_.is_object()) return nullptr;
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void Real(const std::string &key, double &out) {
    if (const json *j = Find(key)) {
      if (j->is_number()) {
        out = j->get<double>();
      } else {
        TypeError(key, "a number");
      }
    }
  }

  template <typename Int>
  void Integer(const std::string &key, Int &out) {
    if (const json *j = Find(key)) {
      if (j->is_number_integer() && (std::is_signed_v<Int> || j->get<std::int64_t>() >= 0)) {
        out = j->get<Int>();
      } else {
        TypeError(key, std::is_signed_v<Int> ? "an integer" : "a non-negative integer");
      }
    }
  }

  void Bool(const std::string &key, bool &out) {
    if (const json *j = Find(key)) {
      if (j->is_boolean()) {
        out = j->get<bool>();
      } else {
        TypeError(key, "a boolean");
      }
    }
  }

  void String(const std::string &key, std::string &out) {
    if (const json *j = Find(key)) {
      if (j->is_string()) {
        out = j->get<std::string>();
      } else {
        TypeError(key, "a string");
      }
    }
  }

  void Path(const std::string &key, const std::filesystem::path &base,
            std::optional<std::filesystem::path> &out) {
    std::string text;
    if (Find(key) == nullptr) return;
    String(key, text);
    if (text.empty()) return;
    const std::filesystem::path p(text);
    out = p.is_absolute() ? p : base / p;
  }

  void Band(const std::string &key, ConfidenceBand &out) {
    if (const json *j = Find(key)) {
      if (j->is_array() && j->size() == 2 && (*j)[0].is_number() && (*j)[1].is_number()) {
        out = {(*j)[0].get<double>(), (*j)[1].get<double>()};
      } else {
        TypeError(key, "a [lower, upper] pair");
      }
    }
  }

  std::string Qualified(const std::string &key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

 private:
  void Violation(std::string message) { violations_.push_back(std::move(message)); }
  void TypeError(const std::string &key, const char *expected) {
    Violation("'" + Qualified(key) + "' must be " + expected);
  }

  const json &obj_;
  std::string name_;
  std::vector<std::string> &violations_;
  std::set<std::string> known_;
};

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path &base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("invalid JSON in config: ") + e.what());
  }
  RunConfig cfg;
  std::vector<std::string> v;
  {
    Section root(doc, "", v);
    if (const json *paths = root.Find("paths")) {
      Section s(*paths, "paths", v);
      RunPaths &p = cfg.paths;
      s.Path("dataset", base_dir, p.dataset);
      s.Path("train_dataset", base_dir, p.train_dataset);
      s.Path("holdout_dataset", base_dir, p.holdout_dataset);
      s.Path("ruleset", base_dir, p.ruleset);
      s.Path("model", base_dir, p.model);
      s.Path("reputation", base_dir, p.reputation);
      s.Path("experts", base_dir, p.experts);
      s.Path("verdicts", base_dir, p.verdicts);
      s.Path("ledger", base_dir, p.ledger);
    }
    if (const json *gen = root.Find("generator")) {
      Section s(*gen, "generator", v);
      GeneratorConfig &g = cfg.generator;
      s.Integer("n_sellers", g.n_sellers);
      s.Real("fraud_fraction", g.fraud_fraction);
      s.Integer("window_days", g.window_days);
      s.Real("cold_start_fraction", g.cold_start_fraction);
      s.Integer("rng_seed", g.rng_seed);
      s.Integer("window_start", g.window_start);
      s.Real("train_fraction", cfg.train_fraction);
      if (const json *fx = s.Find("effect_sizes")) {
        Section e(*fx, "generator.effect_sizes", v);
        EffectSizes &x = g.effect_sizes;
        e.Real("listing_error", x.listing_error);
        e.Real("return_rate", x.return_rate);
        e.Real("late_shipment", x.late_shipment);
        e.Real("complaint_rate", x.complaint_rate);
        e.Real("complaint_severity", x.complaint_severity);
        e.Real("sentiment", x.sentiment);
      }
    }
    if (const json *train = root.Find("train")) {
      Section s(*train, "train", v);
      s.String("kernel", cfg.kernel.type);
      if (s.Find("gamma") != nullptr) {
        double gamma = 0.0;
        s.Real("gamma", gamma);
        cfg.kernel.gamma = gamma;
      }
      s.Integer("degree", cfg.kernel.degree);
      s.Real("offset", cfg.kernel.offset);
      s.Real("c", cfg.train.c);
      s.Real("kkt_tol", cfg.train.kkt_tol);
      s.Real("value_eps", cfg.train.value_eps);
      s.Integer("max_passes", cfg.train.max_passes);
      s.Integer("rng_seed", cfg.train.rng_seed);
    }
    if (const json *fusion = root.Find("fusion")) {
      Section s(*fusion, "fusion", v);
      s.Real("w_rules", cfg.fusion.w_rules);
      s.Real("w_svm", cfg.fusion.w_svm);
      s.Real("fusion_threshold", cfg.fusion.fusion_threshold);
    }
    if (const json *policy = root.Find("policy")) {
      Section s(*policy, "policy", v);
      s.Band("warn_band", cfg.policy.warn_band);
      s.Band("suspend_band", cfg.policy.suspend_band);
      s.Real("ban_floor", cfg.policy.ban_floor);
      s.Integer("grace_period_days", cfg.policy.grace_period_days);
      s.Bool("repeat_escalation", cfg.policy.repeat_escalation);
    }
    std::string output = "human";
    root.String("output", output);
    if (output == "machine") {
      cfg.output = OutputFormat::kMachine;
    } else if (output != "human") {
      v.push_back("'output' must be 'human' or 'machine'");
    }
  }
  if (!v.empty()) throw ConfigError(std::move(v));
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------------------
// Commands

namespace {

// Flag values; unset flags leave the config untouched.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;

  std::optional<std::string> dataset, train_out, holdout_out, model, rules, reputation,
      experts, verdicts, ledger;
  std::optional<int> n_sellers, window_days, degree, max_passes;
  std::optional<double> fraud_fraction, cold_start_fraction, train_fraction, gamma, offset,
      c, kkt_tol;
  std::optional<std::string> kernel;
  std::optional<Timestamp> now;
  bool print_default = false;
};

template <typename T>
void Overlay(const std::optional<T> &flag, T &target) {
  if (flag) target = *flag;
}

void OverlayPath(const std::optional<std::string> &flag,
                 std::optional<std::filesystem::path> &target) {
  if (flag) target = std::filesystem::path(*flag);
}

RunConfig ResolveConfig(const Flags &f) {
  RunConfig cfg = f.config ? load_run_config(*f.config) : RunConfig{};
  if (f.seed) {
    cfg.generator.rng_seed = *f.seed;
    cfg.train.rng_seed = *f.seed;
  }
  if (f.output) cfg.output = *f.output == "machine" ? OutputFormat::kMachine : OutputFormat::kHuman;

  OverlayPath(f.dataset, cfg.paths.dataset);
  OverlayPath(f.train_out, cfg.paths.train_dataset);
  OverlayPath(f.holdout_out, cfg.paths.holdout_dataset);
  OverlayPath(f.model, cfg.paths.model);
  OverlayPath(f.rules, cfg.paths.ruleset);
  OverlayPath(f.reputation, cfg.paths.reputation);
  OverlayPath(f.experts, cfg.paths.experts);
  OverlayPath(f.verdicts, cfg.paths.verdicts);
  OverlayPath(f.ledger, cfg.paths.ledger);

  Overlay(f.n_sellers, cfg.generator.n_sellers);
  Overlay(f.window_days, cfg.generator.window_days);
  Overlay(f.fraud_fraction, cfg.generator.fraud_fraction);
  Overlay(f.cold_start_fraction, cfg.generator.cold_start_fraction);
  Overlay(f.train_fraction, cfg.train_fraction);

  Overlay(f.kernel, cfg.kernel.type);
  if (f.gamma) cfg.kernel.gamma = *f.gamma;
  Overlay(f.degree, cfg.kernel.degree);
  Overlay(f.offset, cfg.kernel.offset);
  Overlay(f.c, cfg.train.c);
  Overlay(f.kkt_tol, cfg.train.kkt_tol);
  Overlay(f.max_passes, cfg.train.max_passes);
  return cfg;
}

// The input dataset: paths.dataset (also set by --dataset), else the split
// file a config names for this command.
const std::optional<std::filesystem::path> &DatasetOr(
    const RunPaths &paths, const std::optional<std::filesystem::path> &fallback) {
  return paths.dataset ? paths.dataset : fallback;
}

const std::filesystem::path &Require(const std::optional<std::filesystem::path> &path,
                                     const char *what, const char *flag) {
  if (!path) {
    throw ConfigError(std::string("no ") + what + " path given (use " + flag +
                      " or the config file)");
  }
  return *path;
}

const std::filesystem::path &RequireInput(const std::optional<std::filesystem::path> &path,
                                          const char *what, const char *flag) {
  const auto &p = Require(path, what, flag);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) {
    throw InvalidInputError(std::string(what) + " '" + p.string() + "' does not exist");
  }
  return p;
}

void CheckOptionalInput(const std::optional<std::filesystem::path> &path, const char *what) {
  if (path) RequireInput(path, what, "");
}

std::string Fixed(double value, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

class Command {
 public:
  Command(const RunConfig &cfg, std::ostream &out) : cfg_(cfg), out_(out) {}

  bool machine() const { return cfg_.output == OutputFormat::kMachine; }

  // Machine mode: one JSON object per line.
  void Emit(const ordered_json &obj) { out_ << obj.dump() << '\n'; }
  std::ostream &out() { return out_; }

 protected:
  const RunConfig &cfg_;
  std::ostream &out_;
};

int CmdGenerate(const RunConfig &cfg, std::ostream &out) {
  Command cmd(cfg, out);
  const bool split = cfg.paths.train_dataset || cfg.paths.holdout_dataset;
  if (!cfg.paths.dataset && !split) {
    throw ConfigError("no output path given (use --out, --train-out/--holdout-out or the config file)");
  }
  if (split && !(cfg.paths.train_dataset && cfg.paths.holdout_dataset)) {
    throw ConfigError("--train-out and --holdout-out must be given together");
  }
  if (!(cfg.train_fraction >= 0.0 && cfg.train_fraction <= 1.0)) {
    throw ConfigError("train_fraction must be in [0, 1]");
  }
  const auto sellers = generate_synthetic(cfg.generator);
  std::size_t fraud = 0, cold = 0;
  for (const auto &s : sellers) {
    fraud += s.label == Label::kFraudulent;
    cold += !extract(s.history).has_history;
  }
  if (cfg.paths.dataset) save_dataset(*cfg.paths.dataset, ToEntries(sellers));
  std::size_t train_size = 0, holdout_size = 0;
  if (split) {
    const auto [train, holdout] =
        split_dataset(sellers, cfg.train_fraction, cfg.generator.rng_seed);
    save_dataset(*cfg.paths.train_dataset, ToEntries(train));
    save_dataset(*cfg.paths.holdout_dataset, ToEntries(holdout));
    train_size = train.size();
    holdout_size = holdout.size();
  }

  if (cmd.machine()) {
    ordered_json j;
    j["kind"] = "summary";
    j["command"] = "generate";
    j["sellers"] = sellers.size();
    j["fraudulent"] = fraud;
    j["normal"] = sellers.size() - fraud;
    j["cold_start"] = cold;
    j["rng_seed"] = cfg.generator.rng_seed;
    if (split) {
      j["train"] = train_size;
      j["holdout"] = holdout_size;
    }
    cmd.Emit(j);
  } else {
    out << "generated " << sellers.size() << " sellers: " << fraud << " fraudulent, "
        << sellers.size() - fraud << " normal, " << cold << " without orders (seed "
        << cfg.generator.rng_seed << ")\n";
    if (cfg.paths.dataset) out << "dataset: " << cfg.paths.dataset->string() << '\n';
    if (split) {
      out << "train:   " << cfg.paths.train_dataset->string() << " (" << train_size
          << " sellers)\n";
      out << "holdout: " << cfg.paths.holdout_dataset->string() << " (" << holdout_size
          << " sellers)\n";
    }
  }
  return kExitOk;
}

int CmdTrain(const RunConfig &cfg, std::ostream &out) {
  Command cmd(cfg, out);
  const auto &dataset = RequireInput(DatasetOr(cfg.paths, cfg.paths.train_dataset),
                                     "dataset", "--dataset");
  const auto &model_path = Require(cfg.paths.model, "model", "--model");
  CheckOptionalInput(cfg.paths.experts, "expert inputs");
  const Kernel kernel = cfg.kernel.Build(kFeatureCount);
  cfg.train.Validate();

  std::vector<LabeledSeller> pool = load_labeled(dataset);
  std::size_t expert_labels = 0;
  if (cfg.paths.experts) {
    std::vector<SellerHistory> known;
    known.reserve(pool.size());
    for (const auto &s : pool) known.push_back(s.history);
    ExpertStore store;
    for (const auto &input : load_expert_inputs(*cfg.paths.experts)) {
      expert_labels += ingest_expert_input(store, input, known, pool) == IngestResult::kAccepted;
    }
  }

  PipelineTrainStats stats;
  const PipelineModel model = train_pipeline(pool, kernel, cfg.train, &stats);

  // Final KKT violation on the training samples, recomputed from the model.
  std::vector<Sample> samples;
  std::vector<Label> labels;
  for (const auto &s : pool) {
    const FeatureVector v = extract(s.history);
    if (!v.has_history) continue;
    samples.push_back(pipeline_sample(model, v));
    labels.push_back(s.label);
  }
  const double kkt = kkt_violation(model.svm, samples, labels, cfg.train);
  save_pipeline(model_path, model);

  if (cmd.machine()) {
    ordered_json j;
    j["kind"] = "summary";
    j["command"] = "train";
    j["kernel"] = model.svm.kernel.name();
    j["training_sellers"] = stats.used;
    j["excluded_without_orders"] = stats.cold_start;
    j["expert_labels"] = expert_labels;
    j["support_vectors"] = model.svm.alphas.size();
    j["kkt_violation"] = kkt;
    j["kkt_tol"] = cfg.train.kkt_tol;
    j["passes"] = stats.svm.passes;
    j["model"] = model_path.string();
    cmd.Emit(j);
  } else {
    out << "trained " << model.svm.kernel.name() << " SVM on " << stats.used << " sellers ("
        << stats.cold_start << " without orders excluded";
    if (cfg.paths.experts) out << ", " << expert_labels << " expert labels added";
    out << ")\n";
    out << "support vectors: " << model.svm.alphas.size() << '\n';
    out << "kkt violation:   " << kkt << " (tolerance " << cfg.train.kkt_tol << ")\n";
    out << "passes:          " << stats.svm.passes << '\n';
    out << "model:           " << model_path.string() << '\n';
  }
  return kExitOk;
}

PipelineContext LoadContext(const RunConfig &cfg) {
  const auto &model_path = RequireInput(cfg.paths.model, "model", "--model");
  CheckOptionalInput(cfg.paths.ruleset, "rule set");
  CheckOptionalInput(cfg.paths.reputation, "reputation file");
  CheckOptionalInput(cfg.paths.experts, "expert inputs");
  PipelineContext ctx;
  ctx.model = load_pipeline(model_path);
  ctx.rules = cfg.paths.ruleset ? load_ruleset(*cfg.paths.ruleset) : default_ruleset();
  if (cfg.paths.reputation) ctx.reputation = load_reputation(*cfg.paths.reputation);
  if (cfg.paths.experts) ctx.experts = ExpertStore(load_expert_inputs(*cfg.paths.experts));
  ctx.fusion = cfg.fusion;
  validate_context(ctx);
  return ctx;
}

std::vector<FraudVerdict> DetectAll(const PipelineContext &ctx,
                                    std::span<const DatasetEntry> entries) {
  std::vector<FraudVerdict> verdicts;
  verdicts.reserve(entries.size());
  for (const auto &e : entries) verdicts.push_back(detect_seller(ctx, e.history));
  return verdicts;
}

std::map<std::string, std::size_t> CountVerdicts(std::span<const FraudVerdict> verdicts) {
  std::map<std::string, std::size_t> counts{
      {"Fraudulent", 0}, {"Normal", 0}, {"InsufficientHistory", 0}};
  for (const auto &v : verdicts) ++counts[std::string(ToString(v.verdict))];
  return counts;
}

int CmdDetect(const RunConfig &cfg, std::ostream &out) {
  Command cmd(cfg, out);
  const auto &dataset = RequireInput(DatasetOr(cfg.paths, cfg.paths.holdout_dataset),
                                     "dataset", "--dataset");
  const PipelineContext ctx = LoadContext(cfg);
  const auto entries = load_dataset(dataset);
  const auto verdicts = DetectAll(ctx, entries);
  if (cfg.paths.verdicts) save_verdicts(*cfg.paths.verdicts, verdicts);
  const auto counts = CountVerdicts(verdicts);

  if (cmd.machine()) {
    write_verdicts(out, verdicts);
    ordered_json j;
    j["kind"] = "summary";
    j["command"] = "detect";
    j["sellers"] = verdicts.size();
    for (const char *name : {"Fraudulent", "Normal", "InsufficientHistory"}) {
      j[name] = counts.at(name);
    }
    cmd.Emit(j);
  } else {
    for (const auto &v : verdicts) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-12s %-19s %s  %s\n", v.seller_id.c_str(),
                    std::string(ToString(v.verdict)).c_str(), Fixed(v.confidence).c_str(),
                    std::string(ToString(v.decided_by)).c_str());
      out << line;
    }
    out << verdicts.size() << " sellers: " << counts.at("Fraudulent") << " Fraudulent, "
        << counts.at("Normal") << " Normal, " << counts.at("InsufficientHistory")
        << " InsufficientHistory\n";
    if (cfg.paths.verdicts) out << "verdicts: " << cfg.paths.verdicts->string() << '\n';
  }
  return kExitOk;
}

struct Metrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t insufficient = 0, insufficient_fraudulent = 0;

  double precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp); }
  double recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn); }
};

int CmdEvaluate(const RunConfig &cfg, std::ostream &out) {
  Command cmd(cfg, out);
  const auto &dataset = RequireInput(DatasetOr(cfg.paths, cfg.paths.holdout_dataset),
                                     "dataset", "--dataset");
  const auto entries = load_dataset(dataset);
  for (const auto &e : entries) {
    if (!e.label) {
      throw ValidationError("seller '" + e.history.profile.seller_id +
                            "' has no label; evaluate needs a labeled dataset");
    }
  }
  std::vector<FraudVerdict> verdicts;
  if (cfg.paths.verdicts) {
    verdicts = load_verdicts(RequireInput(cfg.paths.verdicts, "verdicts", "--verdicts"));
  } else {
    verdicts = DetectAll(LoadContext(cfg), entries);
  }
  std::unordered_map<std::string, const FraudVerdict *> by_seller;
  for (const auto &v : verdicts) {
    if (!by_seller.emplace(v.seller_id, &v).second) {
      throw ValidationError("duplicate verdict for seller '" + v.seller_id + "'");
    }
  }

  Metrics m;
  for (const auto &e : entries) {
    auto it = by_seller.find(e.history.profile.seller_id);
    if (it == by_seller.end()) {
      throw ValidationError("no verdict for seller '" + e.history.profile.seller_id + "'");
    }
    const bool actual = *e.label == Label::kFraudulent;
    const Verdict v = it->second->verdict;
    if (v == Verdict::kInsufficientHistory) {
      ++m.insufficient;
      m.insufficient_fraudulent += actual;
      continue;
    }
    const bool predicted = v == Verdict::kFraudulent;
    m.tp += predicted && actual;
    m.fp += predicted && !actual;
    m.fn += !predicted && actual;
    m.tn += !predicted && !actual;
  }

  if (cmd.machine()) {
    ordered_json j;
    j["kind"] = "metrics";
    j["command"] = "evaluate";
    j["sellers"] = entries.size();
    j["true_positive"] = m.tp;
    j["false_positive"] = m.fp;
    j["false_negative"] = m.fn;
    j["true_negative"] = m.tn;
    j["precision"] = m.precision();
    j["recall"] = m.recall();
    j["insufficient_history"] = m.insufficient;
    j["insufficient_history_fraudulent"] = m.insufficient_fraudulent;
    cmd.Emit(j);
  } else {
    out << "evaluated " << entries.size() - m.insufficient << " sellers (Fraudulent is positive)\n";
    out << "                 actual fraud  actual normal\n";
    char row[128];
    std::snprintf(row, sizeof(row), "predicted fraud  %12zu  %13zu\n", m.tp, m.fp);
    out << row;
    std::snprintf(row, sizeof(row), "predicted normal %12zu  %13zu\n", m.fn, m.tn);
    out << row;
    out << "precision: " << Fixed(m.precision()) << '\n';
    out << "recall:    " << Fixed(m.recall()) << '\n';
    out << "InsufficientHistory (excluded): " << m.insufficient << " ("
        << m.insufficient_fraudulent << " labelled fraudulent)\n";
  }
  return kExitOk;
}

int CmdAct(const RunConfig &cfg, std::optional<Timestamp> now_flag, std::ostream &out) {
  Command cmd(cfg, out);
  const auto &verdicts_path = RequireInput(cfg.paths.verdicts, "verdicts", "--verdicts");
  const auto &ledger_path = Require(cfg.paths.ledger, "actions ledger", "--ledger");
  std::error_code ec;
  if (std::filesystem::is_directory(ledger_path, ec)) {
    throw InvalidInputError("actions ledger '" + ledger_path.string() + "' is a directory");
  }
  cfg.policy.Validate();
  const auto verdicts = load_verdicts(verdicts_path);
  const auto ledger = load_ledger(ledger_path);

  Timestamp now = 0;
  if (now_flag) {
    now = *now_flag;
  } else {
    for (const auto &v : verdicts) now = std::max(now, v.as_of);
  }
  const std::string batch = BatchId(verdicts);
  const auto priors = PriorDecisions(ledger, batch);

  std::vector<LedgerEntry> entries;
  std::map<Action, std::size_t> ladder;
  for (const auto &v : verdicts) {
    ActionDecision d = decide_action(v, cfg.policy, priors, now);
    ++ladder[d.action];
    entries.push_back({batch, now, std::move(d)});
  }
  const auto written = append_to_ledger(ledger_path, entries);
  std::size_t actionable = 0;
  for (const auto &e : entries) actionable += e.decision.action != Action::kNoAction;

  // Grace deadlines across the whole ledger, as of the decision time.
  std::vector<LedgerEntry> suspended;
  for (const auto &e : load_ledger(ledger_path)) {
    if (e.decision.action == Action::kSuspendWithGrace) suspended.push_back(e);
  }

  if (cmd.machine()) {
    for (const auto &e : written) {
      std::ostringstream line;
      write_ledger(line, std::span(&e, 1));
      out << line.str();
    }
    for (const auto &e : suspended) {
      ordered_json j;
      j["kind"] = "grace";
      j["seller_id"] = e.decision.seller_id;
      j["deadline"] = *e.decision.deadline;
      j["status"] = *e.decision.deadline > now ? "pending" : "expired";
      cmd.Emit(j);
    }
    ordered_json j;
    j["kind"] = "summary";
    j["command"] = "act";
    j["batch"] = batch;
    j["decided_at"] = now;
    for (Action a : {Action::kNoAction, Action::kWarn, Action::kSuspendWithGrace, Action::kBan}) {
      j[std::string(ToString(a))] = ladder[a];
    }
    j["appended"] = written.size();
    j["already_recorded"] = actionable - written.size();
    cmd.Emit(j);
  } else {
    out << "batch " << batch << ", decision time " << now << '\n';
    for (Action a : {Action::kNoAction, Action::kWarn, Action::kSuspendWithGrace, Action::kBan}) {
      char row[64];
      std::snprintf(row, sizeof(row), "  %-17s %zu\n", std::string(ToString(a)).c_str(),
                    ladder[a]);
      out << row;
    }
    out << "appended " << written.size() << " ledger entries ("
        << actionable - written.size() << " already recorded for this batch)\n";
    if (!suspended.empty()) {
      out << "grace deadlines:\n";
      for (const auto &e : suspended) {
        out << "  " << e.decision.seller_id << "  " << *e.decision.deadline << "  "
            << (*e.decision.deadline > now ? "pending" : "expired, re-check due") << '\n';
      }
    }
  }
  return kExitOk;
}

int CmdRulesCheck(const RunConfig &cfg, bool print_default, std::ostream &out) {
  Command cmd(cfg, out);
  if (print_default) {
    out << serialize_ruleset(default_ruleset());
    return kExitOk;
  }
  RuleSet rules;
  std::string source = "built-in default rule set";
  if (cfg.paths.ruleset) {
    rules = load_ruleset(*cfg.paths.ruleset);
    source = cfg.paths.ruleset->string();
  } else {
    rules = default_ruleset();
  }
  if (cmd.machine()) {
    ordered_json j;
    j["kind"] = "summary";
    j["command"] = "rules-check";
    j["valid"] = true;
    j["rules"] = rules.rules.size();
    j["decision_threshold"] = rules.decision_threshold;
    cmd.Emit(j);
  } else {
    out << source << ": valid, " << rules.rules.size() << " rules, decision threshold "
        << rules.decision_threshold << '\n';
    for (const auto &r : rules.rules) {
      out << "  " << r.id << ": " << r.feature << ' ' << ToString(r.comparator) << ' '
          << r.threshold_value << " (weight " << r.weight << ")\n";
    }
  }
  return kExitOk;
}

int ExitCodeFor(const std::exception &e) {
  if (dynamic_cast<const ManifestMismatchError *>(&e)) return kExitManifestMismatch;
  if (dynamic_cast<const TrainingError *>(&e)) return kExitTrainingError;
  return kExitInputError;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
  CLI::App app{"MarketGuard: seller fraud detection for online marketplaces", "marketguard"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--seed", f.seed, "RNG seed for generation and training");
  app.add_option("--output", f.output, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));

  auto *generate = app.add_subcommand("generate", "Write a synthetic labeled dataset");
  generate->add_option("--out", f.dataset, "Dataset output path");
  generate->add_option("--train-out", f.train_out, "Training split output path");
  generate->add_option("--holdout-out", f.holdout_out, "Held-out split output path");
  generate->add_option("--n-sellers", f.n_sellers, "Number of sellers");
  generate->add_option("--fraud-fraction", f.fraud_fraction, "Fraction labelled fraudulent");
  generate->add_option("--window-days", f.window_days, "Observation window length");
  generate->add_option("--cold-start-fraction", f.cold_start_fraction,
                       "Fraction of sellers without orders");
  generate->add_option("--train-fraction", f.train_fraction, "Training share of the split");

  auto *train = app.add_subcommand("train", "Train the seller classifier");
  train->add_option("--dataset", f.dataset, "Labeled dataset");
  train->add_option("--model", f.model, "Model output path");
  train->add_option("--experts", f.experts, "Expert inputs to add to the training pool");
  train->add_option("--kernel", f.kernel, "linear | rbf | polynomial");
  train->add_option("--gamma", f.gamma, "RBF gamma (default 1 / feature count)");
  train->add_option("--degree", f.degree, "Polynomial degree");
  train->add_option("--offset", f.offset, "Polynomial offset");
  train->add_option("--c", f.c, "Soft-margin penalty C");
  train->add_option("--kkt-tol", f.kkt_tol, "KKT tolerance");
  train->add_option("--max-passes", f.max_passes, "Maximum full SMO passes");

  auto *detect = app.add_subcommand("detect", "Classify every seller in a dataset");
  auto *evaluate = app.add_subcommand("evaluate", "Score verdicts against labels");
  for (auto *sub : {detect, evaluate}) {
    sub->add_option("--dataset", f.dataset, "Seller dataset");
    sub->add_option("--model", f.model, "Trained model");
    sub->add_option("--rules", f.rules, "Rule set (default: built-in)");
    sub->add_option("--reputation", f.reputation, "Reputation database");
    sub->add_option("--experts", f.experts, "Expert inputs");
  }
  detect->add_option("--verdicts", f.verdicts, "Verdicts output path");
  evaluate->add_option("--verdicts", f.verdicts,
                       "Verdicts to evaluate (default: run detection with --model)");

  auto *act = app.add_subcommand("act", "Apply the action policy to verdicts");
  act->add_option("--verdicts", f.verdicts, "Verdicts file from detect");
  act->add_option("--ledger", f.ledger, "Append-only actions ledger");
  act->add_option("--now", f.now, "Decision time (default: latest verdict as_of)");

  auto *rules_check = app.add_subcommand("rules-check", "Validate a rule set");
  rules_check->add_option("--rules", f.rules, "Rule set (default: built-in)");
  rules_check->add_flag("--print-default", f.print_default,
                        "Print the built-in rule set and exit");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const RunConfig cfg = ResolveConfig(f);
    if (generate->parsed()) return CmdGenerate(cfg, out);
    if (train->parsed()) return CmdTrain(cfg, out);
    if (detect->parsed()) return CmdDetect(cfg, out);
    if (evaluate->parsed()) return CmdEvaluate(cfg, out);
    if (act->parsed()) return CmdAct(cfg, f.now, out);
    if (rules_check->parsed()) return CmdRulesCheck(cfg, f.print_default, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
  return kExitInputError;
}

}  // namespace marketguard
