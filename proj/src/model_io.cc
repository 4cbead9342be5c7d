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

#include "marketguard/model_io.h"

#include <cmath>
#include <string>
#include <vector>

#include "marketguard/error.h"
#include "marketguard/text_io.h"

namespace marketguard {

void write_model(std::ostream &out, const SvmModel &model) {
  out << kSvmFormatTag << '\n';
  out << "kernel " << model.kernel.name();
  if (const auto *p = std::get_if<PolynomialKernel>(&model.kernel.variant())) {
    out << ' ' << p->degree << ' ' << FormatDouble(p->offset);
  } else if (const auto *r = std::get_if<RbfKernel>(&model.kernel.variant())) {
    out << ' ' << FormatDouble(r->gamma);
  }
  out << '\n';
  out << "dimension " << model.dimension << '\n';
  const TrainConfig &cfg = model.config;
  out << "train_config c " << FormatDouble(cfg.c) << " kkt_tol "
      << FormatDouble(cfg.kkt_tol) << " value_eps "
      << FormatDouble(cfg.value_eps) << " max_passes " << cfg.max_passes
      << " rng_seed " << cfg.rng_seed << '\n';
  out << "bias " << FormatDouble(model.bias) << '\n';
  out << "support_vectors " << model.support_count() << '\n';
  for (std::size_t i = 0; i < model.support_count(); ++i) {
    out << "sv " << ToInt(model.support_labels[i]) << ' '
        << FormatDouble(model.alphas[i]);
    for (double v : model.support_samples[i]) out << ' ' << FormatDouble(v);
    out << '\n';
  }
  out << "end\n";
}

namespace {

class Reader {
 public:
  Reader(std::istream &in, std::size_t line) : in_(in), line_(line) {}

  // Next line split into tokens; fails at end of stream.
  std::vector<std::string_view> Next(std::string_view expect_key) {
    if (!std::getline(in_, buffer_)) {
      throw ParseError(line_ + 1, "unexpected end of model, expected '" +
                                      std::string(expect_key) + "'");
    }
    ++line_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    auto tokens = SplitWhitespace(buffer_);
    if (tokens.empty() || tokens[0] != expect_key) {
      Fail("expected '" + std::string(expect_key) + "'");
    }
    return tokens;
  }

  [[noreturn]] void Fail(const std::string &message) const {
    throw ParseError(line_, message);
  }

  double Real(std::string_view token) const {
    auto v = ParseDouble(token);
    if (!v || !std::isfinite(*v)) Fail("invalid real '" + std::string(token) + "'");
    return *v;
  }

  std::int64_t Int(std::string_view token) const {
    auto v = ParseInt(token);
    if (!v) Fail("invalid integer '" + std::string(token) + "'");
    return *v;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream &in_;
  std::string buffer_;
  std::size_t line_;
};

Kernel ParseKernel(Reader &r, const std::vector<std::string_view> &t) {
  try {
    if (t.size() == 2 && t[1] == "linear") return Kernel::Linear();
    if (t.size() == 3 && t[1] == "rbf") return Kernel::Rbf(r.Real(t[2]));
    if (t.size() == 4 && t[1] == "polynomial") {
      return Kernel::Polynomial(static_cast<int>(r.Int(t[2])), r.Real(t[3]));
    }
  } catch (const InvalidInputError &e) {
    r.Fail(e.what());
  }
  r.Fail("unknown kernel specification");
}

}  // namespace

SvmModel read_model(std::istream &in, std::size_t *line) {
  Reader r(in, line != nullptr ? *line : 0);
  auto header = r.Next(kSvmFormatTag);
  if (header.size() != 1) r.Fail("trailing tokens after format tag");

  SvmModel model;
  model.kernel = ParseKernel(r, r.Next("kernel"));

  auto dim = r.Next("dimension");
  if (dim.size() != 2) r.Fail("expected 'dimension <d>'");
  const std::int64_t d = r.Int(dim[1]);
  if (d <= 0) r.Fail("dimension must be > 0");
  model.dimension = static_cast<std::size_t>(d);

  auto cfg = r.Next("train_config");
  if (cfg.size() != 11 || cfg[1] != "c" || cfg[3] != "kkt_tol" ||
      cfg[5] != "value_eps" || cfg[7] != "max_passes" || cfg[9] != "rng_seed") {
    r.Fail("malformed train_config line");
  }
  model.config.c = r.Real(cfg[2]);
  model.config.kkt_tol = r.Real(cfg[4]);
  model.config.value_eps = r.Real(cfg[6]);
  model.config.max_passes = static_cast<int>(r.Int(cfg[8]));
  auto seed = ParseUint(cfg[10]);
  if (!seed) r.Fail("invalid rng_seed");
  model.config.rng_seed = *seed;
  try {
    model.config.Validate();
  } catch (const InvalidInputError &e) {
    r.Fail(e.what());
  }

  auto bias = r.Next("bias");
  if (bias.size() != 2) r.Fail("expected 'bias <b>'");
  model.bias = r.Real(bias[1]);

  auto count = r.Next("support_vectors");
  if (count.size() != 2) r.Fail("expected 'support_vectors <n>'");
  const std::int64_t n = r.Int(count[1]);
  if (n < 0) r.Fail("negative support vector count");

  for (std::int64_t i = 0; i < n; ++i) {
    auto sv = r.Next("sv");
    if (sv.size() != 3 + model.dimension) {
      r.Fail("support vector has wrong number of fields");
    }
    auto label = LabelFromInt(r.Int(sv[1]));
    if (!label) r.Fail("label must be -1 or 1");
    const double alpha = r.Real(sv[2]);
    if (!(alpha > 0.0)) r.Fail("support vector alpha must be > 0");
    Sample x(model.dimension);
    for (std::size_t k = 0; k < model.dimension; ++k) x[k] = r.Real(sv[3 + k]);
    model.support_labels.push_back(*label);
    model.alphas.push_back(alpha);
    model.support_samples.push_back(std::move(x));
  }
  auto end = r.Next("end");
  if (end.size() != 1) r.Fail("trailing tokens after 'end'");
  if (line != nullptr) *line = r.line();
  return model;
}

}  // namespace marketguard
