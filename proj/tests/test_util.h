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

// Seeded generators shared by the unit and acceptance suites.

#ifndef MARKETGUARD_TESTS_TEST_UTIL_H_
#define MARKETGUARD_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "marketguard/svm.h"
#include "marketguard/types.h"

namespace marketguard::testing {

struct Dataset {
  std::vector<Sample> samples;
  std::vector<Label> labels;
};

inline double Uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// m in [2, max_m], d in [1, max_d], coordinates in [-1, 1], both classes.
inline Dataset RandomDataset(std::mt19937_64 &rng, int max_m = 8,
                             int max_d = 3) {
  const int m = std::uniform_int_distribution<int>(2, max_m)(rng);
  const int d = std::uniform_int_distribution<int>(1, max_d)(rng);
  Dataset out;
  for (int i = 0; i < m; ++i) {
    Sample s(d);
    for (auto &v : s) v = Uniform(rng, -1.0, 1.0);
    out.samples.push_back(std::move(s));
    out.labels.push_back(rng() % 2 ? Label::kFraudulent : Label::kNormal);
  }
  out.labels[0] = Label::kFraudulent;
  out.labels[1] = Label::kNormal;
  return out;
}

// Linearly separable: labels from a random hyperplane, with points pushed
// at least `gap` away from it.
inline Dataset SeparableDataset(std::mt19937_64 &rng, int m, int d,
                                double gap = 0.2) {
  Sample normal(d);
  for (auto &v : normal) v = Uniform(rng, -1.0, 1.0);
  double norm = 0.0;
  for (double v : normal) norm += v * v;
  norm = std::sqrt(norm);
  for (auto &v : normal) v /= norm;
  Dataset out;
  for (int i = 0; i < m; ++i) {
    Sample s(d);
    for (auto &v : s) v = Uniform(rng, -1.0, 1.0);
    double proj = 0.0;
    for (int k = 0; k < d; ++k) proj += s[k] * normal[k];
    const double side = (i % 2 == 0) ? 1.0 : -1.0;
    const double shift = side * gap - proj + side * std::abs(Uniform(rng, 0.0, 0.5));
    for (int k = 0; k < d; ++k) s[k] += shift * normal[k];
    out.samples.push_back(std::move(s));
    out.labels.push_back(side > 0 ? Label::kFraudulent : Label::kNormal);
  }
  return out;
}

inline Sample RandomProbe(std::mt19937_64 &rng, std::size_t d) {
  Sample s(d);
  for (auto &v : s) v = Uniform(rng, -1.5, 1.5);
  return s;
}

inline Kernel KernelForIndex(int i) {
  switch (i % 3) {
    case 0:
      return Kernel::Linear();
    case 1:
      return Kernel::Rbf(1.0);
    default:
      return Kernel::Polynomial(2, 1.0);
  }
}

inline std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path &path,
                      const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("marketguard_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace marketguard::testing

#endif  // MARKETGUARD_TESTS_TEST_UTIL_H_
