/*
 * Copyright (c) 2026, The csisense Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "csisense/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "csisense/csv_io.hpp"

namespace csisense {

MetricReport classification_metrics(std::span<const int> preds, std::span<const int> labels, std::size_t num_classes) {
  if (preds.size() != labels.size()) throw std::invalid_argument("predictions and labels differ in length");
  if (preds.empty()) throw std::invalid_argument("cannot score an empty prediction set");
  std::size_t K = num_classes;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || labels[i] < 0) throw std::invalid_argument("class indices must be >= 0");
    K = std::max({K, static_cast<std::size_t>(preds[i]) + 1, static_cast<std::size_t>(labels[i]) + 1});
  }
  std::vector<std::size_t> tp(K, 0), fp(K, 0), fn(K, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto p = static_cast<std::size_t>(preds[i]), y = static_cast<std::size_t>(labels[i]);
    if (p == y) {
      ++tp[p];
      ++correct;
    } else {
      ++fp[p];
      ++fn[y];
    }
  }
  MetricReport r;
  const double n = static_cast<double>(preds.size());
  r.accuracy = static_cast<double>(correct) / n;
  r.per_class.resize(K);
  for (std::size_t c = 0; c < K; ++c) {
    auto& s = r.per_class[c];
    s.support = tp[c] + fn[c];
    s.precision = tp[c] + fp[c] ? static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]) : 0.0;
    s.recall = s.support ? static_cast<double>(tp[c]) / static_cast<double>(s.support) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    r.weighted_f1 += static_cast<double>(s.support) / n * s.f1;
    r.macro_f1 += s.f1 / static_cast<double>(K);
  }
  return r;
}

CountingErrors counting_errors(std::span<const int> estimate, std::span<const int> truth) {
  if (estimate.size() != truth.size()) {
    throw std::invalid_argument("occupancy trace has " + std::to_string(estimate.size()) + " entries, truth has " +
                                std::to_string(truth.size()));
  }
  if (estimate.empty()) return {};
  double abs_sum = 0, sq_sum = 0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = static_cast<double>(estimate[i]) - truth[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const double n = static_cast<double>(estimate.size());
  return {abs_sum / n, std::sqrt(sq_sum / n)};
}

namespace {

double guarded_ratio(double num, double den) {
  if (den != 0) return num / den;
  return num == 0 ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

GeneralisationIndex generalisation_index(const MetricReport& source, const MetricReport& target) {
  return {guarded_ratio(target.accuracy, source.accuracy), guarded_ratio(source.mae, target.mae)};
}

std::string report_to_csv(const MetricReport& r, const std::vector<std::string>& names) {
  std::string out = "metric,value\n";
  auto row = [&](const std::string& k, double v) { out += k + "," + format_real(v) + "\n"; };
  row("accuracy", r.accuracy);
  row("weighted_f1", r.weighted_f1);
  row("macro_f1", r.macro_f1);
  row("mae", r.mae);
  row("rmse", r.rmse);
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const std::string name = c < names.size() ? names[c] : "class_" + std::to_string(c);
    row(name + ".precision", r.per_class[c].precision);
    row(name + ".recall", r.per_class[c].recall);
    row(name + ".f1", r.per_class[c].f1);
    row(name + ".support", static_cast<double>(r.per_class[c].support));
  }
  return out;
}

std::string report_to_table(const MetricReport& r, const std::vector<std::string>& names) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "accuracy %.4f  weighted F1 %.4f  macro F1 %.4f  MAE %.4f  RMSE %.4f\n",
                r.accuracy, r.weighted_f1, r.macro_f1, r.mae, r.rmse);
  out += line;
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s %9s\n", "class", "precision", "recall", "f1", "support");
  out += line;
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const std::string name = c < names.size() ? names[c] : "class_" + std::to_string(c);
    const auto& s = r.per_class[c];
    std::snprintf(line, sizeof line, "%-14s %10.4f %10.4f %10.4f %9zu\n", name.c_str(), s.precision, s.recall, s.f1,
                  s.support);
    out += line;
  }
  return out;
}

MeanStd mean_std(std::span<const double> xs) {
  if (xs.empty()) return {};
  double m = 0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace csisense
