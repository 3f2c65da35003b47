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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace csisense {

struct ClassStats {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
};

struct MetricReport {
  double accuracy = 0;
  double weighted_f1 = 0;
  double macro_f1 = 0;
  std::vector<ClassStats> per_class;  // indexed by class
  double mae = 0;
  double rmse = 0;
};

/// Classes are 0..max(num_classes, max label/pred + 1) - 1. A class with no
/// predictions has precision 0 (and likewise recall for no support).
MetricReport classification_metrics(std::span<const int> preds, std::span<const int> labels,
                                    std::size_t num_classes = 0);

struct CountingErrors {
  double mae = 0;
  double rmse = 0;
};

CountingErrors counting_errors(std::span<const int> estimate, std::span<const int> truth);

struct GeneralisationIndex {
  double accuracy = 0;  // target / source
  double mae = 0;       // source / target
};

/// Higher is better on both. Zero denominators never yield NaN: x / 0 with
/// x > 0 is +infinity and 0 / 0 is 1 (no degradation on either side).
GeneralisationIndex generalisation_index(const MetricReport& source, const MetricReport& target);

/// metric,value rows (accuracy, weighted_f1, macro_f1, mae, rmse) then
/// per-class precision/recall/f1/support.
std::string report_to_csv(const MetricReport& report, const std::vector<std::string>& class_names);
std::string report_to_table(const MetricReport& report, const std::vector<std::string>& class_names);

struct MeanStd {
  double mean = 0;
  double std = 0;  // population standard deviation
};
MeanStd mean_std(std::span<const double> xs);

}  // namespace csisense
