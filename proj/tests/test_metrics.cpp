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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "csisense/metrics.hpp"
#include "csisense/random.hpp"

using namespace csisense;

TEST_CASE("binary confusion arithmetic") {
  const std::vector<int> preds{1, 1, 0}, labels{1, 0, 0};
  const auto r = classification_metrics(preds, labels);
  CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
  REQUIRE(r.per_class.size() == 2);
  CHECK(r.per_class[1].precision == doctest::Approx(0.5));
  CHECK(r.per_class[1].recall == doctest::Approx(1.0));
  CHECK(r.per_class[1].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[0].support == 2);
  const double weighted = (2.0 / 3.0) * r.per_class[0].f1 + (1.0 / 3.0) * r.per_class[1].f1;
  CHECK(r.weighted_f1 == doctest::Approx(weighted));
  CHECK(r.macro_f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("absent classes do not produce NaN") {
  const std::vector<int> preds{0, 0}, labels{0, 0};
  const auto r = classification_metrics(preds, labels, 3);
  CHECK(r.per_class.size() == 3);
  CHECK(r.per_class[2].precision == 0.0);
  CHECK(r.per_class[2].recall == 0.0);
  CHECK(r.accuracy == 1.0);
  CHECK_FALSE(std::isnan(r.macro_f1));
}

TEST_CASE("counting errors") {
  const std::vector<int> est{1, 2, 2}, truth{1, 1, 2};
  auto e = counting_errors(est, truth);
  CHECK(e.mae == doctest::Approx(1.0 / 3.0));
  CHECK(e.rmse == doctest::Approx(std::sqrt(1.0 / 3.0)));

  std::vector<int> spike(9, 0), zeros(9, 0);
  spike[4] = 3;
  e = counting_errors(spike, zeros);
  CHECK(e.mae == doctest::Approx(1.0 / 3.0));
  CHECK(e.rmse == doctest::Approx(1.0));

  Rng rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(20), b(20);
    for (auto& v : a) v = d(rng);
    for (auto& v : b) v = d(rng);
    const auto r = counting_errors(a, b);
    CHECK(r.rmse >= r.mae - 1e-12);
  }
  const std::vector<int> short_one{1};
  CHECK_THROWS(counting_errors(short_one, truth));
}

TEST_CASE("generalisation index") {
  MetricReport src, tgt;
  src.mae = 4.37;
  tgt.mae = 0.07;
  src.accuracy = 0.9;
  tgt.accuracy = 0.45;
  const auto gi = generalisation_index(src, tgt);
  CHECK(std::abs(gi.mae - 62.4) <= 0.5);
  CHECK(gi.accuracy == doctest::Approx(0.5));

  const auto same = generalisation_index(src, src);
  CHECK(same.accuracy == 1.0);
  CHECK(same.mae == 1.0);

  MetricReport zero;
  const auto z = generalisation_index(zero, zero);
  CHECK(z.accuracy == 1.0);
  CHECK(z.mae == 1.0);
  CHECK(generalisation_index(src, zero).mae == std::numeric_limits<double>::infinity());
}

TEST_CASE("report rendering and summary statistics") {
  const std::vector<int> preds{0, 1, 2}, labels{0, 1, 1};
  const auto r = classification_metrics(preds, labels, 3);
  const auto csv = report_to_csv(r, {"enter", "exit", "no_event"});
  CHECK(csv.starts_with("metric,value\n"));
  CHECK(csv.find("exit") != std::string::npos);
  CHECK(report_to_table(r, {"enter", "exit", "no_event"}).find("accuracy") != std::string::npos);

  const std::vector<double> xs{1, 2, 3, 4};
  const auto ms = mean_std(xs);
  CHECK(ms.mean == 2.5);
  CHECK(ms.std == doctest::Approx(std::sqrt(1.25)));
}
