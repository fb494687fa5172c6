// Copyright 2026 The Coherence Fusion Authors.
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

#include "coh/metrics.h"

#include <gtest/gtest.h>

#include "coh/errors.h"
#include "coh/random.h"
#include "oracles.h"

namespace coh {
namespace {

constexpr CoherenceLabel L = CoherenceLabel::kLow;
constexpr CoherenceLabel M = CoherenceLabel::kMedium;
constexpr CoherenceLabel H = CoherenceLabel::kHigh;

using testing::count_oracle;
using testing::MetricOracle;
using testing::random_labels;

TEST(Metrics, WorkedExample) {
  const Labels golds = {L, L, M, H};
  const Labels preds = {L, M, M, H};
  EXPECT_DOUBLE_EQ(accuracy(preds, golds), 0.75);
  EXPECT_NEAR(macro_f1(preds, golds), 7.0 / 9.0, 1e-15);
  EXPECT_NEAR(macro_f1(preds, golds), 0.7778, 5e-5);
}

TEST(Metrics, MajorityPredictionHasLowerF1ThanAccuracy) {
  const Labels golds = {L, L, M, H};
  const Labels preds = {L, L, L, L};
  EXPECT_DOUBLE_EQ(accuracy(preds, golds), 0.5);
  const MacroF1 f = macro_f1_detail(preds, golds);
  EXPECT_NEAR(f.value, 2.0 / 9.0, 1e-15);
  EXPECT_LT(f.value, 0.5);
  EXPECT_FALSE(f.degenerate[0]);
  EXPECT_TRUE(f.degenerate[1]);
  EXPECT_TRUE(f.degenerate[2]);
}

TEST(Metrics, RandomFixturesMatchCountingOracle) {
  Rng rng(1000);
  for (int t = 0; t < 1000; ++t) {
    const size_t n = 1 + uniform_index(rng, 40);
    const int classes = 1 + static_cast<int>(uniform_index(rng, 3));
    const Labels golds = random_labels(rng, n, classes);
    const Labels preds = random_labels(rng, n, 3);
    const MetricOracle o = count_oracle(preds, golds);
    EXPECT_NEAR(accuracy(preds, golds), o.accuracy, 1e-12);
    EXPECT_NEAR(macro_f1(preds, golds), o.macro_f1, 1e-12);
    const EvalReport r = per_label_report(preds, golds);
    EXPECT_EQ(r.n, static_cast<long>(n));
    EXPECT_NEAR(r.range, o.range, 1e-12);
    for (int c = 0; c < kNumLabels; ++c) {
      EXPECT_EQ(r.label_present[c], o.present[c]);
      EXPECT_NEAR(r.per_label_accuracy[c], o.recall[c], 1e-12);
    }
    long total = 0;
    for (const auto &row : r.confusion) {
      for (long v : row) total += v;
    }
    EXPECT_EQ(total, static_cast<long>(n));
  }
}

TEST(Metrics, SkewedRecallsGiveRange) {
  Confusion c{};
  c[0] = {6667, 2000, 1333};
  c[1] = {1000, 7899, 1101};
  c[2] = {500, 1712, 7788};
  const EvalReport r = report_from_confusion(c);
  EXPECT_NEAR(r.per_label_accuracy[0], 0.6667, 1e-12);
  EXPECT_NEAR(r.per_label_accuracy[1], 0.7899, 1e-12);
  EXPECT_NEAR(r.per_label_accuracy[2], 0.7788, 1e-12);
  EXPECT_NEAR(r.range, 0.1232, 1e-12);
  EXPECT_NEAR(r.accuracy, (6667 + 7899 + 7788) / 30000.0, 1e-12);
  EXPECT_FALSE(r.has_degenerate_class());
}

TEST(Metrics, RangeIgnoresAbsentLabels) {
  const Labels golds = {L, L, H, H};
  const Labels preds = {L, M, H, H};
  const EvalReport r = per_label_report(preds, golds);
  EXPECT_FALSE(r.label_present[1]);
  EXPECT_DOUBLE_EQ(r.range, 0.5);
  EXPECT_TRUE(r.degenerate_f1[1]);
  EXPECT_TRUE(r.has_degenerate_class());
}

TEST(Metrics, ContractViolations) {
  EXPECT_THROW(accuracy({}, {}), ContractError);
  EXPECT_THROW(macro_f1({L}, {L, M}), ContractError);
  EXPECT_THROW(per_label_report({L, M}, {L}), ContractError);
  EXPECT_THROW(report_from_confusion(Confusion{}), ContractError);
}

TEST(Metrics, ReportJson) {
  const Json j = report_to_json(per_label_report({L, M, M, H}, {L, L, M, H}));
  EXPECT_EQ(j.at("n"), 4);
  EXPECT_DOUBLE_EQ(j.at("accuracy").get<double>(), 0.75);
  EXPECT_TRUE(j.contains("macro_f1"));
  EXPECT_TRUE(j.contains("confusion"));
}

TEST(Metrics, SmallCases) {
  EXPECT_DOUBLE_EQ(accuracy({L, H, H}, {L, M, H}), 2.0 / 3.0);
  const Labels all = {L, M, H, H, M};
  EXPECT_EQ(accuracy(all, all), 1.0);
  EXPECT_EQ(macro_f1(all, all), 1.0);
  EXPECT_EQ(per_label_report(all, all).range, 0.0);
}

TEST(Metrics, TwoDecimalRangeExample) {
  Confusion c{};
  c[0] = {66, 34, 0};
  c[1] = {0, 78, 22};
  c[2] = {0, 23, 77};
  EXPECT_NEAR(report_from_confusion(c).range, 0.12, 1e-12);
}

}  // namespace
}  // namespace coh
