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

// Classification metrics over the three coherence labels.

#ifndef COH_METRICS_H_
#define COH_METRICS_H_

#include <array>
#include <vector>

#include "coh/corpus_io.h"
#include "coh/domain.h"

namespace coh {

using Labels = std::vector<CoherenceLabel>;
// confusion[gold][predicted].
using Confusion = std::array<std::array<long, kNumLabels>, kNumLabels>;

// All functions throw ContractError on empty input or a length mismatch.
Confusion confusion_matrix(const Labels &preds, const Labels &golds);
double accuracy(const Labels &preds, const Labels &golds);

struct MacroF1 {
  double value = 0.0;
  std::array<double, kNumLabels> per_class{};
  // Class with no precision or no recall denominator (absent from
  // predictions or golds); its F1 counts as 0.
  std::array<bool, kNumLabels> degenerate{};
};

MacroF1 macro_f1_detail(const Labels &preds, const Labels &golds);
double macro_f1(const Labels &preds, const Labels &golds);

struct EvalReport {
  long n = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  // Recall per gold label; 0 for labels absent from the golds.
  std::array<double, kNumLabels> per_label_accuracy{};
  std::array<bool, kNumLabels> label_present{};
  // max - min of per_label_accuracy over the labels present in the golds.
  double range = 0.0;
  Confusion confusion{};
  std::array<bool, kNumLabels> degenerate_f1{};

  bool has_degenerate_class() const;
};

EvalReport per_label_report(const Labels &preds, const Labels &golds);
EvalReport report_from_confusion(const Confusion &confusion);

Json report_to_json(const EvalReport &r);

}  // namespace coh

#endif  // COH_METRICS_H_
