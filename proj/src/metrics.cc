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

#include <algorithm>
#include <string>

#include "coh/errors.h"

namespace coh {
namespace {

void check_lengths(const Labels &preds, const Labels &golds) {
  if (preds.empty()) throw ContractError("metrics need at least one example");
  if (preds.size() != golds.size()) {
    throw ContractError("metrics: " + std::to_string(preds.size()) +
                        " predictions but " + std::to_string(golds.size()) +
                        " gold labels");
  }
}

long total(const Confusion &c) {
  long n = 0;
  for (const auto &row : c) {
    for (long v : row) n += v;
  }
  return n;
}

MacroF1 f1_from_confusion(const Confusion &c) {
  MacroF1 out;
  for (int k = 0; k < kNumLabels; ++k) {
    long predicted = 0, gold = 0;
    for (int o = 0; o < kNumLabels; ++o) {
      predicted += c[o][k];
      gold += c[k][o];
    }
    const long tp = c[k][k];
    if (predicted == 0 || gold == 0) {
      out.degenerate[k] = true;
      out.per_class[k] = 0.0;
    } else {
      const double p = static_cast<double>(tp) / predicted;
      const double r = static_cast<double>(tp) / gold;
      out.per_class[k] = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    out.value += out.per_class[k];
  }
  out.value /= kNumLabels;
  return out;
}

}  // namespace

Confusion confusion_matrix(const Labels &preds, const Labels &golds) {
  check_lengths(preds, golds);
  Confusion c{};
  for (size_t k = 0; k < preds.size(); ++k) {
    ++c[label_index(golds[k])][label_index(preds[k])];
  }
  return c;
}

double accuracy(const Labels &preds, const Labels &golds) {
  check_lengths(preds, golds);
  long hits = 0;
  for (size_t k = 0; k < preds.size(); ++k) hits += preds[k] == golds[k];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

MacroF1 macro_f1_detail(const Labels &preds, const Labels &golds) {
  return f1_from_confusion(confusion_matrix(preds, golds));
}

double macro_f1(const Labels &preds, const Labels &golds) {
  return macro_f1_detail(preds, golds).value;
}

bool EvalReport::has_degenerate_class() const {
  return std::any_of(degenerate_f1.begin(), degenerate_f1.end(),
                     [](bool b) { return b; });
}

EvalReport report_from_confusion(const Confusion &c) {
  EvalReport r;
  r.confusion = c;
  r.n = total(c);
  if (r.n == 0) throw ContractError("metrics need at least one example");
  long hits = 0;
  for (int k = 0; k < kNumLabels; ++k) hits += c[k][k];
  r.accuracy = static_cast<double>(hits) / static_cast<double>(r.n);
  const MacroF1 f1 = f1_from_confusion(c);
  r.macro_f1 = f1.value;
  r.degenerate_f1 = f1.degenerate;
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < kNumLabels; ++k) {
    long gold = 0;
    for (int o = 0; o < kNumLabels; ++o) gold += c[k][o];
    r.label_present[k] = gold > 0;
    if (!r.label_present[k]) continue;
    r.per_label_accuracy[k] = static_cast<double>(c[k][k]) / gold;
    lo = std::min(lo, r.per_label_accuracy[k]);
    hi = std::max(hi, r.per_label_accuracy[k]);
  }
  r.range = hi - lo;
  return r;
}

EvalReport per_label_report(const Labels &preds, const Labels &golds) {
  return report_from_confusion(confusion_matrix(preds, golds));
}

Json report_to_json(const EvalReport &r) {
  Json per_label = Json::object();
  Json degenerate = Json::array();
  Json absent = Json::array();
  for (CoherenceLabel l : kAllLabels) {
    const int k = label_index(l);
    const std::string name(label_name(l));
    if (r.label_present[k]) {
      per_label[name] = r.per_label_accuracy[k];
    } else {
      absent.push_back(name);
    }
    if (r.degenerate_f1[k]) degenerate.push_back(name);
  }
  Json confusion = Json::array();
  for (const auto &row : r.confusion) confusion.push_back(row);
  return Json{{"n", r.n},
              {"accuracy", r.accuracy},
              {"macro_f1", r.macro_f1},
              {"per_label_accuracy", per_label},
              {"range", r.range},
              {"confusion", confusion},
              {"degenerate_classes", degenerate},
              {"absent_labels", absent}};
}

}  // namespace coh
