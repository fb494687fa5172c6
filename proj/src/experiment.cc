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

#include "coh/experiment.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "coh/errors.h"
#include "coh/random.h"

namespace coh {

std::vector<int> FoldPlan::fold_sizes() const {
  std::vector<int> sizes(k, 0);
  for (const auto &[id, f] : assignments) ++sizes[f];
  return sizes;
}

FoldPlan kfold(const std::vector<Document> &dataset, int k, uint64_t seed,
               bool stratified) {
  if (k < 2) throw DomainError("kfold needs k >= 2, got " + std::to_string(k));
  if (static_cast<size_t>(k) > dataset.size()) {
    throw DomainError("kfold: k = " + std::to_string(k) + " exceeds " +
                      std::to_string(dataset.size()) + " documents");
  }
  // Groups keyed by label index; unlabeled documents form group 3.
  std::vector<std::vector<std::string>> groups(stratified ? kNumLabels + 1 : 1);
  std::set<std::string> seen;
  for (const Document &d : dataset) {
    if (!seen.insert(d.id).second) {
      throw DomainError("kfold: duplicate document id '" + d.id + "'");
    }
    const int g = !stratified ? 0 : d.label ? label_index(*d.label) : kNumLabels;
    groups[g].push_back(d.id);
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;
  int offset = 0;
  for (size_t g = 0; g < groups.size(); ++g) {
    auto &ids = groups[g];
    std::sort(ids.begin(), ids.end());
    Rng rng(hash_key({seed, static_cast<uint64_t>(g)}));
    shuffle(ids, rng);
    for (const std::string &id : ids) {
      plan.assignments[id] = offset % k;
      ++offset;
    }
  }
  return plan;
}

void MajorityClassifier::fit(const std::vector<Document> &train) {
  std::array<long, kNumLabels> counts{};
  for (CoherenceLabel l : gold_labels(train)) ++counts[label_index(l)];
  label_ = label_from_index(static_cast<int>(
      std::max_element(counts.begin(), counts.end()) - counts.begin()));
}

Labels MajorityClassifier::predict(const std::vector<Document> &docs) const {
  return Labels(docs.size(), label_);
}

FusionClassifier::FusionClassifier(ModelConfig model_config,
                                   TrainConfig train_config,
                                   bool track_train_accuracy)
    : model_config_(std::move(model_config)),
      train_config_(std::move(train_config)),
      track_train_accuracy_(track_train_accuracy) {
  model_config_.validate();
  train_config_.validate();
}

void FusionClassifier::fit(const std::vector<Document> &train_docs) {
  model_ = std::make_unique<FusionModel>(model_config_);
  history_.clear();
  train_acc_.clear();
  const Labels golds = gold_labels(train_docs);
  history_ = train(*model_, train_docs, train_config_,
                   [&](const EpochMetrics &) {
                     if (track_train_accuracy_) {
                       train_acc_.push_back(
                           accuracy(predict(train_docs), golds));
                     }
                   });
}

Labels FusionClassifier::predict(const std::vector<Document> &docs) const {
  if (!model_) throw ContractError("FusionClassifier used before fit");
  Labels out;
  out.reserve(docs.size());
  for (const Document &d : docs) out.push_back(coh::predict(d, *model_));
  return out;
}

Labels gold_labels(const std::vector<Document> &docs) {
  Labels out;
  out.reserve(docs.size());
  for (const Document &d : docs) {
    if (!d.label) {
      throw ContractError("document '" + d.id + "' has no label");
    }
    out.push_back(*d.label);
  }
  return out;
}

MeanStd mean_std(const std::vector<double> &values) {
  if (values.empty()) throw ContractError("mean_std of no values");
  MeanStd r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return r;
}

CvResult run_cv(const std::vector<Document> &dataset, int k, uint64_t seed,
                const ClassifierFactory &factory, bool stratified,
                const FoldCallback &on_fold) {
  gold_labels(dataset);  // rejects unlabeled documents up front
  CvResult result;
  result.plan = kfold(dataset, k, seed, stratified);
  std::vector<double> acc, f1, range;
  std::array<std::vector<double>, kNumLabels> per_label;
  for (int f = 0; f < k; ++f) {
    std::vector<Document> train_docs, test_docs;
    for (const Document &d : dataset) {
      (result.plan.assignments.at(d.id) == f ? test_docs : train_docs)
          .push_back(d);
    }
    std::unique_ptr<Classifier> clf = factory();
    clf->fit(train_docs);
    const EvalReport report =
        per_label_report(clf->predict(test_docs), gold_labels(test_docs));
    if (on_fold) on_fold(f, *clf, report);
    acc.push_back(report.accuracy);
    f1.push_back(report.macro_f1);
    range.push_back(report.range);
    for (int l = 0; l < kNumLabels; ++l) {
      per_label[l].push_back(report.per_label_accuracy[l]);
    }
    result.folds.push_back(report);
  }
  result.accuracy = mean_std(acc);
  result.macro_f1 = mean_std(f1);
  result.range = mean_std(range);
  for (int l = 0; l < kNumLabels; ++l) {
    result.per_label_accuracy[l] = mean_std(per_label[l]);
  }
  return result;
}

namespace {

Json mean_std_json(const MeanStd &m) {
  return Json{{"mean", m.mean}, {"std", m.std}};
}

}  // namespace

Json cv_to_json(const CvResult &r) {
  Json folds = Json::array();
  for (size_t f = 0; f < r.folds.size(); ++f) {
    Json row = report_to_json(r.folds[f]);
    row["fold"] = f;
    folds.push_back(row);
  }
  Json per_label = Json::object();
  for (CoherenceLabel l : kAllLabels) {
    per_label[std::string(label_name(l))] =
        mean_std_json(r.per_label_accuracy[label_index(l)]);
  }
  return Json{{"k", r.plan.k},
              {"seed", r.plan.seed},
              {"stratified", r.plan.stratified},
              {"folds", folds},
              {"accuracy", mean_std_json(r.accuracy)},
              {"macro_f1", mean_std_json(r.macro_f1)},
              {"range", mean_std_json(r.range)},
              {"per_label_accuracy", per_label}};
}

std::vector<std::string> domain_tags(const std::vector<Document> &dataset) {
  std::set<std::string> tags;
  for (const Document &d : dataset) tags.insert(d.domain_tag);
  return {tags.begin(), tags.end()};
}

CrossDomainResult cross_domain(const std::vector<Document> &dataset,
                               const std::string &train_tag,
                               const std::vector<std::string> &test_tags,
                               const ClassifierFactory &factory,
                               const ClassifierFactory &baseline) {
  const std::vector<std::string> tags = domain_tags(dataset);
  if (tags.size() < 2) {
    throw DomainError("cross-domain evaluation needs at least two domain "
                      "tags, found " + std::to_string(tags.size()));
  }
  auto check_tag = [&](const std::string &t) {
    if (!std::binary_search(tags.begin(), tags.end(), t)) {
      std::string known;
      for (const auto &x : tags) known += (known.empty() ? "" : ", ") + x;
      throw DomainError("unknown domain tag '" + t + "' (known: " + known +
                        ")");
    }
  };
  check_tag(train_tag);
  for (const auto &t : test_tags) check_tag(t);

  auto select = [&](const std::string &tag) {
    std::vector<Document> out;
    for (const Document &d : dataset) {
      if (d.domain_tag == tag) out.push_back(d);
    }
    return out;
  };
  const std::vector<Document> train_docs = select(train_tag);
  std::unique_ptr<Classifier> model = factory();
  std::unique_ptr<Classifier> base = baseline();
  model->fit(train_docs);
  base->fit(train_docs);

  CrossDomainResult result;
  result.train_tag = train_tag;
  for (const std::string &tag : test_tags) {
    const std::vector<Document> test_docs = select(tag);
    const Labels golds = gold_labels(test_docs);
    TransferEntry e;
    e.tag = tag;
    e.model = per_label_report(model->predict(test_docs), golds);
    e.baseline = per_label_report(base->predict(test_docs), golds);
    e.delta_accuracy = e.model.accuracy - e.baseline.accuracy;
    result.entries.push_back(std::move(e));
  }
  return result;
}

Json cross_domain_to_json(const CrossDomainResult &r) {
  Json entries = Json::array();
  for (const TransferEntry &e : r.entries) {
    entries.push_back(Json{{"tag", e.tag},
                           {"model", report_to_json(e.model)},
                           {"baseline", report_to_json(e.baseline)},
                           {"delta_accuracy", e.delta_accuracy}});
  }
  return Json{{"train_tag", r.train_tag}, {"entries", entries}};
}

}  // namespace coh
