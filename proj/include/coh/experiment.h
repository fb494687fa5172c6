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

// Cross-validation and cross-domain experiments over pluggable classifiers.

#ifndef COH_EXPERIMENT_H_
#define COH_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coh/metrics.h"
#include "coh/model.h"
#include "coh/train.h"

namespace coh {

struct FoldPlan {
  int k = 0;
  uint64_t seed = 0;
  bool stratified = true;
  std::map<std::string, int> assignments;  // doc id -> fold

  std::vector<int> fold_sizes() const;
};

// Deterministic in (sorted doc ids, labels, k, seed). Stratified plans deal
// each label's documents round-robin with a running offset, so fold sizes
// and each fold's per-label counts differ by at most one. Throws DomainError
// when k < 2 or k exceeds the dataset, and on duplicate ids.
FoldPlan kfold(const std::vector<Document> &dataset, int k, uint64_t seed,
               bool stratified = true);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const std::vector<Document> &train) = 0;
  virtual Labels predict(const std::vector<Document> &docs) const = 0;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>()>;

// Always predicts the most frequent training label (lowest label on ties).
class MajorityClassifier : public Classifier {
 public:
  void fit(const std::vector<Document> &train) override;
  Labels predict(const std::vector<Document> &docs) const override;
  CoherenceLabel label() const { return label_; }

 private:
  CoherenceLabel label_ = CoherenceLabel::kLow;
};

// Fresh FusionModel trained with `train`. Records the per-epoch metrics and,
// when asked, the eval-mode accuracy on the training set after every epoch.
class FusionClassifier : public Classifier {
 public:
  FusionClassifier(ModelConfig model_config, TrainConfig train_config,
                   bool track_train_accuracy = false);
  void fit(const std::vector<Document> &train) override;
  Labels predict(const std::vector<Document> &docs) const override;

  const FusionModel &model() const { return *model_; }
  const std::vector<EpochMetrics> &history() const { return history_; }
  const std::vector<double> &train_accuracy() const { return train_acc_; }

 private:
  ModelConfig model_config_;
  TrainConfig train_config_;
  bool track_train_accuracy_;
  std::unique_ptr<FusionModel> model_;
  std::vector<EpochMetrics> history_;
  std::vector<double> train_acc_;
};

Labels gold_labels(const std::vector<Document> &docs);

struct MeanStd {
  double mean = 0.0;
  // Sample (n - 1) standard deviation; 0 for a single value.
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double> &values);

struct CvResult {
  FoldPlan plan;
  std::vector<EvalReport> folds;
  MeanStd accuracy;
  MeanStd macro_f1;
  MeanStd range;
  std::array<MeanStd, kNumLabels> per_label_accuracy;
};

using FoldCallback =
    std::function<void(int fold, const Classifier &fitted,
                       const EvalReport &report)>;

// Trains a fresh classifier per fold on the other k - 1 folds and evaluates
// it on the held-out fold.
CvResult run_cv(const std::vector<Document> &dataset, int k, uint64_t seed,
                const ClassifierFactory &factory, bool stratified = true,
                const FoldCallback &on_fold = {});

Json cv_to_json(const CvResult &r);

struct TransferEntry {
  std::string tag;
  EvalReport model;
  EvalReport baseline;
  // model.accuracy - baseline.accuracy.
  double delta_accuracy = 0.0;
};

struct CrossDomainResult {
  std::string train_tag;
  std::vector<TransferEntry> entries;
};

std::vector<std::string> domain_tags(const std::vector<Document> &dataset);

// Trains `factory` and `baseline` on every document tagged `train_tag` and
// evaluates both on each tag in `test_tags`. A test tag equal to the train
// tag evaluates on the training documents themselves. Throws DomainError
// for unknown tags.
CrossDomainResult cross_domain(const std::vector<Document> &dataset,
                               const std::string &train_tag,
                               const std::vector<std::string> &test_tags,
                               const ClassifierFactory &factory,
                               const ClassifierFactory &baseline);

Json cross_domain_to_json(const CrossDomainResult &r);

}  // namespace coh

#endif  // COH_EXPERIMENT_H_
