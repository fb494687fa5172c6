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

// AdamW training loop for the fusion model.

#ifndef COH_TRAIN_H_
#define COH_TRAIN_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "coh/model.h"

namespace coh {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 20;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 0;

  void validate() const;
  Json to_json() const;
  static TrainConfig from_json(const Json &j);
};

// Adam with decoupled weight decay:
//   theta -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta)
class AdamW {
 public:
  AdamW(const FusionModel &model, const TrainConfig &config);
  void step(FusionModel &model, const Gradients &grads);
  int64_t steps() const { return t_; }

 private:
  TrainConfig config_;
  Gradients m_, v_;
  int64_t t_ = 0;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  // Running accuracy of the training-mode predictions made during the epoch.
  double accuracy = 0.0;
  double wall_seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochMetrics &)>;

// Trains `model` in place. Shuffling, dropout and the reduction order are all
// fixed by config.seed, so two runs with the same inputs produce bit-identical
// parameters. Throws NumericalError naming the epoch and step on divergence.
std::vector<EpochMetrics> train(FusionModel &model,
                                const std::vector<Document> &dataset,
                                const TrainConfig &config,
                                const EpochCallback &on_epoch = {});

}  // namespace coh

#endif  // COH_TRAIN_H_
