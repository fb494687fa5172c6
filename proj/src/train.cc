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

#include "coh/train.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "coh/errors.h"
#include "coh/random.h"

namespace coh {

void TrainConfig::validate() const {
  auto fail = [](const std::string &m) { throw ContractError("train config: " + m); };
  if (!(learning_rate >= 0.0)) fail("learning_rate must be >= 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (epochs < 0) fail("epochs must be >= 0");
  if (!(weight_decay >= 0.0)) fail("weight_decay must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    fail("betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
}

Json TrainConfig::to_json() const {
  return Json{{"learning_rate", learning_rate}, {"batch_size", batch_size},
              {"epochs", epochs},               {"weight_decay", weight_decay},
              {"beta1", beta1},                 {"beta2", beta2},
              {"epsilon", epsilon},             {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const Json &j) {
  TrainConfig c;
  try {
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
  } catch (const Json::exception &e) {
    throw ParseError(std::string("bad train config: ") + e.what(), 0);
  }
  c.validate();
  return c;
}

AdamW::AdamW(const FusionModel &model, const TrainConfig &config)
    : config_(config), m_(model.zero_gradients()), v_(model.zero_gradients()) {}

void AdamW::step(FusionModel &model, const Gradients &grads) {
  ++t_;
  const double lr = config_.learning_rate;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  auto &params = model.parameters();
  for (size_t p = 0; p < params.size(); ++p) {
    Matrix &theta = params[p].value;
    m_[p] = config_.beta1 * m_[p] + (1.0 - config_.beta1) * grads[p];
    v_[p] = config_.beta2 * v_[p] +
            (1.0 - config_.beta2) * grads[p].cwiseProduct(grads[p]);
    auto update = (m_[p].array() / c1) /
                  ((v_[p].array() / c2).sqrt() + config_.epsilon);
    theta.array() -= lr * (update + config_.weight_decay * theta.array());
  }
}

std::vector<EpochMetrics> train(FusionModel &model,
                                const std::vector<Document> &dataset,
                                const TrainConfig &config,
                                const EpochCallback &on_epoch) {
  config.validate();
  if (dataset.empty()) throw ContractError("train: empty dataset");
  for (const auto &doc : dataset) {
    if (!doc.label) {
      throw ContractError("train: document '" + doc.id + "' has no label");
    }
  }

  AdamW optimizer(model, config);
  std::vector<EpochMetrics> history;
  std::vector<size_t> order(dataset.size());
  uint64_t step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(hash_key({config.seed, static_cast<uint64_t>(epoch)}));
    shuffle(order, rng);

    double loss_sum = 0.0;
    size_t correct = 0;
    for (size_t begin = 0; begin < order.size();
         begin += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(order.size(), begin + static_cast<size_t>(config.batch_size));
      std::vector<const Document *> batch;
      for (size_t k = begin; k < end; ++k) batch.push_back(&dataset[order[k]]);

      ForwardOptions opts;
      opts.train_mode = true;
      opts.dropout = {config.seed, static_cast<uint64_t>(epoch), step, 0};
      const std::string where = "epoch " + std::to_string(epoch) +
                                ", step " + std::to_string(step);
      LossAndGrad lg;
      try {
        lg = loss_and_grad(batch, model, opts);
      } catch (const NumericalError &e) {
        throw NumericalError("training diverged at " + where + ": " + e.what());
      }
      if (!std::isfinite(lg.loss)) {
        throw NumericalError("training diverged: non-finite loss at " + where);
      }
      loss_sum += lg.loss * static_cast<double>(batch.size());
      for (size_t k = 0; k < batch.size(); ++k) {
        if (lg.predictions[k] == label_index(*batch[k]->label)) ++correct;
      }
      optimizer.step(model, lg.grads);
      if (!model.all_finite()) {
        throw NumericalError("training diverged: non-finite parameters at " +
                             where);
      }
      ++step;
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.loss = loss_sum / static_cast<double>(dataset.size());
    m.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    m.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    history.push_back(m);
    if (on_epoch) on_epoch(m);
  }
  return history;
}

}  // namespace coh
