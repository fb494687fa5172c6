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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "coh/checkpoint.h"
#include "coh/errors.h"
#include "coh/synth.h"
#include "test_util.h"

namespace coh {
namespace {

std::vector<Document> small_corpus(int n, uint64_t seed) {
  return synth_generate(n, seed);
}

TrainConfig quick_train(int epochs) {
  TrainConfig t;
  t.epochs = epochs;
  t.batch_size = 8;
  t.learning_rate = 3e-3;
  t.seed = 4;
  return t;
}

std::string checkpoint_bytes(const FusionModel &m) {
  std::ostringstream out;
  save_checkpoint(out, m);
  return out.str();
}

TEST(TrainConfig, ValidationAndJson) {
  TrainConfig t;
  EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(TrainConfig::from_json(t.to_json()).to_json(), t.to_json());
  t.batch_size = 0;
  EXPECT_THROW(t.validate(), ContractError);
  t = {};
  t.learning_rate = -1.0;
  EXPECT_THROW(t.validate(), ContractError);
  t = {};
  t.beta2 = 1.0;
  EXPECT_THROW(t.validate(), ContractError);
  Json j = TrainConfig{}.to_json();
  j.erase("epochs");
  EXPECT_THROW(TrainConfig::from_json(j), ParseError);
}

TEST(AdamW, FirstStepMatchesClosedForm) {
  FusionModel m(testing::toy_config());
  const std::vector<Parameter> before = m.parameters();
  const Document d = testing::example_document();
  const LossAndGrad lg = loss_and_grad({&d}, m);
  TrainConfig t;
  t.learning_rate = 0.01;
  t.weight_decay = 0.1;
  AdamW opt(m, t);
  opt.step(m, lg.grads);
  EXPECT_EQ(opt.steps(), 1);
  for (size_t p = 0; p < before.size(); ++p) {
    const Matrix &th = before[p].value;
    const Matrix &g = lg.grads[p];
    const Matrix want =
        th.array() - t.learning_rate *
                         (g.array() / (g.array().abs() + t.epsilon) +
                          t.weight_decay * th.array());
    EXPECT_LT((m.parameters()[p].value - want).cwiseAbs().maxCoeff(), 1e-12)
        << before[p].name;
  }
}

TEST(Train, ZeroLearningRateLeavesParameters) {
  FusionModel m(testing::toy_config());
  const std::vector<Parameter> before = m.parameters();
  TrainConfig t = quick_train(2);
  t.learning_rate = 0.0;
  train(m, small_corpus(20, 1), t);
  for (size_t p = 0; p < before.size(); ++p) {
    EXPECT_EQ(m.parameters()[p].value, before[p].value) << before[p].name;
  }
}

TEST(Train, BitIdenticalAcrossRuns) {
  ModelConfig c = testing::toy_config();
  c.dropout_rate = 0.1;
  const auto data = small_corpus(30, 2);
  FusionModel a(c), b(c);
  const auto ha = train(a, data, quick_train(3));
  const auto hb = train(b, data, quick_train(3));
  ASSERT_EQ(ha.size(), 3u);
  for (size_t e = 0; e < ha.size(); ++e) {
    EXPECT_EQ(ha[e].loss, hb[e].loss);
    EXPECT_EQ(ha[e].accuracy, hb[e].accuracy);
  }
  EXPECT_EQ(checkpoint_bytes(a), checkpoint_bytes(b));
  TrainConfig other = quick_train(3);
  other.seed = 5;
  FusionModel d(c);
  train(d, data, other);
  EXPECT_NE(checkpoint_bytes(a), checkpoint_bytes(d));
}

TEST(Train, FitsSeparableData) {
  const auto data = synth_generate(90, 3);
  ModelConfig c = testing::toy_config();
  c.d_model = 64;
  FusionModel m(c);
  TrainConfig t = quick_train(20);
  double best = 0.0;
  int epochs = 0;
  train(m, data, t, [&](const EpochMetrics &) {
    int correct = 0;
    for (const auto &d : data) correct += predict(d, m) == *d.label;
    best = std::max(best, correct / 90.0);
    ++epochs;
  });
  EXPECT_EQ(epochs, 20);
  EXPECT_GE(best, 0.95);
}

TEST(Train, RejectsBadInput) {
  FusionModel m(testing::toy_config());
  EXPECT_THROW(train(m, {}, quick_train(1)), ContractError);
  auto data = small_corpus(4, 1);
  data[2].label.reset();
  EXPECT_THROW(train(m, data, quick_train(1)), ContractError);
}

TEST(Train, DivergenceNamesEpochAndStep) {
  FusionModel m(testing::toy_config());
  m.value(m.ids().cls_b)(0, 0) = std::numeric_limits<double>::infinity();
  try {
    train(m, small_corpus(10, 1), quick_train(2));
    ADD_FAILURE() << "expected divergence";
  } catch (const NumericalError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("epoch 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("step 0"), std::string::npos) << msg;
  }
}

TEST(Train, CallbackSeesEveryEpoch) {
  FusionModel m(testing::toy_config());
  std::vector<int> seen;
  train(m, small_corpus(10, 1), quick_train(3),
        [&](const EpochMetrics &e) { seen.push_back(e.epoch); });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
}

TEST(Checkpoint, RoundTripIsExact) {
  ModelConfig c = testing::toy_config(9);
  c.variant = Variant::kTextRel;
  FusionModel m(c);
  train(m, small_corpus(10, 1), quick_train(1));
  const std::string bytes = checkpoint_bytes(m);
  std::istringstream in(bytes);
  const FusionModel back = load_checkpoint(in);
  EXPECT_EQ(back.config(), m.config());
  ASSERT_EQ(back.parameters().size(), m.parameters().size());
  for (size_t p = 0; p < m.parameters().size(); ++p) {
    EXPECT_EQ(back.parameters()[p].value, m.parameters()[p].value);
  }
  EXPECT_EQ(checkpoint_bytes(back), bytes);
}

TEST(Checkpoint, CorruptInputsRejected) {
  const std::string bytes = checkpoint_bytes(FusionModel(testing::toy_config()));
  {
    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream in(bad);
    EXPECT_THROW(load_checkpoint(in), ParseError);
  }
  {
    std::istringstream in(bytes.substr(0, bytes.size() / 2));
    EXPECT_THROW(load_checkpoint(in), ParseError);
  }
  {
    std::istringstream in("");
    EXPECT_THROW(load_checkpoint(in), ParseError);
  }
  EXPECT_THROW(load_checkpoint_file("/nonexistent/model.ckpt"), Error);
}

TEST(Checkpoint, ConfigDiffNamesFields) {
  ModelConfig a = testing::toy_config(), b = a;
  EXPECT_TRUE(config_diff(a, b).empty());
  b.d_model = 64;
  b.n_layers = 2;
  const auto diff = config_diff(a, b);
  ASSERT_EQ(diff.size(), 2u);
  EXPECT_EQ(diff[0], "d_model: 32 vs 64");
  EXPECT_NE(diff[1].find("n_layers"), std::string::npos);
}

}  // namespace
}  // namespace coh
