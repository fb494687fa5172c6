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

// Fusion transformer over FlatSequences: element embeddings, position-aware
// masked multi-head attention layers and a softmax classifier.

#ifndef COH_MODEL_H_
#define COH_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "coh/attention.h"
#include "coh/corpus_io.h"
#include "coh/domain.h"
#include "coh/encoder.h"
#include "coh/linearizer.h"
#include "coh/tape.h"
#include "coh/variant.h"

namespace coh {

enum class Pooling { kMeanSentences, kFirstSentence };

std::string_view pooling_name(Pooling p);
Pooling parse_pooling(std::string_view s);

struct ModelConfig {
  int d_model = 256;
  int n_heads = 8;
  int n_layers = 2;
  int d_ffn = 1024;
  double dropout_rate = 0.1;
  int n_classes = kNumLabels;
  int max_relative_distance = 128;
  uint64_t seed = 0;

  int token_buckets = 4096;
  int entity_buckets = 1024;
  int max_elements = 512;
  Variant variant = Variant::kFull;
  Pooling pooling = Pooling::kMeanSentences;

  bool scale_scores = true;
  bool pe_post_relu = false;
  // One (u, v) pair per layer shared by all heads instead of one per head.
  bool share_uv = false;
  bool train_token_table = true;
  double layer_norm_eps = 1e-5;

  int d_head() const { return d_model / n_heads; }
  // Throws ContractError describing the first violated constraint.
  void validate() const;

  Json to_json() const;
  static ModelConfig from_json(const Json &j);
  bool operator==(const ModelConfig &) const = default;
};

// Desk-scale preset: d_model 32, 2 heads, 1 layer, FFN 64, small tables.
ModelConfig toy_model_config();

struct Parameter {
  std::string name;
  Matrix value;
};

class FusionModel {
 public:
  struct HeadIds {
    int w_q, w_k, w_v, w_r, u, v;
  };
  struct LayerIds {
    std::vector<HeadIds> heads;
    int w_o, b_o, ln1_gain, ln1_bias;
    int w_ffn1, b_ffn1, w_ffn2, b_ffn2, ln2_gain, ln2_bias;
  };
  struct Ids {
    int token_table, entity_table, relation_table, w_p, cls_w, cls_b;
    std::vector<LayerIds> layers;
  };

  // Parameters are initialised deterministically from config.seed.
  explicit FusionModel(const ModelConfig &config);

  const ModelConfig &config() const { return config_; }
  const Ids &ids() const { return ids_; }

  std::vector<Parameter> &parameters() { return params_; }
  const std::vector<Parameter> &parameters() const { return params_; }
  Matrix &value(int id) { return params_.at(id).value; }
  const Matrix &value(int id) const { return params_.at(id).value; }
  // Number of scalar parameters.
  int64_t size() const;
  Gradients zero_gradients() const;
  bool all_finite() const;

  HeadParams head(int layer, int h) const;
  AttentionOptions attention_options() const;

  // Replaces the trainable token table with a fixed external encoder.
  void set_sentence_encoder(std::shared_ptr<const SentenceEncoder> encoder);
  const SentenceEncoder *sentence_encoder() const { return encoder_.get(); }

 private:
  int add(std::string name, Matrix value);

  ModelConfig config_;
  std::vector<Parameter> params_;
  Ids ids_;
  std::shared_ptr<const SentenceEncoder> encoder_;
};

// Identifies one dropout stream; masks are a pure function of the key.
struct DropoutKey {
  uint64_t seed = 0;
  uint64_t epoch = 0;
  uint64_t step = 0;
  uint64_t slot = 0;
};

struct ForwardOptions {
  bool train_mode = false;
  DropoutKey dropout;
  // When set, every ReLU input sign (true = positive) is appended in
  // evaluation order. Used to detect kinks in finite-difference checks.
  std::vector<bool> *relu_signs = nullptr;
};

struct ForwardResult {
  Vector logits;
  Vector pooled;
  // Sentence tokens were empty for at least one sentence.
  bool empty_sentence = false;
};

// build_graph + linearize with the model's variant and element cap.
FlatSequence prepare_sequence(const Document &doc, const ModelConfig &config);

ForwardResult forward(const Document &doc, const FusionModel &model,
                      const ForwardOptions &options = {});
// Runs the model on an explicit sequence (which may be permuted).
ForwardResult forward_sequence(const Document &doc, const FlatSequence &seq,
                               const FusionModel &model,
                               const ForwardOptions &options = {});

// Input embeddings of a sequence (n x d_model).
Matrix embed_elements(const Document &doc, const FlatSequence &seq,
                      const FusionModel &model);

// One fusion layer applied to `input` (n x d_model).
Matrix layer_forward(const FlatSequence &seq, const Matrix &input,
                     const FusionModel &model, int layer,
                     const ForwardOptions &options = {});

CoherenceLabel predict(const Document &doc, const FusionModel &model);
int argmax(const Vector &logits);

struct LossAndGrad {
  double loss = 0.0;
  Gradients grads;
  std::vector<int> predictions;
};

// Mean cross-entropy over the batch and its gradient for every parameter.
// options.dropout.slot is overwritten with each document's batch position.
// Throws ContractError for unlabeled documents.
LossAndGrad loss_and_grad(const std::vector<const Document *> &batch,
                          const FusionModel &model,
                          const ForwardOptions &options = {},
                          bool compute_gradients = true);

}  // namespace coh

#endif  // COH_MODEL_H_
