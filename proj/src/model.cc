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

#include "coh/model.h"

#include <cmath>

#include "coh/errors.h"
#include "coh/graph.h"
#include "coh/random.h"

namespace coh {

std::string_view pooling_name(Pooling p) {
  return p == Pooling::kMeanSentences ? "mean_sentences" : "first_sentence";
}

Pooling parse_pooling(std::string_view s) {
  if (s == "mean_sentences") return Pooling::kMeanSentences;
  if (s == "first_sentence") return Pooling::kFirstSentence;
  throw DomainError("unknown pooling '" + std::string(s) +
                    "' (expected mean_sentences or first_sentence)");
}

void ModelConfig::validate() const {
  auto fail = [](const std::string &m) { throw ContractError("model config: " + m); };
  if (d_model < 1 || n_heads < 1 || n_layers < 1 || d_ffn < 1) {
    fail("d_model, n_heads, n_layers and d_ffn must all be >= 1");
  }
  if (d_model % n_heads != 0) {
    fail("d_model (" + std::to_string(d_model) +
         ") is not divisible by n_heads (" + std::to_string(n_heads) + ")");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    fail("dropout_rate must be in [0, 1)");
  }
  if (n_classes != kNumLabels) fail("n_classes is fixed at 3");
  if (max_relative_distance < 1) fail("max_relative_distance must be >= 1");
  if (token_buckets < 1 || entity_buckets < 1) fail("bucket counts must be >= 1");
  if (max_elements < 1) fail("max_elements must be >= 1");
  if (!(layer_norm_eps > 0.0)) fail("layer_norm_eps must be positive");
}

Json ModelConfig::to_json() const {
  return Json{{"d_model", d_model},
              {"n_heads", n_heads},
              {"n_layers", n_layers},
              {"d_ffn", d_ffn},
              {"dropout_rate", dropout_rate},
              {"n_classes", n_classes},
              {"max_relative_distance", max_relative_distance},
              {"seed", seed},
              {"token_buckets", token_buckets},
              {"entity_buckets", entity_buckets},
              {"max_elements", max_elements},
              {"variant", variant_name(variant)},
              {"pooling", pooling_name(pooling)},
              {"scale_scores", scale_scores},
              {"pe_post_relu", pe_post_relu},
              {"share_uv", share_uv},
              {"train_token_table", train_token_table},
              {"layer_norm_eps", layer_norm_eps}};
}

ModelConfig toy_model_config() {
  ModelConfig c;
  c.d_model = 32;
  c.n_heads = 2;
  c.n_layers = 1;
  c.d_ffn = 64;
  c.token_buckets = 512;
  c.entity_buckets = 64;
  c.max_relative_distance = 16;
  return c;
}

ModelConfig ModelConfig::from_json(const Json &j) {
  ModelConfig c;
  try {
    c.d_model = j.at("d_model").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.n_layers = j.at("n_layers").get<int>();
    c.d_ffn = j.at("d_ffn").get<int>();
    c.dropout_rate = j.at("dropout_rate").get<double>();
    c.n_classes = j.at("n_classes").get<int>();
    c.max_relative_distance = j.at("max_relative_distance").get<int>();
    c.seed = j.at("seed").get<uint64_t>();
    c.token_buckets = j.at("token_buckets").get<int>();
    c.entity_buckets = j.at("entity_buckets").get<int>();
    c.max_elements = j.at("max_elements").get<int>();
    c.variant = parse_variant(j.at("variant").get<std::string>());
    c.pooling = parse_pooling(j.at("pooling").get<std::string>());
    c.scale_scores = j.at("scale_scores").get<bool>();
    c.pe_post_relu = j.at("pe_post_relu").get<bool>();
    c.share_uv = j.at("share_uv").get<bool>();
    c.train_token_table = j.at("train_token_table").get<bool>();
    c.layer_norm_eps = j.at("layer_norm_eps").get<double>();
  } catch (const Json::exception &e) {
    throw ParseError(std::string("bad model config: ") + e.what(), 0);
  }
  c.validate();
  return c;
}

namespace {

Matrix xavier(int rows, int cols, Rng &rng) {
  const double bound = std::sqrt(6.0 / (rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, -bound, bound);
  }
  return m;
}

Matrix uniform_matrix(int rows, int cols, double bound, Rng &rng) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = uniform(rng, -bound, bound);
  }
  return m;
}

}  // namespace

int FusionModel::add(std::string name, Matrix value) {
  params_.push_back({std::move(name), std::move(value)});
  return static_cast<int>(params_.size()) - 1;
}

FusionModel::FusionModel(const ModelConfig &config) : config_(config) {
  config_.validate();
  Rng rng(config_.seed);
  const int d = config_.d_model, dh = config_.d_head();
  const int n_senses = load_registry().size();

  ids_.token_table =
      add("embed.token", uniform_matrix(config_.token_buckets, d, 0.5, rng));
  ids_.entity_table =
      add("embed.entity", uniform_matrix(config_.entity_buckets, d, 0.5, rng));
  ids_.relation_table =
      add("embed.relation", uniform_matrix(n_senses, d, 0.5, rng));
  ids_.w_p = add("position.w_p", xavier(4 * d, d, rng));

  for (int l = 0; l < config_.n_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    LayerIds layer;
    int shared_u = -1, shared_v = -1;
    if (config_.share_uv) {
      shared_u = add(p + "u", Matrix::Zero(1, dh));
      shared_v = add(p + "v", Matrix::Zero(1, dh));
    }
    for (int h = 0; h < config_.n_heads; ++h) {
      const std::string hp = p + "head" + std::to_string(h) + ".";
      HeadIds head;
      head.w_q = add(hp + "w_q", xavier(d, dh, rng));
      head.w_k = add(hp + "w_k", xavier(d, dh, rng));
      head.w_v = add(hp + "w_v", xavier(d, dh, rng));
      head.w_r = add(hp + "w_r", xavier(d, dh, rng));
      if (config_.share_uv) {
        head.u = shared_u;
        head.v = shared_v;
      } else {
        head.u = add(hp + "u", Matrix::Zero(1, dh));
        head.v = add(hp + "v", Matrix::Zero(1, dh));
      }
      layer.heads.push_back(head);
    }
    layer.w_o = add(p + "w_o", xavier(d, d, rng));
    layer.b_o = add(p + "b_o", Matrix::Zero(1, d));
    layer.ln1_gain = add(p + "ln1.gain", Matrix::Ones(1, d));
    layer.ln1_bias = add(p + "ln1.bias", Matrix::Zero(1, d));
    layer.w_ffn1 = add(p + "ffn.w1", xavier(d, config_.d_ffn, rng));
    layer.b_ffn1 = add(p + "ffn.b1", Matrix::Zero(1, config_.d_ffn));
    layer.w_ffn2 = add(p + "ffn.w2", xavier(config_.d_ffn, d, rng));
    layer.b_ffn2 = add(p + "ffn.b2", Matrix::Zero(1, d));
    layer.ln2_gain = add(p + "ln2.gain", Matrix::Ones(1, d));
    layer.ln2_bias = add(p + "ln2.bias", Matrix::Zero(1, d));
    ids_.layers.push_back(std::move(layer));
  }
  ids_.cls_w = add("classifier.w", xavier(d, config_.n_classes, rng));
  ids_.cls_b = add("classifier.b", Matrix::Zero(1, config_.n_classes));
}

int64_t FusionModel::size() const {
  int64_t n = 0;
  for (const auto &p : params_) n += p.value.size();
  return n;
}

Gradients FusionModel::zero_gradients() const {
  Gradients g;
  g.reserve(params_.size());
  for (const auto &p : params_) {
    g.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
  return g;
}

bool FusionModel::all_finite() const {
  for (const auto &p : params_) {
    if (!p.value.allFinite()) return false;
  }
  return true;
}

HeadParams FusionModel::head(int layer, int h) const {
  const HeadIds &ids = ids_.layers.at(layer).heads.at(h);
  return {value(ids.w_q), value(ids.w_k), value(ids.w_v), value(ids.w_r),
          value(ids.u).row(0), value(ids.v).row(0)};
}

AttentionOptions FusionModel::attention_options() const {
  AttentionOptions o;
  o.position.max_relative_distance = config_.max_relative_distance;
  o.position.post_relu = config_.pe_post_relu;
  o.scale_scores = config_.scale_scores;
  return o;
}

void FusionModel::set_sentence_encoder(
    std::shared_ptr<const SentenceEncoder> encoder) {
  if (encoder && encoder->dim() != config_.d_model) {
    throw ContractError("sentence encoder dimension " +
                        std::to_string(encoder->dim()) +
                        " does not match d_model " +
                        std::to_string(config_.d_model));
  }
  encoder_ = std::move(encoder);
}

FlatSequence prepare_sequence(const Document &doc, const ModelConfig &config) {
  LinearizeOptions lo;
  lo.variant = config.variant;
  lo.max_elements = config.max_elements;
  return linearize(build_graph(doc), lo);
}

namespace {

using Id = Tape::Id;

// Per-sequence constants shared by every layer and head.
struct SequenceContext {
  Matrix mask;
  DistanceTable table;
  Id pe = -1;  // distinct keys x d_model
};

void record_signs(const Matrix &pre, const ForwardOptions &options) {
  if (!options.relu_signs) return;
  for (Eigen::Index i = 0; i < pre.size(); ++i) {
    options.relu_signs->push_back(pre.data()[i] > 0.0);
  }
}

SequenceContext make_context(Tape &tape, const FlatSequence &seq,
                             const FusionModel &model,
                             const ForwardOptions &options) {
  const ModelConfig &c = model.config();
  SequenceContext ctx;
  ctx.mask = visible_matrix(seq);
  ctx.table = build_distance_table(seq, c.max_relative_distance);
  Id s = tape.constant(sinusoid_features(ctx.table, c.d_model));
  ctx.pe = tape.matmul(s, tape.param(model.ids().w_p, &model.value(model.ids().w_p)));
  if (c.pe_post_relu) {
    record_signs(tape.value(ctx.pe), options);
    ctx.pe = tape.relu(ctx.pe);
  }
  return ctx;
}

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                    const DropoutKey &key, uint64_t site) {
  Matrix m(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const uint64_t h = hash_key({key.seed, key.epoch, key.step, key.slot,
                                   site, static_cast<uint64_t>(r),
                                   static_cast<uint64_t>(c)});
      m(r, c) = hash_uniform01(h) < rate ? 0.0 : keep_scale;
    }
  }
  return m;
}

Id maybe_dropout(Tape &tape, Id x, const FusionModel &model,
                 const ForwardOptions &options, uint64_t site) {
  const double rate = model.config().dropout_rate;
  if (!options.train_mode || rate <= 0.0) return x;
  const Matrix &v = tape.value(x);
  return tape.mul_const(x, dropout_mask(v.rows(), v.cols(), rate,
                                        options.dropout, site));
}

Id build_embeddings(Tape &tape, const Document &doc, const FlatSequence &seq,
                    const FusionModel &model, bool *empty_sentence) {
  const ModelConfig &c = model.config();
  const auto &ids = model.ids();
  const auto &registry = load_registry();

  std::vector<int> sentence_rows, entity_rows, relation_rows;
  std::vector<std::vector<int>> token_groups, entity_groups, relation_groups;
  for (int r = 0; r < seq.size(); ++r) {
    const FlatElement &e = seq.elements[r];
    switch (e.kind) {
      case ElementKind::kSentence: {
        sentence_rows.push_back(r);
        const auto &tokens = doc.sentences.at(e.start - 1).tokens;
        if (tokens.empty()) *empty_sentence = true;
        std::vector<int> group;
        for (const auto &t : tokens) group.push_back(hash_bucket(t, c.token_buckets));
        token_groups.push_back(std::move(group));
        break;
      }
      case ElementKind::kEntity:
        entity_rows.push_back(r);
        entity_groups.push_back({hash_bucket(e.surface, c.entity_buckets)});
        break;
      case ElementKind::kRelation:
        relation_rows.push_back(r);
        relation_groups.push_back({registry.index(e.sense)});
        break;
    }
  }

  Id sentences;
  if (const SentenceEncoder *enc = model.sentence_encoder()) {
    Matrix rows(static_cast<Eigen::Index>(sentence_rows.size()), c.d_model);
    for (size_t k = 0; k < sentence_rows.size(); ++k) {
      const FlatElement &e = seq.elements[sentence_rows[k]];
      rows.row(k) = enc->encode(doc.sentences.at(e.start - 1).tokens)
                        .vector.transpose();
    }
    sentences = tape.constant(std::move(rows));
  } else {
    sentences = tape.gather_mean(c.train_token_table ? ids.token_table : -1,
                                 &model.value(ids.token_table), token_groups);
  }
  Id entities = tape.gather_mean(ids.entity_table,
                                 &model.value(ids.entity_table), entity_groups);
  Id relations = tape.gather_mean(
      ids.relation_table, &model.value(ids.relation_table), relation_groups);

  std::vector<std::pair<Id, int>> order(seq.size());
  for (size_t k = 0; k < sentence_rows.size(); ++k) {
    order[sentence_rows[k]] = {sentences, static_cast<int>(k)};
  }
  for (size_t k = 0; k < entity_rows.size(); ++k) {
    order[entity_rows[k]] = {entities, static_cast<int>(k)};
  }
  for (size_t k = 0; k < relation_rows.size(); ++k) {
    order[relation_rows[k]] = {relations, static_cast<int>(k)};
  }
  return tape.stack_rows(order, c.d_model);
}

Id build_layer(Tape &tape, const SequenceContext &ctx, Id x,
               const FusionModel &model, int layer,
               const ForwardOptions &options) {
  const ModelConfig &c = model.config();
  const auto &ids = model.ids().layers.at(layer);
  auto param = [&](int id) { return tape.param(id, &model.value(id)); };
  const double score_scale =
      c.scale_scores ? 1.0 / std::sqrt(static_cast<double>(c.d_head())) : 1.0;

  std::vector<Id> heads;
  heads.reserve(ids.heads.size());
  for (const auto &h : ids.heads) {
    Id q = tape.matmul(x, param(h.w_q));
    Id k = tape.matmul(x, param(h.w_k));
    Id v = tape.matmul(x, param(h.w_v));
    Id rel = tape.matmul(ctx.pe, param(h.w_r));
    Id qu = tape.add_row(q, param(h.u));
    Id qv = tape.add_row(q, param(h.v));
    Id scores = tape.relative_scores(qu, qv, k, rel, ctx.table.index);
    if (score_scale != 1.0) scores = tape.scale(scores, score_scale);
    Id attn = tape.masked_softmax(scores, ctx.mask);
    heads.push_back(tape.matmul(attn, v));
  }
  Id mixed = heads.size() == 1 ? heads[0] : tape.concat_cols(heads);
  Id attn_out = tape.add_row(tape.matmul(mixed, param(ids.w_o)), param(ids.b_o));
  attn_out = maybe_dropout(tape, attn_out, model, options, 2 * layer);
  Id x1 = tape.layer_norm(tape.add(x, attn_out), param(ids.ln1_gain),
                          param(ids.ln1_bias), c.layer_norm_eps);

  Id pre = tape.add_row(tape.matmul(x1, param(ids.w_ffn1)), param(ids.b_ffn1));
  record_signs(tape.value(pre), options);
  Id hidden = tape.relu(pre);
  Id ffn_out =
      tape.add_row(tape.matmul(hidden, param(ids.w_ffn2)), param(ids.b_ffn2));
  ffn_out = maybe_dropout(tape, ffn_out, model, options, 2 * layer + 1);
  Id out = tape.layer_norm(tape.add(x1, ffn_out), param(ids.ln2_gain),
                           param(ids.ln2_bias), c.layer_norm_eps);
  if (!tape.value(out).allFinite()) {
    throw NumericalError("non-finite activation in layer " +
                         std::to_string(layer));
  }
  return out;
}

struct Built {
  Id logits = -1;
  Id pooled = -1;
  bool empty_sentence = false;
};

Built build(Tape &tape, const Document &doc, const FlatSequence &seq,
            const FusionModel &model, const ForwardOptions &options) {
  const ModelConfig &c = model.config();
  if (doc.sentences.empty()) {
    throw ContractError("document '" + doc.id + "' has no sentences");
  }
  if (seq.n_sentences != doc.num_sentences()) {
    throw StructuralError("sequence does not belong to document '" + doc.id +
                          "'");
  }
  validate_sequence(seq);

  Built b;
  SequenceContext ctx = make_context(tape, seq, model, options);
  Id x = build_embeddings(tape, doc, seq, model, &b.empty_sentence);
  for (int l = 0; l < c.n_layers; ++l) {
    x = build_layer(tape, ctx, x, model, l, options);
  }
  std::vector<int> pool_rows;
  for (int r = 0; r < seq.size(); ++r) {
    const FlatElement &e = seq.elements[r];
    if (e.kind != ElementKind::kSentence) continue;
    if (c.pooling == Pooling::kFirstSentence && e.start != 1) continue;
    pool_rows.push_back(r);
  }
  b.pooled = tape.mean_rows(x, pool_rows);
  const auto &ids = model.ids();
  b.logits = tape.add_row(
      tape.matmul(b.pooled, tape.param(ids.cls_w, &model.value(ids.cls_w))),
      tape.param(ids.cls_b, &model.value(ids.cls_b)));
  if (!tape.value(b.logits).allFinite()) {
    throw NumericalError("non-finite logits for document '" + doc.id + "'");
  }
  return b;
}

}  // namespace

ForwardResult forward_sequence(const Document &doc, const FlatSequence &seq,
                               const FusionModel &model,
                               const ForwardOptions &options) {
  Tape tape;
  Built b = build(tape, doc, seq, model, options);
  ForwardResult r;
  r.logits = tape.value(b.logits).row(0).transpose();
  r.pooled = tape.value(b.pooled).row(0).transpose();
  r.empty_sentence = b.empty_sentence;
  return r;
}

ForwardResult forward(const Document &doc, const FusionModel &model,
                      const ForwardOptions &options) {
  return forward_sequence(doc, prepare_sequence(doc, model.config()), model,
                          options);
}

Matrix embed_elements(const Document &doc, const FlatSequence &seq,
                      const FusionModel &model) {
  Tape tape;
  bool empty = false;
  return tape.value(build_embeddings(tape, doc, seq, model, &empty));
}

Matrix layer_forward(const FlatSequence &seq, const Matrix &input,
                     const FusionModel &model, int layer,
                     const ForwardOptions &options) {
  if (input.rows() != seq.size() || input.cols() != model.config().d_model) {
    throw StructuralError("layer_forward: input shape does not match sequence");
  }
  Tape tape;
  SequenceContext ctx = make_context(tape, seq, model, options);
  Id x = tape.constant(input);
  return tape.value(build_layer(tape, ctx, x, model, layer, options));
}

int argmax(const Vector &logits) {
  int best = 0;
  for (int k = 1; k < logits.size(); ++k) {
    if (logits(k) > logits(best)) best = k;
  }
  return best;
}

CoherenceLabel predict(const Document &doc, const FusionModel &model) {
  return label_from_index(argmax(forward(doc, model).logits));
}

LossAndGrad loss_and_grad(const std::vector<const Document *> &batch,
                          const FusionModel &model,
                          const ForwardOptions &options,
                          bool compute_gradients) {
  if (batch.empty()) throw ContractError("loss_and_grad: empty batch");
  for (const Document *doc : batch) {
    if (!doc->label) {
      throw ContractError("document '" + doc->id + "' has no label");
    }
  }
  LossAndGrad out;
  if (compute_gradients) out.grads = model.zero_gradients();
  const double inv = 1.0 / static_cast<double>(batch.size());
  ForwardOptions opts = options;
  for (size_t k = 0; k < batch.size(); ++k) {
    const Document &doc = *batch[k];
    opts.dropout.slot = k;
    Tape tape;
    Built b = build(tape, doc, prepare_sequence(doc, model.config()), model,
                    opts);
    Id loss = tape.cross_entropy(b.logits, label_index(*doc.label));
    out.loss += tape.value(loss)(0, 0) * inv;
    out.predictions.push_back(
        argmax(tape.value(b.logits).row(0).transpose()));
    if (compute_gradients) tape.backward(loss, &out.grads, inv);
  }
  return out;
}

}  // namespace coh
