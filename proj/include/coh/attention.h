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

// Position-aware attention scores and the visible matrix over a FlatSequence.

#ifndef COH_ATTENTION_H_
#define COH_ATTENTION_H_

#include <Eigen/Dense>

#include "coh/kernels.h"
#include "coh/linearizer.h"
#include "coh/position.h"

namespace coh {

// True when element a may attend to element b (the relation is symmetric):
// self connection, sentence-sentence, or a sentence and an entity/relation
// element whose start or end is that sentence.
bool is_visible(const FlatElement &a, const FlatElement &b, bool same_element);

// 0 for visible pairs, kMaskedScore otherwise. Symmetric, zero diagonal.
Eigen::MatrixXd visible_matrix(const FlatSequence &seq);

// Parameters of one attention head. Projections are d_model x d_head.
struct HeadParams {
  Eigen::MatrixXd w_q, w_k, w_v, w_r;
  Eigen::RowVectorXd u, v;
};

struct AttentionOptions {
  PositionOptions position;
  // Multiply scores by 1 / sqrt(d_head).
  bool scale_scores = true;
};

// A(i, j) = q_i k_j^T + q_i r_ij^T + u k_j^T + v r_ij^T with q = E W_q,
// k = E W_k and r_ij = relative_pe(i, j) W_r. `embeddings` is n x d_model.
Eigen::MatrixXd attention_scores(const FlatSequence &seq,
                                 const Eigen::MatrixXd &embeddings,
                                 const HeadParams &head,
                                 const Eigen::MatrixXd &w_p,
                                 const AttentionOptions &options);

}  // namespace coh

#endif  // COH_ATTENTION_H_
