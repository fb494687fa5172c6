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

#include "coh/attention.h"

#include <cmath>

#include "coh/errors.h"

namespace coh {

namespace {

bool touches(const FlatElement &sentence, const FlatElement &other) {
  const int k = sentence.start;
  return other.start == k || other.end == k;
}

}  // namespace

bool is_visible(const FlatElement &a, const FlatElement &b,
                bool same_element) {
  if (same_element) return true;
  const bool a_sent = a.kind == ElementKind::kSentence;
  const bool b_sent = b.kind == ElementKind::kSentence;
  if (a_sent && b_sent) return true;
  if (a_sent && !b_sent) return touches(a, b);
  if (b_sent && !a_sent) return touches(b, a);
  return false;
}

Eigen::MatrixXd visible_matrix(const FlatSequence &seq) {
  const int n = seq.size();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = is_visible(seq.elements[i], seq.elements[j], i == j)
                    ? 0.0
                    : kMaskedScore;
    }
  }
  return m;
}

Eigen::MatrixXd attention_scores(const FlatSequence &seq,
                                 const Eigen::MatrixXd &embeddings,
                                 const HeadParams &head,
                                 const Eigen::MatrixXd &w_p,
                                 const AttentionOptions &options) {
  const Eigen::Index n = seq.size();
  const Eigen::Index d = embeddings.cols();
  const Eigen::Index dh = head.w_q.cols();
  if (embeddings.rows() != n || head.w_q.rows() != d || head.w_k.rows() != d ||
      head.w_r.rows() != d || head.w_k.cols() != dh || head.w_r.cols() != dh ||
      head.u.size() != dh || head.v.size() != dh || w_p.rows() != 4 * d ||
      w_p.cols() != d) {
    throw StructuralError("attention_scores: inconsistent shapes");
  }
  const Eigen::MatrixXd q = embeddings * head.w_q;
  const Eigen::MatrixXd k = embeddings * head.w_k;
  const DistanceTable table =
      build_distance_table(seq, options.position.max_relative_distance);
  Eigen::MatrixXd pe =
      sinusoid_features(table, static_cast<int>(d)) * w_p;
  if (options.position.post_relu) pe = pe.cwiseMax(0.0);
  const Eigen::MatrixXd rel = pe * head.w_r;
  Eigen::MatrixXd qu = q, qv = q;
  qu.rowwise() += head.u;
  qv.rowwise() += head.v;
  Eigen::MatrixXd a = relative_score_matrix(qu, qv, k, rel, table.index);
  if (options.scale_scores) a /= std::sqrt(static_cast<double>(dh));
  return a;
}

}  // namespace coh
