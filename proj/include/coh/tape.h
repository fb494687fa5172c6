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

// A small reverse-mode differentiation tape over dense double matrices.
//
// Every op appends a node holding its value and a backward closure. Model
// parameters are never copied onto the tape: leaf and gather ops keep a
// pointer to the parameter storage and write their gradients straight into a
// caller-supplied Gradients buffer during backward().

#ifndef COH_TAPE_H_
#define COH_TAPE_H_

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace coh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// One gradient matrix per model parameter, indexed by parameter id.
using Gradients = std::vector<Matrix>;

class Tape {
 public:
  using Id = int;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  const Matrix &value(Id id) const;
  int size() const { return static_cast<int>(nodes_.size()); }

  Id constant(Matrix v);
  // Leaf bound to parameter `param_id`; `value` must outlive the tape.
  Id param(int param_id, const Matrix *value);

  Id matmul(Id a, Id b);
  Id add(Id a, Id b);
  // Adds a 1 x cols row vector to every row of `a`.
  Id add_row(Id a, Id row);
  Id scale(Id a, double s);
  // Elementwise product with a constant matrix (dropout masks).
  Id mul_const(Id a, Matrix mask);
  Id relu(Id a);
  // Row-wise layer normalisation with per-column gain and bias (1 x cols).
  Id layer_norm(Id x, Id gain, Id bias, double eps);
  // Row-wise softmax(a + mask); mask is a constant additive matrix.
  Id masked_softmax(Id a, const Matrix &mask);
  Id concat_cols(const std::vector<Id> &parts);
  // 1 x cols mean of the listed rows.
  Id mean_rows(Id x, const std::vector<int> &rows);

  // out(i, j) = qu_i . k_j + qv_i . rel_{index(i, j)}, where rel holds one row
  // per distinct relative-position key.
  Id relative_scores(Id qu, Id qv, Id k, Id rel,
                     const Eigen::MatrixXi &index);

  // Row r of the result is the mean of the table rows listed in groups[r]
  // (a zero row for an empty group). Gradients are scattered into the
  // parameter when `param_id` >= 0; otherwise the table is treated as fixed.
  Id gather_mean(int param_id, const Matrix *table,
                 const std::vector<std::vector<int>> &groups);

  // Stacks rows taken from several nodes: row r comes from row
  // rows[r].second of node rows[r].first.
  Id stack_rows(const std::vector<std::pair<Id, int>> &rows, int cols);

  // Mean cross-entropy of a 1 x C logit row against class `target`.
  Id cross_entropy(Id logits, int target);

  // Back-propagates d(root)/d(.) scaled by `seed`, accumulating parameter
  // gradients into `grads` (entries must be pre-sized to parameter shapes).
  void backward(Id root, Gradients *grads, double seed = 1.0);

 private:
  struct Node {
    Matrix own;
    const Matrix *external = nullptr;
    Matrix grad;
    bool has_grad = false;
    std::function<void(Tape &, Node &)> back;
  };

  const Matrix &val(Id id) const { return value(id); }
  Matrix &grad_of(Id id);
  Id push(Matrix v, std::function<void(Tape &, Node &)> back);

  std::vector<Node> nodes_;
  Gradients *grads_ = nullptr;
};

}  // namespace coh

#endif  // COH_TAPE_H_
