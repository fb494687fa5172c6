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

#include "coh/tape.h"

#include <cmath>

#include "coh/errors.h"
#include "coh/kernels.h"

namespace coh {

const Matrix &Tape::value(Id id) const {
  const Node &n = nodes_.at(id);
  return n.external ? *n.external : n.own;
}

Matrix &Tape::grad_of(Id id) {
  Node &n = nodes_[id];
  if (!n.has_grad) {
    const Matrix &v = value(id);
    n.grad = Matrix::Zero(v.rows(), v.cols());
    n.has_grad = true;
  }
  return n.grad;
}

Tape::Id Tape::push(Matrix v, std::function<void(Tape &, Node &)> back) {
  Node n;
  n.own = std::move(v);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size()) - 1;
}

Tape::Id Tape::constant(Matrix v) { return push(std::move(v), nullptr); }

Tape::Id Tape::param(int param_id, const Matrix *value) {
  Node n;
  n.external = value;
  n.back = [param_id](Tape &t, Node &self) {
    (*t.grads_)[param_id] += self.grad;
  };
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size()) - 1;
}

Tape::Id Tape::matmul(Id a, Id b) {
  Matrix out = val(a) * val(b);
  return push(std::move(out), [a, b](Tape &t, Node &self) {
    t.grad_of(a).noalias() += self.grad * t.val(b).transpose();
    t.grad_of(b).noalias() += t.val(a).transpose() * self.grad;
  });
}

Tape::Id Tape::add(Id a, Id b) {
  Matrix out = val(a) + val(b);
  return push(std::move(out), [a, b](Tape &t, Node &self) {
    t.grad_of(a) += self.grad;
    t.grad_of(b) += self.grad;
  });
}

Tape::Id Tape::add_row(Id a, Id row) {
  Matrix out = val(a);
  out.rowwise() += val(row).row(0);
  return push(std::move(out), [a, row](Tape &t, Node &self) {
    t.grad_of(a) += self.grad;
    t.grad_of(row) += self.grad.colwise().sum();
  });
}

Tape::Id Tape::scale(Id a, double s) {
  Matrix out = val(a) * s;
  return push(std::move(out), [a, s](Tape &t, Node &self) {
    t.grad_of(a) += self.grad * s;
  });
}

Tape::Id Tape::mul_const(Id a, Matrix mask) {
  Matrix out = val(a).cwiseProduct(mask);
  return push(std::move(out), [a, mask = std::move(mask)](Tape &t, Node &self) {
    t.grad_of(a) += self.grad.cwiseProduct(mask);
  });
}

Tape::Id Tape::relu(Id a) {
  Matrix out = val(a).cwiseMax(0.0);
  return push(std::move(out), [a](Tape &t, Node &self) {
    const Matrix &x = t.val(a);
    Matrix &g = t.grad_of(a);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x.data()[i] > 0.0) g.data()[i] += self.grad.data()[i];
    }
  });
}

Tape::Id Tape::layer_norm(Id x, Id gain, Id bias, double eps) {
  const Matrix &in = val(x);
  const Eigen::Index rows = in.rows(), cols = in.cols();
  Matrix xhat(rows, cols);
  Vector inv_std(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double mean = in.row(r).mean();
    double var = (in.row(r).array() - mean).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (in.row(r).array() - mean) * inv_std(r);
  }
  Matrix out = xhat;
  out.array().rowwise() *= val(gain).row(0).array();
  out.rowwise() += val(bias).row(0);
  return push(std::move(out), [x, gain, bias, xhat = std::move(xhat),
                               inv_std = std::move(inv_std)](Tape &t,
                                                             Node &self) {
    const Matrix &g = self.grad;
    t.grad_of(bias) += g.colwise().sum();
    t.grad_of(gain) += g.cwiseProduct(xhat).colwise().sum();
    Matrix dxhat = g;
    dxhat.array().rowwise() *= t.val(gain).row(0).array();
    const double n = static_cast<double>(xhat.cols());
    Matrix &dx = t.grad_of(x);
    for (Eigen::Index r = 0; r < xhat.rows(); ++r) {
      double sum_d = dxhat.row(r).sum();
      double sum_dx = dxhat.row(r).dot(xhat.row(r));
      dx.row(r).array() += inv_std(r) / n *
                           (n * dxhat.row(r).array() - sum_d -
                            xhat.row(r).array() * sum_dx);
    }
  });
}

Tape::Id Tape::masked_softmax(Id a, const Matrix &mask) {
  Matrix out = coh::masked_softmax(val(a), mask);
  return push(std::move(out), [a](Tape &t, Node &self) {
    const Matrix &p = self.own;
    Matrix &ga = t.grad_of(a);
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      double dot = self.grad.row(r).dot(p.row(r));
      ga.row(r).array() +=
          p.row(r).array() * (self.grad.row(r).array() - dot);
    }
  });
}

Tape::Id Tape::concat_cols(const std::vector<Id> &parts) {
  Eigen::Index rows = val(parts.at(0)).rows(), cols = 0;
  for (Id p : parts) cols += val(p).cols();
  Matrix out(rows, cols);
  Eigen::Index off = 0;
  for (Id p : parts) {
    out.middleCols(off, val(p).cols()) = val(p);
    off += val(p).cols();
  }
  return push(std::move(out), [parts](Tape &t, Node &self) {
    Eigen::Index off = 0;
    for (Id p : parts) {
      Eigen::Index c = t.val(p).cols();
      t.grad_of(p) += self.grad.middleCols(off, c);
      off += c;
    }
  });
}

Tape::Id Tape::mean_rows(Id x, const std::vector<int> &rows) {
  if (rows.empty()) throw ContractError("mean_rows over an empty row set");
  const Matrix &in = val(x);
  Matrix out = Matrix::Zero(1, in.cols());
  for (int r : rows) out += in.row(r);
  const double inv = 1.0 / static_cast<double>(rows.size());
  out *= inv;
  return push(std::move(out), [x, rows, inv](Tape &t, Node &self) {
    Matrix &g = t.grad_of(x);
    for (int r : rows) g.row(r) += self.grad.row(0) * inv;
  });
}

Tape::Id Tape::relative_scores(Id qu, Id qv, Id k, Id rel,
                               const Eigen::MatrixXi &index) {
  Matrix out =
      relative_score_matrix(val(qu), val(qv), val(k), val(rel), index);
  return push(std::move(out), [qu, qv, k, rel, index](Tape &t, Node &self) {
    const Matrix &G = self.grad;
    t.grad_of(qu).noalias() += G * t.val(k);
    t.grad_of(k).noalias() += G.transpose() * t.val(qu);
    const Matrix &R = t.val(rel);
    Matrix gqr = Matrix::Zero(G.rows(), R.rows());
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      for (Eigen::Index j = 0; j < G.cols(); ++j) {
        gqr(i, index(i, j)) += G(i, j);
      }
    }
    t.grad_of(qv).noalias() += gqr * R;
    t.grad_of(rel).noalias() += gqr.transpose() * t.val(qv);
  });
}

Tape::Id Tape::gather_mean(int param_id, const Matrix *table,
                           const std::vector<std::vector<int>> &groups) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(groups.size()),
                            table->cols());
  for (size_t r = 0; r < groups.size(); ++r) {
    if (groups[r].empty()) continue;
    for (int b : groups[r]) out.row(r) += table->row(b);
    out.row(r) /= static_cast<double>(groups[r].size());
  }
  std::function<void(Tape &, Node &)> back;
  if (param_id >= 0) {
    back = [param_id, groups](Tape &t, Node &self) {
      Matrix &g = (*t.grads_)[param_id];
      for (size_t r = 0; r < groups.size(); ++r) {
        if (groups[r].empty()) continue;
        const double inv = 1.0 / static_cast<double>(groups[r].size());
        for (int b : groups[r]) g.row(b) += self.grad.row(r) * inv;
      }
    };
  }
  return push(std::move(out), std::move(back));
}

Tape::Id Tape::stack_rows(const std::vector<std::pair<Id, int>> &rows,
                          int cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    out.row(r) = val(rows[r].first).row(rows[r].second);
  }
  return push(std::move(out), [rows](Tape &t, Node &self) {
    for (size_t r = 0; r < rows.size(); ++r) {
      t.grad_of(rows[r].first).row(rows[r].second) += self.grad.row(r);
    }
  });
}

Tape::Id Tape::cross_entropy(Id logits, int target) {
  const Matrix &z = val(logits);
  const double mx = z.maxCoeff();
  RowVector p = (z.row(0).array() - mx).exp();
  const double sum = p.sum();
  p /= sum;
  Matrix out(1, 1);
  out(0, 0) = -(z(0, target) - mx - std::log(sum));
  return push(std::move(out), [logits, target, p](Tape &t, Node &self) {
    RowVector d = p;
    d(target) -= 1.0;
    t.grad_of(logits).row(0) += d * self.grad(0, 0);
  });
}

void Tape::backward(Id root, Gradients *grads, double seed) {
  grads_ = grads;
  grad_of(root).setConstant(seed);
  for (Id id = root; id >= 0; --id) {
    Node &n = nodes_[id];
    if (!n.has_grad || !n.back) continue;
    n.back(*this, n);
  }
  grads_ = nullptr;
}

}  // namespace coh
