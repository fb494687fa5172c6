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

#include "coh/kernels.h"

#include <string>

#include "coh/errors.h"

namespace coh {

Eigen::MatrixXd masked_softmax(const Eigen::MatrixXd &a,
                               const Eigen::MatrixXd &mask) {
  if (a.rows() != mask.rows() || a.cols() != mask.cols()) {
    throw StructuralError("masked_softmax: score and mask shapes differ");
  }
  Eigen::MatrixXd out = a + mask;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    if (mask.row(r).maxCoeff() < 0.0) {
      throw NumericalError("masked_softmax: row " + std::to_string(r) +
                           " has no visible entry");
    }
    const double mx = out.row(r).maxCoeff();
    out.row(r) = (out.row(r).array() - mx).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

Eigen::MatrixXd relative_score_matrix(const Eigen::MatrixXd &qu,
                                      const Eigen::MatrixXd &qv,
                                      const Eigen::MatrixXd &k,
                                      const Eigen::MatrixXd &rel,
                                      const Eigen::MatrixXi &index) {
  Eigen::MatrixXd out = qu * k.transpose();
  // qv_i . rel_t once per distinct key t, then scattered through index.
  const Eigen::MatrixXd qr = qv * rel.transpose();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) += qr(i, index(i, j));
    }
  }
  return out;
}

}  // namespace coh
