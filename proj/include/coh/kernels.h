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

// Dense kernels shared by the differentiable ops and the standalone
// attention functions.

#ifndef COH_KERNELS_H_
#define COH_KERNELS_H_

#include <Eigen/Dense>

namespace coh {

// Stand-in for -infinity in the visible matrix.
inline constexpr double kMaskedScore = -1e9;

// Row-wise softmax(a + mask). Every mask row must contain at least one
// visible (zero) entry; NumericalError otherwise.
Eigen::MatrixXd masked_softmax(const Eigen::MatrixXd &a,
                               const Eigen::MatrixXd &mask);

// out(i, j) = qu_i . k_j + qv_i . rel_{index(i, j)}.
Eigen::MatrixXd relative_score_matrix(const Eigen::MatrixXd &qu,
                                      const Eigen::MatrixXd &qv,
                                      const Eigen::MatrixXd &k,
                                      const Eigen::MatrixXd &rel,
                                      const Eigen::MatrixXi &index);

}  // namespace coh

#endif  // COH_KERNELS_H_
