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

// Relative position features for elements carrying (start, end) positions.

#ifndef COH_POSITION_H_
#define COH_POSITION_H_

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "coh/linearizer.h"

namespace coh {

// Transformer sinusoid: component 2k is sin(distance / 10000^(2k / d_model)),
// component 2k + 1 is the matching cos.
Eigen::VectorXd sinusoid(int distance, int d_model);

// The four signed distances between element i and element j, each clipped
// to [-clip, clip].
struct RelativeDistances {
  int start_start = 0;  // start_i - start_j
  int start_end = 0;    // start_i - end_j
  int end_start = 0;    // end_i - start_j
  int end_end = 0;      // end_i - end_j

  std::array<int, 4> as_array() const {
    return {start_start, start_end, end_start, end_end};
  }
};

RelativeDistances relative_distances(const FlatElement &i,
                                     const FlatElement &j, int clip);

struct PositionOptions {
  int max_relative_distance = 128;
  // Applies a ReLU after the W_p projection.
  bool post_relu = false;
};

// [p(d1) p(d2) p(d3) p(d4)] * w_p, with w_p of shape (4 * d_model) x d_model.
Eigen::VectorXd relative_pe(const FlatElement &i, const FlatElement &j,
                            const Eigen::MatrixXd &w_p,
                            const PositionOptions &options);

// Distinct distance keys of a sequence. index(i, j) points into `keys`;
// keys are numbered in row-major order of first appearance.
struct DistanceTable {
  std::vector<std::array<int, 4>> keys;
  Eigen::MatrixXi index;
};

DistanceTable build_distance_table(const FlatSequence &seq, int clip);

// One row per key: the four sinusoids concatenated (keys x 4 * d_model).
Eigen::MatrixXd sinusoid_features(const DistanceTable &table, int d_model);

}  // namespace coh

#endif  // COH_POSITION_H_
