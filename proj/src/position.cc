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

#include "coh/position.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace coh {

Eigen::VectorXd sinusoid(int distance, int d_model) {
  Eigen::VectorXd p(d_model);
  for (int c = 0; c < d_model; c += 2) {
    const double angle =
        distance / std::pow(10000.0, static_cast<double>(c) / d_model);
    p(c) = std::sin(angle);
    if (c + 1 < d_model) p(c + 1) = std::cos(angle);
  }
  return p;
}

RelativeDistances relative_distances(const FlatElement &i,
                                     const FlatElement &j, int clip) {
  auto c = [clip](int d) { return std::clamp(d, -clip, clip); };
  return {c(i.start - j.start), c(i.start - j.end), c(i.end - j.start),
          c(i.end - j.end)};
}

Eigen::VectorXd relative_pe(const FlatElement &i, const FlatElement &j,
                            const Eigen::MatrixXd &w_p,
                            const PositionOptions &options) {
  const int d = static_cast<int>(w_p.cols());
  const auto dist =
      relative_distances(i, j, options.max_relative_distance).as_array();
  Eigen::RowVectorXd features(4 * d);
  for (int k = 0; k < 4; ++k) {
    features.segment(k * d, d) = sinusoid(dist[k], d).transpose();
  }
  Eigen::VectorXd pe = (features * w_p).transpose();
  if (options.post_relu) pe = pe.cwiseMax(0.0);
  return pe;
}

DistanceTable build_distance_table(const FlatSequence &seq, int clip) {
  const int n = seq.size();
  DistanceTable table;
  table.index.resize(n, n);
  std::map<std::array<int, 4>, int> seen;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto key =
          relative_distances(seq.elements[i], seq.elements[j], clip).as_array();
      auto [it, inserted] =
          seen.emplace(key, static_cast<int>(table.keys.size()));
      if (inserted) table.keys.push_back(key);
      table.index(i, j) = it->second;
    }
  }
  return table;
}

Eigen::MatrixXd sinusoid_features(const DistanceTable &table, int d_model) {
  Eigen::MatrixXd s(static_cast<Eigen::Index>(table.keys.size()), 4 * d_model);
  // Sinusoids are cached per distinct distance value.
  std::map<int, Eigen::VectorXd> cache;
  for (size_t t = 0; t < table.keys.size(); ++t) {
    for (int k = 0; k < 4; ++k) {
      const int d = table.keys[t][k];
      auto it = cache.find(d);
      if (it == cache.end()) it = cache.emplace(d, sinusoid(d, d_model)).first;
      s.row(t).segment(k * d_model, d_model) = it->second.transpose();
    }
  }
  return s;
}

}  // namespace coh
