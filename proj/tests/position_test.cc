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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace coh {
namespace {

TEST(Sinusoid, MatchesLongDoubleOracle) {
  for (int d_model : {2, 8, 32, 33}) {
    for (int dist : {-128, -7, -1, 0, 1, 3, 64, 128}) {
      const Eigen::VectorXd p = sinusoid(dist, d_model);
      ASSERT_EQ(p.size(), d_model);
      for (int c = 0; c < d_model; ++c) {
        const long double freq =
            powl(10000.0L, static_cast<long double>(c - c % 2) / d_model);
        const long double angle = dist / freq;
        const long double want = c % 2 == 0 ? sinl(angle) : cosl(angle);
        EXPECT_NEAR(p(c), static_cast<double>(want), 1e-12)
            << "d=" << d_model << " dist=" << dist << " c=" << c;
      }
    }
  }
}

TEST(Sinusoid, ZeroDistance) {
  const Eigen::VectorXd p = sinusoid(0, 6);
  for (int c = 0; c < 6; ++c) EXPECT_EQ(p(c), c % 2 == 0 ? 0.0 : 1.0);
}

TEST(RelativeDistances, FourSignedDistances) {
  const FlatElement s2 = sentence_element(2);
  FlatElement e14;
  e14.kind = ElementKind::kEntity;
  e14.start = 1;
  e14.end = 4;
  const RelativeDistances d = relative_distances(s2, e14, 128);
  EXPECT_EQ(d.start_start, 1);
  EXPECT_EQ(d.start_end, -2);
  EXPECT_EQ(d.end_start, 1);
  EXPECT_EQ(d.end_end, -2);
  const RelativeDistances r = relative_distances(e14, s2, 128);
  EXPECT_EQ(r.start_start, -1);
  EXPECT_EQ(r.start_end, -1);
  EXPECT_EQ(r.end_start, 2);
  EXPECT_EQ(r.end_end, 2);
}

TEST(RelativeDistances, Clipped) {
  const RelativeDistances d =
      relative_distances(sentence_element(1), sentence_element(300), 128);
  EXPECT_EQ(d.as_array(), (std::array<int, 4>{-128, -128, -128, -128}));
  const RelativeDistances e =
      relative_distances(sentence_element(10), sentence_element(2), 3);
  EXPECT_EQ(e.as_array(), (std::array<int, 4>{3, 3, 3, 3}));
}

TEST(RelativePe, ConcatenatedSinusoidsTimesProjection) {
  Rng rng(4);
  const int d = 8;
  Eigen::MatrixXd w_p(4 * d, d);
  for (Eigen::Index k = 0; k < w_p.size(); ++k) {
    w_p.data()[k] = uniform(rng, -1, 1);
  }
  FlatElement e;
  e.kind = ElementKind::kEntity;
  e.start = 2;
  e.end = 5;
  const FlatElement s = sentence_element(3);
  PositionOptions o;
  const Eigen::VectorXd pe = relative_pe(s, e, w_p, o);
  Eigen::VectorXd want = Eigen::VectorXd::Zero(d);
  const int dists[4] = {1, -2, 1, -2};
  for (int part = 0; part < 4; ++part) {
    want += w_p.middleRows(part * d, d).transpose() * sinusoid(dists[part], d);
  }
  EXPECT_LT((pe - want).cwiseAbs().maxCoeff(), 1e-12);

  o.post_relu = true;
  EXPECT_LT((relative_pe(s, e, w_p, o) - want.cwiseMax(0.0)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(DistanceTable, IndexesDistinctKeys) {
  const FlatSequence seq = linearize(build_graph(testing::example_document()));
  const DistanceTable t = build_distance_table(seq, 128);
  ASSERT_EQ(t.index.rows(), seq.size());
  std::set<std::array<int, 4>> distinct;
  for (int i = 0; i < seq.size(); ++i) {
    for (int j = 0; j < seq.size(); ++j) {
      const auto key =
          relative_distances(seq.elements[i], seq.elements[j], 128).as_array();
      EXPECT_EQ(t.keys.at(t.index(i, j)), key);
      distinct.insert(key);
    }
  }
  EXPECT_EQ(distinct.size(), t.keys.size());
  // Row-major first appearance.
  EXPECT_EQ(t.index(0, 0), 0);

  const Eigen::MatrixXd s = sinusoid_features(t, 6);
  ASSERT_EQ(s.cols(), 24);
  for (size_t r = 0; r < t.keys.size(); ++r) {
    for (int part = 0; part < 4; ++part) {
      EXPECT_EQ(Eigen::VectorXd(s.row(r).segment(part * 6, 6).transpose()),
                sinusoid(t.keys[r][part], 6));
    }
  }
}

TEST(Sinusoid, Parity) {
  for (int d : {1, 2, 7, 30}) {
    const Eigen::VectorXd p = sinusoid(d, 4), n = sinusoid(-d, 4);
    for (int c = 0; c < 4; ++c) {
      EXPECT_EQ(n(c), c % 2 == 0 ? -p(c) : p(c)) << d << " " << c;
    }
  }
}

}  // namespace
}  // namespace coh
