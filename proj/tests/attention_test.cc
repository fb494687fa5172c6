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

#include <gtest/gtest.h>

#include "coh/errors.h"
#include "coh/kernels.h"
#include "oracles.h"
#include "test_util.h"

namespace coh {
namespace {

using testing::oracle_visible;
using testing::random_sequence;

void expect_mask_matches_oracle(const FlatSequence &seq) {
  const Eigen::MatrixXd m = visible_matrix(seq);
  ASSERT_EQ(m.rows(), seq.size());
  for (int i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(m(i, i), 0.0);
    for (int j = 0; j < seq.size(); ++j) {
      EXPECT_EQ(m(i, j), oracle_visible(seq, i, j) ? 0.0 : kMaskedScore)
          << i << "," << j;
      EXPECT_EQ(m(i, j), m(j, i));
    }
  }
}

TEST(VisibleMatrix, ExampleSequence) {
  const FlatSequence seq = linearize(build_graph(testing::example_document()));
  expect_mask_matches_oracle(seq);
  const Eigen::MatrixXd m = visible_matrix(seq);
  // s1 sees e(1,2), r(1,2) and e(1,4) but not r(2,3); s3 sees r(2,3) and
  // r(3,4); entity and relation elements never see each other.
  EXPECT_EQ(m(0, 4), 0.0);
  EXPECT_EQ(m(0, 5), 0.0);
  EXPECT_EQ(m(0, 6), 0.0);
  EXPECT_EQ(m(0, 7), kMaskedScore);
  EXPECT_EQ(m(2, 7), 0.0);
  EXPECT_EQ(m(2, 9), 0.0);
  EXPECT_EQ(m(2, 6), kMaskedScore);  // e(1,4) does not touch s3
  EXPECT_EQ(m(4, 5), kMaskedScore);
  EXPECT_EQ(m(4, 6), kMaskedScore);
}

TEST(VisibleMatrix, RandomSequences) {
  Rng rng(200);
  for (int t = 0; t < 200; ++t) expect_mask_matches_oracle(random_sequence(rng));
}

TEST(MaskedSoftmax, RowsNormalizedAndMaskedMassNegligible) {
  Rng rng(100);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 12));
    Eigen::MatrixXd a(n, n), mask(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) = uniform(rng, -30, 30);
        mask(i, j) = i == j || uniform01(rng) < 0.4 ? 0.0 : kMaskedScore;
      }
    }
    const Eigen::MatrixXd p = masked_softmax(a, mask);
    for (int i = 0; i < n; ++i) {
      double visible = 0.0;
      for (int j = 0; j < n; ++j) {
        if (mask(i, j) == 0.0) {
          visible += p(i, j);
        } else {
          EXPECT_LT(p(i, j), 1e-12);
        }
        EXPECT_GE(p(i, j), 0.0);
      }
      EXPECT_NEAR(visible, 1.0, 1e-9);
    }
  }
}

TEST(MaskedSoftmax, MatchesDirectFormula) {
  Eigen::MatrixXd a(2, 3), mask(2, 3);
  a << 1, 2, 3, -1, 0, 700;
  mask << 0, 0, kMaskedScore, 0, kMaskedScore, 0;
  const Eigen::MatrixXd p = masked_softmax(a, mask);
  const double z = std::exp(1.0) + std::exp(2.0);
  EXPECT_NEAR(p(0, 0), std::exp(1.0) / z, 1e-15);
  EXPECT_NEAR(p(0, 1), std::exp(2.0) / z, 1e-15);
  EXPECT_NEAR(p(1, 2), 1.0, 1e-15);  // stable for large scores
}

TEST(MaskedSoftmax, FullyMaskedRowIsAnError) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd mask(2, 2);
  mask << 0, 0, kMaskedScore, kMaskedScore;
  EXPECT_THROW(masked_softmax(a, mask), NumericalError);
}

Eigen::MatrixXd random_matrix(Rng &rng, int r, int c) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = uniform(rng, -1, 1);
  return m;
}

TEST(AttentionScores, TermByTermOracle) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const FlatSequence seq = random_sequence(rng);
    const int n = seq.size(), d = 8, dh = 4;
    const Eigen::MatrixXd e = random_matrix(rng, n, d);
    HeadParams h;
    h.w_q = random_matrix(rng, d, dh);
    h.w_k = random_matrix(rng, d, dh);
    h.w_v = random_matrix(rng, d, dh);
    h.w_r = random_matrix(rng, d, dh);
    h.u = random_matrix(rng, 1, dh);
    h.v = random_matrix(rng, 1, dh);
    const Eigen::MatrixXd w_p = random_matrix(rng, 4 * d, d);
    AttentionOptions o;
    o.position.max_relative_distance = 3;
    o.scale_scores = t % 2 == 0;
    o.position.post_relu = t % 3 == 0;
    const Eigen::MatrixXd a = attention_scores(seq, e, h, w_p, o);
    for (int i = 0; i < n; ++i) {
      const Eigen::RowVectorXd q = e.row(i) * h.w_q;
      for (int j = 0; j < n; ++j) {
        const Eigen::RowVectorXd k = e.row(j) * h.w_k;
        const Eigen::RowVectorXd r =
            relative_pe(seq.elements[i], seq.elements[j], w_p, o.position)
                .transpose() *
            h.w_r;
        double want = q.dot(k) + q.dot(r) + h.u.dot(k) + h.v.dot(r);
        if (o.scale_scores) want /= std::sqrt(static_cast<double>(dh));
        EXPECT_NEAR(a(i, j), want, 1e-10);
      }
    }
  }
}

TEST(AttentionScores, ShapeMismatch) {
  const FlatSequence seq = linearize(build_graph(testing::example_document()));
  HeadParams h;
  h.w_q = h.w_k = h.w_v = h.w_r = Eigen::MatrixXd::Zero(8, 4);
  h.u = h.v = Eigen::RowVectorXd::Zero(4);
  EXPECT_THROW(attention_scores(seq, Eigen::MatrixXd::Zero(3, 8), h,
                                Eigen::MatrixXd::Zero(32, 8), {}),
               StructuralError);
}

TEST(RelativeScoreMatrix, UsesIndexTable) {
  Eigen::MatrixXd qu(2, 2), qv(2, 2), k(2, 2), rel(2, 2);
  qu << 1, 0, 0, 1;
  qv << 1, 1, 2, 0;
  k << 3, 4, 5, 6;
  rel << 10, 20, 30, 40;
  Eigen::MatrixXi index(2, 2);
  index << 0, 1, 1, 0;
  const Eigen::MatrixXd s = relative_score_matrix(qu, qv, k, rel, index);
  EXPECT_EQ(s(0, 0), 3 + 30);
  EXPECT_EQ(s(0, 1), 5 + 70);
  EXPECT_EQ(s(1, 0), 4 + 60);
  EXPECT_EQ(s(1, 1), 6 + 20);
}

TEST(MaskedSoftmax, UniformOverVisibleEntries) {
  Eigen::MatrixXd mask = Eigen::MatrixXd::Constant(1, 5, kMaskedScore);
  mask(0, 1) = mask(0, 3) = mask(0, 4) = 0.0;
  const Eigen::MatrixXd p = masked_softmax(Eigen::MatrixXd::Zero(1, 5), mask);
  for (int j : {1, 3, 4}) EXPECT_NEAR(p(0, j), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(masked_softmax(Eigen::MatrixXd::Constant(1, 1, 4.2),
                           Eigen::MatrixXd::Zero(1, 1))(0, 0),
            1.0);
}

TEST(AttentionScores, ZeroParametersGiveZeroScores) {
  const FlatSequence seq = linearize(build_graph(testing::example_document()));
  Rng rng(3);
  HeadParams h;
  h.w_q = h.w_k = h.w_v = h.w_r = Eigen::MatrixXd::Zero(8, 4);
  h.u = h.v = Eigen::RowVectorXd::Zero(4);
  const Eigen::MatrixXd a =
      attention_scores(seq, random_matrix(rng, seq.size(), 8), h,
                       Eigen::MatrixXd::Zero(32, 8), {});
  EXPECT_TRUE(a.isZero(0.0));
}

TEST(AttentionScores, ReducesToContentAttention) {
  const FlatSequence seq = linearize(build_graph(testing::example_document()));
  Rng rng(4);
  const Eigen::MatrixXd e = random_matrix(rng, seq.size(), 4);
  HeadParams h;
  h.w_q = h.w_k = h.w_v = Eigen::MatrixXd::Identity(4, 4);
  h.w_r = Eigen::MatrixXd::Zero(4, 4);
  h.u = h.v = Eigen::RowVectorXd::Zero(4);
  const Eigen::MatrixXd a =
      attention_scores(seq, e, h, random_matrix(rng, 16, 4), {});
  const Eigen::MatrixXd want = e * e.transpose() / 2.0;  // sqrt(d_head) = 2
  EXPECT_LT((a - want).cwiseAbs().maxCoeff(), 1e-14);
}

}  // namespace
}  // namespace coh
