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

#include "coh/encoder.h"

#include <gtest/gtest.h>

#include "coh/errors.h"

namespace coh {
namespace {

TEST(Fnv1a64, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(HashBucket, InRangeAndStable) {
  for (int buckets : {1, 7, 64, 4096}) {
    for (const char *t : {"", "john", "him", "w17", "\xc3\xa9t\xc3\xa9"}) {
      const int b = hash_bucket(t, buckets);
      EXPECT_GE(b, 0);
      EXPECT_LT(b, buckets);
      EXPECT_EQ(b, hash_bucket(t, buckets));
      EXPECT_EQ(b, static_cast<int>(fnv1a64(t) % buckets));
    }
  }
  EXPECT_THROW(hash_bucket("x", 0), ContractError);
}

TEST(ToySentenceEncoder, MeanOfBucketRows) {
  Eigen::MatrixXd table(8, 3);
  for (int r = 0; r < 8; ++r) table.row(r) << r, 2.0 * r, -r;
  const std::vector<std::string> tokens = {"john", "went", "john"};
  Eigen::VectorXd want = Eigen::VectorXd::Zero(3);
  for (const auto &t : tokens) want += table.row(hash_bucket(t, 8)).transpose();
  want /= 3.0;
  const Encoding e = toy_sentence_encoder(tokens, table);
  EXPECT_FALSE(e.empty_input);
  EXPECT_LT((e.vector - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ToySentenceEncoder, EmptyInputGivesFlaggedZero) {
  const Eigen::MatrixXd table = Eigen::MatrixXd::Ones(4, 5);
  const Encoding e = toy_sentence_encoder({}, table);
  EXPECT_TRUE(e.empty_input);
  EXPECT_EQ(e.vector.size(), 5);
  EXPECT_TRUE(e.vector.isZero());
}

TEST(HashBucketEncoder, SeededAndMatchesToyEncoder) {
  const HashBucketEncoder a(16, 32, 5), b(16, 32, 5), c(16, 32, 6);
  EXPECT_EQ(a.dim(), 16);
  EXPECT_EQ(a.table(), b.table());
  EXPECT_NE(a.table(), c.table());
  const std::vector<std::string> tokens = {"the", "cat"};
  EXPECT_EQ(a.encode(tokens).vector,
            toy_sentence_encoder(tokens, a.table()).vector);
}

TEST(ToySentenceEncoder, RepeatsAndIdenticalLists) {
  const HashBucketEncoder enc(8, 16, 2);
  EXPECT_EQ(enc.encode({"a", "a"}).vector, enc.encode({"a"}).vector);
  EXPECT_EQ(enc.encode({"x", "y"}).vector, enc.encode({"x", "y"}).vector);
}

TEST(ToySentenceEncoder, MeanOfHalvesIsWeighted) {
  const HashBucketEncoder enc(8, 16, 3);
  const std::vector<std::string> all = {"the", "cat", "sat", "on", "a", "mat",
                                        "today"};
  const std::vector<std::string> left(all.begin(), all.begin() + 3);
  const std::vector<std::string> right(all.begin() + 3, all.end());
  const Eigen::VectorXd want =
      (3.0 * enc.encode(left).vector + 4.0 * enc.encode(right).vector) / 7.0;
  EXPECT_LT((enc.encode(all).vector - want).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace coh
