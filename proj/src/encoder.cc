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

#include "coh/errors.h"
#include "coh/random.h"

namespace coh {

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int hash_bucket(std::string_view token, int buckets) {
  if (buckets < 1) throw ContractError("hash_bucket: buckets must be >= 1");
  return static_cast<int>(fnv1a64(token) % static_cast<uint64_t>(buckets));
}

Encoding toy_sentence_encoder(const std::vector<std::string> &tokens,
                              const Eigen::MatrixXd &table) {
  Encoding out;
  out.vector = Eigen::VectorXd::Zero(table.cols());
  if (tokens.empty()) {
    out.empty_input = true;
    return out;
  }
  const int buckets = static_cast<int>(table.rows());
  for (const auto &t : tokens) {
    out.vector += table.row(hash_bucket(t, buckets)).transpose();
  }
  out.vector /= static_cast<double>(tokens.size());
  return out;
}

HashBucketEncoder::HashBucketEncoder(int d_model, int buckets, uint64_t seed)
    : table_(buckets, d_model) {
  Rng rng(seed);
  for (Eigen::Index r = 0; r < table_.rows(); ++r) {
    for (Eigen::Index c = 0; c < table_.cols(); ++c) {
      table_(r, c) = uniform(rng, -0.5, 0.5);
    }
  }
}

HashBucketEncoder::HashBucketEncoder(Eigen::MatrixXd table)
    : table_(std::move(table)) {}

Encoding HashBucketEncoder::encode(
    const std::vector<std::string> &tokens) const {
  return toy_sentence_encoder(tokens, table_);
}

}  // namespace coh
