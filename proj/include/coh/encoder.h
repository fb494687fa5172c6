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

// Sentence encoders: token lists to d_model vectors.

#ifndef COH_ENCODER_H_
#define COH_ENCODER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace coh {

// 64-bit FNV-1a over the UTF-8 bytes.
uint64_t fnv1a64(std::string_view s);
int hash_bucket(std::string_view token, int buckets);

struct Encoding {
  Eigen::VectorXd vector;
  // Set when the token list was empty and a zero vector was returned.
  bool empty_input = false;
};

// Mean of the hash-bucket rows of `table` selected by the tokens.
Encoding toy_sentence_encoder(const std::vector<std::string> &tokens,
                              const Eigen::MatrixXd &table);

// Pluggable sentence encoder. Implementations must be deterministic and safe
// to call concurrently.
class SentenceEncoder {
 public:
  virtual ~SentenceEncoder() = default;
  virtual int dim() const = 0;
  virtual Encoding encode(const std::vector<std::string> &tokens) const = 0;
};

// Fixed hash-bucket embedding table initialised from a seed.
class HashBucketEncoder : public SentenceEncoder {
 public:
  HashBucketEncoder(int d_model, int buckets, uint64_t seed);
  explicit HashBucketEncoder(Eigen::MatrixXd table);

  int dim() const override { return static_cast<int>(table_.cols()); }
  Encoding encode(const std::vector<std::string> &tokens) const override;
  const Eigen::MatrixXd &table() const { return table_; }

 private:
  Eigen::MatrixXd table_;
};

}  // namespace coh

#endif  // COH_ENCODER_H_
