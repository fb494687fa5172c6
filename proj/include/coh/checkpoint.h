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

// Binary checkpoints: model config plus every parameter tensor.
//
// Layout (all integers little-endian):
//   "COHFCKPT"  u32 version  u64 config_len  config JSON bytes
//   u32 n_params, then per parameter:
//   u32 name_len  name  u32 rows  u32 cols  rows*cols IEEE-754 doubles
//   (column-major, little-endian bit patterns)

#ifndef COH_CHECKPOINT_H_
#define COH_CHECKPOINT_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "coh/model.h"

namespace coh {

inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(std::ostream &out, const FusionModel &model);
void save_checkpoint_file(const std::string &path, const FusionModel &model);

// Rebuilds the model from the stored config and checks every stored tensor
// name and shape against it. Throws ParseError on any mismatch.
FusionModel load_checkpoint(std::istream &in);
FusionModel load_checkpoint_file(const std::string &path);

// Human-readable differences between two configs ("d_model: 64 vs 32").
std::vector<std::string> config_diff(const ModelConfig &a,
                                     const ModelConfig &b);

}  // namespace coh

#endif  // COH_CHECKPOINT_H_
