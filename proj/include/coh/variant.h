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

#ifndef COH_VARIANT_H_
#define COH_VARIANT_H_

#include <string_view>

namespace coh {

// Which graph components take part in a model or a prompt.
enum class Variant { kTextOnly, kTextEnty, kTextRel, kFull };

std::string_view variant_name(Variant v);
// Accepts "TextOnly", "TextEnty", "TextRel", "Full".
Variant parse_variant(std::string_view s);

inline bool uses_entities(Variant v) {
  return v == Variant::kTextEnty || v == Variant::kFull;
}
inline bool uses_relations(Variant v) {
  return v == Variant::kTextRel || v == Variant::kFull;
}

}  // namespace coh

#endif  // COH_VARIANT_H_
