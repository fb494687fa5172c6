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

// Verbalization of a CoherenceGraph as (s_i, label, s_j) triples and the
// prompt texts built from them.

#ifndef COH_PROMPT_H_
#define COH_PROMPT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coh/domain.h"
#include "coh/graph.h"
#include "coh/variant.h"

namespace coh {

struct Triple {
  int i = 0;
  // "entity" or the rendered sense ("reason", "instantiation", ...).
  std::string label;
  int j = 0;
  bool is_entity = false;
  // Shared surface of an entity triple; breaks ties between parallel entity
  // edges and is not rendered.
  std::string surface;

  bool operator==(const Triple &) const = default;
};

// Lowercase render of a sense. Cause with a direction becomes "reason" or
// "result"; everything else is the lowercased registry name.
std::string render_sense(const RelationSense &sense, CauseDirection direction);

// One triple per graph edge, sorted by (i, j, entity first, label, surface).
std::vector<Triple> extract_triples(const CoherenceGraph &graph);

enum class PromptVariant {
  kTextOnly,
  kTextEnty,
  kTextRel,
  kFull,
  kFullWithExplanation
};

std::string_view prompt_variant_name(PromptVariant v);
PromptVariant parse_prompt_variant(std::string_view s);
PromptVariant prompt_variant(Variant v);
const std::vector<PromptVariant> &all_prompt_variants();

// Keeps the triples a variant is allowed to see, preserving order.
std::vector<Triple> filter_triples(const std::vector<Triple> &triples,
                                   PromptVariant variant);

struct TruncationEvent {
  std::string doc_id;
  PromptVariant variant = PromptVariant::kFull;
  std::size_t budget = 0;
  // Code points of the untruncated prompt.
  std::size_t original_chars = 0;
  int dropped_triples = 0;
  int dropped_sentences = 0;
};

struct PromptOptions {
  // Maximum prompt length in Unicode code points; 0 means unlimited. Over
  // budget, trailing triples are dropped first, then trailing sentences.
  std::size_t char_budget = 0;
};

struct PromptDocument {
  std::string doc_id;
  PromptVariant variant = PromptVariant::kFull;
  std::string text;
  std::vector<Triple> triples_used;
  std::optional<TruncationEvent> truncation;

  std::size_t char_count() const;
};

// Throws StructuralError when a triple is out of range, not ordered i < j, or
// not admitted by the variant. Throws ContractError when the budget cannot
// hold even the fixed template with one sentence.
PromptDocument render_prompt(const Document &doc,
                             const std::vector<Triple> &triples,
                             PromptVariant variant,
                             const PromptOptions &options = {});

// Number of Unicode code points in UTF-8 text.
std::size_t utf8_length(std::string_view s);

}  // namespace coh

#endif  // COH_PROMPT_H_
