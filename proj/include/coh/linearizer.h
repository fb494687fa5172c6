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

// Flattening of a CoherenceGraph into a sequence of elements, each tagged with
// the (start, end) sentence span it covers.

#ifndef COH_LINEARIZER_H_
#define COH_LINEARIZER_H_

#include <string>
#include <vector>

#include "coh/graph.h"
#include "coh/variant.h"

namespace coh {

enum class ElementKind { kSentence = 0, kEntity = 1, kRelation = 2 };

std::string_view element_kind_name(ElementKind k);

struct FlatElement {
  ElementKind kind = ElementKind::kSentence;
  int start = 0;
  int end = 0;
  // Entity payload.
  std::string surface;
  EntitySource source = EntitySource::kSharedNoun;
  // Relation payload.
  RelationSense sense;
  CauseDirection direction = CauseDirection::kNone;

  bool operator==(const FlatElement &) const = default;
};

FlatElement sentence_element(int index);
FlatElement entity_element(const EntityEdge &e);
FlatElement relation_element(const RelationEdge &e);

// Total order used for the non-sentence tail of a FlatSequence:
// (start, end, entity before relation, payload).
bool element_less(const FlatElement &a, const FlatElement &b);

struct FlatSequence {
  std::vector<FlatElement> elements;
  int n_sentences = 0;
  // Entity elements removed by the max_elements cap.
  int dropped_entities = 0;

  int size() const { return static_cast<int>(elements.size()); }
};

struct LinearizeOptions {
  Variant variant = Variant::kFull;
  // Entity elements spanning the most sentences are dropped first when the
  // sequence would exceed this length. Relations are never dropped; a graph
  // whose sentences and relations alone exceed the cap is rejected.
  int max_elements = 512;
};

FlatSequence linearize(const CoherenceGraph &graph,
                       const LinearizeOptions &options = {});

// Checks the per-element position invariants. Ordering is not checked so that
// permuted sequences remain valid model input.
void validate_sequence(const FlatSequence &seq);

// Tabular dump: one row per element with kind, payload and (start, end).
std::string pretty_print(const FlatSequence &seq);

}  // namespace coh

#endif  // COH_LINEARIZER_H_
