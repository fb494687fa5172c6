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

// Sentence graph with entity links and discourse relation links.

#ifndef COH_GRAPH_H_
#define COH_GRAPH_H_

#include <string>
#include <vector>

#include "coh/corpus_io.h"
#include "coh/domain.h"

namespace coh {

enum class EntitySource { kSharedNoun, kCoref };

std::string_view source_name(EntitySource s);
EntitySource parse_source(std::string_view s);

// Link between sentences i < j through a shared (case-folded) noun or a
// coreference chain.
struct EntityEdge {
  int i = 0;
  int j = 0;
  std::string surface;
  EntitySource source = EntitySource::kSharedNoun;
  bool operator==(const EntityEdge &) const = default;
};

// Discourse relation between sentence i and i + 1.
struct RelationEdge {
  int i = 0;
  RelationSense sense;
  CauseDirection direction = CauseDirection::kNone;
  bool operator==(const RelationEdge &) const = default;
};

// Edges are kept sorted: entity edges by (i, j, surface), relation edges by
// (i, registry index of the sense).
struct CoherenceGraph {
  std::string doc_id;
  int n_sentences = 0;
  std::vector<EntityEdge> entity_edges;
  std::vector<RelationEdge> relation_edges;
  bool operator==(const CoherenceGraph &) const = default;
};

std::vector<EntityEdge> extract_entity_edges(const Document &doc);
std::vector<RelationEdge> extract_relation_edges(const Document &doc);
CoherenceGraph build_graph(const Document &doc);

// Sorts edges into canonical order and checks every graph invariant.
// Throws StructuralError on duplicate keys or out-of-range indices.
void canonicalize_graph(CoherenceGraph &g);

Json graph_to_json(const CoherenceGraph &g);
CoherenceGraph graph_from_json(const Json &j);

}  // namespace coh

#endif  // COH_GRAPH_H_
