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

#include "coh/linearizer.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "coh/errors.h"

namespace coh {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kTextOnly: return "TextOnly";
    case Variant::kTextEnty: return "TextEnty";
    case Variant::kTextRel: return "TextRel";
    case Variant::kFull: return "Full";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  for (Variant v : {Variant::kTextOnly, Variant::kTextEnty, Variant::kTextRel,
                    Variant::kFull}) {
    if (s == variant_name(v)) return v;
  }
  throw DomainError("unknown variant '" + std::string(s) +
                    "' (expected TextOnly, TextEnty, TextRel or Full)");
}

std::string_view element_kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::kSentence: return "sentence";
    case ElementKind::kEntity: return "entity";
    case ElementKind::kRelation: return "relation";
  }
  return "?";
}

FlatElement sentence_element(int index) {
  FlatElement e;
  e.kind = ElementKind::kSentence;
  e.start = e.end = index;
  return e;
}

FlatElement entity_element(const EntityEdge &edge) {
  FlatElement e;
  e.kind = ElementKind::kEntity;
  e.start = edge.i;
  e.end = edge.j;
  e.surface = edge.surface;
  e.source = edge.source;
  return e;
}

FlatElement relation_element(const RelationEdge &edge) {
  FlatElement e;
  e.kind = ElementKind::kRelation;
  e.start = edge.i;
  e.end = edge.i + 1;
  e.sense = edge.sense;
  e.direction = edge.direction;
  return e;
}

bool element_less(const FlatElement &a, const FlatElement &b) {
  auto key = [](const FlatElement &e) {
    return std::tie(e.start, e.end, e.kind, e.surface, e.source, e.sense.name,
                    e.sense.kind, e.direction);
  };
  return key(a) < key(b);
}

FlatSequence linearize(const CoherenceGraph &graph,
                       const LinearizeOptions &options) {
  FlatSequence seq;
  seq.n_sentences = graph.n_sentences;
  std::vector<FlatElement> entities;
  std::vector<FlatElement> relations;
  if (uses_entities(options.variant)) {
    for (const auto &e : graph.entity_edges) entities.push_back(entity_element(e));
  }
  if (uses_relations(options.variant)) {
    for (const auto &r : graph.relation_edges) {
      relations.push_back(relation_element(r));
    }
  }

  const int fixed = graph.n_sentences + static_cast<int>(relations.size());
  if (fixed > options.max_elements) {
    throw StructuralError("graph '" + graph.doc_id + "' needs " +
                          std::to_string(fixed) +
                          " sentence and relation elements, above the cap of " +
                          std::to_string(options.max_elements));
  }
  const int budget = options.max_elements - fixed;
  if (static_cast<int>(entities.size()) > budget) {
    // Keep the narrowest spans; among equal widths keep the canonical first.
    std::stable_sort(entities.begin(), entities.end(), element_less);
    std::stable_sort(entities.begin(), entities.end(),
                     [](const FlatElement &a, const FlatElement &b) {
                       return a.end - a.start < b.end - b.start;
                     });
    seq.dropped_entities = static_cast<int>(entities.size()) - budget;
    entities.resize(budget);
  }

  seq.elements.reserve(fixed + entities.size());
  for (int k = 1; k <= graph.n_sentences; ++k) {
    seq.elements.push_back(sentence_element(k));
  }
  std::vector<FlatElement> tail;
  tail.reserve(entities.size() + relations.size());
  for (auto &e : entities) tail.push_back(std::move(e));
  for (auto &r : relations) tail.push_back(std::move(r));
  std::sort(tail.begin(), tail.end(), element_less);
  for (auto &e : tail) seq.elements.push_back(std::move(e));
  return seq;
}

void validate_sequence(const FlatSequence &seq) {
  for (const auto &e : seq.elements) {
    bool ok = e.start >= 1 && e.start <= e.end && e.end <= seq.n_sentences;
    switch (e.kind) {
      case ElementKind::kSentence: ok = ok && e.start == e.end; break;
      case ElementKind::kEntity: ok = ok && e.start < e.end; break;
      case ElementKind::kRelation: ok = ok && e.end == e.start + 1; break;
    }
    if (!ok) {
      throw StructuralError("invalid " + std::string(element_kind_name(e.kind)) +
                            " element at (" + std::to_string(e.start) + ", " +
                            std::to_string(e.end) + ") in a sequence of " +
                            std::to_string(seq.n_sentences) + " sentences");
    }
  }
}

std::string pretty_print(const FlatSequence &seq) {
  std::ostringstream os;
  os << "#   kind      payload               start end\n";
  int row = 0;
  int sentence_no = 0, entity_no = 0, relation_no = 0;
  for (const auto &e : seq.elements) {
    std::string tag, payload;
    switch (e.kind) {
      case ElementKind::kSentence:
        tag = "s" + std::to_string(++sentence_no);
        payload = "s" + std::to_string(e.start);
        break;
      case ElementKind::kEntity:
        tag = "e" + std::to_string(++entity_no);
        payload = e.surface;
        break;
      case ElementKind::kRelation:
        tag = "r" + std::to_string(++relation_no);
        payload = e.sense.name;
        if (e.direction != CauseDirection::kNone) {
          payload += "(" + std::string(direction_name(e.direction)) + ")";
        }
        break;
    }
    char line[128];
    std::snprintf(line, sizeof(line), "%-3d %-9s %-21s %-5d %d\n", row++,
                  tag.c_str(), payload.c_str(), e.start, e.end);
    os << line;
  }
  return os.str();
}

}  // namespace coh
