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

#include <gtest/gtest.h>

#include "coh/errors.h"
#include "test_util.h"

namespace coh {
namespace {

// Rebuilds a graph from a flat sequence without using the linearizer.
CoherenceGraph delinearize(const FlatSequence &seq, const std::string &id) {
  CoherenceGraph g;
  g.doc_id = id;
  int sentences = 0;
  for (const FlatElement &e : seq.elements) {
    switch (e.kind) {
      case ElementKind::kSentence:
        ++sentences;
        break;
      case ElementKind::kEntity:
        g.entity_edges.push_back({e.start, e.end, e.surface, e.source});
        break;
      case ElementKind::kRelation:
        g.relation_edges.push_back({e.start, e.sense, e.direction});
        break;
    }
  }
  g.n_sentences = sentences;
  canonicalize_graph(g);
  return g;
}

CoherenceGraph restrict(CoherenceGraph g, Variant v) {
  if (!uses_entities(v)) g.entity_edges.clear();
  if (!uses_relations(v)) g.relation_edges.clear();
  return g;
}

TEST(Linearize, ExampleDocumentSequence) {
  const CoherenceGraph g = build_graph(testing::example_document());
  const FlatSequence seq = linearize(g);
  ASSERT_EQ(seq.size(), 10);
  const std::vector<std::tuple<ElementKind, int, int>> want = {
      {ElementKind::kSentence, 1, 1}, {ElementKind::kSentence, 2, 2},
      {ElementKind::kSentence, 3, 3}, {ElementKind::kSentence, 4, 4},
      {ElementKind::kEntity, 1, 2},   {ElementKind::kRelation, 1, 2},
      {ElementKind::kEntity, 1, 4},   {ElementKind::kRelation, 2, 3},
      {ElementKind::kEntity, 2, 4},   {ElementKind::kRelation, 3, 4}};
  for (int k = 0; k < seq.size(); ++k) {
    const auto &e = seq.elements[k];
    EXPECT_EQ(std::make_tuple(e.kind, e.start, e.end), want[k]) << k;
  }
  EXPECT_EQ(seq.elements[5].direction, CauseDirection::kReason);
  EXPECT_EQ(seq.elements[7].sense.name, "Instantiation");
  EXPECT_EQ(seq.dropped_entities, 0);
}

TEST(Linearize, DelinearizeRecoversGraph) {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const Document doc = testing::random_document(
        rng, 1 + static_cast<int>(uniform_index(rng, 9)), "l");
    const CoherenceGraph g = build_graph(doc);
    for (Variant v : {Variant::kTextOnly, Variant::kTextEnty,
                      Variant::kTextRel, Variant::kFull}) {
      LinearizeOptions o;
      o.variant = v;
      const FlatSequence seq = linearize(g, o);
      EXPECT_NO_THROW(validate_sequence(seq));
      EXPECT_EQ(delinearize(seq, g.doc_id), restrict(g, v));
      for (int k = 0; k < seq.n_sentences; ++k) {
        EXPECT_EQ(seq.elements[k], sentence_element(k + 1));
      }
      for (int k = seq.n_sentences + 1; k < seq.size(); ++k) {
        EXPECT_FALSE(element_less(seq.elements[k], seq.elements[k - 1]));
      }
    }
  }
}

TEST(Linearize, CapDropsWidestEntitiesFirst) {
  CoherenceGraph g;
  g.doc_id = "cap";
  g.n_sentences = 5;
  g.entity_edges = {{1, 2, "a", EntitySource::kSharedNoun},
                    {1, 5, "b", EntitySource::kSharedNoun},
                    {2, 4, "c", EntitySource::kSharedNoun},
                    {3, 4, "d", EntitySource::kSharedNoun}};
  g.relation_edges = {{1, {"Conjunction", RelationKind::kImplicit}, {}},
                      {4, {"NoRel", RelationKind::kImplicit}, {}}};
  LinearizeOptions o;
  o.max_elements = 9;  // 5 sentences + 2 relations leaves room for 2
  const FlatSequence seq = linearize(g, o);
  EXPECT_EQ(seq.size(), 9);
  EXPECT_EQ(seq.dropped_entities, 2);
  std::vector<std::string> kept;
  int relations = 0;
  for (const auto &e : seq.elements) {
    if (e.kind == ElementKind::kEntity) kept.push_back(e.surface);
    relations += e.kind == ElementKind::kRelation;
  }
  EXPECT_EQ(kept, (std::vector<std::string>{"a", "d"}));
  EXPECT_EQ(relations, 2);

  o.max_elements = 6;
  EXPECT_THROW(linearize(g, o), StructuralError);
  o.max_elements = 7;
  EXPECT_EQ(linearize(g, o).dropped_entities, 4);
}

TEST(Linearize, ValidateRejectsBadPositions) {
  FlatSequence seq = linearize(build_graph(testing::example_document()));
  FlatSequence bad = seq;
  bad.elements[5].end = 3;  // relation spanning two steps
  EXPECT_THROW(validate_sequence(bad), StructuralError);
  bad = seq;
  bad.elements[4].end = 1;  // entity with start == end
  EXPECT_THROW(validate_sequence(bad), StructuralError);
  bad = seq;
  bad.elements[0].end = 2;
  EXPECT_THROW(validate_sequence(bad), StructuralError);
  bad = seq;
  bad.elements[6].end = 5;
  EXPECT_THROW(validate_sequence(bad), StructuralError);
  // Order is not part of validity.
  std::swap(seq.elements[4], seq.elements[9]);
  EXPECT_NO_THROW(validate_sequence(seq));
}

TEST(Linearize, PrettyPrintListsEveryElement) {
  const FlatSequence seq = linearize(build_graph(testing::example_document()));
  const std::string table = pretty_print(seq);
  int lines = 0;
  for (char c : table) lines += c == '\n';
  EXPECT_EQ(lines, seq.size() + 1);
  EXPECT_NE(table.find("john"), std::string::npos);
  EXPECT_NE(table.find("reason"), std::string::npos);
}

TEST(Variant, Names) {
  for (Variant v : {Variant::kTextOnly, Variant::kTextEnty, Variant::kTextRel,
                    Variant::kFull}) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  }
  EXPECT_THROW(parse_variant("TextEntity"), DomainError);
}

}  // namespace
}  // namespace coh
