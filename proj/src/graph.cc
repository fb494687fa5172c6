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

#include "coh/graph.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "coh/errors.h"

namespace coh {

std::string_view source_name(EntitySource s) {
  return s == EntitySource::kCoref ? "coref" : "shared_noun";
}

EntitySource parse_source(std::string_view s) {
  if (s == "coref") return EntitySource::kCoref;
  if (s == "shared_noun") return EntitySource::kSharedNoun;
  throw DomainError("unknown entity edge source '" + std::string(s) + "'");
}

namespace {

bool entity_key_less(const EntityEdge &a, const EntityEdge &b) {
  return std::tie(a.i, a.j, a.surface) < std::tie(b.i, b.j, b.surface);
}

bool relation_key_less(const RelationEdge &a, const RelationEdge &b) {
  const auto &reg = load_registry();
  return std::make_pair(a.i, reg.index(a.sense)) <
         std::make_pair(b.i, reg.index(b.sense));
}

bool is_cause_family(const RelationSense &s) {
  return s.name == "Cause" || s.name == "Cause+Belief";
}

}  // namespace

std::vector<EntityEdge> extract_entity_edges(const Document &doc) {
  validate_document(doc);
  // (i, j, surface) -> source; coref overrides a shared noun on collision.
  std::map<std::tuple<int, int, std::string>, EntitySource> edges;

  std::map<std::string, std::set<int>> sentences_by_noun;
  for (const auto &noun : doc.annotations.nouns) {
    sentences_by_noun[casefold(noun.surface)].insert(noun.sentence);
  }
  for (const auto &[surface, sents] : sentences_by_noun) {
    for (auto a = sents.begin(); a != sents.end(); ++a) {
      for (auto b = std::next(a); b != sents.end(); ++b) {
        edges.emplace(std::make_tuple(*a, *b, surface),
                      EntitySource::kSharedNoun);
      }
    }
  }
  for (const auto &link : doc.annotations.coref_links) {
    if (link.a.sentence == link.b.sentence) continue;
    const Mention &first = link.a.sentence < link.b.sentence ? link.a : link.b;
    const Mention &second = link.a.sentence < link.b.sentence ? link.b : link.a;
    std::string surface = mention_text(doc, first);
    if (surface.empty()) continue;
    edges[std::make_tuple(first.sentence, second.sentence, surface)] =
        EntitySource::kCoref;
  }

  std::vector<EntityEdge> out;
  out.reserve(edges.size());
  for (const auto &[key, source] : edges) {
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                   source});
  }
  return out;
}

std::vector<RelationEdge> extract_relation_edges(const Document &doc) {
  const auto &registry = load_registry();
  const int n = doc.num_sentences();
  std::vector<RelationEdge> out;
  for (const auto &rel : doc.annotations.relations) {
    RelationSense sense = registry.find(rel.sense.name, rel.sense.kind);
    if (rel.sentence < 1 || rel.sentence >= n) {
      throw StructuralError("document '" + doc.id + "': relation at sentence " +
                            std::to_string(rel.sentence) +
                            " is not between adjacent sentences");
    }
    if (rel.direction != CauseDirection::kNone && !is_cause_family(sense)) {
      throw StructuralError("document '" + doc.id + "': direction '" +
                            std::string(direction_name(rel.direction)) +
                            "' given for non-causal sense " + sense.name);
    }
    out.push_back({rel.sentence, std::move(sense), rel.direction});
  }
  std::stable_sort(out.begin(), out.end(), relation_key_less);
  std::vector<RelationEdge> unique;
  for (auto &e : out) {
    if (!unique.empty() && unique.back().i == e.i &&
        unique.back().sense == e.sense) {
      if (unique.back().direction != e.direction) {
        throw StructuralError("document '" + doc.id +
                              "': conflicting directions for " + e.sense.name +
                              " at sentence " + std::to_string(e.i));
      }
      continue;
    }
    unique.push_back(std::move(e));
  }
  return unique;
}

CoherenceGraph build_graph(const Document &doc) {
  CoherenceGraph g;
  g.doc_id = doc.id;
  g.n_sentences = doc.num_sentences();
  g.relation_edges = extract_relation_edges(doc);
  g.entity_edges = extract_entity_edges(doc);
  return g;
}

void canonicalize_graph(CoherenceGraph &g) {
  std::sort(g.entity_edges.begin(), g.entity_edges.end(), entity_key_less);
  std::sort(g.relation_edges.begin(), g.relation_edges.end(),
            relation_key_less);
  for (size_t k = 0; k < g.entity_edges.size(); ++k) {
    const auto &e = g.entity_edges[k];
    if (e.i < 1 || e.i >= e.j || e.j > g.n_sentences || e.surface.empty()) {
      throw StructuralError("graph '" + g.doc_id + "': invalid entity edge (" +
                            std::to_string(e.i) + ", " + std::to_string(e.j) +
                            ", '" + e.surface + "')");
    }
    if (k > 0 && !entity_key_less(g.entity_edges[k - 1], e)) {
      throw StructuralError("graph '" + g.doc_id + "': duplicate entity edge");
    }
  }
  for (size_t k = 0; k < g.relation_edges.size(); ++k) {
    const auto &e = g.relation_edges[k];
    if (e.i < 1 || e.i >= g.n_sentences) {
      throw StructuralError("graph '" + g.doc_id +
                            "': relation edge out of range at " +
                            std::to_string(e.i));
    }
    if (k > 0 && !relation_key_less(g.relation_edges[k - 1], e)) {
      throw StructuralError("graph '" + g.doc_id +
                            "': duplicate relation edge");
    }
  }
}

Json graph_to_json(const CoherenceGraph &g) {
  Json entities = Json::array();
  for (const auto &e : g.entity_edges) {
    entities.push_back(Json{{"i", e.i},
                            {"j", e.j},
                            {"surface", e.surface},
                            {"source", source_name(e.source)}});
  }
  Json relations = Json::array();
  for (const auto &r : g.relation_edges) {
    Json rj{{"i", r.i}, {"sense", r.sense.name}, {"kind", kind_name(r.sense.kind)}};
    if (r.direction != CauseDirection::kNone) {
      rj["direction"] = direction_name(r.direction);
    }
    relations.push_back(std::move(rj));
  }
  return Json{{"doc_id", g.doc_id},
              {"n_sentences", g.n_sentences},
              {"entity_edges", std::move(entities)},
              {"relation_edges", std::move(relations)}};
}

CoherenceGraph graph_from_json(const Json &j) {
  const auto &registry = load_registry();
  CoherenceGraph g;
  try {
    g.doc_id = j.at("doc_id").get<std::string>();
    g.n_sentences = j.at("n_sentences").get<int>();
    for (const auto &ej : j.at("entity_edges")) {
      g.entity_edges.push_back({ej.at("i").get<int>(), ej.at("j").get<int>(),
                                ej.at("surface").get<std::string>(),
                                parse_source(ej.at("source").get<std::string>())});
    }
    for (const auto &rj : j.at("relation_edges")) {
      RelationEdge r;
      r.i = rj.at("i").get<int>();
      r.sense = registry.find(rj.at("sense").get<std::string>(),
                              parse_kind(rj.at("kind").get<std::string>()));
      if (auto d = rj.find("direction"); d != rj.end()) {
        r.direction = parse_direction(d->get<std::string>());
      }
      g.relation_edges.push_back(std::move(r));
    }
  } catch (const Json::exception &e) {
    throw ParseError(std::string("bad graph record: ") + e.what(), 0);
  }
  canonicalize_graph(g);
  return g;
}

}  // namespace coh
