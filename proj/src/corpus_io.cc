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

#include "coh/corpus_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "coh/errors.h"

namespace coh {
namespace {

Json span_json(const Span &s) { return Json::array({s.start, s.end}); }

Json mention_json(const Mention &m) {
  return Json{{"sentence", m.sentence}, {"span", span_json(m.span)}};
}

const Json &field(const Json &j, const char *name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + name + "'", 0);
  }
  return *it;
}

Span span_from(const Json &j) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError("span must be a [start, end] pair", 0);
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

Mention mention_from(const Json &j) {
  return {field(j, "sentence").get<int>(), span_from(field(j, "span"))};
}

}  // namespace

Json document_to_json(const Document &doc) {
  Json j;
  j["id"] = doc.id;
  j["domain_tag"] = doc.domain_tag;
  if (doc.raw_score) {
    j["label"] = Json{{"scheme", scheme_name(doc.raw_score->scheme)},
                      {"score", doc.raw_score->score}};
  } else if (doc.label) {
    j["label"] = label_name(*doc.label);
  }
  Json sentences = Json::array();
  for (const auto &s : doc.sentences) {
    sentences.push_back(Json{{"text", s.text}, {"tokens", s.tokens}});
  }
  j["sentences"] = std::move(sentences);

  Json nouns = Json::array();
  for (const auto &n : doc.annotations.nouns) {
    nouns.push_back(Json{{"sentence", n.sentence},
                         {"span", span_json(n.span)},
                         {"surface", n.surface}});
  }
  Json corefs = Json::array();
  for (const auto &c : doc.annotations.coref_links) {
    corefs.push_back(Json{{"a", mention_json(c.a)}, {"b", mention_json(c.b)}});
  }
  Json relations = Json::array();
  for (const auto &r : doc.annotations.relations) {
    Json rj{{"sentence", r.sentence},
            {"sense", r.sense.name},
            {"kind", kind_name(r.sense.kind)}};
    if (r.direction != CauseDirection::kNone) {
      rj["direction"] = direction_name(r.direction);
    }
    relations.push_back(std::move(rj));
  }
  j["annotations"] = Json{{"nouns", std::move(nouns)},
                          {"coref_links", std::move(corefs)},
                          {"relations", std::move(relations)}};
  return j;
}

Document document_from_json(const Json &j) {
  if (!j.is_object()) throw ParseError("document must be a JSON object", 0);
  Document doc;
  try {
    doc.id = field(j, "id").get<std::string>();
    if (auto it = j.find("domain_tag"); it != j.end()) {
      doc.domain_tag = it->get<std::string>();
    }
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      if (it->is_string()) {
        doc.label = parse_label(it->get<std::string>());
      } else if (it->is_object()) {
        RawScore raw{parse_scheme(field(*it, "scheme").get<std::string>()),
                     field(*it, "score").get<int>()};
        doc.label = map_raw_score(raw.scheme, raw.score);
        doc.raw_score = raw;
      } else {
        throw ParseError("label must be a string or {scheme, score}", 0);
      }
    }
    int index = 1;
    for (const auto &sj : field(j, "sentences")) {
      Sentence s;
      s.index = index++;
      s.text = field(sj, "text").get<std::string>();
      s.tokens = field(sj, "tokens").get<std::vector<std::string>>();
      doc.sentences.push_back(std::move(s));
    }
    if (auto it = j.find("annotations"); it != j.end()) {
      const Json &a = *it;
      const auto &registry = load_registry();
      if (auto n = a.find("nouns"); n != a.end()) {
        for (const auto &nj : *n) {
          doc.annotations.nouns.push_back(
              {field(nj, "sentence").get<int>(), span_from(field(nj, "span")),
               field(nj, "surface").get<std::string>()});
        }
      }
      if (auto c = a.find("coref_links"); c != a.end()) {
        for (const auto &cj : *c) {
          doc.annotations.coref_links.push_back(
              {mention_from(field(cj, "a")), mention_from(field(cj, "b"))});
        }
      }
      if (auto r = a.find("relations"); r != a.end()) {
        for (const auto &rj : *r) {
          RelationAnnotation rel;
          rel.sentence = field(rj, "sentence").get<int>();
          rel.sense = registry.find(field(rj, "sense").get<std::string>(),
                                    parse_kind(field(rj, "kind").get<std::string>()));
          if (auto d = rj.find("direction"); d != rj.end()) {
            rel.direction = parse_direction(d->get<std::string>());
          }
          doc.annotations.relations.push_back(std::move(rel));
        }
      }
    }
  } catch (const Json::exception &e) {
    throw ParseError(std::string("bad field type: ") + e.what(), 0);
  }
  validate_document(doc);
  return doc;
}

std::string serialize_document(const Document &doc) {
  return document_to_json(doc).dump();
}

Document parse_document(const std::string &line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  return document_from_json(j);
}

std::vector<Document> read_corpus(std::istream &in) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Document doc = parse_document(line);
      if (!ids.insert(doc.id).second) {
        throw ParseError("duplicate document id '" + doc.id + "'", 0);
      }
      docs.push_back(std::move(doc));
    } catch (const ParseError &e) {
      if (e.line() > 0) throw;
      throw ParseError(e.what(), lineno);
    } catch (const Error &e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return docs;
}

std::vector<Document> read_corpus_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return read_corpus(in);
}

void write_corpus(std::ostream &out, const std::vector<Document> &docs) {
  for (const auto &doc : docs) out << serialize_document(doc) << '\n';
}

void write_corpus_file(const std::string &path,
                       const std::vector<Document> &docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path + "'");
  write_corpus(out, docs);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace coh
