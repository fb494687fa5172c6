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

// Line-delimited JSON corpus format. One document per line:
//
//   {"id": "...", "domain_tag": "...",
//    "label": "low" | "medium" | "high" | {"scheme": "GCDC3", "score": 2},
//    "sentences": [{"text": "...", "tokens": ["...", ...]}, ...],
//    "annotations": {
//      "nouns": [{"sentence": 1, "span": [0, 1], "surface": "John"}],
//      "coref_links": [{"a": {"sentence": 1, "span": [0, 1]},
//                       "b": {"sentence": 2, "span": [3, 4]}}],
//      "relations": [{"sentence": 1, "sense": "Cause", "kind": "implicit",
//                     "direction": "reason"}]}}
//
// Sentence indices are 1-based, spans are half-open token ranges, and a
// relation at sentence i links sentences i and i+1. "label" may be omitted for
// inference-only documents; "direction" is optional.

#ifndef COH_CORPUS_IO_H_
#define COH_CORPUS_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "coh/domain.h"
#include "json.hpp"

namespace coh {

using Json = nlohmann::json;

Json document_to_json(const Document &doc);
// Throws ParseError (line 0), DomainError, RegistryError or StructuralError.
Document document_from_json(const Json &j);

// Canonical single-line serialization (sorted keys, no trailing newline).
std::string serialize_document(const Document &doc);
Document parse_document(const std::string &line);

// Blank lines are skipped. Errors carry the 1-based line number.
std::vector<Document> read_corpus(std::istream &in);
std::vector<Document> read_corpus_file(const std::string &path);

void write_corpus(std::ostream &out, const std::vector<Document> &docs);
void write_corpus_file(const std::string &path,
                       const std::vector<Document> &docs);

}  // namespace coh

#endif  // COH_CORPUS_IO_H_
