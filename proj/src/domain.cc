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

#include "coh/domain.h"

#include <algorithm>

#include "coh/errors.h"

namespace coh {

CoherenceLabel label_from_index(int i) {
  if (i < 0 || i >= kNumLabels) {
    throw DomainError("label index out of range: " + std::to_string(i));
  }
  return static_cast<CoherenceLabel>(i);
}

std::string_view label_name(CoherenceLabel l) {
  switch (l) {
    case CoherenceLabel::kLow: return "low";
    case CoherenceLabel::kMedium: return "medium";
    case CoherenceLabel::kHigh: return "high";
  }
  return "?";
}

CoherenceLabel parse_label(std::string_view s) {
  if (s == "low") return CoherenceLabel::kLow;
  if (s == "medium") return CoherenceLabel::kMedium;
  if (s == "high") return CoherenceLabel::kHigh;
  throw DomainError("unknown coherence label '" + std::string(s) +
                    "' (expected low, medium or high)");
}

std::string_view scheme_name(ScoreScheme s) {
  return s == ScoreScheme::kGcdc3 ? "GCDC3" : "Cohesentia5";
}

ScoreScheme parse_scheme(std::string_view s) {
  if (s == "GCDC3") return ScoreScheme::kGcdc3;
  if (s == "Cohesentia5") return ScoreScheme::kCohesentia5;
  throw DomainError("unknown score scheme '" + std::string(s) +
                    "' (expected GCDC3 or Cohesentia5)");
}

CoherenceLabel map_raw_score(ScoreScheme scheme, int score) {
  switch (scheme) {
    case ScoreScheme::kGcdc3:
      if (score >= 1 && score <= 3) return label_from_index(score - 1);
      break;
    case ScoreScheme::kCohesentia5:
      if (score == 1 || score == 2) return CoherenceLabel::kLow;
      if (score == 3 || score == 4) return CoherenceLabel::kMedium;
      if (score == 5) return CoherenceLabel::kHigh;
      break;
  }
  throw DomainError("score " + std::to_string(score) +
                    " is out of range for scheme " +
                    std::string(scheme_name(scheme)));
}

std::string_view kind_name(RelationKind k) {
  return k == RelationKind::kExplicit ? "explicit" : "implicit";
}

RelationKind parse_kind(std::string_view s) {
  if (s == "explicit") return RelationKind::kExplicit;
  if (s == "implicit") return RelationKind::kImplicit;
  throw DomainError("unknown relation kind '" + std::string(s) + "'");
}

std::string casefold(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

RelationSenseRegistry::RelationSenseRegistry()
    : explicit_{"Asynchronous",   "Cause",         "Concession",
                "Condition",      "Conjunction",   "Contrast",
                "Disjunction",    "Instantiation", "Level-of-detail",
                "Manner",         "Negative-condition", "Purpose",
                "Similarity",     "Substitution",  "Synchronous"},
      implicit_{"Asynchronous",  "Cause",         "Cause+Belief",
                "Concession",    "Condition",     "Conjunction",
                "Contrast",      "Equivalence",   "Instantiation",
                "Level-of-detail", "Manner",      "Purpose",
                "Substitution",  "Synchronous",   "NoRel"},
      // Percentages from the PDTB 3.0 training distribution, as fractions.
      explicit_prior_{0.0869, 0.0787, 0.1994, 0.0599, 0.3655,
                      0.0458, 0.0123, 0.0130, 0.0101, 0.0123,
                      0.0054, 0.0163, 0.0042, 0.0096, 0.0807},
      implicit_prior_{0.0464, 0.2423, 0.0082, 0.0672, 0.0085,
                      0.2084, 0.0386, 0.0121, 0.0684, 0.1460,
                      0.0074, 0.0331, 0.0134, 0.0235, 0.0818} {}

const std::vector<std::string> &RelationSenseRegistry::names(
    RelationKind kind) const {
  return kind == RelationKind::kExplicit ? explicit_ : implicit_;
}

const std::vector<double> &RelationSenseRegistry::priors(
    RelationKind kind) const {
  return kind == RelationKind::kExplicit ? explicit_prior_ : implicit_prior_;
}

namespace {

int find_index(const std::vector<std::string> &names, std::string_view name) {
  std::string folded = casefold(name);
  for (size_t i = 0; i < names.size(); ++i) {
    if (casefold(names[i]) == folded) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::optional<double> RelationSenseRegistry::prior(
    const RelationSense &sense) const {
  int i = find_index(names(sense.kind), sense.name);
  if (i < 0) return std::nullopt;
  return priors(sense.kind)[i];
}

bool RelationSenseRegistry::contains(std::string_view name,
                                     RelationKind kind) const {
  return find_index(names(kind), name) >= 0;
}

RelationSense RelationSenseRegistry::find(std::string_view name,
                                          RelationKind kind) const {
  const auto &list = names(kind);
  int i = find_index(list, name);
  if (i < 0) {
    std::string msg = "unknown " + std::string(kind_name(kind)) +
                      " relation sense '" + std::string(name) +
                      "'; valid senses: ";
    for (size_t k = 0; k < list.size(); ++k) {
      if (k) msg += ", ";
      msg += list[k];
    }
    throw RegistryError(msg);
  }
  return {list[i], kind};
}

int RelationSenseRegistry::index(const RelationSense &sense) const {
  int i = find_index(names(sense.kind), sense.name);
  if (i < 0) find(sense.name, sense.kind);  // throws
  return sense.kind == RelationKind::kExplicit ? i : kPerKind + i;
}

RelationSense RelationSenseRegistry::sense_at(int index) const {
  if (index < 0 || index >= size()) {
    throw RegistryError("relation sense index out of range: " +
                        std::to_string(index));
  }
  if (index < kPerKind) return {explicit_[index], RelationKind::kExplicit};
  return {implicit_[index - kPerKind], RelationKind::kImplicit};
}

const RelationSenseRegistry &load_registry() {
  static const RelationSenseRegistry registry;
  return registry;
}

std::string_view direction_name(CauseDirection d) {
  switch (d) {
    case CauseDirection::kNone: return "none";
    case CauseDirection::kReason: return "reason";
    case CauseDirection::kResult: return "result";
  }
  return "none";
}

CauseDirection parse_direction(std::string_view s) {
  if (s == "none" || s.empty()) return CauseDirection::kNone;
  if (s == "reason") return CauseDirection::kReason;
  if (s == "result") return CauseDirection::kResult;
  throw DomainError("unknown cause direction '" + std::string(s) +
                    "' (expected reason or result)");
}

namespace {

void check_mention(const Document &doc, int sentence, const Span &span,
                   const char *what) {
  const int n = doc.num_sentences();
  if (sentence < 1 || sentence > n) {
    throw StructuralError("document '" + doc.id + "': " + what +
                          " references sentence " + std::to_string(sentence) +
                          " but the document has " + std::to_string(n));
  }
  const int len = static_cast<int>(doc.sentences[sentence - 1].tokens.size());
  if (span.start < 0 || span.end > len || span.start >= span.end) {
    throw StructuralError("document '" + doc.id + "': " + what + " span [" +
                          std::to_string(span.start) + ", " +
                          std::to_string(span.end) + ") is outside sentence " +
                          std::to_string(sentence) + " (" +
                          std::to_string(len) + " tokens)");
  }
}

}  // namespace

void validate_document(const Document &doc) {
  for (size_t k = 0; k < doc.sentences.size(); ++k) {
    const Sentence &s = doc.sentences[k];
    if (s.index != static_cast<int>(k) + 1) {
      throw StructuralError("document '" + doc.id + "': sentence at position " +
                            std::to_string(k + 1) + " has index " +
                            std::to_string(s.index));
    }
    if (!s.text.empty() && s.tokens.empty()) {
      throw StructuralError("document '" + doc.id + "': sentence " +
                            std::to_string(s.index) + " has text but no tokens");
    }
  }
  for (const auto &noun : doc.annotations.nouns) {
    check_mention(doc, noun.sentence, noun.span, "noun");
    if (noun.surface.empty()) {
      throw StructuralError("document '" + doc.id + "': empty noun surface");
    }
  }
  for (const auto &link : doc.annotations.coref_links) {
    check_mention(doc, link.a.sentence, link.a.span, "coref mention");
    check_mention(doc, link.b.sentence, link.b.span, "coref mention");
  }
  const auto &registry = load_registry();
  for (const auto &rel : doc.annotations.relations) {
    if (rel.sentence < 1 || rel.sentence >= doc.num_sentences()) {
      throw StructuralError(
          "document '" + doc.id + "': relation at sentence " +
          std::to_string(rel.sentence) +
          " does not connect two adjacent sentences (document has " +
          std::to_string(doc.num_sentences()) + ")");
    }
    registry.find(rel.sense.name, rel.sense.kind);
  }
}

std::string mention_text(const Document &doc, const Mention &m) {
  const auto &tokens = doc.sentences.at(m.sentence - 1).tokens;
  std::string out;
  for (int t = m.span.start; t < m.span.end; ++t) {
    if (t > m.span.start) out += ' ';
    out += tokens.at(t);
  }
  return casefold(out);
}

}  // namespace coh
