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

#include "coh/prompt.h"

#include <algorithm>
#include <tuple>

#include "coh/errors.h"

namespace coh {
namespace {

constexpr std::string_view kIntro =
    "You are an expert reader assessing the coherence of a text. A coherent "
    "text reads as a connected, logically organized whole rather than a "
    "sequence of unrelated sentences.";

constexpr std::string_view kEntityNote =
    "A triple (s_i, entity, s_j) means that sentences s_i and s_j mention "
    "the same entity.";

constexpr std::string_view kRelationNote =
    "A triple (s_i, relation, s_j) names the discourse relation that holds "
    "between the adjacent sentences s_i and s_j.";

std::string header(PromptVariant v) {
  std::string h(kIntro);
  h += '\n';
  switch (v) {
    case PromptVariant::kTextOnly:
      h += "Consider only the textual content of the sentences below.\n";
      break;
    case PromptVariant::kTextEnty:
      h += "The sentences are followed by triples that link sentences "
           "sharing an entity. ";
      h += kEntityNote;
      h += "\nConsider the sentences together with these entity links.\n";
      break;
    case PromptVariant::kTextRel:
      h += "The sentences are followed by triples that link adjacent "
           "sentences through discourse relations. ";
      h += kRelationNote;
      h += "\nConsider the sentences together with these discourse "
           "relations.\n";
      break;
    case PromptVariant::kFull:
    case PromptVariant::kFullWithExplanation:
      h += "The sentences are followed by triples that link sentences "
           "through shared entities and discourse relations. ";
      h += kEntityNote;
      h += ' ';
      h += kRelationNote;
      h += "\nConsider the sentences together with these entity links and "
           "discourse relations.\n";
      break;
  }
  return h;
}

std::string query(PromptVariant v) {
  std::string q =
      "\nQuestion: How coherent is the text? Choose one label from {low, "
      "medium, high}.";
  if (v == PromptVariant::kFullWithExplanation) {
    q += " Then provide a brief explanation for your judgment.";
  } else {
    q += " Answer with the label only.";
  }
  q += "\nAnswer:\n";
  return q;
}

bool has_triple_section(PromptVariant v) {
  return v != PromptVariant::kTextOnly;
}

std::string assemble(const Document &doc, PromptVariant variant,
                     int n_sentences, const std::vector<Triple> &triples) {
  std::string out = header(variant);
  out += "\nText:\n";
  for (int k = 0; k < n_sentences; ++k) {
    out += 's';
    out += std::to_string(k + 1);
    out += ": ";
    out += doc.sentences[k].text;
    out += '\n';
  }
  if (has_triple_section(variant)) {
    out += "\nTriples:\n";
    if (triples.empty()) out += "(none)\n";
    for (const Triple &t : triples) {
      out += "(s" + std::to_string(t.i) + ", " + t.label + ", s" +
             std::to_string(t.j) + ")\n";
    }
  }
  out += query(variant);
  return out;
}

bool admitted(const Triple &t, PromptVariant v) {
  switch (v) {
    case PromptVariant::kTextOnly:
      return false;
    case PromptVariant::kTextEnty:
      return t.is_entity;
    case PromptVariant::kTextRel:
      return !t.is_entity;
    default:
      return true;
  }
}

}  // namespace

std::string render_sense(const RelationSense &sense,
                         CauseDirection direction) {
  if (sense.name == "Cause") {
    if (direction == CauseDirection::kReason) return "reason";
    if (direction == CauseDirection::kResult) return "result";
  }
  return casefold(sense.name);
}

std::vector<Triple> extract_triples(const CoherenceGraph &graph) {
  std::vector<Triple> out;
  for (const EntityEdge &e : graph.entity_edges) {
    if (e.i < e.j) out.push_back({e.i, "entity", e.j, true, e.surface});
  }
  for (const RelationEdge &r : graph.relation_edges) {
    out.push_back({r.i, render_sense(r.sense, r.direction), r.i + 1, false,
                   ""});
  }
  std::sort(out.begin(), out.end(), [](const Triple &a, const Triple &b) {
    return std::tie(a.i, a.j, b.is_entity, a.label, a.surface) <
           std::tie(b.i, b.j, a.is_entity, b.label, b.surface);
  });
  return out;
}

std::string_view prompt_variant_name(PromptVariant v) {
  switch (v) {
    case PromptVariant::kTextOnly:
      return "TextOnly";
    case PromptVariant::kTextEnty:
      return "TextEnty";
    case PromptVariant::kTextRel:
      return "TextRel";
    case PromptVariant::kFull:
      return "Full";
    case PromptVariant::kFullWithExplanation:
      return "FullWithExplanation";
  }
  return "?";
}

const std::vector<PromptVariant> &all_prompt_variants() {
  static const std::vector<PromptVariant> kAll = {
      PromptVariant::kTextOnly, PromptVariant::kTextEnty,
      PromptVariant::kTextRel, PromptVariant::kFull,
      PromptVariant::kFullWithExplanation};
  return kAll;
}

PromptVariant parse_prompt_variant(std::string_view s) {
  for (PromptVariant v : all_prompt_variants()) {
    if (prompt_variant_name(v) == s) return v;
  }
  throw DomainError("unknown prompt variant '" + std::string(s) +
                    "' (expected TextOnly, TextEnty, TextRel, Full or "
                    "FullWithExplanation)");
}

PromptVariant prompt_variant(Variant v) {
  switch (v) {
    case Variant::kTextOnly:
      return PromptVariant::kTextOnly;
    case Variant::kTextEnty:
      return PromptVariant::kTextEnty;
    case Variant::kTextRel:
      return PromptVariant::kTextRel;
    case Variant::kFull:
      return PromptVariant::kFull;
  }
  return PromptVariant::kFull;
}

std::vector<Triple> filter_triples(const std::vector<Triple> &triples,
                                   PromptVariant variant) {
  std::vector<Triple> out;
  for (const Triple &t : triples) {
    if (admitted(t, variant)) out.push_back(t);
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::size_t PromptDocument::char_count() const { return utf8_length(text); }

PromptDocument render_prompt(const Document &doc,
                             const std::vector<Triple> &triples,
                             PromptVariant variant,
                             const PromptOptions &options) {
  const int n = doc.num_sentences();
  for (const Triple &t : triples) {
    if (t.i < 1 || t.j > n || t.i >= t.j) {
      throw StructuralError("triple (s" + std::to_string(t.i) + ", " +
                            t.label + ", s" + std::to_string(t.j) +
                            ") is out of range for document '" + doc.id +
                            "' with " + std::to_string(n) + " sentences");
    }
    if (!admitted(t, variant)) {
      throw StructuralError("triple (s" + std::to_string(t.i) + ", " +
                            t.label + ", s" + std::to_string(t.j) +
                            ") is not allowed in variant " +
                            std::string(prompt_variant_name(variant)));
    }
  }

  PromptDocument p;
  p.doc_id = doc.id;
  p.variant = variant;
  p.triples_used = triples;
  p.text = assemble(doc, variant, n, p.triples_used);
  const std::size_t budget = options.char_budget;
  if (budget == 0 || p.char_count() <= budget) return p;

  TruncationEvent ev;
  ev.doc_id = doc.id;
  ev.variant = variant;
  ev.budget = budget;
  ev.original_chars = p.char_count();
  int kept = n;
  while (p.char_count() > budget) {
    if (!p.triples_used.empty()) {
      p.triples_used.pop_back();
      ++ev.dropped_triples;
    } else if (kept > 1) {
      --kept;
      ++ev.dropped_sentences;
    } else {
      throw ContractError("prompt budget of " + std::to_string(budget) +
                          " characters cannot hold document '" + doc.id +
                          "' even with a single sentence");
    }
    p.text = assemble(doc, variant, kept, p.triples_used);
  }
  p.truncation = ev;
  return p;
}

}  // namespace coh
