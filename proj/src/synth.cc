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

#include "coh/synth.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "coh/encoder.h"
#include "coh/errors.h"
#include "coh/random.h"

namespace coh {
namespace {

const std::set<std::string> &coherent_names(RelationKind kind) {
  static const std::set<std::string> kExplicit = {
      "Conjunction", "Cause", "Purpose", "Instantiation", "Level-of-detail"};
  static const std::set<std::string> kImplicit = {"Cause", "Conjunction",
                                                  "Asynchronous"};
  return kind == RelationKind::kExplicit ? kExplicit : kImplicit;
}

std::string cue_prefix(const SynthProfile &p, CoherenceLabel l) {
  return p.filler_prefix + "cue" + std::string(1, "lmh"[label_index(l)]);
}

struct Planted {
  int sentence;
  std::string token;
};

}  // namespace

void SynthProfile::validate() const {
  auto fail = [&](const std::string &what) {
    throw DomainError("synth profile '" + name + "': " + what);
  };
  if (min_sentences < 2 || max_sentences < min_sentences) {
    fail("sentence counts must satisfy 2 <= min <= max");
  }
  if (min_filler < 1 || max_filler < min_filler) {
    fail("filler counts must satisfy 1 <= min <= max");
  }
  if (filler_vocab < 1 || cue_vocab < 1) fail("vocabularies must be non-empty");
  // Every sentence may need two fresh nouns plus one planted link.
  if (noun_vocab < 3 * max_sentences) fail("noun_vocab too small");
  for (double p : {text_signal, explicit_fraction, coref_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
}

SynthProfile synth_profile(const std::string &name) {
  SynthProfile p;
  p.name = name;
  if (name == "default") return p;
  if (name == "domain-a") {
    p.domain_tag = "domain-a";
    p.filler_prefix = "a";
    p.noun_prefix = "na";
    return p;
  }
  if (name == "domain-b") {
    p.domain_tag = "domain-b";
    p.filler_prefix = "b";
    p.noun_prefix = "nb";
    p.min_sentences = 5;
    p.max_sentences = 8;
    p.min_filler = 3;
    p.max_filler = 6;
    return p;
  }
  throw DomainError("unknown synth profile '" + name +
                    "' (expected default, domain-a or domain-b)");
}

std::vector<std::string> synth_profile_names() {
  return {"default", "domain-a", "domain-b"};
}

bool is_coherent_sense(const RelationSense &sense) {
  return coherent_names(sense.kind).count(sense.name) > 0;
}

std::vector<double> sense_distribution(RelationKind kind, bool coherent) {
  const auto &registry = load_registry();
  const auto &names = registry.names(kind);
  std::vector<double> prior = registry.priors(kind);
  double sum = 0.0;
  for (double p : prior) sum += p;
  for (double &p : prior) p /= sum;
  double mass_in = 0.0;
  for (size_t k = 0; k < names.size(); ++k) {
    if (coherent_names(kind).count(names[k])) mass_in += prior[k];
  }
  // R = 1 doubles the coherent senses and scales the rest by c so the
  // distribution sums to one; R = 0 takes the complement 2 * prior - A.
  const double c = (1.0 - 2.0 * mass_in) / (1.0 - mass_in);
  std::vector<double> a(names.size());
  for (size_t k = 0; k < names.size(); ++k) {
    a[k] = coherent_names(kind).count(names[k]) ? 2.0 * prior[k]
                                                : c * prior[k];
  }
  if (coherent) return a;
  std::vector<double> b(names.size());
  for (size_t k = 0; k < names.size(); ++k) {
    b[k] = std::max(0.0, 2.0 * prior[k] - a[k]);
  }
  return b;
}

std::vector<Document> synth_generate(int n_docs, uint64_t seed,
                                     const SynthProfile &profile) {
  if (n_docs < 1) throw DomainError("synth_generate needs n_docs >= 1");
  profile.validate();
  const auto &registry = load_registry();
  const std::vector<double> dist[2][2] = {
      {sense_distribution(RelationKind::kExplicit, false),
       sense_distribution(RelationKind::kExplicit, true)},
      {sense_distribution(RelationKind::kImplicit, false),
       sense_distribution(RelationKind::kImplicit, true)}};
  const uint64_t profile_key = fnv1a64(profile.name);

  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (int d = 0; d < n_docs; ++d) {
    Rng rng(hash_key({seed, profile_key, static_cast<uint64_t>(d)}));
    const CoherenceLabel label =
        label_from_index(static_cast<int>(uniform_index(rng, 3)));
    bool entity_bit = label == CoherenceLabel::kHigh;
    bool relation_bit = entity_bit;
    if (label == CoherenceLabel::kMedium) {
      entity_bit = uniform01(rng) < 0.5;
      relation_bit = !entity_bit;
    }
    const int n = profile.min_sentences +
                  static_cast<int>(uniform_index(
                      rng, profile.max_sentences - profile.min_sentences + 1));

    // Distinct nouns for this document, handed out in order.
    std::vector<int> pool(profile.noun_vocab);
    for (int k = 0; k < profile.noun_vocab; ++k) pool[k] = k;
    shuffle(pool, rng);
    size_t next_noun = 0;
    auto fresh_noun = [&]() {
      return profile.noun_prefix + std::to_string(pool[next_noun++]);
    };

    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "-%06d", d);
    doc.id = profile.domain_tag + id;
    doc.domain_tag = profile.domain_tag;
    doc.label = label;

    // Token plan per sentence: fillers, fresh nouns and planted links.
    std::vector<std::vector<std::string>> tokens(n);
    std::vector<std::vector<bool>> is_noun(n);
    auto insert = [&](int s, const std::string &tok, bool noun) {
      auto &t = tokens[s];
      const size_t at = uniform_index(rng, t.size() + 1);
      t.insert(t.begin() + at, tok);
      is_noun[s].insert(is_noun[s].begin() + at, noun);
    };
    for (int s = 0; s < n; ++s) {
      const int fillers = profile.min_filler +
                          static_cast<int>(uniform_index(
                              rng, profile.max_filler - profile.min_filler + 1));
      for (int f = 0; f < fillers; ++f) {
        std::string w;
        if (uniform01(rng) < profile.text_signal) {
          w = cue_prefix(profile, label) +
              std::to_string(uniform_index(rng, profile.cue_vocab));
        } else {
          w = profile.filler_prefix +
              std::to_string(uniform_index(rng, profile.filler_vocab));
        }
        insert(s, w, false);
      }
      // Unlinked pronouns appear everywhere so they carry no label signal.
      if (uniform01(rng) < 0.3) insert(s, "it", false);
      const int extra = 1 + static_cast<int>(uniform_index(rng, 2));
      for (int e = 0; e < extra; ++e) insert(s, fresh_noun(), true);
    }

    // Entity chain: sentence s and s + 1 share a noun of their own.
    struct CorefPlan {
      int s;
      std::string noun;
    };
    std::vector<CorefPlan> corefs;
    if (entity_bit) {
      for (int s = 0; s + 1 < n; ++s) {
        const std::string noun = fresh_noun();
        insert(s, noun, true);
        if (uniform01(rng) < profile.coref_rate) {
          insert(s + 1, "it", false);
          corefs.push_back({s, noun});
        } else {
          // Capitalization varies to exercise case folding.
          std::string again = noun;
          if (uniform01(rng) < 0.3) again[0] = static_cast<char>('A' + again[0] - 'a');
          insert(s + 1, again, true);
        }
      }
    }

    for (int s = 0; s < n; ++s) {
      Sentence sent;
      sent.index = s + 1;
      sent.tokens = tokens[s];
      sent.tokens.push_back(".");
      for (size_t t = 0; t < sent.tokens.size(); ++t) {
        if (t) sent.text += ' ';
        sent.text += sent.tokens[t];
      }
      for (size_t t = 0; t < tokens[s].size(); ++t) {
        if (!is_noun[s][t]) continue;
        const int at = static_cast<int>(t);
        doc.annotations.nouns.push_back({s + 1, {at, at + 1}, tokens[s][t]});
      }
      doc.sentences.push_back(std::move(sent));
    }
    for (const CorefPlan &c : corefs) {
      const auto &a = tokens[c.s];
      const auto &b = tokens[c.s + 1];
      const int ia = static_cast<int>(std::find(a.begin(), a.end(), c.noun) - a.begin());
      // The linked pronoun is the first "it" in the next sentence; any other
      // "it" there is filler.
      const int ib = static_cast<int>(std::find(b.begin(), b.end(), "it") - b.begin());
      doc.annotations.coref_links.push_back(
          {{c.s + 1, {ia, ia + 1}}, {c.s + 2, {ib, ib + 1}}});
    }

    for (int s = 1; s < n; ++s) {
      const int kind = uniform01(rng) < profile.explicit_fraction ? 0 : 1;
      const RelationKind rk =
          kind == 0 ? RelationKind::kExplicit : RelationKind::kImplicit;
      const int k = sample_weighted(rng, dist[kind][relation_bit ? 1 : 0]);
      RelationAnnotation rel;
      rel.sentence = s;
      rel.sense = {registry.names(rk)[k], rk};
      if (rel.sense.name == "Cause") {
        rel.direction = uniform01(rng) < 0.5 ? CauseDirection::kReason
                                             : CauseDirection::kResult;
      }
      doc.annotations.relations.push_back(rel);
    }
    validate_document(doc);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace coh
