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

// Seeded synthetic corpora with a known coherence signal, for desk-scale
// experiments.
//
// Each document carries two latent bits: E (adjacent sentences share an
// entity) and R (adjacent relations come from the "coherent" half of the
// sense inventory). High documents have E and R, Low documents neither, and
// Medium documents exactly one of them, chosen evenly. Relation senses are
// drawn so that their marginal over a corpus equals the registry priors.
// Sentence text carries only a weak, profile-controlled label cue, so text
// alone is a much weaker signal than the graph.

#ifndef COH_SYNTH_H_
#define COH_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "coh/domain.h"

namespace coh {

struct SynthProfile {
  std::string name = "default";
  std::string domain_tag = "synthetic";
  int min_sentences = 4;
  int max_sentences = 7;
  int min_filler = 4;
  int max_filler = 8;
  // Filler tokens are "<filler_prefix><k>", nouns "<noun_prefix><k>".
  std::string filler_prefix = "w";
  int filler_vocab = 200;
  std::string noun_prefix = "n";
  int noun_vocab = 150;
  // Probability that a filler token is replaced by a cue word of the
  // document's label.
  double text_signal = 0.01;
  int cue_vocab = 6;
  // Fraction of relations annotated as explicit.
  double explicit_fraction = 0.3;
  // Probability that a planted entity link is realised as a pronoun with a
  // coreference link instead of a repeated noun.
  double coref_rate = 0.3;

  void validate() const;
};

// Named profiles: "default", "domain-a", "domain-b". The two domain profiles
// share the signal generator but use disjoint filler, cue and noun
// vocabularies.
SynthProfile synth_profile(const std::string &name);
std::vector<std::string> synth_profile_names();

// Senses grouped as "coherent" when R = 1 mostly draws from them.
bool is_coherent_sense(const RelationSense &sense);

// Per-kind sense distributions conditioned on R (index order follows the
// registry). Their even mixture equals the normalized priors.
std::vector<double> sense_distribution(RelationKind kind, bool coherent);

// Deterministic in (n_docs, seed, profile).
std::vector<Document> synth_generate(int n_docs, uint64_t seed,
                                     const SynthProfile &profile = {});

}  // namespace coh

#endif  // COH_SYNTH_H_
