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

// Core vocabulary shared by every other module: coherence labels, the
// discourse relation sense registry and annotated documents.

#ifndef COH_DOMAIN_H_
#define COH_DOMAIN_H_

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coh {

enum class CoherenceLabel { kLow = 0, kMedium = 1, kHigh = 2 };

inline constexpr int kNumLabels = 3;
inline constexpr std::array<CoherenceLabel, kNumLabels> kAllLabels = {
    CoherenceLabel::kLow, CoherenceLabel::kMedium, CoherenceLabel::kHigh};

inline int label_index(CoherenceLabel l) { return static_cast<int>(l); }
CoherenceLabel label_from_index(int i);
// "low" / "medium" / "high".
std::string_view label_name(CoherenceLabel l);
// Accepts the lowercase names only; throws DomainError otherwise.
CoherenceLabel parse_label(std::string_view s);

enum class ScoreScheme { kGcdc3, kCohesentia5 };

std::string_view scheme_name(ScoreScheme s);
ScoreScheme parse_scheme(std::string_view s);

// GCDC3: 1 -> low, 2 -> medium, 3 -> high.
// Cohesentia5: {1,2} -> low, {3,4} -> medium, 5 -> high.
CoherenceLabel map_raw_score(ScoreScheme scheme, int score);

enum class RelationKind { kExplicit = 0, kImplicit = 1 };

std::string_view kind_name(RelationKind k);
RelationKind parse_kind(std::string_view s);

struct RelationSense {
  std::string name;  // registry spelling, e.g. "Level-of-detail"
  RelationKind kind = RelationKind::kImplicit;

  auto operator<=>(const RelationSense &) const = default;
};

// The explicit and implicit PDTB 3.0 sense inventories, with their
// distribution in the parser's training corpus. The priors are metadata and
// are only consumed by the synthetic data generator.
class RelationSenseRegistry {
 public:
  static constexpr int kPerKind = 15;

  RelationSenseRegistry();

  const std::vector<std::string> &names(RelationKind kind) const;
  // Fraction in [0, 1]; nullopt for an unknown sense.
  std::optional<double> prior(const RelationSense &sense) const;
  const std::vector<double> &priors(RelationKind kind) const;

  // Case-insensitive lookup returning the sense with registry spelling.
  // Throws RegistryError listing the valid senses for `kind`.
  RelationSense find(std::string_view name, RelationKind kind) const;
  bool contains(std::string_view name, RelationKind kind) const;

  // Dense index in [0, size()): explicit senses first, then implicit.
  int index(const RelationSense &sense) const;
  RelationSense sense_at(int index) const;
  int size() const { return 2 * kPerKind; }

 private:
  std::vector<std::string> explicit_;
  std::vector<std::string> implicit_;
  std::vector<double> explicit_prior_;
  std::vector<double> implicit_prior_;
};

const RelationSenseRegistry &load_registry();

// ASCII case folding. Bytes >= 0x80 are left untouched.
std::string casefold(std::string_view s);

// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;
  auto operator<=>(const Span &) const = default;
};

struct Mention {
  int sentence = 0;  // 1-based
  Span span;
  auto operator<=>(const Mention &) const = default;
};

struct NounAnnotation {
  int sentence = 0;
  Span span;
  std::string surface;
  bool operator==(const NounAnnotation &) const = default;
};

struct CorefLink {
  Mention a;
  Mention b;
  bool operator==(const CorefLink &) const = default;
};

// Direction of a Cause relation between sentence i and i+1: kReason when the
// second argument states the cause, kResult when it states the effect.
enum class CauseDirection { kNone, kReason, kResult };

std::string_view direction_name(CauseDirection d);
CauseDirection parse_direction(std::string_view s);

// A relation between sentence `sentence` and `sentence + 1`.
struct RelationAnnotation {
  int sentence = 0;
  RelationSense sense;
  CauseDirection direction = CauseDirection::kNone;
  bool operator==(const RelationAnnotation &) const = default;
};

struct AnnotationSet {
  std::vector<NounAnnotation> nouns;
  std::vector<CorefLink> coref_links;
  std::vector<RelationAnnotation> relations;
  bool operator==(const AnnotationSet &) const = default;
};

struct Sentence {
  int index = 0;  // 1-based
  std::string text;
  std::vector<std::string> tokens;
  bool operator==(const Sentence &) const = default;
};

struct RawScore {
  ScoreScheme scheme = ScoreScheme::kGcdc3;
  int score = 0;
  bool operator==(const RawScore &) const = default;
};

struct Document {
  std::string id;
  std::string domain_tag;
  std::vector<Sentence> sentences;
  // Mapped label. When the corpus carries a raw score, `raw_score` keeps it
  // and `label` holds its mapping.
  std::optional<CoherenceLabel> label;
  std::optional<RawScore> raw_score;
  AnnotationSet annotations;

  int num_sentences() const { return static_cast<int>(sentences.size()); }
  bool operator==(const Document &) const = default;
};

// Checks sentence numbering, annotation references, token spans and relation
// adjacency. Throws StructuralError on the first violation.
void validate_document(const Document &doc);

// Case-folded text of a mention: its tokens joined by single spaces.
std::string mention_text(const Document &doc, const Mention &m);

}  // namespace coh

#endif  // COH_DOMAIN_H_
