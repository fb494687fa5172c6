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

#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "coh/errors.h"
#include "test_util.h"

namespace coh {
namespace {

TEST(Labels, OrderAndNames) {
  EXPECT_LT(CoherenceLabel::kLow, CoherenceLabel::kMedium);
  EXPECT_LT(CoherenceLabel::kMedium, CoherenceLabel::kHigh);
  for (CoherenceLabel l : kAllLabels) {
    EXPECT_EQ(parse_label(label_name(l)), l);
    EXPECT_EQ(label_from_index(label_index(l)), l);
  }
  EXPECT_THROW(parse_label("High"), DomainError);
  EXPECT_THROW(label_from_index(3), DomainError);
}

TEST(MapRawScore, Examples) {
  EXPECT_EQ(map_raw_score(ScoreScheme::kCohesentia5, 2), CoherenceLabel::kLow);
  EXPECT_EQ(map_raw_score(ScoreScheme::kCohesentia5, 5), CoherenceLabel::kHigh);
  EXPECT_EQ(map_raw_score(ScoreScheme::kGcdc3, 1), CoherenceLabel::kLow);
  EXPECT_THROW(map_raw_score(ScoreScheme::kGcdc3, 4), DomainError);
}

TEST(MapRawScore, FullTables) {
  const CoherenceLabel L = CoherenceLabel::kLow, M = CoherenceLabel::kMedium,
                       H = CoherenceLabel::kHigh;
  const std::vector<CoherenceLabel> gcdc = {L, M, H};
  const std::vector<CoherenceLabel> coh5 = {L, L, M, M, H};
  for (int s = 1; s <= 3; ++s) {
    EXPECT_EQ(map_raw_score(ScoreScheme::kGcdc3, s), gcdc[s - 1]);
  }
  for (int s = 1; s <= 5; ++s) {
    EXPECT_EQ(map_raw_score(ScoreScheme::kCohesentia5, s), coh5[s - 1]);
  }
}

TEST(MapRawScore, MonotoneAndRangeChecked) {
  for (ScoreScheme scheme : {ScoreScheme::kGcdc3, ScoreScheme::kCohesentia5}) {
    const int top = scheme == ScoreScheme::kGcdc3 ? 3 : 5;
    for (int s = 1; s < top; ++s) {
      EXPECT_LE(map_raw_score(scheme, s), map_raw_score(scheme, s + 1));
    }
    for (int bad : {-1, 0, top + 1, 100}) {
      try {
        map_raw_score(scheme, bad);
        ADD_FAILURE() << "no error for " << bad;
      } catch (const DomainError &e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find(std::string(scheme_name(scheme))),
                  std::string::npos);
        EXPECT_NE(msg.find(std::to_string(bad)), std::string::npos);
      }
    }
  }
}

TEST(Registry, SizesAndMembers) {
  const auto &r = load_registry();
  EXPECT_EQ(r.names(RelationKind::kExplicit).size(), 15u);
  EXPECT_EQ(r.names(RelationKind::kImplicit).size(), 15u);
  EXPECT_TRUE(r.contains("NoRel", RelationKind::kImplicit));
  EXPECT_FALSE(r.contains("NoRel", RelationKind::kExplicit));
  const std::vector<std::string> explicit_names = {
      "Asynchronous", "Cause",         "Concession",      "Condition",
      "Conjunction",  "Contrast",      "Disjunction",     "Instantiation",
      "Level-of-detail", "Manner",     "Negative-condition", "Purpose",
      "Similarity",   "Substitution",  "Synchronous"};
  EXPECT_EQ(r.names(RelationKind::kExplicit), explicit_names);
  for (RelationKind k : {RelationKind::kExplicit, RelationKind::kImplicit}) {
    const auto &names = r.names(k);
    EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(),
              names.size());
  }
}

TEST(Registry, Priors) {
  const auto &r = load_registry();
  EXPECT_DOUBLE_EQ(*r.prior({"Conjunction", RelationKind::kExplicit}), 0.3655);
  EXPECT_DOUBLE_EQ(*r.prior({"NoRel", RelationKind::kImplicit}), 0.0818);
  EXPECT_DOUBLE_EQ(*r.prior({"Cause", RelationKind::kImplicit}), 0.2423);
  EXPECT_FALSE(r.prior({"Bogus", RelationKind::kImplicit}).has_value());
  for (RelationKind k : {RelationKind::kExplicit, RelationKind::kImplicit}) {
    const auto &p = r.priors(k);
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    EXPECT_GE(sum, 0.99);
    EXPECT_LE(sum, 1.01);
  }
}

TEST(Registry, CaseInsensitiveLookupRoundTrips) {
  const auto &r = load_registry();
  EXPECT_EQ(r.find("level-of-detail", RelationKind::kExplicit).name,
            "Level-of-detail");
  EXPECT_EQ(r.find("NOREL", RelationKind::kImplicit).name, "NoRel");
  for (int i = 0; i < r.size(); ++i) {
    const RelationSense s = r.sense_at(i);
    EXPECT_EQ(r.index(s), i);
    EXPECT_EQ(r.find(casefold(s.name), s.kind), s);
  }
  try {
    r.find("Reason", RelationKind::kExplicit);
    ADD_FAILURE();
  } catch (const RegistryError &e) {
    EXPECT_NE(std::string(e.what()).find("Conjunction"), std::string::npos);
  }
  EXPECT_THROW(r.find("NoRel", RelationKind::kExplicit), RegistryError);
  EXPECT_THROW(r.sense_at(30), RegistryError);
}

TEST(Casefold, AsciiOnly) {
  EXPECT_EQ(casefold("John O'Neil"), "john o'neil");
  EXPECT_EQ(casefold("\xc3\x89t\xc3\xa9"), "\xc3\x89t\xc3\xa9");
}

TEST(ValidateDocument, AcceptsFixture) {
  EXPECT_NO_THROW(validate_document(testing::example_document()));
}

TEST(ValidateDocument, RejectsBrokenReferences) {
  const Document base = testing::example_document();
  {
    Document d = base;
    d.sentences[2].index = 7;
    EXPECT_THROW(validate_document(d), StructuralError);
  }
  {
    Document d = base;
    d.annotations.nouns.push_back({5, {0, 1}, "x"});
    EXPECT_THROW(validate_document(d), StructuralError);
  }
  {
    Document d = base;
    d.annotations.nouns.push_back({1, {8, 20}, "x"});
    EXPECT_THROW(validate_document(d), StructuralError);
  }
  {
    Document d = base;
    d.annotations.relations.push_back(
        {4, {"Conjunction", RelationKind::kImplicit}, CauseDirection::kNone});
    EXPECT_THROW(validate_document(d), StructuralError);
  }
  {
    Document d = base;
    d.annotations.coref_links.push_back({{1, {0, 1}}, {2, {3, 3}}});
    EXPECT_THROW(validate_document(d), StructuralError);
  }
}

TEST(MentionText, JoinsAndFolds) {
  const Document d = testing::example_document();
  EXPECT_EQ(mention_text(d, {1, {0, 2}}), "john missed");
}

}  // namespace
}  // namespace coh
