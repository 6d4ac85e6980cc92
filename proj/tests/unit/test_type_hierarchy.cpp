//  Copyright 2026 The hpsgkit Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "../support/glb_oracle.hpp"
#include "hpsg/tfs/type_hierarchy.hpp"

using namespace hpsg;
using Kind = HierarchyViolation::Kind;

namespace {

// The agreement portion of the fragment hierarchy, extended with 3pl.
HierarchyDefinition agreement_hierarchy() {
  HierarchyDefinition d;
  d.types = {{"*top*", {}},      {"png", {"*top*"}},   {"gender", {"png"}},
             {"masc", {"gender"}}, {"fem", {"gender"}}, {"neut", {"gender"}},
             {"pernum", {"png"}}, {"3sg", {"pernum"}},  {"3pl", {"pernum"}},
             {"string", {"*top*"}}};
  d.appropriateness = {{"png", "PERNUM", "pernum"}, {"png", "GEN", "gender"}};
  return d;
}

}  // namespace

TEST(TypeHierarchy, AgreementFragmentValidates) {
  EXPECT_TRUE(validate_hierarchy(agreement_hierarchy()).ok());
}

TEST(TypeHierarchy, GlbOfSiblingGendersIsIncompatible) {
  auto h = TypeHierarchy::build(agreement_hierarchy());
  EXPECT_FALSE(h.glb(h.id("fem"), h.id("masc")));
  EXPECT_EQ(h.glb(h.id("gender"), h.id("fem")), h.id("fem"));
  EXPECT_EQ(h.glb(h.id("fem"), h.id("gender")), h.id("fem"));
  for (std::uint32_t i = 0; i < h.size(); ++i) EXPECT_EQ(h.glb(TypeId{i}, TypeId{i}), TypeId{i});
}

TEST(TypeHierarchy, SubtypeOf) {
  auto h = TypeHierarchy::build(agreement_hierarchy());
  EXPECT_TRUE(h.subtype_of(h.id("fem"), h.id("gender")));
  EXPECT_FALSE(h.subtype_of(h.id("fem"), h.id("pernum")));
  EXPECT_TRUE(h.subtype_of(h.id("fem"), h.id("fem")));
  EXPECT_TRUE(h.subtype_of(h.id("3pl"), h.id("*top*")));
  EXPECT_FALSE(h.subtype_of(h.id("gender"), h.id("fem")));
}

TEST(TypeHierarchy, UnorderedCommonSubtypesAreReported) {
  HierarchyDefinition d;
  d.types = {{"*top*", {}}, {"a", {"*top*"}}, {"b", {"*top*"}}, {"c", {"a", "b"}}, {"d", {"a", "b"}}};
  auto report = validate_hierarchy(d);
  ASSERT_TRUE(report.has(Kind::not_bounded_complete));
  ASSERT_EQ(report.violations.size(), 1u);
  const auto& v = report.violations.front();
  EXPECT_EQ(v.types, (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_THROW(TypeHierarchy::build(d), InvalidHierarchy);
}

TEST(TypeHierarchy, SelfLoopIsACycle) {
  HierarchyDefinition d;
  d.types = {{"*top*", {}}, {"t", {"t"}}};
  auto report = validate_hierarchy(d);
  EXPECT_TRUE(report.has(Kind::cycle));
}

TEST(TypeHierarchy, LongerCycle) {
  HierarchyDefinition d;
  d.types = {{"*top*", {}}, {"a", {"c", "*top*"}}, {"b", {"a"}}, {"c", {"b"}}};
  EXPECT_TRUE(validate_hierarchy(d).has(Kind::cycle));
}

TEST(TypeHierarchy, MultipleRootsAndUnknownParents) {
  HierarchyDefinition d;
  d.types = {{"*top*", {}}, {"other", {}}, {"x", {"missing"}}};
  auto report = validate_hierarchy(d);
  EXPECT_TRUE(report.has(Kind::multiple_roots));
  EXPECT_TRUE(report.has(Kind::unknown_parent));
}

TEST(TypeHierarchy, DuplicateType) {
  HierarchyDefinition d;
  d.types = {{"*top*", {}}, {"a", {"*top*"}}, {"a", {"*top*"}}};
  EXPECT_TRUE(validate_hierarchy(d).has(Kind::duplicate_type));
}

TEST(TypeHierarchy, FeatureIntroducedTwiceIsAConflict) {
  auto d = agreement_hierarchy();
  d.appropriateness.push_back({"string", "GEN", "gender"});
  EXPECT_TRUE(validate_hierarchy(d).has(Kind::appropriateness_conflict));
}

TEST(TypeHierarchy, NarrowingMustStayCompatible) {
  auto d = agreement_hierarchy();
  d.types.push_back({"png-3pl", {"png"}});
  d.appropriateness.push_back({"png-3pl", "PERNUM", "3pl"});
  auto ok = TypeHierarchy::build(d);
  EXPECT_EQ(ok.value_restriction(ok.id("png"), ok.feature("PERNUM")), ok.id("pernum"));
  EXPECT_EQ(ok.value_restriction(ok.id("png-3pl"), ok.feature("PERNUM")), ok.id("3pl"));

  d.appropriateness.push_back({"png-3pl", "GEN", "3sg"});
  EXPECT_TRUE(validate_hierarchy(d).has(Kind::appropriateness_conflict));
}

TEST(TypeHierarchy, UnknownValueType) {
  auto d = agreement_hierarchy();
  d.appropriateness.push_back({"png", "CASE", "case"});
  EXPECT_TRUE(validate_hierarchy(d).has(Kind::unknown_value_type));
}

TEST(TypeHierarchy, FeaturesAreAlphabetical) {
  auto h = TypeHierarchy::build(agreement_hierarchy());
  EXPECT_LT(h.feature("GEN"), h.feature("PERNUM"));
  EXPECT_EQ(h.introduced_by(h.feature("GEN")), h.id("png"));
  EXPECT_TRUE(h.appropriate(h.id("png"), h.feature("GEN")));
  EXPECT_FALSE(h.appropriate(h.id("string"), h.feature("GEN")));
  EXPECT_THROW(h.feature("NOPE"), UnknownFeature);
  EXPECT_THROW(h.id("nope"), UnknownType);
}

TEST(TypeHierarchy, StringAtomsSitBelowString) {
  auto d = agreement_hierarchy();
  d.strings = {"persona", "famoso"};
  auto h = TypeHierarchy::build(d);
  TypeId p = h.id("\"persona\""), f = h.id("\"famoso\"");
  EXPECT_TRUE(h.is_string(p));
  EXPECT_TRUE(h.subtype_of(p, h.string_type()));
  EXPECT_TRUE(h.subtype_of(p, h.top()));
  EXPECT_FALSE(h.glb(p, f));
  EXPECT_EQ(h.glb(p, h.string_type()), p);
  EXPECT_EQ(h.glb(h.top(), p), p);
  EXPECT_FALSE(h.glb(p, h.id("png")));
}

// Random DAGs: the bitset glb table must agree with the brute-force oracle
// whenever validation accepts the hierarchy, and validation must reject
// exactly the hierarchies where the oracle finds a non-unique maximum.
TEST(TypeHierarchyProperty, GlbMatchesOracleOnRandomDags) {
  std::mt19937 rng(7);
  int accepted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    HierarchyDefinition d;
    int n = 3 + trial % 14;
    d.types.push_back({"t0", {}});
    for (int i = 1; i < n; ++i) {
      std::vector<std::string> parents;
      int np = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < np; ++k) {
        std::string p = "t" + std::to_string(rng() % static_cast<unsigned>(i));
        if (std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
      }
      d.types.push_back({"t" + std::to_string(i), parents});
    }
    testkit::GlbOracle oracle(d);
    bool oracle_bcpo = true;
    for (const auto& a : oracle.names())
      for (const auto& b : oracle.names()) {
        auto g = oracle.glb(a, b);
        if (g && g->empty()) oracle_bcpo = false;
      }
    auto report = validate_hierarchy(d);
    ASSERT_EQ(report.ok(), oracle_bcpo) << "trial " << trial;
    if (!report.ok()) continue;
    ++accepted;
    auto h = TypeHierarchy::build(d);
    for (const auto& a : oracle.names())
      for (const auto& b : oracle.names()) {
        auto expected = oracle.glb(a, b);
        auto got = h.glb(h.id(a), h.id(b));
        ASSERT_EQ(got.has_value(), expected.has_value()) << a << " " << b;
        if (got) ASSERT_EQ(h.name(*got), *expected) << a << " " << b;
        ASSERT_EQ(h.subtype_of(h.id(a), h.id(b)), oracle.below(a, b));
      }
  }
  EXPECT_GT(accepted, 50);
}
