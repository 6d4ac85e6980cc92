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

#include "../support/random_fs.hpp"
#include "hpsg/tfs/unify.hpp"

using namespace hpsg;

namespace {

HierarchyDefinition definition() {
  HierarchyDefinition d;
  d.types = {{"*top*", {}},        {"png", {"*top*"}},   {"gender", {"png"}},
             {"masc", {"gender"}}, {"fem", {"gender"}},  {"neut", {"gender"}},
             {"pernum", {"png"}},  {"3sg", {"pernum"}},  {"3pl", {"pernum"}},
             {"sign", {"*top*"}},  {"string", {"*top*"}}, {"a", {"*top*"}}, {"b", {"*top*"}},
             {"ab", {"a", "b"}}};
  d.appropriateness = {{"png", "PERNUM", "pernum"}, {"png", "GEN", "gender"},
                       {"sign", "PNG", "png"},       {"*top*", "F", "*top*"},
                       {"*top*", "G", "*top*"}};
  return d;
}

const TypeHierarchy& hier() {
  static const TypeHierarchy h = TypeHierarchy::build(definition());
  return h;
}

// [PNG [PERNUM pernum, GEN gen]]
FeatureStructure sign_with(const std::string& pernum, const std::string& gen) {
  const auto& h = hier();
  FsBuilder b;
  NodeId root = b.add_node(h.id("sign"));
  NodeId png = b.add_node(h.id("png"));
  b.set_arc(root, h.feature("PNG"), png);
  b.set_arc(png, h.feature("PERNUM"), b.add_node(h.id(pernum)));
  b.set_arc(png, h.feature("GEN"), b.add_node(h.id(gen)));
  return b.build(root);
}

}  // namespace

TEST(Unify, GenderClashReportsPathAndTypes) {
  const auto& h = hier();
  auto adj_target = sign_with("3pl", "masc");
  auto noun = sign_with("3pl", "fem");
  auto r = unify(h, adj_target, noun);
  ASSERT_FALSE(r);
  EXPECT_EQ(to_string(h, r.failure().path), "PNG.GEN");
  EXPECT_EQ(r.failure().left, h.id("masc"));
  EXPECT_EQ(r.failure().right, h.id("fem"));
  EXPECT_FALSE(r.failure().cyclic);
  EXPECT_EQ(r.failure().describe(h), "type clash at PNG.GEN: masc vs fem");
}

TEST(Unify, ReentrancyPropagates) {
  const auto& h = hier();
  FsBuilder b1;
  NodeId r1 = b1.add_node(h.top());
  NodeId shared = b1.add_node(h.top());
  b1.set_arc(r1, h.feature("F"), shared);
  b1.set_arc(r1, h.feature("G"), shared);
  FsBuilder b2;
  NodeId r2 = b2.add_node(h.top());
  b2.set_arc(r2, h.feature("F"), b2.add_node(h.id("a")));
  auto r = unify(h, b1.build(r1), b2.build(r2));
  ASSERT_TRUE(r);
  auto g = r.value().follow(FeaturePath{h.feature("G")});
  ASSERT_TRUE(g);
  EXPECT_EQ(r.value().type(*g), h.id("a"));
  EXPECT_EQ(r.value().follow(FeaturePath{h.feature("F")}), g);
}

TEST(Unify, TopIsIdentity) {
  const auto& h = hier();
  auto f = sign_with("3sg", "fem");
  auto r = unify(h, f, FeatureStructure::atom(h.top()));
  ASSERT_TRUE(r);
  EXPECT_TRUE(isomorphic(r.value(), f));
}

TEST(Unify, CycleIsAFailure) {
  const auto& h = hier();
  // [F #1, G #1]  unified with  [F [G top]] where the inner G points back is
  // not expressible; build [F #1 & [F #2], G #2] vs [F #3, G #3 & ...] instead.
  FsBuilder b1;
  NodeId r1 = b1.add_node(h.top());
  NodeId x = b1.add_node(h.top());
  NodeId y = b1.add_node(h.top());
  b1.set_arc(r1, h.feature("F"), x);
  b1.set_arc(x, h.feature("F"), y);
  b1.set_arc(r1, h.feature("G"), y);
  FsBuilder b2;
  NodeId r2 = b2.add_node(h.top());
  NodeId z = b2.add_node(h.top());
  b2.set_arc(r2, h.feature("F"), z);
  b2.set_arc(r2, h.feature("G"), z);
  // F = G forces x = y, and x.F = y, so y.F = y.
  auto r = unify(h, b1.build(r1), b2.build(r2));
  ASSERT_FALSE(r);
  EXPECT_TRUE(r.failure().cyclic);
}

TEST(Unify, UnifyAtTargetsASubstructure) {
  const auto& h = hier();
  FsBuilder b;
  NodeId root = b.add_node(h.top());
  b.set_arc(root, h.feature("F"), b.add_node(h.id("sign")));
  auto outer = b.build(root);
  auto r = unify_at(h, outer, {h.feature("F")}, sign_with("3pl", "fem"));
  ASSERT_TRUE(r);
  auto gen = r.value().follow(parse_path(h, "F.PNG.GEN"));
  ASSERT_TRUE(gen);
  EXPECT_EQ(r.value().type(*gen), h.id("fem"));

  auto clash = unify_at(h, r.value(), {h.feature("F")}, sign_with("3pl", "masc"));
  ASSERT_FALSE(clash);
  EXPECT_EQ(to_string(h, clash.failure().path), "F.PNG.GEN");
  EXPECT_THROW(unify_at(h, outer, {h.feature("G")}, outer), std::invalid_argument);
}

TEST(Subsumes, Examples) {
  const auto& h = hier();
  FsBuilder b;
  NodeId root = b.add_node(h.top());
  b.set_arc(root, h.feature("PNG"), b.add_node(h.id("png")));
  auto general = b.build(root);
  EXPECT_TRUE(subsumes(h, general, sign_with("3pl", "fem")));
  EXPECT_FALSE(subsumes(h, sign_with("3pl", "fem"), general));
  EXPECT_FALSE(subsumes(h, sign_with("3pl", "fem"), sign_with("3pl", "masc")));
  EXPECT_TRUE(subsumes(h, sign_with("3pl", "fem"), sign_with("3pl", "fem")));
}

TEST(Isomorphic, ReentrancyIsInformation) {
  const auto& h = hier();
  FsBuilder shared;
  NodeId r = shared.add_node(h.top());
  NodeId x = shared.add_node(h.id("a"));
  shared.set_arc(r, h.feature("F"), x);
  shared.set_arc(r, h.feature("G"), x);
  FsBuilder apart;
  NodeId r2 = apart.add_node(h.top());
  apart.set_arc(r2, h.feature("G"), apart.add_node(h.id("a")));
  apart.set_arc(r2, h.feature("F"), apart.add_node(h.id("a")));
  EXPECT_FALSE(isomorphic(shared.build(r), apart.build(r2)));
  EXPECT_TRUE(subsumes(h, apart.build(r2), shared.build(r)));
  EXPECT_FALSE(subsumes(h, shared.build(r), apart.build(r2)));

  // Same graph assembled in a different node order.
  FsBuilder renamed;
  NodeId y = renamed.add_node(h.id("a"));
  NodeId r3 = renamed.add_node(h.top());
  renamed.set_arc(r3, h.feature("G"), y);
  renamed.set_arc(r3, h.feature("F"), y);
  EXPECT_TRUE(isomorphic(shared.build(r), renamed.build(r3)));

  FsBuilder other;
  NodeId r4 = other.add_node(h.top());
  other.set_arc(r4, h.feature("F"), other.add_node(h.id("b")));
  FsBuilder other2;
  NodeId r5 = other2.add_node(h.top());
  other2.set_arc(r5, h.feature("F"), other2.add_node(h.id("a")));
  EXPECT_FALSE(isomorphic(other.build(r4), other2.build(r5)));
}

TEST(FeatureStructure, BuilderRejectsCycles) {
  const auto& h = hier();
  FsBuilder b;
  NodeId r = b.add_node(h.top());
  b.set_arc(r, h.feature("F"), r);
  EXPECT_THROW(b.build(r), MalformedStructure);
  FsBuilder dangling;
  NodeId d = dangling.add_node(h.top());
  dangling.set_arc(d, h.feature("F"), 7);
  EXPECT_THROW(dangling.build(d), MalformedStructure);
}

TEST(FeatureStructure, AvmTagsInFirstVisitOrder) {
  const auto& h = hier();
  FsBuilder b;
  NodeId r = b.add_node(h.id("sign"));
  NodeId png = b.add_node(h.id("png"));
  b.set_arc(r, h.feature("PNG"), png);
  b.set_arc(r, h.feature("F"), png);
  b.set_arc(png, h.feature("GEN"), b.add_node(h.id("masc")));
  auto fs = b.build(r);
  EXPECT_EQ(write_avm(h, fs), "sign\n  F: #0 png\n    GEN: masc\n  PNG: #0\n");
  EXPECT_EQ(write_tdl(h, fs), "sign & [ F #0 & png & [ GEN masc ], PNG #0 ]");
}

TEST(FeatureStructure, AppropriatenessAndInference) {
  const auto& h = hier();
  FsBuilder b;
  NodeId r = b.add_node(h.top());
  b.set_arc(r, h.feature("PNG"), b.add_node(h.top()));
  auto fs = b.build(r);
  EXPECT_TRUE(check_appropriateness(h, fs).has_value());
  auto inferred = infer_types(h, fs);
  ASSERT_TRUE(inferred);
  EXPECT_EQ(inferred->type(0), h.id("sign"));
  EXPECT_EQ(inferred->type(1), h.id("png"));
  EXPECT_FALSE(check_appropriateness(h, *inferred).has_value());

  FsBuilder bad;
  NodeId r2 = bad.add_node(h.id("png"));
  bad.set_arc(r2, h.feature("PNG"), bad.add_node(h.top()));
  std::string error;
  EXPECT_FALSE(infer_types(h, bad.build(r2), &error));
  EXPECT_NE(error.find("PNG"), std::string::npos);
}

// Algebraic laws over random structures of the small hierarchy above. The
// acceptance binary repeats this over the fragment grammar's hierarchy.
TEST(UnifyProperty, AlgebraOnRandomPairs) {
  const auto& h = hier();
  testkit::FsVocabulary vocab;
  for (std::uint32_t i = 0; i < h.size(); ++i) vocab.types.push_back(TypeId{i});
  for (std::uint32_t i = 0; i < h.feature_count(); ++i) vocab.features.push_back(FeatureId{i});
  std::mt19937 rng(11);
  int successes = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = testkit::random_fs(rng, vocab, 6);
    auto b = testkit::random_fs(rng, vocab, 6);
    std::string a_before = write_tdl(h, a), b_before = write_tdl(h, b);
    auto ab = unify(h, a, b);
    auto ba = unify(h, b, a);
    ASSERT_EQ(ab.ok(), ba.ok()) << write_tdl(h, a) << " / " << write_tdl(h, b);
    ASSERT_EQ(write_tdl(h, a), a_before);
    ASSERT_EQ(write_tdl(h, b), b_before);
    auto aa = unify(h, a, a);
    ASSERT_TRUE(aa);
    ASSERT_TRUE(isomorphic(aa.value(), a));
    if (!ab) continue;
    ++successes;
    ASSERT_TRUE(isomorphic(ab.value(), ba.value()));
    ASSERT_TRUE(subsumes(h, a, ab.value()));
    ASSERT_TRUE(subsumes(h, b, ab.value()));
  }
  EXPECT_GT(successes, 200);
}
