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

#include "../support/esfrag.hpp"
#include "../support/mrs_gen.hpp"
#include "hpsg/semantics/mrs.hpp"

using namespace hpsg;
using testkit::esfrag;
using testkit::parse_text;

namespace {

std::vector<Mrs> mrs_of(const Grammar& g, const std::string& text) {
  auto out = parse_text(g, text);
  std::vector<Mrs> ms;
  for (EdgeId root : out.forest.roots) ms.push_back(extract_mrs(g, out.forest.edges[root].fs));
  return ms;
}

Mrs only_mrs(const std::string& text) {
  auto ms = mrs_of(esfrag(), text);
  EXPECT_EQ(ms.size(), 1u) << text;
  return ms.at(0);
}

const ElementaryPredication& ep_named(const Mrs& m, const std::string& pred) {
  for (const auto& ep : m.eps)
    if (ep.predicate == pred) return ep;
  throw std::runtime_error("no EP " + pred);
}

SemVar var(char sort, int i) { return SemVar{sort, i, {}}; }

ElementaryPredication ep(std::string pred, SemVar lbl, std::map<std::string, SemVar> args) {
  return ElementaryPredication{std::move(pred), lbl, std::move(args)};
}

// [ _perro_n h1 x2 ] with a quantifier and a verb taking it as ARG1.
Mrs small_mrs() {
  Mrs m;
  m.top = var('h', 1);
  m.index = var('e', 3);
  m.eps = {ep("_el_q", var('h', 4), {{"ARG0", var('x', 2)}, {"RSTR", var('h', 5)}, {"BODY", var('h', 6)}}),
           ep("_perro_n", var('h', 7), {{"ARG0", var('x', 2)}}),
           ep("_dormir_v", var('h', 1), {{"ARG0", var('e', 3)}, {"ARG1", var('x', 2)}})};
  m.hcons = {{var('h', 5), var('h', 7), "qeq"}};
  return m;
}

const std::vector<std::string>& parsed_sentences() {
  static const std::vector<std::string> s = {
      "Mis abuelos son famosos.",          "Ellas hacen música juntas.",
      "Ellas cantan canciones famosas.",   "Duermen.",
      "Mis abuelos son personas famosos.", "El niño come.",
  };
  return s;
}

}  // namespace

TEST(Extract, PredicativeCopulaMatchesFixture) {
  auto m = only_mrs("Mis abuelos son famosos.");
  auto expected = read_mrs(testkit::read_file(testkit::fixtures_dir() / "ex5.mrs"));
  EXPECT_EQ(m, expected);
  EXPECT_TRUE(equivalent(m, expected));
  EXPECT_EQ(write_mrs(m), testkit::read_file(testkit::fixtures_dir() / "ex5.mrs"));
  const auto& cop = ep_named(m, "_ser_v_prd");
  EXPECT_TRUE(cop.arg("ARG1")->same(*ep_named(m, "_abuelo_n").arg("ARG0")));
  EXPECT_TRUE(ep_named(m, "_mi_q").quantifier());
  EXPECT_TRUE(m.index.same(*cop.arg("ARG0")));
}

TEST(Extract, DepictiveSharesArg1WithMainEvent) {
  auto m = only_mrs("Ellas hacen música juntas.");
  const auto& verb = ep_named(m, "_hacer_v");
  const auto& dep = ep_named(m, "_junto_a");
  EXPECT_TRUE(dep.arg("ARG1")->same(*verb.arg("ARG1")));
  EXPECT_FALSE(dep.arg("ARG1")->same(*verb.arg("ARG2")));
  EXPECT_EQ(dep.arg("ARG1")->properties.at("GEN"), "fem");
}

TEST(Extract, LexicalEdgeIsRejected) {
  auto out = parse_text(esfrag(), "Mis abuelos son famosos.");
  ASSERT_TRUE(out.forest.edges.at(0).is_lexical());
  EXPECT_THROW(extract_mrs(esfrag(), out.forest.edges[0].fs), std::invalid_argument);
}

TEST(Extract, VariablesNumberedFromOneWithSorts) {
  auto m = only_mrs("Duermen.");
  EXPECT_EQ(m.top.name(), "h1");
  EXPECT_EQ(m.index.name(), "e2");
  EXPECT_EQ(m.index.properties.at("TENSE"), "pres");
}

TEST(Wellformed, EveryParsedReading) {
  for (const auto& opts : std::vector<Options>{{}, {{"querer-ld", "on"}}}) {
    auto sentences = parsed_sentences();
    sentences.push_back("Mis amigos pueden venir si quieren.");
    for (const auto& s : sentences)
      for (const auto& m : mrs_of(esfrag(opts), s)) {
        auto r = check_wellformed(m);
        EXPECT_TRUE(r.ok()) << s << "\n" << write_mrs(m) << (r.ok() ? "" : r.violations[0]);
      }
  }
}

TEST(Wellformed, SmallMrsIsFine) { EXPECT_TRUE(check_wellformed(small_mrs()).ok()); }

TEST(Wellformed, DanglingQeqLo) {
  auto m = small_mrs();
  m.hcons[0].lo = var('h', 9);
  auto r = check_wellformed(m);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0], "dangling qeq lo h9");
}

TEST(Wellformed, DanglingInstanceVariable) {
  auto m = small_mrs();
  m.eps[2].args["ARG2"] = var('x', 8);
  auto r = check_wellformed(m);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].rfind("dangling instance variable x8", 0), 0u) << r.violations[0];
}

TEST(Wellformed, OtherViolations) {
  auto m = small_mrs();
  m.top = var('x', 2);
  m.eps[1].args.erase("ARG0");
  m.hcons.push_back({var('h', 7), var('h', 7), "qeq"});
  auto r = check_wellformed(m);
  EXPECT_GE(r.violations.size(), 3u);
}

TEST(Dmrs, PredicativeCopulaLinks) {
  auto d = to_dmrs(only_mrs("Mis abuelos son famosos."));
  ASSERT_EQ(d.nodes.size(), 4u);
  EXPECT_EQ(d.nodes[0].id, 10000);
  auto id_of = [&](const std::string& pred) {
    for (const auto& n : d.nodes)
      if (n.predicate == pred) return n.id;
    return -1;
  };
  auto has = [&](const std::string& from, const std::string& role, const std::string& to) {
    for (const auto& l : d.links)
      if (l.from == id_of(from) && l.to == id_of(to) && l.role + "/" + l.post == role) return true;
    return false;
  };
  EXPECT_TRUE(has("_mi_q", "RSTR/H", "_abuelo_n"));
  EXPECT_TRUE(has("_ser_v_prd", "ARG1/NEQ", "_abuelo_n"));
  EXPECT_TRUE(has("_ser_v_prd", "ARG2/NEQ", "_famoso_a"));
  EXPECT_EQ(d.top, id_of("_ser_v_prd"));
  auto text = write_dmrs(d);
  EXPECT_NE(text.find("link 10000 RSTR/H 10001\n"), std::string::npos) << text;
  EXPECT_EQ(text.rfind("top 10002\n", 0), 0u);
}

TEST(Dmrs, IntersectiveModifierIsEq) {
  auto ms = mrs_of(esfrag(), "Ellas cantan canciones famosas.");
  ASSERT_EQ(ms.size(), 2u);
  int eq_links = 0;
  for (const auto& m : ms)
    for (const auto& l : to_dmrs(m).links) eq_links += l.post == "EQ";
  EXPECT_EQ(eq_links, 1);
}

TEST(Dmrs, SingleEp) {
  Mrs m;
  m.top = var('h', 1);
  m.index = var('e', 2);
  m.eps = {ep("_llover_v", var('h', 1), {{"ARG0", var('e', 2)}})};
  auto d = to_dmrs(m);
  EXPECT_EQ(d.nodes.size(), 1u);
  EXPECT_TRUE(d.links.empty());
  EXPECT_EQ(d.top, 10000);
}

TEST(Dmrs, NodeCountEqualsEpCount) {
  for (const auto& s : parsed_sentences())
    for (const auto& m : mrs_of(esfrag(), s)) EXPECT_EQ(to_dmrs(m).nodes.size(), m.eps.size()) << s;
}

TEST(Canonical, InvariantUnderRenamingAndShuffling) {
  std::mt19937 rng(20240521);
  std::vector<Mrs> corpus = {small_mrs()};
  for (const auto& s : parsed_sentences())
    for (const auto& m : mrs_of(esfrag(), s)) corpus.push_back(m);
  for (const auto& m : corpus) {
    const auto c = canonicalize(m);
    for (int trial = 0; trial < 100; ++trial) {
      auto r = testkit::scramble(m, rng);
      ASSERT_EQ(canonicalize(r), c) << write_mrs(r);
      ASSERT_TRUE(equivalent(m, r));
    }
  }
}

TEST(Canonical, RepeatedCallsAreByteIdentical) {
  auto m = only_mrs("Ellas hacen música juntas.");
  EXPECT_EQ(canonicalize(m), canonicalize(m));
  EXPECT_EQ(canonicalize(m).find('\n'), std::string::npos);
}

TEST(Canonical, DistinguishesDifferentMrss) {
  auto m = small_mrs();
  auto other = m;
  other.eps[1].predicate = "_gato_n";
  EXPECT_NE(canonicalize(m), canonicalize(other));
  EXPECT_FALSE(equivalent(m, other));
  auto extra = m;
  extra.eps.push_back(ep("_grande_a", var('h', 7), {{"ARG0", var('e', 9)}, {"ARG1", var('x', 2)}}));
  EXPECT_FALSE(equivalent(m, extra));
  auto props = m;
  props.eps[1].args["ARG0"].properties["PERNUM"] = "3sg";
  EXPECT_FALSE(equivalent(m, props));
}

TEST(Canonical, AttachmentReadingsDiffer) {
  auto ms = mrs_of(esfrag(), "Ellas cantan canciones famosas.");
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_FALSE(equivalent(ms[0], ms[1]));
}

TEST(Canonical, EquivalenceIsAnEquivalenceRelation) {
  std::mt19937 rng(11);
  auto a = only_mrs("Mis abuelos son famosos.");
  auto b = testkit::scramble(a, rng);
  auto c = testkit::scramble(b, rng);
  EXPECT_TRUE(equivalent(a, a));
  EXPECT_EQ(equivalent(a, b), equivalent(b, a));
  EXPECT_TRUE(equivalent(a, b) && equivalent(b, c) && equivalent(a, c));
}

TEST(MrsText, RoundTripIsFixedPoint) {
  for (const auto& s : parsed_sentences())
    for (const auto& m : mrs_of(esfrag(), s)) {
      auto text = write_mrs(m);
      auto back = read_mrs(text);
      EXPECT_EQ(back, m) << text;
      EXPECT_EQ(write_mrs(back), text);
    }
  auto canon = read_mrs(canonicalize(small_mrs()));
  EXPECT_TRUE(equivalent(canon, small_mrs()));
}

TEST(MrsText, MalformedInputThrows) {
  EXPECT_THROW(read_mrs(""), MrsError);
  EXPECT_THROW(read_mrs("[ TOP: h1 INDEX: e2 RELS: < [ _a LBL: h1 ARG0: e2 ] HCONS: < > ]"), MrsError);
  EXPECT_THROW(read_mrs("[ TOP: h1 INDEX: e2 [ e TENSE: pres ] RELS: < [ _a LBL: h1 ARG0: e2 [ e TENSE: past ] ] > HCONS: < > ]"),
               MrsError);
}
