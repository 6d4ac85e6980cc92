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

#include <algorithm>
#include <cstdlib>
#include <random>

#include "../support/profiles.hpp"
#include "hpsg/semantics/mrs.hpp"

using namespace hpsg;
using testkit::build_profile;

namespace {

const Profile& phenomena_gold() {
  static const Profile p = [] {
    Profile p = build_profile("phenomena.tsv");
    testkit::apply_decisions(p, "phenomena.decisions");
    return p;
  }();
  return p;
}

std::vector<Item> items_of(std::initializer_list<const char*> texts) {
  std::vector<Item> out;
  int id = 1;
  for (const char* t : texts) out.push_back({id++, t, 1, tokenize(t).size()});
  return out;
}

Profile profile_of(const std::vector<Item>& items, const Options& options = {}, const ParserLimits& limits = {}) {
  std::vector<ParseOutcome> outcomes;
  for (const auto& i : items) outcomes.push_back(testkit::parse_text(testkit::esfrag(options), i.text, limits));
  return create_profile(testkit::esfrag(options), items, outcomes, limits);
}

std::string strip_timestamp(std::string line) {
  auto pos = line.find("\"annotator\"");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

TEST(Suite, ParseItemsAndLengths) {
  auto s = parse_suite("# header\n1\t1\tMis abuelos son famosos.\n\n7\t0\tLa niño duerme.\n");
  auto items = s.items();
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0], (Item{1, "Mis abuelos son famosos.", 1, 5}));
  EXPECT_EQ(items[1].id, 7);
  EXPECT_EQ(items[1].wf, 0);
  EXPECT_EQ(items[1].length, 4u);
}

TEST(Suite, RoundTripIsByteIdentical) {
  for (const char* f : {"phenomena.tsv", "learner.tsv"}) {
    auto text = testkit::read_file(testkit::fixtures_dir() / f);
    EXPECT_EQ(write_suite(parse_suite(text)), text) << f;
  }
  for (const char* text : {"", "1\t1\tSin salto final.", "# only a comment\n", "\n\n2\t0\t x \n"})
    EXPECT_EQ(write_suite(parse_suite(text)), text);
}

TEST(Suite, Errors) {
  auto line_of = [](const char* text) {
    try {
      parse_suite(text);
    } catch (const SuiteError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("1\t1\ta\n1\t0\tb\n"), 2);
  EXPECT_EQ(line_of("1\t2\ta\n"), 1);
  EXPECT_EQ(line_of("# c\nx\t1\ta\n"), 2);
  EXPECT_EQ(line_of("01\t1\ta\n"), 1);
  EXPECT_EQ(line_of("1\t1\n"), 1);
  EXPECT_EQ(line_of("1\t1\ta\r\n"), 1);
  EXPECT_EQ(line_of("1\t1\t \n"), 1);
  EXPECT_THROW(load_suite("/nonexistent/suite.tsv"), std::runtime_error);
}

TEST(Profile, CreateCountsReadingsAndDecisions) {
  auto items = items_of({"Duermen.", "Mis abuelos es famosos.", "Ellas cantan canciones famosas."});
  Profile p = profile_of(items);
  EXPECT_EQ(p.results_for(1).size(), 1u);
  EXPECT_EQ(p.results_for(2).size(), 0u);
  EXPECT_EQ(p.results_for(3).size(), 2u);
  EXPECT_EQ(p.results.size(), 3u);
  ASSERT_EQ(p.decisions.size(), 3u);
  for (const auto& d : p.decisions) {
    EXPECT_EQ(d.verdict, Verdict::unverified());
    EXPECT_EQ(d.timestamp, kEpoch);
  }
  EXPECT_EQ(p.item_run(2)->status, ParseStatus::no_parse);
  EXPECT_EQ(p.run.grammar_version, testkit::esfrag().version());
  auto mrs = read_mrs(p.results_for(1)[0]->mrs);
  EXPECT_EQ(canonicalize(mrs), p.results_for(1)[0]->mrs);
}

TEST(Profile, ResourceLimitAndCapAreRecorded) {
  ParserLimits tiny;
  tiny.max_edges = 1;
  Profile p = profile_of(items_of({"Duermen."}), {}, tiny);
  EXPECT_EQ(p.item_run(1)->status, ParseStatus::resource_limit);
  EXPECT_TRUE(p.results.empty());
  EXPECT_EQ(p.run.limits.max_edges, 1u);

  ParserLimits capped;
  capped.max_readings = 1;
  Profile c = profile_of(items_of({"Ellas cantan canciones famosas."}), {}, capped);
  EXPECT_EQ(c.results.size(), 1u);
  EXPECT_EQ(c.item_run(1)->readings, 2u);
  EXPECT_TRUE(c.item_run(1)->truncated);
}

TEST(Profile, EmptyAndInvalidInputs) {
  Profile empty = create_profile(testkit::esfrag(), {}, {}, {});
  EXPECT_TRUE(empty.items.empty());
  EXPECT_TRUE(empty.decisions.empty());
  testkit::TempDir dir;
  write_profile(dir / "p", empty);
  EXPECT_TRUE(read_profile(dir / "p").items.empty());

  auto dup = items_of({"Duermen.", "Duermen."});
  dup[1].id = 1;
  std::vector<ParseOutcome> two(2);
  EXPECT_THROW(create_profile(testkit::esfrag(), dup, two, {}), ProfileError);
  EXPECT_THROW(create_profile(testkit::esfrag(), items_of({"Duermen."}), {}, {}), ProfileError);
}

TEST(Decisions, GoldRejectAndErrors) {
  Profile p = profile_of(items_of({"Duermen.", "Mis abuelos son personas famosos.", "Ellas cantan canciones famosas."}));
  EXPECT_TRUE(record_decision(p, 1, Verdict::gold(0), "ana"));
  EXPECT_EQ(p.verdict(1), Verdict::gold(0));
  EXPECT_TRUE(record_decision(p, 2, Verdict::reject_all(), "ana"));
  EXPECT_EQ(p.verdict(2), Verdict::reject_all());
  EXPECT_THROW(record_decision(p, 3, Verdict::gold(5), "ana"), ProfileError);
  EXPECT_THROW(record_decision(p, 9, Verdict::reject_all(), "ana"), ProfileError);
  auto before = p.decisions.size();
  EXPECT_FALSE(record_decision(p, 1, Verdict::gold(0), "other"));
  EXPECT_EQ(p.decisions.size(), before);
  EXPECT_TRUE(record_decision(p, 3, Verdict::gold(1), "ana"));
  EXPECT_TRUE(record_decision(p, 3, Verdict::gold(0), "ana"));
  EXPECT_EQ(p.verdict(3), Verdict::gold(0));
  EXPECT_EQ(Verdict::gold(2).to_string(), "gold(2)");
}

TEST(Decisions, ReplayOrderInsensitiveAcrossItemsLatestWinsWithin) {
  const Profile base = phenomena_gold();
  std::mt19937 rng(99);
  std::vector<int> ids;
  for (const auto& i : base.items) ids.push_back(i.id);
  for (int trial = 0; trial < 50; ++trial) {
    // One random verdict per item, applied in two different item orders.
    std::vector<std::pair<int, Verdict>> log;
    for (int id : ids) {
      auto n = base.results_for(id).size();
      Verdict v = rng() % 3 == 0 ? Verdict::reject_all() : n ? Verdict::gold(rng() % n) : Verdict::unverified();
      log.emplace_back(id, v);
    }
    Profile a = base, b = base;
    for (const auto& [id, v] : log) record_decision(a, id, v, "x");
    std::shuffle(log.begin(), log.end(), rng);
    for (const auto& [id, v] : log) record_decision(b, id, v, "x");
    for (int id : ids) EXPECT_EQ(a.verdict(id), b.verdict(id));
    // A second verdict for one item replaces the first.
    int id = ids[rng() % ids.size()];
    record_decision(a, id, Verdict::reject_all(), "x");
    EXPECT_EQ(a.verdict(id), Verdict::reject_all());
  }
}

TEST(ProfileFiles, RoundTripAndFieldNames) {
  testkit::TempDir dir;
  const Profile& p = phenomena_gold();
  write_profile(dir / "p", p);
  Profile back = read_profile(dir / "p");
  EXPECT_EQ(back.items, p.items);
  EXPECT_EQ(back.results, p.results);
  EXPECT_EQ(back.decisions, p.decisions);
  EXPECT_EQ(back.run.items, p.run.items);
  EXPECT_EQ(run_json(back.run), run_json(p.run));
  testkit::TempDir again;
  write_profile(again / "p", back);
  for (const char* f : {"items.jsonl", "results.jsonl", "decisions.jsonl", "run.json"})
    EXPECT_EQ(testkit::read_file(again / "p" / f), testkit::read_file(dir / "p" / f)) << f;

  auto first_line = [&](const char* f) {
    auto text = testkit::read_file(dir / "p" / f);
    return text.substr(0, text.find('\n'));
  };
  EXPECT_EQ(first_line("items.jsonl"), R"({"id":1,"text":"Mis abuelos son famosos.","wf":1,"length":5})");
  EXPECT_EQ(first_line("results.jsonl").rfind(R"({"item-id":1,"reading-index":0,"derivation":"(clause-punct)", 0), 0u);
  EXPECT_EQ(first_line("decisions.jsonl"),
            R"({"item-id":1,"verdict":"unverified","annotator":"grammarctl","timestamp":"1970-01-01T00:00:00Z"})");
  EXPECT_NE(testkit::read_file(dir / "p" / "decisions.jsonl").find(R"({"item-id":32,"verdict":"gold","reading-index":1,"annotator":"fixture")"),
            std::string::npos);
}

TEST(ProfileFiles, WriteRefusesExistingDirectoryAndReadChecksIntegrity) {
  testkit::TempDir dir;
  const Profile& p = phenomena_gold();
  write_profile(dir / "p", p);
  EXPECT_THROW(write_profile(dir / "p", p), ProfileError);
  EXPECT_NO_THROW(write_profile(dir / "p", p, true));
  EXPECT_THROW(read_profile(dir / "missing"), ProfileError);

  auto decisions = testkit::read_file(dir / "p" / "decisions.jsonl");
  testkit::write_file(dir / "p" / "decisions.jsonl",
                      decisions + R"({"item-id":1,"verdict":"gold","reading-index":7,"annotator":"x","timestamp":"t"})" + "\n");
  EXPECT_THROW(read_profile(dir / "p"), ProfileError);
  testkit::write_file(dir / "p" / "decisions.jsonl", decisions + "{not json\n");
  EXPECT_THROW(read_profile(dir / "p"), ProfileError);
}

TEST(ProfileFiles, ShippedProfilesMatchRegeneration) {
  for (const auto& [suite, decisions, dir] :
       std::vector<std::tuple<std::string, std::string, std::string>>{
           {"phenomena.tsv", "phenomena.decisions", "phenomena-gold"}, {"learner.tsv", "learner.decisions", "learner"}}) {
    Profile p = build_profile(suite);
    testkit::apply_decisions(p, decisions);
    auto shipped = testkit::fixtures_dir() / "profiles" / dir;
    Profile s = read_profile(shipped);
    EXPECT_EQ(s.items, p.items) << dir;
    EXPECT_EQ(s.results, p.results) << dir;
    ASSERT_EQ(s.decisions.size(), p.decisions.size()) << dir;
    for (std::size_t i = 0; i < s.decisions.size(); ++i) {
      EXPECT_EQ(s.decisions[i].item_id, p.decisions[i].item_id);
      EXPECT_EQ(s.decisions[i].verdict, p.decisions[i].verdict);
    }
    EXPECT_EQ(s.run.grammar_version, p.run.grammar_version) << dir;
    for (std::size_t i = 0; i < s.run.items.size(); ++i) {
      EXPECT_EQ(s.run.items[i].status, p.run.items[i].status);
      EXPECT_EQ(s.run.items[i].readings, p.run.items[i].readings);
      EXPECT_EQ(s.run.items[i].edges, p.run.items[i].edges);
    }
  }
}

TEST(Lock, SecondWriterTimesOut) {
  testkit::TempDir dir;
  write_profile(dir / "p", phenomena_gold());
  ::setenv("GRAMMARCTL_PROFILE_LOCK_TIMEOUT", "0.2", 1);
  {
    ProfileLock held(dir / "p");
    auto start = std::chrono::steady_clock::now();
    EXPECT_THROW(ProfileLock(dir / "p"), LockTimeout);
    EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(150));
    EXPECT_THROW(decide(dir / "p", 1, Verdict::gold(0), "x"), LockTimeout);
  }
  EXPECT_NO_THROW(ProfileLock(dir / "p"));
  ::unsetenv("GRAMMARCTL_PROFILE_LOCK_TIMEOUT");
}

TEST(Decide, AppendsOneLineAndIsIdempotent) {
  testkit::TempDir dir;
  write_profile(dir / "p", profile_of(items_of({"Duermen.", "Ellas cantan canciones famosas."})));
  auto before = testkit::read_file(dir / "p" / "decisions.jsonl");
  Decision d = decide(dir / "p", 2, Verdict::gold(1), "ana");
  EXPECT_EQ(d.annotator, "ana");
  auto after = testkit::read_file(dir / "p" / "decisions.jsonl");
  EXPECT_EQ(after, before + decision_line(d) + "\n");
  decide(dir / "p", 2, Verdict::gold(1), "ana");
  EXPECT_EQ(testkit::read_file(dir / "p" / "decisions.jsonl"), after);
  EXPECT_EQ(read_profile(dir / "p").verdict(2), Verdict::gold(1));
  EXPECT_THROW(decide(dir / "p", 2, Verdict::gold(2), "ana"), ProfileError);
  EXPECT_EQ(testkit::read_file(dir / "p" / "decisions.jsonl"), after);
  EXPECT_EQ(strip_timestamp(decision_line(d)), R"({"item-id":2,"verdict":"gold","reading-index":1,)");
}

TEST(Compare, IdenticalGoldProfilesPreserveEverything) {
  Profile p = profile_of(items_of({"Duermen.", "Mis abuelos son famosos.", "Ellas cantan canciones famosas."}));
  record_decision(p, 1, Verdict::gold(0), "x");
  record_decision(p, 2, Verdict::gold(0), "x");
  record_decision(p, 3, Verdict::gold(1), "x");
  auto r = compare_profiles(p, p);
  EXPECT_EQ(r.counts[Category::gold_preserved], 3u);
  EXPECT_FALSE(r.regressed());
}

TEST(Compare, DepictiveOffAgainstGoldMatchesExpectationFile) {
  Profile fresh = build_profile("phenomena.tsv", {{"depictive", "off"}});
  auto r = compare_profiles(phenomena_gold(), fresh);
  auto expected = testkit::load_table(testkit::fixtures_dir() / "phenomena.regression");
  ASSERT_EQ(r.entries.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(std::to_string(r.entries[i].item_id), expected[i][0]);
    EXPECT_EQ(to_string(r.entries[i].category), expected[i][1]) << "item " << expected[i][0];
  }
  EXPECT_TRUE(r.regressed());
  EXPECT_EQ(r.counts[Category::gold_lost], 3u);
}

TEST(Compare, RejectedItemThatStartsParsingIsViolated) {
  // Gold built without the depictive rule rejects the agreement-clash item;
  // switching the rule on produces a reading nobody has rejected yet.
  auto items = items_of({"Mis abuelos son personas famosos.", "Mis abuelos son famosos."});
  Profile gold = profile_of(items, {{"depictive", "off"}});
  record_decision(gold, 1, Verdict::reject_all(), "x");
  record_decision(gold, 2, Verdict::gold(0), "x");
  Profile fresh = profile_of(items);
  auto r = compare_profiles(gold, fresh);
  EXPECT_EQ(r.entries[0].category, Category::reject_violated);
  EXPECT_EQ(r.entries[1].category, Category::gold_preserved);
  EXPECT_TRUE(r.regressed());
  // Once the new profile is the reference, rejecting it again is stable.
  record_decision(fresh, 1, Verdict::reject_all(), "x");
  EXPECT_EQ(compare_profiles(fresh, fresh).entries[0].category, Category::reject_preserved);
  EXPECT_EQ(compare_profiles(fresh, gold).entries[0].category, Category::reject_preserved);
}

TEST(Compare, CoverageCategories) {
  auto items = items_of({"Ellas hacen música juntas.", "Duermen.", "Mis abuelos es famosos."});
  Profile off = profile_of(items, {{"depictive", "off"}});
  Profile on = profile_of(items);
  auto r = compare_profiles(off, on);
  EXPECT_EQ(r.entries[0].category, Category::coverage_gained);
  EXPECT_EQ(r.entries[1].category, Category::unverified);
  EXPECT_EQ(r.entries[2].category, Category::still_no_parse);
  EXPECT_EQ(compare_profiles(on, off).entries[0].category, Category::coverage_lost);
  EXPECT_FALSE(r.regressed());
}

TEST(Compare, SelfComparisonNeverRegresses) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Profile p = phenomena_gold();
    for (const auto& i : p.items) {
      auto n = p.results_for(i.id).size();
      switch (rng() % 3) {
        case 0:
          if (n) record_decision(p, i.id, Verdict::gold(rng() % n), "x");
          break;
        case 1:
          record_decision(p, i.id, Verdict::reject_all(), "x");
          break;
        default:
          record_decision(p, i.id, Verdict::unverified(), "x");
      }
    }
    auto r = compare_profiles(p, p);
    for (const auto& e : r.entries) {
      EXPECT_NE(e.category, Category::gold_lost);
      EXPECT_NE(e.category, Category::reject_violated);
      EXPECT_NE(e.category, Category::coverage_gained);
      EXPECT_NE(e.category, Category::coverage_lost);
    }
    std::size_t total = 0;
    for (const auto& [c, n] : r.counts) total += n;
    EXPECT_EQ(total, p.items.size());
  }
}

TEST(Compare, MismatchedItemsAreErrors) {
  Profile a = profile_of(items_of({"Duermen.", "Ella vive."}));
  Profile edited = a;
  edited.items[1].text = "Ella baila.";
  EXPECT_THROW(compare_profiles(a, edited), ProfileError);
  Profile fewer = profile_of(items_of({"Duermen."}));
  EXPECT_THROW(compare_profiles(a, fewer), ProfileError);
}

TEST(Compare, ReportText) {
  Profile p = profile_of(items_of({"Duermen."}));
  record_decision(p, 1, Verdict::gold(0), "x");
  EXPECT_EQ(write_report(compare_profiles(p, p)),
            "1 gold-preserved\ngold-preserved 1\ngold-lost 0\ncoverage-gained 0\ncoverage-lost 0\n"
            "still-no-parse 0\nreject-preserved 0\nreject-violated 0\nunverified 0\n");
  for (Category c : all_categories()) EXPECT_EQ(parse_category(to_string(c)), c);
}
