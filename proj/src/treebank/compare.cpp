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

#include <algorithm>
#include <set>

#include "hpsg/semantics/mrs.hpp"
#include "hpsg/treebank/treebank.hpp"

namespace hpsg {

namespace {

const std::vector<std::pair<Category, std::string_view>>& names() {
  static const std::vector<std::pair<Category, std::string_view>> n = {
      {Category::gold_preserved, "gold-preserved"},     {Category::gold_lost, "gold-lost"},
      {Category::coverage_gained, "coverage-gained"},   {Category::coverage_lost, "coverage-lost"},
      {Category::still_no_parse, "still-no-parse"},     {Category::reject_preserved, "reject-preserved"},
      {Category::reject_violated, "reject-violated"},   {Category::unverified, "unverified"},
  };
  return n;
}

bool parsed(const Profile& p, int id) {
  const ItemRun* r = p.item_run(id);
  return r && r->status == ParseStatus::parsed;
}

// Stored MRSs are canonical, but equivalence goes through the reader so that
// hand-edited profiles compare by meaning as well.
std::vector<Mrs> mrss(const Profile& p, int id) {
  std::vector<Mrs> out;
  for (const ResultRecord* r : p.results_for(id)) {
    try {
      out.push_back(read_mrs(r->mrs));
    } catch (const MrsError& e) {
      throw ProfileError("item " + std::to_string(id) + " reading " + std::to_string(r->reading_index) +
                         ": " + e.what());
    }
  }
  return out;
}

bool contains_equivalent(const std::vector<Mrs>& pool, const Mrs& m) {
  return std::any_of(pool.begin(), pool.end(), [&](const Mrs& x) { return equivalent(x, m); });
}

}  // namespace

std::string_view to_string(Category c) {
  for (const auto& [k, n] : names())
    if (k == c) return n;
  return "unverified";
}

std::optional<Category> parse_category(std::string_view s) {
  for (const auto& [k, n] : names())
    if (n == s) return k;
  return std::nullopt;
}

const std::vector<Category>& all_categories() {
  static const std::vector<Category> all = [] {
    std::vector<Category> v;
    for (const auto& [k, n] : names()) v.push_back(k);
    return v;
  }();
  return all;
}

bool ComparisonReport::regressed() const {
  auto count = [&](Category c) {
    auto it = counts.find(c);
    return it == counts.end() ? 0 : it->second;
  };
  return count(Category::gold_lost) > 0 || count(Category::reject_violated) > 0;
}

ComparisonReport compare_profiles(const Profile& gold, const Profile& fresh) {
  std::set<int> a, b;
  for (const auto& i : gold.items) a.insert(i.id);
  for (const auto& i : fresh.items) b.insert(i.id);
  if (a != b) throw ProfileError("profiles cover different item sets");
  for (const auto& i : gold.items)
    if (fresh.item(i.id)->text != i.text)
      throw ProfileError("item " + std::to_string(i.id) + " has different text in the two profiles");

  ComparisonReport report;
  for (Category c : all_categories()) report.counts[c] = 0;
  for (const auto& item : gold.items) {
    Verdict v = gold.verdict(item.id);
    Category c = Category::unverified;
    if (v.kind == VerdictKind::gold) {
      Mrs target = mrss(gold, item.id).at(v.reading);
      c = contains_equivalent(mrss(fresh, item.id), target) ? Category::gold_preserved : Category::gold_lost;
    } else if (v.kind == VerdictKind::reject_all) {
      auto rejected = mrss(gold, item.id);
      auto now = mrss(fresh, item.id);
      bool fresh_output = std::any_of(now.begin(), now.end(),
                                      [&](const Mrs& m) { return !contains_equivalent(rejected, m); });
      c = fresh_output ? Category::reject_violated : Category::reject_preserved;
    } else {
      bool before = parsed(gold, item.id), after = parsed(fresh, item.id);
      if (before && after)
        c = Category::unverified;
      else if (after)
        c = Category::coverage_gained;
      else if (before)
        c = Category::coverage_lost;
      else
        c = Category::still_no_parse;
    }
    report.entries.push_back({item.id, c});
    ++report.counts[c];
  }
  return report;
}

std::string write_report(const ComparisonReport& r) {
  std::string out;
  for (const auto& e : r.entries) out += std::to_string(e.item_id) + " " + std::string(to_string(e.category)) + "\n";
  for (Category c : all_categories()) {
    auto it = r.counts.find(c);
    out += std::string(to_string(c)) + " " + std::to_string(it == r.counts.end() ? 0 : it->second) + "\n";
  }
  return out;
}

}  // namespace hpsg
