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

#include "views.hpp"

namespace hpsg::views {

json verdict(const Verdict& v) {
  json j;
  switch (v.kind) {
    case VerdictKind::gold:
      j["verdict"] = "gold";
      j["reading-index"] = v.reading;
      break;
    case VerdictKind::reject_all:
      j["verdict"] = "reject-all";
      break;
    case VerdictKind::unverified:
      j["verdict"] = "unverified";
      break;
  }
  return j;
}

json item(const Profile& p, const Item& it) {
  json j;
  j["id"] = it.id;
  j["text"] = it.text;
  j["wf"] = it.wf;
  j["length"] = it.length;
  const ItemRun* run = p.item_run(it.id);
  j["status"] = run ? std::string(to_string(run->status)) : "no-parse";
  j["readings"] = p.results_for(it.id).size();
  j["decision"] = verdict(p.verdict(it.id));
  return j;
}

json tree(const DerivationTree& t) {
  json j;
  j["label"] = t.label;
  if (t.lexical()) {
    j["surface"] = t.surface;
    j["lemma"] = t.lemma;
    j["tag"] = t.tag;
  } else {
    j["children"] = json::array();
    for (const auto& c : t.children) j["children"].push_back(tree(c));
  }
  return j;
}

json dmrs(const Dmrs& d) {
  json j;
  j["top"] = d.top;
  j["nodes"] = json::array();
  for (const auto& n : d.nodes) {
    json props = json::object();
    for (const auto& [k, v] : n.properties) props[k] = v;
    j["nodes"].push_back({{"id", n.id}, {"predicate", n.predicate}, {"sort", std::string(1, n.sort)}, {"properties", props}});
  }
  j["links"] = json::array();
  for (const auto& l : d.links)
    j["links"].push_back({{"from", l.from}, {"to", l.to}, {"role", l.role}, {"post", l.post}});
  return j;
}

json reading(const Profile& p, int id, std::size_t k) {
  auto results = p.results_for(id);
  if (k >= results.size()) throw std::out_of_range("no reading " + std::to_string(k) + " for item " + std::to_string(id));
  const ResultRecord& r = *results[k];
  Mrs m = read_mrs(r.mrs);
  json j;
  j["item-id"] = id;
  j["reading-index"] = k;
  j["derivation"] = r.derivation;
  j["tree"] = tree(parse_derivation(r.derivation));
  j["mrs"] = write_mrs(m);
  j["canonical-mrs"] = r.mrs;
  j["dmrs"] = dmrs(to_dmrs(m));
  return j;
}

json report(const ComparisonReport& r) {
  json j;
  j["entries"] = json::array();
  for (const auto& e : r.entries) j["entries"].push_back({{"item-id", e.item_id}, {"category", std::string(to_string(e.category))}});
  j["counts"] = json::object();
  for (Category c : all_categories()) j["counts"][std::string(to_string(c))] = r.counts.count(c) ? r.counts.at(c) : 0;
  j["regressed"] = r.regressed();
  return j;
}

}  // namespace hpsg::views
