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

#include "apply.hpp"

#include <map>

namespace hpsg::detail {

namespace {

// Collects typed paths up to `depth` features long, first occurrence only.
void typed_paths(const TypeHierarchy& h, const FeatureStructure& fs, NodeId n, FeaturePath& cur,
                 std::size_t depth, std::map<FeaturePath, TypeId>& out) {
  for (const auto& arc : fs.arcs(n)) {
    cur.push_back(arc.feature);
    TypeId t = fs.type(arc.target);
    if (t != h.top()) out.emplace(cur, t);
    if (cur.size() < depth) typed_paths(h, fs, arc.target, cur, depth, out);
    cur.pop_back();
  }
}

}  // namespace

RuleApplier::RuleApplier(const Grammar& g) : g_(g) {
  const auto& h = g.hierarchy();
  args_ = h.find_feature("ARGS").value_or(FeatureId{});
  std::map<FeaturePath, std::size_t> index;
  for (const auto& rule : g.phrase_rules()) {
    auto& per_rule = qc_.emplace_back();
    for (const auto& dtr : rule.daughters) {
      std::map<FeaturePath, TypeId> paths;
      FeaturePath cur;
      typed_paths(h, dtr, dtr.root(), cur, 3, paths);
      auto& checks = per_rule.emplace_back();
      for (const auto& [p, t] : paths) {
        auto [it, fresh] = index.emplace(p, qc_paths_.size());
        if (fresh) qc_paths_.push_back(p);
        checks.emplace_back(it->second, t);
      }
    }
  }
}

std::vector<LexicalItem> RuleApplier::lexical_items(const MorphAnalysis& a, std::size_t token) const {
  std::vector<LexicalItem> out;
  for (const auto& r : a.readings) {
    std::vector<Lexeme> lexemes;
    try {
      lexemes = g_.lookup_lexemes(r.lemma, r.tag);
    } catch (const UnknownTag&) {
      continue;
    }
    for (auto& l : lexemes) out.push_back({{token, l.entry->name, r.lemma, r.tag}, std::move(l.fs)});
  }
  return out;
}

std::vector<TypeId> RuleApplier::signature(const FeatureStructure& fs) const {
  std::vector<TypeId> sig;
  sig.reserve(qc_paths_.size());
  for (const auto& p : qc_paths_) {
    auto n = fs.follow(p);
    sig.push_back(n ? fs.type(*n) : TypeId{});
  }
  return sig;
}

bool RuleApplier::compatible(std::size_t r, std::size_t d, const std::vector<TypeId>& sig) const {
  const auto& h = g_.hierarchy();
  for (auto [i, t] : qc_[r][d])
    if (sig[i].valid() && !h.glb(sig[i], t)) return false;
  return true;
}

FeatureStructure RuleApplier::mother(const FeatureStructure& full) const {
  FeatureId drop[] = {args_};
  return full.without_root_features(drop);
}

std::optional<FeatureStructure> RuleApplier::unary(std::size_t r, const FeatureStructure& dtr) const {
  const auto& rule = g_.phrase_rules()[r];
  auto u = unify_at(g_.hierarchy(), rule.fs, rule.daughter_paths[0], dtr);
  if (!u) return std::nullopt;
  return mother(u.value());
}

std::optional<FeatureStructure> RuleApplier::left(std::size_t r, const FeatureStructure& dtr) const {
  const auto& rule = g_.phrase_rules()[r];
  auto u = unify_at(g_.hierarchy(), rule.fs, rule.daughter_paths[0], dtr);
  if (!u) return std::nullopt;
  return std::move(u).value();
}

std::optional<FeatureStructure> RuleApplier::right(std::size_t r, const FeatureStructure& partial,
                                                   const FeatureStructure& dtr) const {
  const auto& rule = g_.phrase_rules()[r];
  auto u = unify_at(g_.hierarchy(), partial, rule.daughter_paths[1], dtr);
  if (!u) return std::nullopt;
  return mother(u.value());
}

}  // namespace hpsg::detail
