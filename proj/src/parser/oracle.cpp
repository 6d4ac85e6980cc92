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
#include <stdexcept>

#include "apply.hpp"
#include "hpsg/parser/parser.hpp"

namespace hpsg {

namespace {

struct Derived {
  DerivationTree tree;
  FeatureStructure fs;
  std::vector<std::size_t> chain;  // unary rules since the last lexical or binary step
};

class Oracle {
 public:
  Oracle(const Grammar& g, const SentenceLattice& lat) : apply_(g), lat_(lat) {}

  // Every derivation over [s, e), recomputed from scratch on each call.
  std::vector<Derived> derive(std::size_t s, std::size_t e) const {
    std::vector<Derived> out;
    const auto& rules = apply_.grammar().phrase_rules();
    if (e == s + 1) {
      const auto& a = lat_.analyses[s];
      for (auto& item : apply_.lexical_items(a, s)) {
        DerivationTree t;
        t.label = item.origin.entry;
        t.surface = a.token.surface;
        t.lemma = item.origin.lemma;
        t.tag = item.origin.tag;
        out.push_back({std::move(t), std::move(item.fs), {}});
      }
    }
    for (std::size_t m = s + 1; m < e; ++m) {
      auto lefts = derive(s, m);
      auto rights = derive(m, e);
      for (std::size_t r = 0; r < rules.size(); ++r) {
        if (rules[r].arity() != 2) continue;
        for (const auto& l : lefts) {
          auto partial = apply_.left(r, l.fs);
          if (!partial) continue;
          for (const auto& rt : rights) {
            auto mother = apply_.right(r, *partial, rt.fs);
            if (!mother) continue;
            DerivationTree t;
            t.label = rules[r].name;
            t.children = {l.tree, rt.tree};
            out.push_back({std::move(t), std::move(*mother), {}});
          }
        }
      }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (std::size_t r = 0; r < rules.size(); ++r) {
        if (rules[r].arity() != 1) continue;
        if (std::find(out[k].chain.begin(), out[k].chain.end(), r) != out[k].chain.end()) continue;
        auto mother = apply_.unary(r, out[k].fs);
        if (!mother) continue;
        Derived d;
        d.tree.label = rules[r].name;
        d.tree.children = {out[k].tree};
        d.fs = std::move(*mother);
        d.chain = out[k].chain;
        d.chain.push_back(r);
        out.push_back(std::move(d));
      }
    }
    return out;
  }

  bool root(const FeatureStructure& fs) const { return apply_.root(fs); }

 private:
  detail::RuleApplier apply_;
  const SentenceLattice& lat_;
};

}  // namespace

std::vector<DerivationTree> oracle_parse(const Grammar& g, const SentenceLattice& lattice) {
  if (lattice.token_count() > 8) throw std::invalid_argument("oracle_parse takes at most 8 tokens");
  std::vector<DerivationTree> out;
  if (!lattice.complete() || lattice.analyses.empty()) return out;
  Oracle oracle(g, lattice);
  for (auto& d : oracle.derive(0, lattice.analyses.size()))
    if (oracle.root(d.fs)) out.push_back(std::move(d.tree));
  std::sort(out.begin(), out.end(),
            [](const DerivationTree& a, const DerivationTree& b) { return a.to_string() < b.to_string(); });
  return out;
}

namespace {

std::optional<FeatureStructure> rebuild(const detail::RuleApplier& apply, const SentenceLattice& lat,
                                        const DerivationTree& t, std::size_t& next) {
  const Grammar& g = apply.grammar();
  if (t.lexical()) {
    if (next >= lat.analyses.size()) return std::nullopt;
    const auto& a = lat.analyses[next];
    if (a.token.surface != t.surface) return std::nullopt;
    MorphAnalysis only{a.token, {{t.lemma, t.tag}}};
    for (auto& item : apply.lexical_items(only, next))
      if (item.origin.entry == t.label) {
        ++next;
        return std::move(item.fs);
      }
    return std::nullopt;
  }
  const auto& rules = g.phrase_rules();
  auto it = std::find_if(rules.begin(), rules.end(), [&](const PhraseRule& r) { return r.name == t.label; });
  if (it == rules.end() || it->arity() != t.children.size()) return std::nullopt;
  auto r = static_cast<std::size_t>(it - rules.begin());
  auto first = rebuild(apply, lat, t.children[0], next);
  if (!first) return std::nullopt;
  if (it->arity() == 1) return apply.unary(r, *first);
  auto second = rebuild(apply, lat, t.children[1], next);
  if (!second) return std::nullopt;
  auto partial = apply.left(r, *first);
  if (!partial) return std::nullopt;
  return apply.right(r, *partial, *second);
}

}  // namespace

std::optional<FeatureStructure> replay(const Grammar& g, const SentenceLattice& lattice,
                                       const DerivationTree& tree) {
  detail::RuleApplier apply(g);
  std::size_t next = 0;
  auto fs = rebuild(apply, lattice, tree, next);
  if (!fs || next != lattice.analyses.size()) return std::nullopt;
  return fs;
}

}  // namespace hpsg
