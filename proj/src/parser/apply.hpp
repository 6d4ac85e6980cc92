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

#pragma once

// Rule application shared by the chart parser, the oracle and replay.

#include <optional>
#include <vector>

#include "hpsg/parser/parser.hpp"

namespace hpsg::detail {

struct LexicalItem {
  LexicalOrigin origin;
  FeatureStructure fs;
};

class RuleApplier {
 public:
  explicit RuleApplier(const Grammar& g);

  const Grammar& grammar() const { return g_; }

  /// Lexical edges for one token, readings in table order, entries in lexicon order.
  std::vector<LexicalItem> lexical_items(const MorphAnalysis& a, std::size_t token) const;

  /// Types at the quick-check paths of `fs` (invalid where the path is absent).
  std::vector<TypeId> signature(const FeatureStructure& fs) const;
  /// False when `sig` certainly fails to unify with daughter `d` of rule `r`.
  bool compatible(std::size_t r, std::size_t d, const std::vector<TypeId>& sig) const;

  std::optional<FeatureStructure> unary(std::size_t r, const FeatureStructure& dtr) const;
  /// The rule with its first daughter filled in.
  std::optional<FeatureStructure> left(std::size_t r, const FeatureStructure& dtr) const;
  /// Mother of a binary rule given the result of left().
  std::optional<FeatureStructure> right(std::size_t r, const FeatureStructure& partial,
                                        const FeatureStructure& dtr) const;

  bool root(const FeatureStructure& fs) const { return g_.satisfies_root(fs); }

 private:
  FeatureStructure mother(const FeatureStructure& full) const;

  const Grammar& g_;
  FeatureId args_;
  std::vector<FeaturePath> qc_paths_;
  // Per rule, per daughter: (quick-check path index, required type).
  std::vector<std::vector<std::vector<std::pair<std::size_t, TypeId>>>> qc_;
};

}  // namespace hpsg::detail
