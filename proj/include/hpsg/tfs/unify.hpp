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

#include <string>
#include <utility>
#include <variant>

#include "hpsg/tfs/feature_structure.hpp"

namespace hpsg {

/// Why two structures do not unify. `path` is relative to the root of the
/// outer structure; for a cyclic result `cyclic` is set and the types are
/// left invalid.
struct UnifyFailure {
  FeaturePath path;
  TypeId left;
  TypeId right;
  bool cyclic = false;

  std::string describe(const TypeHierarchy& h) const;
};

class UnifyResult {
 public:
  UnifyResult(FeatureStructure fs) : value_(std::move(fs)) {}  // NOLINT
  UnifyResult(UnifyFailure failure) : value_(std::move(failure)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<FeatureStructure>(value_); }
  explicit operator bool() const { return ok(); }

  const FeatureStructure& value() const& { return std::get<FeatureStructure>(value_); }
  FeatureStructure&& value() && { return std::get<FeatureStructure>(std::move(value_)); }
  const UnifyFailure& failure() const { return std::get<UnifyFailure>(value_); }

 private:
  std::variant<FeatureStructure, UnifyFailure> value_;
};

/// Most general structure subsumed by both inputs. Inputs are untouched.
UnifyResult unify(const TypeHierarchy& h, const FeatureStructure& a, const FeatureStructure& b);

/// Unifies `inner` into the node of `outer` reached by `path`. The path must
/// exist in `outer` (throws std::invalid_argument otherwise).
UnifyResult unify_at(const TypeHierarchy& h, const FeatureStructure& outer,
                     const FeaturePath& path, const FeatureStructure& inner);

/// True iff `general` carries no information missing from `specific`.
bool subsumes(const TypeHierarchy& h, const FeatureStructure& general,
              const FeatureStructure& specific);

/// Identical up to node renaming (mutual subsumption).
bool isomorphic(const FeatureStructure& a, const FeatureStructure& b);

}  // namespace hpsg
