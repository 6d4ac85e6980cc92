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

#include <stdexcept>
#include <string>
#include <string_view>

#include "hpsg/grammar/tdl.hpp"
#include "hpsg/tfs/feature_structure.hpp"

namespace hpsg {

/// Types and features the list sugar expands into.
struct ListSignature {
  TypeId list, cons, null, diff_list;
  FeatureId first, rest, list_f, last;

  /// Looks up `*list*`, `*cons*`, `*null*`, `*diff-list*`, FIRST, REST, LIST
  /// and LAST. Missing names stay invalid; using list syntax then fails.
  static ListSignature from(const TypeHierarchy& h);
};

class DescriptionError : public std::runtime_error {
 public:
  DescriptionError(tdl::Location loc, const std::string& message)
      : std::runtime_error(tdl::to_string(loc) + ": " + message), loc_(std::move(loc)), message_(message) {}
  const tdl::Location& location() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  tdl::Location loc_;
  std::string message_;
};

/// Turns a parsed conjunction into a feature structure: types are combined by
/// glb, tags become shared nodes, lists desugar to FIRST/REST chains ending in
/// *null* (or an open *list*, or the dotted tail), difference lists to
/// LIST/LAST pairs. No type inference is done here. Throws DescriptionError.
FeatureStructure compile_description(const TypeHierarchy& h, const tdl::Conjunction& c);

/// parse_conjunction + compile_description + infer_types, for tests and tools.
FeatureStructure parse_description(const TypeHierarchy& h, std::string_view text);

}  // namespace hpsg
