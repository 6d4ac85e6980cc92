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

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hpsg/grammar/grammar.hpp"

namespace hpsg {

/// Sorts: e event, x instance, h handle, i individual, u unknown.
struct SemVar {
  char sort = 'u';
  int index = 0;
  std::map<std::string, std::string> properties;

  std::string name() const { return sort + std::to_string(index); }
  /// Same variable, whatever the properties.
  bool same(const SemVar& o) const { return sort == o.sort && index == o.index; }
  bool operator==(const SemVar&) const = default;
};

struct ElementaryPredication {
  std::string predicate;
  SemVar label;
  std::map<std::string, SemVar> args;  // ARG0, ARG1, ..., RSTR, BODY

  const SemVar* arg(std::string_view role) const;
  bool quantifier() const { return args.count("RSTR") > 0; }
  bool operator==(const ElementaryPredication&) const = default;
};

struct HandleConstraint {
  SemVar hi;
  SemVar lo;
  std::string relation = "qeq";

  bool operator==(const HandleConstraint&) const = default;
};

struct Mrs {
  SemVar top;
  SemVar index;
  std::vector<ElementaryPredication> eps;
  std::vector<HandleConstraint> hcons;

  bool operator==(const Mrs&) const = default;
};

class MrsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads TOP/INDEX from HOOK and the RELS and HCONS difference lists of a
/// root structure. Variables are numbered from 1 in order of first encounter.
/// Throws std::invalid_argument if `fs` satisfies no root condition and
/// MrsError naming the path when the semantics is malformed.
Mrs extract_mrs(const Grammar& g, const FeatureStructure& fs);

struct WellformednessReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

WellformednessReport check_wellformed(const Mrs& m);

/// Single-line canonical text, equal for MRSs that differ only in variable
/// names, EP order and HCONS order.
std::string canonicalize(const Mrs& m);
bool equivalent(const Mrs& a, const Mrs& b);

/// `[ TOP: h0 INDEX: e2 RELS: < [ pred LBL: h1 ARG0: x3 [ x GEN: fem ] ] > HCONS: < h5 qeq h7 > ]`
/// with one EP per line. Properties are written at a variable's first mention.
std::string write_mrs(const Mrs& m);
/// Throws MrsError.
Mrs read_mrs(std::string_view text);

struct DmrsNode {
  int id = 0;
  std::string predicate;
  char sort = 'u';
  std::map<std::string, std::string> properties;
};

struct DmrsLink {
  int from = 0;
  int to = 0;
  std::string role;
  std::string post;  // EQ, NEQ or H
};

struct Dmrs {
  std::vector<DmrsNode> nodes;
  std::vector<DmrsLink> links;
  int top = 0;  // 0 when no node carries the top label
};

/// One node per EP (ids from 10000). BODY arguments give no links. Throws
/// MrsError for MRSs that are not well formed.
Dmrs to_dmrs(const Mrs& m);
/// `top id`, then `node id predicate {x PROP=val ...}` and `link from role/post to` lines.
std::string write_dmrs(const Dmrs& d);

}  // namespace hpsg
