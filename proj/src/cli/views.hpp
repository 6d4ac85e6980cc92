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

// JSON renderings shared by the HTTP service and the command line.

#include "hpsg/parser/parser.hpp"
#include "hpsg/semantics/mrs.hpp"
#include "hpsg/treebank/treebank.hpp"
#include "json.hpp"

namespace hpsg::views {

using json = nlohmann::ordered_json;

json verdict(const Verdict& v);
json item(const Profile& p, const Item& item);
json tree(const DerivationTree& t);
json dmrs(const Dmrs& d);
/// Throws std::out_of_range when the reading does not exist.
json reading(const Profile& p, int id, std::size_t k);
json report(const ComparisonReport& r);

}  // namespace hpsg::views
