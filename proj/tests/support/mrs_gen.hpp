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

#include <algorithm>
#include <map>
#include <random>

#include "hpsg/semantics/mrs.hpp"

namespace hpsg::testkit {

/// Renames every variable through a random injective map (sorts kept) and
/// shuffles EPs and HCONS.
inline Mrs scramble(const Mrs& m, std::mt19937& rng) {
  std::map<std::pair<char, int>, int> fresh;
  std::vector<int> pool(400);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i) + 1;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t next = 0;
  auto rename = [&](SemVar v) {
    auto key = std::make_pair(v.sort, v.index);
    auto it = fresh.find(key);
    if (it == fresh.end()) it = fresh.emplace(key, pool[next++]).first;
    v.index = it->second;
    return v;
  };
  Mrs out;
  out.top = rename(m.top);
  out.index = rename(m.index);
  for (auto ep : m.eps) {
    ep.label = rename(ep.label);
    for (auto& [role, v] : ep.args) v = rename(v);
    out.eps.push_back(ep);
  }
  for (auto hc : m.hcons) {
    hc.hi = rename(hc.hi);
    hc.lo = rename(hc.lo);
    out.hcons.push_back(hc);
  }
  std::shuffle(out.eps.begin(), out.eps.end(), rng);
  std::shuffle(out.hcons.begin(), out.hcons.end(), rng);
  return out;
}

}  // namespace hpsg::testkit
