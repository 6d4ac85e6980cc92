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

#include <sstream>

#include "hpsg/semantics/mrs.hpp"

namespace hpsg {

namespace {

constexpr int first_node_id = 10000;

class Converter {
 public:
  explicit Converter(const Mrs& m) : m_(m) {
    for (const auto& hc : m.hcons) qeq_[hc.hi.name()] = hc.lo.name();
  }

  Dmrs run() {
    Dmrs d;
    for (std::size_t i = 0; i < m_.eps.size(); ++i) {
      const auto& e = m_.eps[i];
      DmrsNode n;
      n.id = id(i);
      n.predicate = e.predicate;
      if (const SemVar* a0 = e.arg("ARG0")) {
        n.sort = a0->sort;
        n.properties = a0->properties;
      }
      d.nodes.push_back(std::move(n));
    }
    for (std::size_t i = 0; i < m_.eps.size(); ++i) {
      const auto& e = m_.eps[i];
      for (const auto& [role, v] : e.args) {
        if (role == "ARG0" || role == "BODY") continue;
        if (v.sort == 'h') {
          auto target = group_head(resolve(v.name()));
          if (target) d.links.push_back({id(i), id(*target), role, "H"});
        } else if (auto target = owner(v)) {
          bool eq = m_.eps[*target].label.same(e.label);
          d.links.push_back({id(i), id(*target), role, eq ? "EQ" : "NEQ"});
        }
      }
    }
    if (auto t = group_head(resolve(m_.top.name()))) d.top = id(*t);
    return d;
  }

 private:
  static int id(std::size_t i) { return first_node_id + static_cast<int>(i); }

  std::string resolve(const std::string& h) const {
    auto it = qeq_.find(h);
    return it == qeq_.end() ? h : it->second;
  }

  // The EP whose intrinsic variable is v; quantifiers only as a last resort.
  std::optional<std::size_t> owner(const SemVar& v) const {
    std::optional<std::size_t> quant;
    for (std::size_t i = 0; i < m_.eps.size(); ++i) {
      const SemVar* a0 = m_.eps[i].arg("ARG0");
      if (!a0 || !a0->same(v)) continue;
      if (!m_.eps[i].quantifier()) return i;
      if (!quant) quant = i;
    }
    return quant;
  }

  // Among EPs labelled `label`, the one with no EQ dependency on another
  // member; ties go to the EP introducing the MRS index, then to EP order.
  std::optional<std::size_t> group_head(const std::string& label) const {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < m_.eps.size(); ++i)
      if (m_.eps[i].label.name() == label) members.push_back(i);
    if (members.empty()) return std::nullopt;
    std::vector<std::size_t> heads;
    for (std::size_t i : members) {
      bool dependent = false;
      for (const auto& [role, v] : m_.eps[i].args) {
        if (role == "ARG0" || v.sort == 'h') continue;
        auto o = owner(v);
        if (o && *o != i && m_.eps[*o].label.name() == label) dependent = true;
      }
      if (!dependent) heads.push_back(i);
    }
    if (heads.empty()) heads = members;
    for (std::size_t i : heads) {
      const SemVar* a0 = m_.eps[i].arg("ARG0");
      if (a0 && a0->same(m_.index)) return i;
    }
    return heads.front();
  }

  const Mrs& m_;
  std::map<std::string, std::string> qeq_;
};

}  // namespace

Dmrs to_dmrs(const Mrs& m) {
  auto report = check_wellformed(m);
  if (!report.ok()) throw MrsError("cannot convert an ill-formed MRS: " + report.violations.front());
  return Converter(m).run();
}

std::string write_dmrs(const Dmrs& d) {
  std::ostringstream out;
  out << "top " << d.top << '\n';
  for (const auto& n : d.nodes) {
    out << "node " << n.id << ' ' << n.predicate << " {" << n.sort;
    for (const auto& [k, v] : n.properties) out << ' ' << k << '=' << v;
    out << "}\n";
  }
  for (const auto& l : d.links) out << "link " << l.from << ' ' << l.role << '/' << l.post << ' ' << l.to << '\n';
  return out.str();
}

}  // namespace hpsg
