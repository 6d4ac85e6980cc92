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

#include "hpsg/tfs/type_hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace hpsg {

namespace {

using Bits = std::vector<std::uint64_t>;

void set_bit(Bits& bits, std::size_t i) { bits[i / 64] |= (std::uint64_t{1} << (i % 64)); }
bool test_bit(const Bits& bits, std::size_t i) {
  return (bits[i / 64] >> (i % 64)) & 1u;
}
std::size_t popcount(const Bits& bits) {
  std::size_t n = 0;
  for (auto w : bits) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// Index of the declared types plus their reflexive-transitive closures.
// Shared between validation and construction; only meaningful when acyclic.
struct Closure {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<Bits> up;    // up[a] has b  <=>  a below-or-equal b
  std::vector<Bits> down;  // down[b] has a <=>  a below-or-equal b
  std::size_t words = 0;

  bool below(std::size_t a, std::size_t b) const { return test_bit(up[a], b); }
};

struct Structure {
  std::vector<HierarchyViolation> violations;
  Closure closure;
  bool acyclic = true;
};

Structure analyse_structure(const HierarchyDefinition& def) {
  using Kind = HierarchyViolation::Kind;
  Structure s;
  Closure& c = s.closure;

  for (const auto& t : def.types) {
    if (c.index.contains(t.name)) {
      s.violations.push_back({Kind::duplicate_type, "duplicate type " + t.name, {t.name}});
      continue;
    }
    c.index.emplace(t.name, c.names.size());
    c.names.push_back(t.name);
  }
  c.parents.resize(c.names.size());
  std::vector<bool> seen(c.names.size(), false);
  for (const auto& t : def.types) {
    std::size_t i = c.index.at(t.name);
    if (seen[i]) continue;
    seen[i] = true;
    for (const auto& p : t.parents) {
      auto it = c.index.find(p);
      if (it == c.index.end()) {
        s.violations.push_back(
            {Kind::unknown_parent, "type " + t.name + " has unknown parent " + p, {t.name, p}});
        continue;
      }
      if (std::find(c.parents[i].begin(), c.parents[i].end(), it->second) == c.parents[i].end())
        c.parents[i].push_back(it->second);
    }
  }

  // Cycle detection over the parent graph (iterative colouring DFS).
  const std::size_t n = c.names.size();
  std::vector<int> colour(n, 0);
  std::vector<std::size_t> order;  // parents before children
  std::set<std::vector<std::string>> reported;
  for (std::size_t start = 0; start < n; ++start) {
    if (colour[start] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    colour[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < c.parents[node].size()) {
        std::size_t p = c.parents[node][next++];
        if (colour[p] == 0) {
          colour[p] = 1;
          stack.emplace_back(p, 0);
        } else if (colour[p] == 1) {
          s.acyclic = false;
          std::vector<std::string> cycle;
          bool on = false;
          for (auto& [m, _] : stack) {
            if (m == p) on = true;
            if (on) cycle.push_back(c.names[m]);
          }
          auto key = cycle;
          std::sort(key.begin(), key.end());
          if (reported.insert(key).second) {
            std::string msg = "cycle:";
            for (auto& t : cycle) msg += " " + t;
            msg += " -> " + c.names[p];
            s.violations.push_back({Kind::cycle, msg, cycle});
          }
        }
      } else {
        colour[node] = 2;
        order.push_back(node);
        stack.pop_back();
      }
    }
  }

  std::vector<std::string> roots;
  for (std::size_t i = 0; i < n; ++i)
    if (c.parents[i].empty()) roots.push_back(c.names[i]);
  if (n > 0 && roots.empty() && s.acyclic)
    s.violations.push_back({Kind::no_root, "hierarchy has no root type", {}});
  if (roots.size() > 1) {
    std::string msg = "multiple root types:";
    for (auto& r : roots) msg += " " + r;
    s.violations.push_back({Kind::multiple_roots, msg, roots});
  }
  if (n == 0) s.violations.push_back({Kind::no_root, "hierarchy has no types", {}});

  if (!s.acyclic) return s;

  c.words = (n + 63) / 64;
  c.up.assign(n, Bits(c.words, 0));
  for (std::size_t i : order) {  // parents are finished before their children
    set_bit(c.up[i], i);
    for (std::size_t p : c.parents[i])
      for (std::size_t w = 0; w < c.words; ++w) c.up[i][w] |= c.up[p][w];
  }
  c.down.assign(n, Bits(c.words, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (test_bit(c.up[a], b)) set_bit(c.down[b], a);
  return s;
}

// Maximal elements of a set of declared types given as a bitset.
std::vector<std::size_t> maxima(const Closure& c, const Bits& set) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < c.names.size(); ++i)
    if (test_bit(set, i)) members.push_back(i);
  std::vector<std::size_t> out;
  for (std::size_t m : members) {
    bool dominated = false;
    for (std::size_t o : members)
      if (o != m && c.below(m, o)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(m);
  }
  return out;
}

// Compatibility of two type names, where names may be quoted string atoms.
// Returns the glb name or nullopt; only valid on an acyclic bounded-complete closure.
std::optional<std::string> name_glb(const Closure& c, const std::string& string_type,
                                    const std::string& a, const std::string& b) {
  auto is_atom = [](const std::string& x) { return !x.empty() && x.front() == '"'; };
  if (a == b) return a;
  if (is_atom(a) && is_atom(b)) return std::nullopt;
  if (is_atom(a) || is_atom(b)) {
    const std::string& atom = is_atom(a) ? a : b;
    const std::string& other = is_atom(a) ? b : a;
    auto st = c.index.find(string_type);
    auto ot = c.index.find(other);
    if (st == c.index.end() || ot == c.index.end()) return std::nullopt;
    if (c.below(st->second, ot->second)) return atom;
    return std::nullopt;
  }
  std::size_t ia = c.index.at(a), ib = c.index.at(b);
  Bits common(c.words, 0);
  bool any = false;
  for (std::size_t w = 0; w < c.words; ++w) {
    common[w] = c.down[ia][w] & c.down[ib][w];
    any = any || common[w] != 0;
  }
  if (!any) return std::nullopt;
  auto m = maxima(c, common);
  if (m.size() != 1) return std::nullopt;
  return c.names[m.front()];
}

}  // namespace

std::string_view to_string(HierarchyViolation::Kind kind) {
  using Kind = HierarchyViolation::Kind;
  switch (kind) {
    case Kind::duplicate_type: return "duplicate-type";
    case Kind::unknown_parent: return "unknown-parent";
    case Kind::cycle: return "cycle";
    case Kind::no_root: return "no-root";
    case Kind::multiple_roots: return "multiple-roots";
    case Kind::not_bounded_complete: return "not-bounded-complete";
    case Kind::appropriateness_conflict: return "appropriateness-conflict";
    case Kind::unknown_value_type: return "unknown-value-type";
  }
  return "?";
}

bool ValidationReport::has(HierarchyViolation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const auto& v) { return v.kind == kind; });
}

ValidationReport validate_hierarchy(const HierarchyDefinition& def) {
  using Kind = HierarchyViolation::Kind;
  Structure s = analyse_structure(def);
  ValidationReport report{std::move(s.violations)};
  if (!s.acyclic) return report;
  const Closure& c = s.closure;
  const std::size_t n = c.names.size();

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (c.below(a, b) || c.below(b, a)) continue;
      Bits common(c.words, 0);
      bool any = false;
      for (std::size_t w = 0; w < c.words; ++w) {
        common[w] = c.down[a][w] & c.down[b][w];
        any = any || common[w] != 0;
      }
      if (!any) continue;
      auto m = maxima(c, common);
      if (m.size() > 1) {
        HierarchyViolation v{Kind::not_bounded_complete, {}, {c.names[a], c.names[b]}};
        v.message = c.names[a] + " and " + c.names[b] + " have no unique greatest common subtype: {";
        for (std::size_t i = 0; i < m.size(); ++i) {
          v.types.push_back(c.names[m[i]]);
          v.message += (i ? ", " : "") + c.names[m[i]];
        }
        v.message += "}";
        report.violations.push_back(std::move(v));
      }
    }
  }

  bool has_string_type = c.index.contains(def.string_type);
  if (!def.strings.empty() && !has_string_type)
    report.violations.push_back({Kind::unknown_value_type,
                                 "string literals used but type " + def.string_type +
                                     " is not declared",
                                 {def.string_type}});
  auto known = [&](const std::string& t) {
    if (!t.empty() && t.front() == '"') return has_string_type;
    return c.index.contains(t);
  };

  // feature -> declaring type -> value restriction (glb of repeated declarations)
  std::map<std::string, std::map<std::string, std::string>> declared;
  for (const auto& ap : def.appropriateness) {
    if (!c.index.contains(ap.type)) {
      report.violations.push_back({Kind::unknown_value_type,
                                   "feature " + ap.feature + " declared on unknown type " + ap.type,
                                   {ap.type}});
      continue;
    }
    if (!known(ap.value_type)) {
      report.violations.push_back({Kind::unknown_value_type,
                                   "feature " + ap.feature + " on " + ap.type +
                                       " has unknown value type " + ap.value_type,
                                   {ap.type, ap.value_type}});
      continue;
    }
    auto& slot = declared[ap.feature];
    auto it = slot.find(ap.type);
    if (it == slot.end()) {
      slot.emplace(ap.type, ap.value_type);
    } else {
      auto g = name_glb(c, def.string_type, it->second, ap.value_type);
      if (!g) {
        report.violations.push_back({Kind::appropriateness_conflict,
                                     "feature " + ap.feature + " on " + ap.type +
                                         " has incompatible value types " + it->second + " and " +
                                         ap.value_type,
                                     {ap.type, it->second, ap.value_type}});
      } else {
        it->second = *g;
      }
    }
  }

  for (const auto& [feature, decls] : declared) {
    Bits set(c.words, 0);
    for (const auto& [t, _] : decls) set_bit(set, c.index.at(t));
    auto intro = maxima(c, set);
    if (intro.size() != 1) {
      HierarchyViolation v{Kind::appropriateness_conflict,
                           "feature " + feature + " is introduced by more than one type:", {}};
      for (auto i : intro) {
        v.types.push_back(c.names[i]);
        v.message += " " + c.names[i];
      }
      report.violations.push_back(std::move(v));
      continue;
    }
    const std::string& intro_name = c.names[intro.front()];
    const std::string& restriction = decls.at(intro_name);
    for (const auto& [t, value] : decls) {
      if (t == intro_name) continue;
      if (!name_glb(c, def.string_type, value, restriction))
        report.violations.push_back({Kind::appropriateness_conflict,
                                     "type " + t + " restricts " + feature + " to " + value +
                                         ", incompatible with " + restriction + " introduced at " +
                                         intro_name,
                                     {t, value, restriction}});
    }
  }
  return report;
}

InvalidHierarchy::InvalidHierarchy(ValidationReport report)
    : std::runtime_error([&] {
        std::string msg = "invalid type hierarchy";
        for (const auto& v : report.violations) msg += "\n  " + v.message;
        return msg;
      }()),
      report_(std::move(report)) {}

TypeHierarchy TypeHierarchy::build(const HierarchyDefinition& def) {
  ValidationReport report = validate_hierarchy(def);
  if (!report.ok()) throw InvalidHierarchy(std::move(report));

  Structure s = analyse_structure(def);
  Closure& c = s.closure;
  TypeHierarchy h;
  const std::size_t n = c.names.size();
  h.declared_ = n;
  h.names_ = c.names;
  for (std::size_t i = 0; i < n; ++i) h.by_name_.emplace(c.names[i], TypeId{static_cast<std::uint32_t>(i)});
  h.parents_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : c.parents[i]) h.parents_[i].push_back(TypeId{static_cast<std::uint32_t>(p)});
    if (c.parents[i].empty()) h.top_ = TypeId{static_cast<std::uint32_t>(i)};
  }
  h.words_ = c.words;
  h.up_.resize(n * c.words);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(c.up[i].begin(), c.up[i].end(), h.up_.begin() + static_cast<std::ptrdiff_t>(i * c.words));

  h.glb_.assign(n * n, UINT32_MAX);
  std::vector<std::size_t> down_size(n);
  for (std::size_t i = 0; i < n; ++i) down_size[i] = popcount(c.down[i]);
  Bits common(c.words);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      std::uint32_t result = UINT32_MAX;
      if (c.below(a, b)) {
        result = static_cast<std::uint32_t>(a);
      } else if (c.below(b, a)) {
        result = static_cast<std::uint32_t>(b);
      } else {
        for (std::size_t w = 0; w < c.words; ++w) common[w] = c.down[a][w] & c.down[b][w];
        std::size_t size = popcount(common);
        if (size > 0) {
          // In a bounded-complete order the glb's downset is exactly the intersection.
          for (std::size_t m = 0; m < n; ++m) {
            if (test_bit(common, m) && down_size[m] == size) {
              result = static_cast<std::uint32_t>(m);
              break;
            }
          }
        }
      }
      h.glb_[a * n + b] = h.glb_[b * n + a] = result;
    }
  }

  h.string_type_ = TypeId{};
  if (auto it = c.index.find(def.string_type); it != c.index.end())
    h.string_type_ = TypeId{static_cast<std::uint32_t>(it->second)};
  std::set<std::string> atoms(def.strings.begin(), def.strings.end());
  for (const auto& a : atoms) {
    std::string quoted = "\"" + a + "\"";
    h.by_name_.emplace(quoted, TypeId{static_cast<std::uint32_t>(h.names_.size())});
    h.names_.push_back(std::move(quoted));
  }

  std::map<std::string, std::map<std::string, std::string>> declared;
  for (const auto& ap : def.appropriateness) {
    auto& slot = declared[ap.feature];
    auto it = slot.find(ap.type);
    if (it == slot.end())
      slot.emplace(ap.type, ap.value_type);
    else
      it->second = *name_glb(c, def.string_type, it->second, ap.value_type);
  }
  for (const auto& [feature, decls] : declared) {
    FeatureId f{static_cast<std::uint32_t>(h.feature_names_.size())};
    h.feature_names_.push_back(feature);
    h.feature_by_name_.emplace(feature, f);
    Bits set(c.words, 0);
    for (const auto& [t, _] : decls) set_bit(set, c.index.at(t));
    const std::string& intro = c.names[maxima(c, set).front()];
    TypeId restriction = h.id(decls.at(intro));
    h.intro_.push_back(h.id(intro));
    h.restriction_.push_back(restriction);
    for (const auto& [t, value] : decls) {
      if (t == intro) continue;
      TypeId narrowed = *h.glb(h.id(value), restriction);
      if (narrowed != restriction)
        h.narrowed_.emplace((std::uint64_t{h.id(t).value} << 32) | f.value, narrowed);
    }
  }
  return h;
}

std::optional<TypeId> TypeHierarchy::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

TypeId TypeHierarchy::id(std::string_view name) const {
  auto t = find(name);
  if (!t) throw UnknownType(std::string(name));
  return *t;
}

std::span<const TypeId> TypeHierarchy::parents(TypeId t) const {
  if (is_string(t)) return {&string_type_, 1};
  return parents_.at(t.value);
}

bool TypeHierarchy::declared_below(std::uint32_t a, std::uint32_t b) const {
  return (up_[a * words_ + b / 64] >> (b % 64)) & 1u;
}

bool TypeHierarchy::subtype_of(TypeId a, TypeId b) const {
  if (a == b) return true;
  if (is_string(b)) return false;
  if (is_string(a)) return string_type_.valid() && declared_below(string_type_.value, b.value);
  return declared_below(a.value, b.value);
}

std::optional<TypeId> TypeHierarchy::glb(TypeId a, TypeId b) const {
  if (a == b) return a;
  if (is_string(a) || is_string(b)) {
    if (is_string(a) && is_string(b)) return std::nullopt;
    TypeId atom = is_string(a) ? a : b;
    TypeId other = is_string(a) ? b : a;
    if (subtype_of(atom, other)) return atom;
    return std::nullopt;
  }
  std::uint32_t g = glb_[a.value * declared_ + b.value];
  if (g == UINT32_MAX) return std::nullopt;
  return TypeId{g};
}

std::optional<FeatureId> TypeHierarchy::find_feature(std::string_view name) const {
  auto it = feature_by_name_.find(std::string(name));
  if (it == feature_by_name_.end()) return std::nullopt;
  return it->second;
}

FeatureId TypeHierarchy::feature(std::string_view name) const {
  auto f = find_feature(name);
  if (!f) throw UnknownFeature(std::string(name));
  return *f;
}

TypeId TypeHierarchy::value_restriction(TypeId t, FeatureId f) const {
  TypeId r = restriction_.at(f.value);
  for (const auto& [key, narrowed] : narrowed_) {
    if ((key & 0xffffffffu) != f.value) continue;
    TypeId declaring{static_cast<std::uint32_t>(key >> 32)};
    if (subtype_of(t, declaring)) {
      if (auto g = glb(r, narrowed)) r = *g;
    }
  }
  return r;
}

bool TypeHierarchy::appropriate(TypeId t, FeatureId f) const {
  return subtype_of(t, intro_.at(f.value));
}

}  // namespace hpsg
