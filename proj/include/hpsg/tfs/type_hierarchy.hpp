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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hpsg {

/// Index of a type in a TypeHierarchy. Declared types come first, string
/// atoms (quoted literals such as "persona") are appended after them.
struct TypeId {
  std::uint32_t value = UINT32_MAX;

  constexpr bool valid() const { return value != UINT32_MAX; }
  friend constexpr auto operator<=>(TypeId, TypeId) = default;
};

/// Index of a feature name. Ids follow the alphabetical order of the names,
/// so sorting arcs by id sorts them by name.
struct FeatureId {
  std::uint32_t value = UINT32_MAX;

  constexpr bool valid() const { return value != UINT32_MAX; }
  friend constexpr auto operator<=>(FeatureId, FeatureId) = default;
};

class UnknownType : public std::invalid_argument {
 public:
  explicit UnknownType(const std::string& name)
      : std::invalid_argument("unknown type: " + name) {}
};

class UnknownFeature : public std::invalid_argument {
 public:
  explicit UnknownFeature(const std::string& name)
      : std::invalid_argument("unknown feature: " + name) {}
};

/// Raw, unchecked description of a hierarchy as written by a grammar author.
struct HierarchyDefinition {
  struct Type {
    std::string name;
    std::vector<std::string> parents;
  };
  /// `type` declares `feature` with a value restriction. The most general
  /// declaring type is the feature's introduction point.
  struct Appropriateness {
    std::string type;
    std::string feature;
    std::string value_type;
  };

  std::vector<Type> types;
  std::vector<Appropriateness> appropriateness;
  /// Quoted string literals; each becomes a leaf below `string_type`.
  std::vector<std::string> strings;
  std::string string_type = "string";
};

struct HierarchyViolation {
  enum class Kind {
    duplicate_type,
    unknown_parent,
    cycle,
    no_root,
    multiple_roots,
    not_bounded_complete,
    appropriateness_conflict,
    unknown_value_type,
  };

  Kind kind;
  std::string message;
  /// Types involved: for a bounded-completeness failure the pair comes first,
  /// followed by its maximal common lower bounds.
  std::vector<std::string> types;
};

std::string_view to_string(HierarchyViolation::Kind kind);

struct ValidationReport {
  std::vector<HierarchyViolation> violations;

  bool ok() const { return violations.empty(); }
  bool has(HierarchyViolation::Kind kind) const;
};

ValidationReport validate_hierarchy(const HierarchyDefinition& def);

class InvalidHierarchy : public std::runtime_error {
 public:
  explicit InvalidHierarchy(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Immutable partial order of types with precomputed greatest lower bounds.
class TypeHierarchy {
 public:
  /// Throws InvalidHierarchy when validate_hierarchy reports anything.
  static TypeHierarchy build(const HierarchyDefinition& def);

  std::size_t size() const { return names_.size(); }
  std::size_t declared_size() const { return declared_; }
  TypeId top() const { return top_; }
  TypeId string_type() const { return string_type_; }

  std::optional<TypeId> find(std::string_view name) const;
  /// Throws UnknownType.
  TypeId id(std::string_view name) const;
  const std::string& name(TypeId t) const { return names_.at(t.value); }
  bool is_string(TypeId t) const { return t.value >= declared_; }

  std::span<const TypeId> parents(TypeId t) const;

  bool subtype_of(TypeId a, TypeId b) const;
  std::optional<TypeId> glb(TypeId a, TypeId b) const;

  std::size_t feature_count() const { return feature_names_.size(); }
  std::optional<FeatureId> find_feature(std::string_view name) const;
  /// Throws UnknownFeature.
  FeatureId feature(std::string_view name) const;
  const std::string& feature_name(FeatureId f) const {
    return feature_names_.at(f.value);
  }
  TypeId introduced_by(FeatureId f) const { return intro_.at(f.value); }
  TypeId value_restriction(FeatureId f) const { return restriction_.at(f.value); }
  /// Restriction on `f` as narrowed at type `t` (or an ancestor of it).
  TypeId value_restriction(TypeId t, FeatureId f) const;
  bool appropriate(TypeId t, FeatureId f) const;

 private:
  TypeHierarchy() = default;

  bool declared_below(std::uint32_t a, std::uint32_t b) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, TypeId> by_name_;
  std::size_t declared_ = 0;
  std::vector<std::vector<TypeId>> parents_;
  // Row-major bitsets: bit b of row a is set iff a is below-or-equal b.
  std::vector<std::uint64_t> up_;
  std::size_t words_ = 0;
  std::vector<std::uint32_t> glb_;  // declared_ x declared_, UINT32_MAX = none
  TypeId top_;
  TypeId string_type_;

  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, FeatureId> feature_by_name_;
  std::vector<TypeId> intro_;
  std::vector<TypeId> restriction_;
  // (type, feature) -> narrowed restriction declared at that type
  std::unordered_map<std::uint64_t, TypeId> narrowed_;
};

}  // namespace hpsg
