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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hpsg/grammar/grammar.hpp"
#include "hpsg/morpho/morpho.hpp"

namespace hpsg {

using EdgeId = std::uint32_t;

/// Where a lexical edge came from: token position, lexicon entry and the
/// morphological reading whose tag chose the rule chain.
struct LexicalOrigin {
  std::size_t token = 0;
  std::string entry;
  std::string lemma;
  std::string tag;
};

struct ChartEdge {
  EdgeId id = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  FeatureStructure fs;
  std::string rule;  // empty for lexical edges
  std::vector<EdgeId> daughters;
  std::optional<LexicalOrigin> lexical;

  bool is_lexical() const { return lexical.has_value(); }
};

struct ParseForest {
  SentenceLattice input;
  std::vector<ChartEdge> edges;  // edges[i].id == i
  std::vector<EdgeId> roots;
};

struct ParserLimits {
  std::size_t max_edges = 20000;
  std::size_t max_readings = 1000;
  double timeout_s = 30;
};

enum class ParseStatus { parsed, no_parse, lexical_gap, resource_limit };

std::string_view to_string(ParseStatus s);
std::optional<ParseStatus> parse_status(std::string_view s);

struct ParseStats {
  std::size_t edges = 0;
  std::size_t readings = 0;
  double elapsed_ms = 0;
};

struct ParseOutcome {
  ParseStatus status = ParseStatus::no_parse;
  ParseForest forest;
  ParseStats stats;
};

/// Exhaustive bottom-up parse. Spans are filled by increasing length, left to
/// right; within a span binary rules come first (split point, rule, left edge,
/// right edge), then unary rules are closed over the span's edges. A unary
/// rule is not applied twice within one unary chain. When a limit is hit the
/// chart built so far is kept and no roots are reported.
ParseOutcome parse(const Grammar& g, const SentenceLattice& lattice, const ParserLimits& limits = {});

/// Labeled bracketing node. Lexical nodes carry the entry name as label and
/// the token reading; phrasal nodes carry the rule name and daughters.
struct DerivationTree {
  std::string label;
  std::vector<DerivationTree> children;
  std::string surface;
  std::string lemma;
  std::string tag;

  bool lexical() const { return children.empty(); }
  /// `(rule (daughter ...) ...)`, lexical nodes as `(entry ("surface" lemma tag))`.
  std::string to_string() const;
  /// Surfaces of the lexical nodes, left to right.
  std::vector<std::string> yield() const;

  bool operator==(const DerivationTree&) const = default;
};

/// Inverse of DerivationTree::to_string. Throws std::invalid_argument.
DerivationTree parse_derivation(std::string_view text);

DerivationTree derivation(const ParseForest& forest, EdgeId edge);

struct Readings {
  std::vector<DerivationTree> trees;
  std::vector<EdgeId> edges;  // root edge of each tree
  bool truncated = false;
};

/// Derivations of the root edges in edge id order, at most `cap` of them.
Readings enumerate_readings(const ParseForest& forest, std::size_t cap);

/// Recomputes every derivation by plain recursion over spans, without a chart.
/// Result is sorted by serialized form. Throws std::invalid_argument for
/// lattices longer than 8 tokens.
std::vector<DerivationTree> oracle_parse(const Grammar& g, const SentenceLattice& lattice);

/// Rebuilds a derivation bottom-up through unification; nullopt if any step
/// fails or the tree does not match the lattice.
std::optional<FeatureStructure> replay(const Grammar& g, const SentenceLattice& lattice,
                                       const DerivationTree& tree);

/// One edge per line:
///   <id> <start> <end> lex <entry> <token> <lemma> <tag>
///   <id> <start> <end> rule <name> <daughter ids...>
/// followed by `roots <ids...>`.
std::string serialize_forest(const ParseForest& forest);

}  // namespace hpsg
