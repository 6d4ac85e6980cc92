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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpsg/grammar/description.hpp"
#include "hpsg/tfs/unify.hpp"

namespace hpsg {

struct LoadError {
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;

  std::string to_string() const;
};

/// One lexicon instance. `lemma` is the STEM string, `predicate` the
/// KEYREL.PRED string. Semantically empty words still name a predicate there
/// even though their RELS stay empty.
struct LexicalEntry {
  std::string name;
  std::string lemma;
  TypeId type;
  std::string stem;
  std::string predicate;
  FeatureStructure fs;
};

/// Monotonic lexical rule: mother = daughter ⊓ input ⊓ output, plus the
/// constraint of the mother's root type when that type got more specific.
struct LexicalRule {
  std::string name;
  TypeId type;
  FeatureStructure input;
  FeatureStructure output;
  bool inflectional = false;
};

/// Phrase structure rule. `fs` holds mother and daughters, the latter as the
/// elements of ARGS; reentrancies between them thread features and semantics.
struct PhraseRule {
  std::string name;
  TypeId type;
  FeatureStructure fs;
  FeatureStructure mother;                 // fs without ARGS
  std::vector<FeatureStructure> daughters;
  std::vector<FeaturePath> daughter_paths;  // ARGS.FIRST, ARGS.REST.FIRST

  std::size_t arity() const { return daughters.size(); }
};

struct RootCondition {
  std::string name;
  FeatureStructure fs;
};

/// A lexical entry after its tag's rule chain has been applied.
struct Lexeme {
  const LexicalEntry* entry = nullptr;
  FeatureStructure fs;
};

class UnknownTag : public std::invalid_argument {
 public:
  explicit UnknownTag(const std::string& tag) : std::invalid_argument("unknown tag: " + tag) {}
};

using Options = std::map<std::string, std::string>;

/// True for on/true/yes/1.
bool option_enabled(const Options& options, std::string_view name);

/// Names of the files a grammar directory must contain, in hashing order.
const std::vector<std::string>& grammar_files();

class Grammar {
 public:
  const TypeHierarchy& hierarchy() const { return hierarchy_; }
  const std::vector<LexicalEntry>& lexicon() const { return lexicon_; }
  std::vector<const LexicalEntry*> entries_for(std::string_view lemma) const;
  std::size_t lemma_count() const { return by_lemma_.size(); }

  const std::vector<LexicalRule>& lexical_rules() const { return lexical_rules_; }
  const LexicalRule* lexical_rule(std::string_view name) const;
  const std::vector<PhraseRule>& phrase_rules() const { return phrase_rules_; }
  const std::vector<RootCondition>& roots() const { return roots_; }
  const std::map<std::string, std::vector<std::string>>& tagmap() const { return tagmap_; }
  /// Throws UnknownTag.
  const std::vector<std::string>& rule_chain(std::string_view tag) const;
  const Options& options() const { return options_; }
  bool option(std::string_view name) const { return option_enabled(options_, name); }

  /// Hex FNV-1a over the grammar files, morph.tsv when present, and the
  /// effective options.
  const std::string& version() const { return version_; }

  /// Full constraint of a type, inherited constraints included.
  const FeatureStructure& instantiate_type(TypeId t) const { return constraints_.at(t.value); }

  /// Applies one lexical rule; nullopt when the daughter is incompatible.
  std::optional<FeatureStructure> apply_lexical_rule(const LexicalRule& rule,
                                                     const FeatureStructure& daughter) const;

  /// Entries of `lemma` with the rule chain of `tag` folded over them, in
  /// lexicon order; entries failing any step are dropped. Throws UnknownTag.
  std::vector<Lexeme> lookup_lexemes(std::string_view lemma, std::string_view tag) const;

  /// True when `fs` unifies with at least one root condition.
  bool satisfies_root(const FeatureStructure& fs) const;

 private:
  friend class GrammarLoader;
  Grammar() = default;

  TypeHierarchy hierarchy_ = TypeHierarchy::build({{{"*top*", {}}}, {}, {}, "string"});
  std::vector<FeatureStructure> constraints_;
  std::vector<LexicalEntry> lexicon_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_lemma_;
  std::vector<LexicalRule> lexical_rules_;
  std::vector<PhraseRule> phrase_rules_;
  std::vector<RootCondition> roots_;
  std::map<std::string, std::vector<std::string>> tagmap_;
  Options options_;
  std::string version_;
};

struct LoadResult {
  std::shared_ptr<const Grammar> grammar;
  std::vector<LoadError> errors;

  bool ok() const { return grammar != nullptr; }
};

/// Loads and cross-checks a grammar directory. `overrides` replace values
/// from options.cfg.
LoadResult load_grammar(const std::filesystem::path& dir, const Options& overrides = {});

/// Like load_grammar but throws GrammarLoadFailure.
std::shared_ptr<const Grammar> load_grammar_or_throw(const std::filesystem::path& dir,
                                                     const Options& overrides = {});

class GrammarLoadFailure : public std::runtime_error {
 public:
  explicit GrammarLoadFailure(std::vector<LoadError> errors);
  const std::vector<LoadError>& errors() const { return errors_; }

 private:
  std::vector<LoadError> errors_;
};

/// Reads key=value lines; `#` starts a comment.
Options parse_options(std::string_view text);

}  // namespace hpsg
