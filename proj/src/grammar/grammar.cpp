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

#include "hpsg/grammar/grammar.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace hpsg {

namespace fs = std::filesystem;

std::string LoadError::to_string() const {
  std::string out = file;
  if (line > 0) out += ":" + std::to_string(line) + ":" + std::to_string(column);
  return out + ": " + message;
}

GrammarLoadFailure::GrammarLoadFailure(std::vector<LoadError> errors)
    : std::runtime_error([&] {
        std::string msg = "grammar failed to load";
        for (const auto& e : errors) msg += "\n  " + e.to_string();
        return msg;
      }()),
      errors_(std::move(errors)) {}

bool option_enabled(const Options& options, std::string_view name) {
  auto it = options.find(std::string(name));
  if (it == options.end()) return false;
  const std::string& v = it->second;
  return v == "on" || v == "true" || v == "yes" || v == "1";
}

const std::vector<std::string>& grammar_files() {
  static const std::vector<std::string> files{"types.tdl", "lexicon.tdl", "lexrules.tdl",
                                              "rules.tdl", "roots.tdl",   "tagmap.tsv"};
  return files;
}

Options parse_options(std::string_view text) {
  Options out;
  std::istringstream in{std::string(text)};
  std::string line;
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = trim(line.substr(0, eq));
    if (!key.empty()) out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<const LexicalEntry*> Grammar::entries_for(std::string_view lemma) const {
  std::vector<const LexicalEntry*> out;
  auto it = by_lemma_.find(lemma);
  if (it == by_lemma_.end()) return out;
  for (auto i : it->second) out.push_back(&lexicon_[i]);
  return out;
}

const LexicalRule* Grammar::lexical_rule(std::string_view name) const {
  for (const auto& r : lexical_rules_)
    if (r.name == name) return &r;
  return nullptr;
}

const std::vector<std::string>& Grammar::rule_chain(std::string_view tag) const {
  auto it = tagmap_.find(std::string(tag));
  if (it == tagmap_.end()) throw UnknownTag(std::string(tag));
  return it->second;
}

std::optional<FeatureStructure> Grammar::apply_lexical_rule(const LexicalRule& rule,
                                                            const FeatureStructure& daughter) const {
  auto in = unify(hierarchy_, daughter, rule.input);
  if (!in) return std::nullopt;
  auto out = unify(hierarchy_, in.value(), rule.output);
  if (!out) return std::nullopt;
  // A rule that specializes the root type brings in that type's constraint.
  TypeId t = out.value().type(out.value().root());
  if (t == daughter.type(daughter.root())) return std::move(out).value();
  auto typed = unify(hierarchy_, out.value(), instantiate_type(t));
  if (!typed) return std::nullopt;
  return std::move(typed).value();
}

std::vector<Lexeme> Grammar::lookup_lexemes(std::string_view lemma, std::string_view tag) const {
  const auto& chain = rule_chain(tag);
  std::vector<Lexeme> out;
  for (const LexicalEntry* e : entries_for(lemma)) {
    std::optional<FeatureStructure> cur = e->fs;
    for (const auto& name : chain) {
      cur = apply_lexical_rule(*lexical_rule(name), *cur);
      if (!cur) break;
    }
    if (cur) out.push_back({e, std::move(*cur)});
  }
  return out;
}

bool Grammar::satisfies_root(const FeatureStructure& fs) const {
  return std::any_of(roots_.begin(), roots_.end(),
                     [&](const RootCondition& r) { return unify(hierarchy_, fs, r.fs).ok(); });
}

class GrammarLoader {
 public:
  GrammarLoader(fs::path dir, const Options& overrides) : dir_(std::move(dir)), overrides_(overrides) {}

  LoadResult run() {
    LoadResult result;
    std::shared_ptr<Grammar> g(new Grammar());
    g_ = g.get();
    load();
    result.errors = std::move(errors_);
    if (result.errors.empty()) result.grammar = std::move(g);
    return result;
  }

 private:
  void error(const std::string& file, int line, int col, const std::string& msg) {
    errors_.push_back({file, line, col, msg});
  }
  void error(const tdl::Location& loc, const std::string& msg) {
    error(loc.file, loc.line, loc.column, msg);
  }

  std::optional<std::string> read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void load() {
    if (!fs::is_directory(dir_)) {
      error(dir_.string(), 0, 0, "not a grammar directory");
      return;
    }
    std::map<std::string, std::string> texts;
    for (const auto& name : grammar_files()) {
      auto text = read(name);
      if (!text) {
        error(path(name), 0, 0, "missing file: " + name.substr(0, name.find('.')));
        continue;
      }
      texts[name] = std::move(*text);
    }
    auto options_text = read("options.cfg");
    if (!errors_.empty()) return;

    g_->options_ = parse_options(options_text.value_or(""));
    for (const auto& [k, v] : overrides_) g_->options_[k] = v;
    g_->version_ = version_hash(texts);

    auto enabled = [this](std::string_view name) { return option_enabled(g_->options_, name); };
    std::map<std::string, std::vector<tdl::Definition>> defs;
    for (const auto& name : grammar_files()) {
      if (name == "tagmap.tsv") continue;
      try {
        defs[name] = tdl::parse(texts[name], path(name), enabled);
      } catch (const tdl::SyntaxError& e) {
        error(e.location(), e.message());
      }
    }
    if (!errors_.empty()) return;

    if (!build_hierarchy(defs["types.tdl"], defs)) return;
    if (!build_constraints(defs["types.tdl"])) return;
    load_lexicon(defs["lexicon.tdl"]);
    load_lexical_rules(defs["lexrules.tdl"]);
    load_phrase_rules(defs["rules.tdl"]);
    load_roots(defs["roots.tdl"]);
    load_tagmap(texts["tagmap.tsv"]);
    if (g_->roots_.empty() && errors_.empty()) error(path("roots.tdl"), 0, 0, "no root condition defined");
  }

  std::string version_hash(const std::map<std::string, std::string>& texts) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::string_view s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
      }
      h ^= 0xff;
      h *= 1099511628211ull;
    };
    for (const auto& name : grammar_files()) {
      mix(name);
      mix(texts.at(name));
    }
    if (auto morph = read("morph.tsv")) {
      mix("morph.tsv");
      mix(*morph);
    }
    for (const auto& [k, v] : g_->options_) mix(k + "=" + v);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  static std::string value_type_name(const tdl::Conjunction& c, const std::string& string_type) {
    using K = tdl::Term::Kind;
    for (const auto& t : c.terms) {
      switch (t.kind) {
        case K::type: return t.text;
        case K::string: return string_type;
        case K::list:
          if (!t.items.empty()) return "*cons*";
          if (t.open) return "*list*";
          if (t.tail.empty()) return "*null*";
          break;
        case K::diff_list: return "*diff-list*";
        default: break;
      }
    }
    return "*top*";
  }

  bool build_hierarchy(const std::vector<tdl::Definition>& types,
                       const std::map<std::string, std::vector<tdl::Definition>>& all) {
    HierarchyDefinition def;
    for (const auto& d : types) {
      HierarchyDefinition::Type t{d.name, {}};
      for (const auto& term : d.body.terms) {
        if (term.kind == tdl::Term::Kind::type) {
          t.parents.push_back(term.text);
        } else if (term.kind == tdl::Term::Kind::avm) {
          for (const auto& p : term.pairs) {
            std::string value = p.path.size() == 1 ? value_type_name(p.value, def.string_type) : "*top*";
            def.appropriateness.push_back({d.name, p.path.front(), value});
          }
        } else {
          error(term.loc, "type definitions may only combine parent types and [ ... ]");
        }
      }
      def.types.push_back(std::move(t));
      type_loc_.emplace(d.name, d.loc);
    }
    std::set<std::string> strings;
    for (const auto& [_, ds] : all)
      for (const auto& d : ds) {
        std::vector<std::string> s;
        tdl::collect_strings(d.body, s);
        strings.insert(s.begin(), s.end());
      }
    def.strings.assign(strings.begin(), strings.end());
    if (!errors_.empty()) return false;

    auto report = validate_hierarchy(def);
    for (const auto& v : report.violations) {
      tdl::Location loc{path("types.tdl"), 0, 0};
      for (const auto& t : v.types)
        if (auto it = type_loc_.find(t); it != type_loc_.end()) {
          loc = it->second;
          break;
        }
      std::string msg = v.message;
      if (v.kind == HierarchyViolation::Kind::unknown_parent && v.types.size() > 1)
        msg = "unknown type " + v.types[1] + " (parent of " + v.types[0] + ")";
      error(loc, msg);
    }
    if (!report.ok()) return false;
    g_->hierarchy_ = TypeHierarchy::build(def);
    return true;
  }

  std::optional<FeatureStructure> finish(const FeatureStructure& fs, const tdl::Location& loc,
                                         const std::string& what) {
    std::string why;
    auto inferred = infer_types(g_->hierarchy_, fs, &why);
    if (!inferred) {
      error(loc, what + ": " + why);
      return std::nullopt;
    }
    if (auto bad = check_appropriateness(g_->hierarchy_, *inferred)) {
      error(loc, what + ": " + *bad);
      return std::nullopt;
    }
    return inferred;
  }

  bool build_constraints(const std::vector<tdl::Definition>& types) {
    const auto& h = g_->hierarchy_;
    g_->constraints_.assign(h.size(), FeatureStructure{});
    for (std::uint32_t i = h.declared_size(); i < h.size(); ++i)
      g_->constraints_[i] = FeatureStructure::atom(TypeId{i});
    std::map<std::string, const tdl::Definition*> by_name;
    for (const auto& d : types) by_name.emplace(d.name, &d);
    std::vector<char> state(h.size(), 0);  // 0 todo, 1 done, 2 failed

    // Parents are expanded first; the hierarchy is acyclic so recursion ends.
    std::function<bool(TypeId)> expand = [&](TypeId t) -> bool {
      if (state[t.value]) return state[t.value] == 1;
      const tdl::Definition& d = *by_name.at(h.name(t));
      state[t.value] = 2;
      FeatureStructure own;
      try {
        own = compile_description(h, d.body);
      } catch (const DescriptionError& e) {
        error(e.location(), e.message());
        return false;
      }
      own = own.with_type(own.root(), t);
      FeatureStructure cur = own;
      for (TypeId p : h.parents(t)) {
        if (!expand(p)) return false;
        auto u = unify(h, cur, g_->constraints_[p.value]);
        if (!u) {
          error(d.loc, "constraint of " + d.name + " is inconsistent with parent " + h.name(p) +
                           ": " + u.failure().describe(h));
          return false;
        }
        cur = std::move(u).value();
      }
      auto done = finish(cur, d.loc, "constraint of " + d.name);
      if (!done) return false;
      g_->constraints_[t.value] = std::move(*done);
      state[t.value] = 1;
      return true;
    };
    bool ok = true;
    for (std::uint32_t i = 0; i < h.declared_size(); ++i) ok = expand(TypeId{i}) && ok;
    return ok;
  }

  struct Instance {
    std::string name;
    TypeId type;
    FeatureStructure fs;
    tdl::Location loc;
  };

  std::optional<Instance> instance(const tdl::Definition& d, std::set<std::string>& seen) {
    const auto& h = g_->hierarchy_;
    if (!seen.insert(d.name).second) {
      error(d.loc, "duplicate definition of " + d.name);
      return std::nullopt;
    }
    const tdl::Term* type_term = nullptr;
    for (const auto& t : d.body.terms)
      if (t.kind == tdl::Term::Kind::type) {
        type_term = &t;
        break;
      }
    if (!type_term) {
      error(d.loc, d.name + " names no type");
      return std::nullopt;
    }
    auto type = h.find(type_term->text);
    if (!type || h.is_string(*type)) {
      error(type_term->loc, "unknown type " + type_term->text);
      return std::nullopt;
    }
    FeatureStructure body;
    try {
      body = compile_description(h, d.body);
    } catch (const DescriptionError& e) {
      error(e.location(), e.message());
      return std::nullopt;
    }
    auto u = unify(h, g_->constraints_[type->value], body);
    if (!u) {
      error(d.loc, d.name + " is inconsistent with its type: " + u.failure().describe(h));
      return std::nullopt;
    }
    auto done = finish(u.value(), d.loc, d.name);
    if (!done) return std::nullopt;
    return Instance{d.name, *type, std::move(*done), d.loc};
  }

  std::optional<std::string> string_at(const FeatureStructure& f, const char* dotted) {
    const auto& h = g_->hierarchy_;
    FeaturePath path;
    try {
      path = parse_path(h, dotted);
    } catch (const UnknownFeature&) {
      return std::nullopt;
    }
    auto n = f.follow(path);
    if (!n || !h.is_string(f.type(*n))) return std::nullopt;
    const std::string& q = h.name(f.type(*n));
    return q.substr(1, q.size() - 2);
  }

  void load_lexicon(const std::vector<tdl::Definition>& defs) {
    std::set<std::string> seen;
    for (const auto& d : defs) {
      auto inst = instance(d, seen);
      if (!inst) continue;
      auto stem = string_at(inst->fs, "STEM");
      if (!stem) {
        error(d.loc, d.name + " has no STEM string");
        continue;
      }
      LexicalEntry e;
      e.name = inst->name;
      e.lemma = *stem;
      e.stem = *stem;
      e.type = inst->type;
      e.predicate = string_at(inst->fs, "KEYREL.PRED").value_or("");
      if (e.predicate.empty()) {
        error(d.loc, d.name + " has no KEYREL.PRED string");
        continue;
      }
      e.fs = std::move(inst->fs);
      g_->by_lemma_[e.lemma].push_back(g_->lexicon_.size());
      g_->lexicon_.push_back(std::move(e));
    }
  }

  std::optional<TypeId> required_type(const char* name, const tdl::Location& loc) {
    auto t = g_->hierarchy_.find(name);
    if (!t) error(loc, std::string("type ") + name + " is required");
    return t;
  }

  FeatureStructure part(const FeatureStructure& f, const char* feature) {
    const auto& h = g_->hierarchy_;
    auto feat = h.find_feature(feature);
    if (feat)
      if (auto n = f.follow(f.root(), *feat)) return f.subgraph(*n);
    return FeatureStructure::atom(h.top());
  }

  void load_lexical_rules(const std::vector<tdl::Definition>& defs) {
    const auto& h = g_->hierarchy_;
    std::set<std::string> seen;
    for (const auto& d : defs) {
      auto inst = instance(d, seen);
      if (!inst) continue;
      auto base = required_type("lex-rule", d.loc);
      if (!base) continue;
      if (!h.subtype_of(inst->type, *base)) {
        error(d.loc, d.name + " is not a lex-rule");
        continue;
      }
      LexicalRule r;
      r.name = inst->name;
      r.type = inst->type;
      r.input = part(inst->fs, "INPUT");
      r.output = part(inst->fs, "OUTPUT");
      auto infl = h.find("infl-lex-rule");
      r.inflectional = infl && h.subtype_of(inst->type, *infl);
      g_->lexical_rules_.push_back(std::move(r));
    }
  }

  void load_phrase_rules(const std::vector<tdl::Definition>& defs) {
    const auto& h = g_->hierarchy_;
    std::set<std::string> seen;
    auto args = h.find_feature("ARGS");
    auto first = h.find_feature("FIRST");
    auto rest = h.find_feature("REST");
    auto null = h.find("*null*");
    for (const auto& d : defs) {
      auto inst = instance(d, seen);
      if (!inst) continue;
      if (!args || !first || !rest || !null) {
        error(d.loc, "phrase rules need ARGS, FIRST, REST and *null*");
        continue;
      }
      PhraseRule r;
      r.name = inst->name;
      r.type = inst->type;
      auto cell = inst->fs.follow(inst->fs.root(), *args);
      FeaturePath path{*args};
      while (cell) {
        auto item = inst->fs.follow(*cell, *first);
        if (!item) break;
        FeaturePath p = path;
        p.push_back(*first);
        r.daughter_paths.push_back(p);
        r.daughters.push_back(inst->fs.subgraph(*item));
        path.push_back(*rest);
        cell = inst->fs.follow(*cell, *rest);
      }
      if (!cell || !h.subtype_of(inst->fs.type(*cell), *null)) {
        error(d.loc, d.name + ": ARGS must be a closed list");
        continue;
      }
      if (r.daughters.empty() || r.daughters.size() > 2) {
        error(d.loc, d.name + ": rules take one or two daughters");
        continue;
      }
      std::vector<FeatureId> drop{*args};
      r.mother = inst->fs.without_root_features(drop);
      r.fs = std::move(inst->fs);
      g_->phrase_rules_.push_back(std::move(r));
    }
  }

  void load_roots(const std::vector<tdl::Definition>& defs) {
    std::set<std::string> seen;
    for (const auto& d : defs) {
      auto inst = instance(d, seen);
      if (!inst) continue;
      g_->roots_.push_back({inst->name, std::move(inst->fs)});
    }
  }

  void load_tagmap(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    const std::string file = path("tagmap.tsv");
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      auto tab = line.find('\t');
      std::string tag = line.substr(0, tab);
      std::vector<std::string> chain;
      if (tab != std::string::npos) {
        std::size_t pos = tab + 1;
        while (pos <= line.size()) {
          auto comma = line.find(',', pos);
          std::string name = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
          name.erase(0, name.find_first_not_of(" "));
          name.erase(name.find_last_not_of(" ") + 1);
          if (!name.empty()) {
            if (!g_->lexical_rule(name))
              error(file, line_no, static_cast<int>(pos) + 1, "unknown lexical rule " + name);
            chain.push_back(name);
          }
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
      }
      if (g_->tagmap_.count(tag)) error(file, line_no, 1, "duplicate tag " + tag);
      g_->tagmap_[tag] = std::move(chain);
    }
  }

  fs::path dir_;
  Options overrides_;
  Grammar* g_ = nullptr;
  std::vector<LoadError> errors_;
  std::map<std::string, tdl::Location> type_loc_;
};

LoadResult load_grammar(const fs::path& dir, const Options& overrides) {
  return GrammarLoader(dir, overrides).run();
}

std::shared_ptr<const Grammar> load_grammar_or_throw(const fs::path& dir, const Options& overrides) {
  auto r = load_grammar(dir, overrides);
  if (!r.ok()) throw GrammarLoadFailure(std::move(r.errors));
  return r.grammar;
}

}  // namespace hpsg
