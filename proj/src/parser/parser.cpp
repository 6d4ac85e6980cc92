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

#include "hpsg/parser/parser.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "apply.hpp"

namespace hpsg {

std::string_view to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::parsed: return "parsed";
    case ParseStatus::no_parse: return "no-parse";
    case ParseStatus::lexical_gap: return "lexical-gap";
    case ParseStatus::resource_limit: return "resource-limit";
  }
  return "?";
}

std::optional<ParseStatus> parse_status(std::string_view s) {
  for (auto st : {ParseStatus::parsed, ParseStatus::no_parse, ParseStatus::lexical_gap,
                  ParseStatus::resource_limit})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

struct LimitHit {};

class Chart {
 public:
  Chart(const Grammar& g, const ParserLimits& limits, ParseForest& forest)
      : apply_(g), limits_(limits), forest_(forest), started_(Clock::now()) {}

  ParseStatus run() {
    const auto& lat = forest_.input;
    std::size_t n = lat.analyses.size();
    if (!lat.complete()) return ParseStatus::lexical_gap;
    if (n == 0) return ParseStatus::no_parse;
    cells_.assign(n + 1, std::vector<std::vector<EdgeId>>(n + 1));
    try {
      for (std::size_t i = 0; i < n; ++i) {
        auto items = apply_.lexical_items(lat.analyses[i], i);
        if (items.empty()) return ParseStatus::lexical_gap;
        for (auto& item : items) {
          ChartEdge e;
          e.start = i;
          e.end = i + 1;
          e.fs = std::move(item.fs);
          e.lexical = std::move(item.origin);
          add(std::move(e), {});
        }
      }
      for (std::size_t len = 1; len <= n; ++len)
        for (std::size_t s = 0; s + len <= n; ++s) fill(s, s + len);
    } catch (const LimitHit&) {
      return ParseStatus::resource_limit;
    }
    for (EdgeId id : cells_[0][n])
      if (apply_.root(forest_.edges[id].fs)) forest_.roots.push_back(id);
    return forest_.roots.empty() ? ParseStatus::no_parse : ParseStatus::parsed;
  }

 private:
  void check_time() {
    std::chrono::duration<double> spent = Clock::now() - started_;
    if (spent.count() > limits_.timeout_s) throw LimitHit{};
  }

  EdgeId add(ChartEdge e, std::vector<std::size_t> chain) {
    if (forest_.edges.size() >= limits_.max_edges) throw LimitHit{};
    e.id = static_cast<EdgeId>(forest_.edges.size());
    cells_[e.start][e.end].push_back(e.id);
    sigs_.push_back(apply_.signature(e.fs));
    chains_.push_back(std::move(chain));
    forest_.edges.push_back(std::move(e));
    return forest_.edges.back().id;
  }

  void fill(std::size_t s, std::size_t e) {
    check_time();
    const auto& rules = apply_.grammar().phrase_rules();
    for (std::size_t m = s + 1; m < e; ++m) {
      for (std::size_t r = 0; r < rules.size(); ++r) {
        if (rules[r].arity() != 2) continue;
        // Copies: add() may grow the cell vectors.
        std::vector<EdgeId> lefts = cells_[s][m], rights = cells_[m][e];
        for (EdgeId l : lefts) {
          if (!apply_.compatible(r, 0, sigs_[l])) continue;
          std::optional<FeatureStructure> partial;
          bool tried = false;
          for (EdgeId rt : rights) {
            if (!apply_.compatible(r, 1, sigs_[rt])) continue;
            if (!tried) {
              partial = apply_.left(r, forest_.edges[l].fs);
              tried = true;
            }
            if (!partial) break;
            auto mother = apply_.right(r, *partial, forest_.edges[rt].fs);
            if (!mother) continue;
            ChartEdge edge;
            edge.start = s;
            edge.end = e;
            edge.fs = std::move(*mother);
            edge.rule = rules[r].name;
            edge.daughters = {l, rt};
            add(std::move(edge), {});
          }
        }
      }
    }
    // Unary closure; edges appended during the loop are visited too.
    for (std::size_t k = 0; k < cells_[s][e].size(); ++k) {
      EdgeId d = cells_[s][e][k];
      for (std::size_t r = 0; r < rules.size(); ++r) {
        if (rules[r].arity() != 1) continue;
        const auto& chain = chains_[d];
        if (std::find(chain.begin(), chain.end(), r) != chain.end()) continue;
        if (!apply_.compatible(r, 0, sigs_[d])) continue;
        auto mother = apply_.unary(r, forest_.edges[d].fs);
        if (!mother) continue;
        ChartEdge edge;
        edge.start = s;
        edge.end = e;
        edge.fs = std::move(*mother);
        edge.rule = rules[r].name;
        edge.daughters = {d};
        auto next = chains_[d];
        next.push_back(r);
        add(std::move(edge), std::move(next));
      }
    }
  }

  detail::RuleApplier apply_;
  const ParserLimits& limits_;
  ParseForest& forest_;
  Clock::time_point started_;
  std::vector<std::vector<std::vector<EdgeId>>> cells_;
  std::vector<std::vector<TypeId>> sigs_;
  std::vector<std::vector<std::size_t>> chains_;
};

void quote(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void write_tree(std::string& out, const DerivationTree& t) {
  out += '(';
  out += t.label;
  if (t.lexical()) {
    out += " (";
    quote(out, t.surface);
    out += ' ';
    out += t.lemma;
    out += ' ';
    out += t.tag;
    out += ')';
  } else {
    for (const auto& c : t.children) {
      out += ' ';
      write_tree(out, c);
    }
  }
  out += ')';
}

class TreeReader {
 public:
  explicit TreeReader(std::string_view s) : s_(s) {}

  DerivationTree read() {
    DerivationTree t = node();
    skip();
    if (i_ != s_.size()) fail("trailing text");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("bad derivation at offset " + std::to_string(i_) + ": " + what);
  }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\n' || s_[i_] == '\t')) ++i_;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  std::string atom() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && s_[i_] != ' ' && s_[i_] != '(' && s_[i_] != ')' && s_[i_] != '"' &&
           s_[i_] != '\n' && s_[i_] != '\t')
      ++i_;
    if (b == i_) fail("expected a name");
    return std::string(s_.substr(b, i_ - b));
  }
  std::string quoted() {
    expect('"');
    std::string out;
    while (true) {
      if (i_ >= s_.size()) fail("unterminated string");
      char c = s_[i_++];
      if (c == '"') break;
      if (c == '\\') {
        if (i_ >= s_.size()) fail("unterminated string");
        c = s_[i_++];
      }
      out += c;
    }
    return out;
  }
  DerivationTree node() {
    expect('(');
    DerivationTree t;
    t.label = atom();
    skip();
    // A lexical node's only child is ("surface" lemma tag).
    if (i_ < s_.size() && s_[i_] == '(') {
      std::size_t j = s_.find_first_not_of(' ', i_ + 1);
      if (j != std::string_view::npos && s_[j] == '"') {
        expect('(');
        t.surface = quoted();
        t.lemma = atom();
        t.tag = atom();
        expect(')');
        expect(')');
        return t;
      }
    }
    while (true) {
      skip();
      if (i_ < s_.size() && s_[i_] == ')') break;
      t.children.push_back(node());
    }
    expect(')');
    if (t.children.empty()) fail("phrasal node without daughters");
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

ParseOutcome parse(const Grammar& g, const SentenceLattice& lattice, const ParserLimits& limits) {
  auto started = Clock::now();
  ParseOutcome out;
  out.forest.input = lattice;
  out.status = Chart(g, limits, out.forest).run();
  if (out.status != ParseStatus::parsed) out.forest.roots.clear();
  out.stats.edges = out.forest.edges.size();
  out.stats.readings = out.forest.roots.size();
  out.stats.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  return out;
}

std::string DerivationTree::to_string() const {
  std::string out;
  write_tree(out, *this);
  return out;
}

std::vector<std::string> DerivationTree::yield() const {
  std::vector<std::string> out;
  std::vector<const DerivationTree*> stack{this};
  while (!stack.empty()) {
    const DerivationTree* t = stack.back();
    stack.pop_back();
    if (t->lexical()) {
      out.push_back(t->surface);
    } else {
      for (auto it = t->children.rbegin(); it != t->children.rend(); ++it) stack.push_back(&*it);
    }
  }
  return out;
}

DerivationTree parse_derivation(std::string_view text) { return TreeReader(text).read(); }

DerivationTree derivation(const ParseForest& forest, EdgeId id) {
  const ChartEdge& e = forest.edges.at(id);
  DerivationTree t;
  if (e.is_lexical()) {
    t.label = e.lexical->entry;
    t.surface = forest.input.analyses.at(e.lexical->token).token.surface;
    t.lemma = e.lexical->lemma;
    t.tag = e.lexical->tag;
    return t;
  }
  t.label = e.rule;
  for (EdgeId d : e.daughters) t.children.push_back(derivation(forest, d));
  return t;
}

Readings enumerate_readings(const ParseForest& forest, std::size_t cap) {
  Readings out;
  std::vector<EdgeId> roots = forest.roots;
  std::sort(roots.begin(), roots.end());
  for (EdgeId id : roots) {
    if (out.trees.size() >= cap) {
      out.truncated = true;
      break;
    }
    out.trees.push_back(derivation(forest, id));
    out.edges.push_back(id);
  }
  return out;
}

std::string serialize_forest(const ParseForest& forest) {
  std::ostringstream out;
  for (const auto& e : forest.edges) {
    out << e.id << ' ' << e.start << ' ' << e.end;
    if (e.is_lexical()) {
      out << " lex " << e.lexical->entry << ' ' << e.lexical->token << ' ' << e.lexical->lemma << ' '
          << e.lexical->tag;
    } else {
      out << " rule " << e.rule;
      for (EdgeId d : e.daughters) out << ' ' << d;
    }
    out << '\n';
  }
  out << "roots";
  for (EdgeId r : forest.roots) out << ' ' << r;
  out << '\n';
  return out.str();
}

}  // namespace hpsg
