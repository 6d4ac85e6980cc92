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

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "hpsg/semantics/mrs.hpp"

namespace hpsg {

namespace {

int role_rank(const std::string& role) {
  if (role == "LBL") return 0;
  if (role.rfind("ARG", 0) == 0 && role.size() > 3 &&
      std::all_of(role.begin() + 3, role.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return 1 + std::stoi(role.substr(3));
  if (role == "RSTR") return 1000;
  if (role == "BODY") return 1001;
  return 2000;
}

std::string var_key(const SemVar& v) { return v.name(); }

bool bare_predicate(const std::string& p) {
  if (p.empty()) return false;
  return std::all_of(p.begin(), p.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+' || c == '.' ||
           (static_cast<unsigned char>(c) & 0x80);
  });
}

class Writer {
 public:
  explicit Writer(bool one_line) : one_line_(one_line) {}

  std::string run(const Mrs& m) {
    out_ << "[ TOP: ";
    var(m.top);
    newline(2);
    out_ << "INDEX: ";
    var(m.index);
    newline(2);
    out_ << "RELS: <";
    bool first = true;
    for (const auto& e : m.eps) {
      if (!first) newline(10);
      else out_ << ' ';
      first = false;
      out_ << "[ ";
      if (bare_predicate(e.predicate)) {
        out_ << e.predicate;
      } else {
        out_ << '"';
        for (char c : e.predicate) {
          if (c == '"' || c == '\\') out_ << '\\';
          out_ << c;
        }
        out_ << '"';
      }
      out_ << " LBL: ";
      var(e.label);
      for (const auto& [role, v] : ordered_args(e)) {
        out_ << ' ' << role << ": ";
        var(*v);
      }
      out_ << " ]";
    }
    out_ << " >";
    newline(2);
    out_ << "HCONS: <";
    for (const auto& hc : m.hcons) {
      out_ << ' ';
      var(hc.hi);
      out_ << ' ' << hc.relation << ' ';
      var(hc.lo);
    }
    out_ << " > ]";
    if (!one_line_) out_ << '\n';
    return out_.str();
  }

  static std::vector<std::pair<std::string, const SemVar*>> ordered_args(const ElementaryPredication& e) {
    std::vector<std::pair<std::string, const SemVar*>> out;
    for (const auto& [role, v] : e.args) out.emplace_back(role, &v);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      int ra = role_rank(a.first), rb = role_rank(b.first);
      return ra != rb ? ra < rb : a.first < b.first;
    });
    return out;
  }

 private:
  void newline(int indent) {
    if (one_line_)
      out_ << ' ';
    else
      out_ << '\n' << std::string(static_cast<std::size_t>(indent), ' ');
  }

  void var(const SemVar& v) {
    out_ << v.name();
    if (v.properties.empty() || !seen_.insert(var_key(v)).second) return;
    out_ << " [ " << v.sort;
    for (const auto& [k, val] : v.properties) out_ << ' ' << k << ": " << val;
    out_ << " ]";
  }

  bool one_line_;
  std::ostringstream out_;
  std::set<std::string> seen_;
};

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  Mrs run() {
    Mrs m;
    expect("[");
    while (true) {
      std::string key = word();
      if (key == "]") break;
      if (key == "TOP:" || key == "LTOP:") {
        m.top = var();
      } else if (key == "INDEX:") {
        m.index = var();
      } else if (key == "RELS:") {
        expect("<");
        while (peek() != ">") m.eps.push_back(ep());
        expect(">");
      } else if (key == "HCONS:") {
        expect("<");
        while (peek() != ">") {
          HandleConstraint hc;
          hc.hi = var();
          hc.relation = word();
          hc.lo = var();
          m.hcons.push_back(std::move(hc));
        }
        expect(">");
      } else {
        fail("unexpected " + key);
      }
    }
    if (!peek().empty()) fail("trailing text");
    // Properties written at the first mention apply to every mention.
    auto fix = [&](SemVar& v) { v.properties = props_[var_key(v)]; };
    fix(m.top);
    fix(m.index);
    for (auto& e : m.eps) {
      fix(e.label);
      for (auto& [_, v] : e.args) fix(v);
    }
    for (auto& hc : m.hcons) {
      fix(hc.hi);
      fix(hc.lo);
    }
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw MrsError("bad MRS text at offset " + std::to_string(i_) + ": " + what);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string peek() {
    std::size_t save = i_;
    std::string w = word(true);
    i_ = save;
    return w;
  }

  std::string word(bool allow_end = false) {
    skip();
    if (i_ >= s_.size()) {
      if (allow_end) return "";
      fail("unexpected end");
    }
    char c = s_[i_];
    if (c == '[' || c == ']' || c == '<' || c == '>') {
      ++i_;
      return std::string(1, c);
    }
    if (c == '"') {
      std::string out = "\"";
      ++i_;
      while (true) {
        if (i_ >= s_.size()) fail("unterminated string");
        char d = s_[i_++];
        if (d == '"') break;
        if (d == '\\' && i_ < s_.size()) d = s_[i_++];
        out += d;
      }
      return out;
    }
    std::size_t b = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '[' &&
           s_[i_] != ']' && s_[i_] != '<' && s_[i_] != '>')
      ++i_;
    return std::string(s_.substr(b, i_ - b));
  }

  void expect(const char* w) {
    if (word() != w) fail(std::string("expected ") + w);
  }

  SemVar var() {
    std::string name = word();
    if (name.size() < 2 || !std::isalpha(static_cast<unsigned char>(name[0])) ||
        !std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail("bad variable " + name);
    SemVar v;
    v.sort = name[0];
    v.index = std::stoi(name.substr(1));
    if (peek() == "[") {
      expect("[");
      std::string sort = word();
      if (sort != std::string(1, v.sort)) fail("sort mismatch in " + name);
      std::map<std::string, std::string> props;
      while (peek() != "]") {
        std::string k = word();
        if (k.size() < 2 || k.back() != ':') fail("bad property " + k);
        props[k.substr(0, k.size() - 1)] = word();
      }
      expect("]");
      auto [it, fresh] = props_.emplace(name, props);
      if (!fresh && it->second != props) fail("conflicting properties for " + name);
    }
    return v;
  }

  ElementaryPredication ep() {
    expect("[");
    ElementaryPredication e;
    std::string pred = word();
    e.predicate = !pred.empty() && pred[0] == '"' ? pred.substr(1) : pred;
    bool has_label = false;
    while (peek() != "]") {
      std::string role = word();
      if (role.size() < 2 || role.back() != ':') fail("bad role " + role);
      role.pop_back();
      SemVar v = var();
      if (role == "LBL") {
        e.label = v;
        has_label = true;
      } else {
        e.args[role] = v;
      }
    }
    expect("]");
    if (!has_label) fail("EP " + e.predicate + " without LBL");
    return e;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::map<std::string, std::map<std::string, std::string>> props_;
};

}  // namespace

std::string write_mrs(const Mrs& m) { return Writer(false).run(m); }

Mrs read_mrs(std::string_view text) { return Reader(text).run(); }

WellformednessReport check_wellformed(const Mrs& m) {
  WellformednessReport r;
  std::map<std::string, const SemVar*> first;
  std::set<std::string> conflicting;
  auto note = [&](const SemVar& v) {
    auto [it, fresh] = first.emplace(var_key(v), &v);
    if (!fresh && it->second->properties != v.properties && conflicting.insert(var_key(v)).second)
      r.violations.push_back("conflicting properties for " + v.name());
  };
  note(m.top);
  note(m.index);
  for (const auto& e : m.eps) {
    note(e.label);
    for (const auto& [_, v] : e.args) note(v);
  }
  for (const auto& hc : m.hcons) {
    note(hc.hi);
    note(hc.lo);
  }

  if (m.top.sort != 'h') r.violations.push_back("TOP " + m.top.name() + " is not a handle");

  std::set<std::string> arg0s, labels, handle_args;
  for (const auto& e : m.eps) {
    if (e.label.index > 0) labels.insert(var_key(e.label));
    if (const SemVar* a = e.arg("ARG0")) arg0s.insert(var_key(*a));
    for (const auto& [role, v] : e.args)
      if (v.sort == 'h') handle_args.insert(var_key(v));
  }
  for (std::size_t i = 0; i < m.eps.size(); ++i) {
    const auto& e = m.eps[i];
    std::string what = "EP " + std::to_string(i) + " (" + e.predicate + ")";
    if (e.label.index <= 0)
      r.violations.push_back(what + " has no label");
    else if (e.label.sort != 'h')
      r.violations.push_back(what + " has a label that is not a handle");
    if (!e.arg("ARG0")) r.violations.push_back(what + " has no ARG0");
    for (const auto& [role, v] : e.args) {
      if (role == "ARG0" || v.sort == 'h' || arg0s.count(var_key(v))) continue;
      const char* kind = v.sort == 'x' ? "dangling instance variable " : v.sort == 'e' ? "dangling event variable "
                                                                                      : "dangling variable ";
      r.violations.push_back(kind + v.name() + " (" + e.predicate + " " + role + ")");
    }
  }
  for (const auto& l : labels)
    if (arg0s.count(l)) r.violations.push_back("handle " + l + " is both a label and a non-scopal argument");
  for (const auto& hc : m.hcons) {
    if (hc.hi.same(hc.lo)) r.violations.push_back("qeq " + hc.hi.name() + " relates a handle to itself");
    if (!handle_args.count(var_key(hc.hi)) && !hc.hi.same(m.top))
      r.violations.push_back("qeq hi " + hc.hi.name() + " is not a scopal argument or TOP");
    if (!labels.count(var_key(hc.lo))) r.violations.push_back("dangling qeq lo " + hc.lo.name());
  }
  return r;
}

namespace {

// Colour refinement over variables, EPs and handle constraints; colours are
// ranks of signature strings, so they do not depend on variable names.
class Canonicalizer {
 public:
  explicit Canonicalizer(const Mrs& m) : m_(m) {}

  std::string run() {
    refine();
    std::vector<std::size_t> order(m_.eps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ep_color_[a] < ep_color_[b]; });
    std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) of equal colours
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && ep_color_[order[j]] == ep_color_[order[i]]) ++j;
      if (j - i > 1) groups.emplace_back(i, j);
      i = j;
    }
    best_.clear();
    budget_ = 50000;
    permute(order, groups, 0);
    return best_;
  }

 private:
  void permute(std::vector<std::size_t>& order, const std::vector<std::pair<std::size_t, std::size_t>>& groups,
               std::size_t g) {
    if (budget_ == 0) return;
    if (g == groups.size()) {
      --budget_;
      std::string s = render(order);
      if (best_.empty() || s < best_) best_ = std::move(s);
      return;
    }
    auto [b, e] = groups[g];
    std::sort(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e));
    do {
      permute(order, groups, g + 1);
    } while (budget_ > 0 && std::next_permutation(order.begin() + static_cast<long>(b),
                                                  order.begin() + static_cast<long>(e)));
  }

  std::string render(const std::vector<std::size_t>& order) {
    std::map<std::string, int> number;
    auto renamed = [&](const SemVar& v) {
      auto [it, fresh] = number.emplace(var_key(v), static_cast<int>(number.size()) + 1);
      SemVar out = v;
      out.index = it->second;
      return out;
    };
    Mrs out;
    out.top = renamed(m_.top);
    out.index = renamed(m_.index);
    for (std::size_t i : order) {
      const auto& e = m_.eps[i];
      ElementaryPredication c;
      c.predicate = e.predicate;
      c.label = renamed(e.label);
      for (const auto& [role, v] : Writer::ordered_args(e)) c.args[role] = renamed(*v);
      out.eps.push_back(std::move(c));
    }
    std::vector<std::size_t> hc(m_.hcons.size());
    for (std::size_t i = 0; i < hc.size(); ++i) hc[i] = i;
    std::stable_sort(hc.begin(), hc.end(), [&](auto a, auto b) { return hc_color_[a] < hc_color_[b]; });
    for (std::size_t i : hc) out.hcons.push_back({renamed(m_.hcons[i].hi), renamed(m_.hcons[i].lo),
                                                  m_.hcons[i].relation});
    std::sort(out.hcons.begin(), out.hcons.end(), [](const HandleConstraint& a, const HandleConstraint& b) {
      return std::make_pair(a.hi.index, a.lo.index) < std::make_pair(b.hi.index, b.lo.index);
    });
    return Writer(true).run(out);
  }

  static std::vector<int> ranks(const std::vector<std::string>& sigs) {
    std::vector<std::string> sorted = sigs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out;
    for (const auto& s : sigs)
      out.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), s) - sorted.begin()));
    return out;
  }

  void refine() {
    // Variables, indexed densely.
    auto add = [&](const SemVar& v) {
      if (var_index_.emplace(var_key(v), vars_.size()).second) vars_.push_back(&v);
    };
    add(m_.top);
    add(m_.index);
    for (const auto& e : m_.eps) {
      add(e.label);
      for (const auto& [_, v] : e.args) add(v);
    }
    for (const auto& hc : m_.hcons) {
      add(hc.hi);
      add(hc.lo);
    }
    std::vector<std::string> sigs;
    for (const SemVar* v : vars_) {
      std::string s(1, v->sort);
      for (const auto& [k, val] : v->properties) s += " " + k + "=" + val;
      if (v->same(m_.top)) s += " TOP";
      if (v->same(m_.index)) s += " INDEX";
      sigs.push_back(s);
    }
    var_color_ = ranks(sigs);
    std::size_t classes = 0;
    for (int round = 0; round < 64; ++round) {
      std::vector<std::string> ep_sigs;
      for (const auto& e : m_.eps) {
        std::string s = e.predicate + " L" + std::to_string(color(e.label));
        for (const auto& [role, v] : Writer::ordered_args(e)) s += " " + role + std::to_string(color(*v));
        ep_sigs.push_back(s);
      }
      ep_color_ = ranks(ep_sigs);
      std::vector<std::string> hc_sigs;
      for (const auto& hc : m_.hcons)
        hc_sigs.push_back(hc.relation + " " + std::to_string(color(hc.hi)) + " " + std::to_string(color(hc.lo)));
      hc_color_ = ranks(hc_sigs);

      std::vector<std::vector<std::string>> uses(vars_.size());
      for (std::size_t i = 0; i < m_.eps.size(); ++i) {
        const auto& e = m_.eps[i];
        uses[var_index_.at(var_key(e.label))].push_back("LBL@" + std::to_string(ep_color_[i]));
        for (const auto& [role, v] : e.args)
          uses[var_index_.at(var_key(v))].push_back(role + "@" + std::to_string(ep_color_[i]));
      }
      for (std::size_t i = 0; i < m_.hcons.size(); ++i) {
        uses[var_index_.at(var_key(m_.hcons[i].hi))].push_back("HI@" + std::to_string(hc_color_[i]));
        uses[var_index_.at(var_key(m_.hcons[i].lo))].push_back("LO@" + std::to_string(hc_color_[i]));
      }
      std::vector<std::string> next;
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        std::sort(uses[i].begin(), uses[i].end());
        std::string s = std::to_string(var_color_[i]);
        for (const auto& u : uses[i]) s += " " + u;
        next.push_back(s);
      }
      var_color_ = ranks(next);
      std::size_t now = std::set<int>(var_color_.begin(), var_color_.end()).size() +
                        std::set<int>(ep_color_.begin(), ep_color_.end()).size();
      if (now == classes) break;
      classes = now;
    }
  }

  int color(const SemVar& v) const { return var_color_[var_index_.at(var_key(v))]; }

  const Mrs& m_;
  std::vector<const SemVar*> vars_;
  std::map<std::string, std::size_t> var_index_;
  std::vector<int> var_color_, ep_color_, hc_color_;
  std::string best_;
  std::size_t budget_ = 0;
};

}  // namespace

std::string canonicalize(const Mrs& m) { return Canonicalizer(m).run(); }

bool equivalent(const Mrs& a, const Mrs& b) { return canonicalize(a) == canonicalize(b); }

}  // namespace hpsg
