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

#include "hpsg/morpho/morpho.hpp"

#include <fstream>
#include <sstream>

namespace hpsg {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_split_punct(char c) { return c == '.' || c == '?' || c == '!' || c == ','; }
bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

}  // namespace

MorphTable MorphTable::parse(std::string_view tsv) {
  MorphTable t;
  std::istringstream in{std::string(tsv)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto a = line.find('\t');
    auto b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos || line.find('\t', b + 1) != std::string::npos)
      throw MorphTableError(line_no, "expected surface<TAB>lemma<TAB>tag");
    Reading r{line.substr(a + 1, b - a - 1), line.substr(b + 1)};
    std::string surface = line.substr(0, a);
    if (surface.empty() || r.lemma.empty() || r.tag.empty()) throw MorphTableError(line_no, "empty field");
    auto& readings = t.forms_[surface];
    bool seen = false;
    for (const auto& x : readings) seen = seen || x == r;
    if (!seen) readings.push_back(std::move(r));
  }
  return t;
}

MorphTable MorphTable::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str());
}

const std::vector<Reading>* MorphTable::find(std::string_view surface) const {
  auto it = forms_.find(surface);
  return it == forms_.end() ? nullptr : &it->second;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t cp = 0;  // code points consumed so far
  std::size_t i = 0;
  std::string cur;
  std::size_t cur_start = 0;
  auto flush = [&] {
    if (!cur.empty()) out.push_back({std::move(cur), cur_start, cp});
    cur.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    std::size_t len = 1;
    while (i + len < text.size() && is_continuation(text[i + len])) ++len;
    if (is_space(c)) {
      flush();
    } else if (is_split_punct(c)) {
      flush();
      out.push_back({std::string(1, c), cp, cp + 1});
    } else {
      if (cur.empty()) cur_start = cp;
      cur.append(text.substr(i, len));
    }
    i += len;
    ++cp;
  }
  flush();
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c >= 'A' && c <= 'Z') {
      out += static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < s.size()) {
      // U+00C0..U+00DE map to U+00E0..U+00FE, except the multiplication sign.
      auto d = static_cast<unsigned char>(s[i + 1]);
      out += static_cast<char>(c);
      out += static_cast<char>(d >= 0x80 && d <= 0x9E && d != 0x97 ? d + 0x20 : d);
      ++i;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

SentenceLattice analyze(const MorphTable& table, std::string_view text) {
  SentenceLattice lat;
  lat.sentence = std::string(text);
  for (auto& tok : tokenize(text)) {
    const auto* readings = table.find(tok.surface);
    if (!readings) readings = table.find(lowercase(tok.surface));
    if (readings)
      lat.analyses.push_back({std::move(tok), *readings});
    else
      lat.failures.push_back(std::move(tok));
  }
  return lat;
}

}  // namespace hpsg
