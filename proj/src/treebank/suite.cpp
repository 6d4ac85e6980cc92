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

#include <fstream>
#include <set>
#include <sstream>

#include "hpsg/morpho/morpho.hpp"
#include "hpsg/treebank/treebank.hpp"

namespace hpsg {

namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t") == std::string_view::npos; }

int parse_id(std::string_view s, int line) {
  if (s.empty() || s.size() > 9 || s[0] == '0' ||
      s.find_first_not_of("0123456789") != std::string_view::npos)
    throw SuiteError(line, "item id must be a positive integer: '" + std::string(s) + "'");
  return std::stoi(std::string(s));
}

}  // namespace

std::vector<Item> TestSuiteFile::items() const {
  std::vector<Item> out;
  for (const auto& l : lines)
    if (l.record) out.push_back(*l.record);
  return out;
}

TestSuiteFile parse_suite(std::string_view text) {
  TestSuiteFile suite;
  if (text.empty()) return suite;
  suite.final_newline = text.back() == '\n';
  if (suite.final_newline) text.remove_suffix(1);
  std::set<int> seen;
  int number = 0;
  std::size_t pos = 0;
  while (true) {
    ++number;
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    if (line.find('\r') != std::string_view::npos) throw SuiteError(number, "carriage return in line");
    TestSuiteFile::Line out{std::nullopt, std::string(line)};
    if (!blank(line) && line[0] != '#') {
      std::size_t t1 = line.find('\t');
      std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string_view::npos) throw SuiteError(number, "expected id<TAB>wf<TAB>text");
      Item item;
      item.id = parse_id(line.substr(0, t1), number);
      std::string_view wf = line.substr(t1 + 1, t2 - t1 - 1);
      if (wf != "0" && wf != "1") throw SuiteError(number, "wf must be 0 or 1");
      item.wf = wf == "1" ? 1 : 0;
      item.text = std::string(line.substr(t2 + 1));
      if (item.text.find('\t') != std::string::npos) throw SuiteError(number, "tab in item text");
      if (blank(item.text)) throw SuiteError(number, "empty item text");
      if (!seen.insert(item.id).second)
        throw SuiteError(number, "duplicate item id " + std::to_string(item.id));
      item.length = tokenize(item.text).size();
      out.record = item;
    }
    suite.lines.push_back(std::move(out));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return suite;
}

TestSuiteFile load_suite(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_suite(s.str());
}

std::string write_suite(const TestSuiteFile& suite) {
  std::string out;
  for (std::size_t i = 0; i < suite.lines.size(); ++i) {
    const auto& l = suite.lines[i];
    if (l.record)
      out += std::to_string(l.record->id) + '\t' + std::to_string(l.record->wf) + '\t' + l.record->text;
    else
      out += l.raw;
    if (i + 1 < suite.lines.size() || suite.final_newline) out += '\n';
  }
  return out;
}

}  // namespace hpsg
