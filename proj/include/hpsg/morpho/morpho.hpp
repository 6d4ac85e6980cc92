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

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hpsg {

/// `start` and `end` count Unicode code points into the input.
struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct Reading {
  std::string lemma;
  std::string tag;

  bool operator==(const Reading&) const = default;
};

struct MorphAnalysis {
  Token token;
  std::vector<Reading> readings;

  bool operator==(const MorphAnalysis&) const = default;
};

/// Tokens with readings go to `analyses`, the rest to `failures`; both keep
/// input order.
struct SentenceLattice {
  std::string sentence;
  std::vector<MorphAnalysis> analyses;
  std::vector<Token> failures;

  std::size_t token_count() const { return analyses.size() + failures.size(); }
  bool complete() const { return failures.empty(); }

  bool operator==(const SentenceLattice&) const = default;
};

class MorphTableError : public std::runtime_error {
 public:
  MorphTableError(int line, const std::string& message)
      : std::runtime_error("morph.tsv:" + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// surface TAB lemma TAB tag; repeated surfaces are ambiguous forms.
class MorphTable {
 public:
  MorphTable() = default;
  /// Throws MorphTableError on malformed rows.
  static MorphTable parse(std::string_view tsv);
  /// Throws MorphTableError, or std::runtime_error if the file is unreadable.
  static MorphTable load(const std::filesystem::path& file);

  /// Readings in table order; nullptr when the form is absent.
  const std::vector<Reading>* find(std::string_view surface) const;
  const std::map<std::string, std::vector<Reading>, std::less<>>& forms() const { return forms_; }
  std::size_t size() const { return forms_.size(); }

 private:
  std::map<std::string, std::vector<Reading>, std::less<>> forms_;
};

/// Splits on whitespace; each of `. ? ! ,` becomes a token of its own.
std::vector<Token> tokenize(std::string_view text);

/// Lowercases ASCII and the Latin-1 letters used by Spanish.
std::string lowercase(std::string_view s);

/// Looks each token up as written, then lowercased.
SentenceLattice analyze(const MorphTable& table, std::string_view text);

}  // namespace hpsg
