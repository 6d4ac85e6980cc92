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

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hpsg::tdl {

struct Location {
  std::string file;
  int line = 0;
  int column = 0;
};

std::string to_string(const Location& loc);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Location loc, const std::string& message)
      : std::runtime_error(to_string(loc) + ": " + message), loc_(std::move(loc)), message_(message) {}
  const Location& location() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  Location loc_;
  std::string message_;
};

struct Term;

/// `t1 & t2 & ...`
struct Conjunction {
  std::vector<Term> terms;
};

struct AvPair {
  std::vector<std::string> path;
  Conjunction value;
  Location loc;
};

struct Term {
  enum class Kind { type, string, coref, avm, list, diff_list };

  Kind kind = Kind::type;
  Location loc;
  std::string text;                // type name, string contents or tag name
  std::vector<AvPair> pairs;       // avm
  std::vector<Conjunction> items;  // list / diff_list elements
  bool open = false;               // `< a, ... >`
  std::vector<Conjunction> tail;   // `< a . tail >`, at most one element
};

struct Definition {
  std::string name;
  Conjunction body;
  Location loc;
};

/// Returns whether a `:if name` block is active.
using OptionPredicate = std::function<bool(std::string_view)>;

/// Parses a file of `Name := conjunction .` definitions. Lines starting with
/// `:if name`, `:if !name` or `:endif` include or drop the enclosed lines.
/// Throws SyntaxError.
std::vector<Definition> parse(std::string_view text, const std::string& file,
                              const OptionPredicate& enabled = {});

/// Parses a single conjunction (no name, no final period).
Conjunction parse_conjunction(std::string_view text, const std::string& file = "<string>");

/// Collects the contents of every string literal in `c`.
void collect_strings(const Conjunction& c, std::vector<std::string>& out);

}  // namespace hpsg::tdl
