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

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hpsg/grammar/grammar.hpp"
#include "hpsg/parser/parser.hpp"

namespace hpsg {

struct Item {
  int id = 0;
  std::string text;
  int wf = 1;
  std::size_t length = 0;  // tokens

  bool operator==(const Item&) const = default;
};

/// Suite file: `id<TAB>wf<TAB>text` records, `#` comment lines and blank
/// lines kept verbatim so that writing a loaded file reproduces it.
struct TestSuiteFile {
  struct Line {
    std::optional<Item> record;  // nullopt for comments and blank lines
    std::string raw;
  };
  std::vector<Line> lines;
  bool final_newline = true;

  std::vector<Item> items() const;
};

class SuiteError : public std::runtime_error {
 public:
  SuiteError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Throws SuiteError on malformed records and duplicate ids. Item lengths are
/// filled in by the tokenizer.
TestSuiteFile parse_suite(std::string_view text);
TestSuiteFile load_suite(const std::filesystem::path& file);
std::string write_suite(const TestSuiteFile& suite);

struct ResultRecord {
  int item_id = 0;
  std::size_t reading_index = 0;
  std::string derivation;
  std::string mrs;  // canonical form

  bool operator==(const ResultRecord&) const = default;
};

enum class VerdictKind { gold, reject_all, unverified };

struct Verdict {
  VerdictKind kind = VerdictKind::unverified;
  std::size_t reading = 0;  // gold only

  static Verdict gold(std::size_t k) { return {VerdictKind::gold, k}; }
  static Verdict reject_all() { return {VerdictKind::reject_all, 0}; }
  static Verdict unverified() { return {VerdictKind::unverified, 0}; }
  /// `gold(2)`, `reject-all`, `unverified`.
  std::string to_string() const;
  bool operator==(const Verdict&) const = default;
};

struct Decision {
  int item_id = 0;
  Verdict verdict;
  std::string annotator;
  std::string timestamp;  // RFC 3339, UTC

  bool operator==(const Decision&) const = default;
};

/// Per-item run data kept in run.json.
struct ItemRun {
  int id = 0;
  ParseStatus status = ParseStatus::no_parse;
  std::size_t readings = 0;  // before the max-readings cap
  bool truncated = false;    // fewer results stored than readings
  std::size_t edges = 0;
  double elapsed_ms = 0;

  bool operator==(const ItemRun&) const = default;
};

struct RunInfo {
  std::string grammar_version;
  Options options;
  ParserLimits limits;
  std::vector<ItemRun> items;  // item order
  double elapsed_ms = 0;
};

struct Profile {
  std::vector<Item> items;
  std::vector<ResultRecord> results;  // item order, then reading index
  std::vector<Decision> decisions;    // append-only log
  RunInfo run;

  const Item* item(int id) const;
  const ItemRun* item_run(int id) const;
  std::vector<const ResultRecord*> results_for(int id) const;
  /// Latest decision for the item; unverified when there is none.
  Verdict verdict(int id) const;
};

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial decision rows carry this annotator and the epoch as timestamp.
inline constexpr std::string_view kSystemAnnotator = "grammarctl";
inline constexpr std::string_view kEpoch = "1970-01-01T00:00:00Z";

std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now());

/// Stores up to limits.max_readings readings per item with canonical MRSs and
/// an unverified decision per item. Throws ProfileError on duplicate ids or
/// when the outcome count differs from the item count.
Profile create_profile(const Grammar& g, const std::vector<Item>& items,
                       const std::vector<ParseOutcome>& outcomes, const ParserLimits& limits);

/// Validates and appends a decision; returns false and leaves the log alone
/// when the item's verdict already equals `v`. Throws ProfileError for unknown
/// items and gold indices without a stored reading.
bool record_decision(Profile& p, int item_id, const Verdict& v, const std::string& annotator,
                     const std::string& timestamp = utc_timestamp());

/// Checks referential integrity and record invariants. Throws ProfileError.
void validate_profile(const Profile& p);

/// Writes the four record files. The directory must not exist unless
/// `overwrite`. Throws ProfileError.
void write_profile(const std::filesystem::path& dir, const Profile& p, bool overwrite = false);
/// Throws ProfileError.
Profile read_profile(const std::filesystem::path& dir);

/// One JSON object per line, as stored.
std::string item_line(const Item& item);
std::string result_line(const ResultRecord& r);
std::string decision_line(const Decision& d);
std::string run_json(const RunInfo& run);

/// Exclusive writer lock on a profile directory. Waits up to
/// GRAMMARCTL_PROFILE_LOCK_TIMEOUT seconds (default 10) for another writer.
class ProfileLock {
 public:
  explicit ProfileLock(const std::filesystem::path& dir);
  ~ProfileLock();
  ProfileLock(const ProfileLock&) = delete;
  ProfileLock& operator=(const ProfileLock&) = delete;

 private:
  int fd_ = -1;
};

class LockTimeout : public ProfileError {
 public:
  using ProfileError::ProfileError;
};

/// Records the decision in `p` and appends it to decisions.jsonl in `dir`,
/// which must hold `p`. The caller holds the profile lock. Returns the
/// decision that now holds for the item.
Decision append_decision(const std::filesystem::path& dir, Profile& p, int item_id, const Verdict& v,
                         const std::string& annotator);

/// Takes the lock, reads the profile and calls append_decision.
Decision decide(const std::filesystem::path& dir, int item_id, const Verdict& v,
                const std::string& annotator);

enum class Category {
  gold_preserved,
  gold_lost,
  coverage_gained,
  coverage_lost,
  still_no_parse,
  reject_preserved,
  reject_violated,
  unverified,
};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);
const std::vector<Category>& all_categories();

struct ComparisonEntry {
  int item_id = 0;
  Category category = Category::unverified;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;  // gold profile item order
  std::map<Category, std::size_t> counts;

  /// gold-lost or reject-violated present.
  bool regressed() const;
};

/// Gold items: preserved when some new reading is equivalent to the gold
/// MRS. Rejected items: violated when the new profile has a reading not
/// equivalent to any reading that was rejected. Other items by status.
/// Throws ProfileError when the item sets or texts differ.
ComparisonReport compare_profiles(const Profile& gold, const Profile& fresh);

/// `<id> <category>` lines, then `<category> <count>` lines.
std::string write_report(const ComparisonReport& r);

}  // namespace hpsg
