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

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "hpsg/semantics/mrs.hpp"
#include "hpsg/treebank/treebank.hpp"
#include "json.hpp"

namespace hpsg {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string Verdict::to_string() const {
  switch (kind) {
    case VerdictKind::gold:
      return "gold(" + std::to_string(reading) + ")";
    case VerdictKind::reject_all:
      return "reject-all";
    case VerdictKind::unverified:
      break;
  }
  return "unverified";
}

const Item* Profile::item(int id) const {
  for (const auto& i : items)
    if (i.id == id) return &i;
  return nullptr;
}

const ItemRun* Profile::item_run(int id) const {
  for (const auto& r : run.items)
    if (r.id == id) return &r;
  return nullptr;
}

std::vector<const ResultRecord*> Profile::results_for(int id) const {
  std::vector<const ResultRecord*> out;
  for (const auto& r : results)
    if (r.item_id == id) out.push_back(&r);
  return out;
}

Verdict Profile::verdict(int id) const {
  for (auto it = decisions.rbegin(); it != decisions.rend(); ++it)
    if (it->item_id == id) return it->verdict;
  return Verdict::unverified();
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Profile create_profile(const Grammar& g, const std::vector<Item>& items,
                       const std::vector<ParseOutcome>& outcomes, const ParserLimits& limits) {
  if (items.size() != outcomes.size())
    throw ProfileError("got " + std::to_string(outcomes.size()) + " outcomes for " +
                       std::to_string(items.size()) + " items");
  std::set<int> ids;
  for (const auto& i : items)
    if (!ids.insert(i.id).second) throw ProfileError("duplicate item id " + std::to_string(i.id));

  Profile p;
  p.items = items;
  p.run.grammar_version = g.version();
  p.run.options = g.options();
  p.run.limits = limits;
  for (std::size_t n = 0; n < items.size(); ++n) {
    const auto& out = outcomes[n];
    auto readings = enumerate_readings(out.forest, limits.max_readings);
    for (std::size_t k = 0; k < readings.trees.size(); ++k) {
      const auto& fs = out.forest.edges[readings.edges[k]].fs;
      p.results.push_back({items[n].id, k, readings.trees[k].to_string(), canonicalize(extract_mrs(g, fs))});
    }
    p.run.items.push_back({items[n].id, out.status, out.stats.readings,
                           readings.trees.size() < out.stats.readings, out.stats.edges,
                           out.stats.elapsed_ms});
    p.run.elapsed_ms += out.stats.elapsed_ms;
    p.decisions.push_back({items[n].id, Verdict::unverified(), std::string(kSystemAnnotator), std::string(kEpoch)});
  }
  return p;
}

bool record_decision(Profile& p, int item_id, const Verdict& v, const std::string& annotator,
                     const std::string& timestamp) {
  if (!p.item(item_id)) throw ProfileError("unknown item " + std::to_string(item_id));
  if (v.kind == VerdictKind::gold) {
    auto n = p.results_for(item_id).size();
    if (v.reading >= n)
      throw ProfileError("item " + std::to_string(item_id) + " has " + std::to_string(n) +
                         " stored readings; cannot select reading " + std::to_string(v.reading));
  }
  if (p.verdict(item_id) == v) return false;
  p.decisions.push_back({item_id, v, annotator, timestamp});
  return true;
}

void validate_profile(const Profile& p) {
  std::map<int, std::size_t> readings;
  for (const auto& i : p.items) {
    if (i.id <= 0) throw ProfileError("item id must be positive");
    if (i.wf != 0 && i.wf != 1) throw ProfileError("item " + std::to_string(i.id) + ": wf must be 0 or 1");
    if (!readings.emplace(i.id, 0).second) throw ProfileError("duplicate item id " + std::to_string(i.id));
  }
  for (const auto& r : p.results) {
    auto it = readings.find(r.item_id);
    if (it == readings.end()) throw ProfileError("result for unknown item " + std::to_string(r.item_id));
    if (r.reading_index != it->second)
      throw ProfileError("item " + std::to_string(r.item_id) + ": reading index " +
                         std::to_string(r.reading_index) + " out of sequence");
    ++it->second;
  }
  for (const auto& d : p.decisions) {
    auto it = readings.find(d.item_id);
    if (it == readings.end()) throw ProfileError("decision for unknown item " + std::to_string(d.item_id));
    if (d.verdict.kind == VerdictKind::gold && d.verdict.reading >= it->second)
      throw ProfileError("item " + std::to_string(d.item_id) + ": gold reading " +
                         std::to_string(d.verdict.reading) + " does not exist");
  }
  if (p.run.items.size() != p.items.size()) throw ProfileError("run data does not cover the items");
  for (std::size_t n = 0; n < p.items.size(); ++n)
    if (p.run.items[n].id != p.items[n].id) throw ProfileError("run data out of item order");
}

std::string item_line(const Item& item) {
  json j;
  j["id"] = item.id;
  j["text"] = item.text;
  j["wf"] = item.wf;
  j["length"] = item.length;
  return j.dump();
}

std::string result_line(const ResultRecord& r) {
  json j;
  j["item-id"] = r.item_id;
  j["reading-index"] = r.reading_index;
  j["derivation"] = r.derivation;
  j["mrs"] = r.mrs;
  return j.dump();
}

std::string decision_line(const Decision& d) {
  json j;
  j["item-id"] = d.item_id;
  switch (d.verdict.kind) {
    case VerdictKind::gold:
      j["verdict"] = "gold";
      j["reading-index"] = d.verdict.reading;
      break;
    case VerdictKind::reject_all:
      j["verdict"] = "reject-all";
      break;
    case VerdictKind::unverified:
      j["verdict"] = "unverified";
      break;
  }
  j["annotator"] = d.annotator;
  j["timestamp"] = d.timestamp;
  return j.dump();
}

std::string run_json(const RunInfo& run) {
  json j;
  j["grammar-version"] = run.grammar_version;
  j["options"] = json::object();
  for (const auto& [k, v] : run.options) j["options"][k] = v;
  j["limits"] = {{"max-edges", run.limits.max_edges},
                 {"max-readings", run.limits.max_readings},
                 {"timeout-s", run.limits.timeout_s}};
  j["elapsed-ms"] = run.elapsed_ms;
  j["items"] = json::array();
  for (const auto& r : run.items)
    j["items"].push_back({{"id", r.id},
                          {"status", std::string(to_string(r.status))},
                          {"readings", r.readings},
                          {"truncated", r.truncated},
                          {"edges", r.edges},
                          {"elapsed-ms", r.elapsed_ms}});
  return j.dump(2) + "\n";
}

namespace {

const char* const kFiles[] = {"items.jsonl", "results.jsonl", "decisions.jsonl", "run.json"};

void write_atomically(const fs::path& file, const std::string& text) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw ProfileError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) throw ProfileError("cannot write " + file.string() + ": " + ec.message());
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ProfileError("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class F>
void each_record(const fs::path& file, F&& f) {
  std::string text = read_text(file);
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      f(json::parse(line));
    } catch (const json::exception& e) {
      throw ProfileError(file.filename().string() + ":" + std::to_string(number) + ": " + e.what());
    } catch (const ProfileError& e) {
      throw ProfileError(file.filename().string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

Verdict verdict_from(const json& j) {
  auto kind = j.at("verdict").get<std::string>();
  if (kind == "gold") return Verdict::gold(j.at("reading-index").get<std::size_t>());
  if (kind == "reject-all") return Verdict::reject_all();
  if (kind == "unverified") return Verdict::unverified();
  throw ProfileError("unknown verdict " + kind);
}

}  // namespace

void write_profile(const fs::path& dir, const Profile& p, bool overwrite) {
  validate_profile(p);
  std::error_code ec;
  if (fs::exists(dir, ec) && !overwrite) throw ProfileError(dir.string() + " already exists");
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw ProfileError("cannot create " + dir.string());
  std::string items, results, decisions;
  for (const auto& i : p.items) items += item_line(i) + "\n";
  for (const auto& r : p.results) results += result_line(r) + "\n";
  for (const auto& d : p.decisions) decisions += decision_line(d) + "\n";
  write_atomically(dir / "items.jsonl", items);
  write_atomically(dir / "results.jsonl", results);
  write_atomically(dir / "decisions.jsonl", decisions);
  write_atomically(dir / "run.json", run_json(p.run));
}

Profile read_profile(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ProfileError("no profile at " + dir.string());
  for (const char* f : kFiles)
    if (!fs::exists(dir / f)) throw ProfileError("profile " + dir.string() + " lacks " + f);
  Profile p;
  each_record(dir / "items.jsonl", [&](const json& j) {
    p.items.push_back({j.at("id").get<int>(), j.at("text").get<std::string>(), j.at("wf").get<int>(),
                       j.at("length").get<std::size_t>()});
  });
  each_record(dir / "results.jsonl", [&](const json& j) {
    p.results.push_back({j.at("item-id").get<int>(), j.at("reading-index").get<std::size_t>(),
                         j.at("derivation").get<std::string>(), j.at("mrs").get<std::string>()});
  });
  each_record(dir / "decisions.jsonl", [&](const json& j) {
    p.decisions.push_back({j.at("item-id").get<int>(), verdict_from(j), j.at("annotator").get<std::string>(),
                           j.at("timestamp").get<std::string>()});
  });
  try {
    auto j = json::parse(read_text(dir / "run.json"));
    p.run.grammar_version = j.at("grammar-version").get<std::string>();
    for (const auto& [k, v] : j.at("options").items()) p.run.options[k] = v.get<std::string>();
    const auto& l = j.at("limits");
    p.run.limits.max_edges = l.at("max-edges").get<std::size_t>();
    p.run.limits.max_readings = l.at("max-readings").get<std::size_t>();
    p.run.limits.timeout_s = l.at("timeout-s").get<double>();
    p.run.elapsed_ms = j.at("elapsed-ms").get<double>();
    for (const auto& r : j.at("items")) {
      auto status = parse_status(r.at("status").get<std::string>());
      if (!status) throw ProfileError("unknown status " + r.at("status").get<std::string>());
      p.run.items.push_back({r.at("id").get<int>(), *status, r.at("readings").get<std::size_t>(),
                             r.at("truncated").get<bool>(), r.at("edges").get<std::size_t>(),
                             r.at("elapsed-ms").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ProfileError("run.json: " + std::string(e.what()));
  }
  validate_profile(p);
  return p;
}

ProfileLock::ProfileLock(const fs::path& dir) {
  double timeout = 10;
  if (const char* env = std::getenv("GRAMMARCTL_PROFILE_LOCK_TIMEOUT")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v >= 0) timeout = v;
  }
  fd_ = ::open((dir / ".lock").c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw ProfileError("cannot open lock file in " + dir.string());
  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout);
  while (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    if (std::chrono::steady_clock::now() >= deadline) {
      ::close(fd_);
      fd_ = -1;
      throw LockTimeout("profile " + dir.string() + " is locked by another writer");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

ProfileLock::~ProfileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

Decision append_decision(const fs::path& dir, Profile& p, int item_id, const Verdict& v,
                         const std::string& annotator) {
  if (record_decision(p, item_id, v, annotator)) {
    std::ofstream out(dir / "decisions.jsonl", std::ios::binary | std::ios::app);
    out << decision_line(p.decisions.back()) << "\n";
    out.flush();
    if (!out) {
      p.decisions.pop_back();
      throw ProfileError("cannot append to decisions.jsonl");
    }
    return p.decisions.back();
  }
  for (auto it = p.decisions.rbegin(); it != p.decisions.rend(); ++it)
    if (it->item_id == item_id) return *it;
  return {item_id, v, annotator, utc_timestamp()};
}

Decision decide(const fs::path& dir, int item_id, const Verdict& v, const std::string& annotator) {
  ProfileLock lock(dir);
  Profile p = read_profile(dir);
  return append_decision(dir, p, item_id, v, annotator);
}

}  // namespace hpsg
