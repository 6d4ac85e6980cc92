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

#include "hpsg/metrics/metrics.hpp"

#include <cstdio>
#include <map>

#include "json.hpp"

namespace hpsg {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

MetricsReport compute_metrics(const Profile& p) {
  MetricsReport r;
  std::map<std::size_t, MetricsRow> buckets;
  MetricsRow all;
  std::size_t readings = 0;
  for (const auto& item : p.items) {
    const ItemRun* run = p.item_run(item.id);
    bool parsed = run && run->status == ParseStatus::parsed;
    if (item.wf == 0) {
      ++r.ungrammatical;
      r.ungrammatical_parsed += parsed;
      continue;
    }
    Verdict v = p.verdict(item.id);
    bool gold = parsed && v.kind == VerdictKind::gold;
    bool limit = run && run->status == ParseStatus::resource_limit;
    for (MetricsRow* row : {&buckets[item.length], &all}) {
      ++row->n_items;
      row->parsed += parsed;
      row->gold += gold;
      row->limit_hits += limit;
    }
    if (v.kind == VerdictKind::unverified) ++r.unverified_count;
    if (parsed) {
      readings += run->readings;
      r.ambiguity_capped = r.ambiguity_capped || run->truncated;
    }
  }
  for (auto& [length, row] : buckets) {
    row.length = length;
    r.rows.push_back(row);
  }
  if (!r.rows.empty()) r.rows.push_back(all);
  if (r.ungrammatical) r.overgeneration = double(r.ungrammatical_parsed) / double(r.ungrammatical);
  if (all.parsed) r.ambiguity_mean = double(readings) / double(all.parsed);
  return r;
}

std::string render_report(const MetricsReport& r, ReportFormat format) {
  if (format == ReportFormat::records) {
    using json = nlohmann::ordered_json;
    std::string out;
    for (const auto& row : r.rows) {
      json j;
      if (row.length)
        j["length"] = *row.length;
      else
        j["length"] = "ALL";
      j["n-items"] = row.n_items;
      j["coverage"] = row.coverage();
      j["accuracy"] = row.accuracy();
      j["limit-hits"] = row.limit_hits;
      out += j.dump() + "\n";
    }
    json s;
    s["summary"] = true;
    if (const MetricsRow* a = r.all()) {
      s["coverage"] = a->coverage();
      s["accuracy"] = a->accuracy();
    }
    if (r.overgeneration) s["overgeneration"] = *r.overgeneration;
    if (r.ambiguity_mean) s["ambiguity-mean"] = *r.ambiguity_mean;
    s["ambiguity-capped"] = r.ambiguity_capped;
    s["unverified-count"] = r.unverified_count;
    return out + s.dump() + "\n";
  }

  std::string out = "length  items  coverage  accuracy  limit-hits\n";
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : r.rows)
    cells.push_back({row.length ? std::to_string(*row.length) : "ALL", std::to_string(row.n_items),
                     fixed2(row.coverage()), fixed2(row.accuracy()), std::to_string(row.limit_hits)});
  std::vector<std::size_t> width(5, 0);
  for (const auto& c : cells)
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  for (const auto& c : cells) {
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "  " : "") + pad_left(c[i], width[i]);
    out += "\n";
  }
  const MetricsRow* a = r.all();
  if (!a && !r.overgeneration) return out;
  std::string summary;
  if (a) summary = "coverage " + fixed2(a->coverage()) + "  accuracy " + fixed2(a->accuracy());
  if (r.overgeneration) summary += (summary.empty() ? "" : "  ") + ("overgeneration " + fixed2(*r.overgeneration));
  out += summary + "\n";
  out += "ambiguity " + (r.ambiguity_mean ? fixed2(*r.ambiguity_mean) : std::string("n/a")) +
         (r.ambiguity_capped ? " (capped)" : "") + "  unverified " + std::to_string(r.unverified_count) + "\n";
  return out;
}

}  // namespace hpsg
