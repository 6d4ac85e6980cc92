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

#include <optional>
#include <string>
#include <vector>

#include "hpsg/treebank/treebank.hpp"

namespace hpsg {

/// Counts over the grammatical (wf=1) items of one length bucket, or of all
/// of them when `length` is empty.
struct MetricsRow {
  std::optional<std::size_t> length;
  std::size_t n_items = 0;
  std::size_t parsed = 0;
  std::size_t gold = 0;
  std::size_t limit_hits = 0;

  double coverage() const { return n_items ? double(parsed) / double(n_items) : 0.0; }
  double accuracy() const { return n_items ? double(gold) / double(n_items) : 0.0; }
  bool operator==(const MetricsRow&) const = default;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;  // by length, then the ALL row; empty without wf=1 items
  std::size_t ungrammatical = 0;
  std::size_t ungrammatical_parsed = 0;
  std::optional<double> overgeneration;  // absent without wf=0 items
  std::optional<double> ambiguity_mean;  // absent without parsed wf=1 items
  bool ambiguity_capped = false;         // some reading count was cut by max-readings
  std::size_t unverified_count = 0;      // wf=1 items without a decision

  const MetricsRow* all() const { return rows.empty() ? nullptr : &rows.back(); }
};

/// Resource-limit items count as not parsed and as limit hits. Items
/// without a gold decision count as not accurate.
MetricsReport compute_metrics(const Profile& p);

enum class ReportFormat { table, records };

/// Table: header, one right-aligned row per bucket and ALL, then the summary
/// line `coverage 0.92  accuracy 0.77  overgeneration 0.57` and a line with
/// ambiguity and unverified counts. Records: one JSON object per row, then a
/// summary object.
std::string render_report(const MetricsReport& r, ReportFormat format);

}  // namespace hpsg
