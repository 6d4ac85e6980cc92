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
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hpsg/cli/service.hpp"
#include "hpsg/metrics/metrics.hpp"
#include "hpsg/morpho/morpho.hpp"
#include "views.hpp"

namespace hpsg {

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 success, 1 regression or invalid grammar, 2 operational failure.
constexpr int kOk = 0;
constexpr int kRegressed = 1;
constexpr int kFailure = 2;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Options parse_sets(const std::vector<std::string>& sets) {
  Options out;
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Failure("--set expects name=value, got '" + s + "'");
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

std::shared_ptr<const Grammar> grammar_or_fail(const fs::path& dir, const Options& overrides) {
  auto r = load_grammar(dir, overrides);
  if (!r.ok()) {
    std::string msg = "cannot load grammar " + dir.string();
    for (const auto& e : r.errors) msg += "\n  " + e.to_string();
    throw Failure(msg);
  }
  return r.grammar;
}

MorphTable morph_or_fail(const fs::path& dir) {
  try {
    return MorphTable::load(dir / "morph.tsv");
  } catch (const std::exception& e) {
    throw Failure(e.what());
  }
}

std::string default_annotator() {
  const char* user = std::getenv("USER");
  return user && *user ? user : "annotator";
}

int cmd_validate(const fs::path& dir, const Options& overrides) {
  auto r = load_grammar(dir, overrides);
  if (!r.ok()) {
    for (const auto& e : r.errors) std::cout << e.to_string() << "\n";
    return kRegressed;
  }
  const Grammar& g = *r.grammar;
  std::cout << "ok " << g.version() << "  types " << g.hierarchy().size() << "  lexicon "
            << g.lexicon().size() << "  lexical-rules " << g.lexical_rules().size() << "  rules "
            << g.phrase_rules().size() << "  roots " << g.roots().size() << "\n";
  return kOk;
}

int cmd_analyze(const fs::path& dir, const std::vector<std::string>& words) {
  auto table = morph_or_fail(dir);
  std::string text;
  for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
  auto lattice = analyze(table, text);
  // Both sequences keep input order, so merge them by start offset.
  std::size_t a = 0, f = 0;
  while (a < lattice.analyses.size() || f < lattice.failures.size()) {
    bool take_analysis = f >= lattice.failures.size() ||
                         (a < lattice.analyses.size() && lattice.analyses[a].token.start < lattice.failures[f].start);
    const Token& t = take_analysis ? lattice.analyses[a].token : lattice.failures[f];
    std::cout << t.surface << "\t" << t.start << "\t" << t.end;
    if (take_analysis) {
      for (const auto& r : lattice.analyses[a++].readings) std::cout << "\t" << r.lemma << " " << r.tag;
    } else {
      ++f;
      std::cout << "\t?";
    }
    std::cout << "\n";
  }
  return lattice.complete() ? kOk : kRegressed;
}

struct ParseArgs {
  fs::path grammar, suite, out;
  ParserLimits limits;
  bool force = false;
  unsigned jobs = 1;
  std::vector<std::string> sets;
};

int cmd_parse(const ParseArgs& a) {
  auto g = grammar_or_fail(a.grammar, parse_sets(a.sets));
  auto table = morph_or_fail(a.grammar);
  TestSuiteFile suite;
  try {
    suite = load_suite(a.suite);
  } catch (const std::exception& e) {
    throw Failure("suite " + a.suite.string() + ": " + e.what());
  }
  std::error_code ec;
  if (fs::exists(a.out, ec) && !a.force) throw Failure(a.out.string() + " exists; use --force to replace it");

  auto items = suite.items();
  std::vector<ParseOutcome> outcomes(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < items.size();)
      outcomes[i] = parse(*g, analyze(table, items[i].text), a.limits);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::max(1u, a.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Profile p = create_profile(*g, items, outcomes, a.limits);
  for (std::size_t i = 0; i < items.size(); ++i)
    std::cout << items[i].id << "\t" << to_string(outcomes[i].status) << "\t" << outcomes[i].stats.readings << "\n";
  std::optional<ProfileLock> lock;
  if (fs::exists(a.out, ec)) lock.emplace(a.out);
  write_profile(a.out, p, a.force);
  return kOk;
}

int cmd_decide(const fs::path& dir, int item, std::optional<std::size_t> gold, bool reject, bool unverify,
               const std::string& annotator) {
  if (int(gold.has_value()) + int(reject) + int(unverify) != 1)
    throw Failure("give exactly one of --gold K, --reject, --unverified");
  Verdict v = gold ? Verdict::gold(*gold) : reject ? Verdict::reject_all() : Verdict::unverified();
  Decision d = decide(dir, item, v, annotator);
  std::cout << decision_line(d) << "\n";
  return kOk;
}

int cmd_compare(const fs::path& gold, const fs::path& fresh, const std::string& report_out,
                const std::string& format) {
  ComparisonReport r = compare_profiles(read_profile(gold), read_profile(fresh));
  std::string text = format == "json" ? views::report(r).dump(2) + "\n" : write_report(r);
  std::cout << text;
  if (!report_out.empty()) {
    std::ofstream out(report_out, std::ios::binary);
    out << text;
    if (!out) throw Failure("cannot write " + report_out);
  }
  if (r.regressed()) {
    std::cerr << "regressions:";
    for (const auto& e : r.entries)
      if (e.category == Category::gold_lost || e.category == Category::reject_violated)
        std::cerr << " " << e.item_id << "(" << to_string(e.category) << ")";
    std::cerr << "\n";
  }
  return r.regressed() ? kRegressed : kOk;
}

int cmd_metrics(const fs::path& dir, const std::string& format) {
  std::cout << render_report(compute_metrics(read_profile(dir)),
                             format == "records" ? ReportFormat::records : ReportFormat::table);
  return kOk;
}

Mrs read_mrs_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Failure("cannot read " + file.string());
  std::ostringstream s;
  s << in.rdbuf();
  return read_mrs(s.str());
}

int cmd_mrs(const std::string& action, const fs::path& file, const std::string& format) {
  Mrs m = read_mrs_file(file);
  if (action == "check") {
    auto r = check_wellformed(m);
    for (const auto& v : r.violations) std::cout << v << "\n";
    return r.ok() ? kOk : kRegressed;
  }
  if (action == "canonical") {
    std::cout << canonicalize(m) << "\n";
    return kOk;
  }
  Dmrs d = to_dmrs(m);
  std::cout << (format == "json" ? views::dmrs(d).dump(2) + "\n" : write_dmrs(d));
  return kOk;
}

int cmd_serve(ServiceConfig config) {
  ProfileService service(config);
  int port = service.bind();
  std::cout << "serving " << config.profile_dir.string() << " on http://" << config.host << ":" << port
            << (config.read_only ? " (read-only)" : "") << std::endl;
  service.run();
  return kOk;
}

}  // namespace

int grammarctl_main(int argc, char** argv) {
  CLI::App app{"Grammar engineering toolkit: parse test suites, treebank, compare and measure."};
  app.require_subcommand(1);
  int code = kOk;
  std::function<int()> action;

  std::vector<std::string> sets;
  fs::path grammar_dir;

  auto* validate = app.add_subcommand("validate", "Load a grammar directory and report errors");
  validate->add_option("grammar", grammar_dir)->required();
  validate->add_option("--set", sets, "Override an option, name=value")->allow_extra_args(false);
  validate->callback([&] { action = [&] { return cmd_validate(grammar_dir, parse_sets(sets)); }; });

  std::vector<std::string> words;
  auto* analyze_cmd = app.add_subcommand("analyze", "Tokenize and look up a sentence");
  analyze_cmd->add_option("grammar", grammar_dir)->required();
  analyze_cmd->add_option("text", words)->required();
  analyze_cmd->callback([&] { action = [&] { return cmd_analyze(grammar_dir, words); }; });

  ParseArgs pa;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a test suite into a new profile");
  parse_cmd->add_option("grammar", pa.grammar)->required();
  parse_cmd->add_option("suite", pa.suite)->required();
  parse_cmd->add_option("profile", pa.out)->required();
  parse_cmd->add_option("--max-edges", pa.limits.max_edges)->capture_default_str();
  parse_cmd->add_option("--max-readings", pa.limits.max_readings)->capture_default_str();
  parse_cmd->add_option("--timeout-s", pa.limits.timeout_s)->capture_default_str();
  parse_cmd->add_option("--jobs", pa.jobs, "Parallel parse workers")->capture_default_str();
  parse_cmd->add_option("--set", pa.sets, "Override an option, name=value")->allow_extra_args(false);
  parse_cmd->add_flag("--force", pa.force, "Replace an existing profile");
  parse_cmd->callback([&] { action = [&] { return cmd_parse(pa); }; });

  auto* treebank = app.add_subcommand("treebank", "Record decisions and compare profiles");
  treebank->require_subcommand(1);
  fs::path profile_dir;
  int item = 0;
  std::optional<std::size_t> gold;
  bool reject = false, unverify = false;
  std::string annotator = default_annotator();
  auto* decide_cmd = treebank->add_subcommand("decide", "Record a gold reading or reject all readings");
  decide_cmd->add_option("profile", profile_dir)->required();
  decide_cmd->add_option("--item", item)->required();
  decide_cmd->add_option("--gold", gold, "Index of the gold reading");
  decide_cmd->add_flag("--reject", reject, "Reject every reading");
  decide_cmd->add_flag("--unverified", unverify, "Withdraw the decision");
  decide_cmd->add_option("--annotator", annotator)->capture_default_str();
  decide_cmd->callback([&] { action = [&] { return cmd_decide(profile_dir, item, gold, reject, unverify, annotator); }; });

  fs::path gold_dir, fresh_dir;
  std::string report_out, format = "text";
  auto* compare_cmd = treebank->add_subcommand("compare", "Compare a new profile with a gold profile");
  compare_cmd->add_option("gold", gold_dir)->required();
  compare_cmd->add_option("new", fresh_dir)->required();
  compare_cmd->add_option("--report", report_out, "Also write the report here");
  compare_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  compare_cmd->callback([&] { action = [&] { return cmd_compare(gold_dir, fresh_dir, report_out, format); }; });

  std::string metrics_format = "table";
  auto* metrics_cmd = app.add_subcommand("metrics", "Coverage, accuracy and overgeneration of a profile");
  metrics_cmd->add_option("profile", profile_dir)->required();
  metrics_cmd->add_option("--format", metrics_format)->check(CLI::IsMember({"table", "records"}));
  metrics_cmd->callback([&] { action = [&] { return cmd_metrics(profile_dir, metrics_format); }; });

  auto* mrs_cmd = app.add_subcommand("mrs", "Convert or check an MRS file");
  mrs_cmd->require_subcommand(1);
  fs::path mrs_file;
  std::string mrs_format = "text";
  for (const char* name : {"dmrs", "canonical", "check"}) {
    auto* sub = mrs_cmd->add_subcommand(name, std::string(name) == "dmrs"        ? "Print the DMRS graph"
                                              : std::string(name) == "canonical" ? "Print the canonical form"
                                                                                 : "List well-formedness violations");
    sub->add_option("file", mrs_file)->required();
    if (std::string(name) == "dmrs") sub->add_option("--format", mrs_format)->check(CLI::IsMember({"text", "json"}));
    sub->callback([&, name] { action = [&, name] { return cmd_mrs(name, mrs_file, mrs_format); }; });
  }

  ServiceConfig config;
  std::string service_grammar;
  auto* serve_cmd = app.add_subcommand("serve", "Serve a profile over HTTP");
  serve_cmd->add_option("profile", config.profile_dir)->required();
  serve_cmd->add_option("--grammar", service_grammar, "Grammar directory to report alongside the profile");
  serve_cmd->add_option("--port", config.port)->capture_default_str();
  serve_cmd->add_option("--host", config.host)->capture_default_str();
  serve_cmd->add_flag("--read-only", config.read_only, "Refuse decisions");
  serve_cmd->callback([&] {
    action = [&] {
      if (!service_grammar.empty()) config.grammar_dir = service_grammar;
      return cmd_serve(config);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kFailure;
  }
  try {
    code = action ? action() : kFailure;
  } catch (const GrammarLoadFailure& e) {
    std::cerr << "grammarctl: " << e.what() << "\n";
    for (const auto& err : e.errors()) std::cerr << "  " << err.to_string() << "\n";
    code = kFailure;
  } catch (const std::exception& e) {
    std::cerr << "grammarctl: " << e.what() << "\n";
    code = kFailure;
  }
  return code;
}

}  // namespace hpsg
