/*
 * Copyright 2026 The nocsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nocsim/charts.hpp"
#include "nocsim/config.hpp"
#include "nocsim/metrics.hpp"
#include "nocsim/sim.hpp"
#include "nocsim/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;
constexpr int kExitWatchdog = 4;

struct CommonArgs {
  std::string config_path;
  std::string preset = "table1";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::string out;
  std::string format = "csv";
  std::string flit_trace;
  std::string miss_dump;
  bool charts = false;
};

nocsim::ExperimentConfig resolve_config(const CommonArgs& a) {
  nocsim::ExperimentConfig cfg = nocsim::preset_config(a.preset);
  if (!a.config_path.empty()) {
    cfg = nocsim::load_config(a.config_path, cfg);
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.policy) cfg.policy = nocsim::parse_policy(*a.policy);
  cfg.validate();
  return cfg;
}

nocsim::ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return nocsim::ReportFormat::Csv;
  if (f == "json") return nocsim::ReportFormat::Json;
  throw nocsim::ConfigError("unknown format '" + f + "' (expected csv or json)");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw nocsim::ConfigError("cannot open output file: " + path);
  out << content;
  if (!out) throw nocsim::ConfigError("write failed: " + path);
}

std::string chart_path(const std::string& out, const std::string& suffix) {
  std::string stem = out.empty() ? std::string("nocsim") : out;
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos && dot > stem.find_last_of('/') + 0) {
    stem = stem.substr(0, dot);
  }
  return stem + "_" + suffix + ".svg";
}

int cmd_run(const CommonArgs& a) {
  nocsim::ExperimentConfig cfg = resolve_config(a);
  nocsim::RunOptions opt;
  opt.flit_trace_path = a.flit_trace;
  opt.miss_dump_path = a.miss_dump;
  nocsim::System sys(cfg, opt);
  const nocsim::RunSummary sum = sys.run();
  const std::string report =
      nocsim::emit_stats(sys.stats(), parse_format(a.format), cfg.to_kv_text());
  write_output(a.out, report);
  std::cerr << "run " << (sum.completed ? "completed" : "hit cycle limit")
            << " after " << sum.cycles << " cycles\n";
  return kExitOk;
}

int cmd_compare(const CommonArgs& a, const std::string& policies_csv) {
  nocsim::ExperimentConfig cfg = resolve_config(a);

  std::vector<nocsim::Policy> policies;
  {
    std::istringstream in(policies_csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (!tok.empty()) policies.push_back(nocsim::parse_policy(tok));
    }
  }
  if (policies.empty()) {
    throw nocsim::ConfigError("compare needs at least one policy");
  }

  nocsim::ComparisonReport rep;
  for (nocsim::Policy p : policies) {
    nocsim::ExperimentConfig run_cfg = cfg;
    run_cfg.policy = p;  // one seed, one workload, policy is the only change
    run_cfg.validate();
    nocsim::RunOptions opt;
    if (!a.flit_trace.empty()) {
      opt.flit_trace_path =
          a.flit_trace + "." + nocsim::policy_name(p);
    }
    if (!a.miss_dump.empty()) {
      opt.miss_dump_path = a.miss_dump + "." + nocsim::policy_name(p);
    }
    try {
      nocsim::System sys(run_cfg, opt);
      sys.run();
      rep.runs.push_back(sys.stats());
    } catch (const nocsim::WatchdogError& e) {
      throw nocsim::WatchdogError(std::string("policy ") +
                                  nocsim::policy_name(p) + ": " + e.what());
    }
  }
  rep.config_kv_text = cfg.to_kv_text();
  write_output(a.out, nocsim::emit_comparison(rep, parse_format(a.format)));

  if (a.charts) {
    std::vector<nocsim::BarChartSeries> penalty, speed;
    const auto& base = rep.runs.front();
    for (const auto& s : rep.runs) {
      const double norm = base.stall_penalty_mean == 0.0
                              ? 0.0
                              : s.stall_penalty_mean / base.stall_penalty_mean;
      penalty.push_back({s.policy_label, norm});
      speed.push_back({s.policy_label, nocsim::speedup(base, s)});
    }
    write_output(chart_path(a.out, "misspenalty"),
                 nocsim::render_bar_chart_svg(
                     "L1 miss penalty (stall, normalized)", penalty));
    write_output(chart_path(a.out, "speedup"),
                 nocsim::render_bar_chart_svg("System speedup", speed));
  }
  return kExitOk;
}

int cmd_profile(const CommonArgs& a) {
  nocsim::ExperimentConfig cfg = resolve_config(a);
  const nocsim::CriticalityHistogram hist = nocsim::profile_workload(cfg);
  std::string name = cfg.workload.profile_name;
  if (name.empty()) name = "workload";
  if (!a.out.empty()) {
    write_output(a.out, hist.report_csv(name));
  }
  std::cout << hist.report_table(name);
  return kExitOk;
}

int cmd_validate(const CommonArgs& a) {
  nocsim::ExperimentConfig cfg = resolve_config(a);
  std::cout << "config ok: " << cfg.mesh_k << "x" << cfg.mesh_k << " mesh, "
            << cfg.cores() << " cores, " << cfg.n_vcs << " VCs/port, "
            << cfg.reply_flits() << "-flit replies, policy "
            << nocsim::policy_name(cfg.policy) << "\n";
  return kExitOk;
}

int cmd_presets() {
  std::cout << "configuration presets:\n";
  for (const char* name : nocsim::preset_names()) {
    std::cout << "  " << name << "\n";
  }
  std::cout << "criticality profile presets (workload = profile):\n";
  for (const auto& name : nocsim::profile_preset_names()) {
    std::cout << "  " << name << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nocsim: mesh NoC + cache hierarchy simulator comparing "
               "baseline, early-restart and NoC-aware early-restart memory "
               "access policies"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string policies = "baseline,er,er-noc";

  auto add_common = [&](CLI::App* sub, bool with_policy) {
    sub->add_option("--config", args.config_path, "key = value config file");
    sub->add_option("--preset", args.preset,
                    "base preset (table1, desk, hotspot)");
    sub->add_option("--seed", args.seed, "override the config seed");
    if (with_policy) {
      sub->add_option("--policy", args.policy,
                      "override the policy (baseline, er, er-noc)");
    }
    sub->add_option("--out", args.out, "report file (default: stdout)");
    sub->add_option("--format", args.format, "report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* run = app.add_subcommand("run", "run one simulation");
  add_common(run, true);
  run->add_option("--flit-trace", args.flit_trace,
                  "write the per-hop flit event trace here");
  run->add_option("--miss-dump", args.miss_dump,
                  "write the per-miss record dump here");

  CLI::App* cmp = app.add_subcommand(
      "compare", "run the same workload under several policies");
  add_common(cmp, false);
  cmp->add_option("--policies", policies, "comma-separated policy list");
  cmp->add_option("--flit-trace", args.flit_trace,
                  "per-policy traces written to <path>.<policy>");
  cmp->add_option("--miss-dump", args.miss_dump,
                  "per-policy dumps written to <path>.<policy>");
  cmp->add_flag("--charts", args.charts,
                "emit miss-penalty and speedup SVG charts next to --out");

  CLI::App* prof = app.add_subcommand(
      "profile", "replay the workload through the L1 arrays and report the "
                 "critical-word position histogram");
  add_common(prof, false);

  CLI::App* val = app.add_subcommand("validate", "validate a config and exit");
  add_common(val, true);

  app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(args);
    if (cmp->parsed()) return cmd_compare(args, policies);
    if (prof->parsed()) return cmd_profile(args);
    if (val->parsed()) return cmd_validate(args);
    return cmd_presets();
  } catch (const nocsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nocsim::WatchdogError& e) {
    std::cerr << "watchdog: " << e.what() << "\n";
    return kExitWatchdog;
  } catch (const nocsim::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
