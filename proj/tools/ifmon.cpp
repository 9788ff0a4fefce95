/*
 * Copyright (c) 2026, The ifmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Reports go to stdout as JSON, diagnostics to
// stderr.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ifmon/ifmon.hpp"
#include "ifmon/driver.hpp"

namespace {

void add_run_options(CLI::App *cmd, ifmon::RunRequest &req) {
  cmd->add_option("--program,-p", req.program_path, "program file")
      ->required();
  cmd->add_option("--state,-s", req.state, "initial state, e.g. x=1,y=0");
  cmd->add_option("--state-file", req.state_file,
                  "initial state file, one name=value per line");
  cmd->add_option("--delta", req.delta,
                  "initial formula set, e.g. \"A x, B 0 < y\" (default empty)");
  cmd->add_option("--fuel", req.fuel, "step budget")->capture_default_str();
  cmd->add_option("--widen-after", req.widen_after,
                  "interval iterations before widening")
      ->capture_default_str();
  cmd->add_flag("--timing", req.timing, "include wall-clock timing");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hybrid information-flow monitors for a small while language"};
  app.require_subcommand(1);

  ifmon::RunRequest run_req;
  std::string kind = "d";
  auto *run = app.add_subcommand("run", "run a program under one monitor");
  add_run_options(run, run_req);
  run->add_option("--monitor,-m", kind, "monitor: d, m or i")
      ->capture_default_str();
  run->add_flag("--trace", run_req.trace, "include the step-by-step trace");

  ifmon::RunRequest cmp_req;
  bool table = false;
  auto *compare =
      app.add_subcommand("compare", "run the three monitors side by side");
  add_run_options(compare, cmp_req);
  compare->add_flag("--table", table, "print a table instead of JSON");

  ifmon::IdealRequest ideal_req;
  std::string ideal_range = "0..2";
  auto *ideal = app.add_subcommand(
      "ideal", "replay the ideal monitor over an explicit tracking set");
  add_run_options(ideal, ideal_req.run);
  ideal->add_option("--tracking", ideal_req.tracking,
                    "tracking states separated by ';' (default: every state "
                    "in the range related by --delta)");
  ideal->add_option("--range", ideal_range, "value range LO..HI")
      ->capture_default_str();

  ifmon::OracleConfig ocfg;
  std::string suite;
  std::string orange = "0..2";
  std::uint64_t ofuel = ocfg.fuel.max_steps;
  bool otiming = false;
  auto *oracle = app.add_subcommand("oracle", "run a property suite");
  oracle->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(ifmon::suite_names()));
  oracle->add_option("--vars", ocfg.vars, "number of variables (1-3)")
      ->capture_default_str();
  oracle->add_option("--range", orange, "value range LO..HI")
      ->capture_default_str();
  oracle->add_option("--depth", ocfg.depth, "program depth bound")
      ->capture_default_str();
  oracle->add_option("--samples", ocfg.samples, "number of samples")
      ->capture_default_str();
  oracle->add_option("--seed", ocfg.seed, "random seed")->capture_default_str();
  oracle->add_option("--threads", ocfg.threads, "worker threads (0: all cores)")
      ->capture_default_str();
  oracle->add_option("--fuel", ofuel, "step budget per run")
      ->capture_default_str();
  oracle->add_option("--widen-after", ocfg.widen_after,
                     "interval iterations before widening")
      ->capture_default_str();
  oracle->add_flag("--timing", otiming, "include wall-clock timing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ifmon::exit_usage;
  }

  try {
    ifmon::CommandResult result;
    if (*run) {
      try {
        run_req.kind = ifmon::parse_kind(kind);
      } catch (const std::invalid_argument &e) {
        throw ifmon::UsageError(e.what());
      }
      result = ifmon::cmd_run(run_req);
    } else if (*compare) {
      result = ifmon::cmd_compare(cmp_req);
      if (table) {
        std::cout << ifmon::compare_table(result.report);
        return result.exit_code;
      }
    } else if (*ideal) {
      std::tie(ideal_req.lo, ideal_req.hi) = ifmon::parse_range(ideal_range);
      result = ifmon::cmd_ideal(ideal_req);
    } else {
      std::tie(ocfg.lo, ocfg.hi) = ifmon::parse_range(orange);
      ocfg.fuel = ifmon::Fuel{ofuel};
      result = ifmon::cmd_oracle(suite, ocfg, otiming);
    }
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
  } catch (const ifmon::UsageError &e) {
    std::cerr << "ifmon: " << e.what() << "\n";
    return ifmon::exit_usage;
  } catch (const ifmon::ArithmeticOverflow &e) {
    std::cerr << "ifmon: " << e.what() << "\n";
    return ifmon::exit_runtime;
  } catch (const std::exception &e) {
    std::cerr << "ifmon: internal error: " << e.what() << "\n";
    return ifmon::exit_usage;
  }
}
