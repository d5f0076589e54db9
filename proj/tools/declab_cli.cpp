// Copyright 2026 The declab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// declab: command-line experiment runner.
//
//   declab [SUBCOMMAND] [--config FILE] [--set key=value ...] [--out FILE]
//          [--dump-circuits FILE] [--dims d0,d1,...] [--cut "a|b"]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "declab/cli/config.hpp"
#include "declab/cli/runner.hpp"

namespace dc = declab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Random diagonal-unitary decoupling experiments"};
  std::string subcommand, config_path, out_path, dump_path, dims, cut;
  std::vector<std::string> sets;
  std::string sub_help = "one of:";
  for (const std::string& s : dc::subcommand_names()) sub_help += " " + s;
  app.add_option("subcommand", subcommand, sub_help);
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", sets, "override a key (repeatable), e.g. --set samples=100");
  app.add_option("--out", out_path, "CSV output path (default: standard output)");
  app.add_option("--dump-circuits", dump_path, "write every sampled D[l] circuit here");
  app.add_option("--dims", dims, "subsystem dimensions of the state file, e.g. 2,2");
  app.add_option("--cut", cut, "bipartition for conditional entropies, e.g. \"0|1\"");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dc::kExitUsage;
  }

  std::string source;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return dc::kExitUsage;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    source = ss.str();
  }

  dc::ExperimentConfig cfg;
  try {
    std::vector<dc::Assignment> overrides;
    if (!subcommand.empty()) overrides.push_back({"subcommand", subcommand, "command line"});
    if (!dims.empty()) overrides.push_back({"dims", dims, "--dims"});
    if (!cut.empty()) overrides.push_back({"cut", cut, "--cut"});
    if (!out_path.empty()) overrides.push_back({"out", out_path, "--out"});
    if (!dump_path.empty()) overrides.push_back({"dump_circuits", dump_path, "--dump-circuits"});
    for (std::size_t i = 0; i < sets.size(); ++i) {
      overrides.push_back(dc::parse_override(sets[i], static_cast<int>(i) + 1));
    }
    cfg = dc::parse_config(source, overrides);
  } catch (const dc::ConfigError& e) {
    for (const std::string& msg : e.errors()) std::cerr << "config error: " << msg << "\n";
    return dc::kExitUsage;
  }

  std::ofstream out_file, dump_file;
  if (!cfg.out_path.empty()) {
    out_file.open(cfg.out_path, std::ios::binary);
    if (!out_file) {
      std::cerr << "error: cannot write " << cfg.out_path << "\n";
      return dc::kExitUsage;
    }
  }
  if (cfg.has("dump_circuits")) {
    const std::string path = cfg.get_string("dump_circuits", "");
    dump_file.open(path, std::ios::binary);
    if (!dump_file) {
      std::cerr << "error: cannot write " << path << "\n";
      return dc::kExitUsage;
    }
  }
  std::ostream& csv = cfg.out_path.empty() ? std::cout : out_file;
  // Keep standard output pure CSV when it carries the table.
  std::ostream& summary = cfg.out_path.empty() ? std::cerr : std::cout;
  dc::RunIo io{csv, summary, std::cerr, dump_file.is_open() ? &dump_file : nullptr};
  return dc::run(cfg, io);
}
