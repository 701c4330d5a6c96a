// Copyright 2026 The thermoprop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "thermoprop/errors.hpp"
#include "thermoprop/experiment.hpp"

namespace {

namespace ex = thermoprop::experiment;
using nlohmann::json;

constexpr int kExitFailedCheck = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw thermoprop::ConfigError("<file>: cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw thermoprop::ConfigError("<file>: " + std::string(e.what()));
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw thermoprop::ConfigError("output_path: cannot write '" + path.string() + "'");
  return out;
}

/// Writes the resolved config next to `output` and echoes it to stdout.
void log_config(const json& resolved, const std::filesystem::path& output) {
  const std::string text = resolved.dump(2);
  std::cout << text << '\n';
  auto out = open_output(output.string() + ".config.json");
  out << text << '\n';
}

std::filesystem::path sibling(const std::filesystem::path& output, const std::string& suffix) {
  auto stem = output;
  stem.replace_extension();
  return stem.string() + suffix;
}

ex::ExperimentConfig experiment_config(const json& doc, std::optional<std::uint64_t> seed) {
  auto c = ex::parse_config(doc);
  if (seed) c.seed = *seed;
  return c;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed) {
  const auto c = experiment_config(read_json(path), seed);
  const std::filesystem::path out_path = c.output_path;
  log_config(ex::to_json(c), out_path);
  const auto result = ex::run_experiment(c);
  auto out = open_output(out_path);
  ex::write_run_csv(out, result.rows, c);
  if (result.lattice) {
    auto lat = open_output(sibling(out_path, "_lattice.csv"));
    thermoprop::write_lattice_csv(lat, *result.lattice);
    auto edges = open_output(sibling(out_path, "_edges.csv"));
    thermoprop::write_edges_csv(edges, *result.lattice);
  }
  if (!result.czz.empty()) {
    auto czz = open_output(sibling(out_path, "_czz.csv"));
    ex::write_czz_csv(czz, result.czz);
  }
  std::cerr << "wrote " << result.rows.size() << " rows to " << out_path.string() << '\n';
  return 0;
}

int cmd_compare(const std::string& path, std::optional<std::uint64_t> seed) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw thermoprop::ConfigError("<root>: expected an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "configs" && it.key() != "output_path") throw thermoprop::ConfigError(it.key() + ": unknown field");
  }
  if (!doc.contains("configs") || !doc.at("configs").is_array() || doc.at("configs").size() != 2) {
    throw thermoprop::ConfigError("configs: expected an array of two experiment configs");
  }
  std::vector<ex::ExperimentConfig> configs;
  for (std::size_t i = 0; i < 2; ++i) {
    try {
      configs.push_back(experiment_config(doc.at("configs")[i], seed));
    } catch (const thermoprop::ConfigError& e) {
      throw thermoprop::ConfigError("configs[" + std::to_string(i) + "]." + e.what());
    }
  }
  std::string output = "compare.csv";
  if (doc.contains("output_path")) {
    if (!doc.at("output_path").is_string()) throw thermoprop::ConfigError("output_path: expected a string");
    output = doc.at("output_path").get<std::string>();
  }
  const std::filesystem::path out_path = output;
  log_config(json{{"configs", {ex::to_json(configs[0]), ex::to_json(configs[1])}}, {"output_path", output}}, out_path);
  const auto rows = ex::compare_schedulers(configs[0], configs[1]);
  auto out = open_output(out_path);
  ex::write_compare_csv(out, rows);
  std::cerr << "wrote " << rows.size() << " rows to " << output << '\n';
  return 0;
}

int cmd_backflow(const std::string& path, std::optional<std::uint64_t> seed) {
  auto c = ex::parse_backflow_config(read_json(path));
  if (seed) c.seed = *seed;
  const std::filesystem::path out_path = c.output_path;
  log_config(ex::to_json(c), out_path);
  const auto rows = ex::backflow_scan(c);
  auto out = open_output(out_path);
  thermoprop::write_backflow_csv(out, rows);
  std::cerr << "wrote " << rows.size() << " rows to " << c.output_path << '\n';
  return 0;
}

int cmd_oracle_check(const std::string& path, std::optional<std::uint64_t> seed) {
  const auto c = experiment_config(read_json(path), seed);
  std::cout << ex::to_json(c).dump(2) << '\n';
  const auto report = ex::oracle_check(c);
  ex::write_oracle_report(std::cout, report, c.tolerance);
  const bool pass = report.product_formula_pass && report.scaling_pass && report.min_log_factor >= -1e-12;
  return pass ? 0 : kExitFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal-state propagation experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "Override the config seed");
    return sub;
  };
  auto* run = add("run", "Propagate and write one CSV row per checkpoint and replica");
  auto* compare = add("compare", "Truncated vs untruncated energy error for two schedulers");
  auto* backflow = add("backflow", "Analytic vs empirical backflow probabilities");
  auto* oracle = add("oracle-check", "Untruncated propagation against the dense oracles");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  try {
    if (run->parsed()) return cmd_run(config_path, seed);
    if (compare->parsed()) return cmd_compare(config_path, seed);
    if (backflow->parsed()) return cmd_backflow(config_path, seed);
    if (oracle->parsed()) return cmd_oracle_check(config_path, seed);
  } catch (const thermoprop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const thermoprop::SimulationDiverged& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const thermoprop::TermCapExceeded& e) {
    std::cerr << "term cap: " << e.what() << '\n';
    return kExitDiverged;
  }
  return kExitFailedCheck;
}
