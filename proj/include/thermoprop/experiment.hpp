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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermoprop/bounds.hpp"
#include "thermoprop/models.hpp"
#include "thermoprop/operator_map.hpp"
#include "thermoprop/propagation.hpp"
#include "thermoprop/schedule.hpp"

namespace thermoprop::experiment {

enum class ModelKind { j1j2, random_2local, fermi_hubbard };

struct ModelSpec {
  ModelKind kind = ModelKind::j1j2;
  std::size_t n = 10;
  double j1 = 1.0;
  double j2 = 0.5;
  J1J2Order order = J1J2Order::j1_then_j2;
  Geometry geometry = Geometry::heisenberg_1d;
  std::size_t n_terms = 0;
  std::uint64_t seed = 0;
  std::size_t rings = 1;
  double t = 1.0;
  double u = 8.0;
  double mu = 4.0;
};

struct SchedulerSpec {
  ScheduleSource kind = ScheduleSource::trotter;
  double tau = 0.02;
  double beta_max = 1.0;
  /// Empty means a single checkpoint at beta_max.
  std::vector<double> checkpoints;
  TrotterOrdering ordering = TrotterOrdering::construction;
  int shuffle_group = 0;
  bool allow_tail = false;
};

inline const std::vector<std::string> kObservableNames = {"energy", "energy_density", "czz_map", "log_partition",
                                                          "term_count"};

struct ExperimentConfig {
  ModelSpec model;
  SchedulerSpec scheduler;
  /// One sweep cell per policy.
  std::vector<TruncationPolicy> truncations{TruncationPolicy{}};
  std::vector<std::string> observables{"energy", "energy_density", "log_partition", "term_count"};
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::string output_path = "results.csv";
  std::size_t max_terms = 50'000'000;
  KernelKind kernel = KernelKind::parallel;
  /// Beta of the C_ZZ export; defaults to beta_max.
  std::optional<double> czz_beta;
  /// Absolute tolerance of oracle_check against the product-formula oracle.
  double tolerance = 1e-8;

  bool wants(const std::string& observable) const;
};

/// Reads a config; missing fields take the defaults above. Throws
/// ConfigError whose message starts with the offending field path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
/// Fully resolved config, defaults included.
nlohmann::json to_json(const ExperimentConfig& config);

/// Qubit count of a spin model or site count of a lattice model.
std::size_t n_sites(const ModelSpec& model);

struct RunRow {
  std::size_t cell = 0;
  TruncationPolicy policy;
  std::size_t replica = 0;
  double beta = 0.0;
  double energy = 0.0;
  double energy_density = 0.0;
  std::size_t n_terms = 0;
  double log_partition = 0.0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

struct CzzRow {
  std::size_t site = 0;
  double x = 0.0;
  double y = 0.0;
  double czz = 0.0;
};

struct RunResult {
  std::vector<RunRow> rows;
  /// Filled for Fermi-Hubbard runs that request czz_map: cell 0, replica 0.
  std::vector<CzzRow> czz;
  std::optional<HexTriangularLattice> lattice;
};

/// Rows sorted by (cell, replica, checkpoint). Throws SimulationDiverged or
/// TermCapExceeded.
RunResult run_experiment(const ExperimentConfig& config);

/// "cell,coeff_threshold,max_weight,max_sinh_count,replica,beta,energy,
/// energy_density,n_terms,log_partition,wall_ms,seed"; unrequested values
/// are written as nan and absent cutoffs as empty fields.
void write_run_csv(std::ostream& os, const std::vector<RunRow>& rows, const ExperimentConfig& config);
/// "site_index,x,y,czz".
void write_czz_csv(std::ostream& os, const std::vector<CzzRow>& rows);

struct CompareRow {
  ScheduleSource scheduler = ScheduleSource::trotter;
  std::size_t cell = 0;
  TruncationPolicy policy;
  double beta = 0.0;
  double mean_relative_error = 0.0;
  double stderr_relative_error = 0.0;
  double mean_terms = 0.0;
  std::size_t replicas = 0;
};

/// Truncated propagation against the dense product-formula oracle of the
/// same gate sequence, per scheduler, cell and checkpoint. Both configs must
/// describe the same spin model (at most 10 qubits) and checkpoint grid.
std::vector<CompareRow> compare_schedulers(const ExperimentConfig& a, const ExperimentConfig& b);

/// "scheduler,cell,coeff_threshold,max_weight,max_sinh_count,beta,
/// mean_relative_error,stderr_relative_error,mean_terms,replicas".
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);

struct BackflowScanConfig {
  Geometry geometry = Geometry::all_to_all;
  std::vector<int> n_values{10};
  std::vector<int> w_values{2, 3, 4, 5, 6};
  /// 0 selects exhaustive enumeration.
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  Placement placement = Placement::contiguous;
  std::string output_path = "backflow.csv";
};

BackflowScanConfig parse_backflow_config(const nlohmann::json& doc);
nlohmann::json to_json(const BackflowScanConfig& config);

/// Analytic column: pbf_all_to_all for all_to_all, pbf_nn for
/// nearest_neighbor; NaN where the formula is outside its domain.
std::vector<BackflowRow> backflow_scan(const BackflowScanConfig& config);

struct OracleCheckReport {
  std::size_t n_observables = 0;
  /// Untruncated propagation vs the product-formula oracle.
  double max_deviation = 0.0;
  bool product_formula_pass = false;
  /// Energy deviation from the exact thermal value at tau and tau/2.
  double thermal_deviation = 0.0;
  double thermal_deviation_half = 0.0;
  double scaling_ratio = 0.0;
  bool scaling_pass = false;
  double min_log_factor = 0.0;
};

/// Runs the scheduler of `config` untruncated to beta_max and compares
/// energy and all ZZ correlators (C_ZZ against the center for lattices)
/// with both dense oracles. The scaling check requires the energy
/// deviation to shrink by at least 1.5 when tau halves.
OracleCheckReport oracle_check(const ExperimentConfig& config);

void write_oracle_report(std::ostream& os, const OracleCheckReport& report, double tolerance);

}  // namespace thermoprop::experiment
