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

#include "thermoprop/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "thermoprop/errors.hpp"
#include "thermoprop/exact_oracle.hpp"
#include "thermoprop/observables.hpp"

namespace thermoprop::experiment {

using nlohmann::json;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError((path.empty() ? std::string("<root>") : path) + ": " + message);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) fail(join(path, it.key()), "unknown field");
  }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(join(path, key), "must be finite");
  return x;
}

std::uint64_t as_unsigned(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) fail(path, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  fail(path, "expected a non-negative integer");
}

std::uint64_t get_unsigned(const json& obj, const std::string& path, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  return as_unsigned(obj.at(key), join(path, key));
}

std::string get_string(const json& obj, const std::string& path, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected a boolean");
  return v.get<bool>();
}

template <class Parse>
auto parse_enum(const json& obj, const std::string& path, const char* key, std::string fallback, Parse parse) {
  const std::string text = get_string(obj, path, key, std::move(fallback));
  try {
    return parse(text);
  } catch (const std::invalid_argument&) {
    fail(join(path, key), "unknown value '" + text + "'");
  }
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "j1j2") return ModelKind::j1j2;
  if (s == "random_2local") return ModelKind::random_2local;
  if (s == "fermi_hubbard") return ModelKind::fermi_hubbard;
  throw std::invalid_argument("model kind");
}

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::j1j2: return "j1j2";
    case ModelKind::random_2local: return "random_2local";
    default: return "fermi_hubbard";
  }
}

J1J2Order parse_order(std::string_view s) {
  if (s == "j1_then_j2") return J1J2Order::j1_then_j2;
  if (s == "by_site") return J1J2Order::by_site;
  throw std::invalid_argument("order");
}

std::string_view to_string(J1J2Order o) { return o == J1J2Order::by_site ? "by_site" : "j1_then_j2"; }

ScheduleSource parse_source(std::string_view s) {
  if (s == "trotter") return ScheduleSource::trotter;
  if (s == "qdrift") return ScheduleSource::qdrift;
  throw std::invalid_argument("scheduler kind");
}

TrotterOrdering parse_ordering(std::string_view s) {
  if (s == "construction") return TrotterOrdering::construction;
  if (s == "shuffle_group") return TrotterOrdering::shuffle_group;
  throw std::invalid_argument("ordering");
}

std::string_view to_string(TrotterOrdering o) {
  return o == TrotterOrdering::shuffle_group ? "shuffle_group" : "construction";
}

KernelKind parse_kernel(std::string_view s) {
  if (s == "parallel") return KernelKind::parallel;
  if (s == "reference") return KernelKind::reference;
  throw std::invalid_argument("kernel");
}

std::string_view to_string(KernelKind k) { return k == KernelKind::reference ? "reference" : "parallel"; }

ModelSpec parse_model(const json& obj, const std::string& path) {
  check_keys(obj, path, {"kind", "n", "j1", "j2", "order", "geometry", "n_terms", "seed", "rings", "t", "u", "mu"});
  ModelSpec m;
  m.kind = parse_enum(obj, path, "kind", "j1j2", parse_model_kind);
  m.n = get_unsigned(obj, path, "n", m.n);
  m.j1 = get_number(obj, path, "j1", m.j1);
  m.j2 = get_number(obj, path, "j2", m.j2);
  m.order = parse_enum(obj, path, "order", "j1_then_j2", parse_order);
  m.geometry = parse_enum(obj, path, "geometry", "heisenberg_1d", parse_geometry);
  m.n_terms = get_unsigned(obj, path, "n_terms", m.n_terms);
  m.seed = get_unsigned(obj, path, "seed", m.seed);
  m.rings = get_unsigned(obj, path, "rings", m.rings);
  m.t = get_number(obj, path, "t", m.t);
  m.u = get_number(obj, path, "u", m.u);
  m.mu = get_number(obj, path, "mu", m.mu);
  if (m.kind != ModelKind::fermi_hubbard && m.n < 2) fail(join(path, "n"), "must be >= 2");
  if (m.kind != ModelKind::fermi_hubbard && m.n > PauliString::kMaxQubits) {
    fail(join(path, "n"), "exceeds the qubit limit of " + std::to_string(PauliString::kMaxQubits));
  }
  if (m.kind == ModelKind::fermi_hubbard && 4 * (3 * m.rings * (m.rings + 1) + 1) > MajoranaMonomial::kMaxGenerators) {
    fail(join(path, "rings"), "lattice exceeds the Majorana generator limit");
  }
  return m;
}

SchedulerSpec parse_scheduler(const json& obj, const std::string& path) {
  check_keys(obj, path, {"kind", "tau", "beta_max", "checkpoints", "ordering", "shuffle_group", "allow_tail"});
  SchedulerSpec s;
  s.kind = parse_enum(obj, path, "kind", "trotter", parse_source);
  s.tau = get_number(obj, path, "tau", s.tau);
  s.beta_max = get_number(obj, path, "beta_max", s.beta_max);
  if (!(s.tau > 0.0)) fail(join(path, "tau"), "must be > 0");
  if (!(s.beta_max >= 0.0)) fail(join(path, "beta_max"), "must be >= 0");
  if (obj.contains("checkpoints")) {
    const auto& cps = obj.at("checkpoints");
    const std::string cp_path = join(path, "checkpoints");
    if (!cps.is_array()) fail(cp_path, "expected an array");
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const std::string item = cp_path + "[" + std::to_string(i) + "]";
      if (!cps[i].is_number()) fail(item, "expected a number");
      const double b = cps[i].get<double>();
      if (!(b >= 0.0 && b <= s.beta_max * (1.0 + 1e-12))) fail(item, "must lie in [0, beta_max]");
      s.checkpoints.push_back(b);
    }
  }
  if (s.checkpoints.empty()) s.checkpoints.push_back(s.beta_max);
  s.ordering = parse_enum(obj, path, "ordering", "construction", parse_ordering);
  if (obj.contains("shuffle_group")) {
    const auto& v = obj.at("shuffle_group");
    if (!v.is_number_integer()) fail(join(path, "shuffle_group"), "expected an integer");
    s.shuffle_group = v.get<int>();
  }
  s.allow_tail = get_bool(obj, path, "allow_tail", s.allow_tail);
  if (s.kind == ScheduleSource::trotter && !s.allow_tail) {
    const double ratio = s.beta_max / s.tau;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      fail(join(path, "tau"), "beta_max/tau is not an integer; set allow_tail to close with a short layer");
    }
  }
  return s;
}

std::optional<std::size_t> get_cutoff(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return static_cast<std::size_t>(as_unsigned(obj.at(key), join(path, key)));
}

TruncationPolicy parse_policy(const json& obj, const std::string& path) {
  check_keys(obj, path, {"coeff_threshold", "max_weight", "max_sinh_count"});
  TruncationPolicy p;
  p.coeff_threshold = get_number(obj, path, "coeff_threshold", 0.0);
  if (!(p.coeff_threshold >= 0.0 && p.coeff_threshold < 1.0)) fail(join(path, "coeff_threshold"), "must lie in [0, 1)");
  p.max_weight = get_cutoff(obj, path, "max_weight");
  if (p.max_weight && *p.max_weight < 1) fail(join(path, "max_weight"), "must be >= 1");
  if (const auto s = get_cutoff(obj, path, "max_sinh_count")) {
    if (*s > std::numeric_limits<std::uint32_t>::max()) fail(join(path, "max_sinh_count"), "out of range");
    p.max_sinh_count = static_cast<std::uint32_t>(*s);
  }
  return p;
}

json policy_json(const TruncationPolicy& p) {
  json j;
  j["coeff_threshold"] = p.coeff_threshold;
  j["max_weight"] = p.max_weight ? json(*p.max_weight) : json(nullptr);
  j["max_sinh_count"] = p.max_sinh_count ? json(*p.max_sinh_count) : json(nullptr);
  return j;
}

json model_json(const ModelSpec& m) {
  return json{{"kind", to_string(m.kind)},
              {"n", m.n},
              {"j1", m.j1},
              {"j2", m.j2},
              {"order", to_string(m.order)},
              {"geometry", thermoprop::to_string(m.geometry)},
              {"n_terms", m.n_terms},
              {"seed", m.seed},
              {"rings", m.rings},
              {"t", m.t},
              {"u", m.u},
              {"mu", m.mu}};
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_cutoff(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

std::string fmt_policy(const TruncationPolicy& p) {
  std::optional<std::size_t> s;
  if (p.max_sinh_count) s = *p.max_sinh_count;
  return fmt(p.coeff_threshold) + "," + fmt_cutoff(p.max_weight) + "," + fmt_cutoff(s);
}

Hamiltonian<PauliString> build_spin_model(const ModelSpec& m) {
  if (m.kind == ModelKind::j1j2) return build_j1j2(m.n, m.j1, m.j2, m.order);
  if (m.kind == ModelKind::random_2local) return build_random_2local(m.n, m.n_terms, m.geometry, m.seed);
  throw ConfigError("model.kind: expected a spin model");
}

template <BasisElement E>
GateSchedule make_schedule(const Hamiltonian<E>& h, const ExperimentConfig& c, std::uint64_t replica, double tau) {
  try {
    if (c.scheduler.kind == ScheduleSource::qdrift) {
      return build_qdrift_schedule(h, c.scheduler.beta_max, tau, c.seed, replica);
    }
    TrotterOptions opts;
    opts.ordering = c.scheduler.ordering;
    opts.shuffle_group = c.scheduler.shuffle_group;
    opts.seed = c.seed;
    opts.allow_tail = c.scheduler.allow_tail;
    return build_trotter_schedule(h, c.scheduler.beta_max, tau, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scheduler: ") + e.what());
  }
}

/// Runs `body(i)` for i < count in parallel and rethrows the first failure
/// in index order.
template <class Body>
void parallel_jobs(std::size_t count, Body body) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_finite(double x, const char* what, double beta) {
  if (!std::isfinite(x)) throw SimulationDiverged(std::string(what) + " is not finite at beta " + fmt(beta));
}

template <BasisElement E>
RunResult run_model(const Hamiltonian<E>& h, const ExperimentConfig& c, const HexTriangularLattice* lattice) {
  const std::size_t sites = n_sites(c.model);
  const bool czz = lattice != nullptr && c.wants("czz_map");
  const double czz_beta = c.czz_beta.value_or(c.scheduler.beta_max);
  std::vector<double> cps = c.scheduler.checkpoints;
  const std::size_t n_rows = cps.size();
  if (czz) cps.push_back(czz_beta);

  const std::size_t n_jobs = c.truncations.size() * c.replicas;
  std::vector<std::vector<RunRow>> rows(n_jobs);
  RunResult result;
  PropagationOptions opts;
  opts.max_terms = c.max_terms;
  opts.kernel = c.kernel;

  std::vector<GateSchedule> schedules(c.replicas);
  for (std::size_t r = 0; r < c.replicas; ++r) schedules[r] = make_schedule(h, c, r, c.scheduler.tau);
  for (const double b : cps) {
    try {
      (void)schedules[0].gates_for_beta(b);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scheduler.checkpoints: ") + e.what());
    }
  }

  parallel_jobs(n_jobs, [&](std::size_t job) {
    const std::size_t cell = job / c.replicas;
    const std::size_t replica = job % c.replicas;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<double, RunRow>> seen;
    auto observer = [&](const Checkpoint& cp, const OperatorMap<E>& state) {
      RunRow row;
      row.cell = cell;
      row.policy = c.truncations[cell];
      row.replica = replica;
      row.beta = cp.beta;
      row.energy = energy(state, h);
      row.energy_density = row.energy / static_cast<double>(sites);
      row.n_terms = state.size();
      row.log_partition = log_partition(state) - cp.beta * h.identity_offset;
      row.seed = c.seed;
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      check_finite(row.energy, "energy", cp.beta);
      check_finite(row.log_partition, "log_partition", cp.beta);
      if constexpr (std::is_same_v<E, MajoranaMonomial>) {
        if (czz && job == 0 && cp.beta_requested == czz_beta && result.czz.empty()) {
          const auto values = czz_map(state, *lattice);
          for (std::size_t i = 0; i < values.size(); ++i) {
            result.czz.push_back(CzzRow{i, lattice->positions[i][0], lattice->positions[i][1], values[i]});
          }
        }
      }
      seen.emplace_back(cp.beta_requested, row);
    };
    propagate_thermal<E>(h, schedules[replica], c.truncations[cell], cps, observer, opts);
    auto& out = rows[job];
    for (std::size_t k = 0; k < n_rows; ++k) {
      const auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == cps[k]; });
      out.push_back(it->second);
    }
  });

  for (auto& job_rows : rows) {
    std::stable_sort(job_rows.begin(), job_rows.end(),
                     [](const RunRow& a, const RunRow& b) { return a.beta < b.beta; });
    result.rows.insert(result.rows.end(), job_rows.begin(), job_rows.end());
  }
  return result;
}

}  // namespace

bool ExperimentConfig::wants(const std::string& observable) const {
  return std::find(observables.begin(), observables.end(), observable) != observables.end();
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "",
             {"model", "scheduler", "truncation", "observables", "replicas", "seed", "output_path", "max_terms",
              "kernel", "czz_beta", "tolerance"});
  ExperimentConfig c;
  c.model = parse_model(doc.value("model", json::object()), "model");
  c.scheduler = parse_scheduler(doc.value("scheduler", json::object()), "scheduler");
  if (doc.contains("truncation")) {
    const auto& t = doc.at("truncation");
    c.truncations.clear();
    if (t.is_array()) {
      if (t.empty()) fail("truncation", "expected at least one policy");
      for (std::size_t i = 0; i < t.size(); ++i) c.truncations.push_back(parse_policy(t[i], "truncation[" + std::to_string(i) + "]"));
    } else {
      c.truncations.push_back(parse_policy(t, "truncation"));
    }
  }
  if (doc.contains("observables")) {
    const auto& o = doc.at("observables");
    if (!o.is_array()) fail("observables", "expected an array");
    c.observables.clear();
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string item = "observables[" + std::to_string(i) + "]";
      if (!o[i].is_string()) fail(item, "expected a string");
      const auto name = o[i].get<std::string>();
      if (std::find(kObservableNames.begin(), kObservableNames.end(), name) == kObservableNames.end()) {
        fail(item, "unknown observable '" + name + "'");
      }
      c.observables.push_back(name);
    }
  }
  if (c.wants("czz_map") && c.model.kind != ModelKind::fermi_hubbard) {
    fail("observables", "czz_map requires a fermi_hubbard model");
  }
  c.replicas = get_unsigned(doc, "", "replicas", c.replicas);
  if (c.replicas < 1) fail("replicas", "must be >= 1");
  if (c.scheduler.kind == ScheduleSource::trotter && c.replicas != 1) fail("replicas", "must be 1 for trotter");
  c.seed = get_unsigned(doc, "", "seed", c.seed);
  c.output_path = get_string(doc, "", "output_path", c.output_path);
  c.max_terms = get_unsigned(doc, "", "max_terms", c.max_terms);
  c.kernel = parse_enum(doc, "", "kernel", "parallel", parse_kernel);
  if (doc.contains("czz_beta") && !doc.at("czz_beta").is_null()) {
    const double b = get_number(doc, "", "czz_beta", 0.0);
    if (!(b >= 0.0 && b <= c.scheduler.beta_max * (1.0 + 1e-12))) fail("czz_beta", "must lie in [0, beta_max]");
    c.czz_beta = b;
  }
  c.tolerance = get_number(doc, "", "tolerance", c.tolerance);
  if (!(c.tolerance > 0.0)) fail("tolerance", "must be > 0");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>: " + std::string(e.what()));
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = model_json(c.model);
  j["scheduler"] = json{{"kind", thermoprop::to_string(c.scheduler.kind)},
                        {"tau", c.scheduler.tau},
                        {"beta_max", c.scheduler.beta_max},
                        {"checkpoints", c.scheduler.checkpoints},
                        {"ordering", to_string(c.scheduler.ordering)},
                        {"shuffle_group", c.scheduler.shuffle_group},
                        {"allow_tail", c.scheduler.allow_tail}};
  j["truncation"] = json::array();
  for (const auto& p : c.truncations) j["truncation"].push_back(policy_json(p));
  j["observables"] = c.observables;
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["output_path"] = c.output_path;
  j["max_terms"] = c.max_terms;
  j["kernel"] = to_string(c.kernel);
  j["czz_beta"] = c.czz_beta ? json(*c.czz_beta) : json(nullptr);
  j["tolerance"] = c.tolerance;
  return j;
}

std::size_t n_sites(const ModelSpec& model) {
  if (model.kind == ModelKind::fermi_hubbard) return 3 * model.rings * (model.rings + 1) + 1;
  return model.n;
}

RunResult run_experiment(const ExperimentConfig& config) {
  if (config.model.kind == ModelKind::fermi_hubbard) {
    const auto lattice = build_hex_lattice(config.model.rings);
    const auto h = build_fermi_hubbard_tri(lattice, config.model.t, config.model.u, config.model.mu);
    auto result = run_model(h, config, &lattice);
    result.lattice = lattice;
    return result;
  }
  return run_model(build_spin_model(config.model), config, nullptr);
}

void write_run_csv(std::ostream& os, const std::vector<RunRow>& rows, const ExperimentConfig& config) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool e = config.wants("energy");
  const bool ed = config.wants("energy_density");
  const bool lz = config.wants("log_partition");
  const bool tc = config.wants("term_count");
  os << "cell,coeff_threshold,max_weight,max_sinh_count,replica,beta,energy,energy_density,n_terms,log_partition,"
        "wall_ms,seed\n";
  for (const auto& r : rows) {
    os << r.cell << ',' << fmt_policy(r.policy) << ',' << r.replica << ',' << fmt(r.beta) << ','
       << fmt(e ? r.energy : nan) << ',' << fmt(ed ? r.energy_density : nan) << ','
       << (tc ? std::to_string(r.n_terms) : std::string("nan")) << ',' << fmt(lz ? r.log_partition : nan) << ','
       << fmt(r.wall_ms) << ',' << r.seed << '\n';
  }
}

void write_czz_csv(std::ostream& os, const std::vector<CzzRow>& rows) {
  os << "site_index,x,y,czz\n";
  for (const auto& r : rows) os << r.site << ',' << fmt(r.x) << ',' << fmt(r.y) << ',' << fmt(r.czz) << '\n';
}

std::vector<CompareRow> compare_schedulers(const ExperimentConfig& a, const ExperimentConfig& b) {
  if (model_json(a.model) != model_json(b.model)) throw ConfigError("model: the compared configs differ");
  if (a.scheduler.checkpoints != b.scheduler.checkpoints) {
    throw ConfigError("scheduler.checkpoints: the compared configs differ");
  }
  if (a.model.kind == ModelKind::fermi_hubbard) throw ConfigError("model.kind: compare needs a spin model");
  if (a.model.n > 10) throw ConfigError("model.n: compare needs at most 10 qubits for the dense oracle");
  const auto h = build_spin_model(a.model);
  const std::vector<ObservableExpansion<PauliString>> obs{as_observable(h)};

  std::vector<CompareRow> out;
  for (const ExperimentConfig* c : {&a, &b}) {
    const auto& cps = c->scheduler.checkpoints;
    const std::size_t n_cells = c->truncations.size();
    std::vector<GateSchedule> schedules(c->replicas);
    std::vector<std::vector<double>> exact(c->replicas);
    for (std::size_t r = 0; r < c->replicas; ++r) {
      schedules[r] = make_schedule(h, *c, r, c->scheduler.tau);
      std::vector<std::size_t> counts;
      for (const double beta : cps) counts.push_back(schedules[r].gates_for_beta(beta));
      const auto dense = dense::evaluate_product_formula(h, schedules[r], counts, obs);
      for (const auto& v : dense.values) exact[r].push_back(v[0]);
    }
    // err[cell][replica][checkpoint], terms likewise.
    const std::size_t n_jobs = n_cells * c->replicas;
    std::vector<std::vector<double>> err(n_jobs, std::vector<double>(cps.size()));
    std::vector<std::vector<double>> terms(n_jobs, std::vector<double>(cps.size()));
    PropagationOptions opts;
    opts.max_terms = c->max_terms;
    opts.kernel = c->kernel;
    parallel_jobs(n_jobs, [&](std::size_t job) {
      const std::size_t cell = job / c->replicas;
      const std::size_t r = job % c->replicas;
      propagate_thermal<PauliString>(
          h, schedules[r], c->truncations[cell], cps,
          [&](const Checkpoint& cp, const OperatorMap<PauliString>& state) {
            const auto k = static_cast<std::size_t>(
                std::find(cps.begin(), cps.end(), cp.beta_requested) - cps.begin());
            const double e = energy(state, h);
            check_finite(e, "energy", cp.beta);
            const double ref = exact[r][k];
            err[job][k] = std::abs(ref) > 0.0 ? std::abs(e - ref) / std::abs(ref) : std::abs(e - ref);
            terms[job][k] = static_cast<double>(state.size());
          },
          opts);
    });
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
      for (std::size_t k = 0; k < cps.size(); ++k) {
        double sum = 0.0;
        double sum_sq = 0.0;
        double sum_terms = 0.0;
        for (std::size_t r = 0; r < c->replicas; ++r) {
          const double e = err[cell * c->replicas + r][k];
          sum += e;
          sum_sq += e * e;
          sum_terms += terms[cell * c->replicas + r][k];
        }
        const auto n = static_cast<double>(c->replicas);
        CompareRow row;
        row.scheduler = c->scheduler.kind;
        row.cell = cell;
        row.policy = c->truncations[cell];
        row.beta = schedules[0].beta_after(schedules[0].gates_for_beta(cps[k]));
        row.mean_relative_error = sum / n;
        row.stderr_relative_error =
            c->replicas > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0)) / n) : 0.0;
        row.mean_terms = sum_terms / n;
        row.replicas = c->replicas;
        out.push_back(row);
      }
    }
  }
  return out;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << "scheduler,cell,coeff_threshold,max_weight,max_sinh_count,beta,mean_relative_error,stderr_relative_error,"
        "mean_terms,replicas\n";
  for (const auto& r : rows) {
    os << thermoprop::to_string(r.scheduler) << ',' << r.cell << ',' << fmt_policy(r.policy) << ',' << fmt(r.beta)
       << ',' << fmt(r.mean_relative_error) << ',' << fmt(r.stderr_relative_error) << ',' << fmt(r.mean_terms) << ','
       << r.replicas << '\n';
  }
}

BackflowScanConfig parse_backflow_config(const json& doc) {
  check_keys(doc, "", {"geometry", "n_values", "w_values", "samples", "seed", "placement", "output_path"});
  BackflowScanConfig c;
  c.geometry = parse_enum(doc, "", "geometry", "all_to_all", parse_geometry);
  if (c.geometry == Geometry::heisenberg_1d) fail("geometry", "backflow scans need all_to_all or nearest_neighbor");
  auto int_list = [&](const char* key, std::vector<int>& out, int min_value) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string item = std::string(key) + "[" + std::to_string(i) + "]";
      const auto x = as_unsigned(v[i], item);
      if (x < static_cast<std::uint64_t>(min_value) || x > PauliString::kMaxQubits) fail(item, "out of range");
      out.push_back(static_cast<int>(x));
    }
  };
  int_list("n_values", c.n_values, 2);
  int_list("w_values", c.w_values, 0);
  for (const int n : c.n_values) {
    for (const int w : c.w_values) {
      if (w > n) fail("w_values", "weight " + std::to_string(w) + " exceeds n = " + std::to_string(n));
    }
  }
  c.samples = get_unsigned(doc, "", "samples", c.samples);
  c.seed = get_unsigned(doc, "", "seed", c.seed);
  c.placement = parse_enum(doc, "", "placement", "contiguous", parse_placement);
  c.output_path = get_string(doc, "", "output_path", c.output_path);
  return c;
}

json to_json(const BackflowScanConfig& c) {
  return json{{"geometry", thermoprop::to_string(c.geometry)},
              {"n_values", c.n_values},
              {"w_values", c.w_values},
              {"samples", c.samples},
              {"seed", c.seed},
              {"placement", thermoprop::to_string(c.placement)},
              {"output_path", c.output_path}};
}

std::vector<BackflowRow> backflow_scan(const BackflowScanConfig& c) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<BackflowRow> rows;
  for (const int n : c.n_values) {
    const auto gates = uniform_gate_set(c.geometry, static_cast<std::size_t>(n));
    const std::vector<double> weights(gates.size(), 1.0);
    for (const int w : c.w_values) {
      BackflowRow row{w, n, nan, nan, nan};
      try {
        row.analytic = c.geometry == Geometry::all_to_all ? pbf_all_to_all(w, n) : pbf_nn(w, n - 1);
      } catch (const std::domain_error&) {
      }
      const auto q = reference_string(static_cast<std::size_t>(n), static_cast<std::size_t>(w), c.placement);
      try {
        const auto est = c.samples == 0 ? exhaustive_backflow(q, gates, weights)
                                         : sampled_backflow(q, gates, weights, c.samples, c.seed);
        row.empirical = est.estimate;
        row.std_error = est.std_error;
      } catch (const std::domain_error&) {
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

struct OracleProblem {
  Hamiltonian<PauliString> dense_h;
  GateSchedule dense_schedule;
  std::vector<ObservableExpansion<PauliString>> dense_obs;
  std::vector<double> propagated;
  double min_log_factor = 0.0;
  /// Maps dense observable values to the compared quantities.
  std::function<std::vector<double>(const std::vector<double>&)> reduce;
};

template <BasisElement E>
double run_untruncated(const Hamiltonian<E>& h, const GateSchedule& s, const ExperimentConfig& c,
                       const std::function<void(const OperatorMap<E>&)>& at_end) {
  PropagationOptions opts;
  opts.max_terms = c.max_terms;
  opts.kernel = c.kernel;
  double min_log = std::numeric_limits<double>::infinity();
  std::vector<double> cps{c.scheduler.beta_max};
  const auto result = propagate_thermal<E>(
      h, s, TruncationPolicy{}, cps,
      [&](const Checkpoint& cp, const OperatorMap<E>& state) {
        min_log = std::min(min_log, cp.log_factor);
        at_end(state);
      },
      opts);
  (void)result;
  return min_log;
}

OracleProblem spin_problem(const ExperimentConfig& c) {
  OracleProblem p;
  p.dense_h = build_spin_model(c.model);
  const auto& h = p.dense_h;
  p.dense_schedule = make_schedule(h, c, 0, c.scheduler.tau);
  p.dense_obs.push_back(as_observable(h));
  for (std::size_t i = 0; i < h.system_size; ++i) {
    for (std::size_t j = i + 1; j < h.system_size; ++j) {
      PauliString zz(h.system_size);
      zz.set(i, PauliOp::Z);
      zz.set(j, PauliOp::Z);
      p.dense_obs.push_back(ObservableExpansion<PauliString>::single(zz));
    }
  }
  p.min_log_factor = run_untruncated<PauliString>(h, p.dense_schedule, c, [&](const OperatorMap<PauliString>& s) {
    for (const auto& o : p.dense_obs) p.propagated.push_back(expectation(s, o));
  });
  p.reduce = [](const std::vector<double>& v) { return v; };
  return p;
}

OracleProblem lattice_problem(const ExperimentConfig& c) {
  OracleProblem p;
  const auto lattice = build_hex_lattice(c.model.rings);
  const auto h = build_fermi_hubbard_tri(lattice, c.model.t, c.model.u, c.model.mu);
  const std::size_t n = lattice.n_sites();
  const std::size_t center = lattice.center_index;
  const auto s = make_schedule(h, c, 0, c.scheduler.tau);
  p.dense_h = jw_map(h);
  p.dense_schedule = jw_map(s, h);
  p.dense_obs.push_back(as_observable(p.dense_h));
  for (std::size_t i = 0; i < n; ++i) p.dense_obs.push_back(jw_map(spin_z_observable(n, i)));
  for (std::size_t i = 0; i < n; ++i) p.dense_obs.push_back(jw_map(spin_zz_observable(n, center, i)));
  p.min_log_factor = run_untruncated<MajoranaMonomial>(h, s, c, [&](const OperatorMap<MajoranaMonomial>& st) {
    p.propagated.push_back(energy(st, h));
    for (const double v : czz_map(st, lattice)) p.propagated.push_back(v);
  });
  p.reduce = [n, center](const std::vector<double>& v) {
    std::vector<double> out{v[0]};
    for (std::size_t i = 0; i < n; ++i) out.push_back(v[1 + n + i] - v[1 + center] * v[1 + i]);
    return out;
  };
  return p;
}

}  // namespace

OracleCheckReport oracle_check(const ExperimentConfig& config) {
  OracleProblem p;
  try {
    p = config.model.kind == ModelKind::fermi_hubbard ? lattice_problem(config) : spin_problem(config);
  } catch (const DimensionTooLarge& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  OracleCheckReport r;
  r.min_log_factor = p.min_log_factor;
  const std::vector<std::size_t> last{p.dense_schedule.gates.size()};
  std::vector<double> dense_values;
  try {
    const auto dense = dense::evaluate_product_formula(p.dense_h, p.dense_schedule, last, p.dense_obs);
    dense_values = p.reduce(dense.values[0]);
  } catch (const DimensionTooLarge& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  r.n_observables = dense_values.size();
  for (std::size_t k = 0; k < dense_values.size(); ++k) {
    r.max_deviation = std::max(r.max_deviation, std::abs(dense_values[k] - p.propagated[k]));
  }
  r.product_formula_pass = r.max_deviation <= config.tolerance;

  const double beta = config.scheduler.beta_max;
  const auto e_obs = std::span(p.dense_obs).first(1);
  const double thermal = dense_thermal_expectation(p.dense_h, beta, e_obs[0]);
  TrotterOptions topts;
  topts.ordering = config.scheduler.ordering;
  topts.shuffle_group = config.scheduler.shuffle_group;
  topts.seed = config.seed;
  topts.allow_tail = true;
  auto energy_at = [&](double tau) {
    GateSchedule s = build_trotter_schedule(p.dense_h, beta, tau, topts);
    if (config.model.kind == ModelKind::fermi_hubbard) {
      const auto lattice = build_hex_lattice(config.model.rings);
      const auto h = build_fermi_hubbard_tri(lattice, config.model.t, config.model.u, config.model.mu);
      s = jw_map(build_trotter_schedule(h, beta, tau, topts), h);
    }
    return dense::evaluate_product_formula(p.dense_h, s, std::vector<std::size_t>{s.gates.size()}, e_obs)
        .values[0][0];
  };
  r.thermal_deviation = std::abs(energy_at(config.scheduler.tau) - thermal);
  r.thermal_deviation_half = std::abs(energy_at(config.scheduler.tau / 2.0) - thermal);
  r.scaling_ratio = r.thermal_deviation_half > 0.0 ? r.thermal_deviation / r.thermal_deviation_half
                                                   : std::numeric_limits<double>::infinity();
  r.scaling_pass = r.thermal_deviation <= config.tolerance || r.scaling_ratio >= 1.5;
  return r;
}

void write_oracle_report(std::ostream& os, const OracleCheckReport& r, double tolerance) {
  os << "observables " << r.n_observables << '\n';
  os << "product_formula_max_deviation " << fmt(r.max_deviation) << " tolerance " << fmt(tolerance) << ' '
     << (r.product_formula_pass ? "PASS" : "FAIL") << '\n';
  os << "thermal_energy_deviation tau " << fmt(r.thermal_deviation) << " tau/2 " << fmt(r.thermal_deviation_half)
     << " ratio " << fmt(r.scaling_ratio) << ' ' << (r.scaling_pass ? "PASS" : "FAIL") << '\n';
  os << "min_log_factor " << fmt(r.min_log_factor) << ' ' << (r.min_log_factor >= -1e-12 ? "PASS" : "FAIL") << '\n';
}

}  // namespace thermoprop::experiment
