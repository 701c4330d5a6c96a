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

#include "thermoprop/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "thermoprop/rng.hpp"

namespace thermoprop {

std::string_view to_string(ScheduleSource s) { return s == ScheduleSource::trotter ? "trotter" : "qdrift"; }

namespace {

std::size_t body_gates(const GateSchedule& s) {
  if (s.source != ScheduleSource::trotter || s.tail_tau == 0.0) return s.gates.size();
  return s.gates.size() - s.n_terms;
}

}  // namespace

double GateSchedule::beta_after(std::size_t gate_count) const {
  const double per_gate = source == ScheduleSource::trotter ? tau / static_cast<double>(n_terms) : tau / lambda;
  const std::size_t body = body_gates(*this);
  if (gate_count <= body) return per_gate * static_cast<double>(gate_count);
  return per_gate * static_cast<double>(body) +
         tail_tau / static_cast<double>(n_terms) * static_cast<double>(gate_count - body);
}

std::size_t GateSchedule::gates_for_beta(double target) const {
  if (target < 0.0) throw std::invalid_argument("checkpoint beta must be non-negative");
  if (target > beta + 1e-9 * std::max(1.0, beta)) {
    throw std::invalid_argument("checkpoint beta " + std::to_string(target) + " exceeds the schedule's beta " +
                                std::to_string(beta));
  }
  if (gates.empty()) return 0;
  const double per_gate = source == ScheduleSource::trotter ? tau / static_cast<double>(n_terms) : tau / lambda;
  const std::size_t body = body_gates(*this);
  const double body_beta = per_gate * static_cast<double>(body);
  if (body == gates.size() || target <= body_beta) {
    return std::min(static_cast<std::size_t>(std::llround(target / per_gate)), gates.size());
  }
  const double tail_per_gate = tail_tau / static_cast<double>(n_terms);
  const auto extra = static_cast<std::size_t>(std::llround((target - body_beta) / tail_per_gate));
  return std::min(body + extra, gates.size());
}

namespace {

void check_common(std::span<const double> coeffs, double beta, double tau) {
  if (coeffs.empty()) throw std::invalid_argument("schedule: empty Hamiltonian");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("schedule: beta must be finite and >= 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("schedule: tau must be finite and > 0");
  for (double c : coeffs) {
    if (!std::isfinite(c) || c == 0.0) throw std::invalid_argument("schedule: zero or non-finite coefficient");
  }
}

}  // namespace

GateSchedule build_trotter_schedule(std::span<const double> coeffs, std::span<const int> groups, double beta,
                                    double tau, const TrotterOptions& options) {
  check_common(coeffs, beta, tau);
  if (groups.size() != coeffs.size()) throw std::invalid_argument("schedule: group tags do not match terms");
  const double ratio = beta / tau;
  double rounds = std::round(ratio);
  double tail = 0.0;
  if (std::abs(ratio - rounds) > 1e-9 * std::max(1.0, ratio)) {
    if (!options.allow_tail) {
      throw std::invalid_argument("schedule: beta/tau = " + std::to_string(ratio) + " is not an integer");
    }
    rounds = std::floor(ratio);
    tail = beta - rounds * tau;
  }
  GateSchedule s;
  s.source = ScheduleSource::trotter;
  s.tau = tau;
  s.beta = beta;
  s.n_terms = coeffs.size();
  s.lambda = 0.0;
  for (double c : coeffs) s.lambda += std::abs(c);
  const auto layers = static_cast<std::size_t>(rounds);
  s.gates.reserve(layers * coeffs.size());

  std::vector<std::uint32_t> order(coeffs.size());
  std::iota(order.begin(), order.end(), 0U);
  std::vector<std::size_t> slots;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    if (groups[m] == options.shuffle_group) slots.push_back(m);
  }
  CounterRng rng(options.seed, 0);
  if (options.ordering == TrotterOrdering::shuffle_group) s.seed = options.seed;

  for (std::size_t layer = 0; layer < layers; ++layer) {
    std::vector<std::uint32_t> layer_order = order;
    if (options.ordering == TrotterOrdering::shuffle_group && slots.size() > 1) {
      // Fisher-Yates over the members of the shuffled group, in place.
      for (std::size_t k = slots.size() - 1; k > 0; --k) {
        const std::size_t r = rng.below(k + 1);
        std::swap(layer_order[slots[k]], layer_order[slots[r]]);
      }
    }
    for (auto m : layer_order) s.gates.push_back(Gate{m, tau * coeffs[m]});
  }
  if (tail > 0.0) {
    s.tail_tau = tail;
    for (auto m : order) s.gates.push_back(Gate{m, tail * coeffs[m]});
  }
  return s;
}

GateSchedule build_qdrift_schedule(std::span<const double> coeffs, double beta, double tau, std::uint64_t seed,
                                   std::uint64_t stream) {
  check_common(coeffs, beta, tau);
  GateSchedule s;
  s.source = ScheduleSource::qdrift;
  s.tau = tau;
  s.beta = beta;
  s.n_terms = coeffs.size();
  s.seed = seed;
  std::vector<double> cdf(coeffs.size());
  double acc = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    acc += std::abs(coeffs[m]);
    cdf[m] = acc;
  }
  s.lambda = acc;
  const auto count = static_cast<std::size_t>(std::llround(acc * beta / tau));
  s.gates.reserve(count);
  CounterRng rng(seed, stream);
  for (std::size_t l = 0; l < count; ++l) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto m = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    s.gates.push_back(Gate{static_cast<std::uint32_t>(m), coeffs[m] > 0 ? tau : -tau});
  }
  return s;
}

void write_schedule(std::ostream& os, const GateSchedule& s) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << to_string(s.source) << " seed ";
  if (s.seed) {
    buf << *s.seed;
  } else {
    buf << '-';
  }
  buf << " tau " << s.tau << " tail " << s.tail_tau << " beta " << s.beta << " terms " << s.n_terms << " lambda "
      << s.lambda << " gates "
      << s.gates.size() << '\n';
  for (const auto& g : s.gates) buf << g.term_index << ' ' << g.angle << '\n';
  os << buf.str();
}

GateSchedule read_schedule(std::istream& is) {
  GateSchedule s;
  std::string source, kw_seed, seed, kw_tau, kw_tail, kw_beta, kw_terms, kw_lambda, kw_gates;
  std::size_t count = 0;
  if (!(is >> source >> kw_seed >> seed >> kw_tau >> s.tau >> kw_tail >> s.tail_tau >> kw_beta >> s.beta >> kw_terms >>
        s.n_terms >> kw_lambda >> s.lambda >> kw_gates >> count)) {
    throw std::invalid_argument("read_schedule: malformed header");
  }
  if (source == "trotter") {
    s.source = ScheduleSource::trotter;
  } else if (source == "qdrift") {
    s.source = ScheduleSource::qdrift;
  } else {
    throw std::invalid_argument("read_schedule: unknown source " + source);
  }
  if (seed != "-") s.seed = std::stoull(seed);
  s.gates.resize(count);
  for (auto& g : s.gates) {
    if (!(is >> g.term_index >> g.angle)) throw std::invalid_argument("read_schedule: truncated gate list");
  }
  return s;
}

}  // namespace thermoprop
