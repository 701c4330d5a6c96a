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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "thermoprop/hamiltonian.hpp"

namespace thermoprop {

enum class ScheduleSource { trotter, qdrift };

std::string_view to_string(ScheduleSource s);

struct Gate {
  std::uint32_t term_index = 0;
  /// theta in e^{-theta G/2}(.)e^{-theta G/2}.
  double angle = 0.0;
};

struct GateSchedule {
  ScheduleSource source = ScheduleSource::trotter;
  std::vector<Gate> gates;
  double tau = 0.0;
  double beta = 0.0;
  /// Term count M and 1-norm Lambda of the Hamiltonian it was built from.
  std::size_t n_terms = 0;
  double lambda = 0.0;
  std::optional<std::uint64_t> seed;
  /// Step of a final short Trotter layer when tau does not divide beta;
  /// zero otherwise.
  double tail_tau = 0.0;

  /// Inverse temperature reached after the first `gate_count` gates:
  /// tau/M per Trotter gate (tail_tau/M in the tail layer), tau/Lambda per
  /// qDRIFT gate.
  double beta_after(std::size_t gate_count) const;

  /// Gate count whose boundary is nearest to `beta`.
  std::size_t gates_for_beta(double beta) const;
};

enum class TrotterOrdering {
  construction,
  /// Each layer reshuffles the positions held by terms of `shuffle_group`.
  shuffle_group,
};

struct TrotterOptions {
  TrotterOrdering ordering = TrotterOrdering::construction;
  int shuffle_group = 0;
  std::uint64_t seed = 0;
  /// Accept beta/tau that is not an integer by closing with one layer of
  /// step beta - floor(beta/tau)·tau.
  bool allow_tail = false;
};

/// L = beta/tau rounds over all M terms; term m gets angle tau·lambda_m.
GateSchedule build_trotter_schedule(std::span<const double> coeffs, std::span<const int> groups, double beta,
                                    double tau, const TrotterOptions& options = {});

/// L_qD = round(Lambda·beta/tau) i.i.d. draws with p_m = |lambda_m|/Lambda,
/// angle tau·sign(lambda_m). `stream` selects an independent replica stream.
GateSchedule build_qdrift_schedule(std::span<const double> coeffs, double beta, double tau, std::uint64_t seed,
                                   std::uint64_t stream = 0);

template <BasisElement E>
GateSchedule build_trotter_schedule(const Hamiltonian<E>& h, double beta, double tau,
                                    const TrotterOptions& options = {}) {
  const auto c = h.coefficients();
  const auto g = h.groups();
  return build_trotter_schedule(c, g, beta, tau, options);
}

template <BasisElement E>
GateSchedule build_qdrift_schedule(const Hamiltonian<E>& h, double beta, double tau, std::uint64_t seed,
                                   std::uint64_t stream = 0) {
  const auto c = h.coefficients();
  return build_qdrift_schedule(c, beta, tau, seed, stream);
}

/// Serialized as "<source> seed <s|-> tau <t> tail <t> beta <b> terms <M>
/// lambda <L> gates <count>"
/// followed by "<term_index> <angle>" per gate.
void write_schedule(std::ostream& os, const GateSchedule& s);
GateSchedule read_schedule(std::istream& is);

}  // namespace thermoprop
