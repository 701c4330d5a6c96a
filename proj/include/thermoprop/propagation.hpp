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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoprop/gate_kernels.hpp"
#include "thermoprop/hamiltonian.hpp"
#include "thermoprop/operator_map.hpp"
#include "thermoprop/schedule.hpp"

namespace thermoprop {

enum class KernelKind { parallel, reference };

struct PropagationOptions {
  /// Abort with TermCapExceeded once the state holds more terms; 0 = no cap.
  std::size_t max_terms = 0;
  KernelKind kernel = KernelKind::parallel;
};

struct Checkpoint {
  double beta_requested = 0.0;
  /// Inverse temperature of the gate boundary the request snapped to.
  double beta = 0.0;
  std::size_t gates_applied = 0;
  TermStats stats;
  double log_factor = 0.0;
};

template <BasisElement E>
struct PropagationResult {
  std::vector<Checkpoint> checkpoints;
  OperatorMap<E> final_state;
};

template <BasisElement E>
using CheckpointObserver = std::function<void(const Checkpoint&, const OperatorMap<E>&)>;

/// Evolves the identity through `schedule`: every gate is followed by
/// normalization to alpha_I = 1 and a truncation pass. `observer` sees the
/// state at each checkpoint (snapped to the nearest gate boundary).
template <BasisElement E>
PropagationResult<E> propagate_thermal(const Hamiltonian<E>& h, const GateSchedule& schedule,
                                       const TruncationPolicy& policy, std::span<const double> checkpoints,
                                       const CheckpointObserver<E>& observer = {},
                                       const PropagationOptions& options = {}) {
  h.validate();
  policy.validate();
  if (schedule.n_terms != h.terms.size()) throw std::invalid_argument("propagate_thermal: schedule/Hamiltonian mismatch");

  std::vector<std::size_t> order(checkpoints.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> at_gate(checkpoints.size());
  for (std::size_t c = 0; c < checkpoints.size(); ++c) at_gate[c] = schedule.gates_for_beta(checkpoints[c]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return at_gate[a] < at_gate[b]; });

  PropagationResult<E> result{std::vector<Checkpoint>(checkpoints.size()), OperatorMap<E>(h.system_size)};
  auto& state = result.final_state;
  std::size_t next = 0;
  auto emit_due = [&](std::size_t applied) {
    while (next < order.size() && at_gate[order[next]] == applied) {
      const std::size_t c = order[next++];
      Checkpoint cp{checkpoints[c], schedule.beta_after(applied), applied, term_stats(state), state.log_factor()};
      if (observer) observer(cp, state);
      result.checkpoints[c] = std::move(cp);
    }
  };

  emit_due(0);
  for (std::size_t g = 0; g < schedule.gates.size() && (order.empty() || next < order.size()); ++g) {
    const Gate& gate = schedule.gates[g];
    if (gate.term_index >= h.terms.size()) throw std::invalid_argument("propagate_thermal: gate term index out of range");
    const E& generator = h.terms[gate.term_index].element;
    if (options.kernel == KernelKind::reference) {
      reference::apply_imaginary_gate(state, generator, gate.angle);
    } else {
      apply_imaginary_gate(state, generator, gate.angle);
    }
    normalize_by_identity(state);
    apply_truncation(state, policy);
    if (options.max_terms != 0 && state.size() > options.max_terms) {
      throw TermCapExceeded("term count " + std::to_string(state.size()) + " exceeds the cap of " +
                            std::to_string(options.max_terms) + " after gate " + std::to_string(g + 1));
    }
    emit_due(g + 1);
  }
  return result;
}

}  // namespace thermoprop
