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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "thermoprop/hamiltonian.hpp"
#include "thermoprop/models.hpp"
#include "thermoprop/operator_map.hpp"

namespace thermoprop {

/// o_I I + sum_k o_k E_k with real coefficients.
template <BasisElement E>
struct ObservableExpansion {
  std::size_t system_size = 0;
  double identity = 0.0;
  std::vector<std::pair<E, double>> terms;

  /// ||o||_1: sum of |coefficients| over all basis elements incl. identity.
  double one_norm() const {
    double s = std::abs(identity);
    for (const auto& [e, c] : terms) s += std::abs(c);
    return s;
  }

  static ObservableExpansion single(const E& e, double coeff = 1.0) {
    ObservableExpansion o;
    o.system_size = e.system_size();
    if (e.is_identity()) {
      o.identity = coeff;
    } else {
      o.terms.emplace_back(e, coeff);
    }
    return o;
  }
};

/// Observable form of a Hamiltonian, offset included.
template <BasisElement E>
ObservableExpansion<E> as_observable(const Hamiltonian<E>& h) {
  ObservableExpansion<E> o;
  o.system_size = h.system_size;
  o.identity = h.identity_offset;
  for (const auto& t : h.terms) o.terms.emplace_back(t.element, t.coeff);
  return o;
}

/// Tr(O rho) with Tr(I) = 1 and alpha_I = 1: o_I + sum o_P alpha_P.
/// Terms missing from the state contribute nothing.
template <BasisElement E>
double expectation(const OperatorMap<E>& state, const ObservableExpansion<E>& obs) {
  if (obs.system_size != state.system_size()) throw std::invalid_argument("expectation: system size mismatch");
  const double id = state.identity_coeff();
  if (!(id > 0.0)) throw std::invalid_argument("expectation: state has a non-positive identity coefficient");
  double acc = obs.identity * id;
  for (const auto& [e, c] : obs.terms) acc += c * state.coefficient(e);
  return acc / id;
}

template <BasisElement E>
double energy(const OperatorMap<E>& state, const Hamiltonian<E>& h) {
  return expectation(state, as_observable(h));
}

template <BasisElement E>
double energy_density(const OperatorMap<E>& state, const Hamiltonian<E>& h, std::size_t n_sites) {
  if (n_sites == 0) throw std::invalid_argument("energy_density: n_sites must be positive");
  return energy(state, h) / static_cast<double>(n_sites);
}

/// log Tr(e^{-beta H}) = n log 2 + accumulated log normalization factor.
/// The identity offset of H is not part of the propagation; add -beta·offset
/// for the full value.
template <BasisElement E>
double log_partition(const OperatorMap<E>& state, std::size_t n_modes) {
  return static_cast<double>(n_modes) * std::log(2.0) + state.log_factor() + std::log(state.identity_coeff());
}

template <BasisElement E>
double log_partition(const OperatorMap<E>& state) {
  return log_partition(state, BasisTraits<E>::hilbert_qubits(state.system_size()));
}

/// Z_j = n_{j,up} - n_{j,down} expanded in Majorana monomials.
ObservableExpansion<MajoranaMonomial> spin_z_observable(std::size_t n_sites, std::size_t site);

/// Z_r Z_i in Majorana monomials.
ObservableExpansion<MajoranaMonomial> spin_zz_observable(std::size_t n_sites, std::size_t r, std::size_t i);

/// C_ZZ(r, i) = <Z_r Z_i> - <Z_r><Z_i>.
double spin_correlation_czz(const OperatorMap<MajoranaMonomial>& state, const HexTriangularLattice& lattice,
                            std::size_t r, std::size_t i);

/// C_ZZ(center, i) for every site i.
std::vector<double> czz_map(const OperatorMap<MajoranaMonomial>& state, const HexTriangularLattice& lattice);

}  // namespace thermoprop
