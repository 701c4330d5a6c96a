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
#include <string>
#include <vector>

#include "thermoprop/basis.hpp"

namespace thermoprop {

template <BasisElement E>
struct HamiltonianTerm {
  E element;
  double coeff = 0.0;
  /// Builder-assigned tag (e.g. hopping vs. on-site) used for reordering.
  int group = 0;
};

/// H = identity_offset + sum_m coeff_m E_m. The offset is never propagated;
/// it only shifts reported energies.
template <BasisElement E>
struct Hamiltonian {
  std::size_t system_size = 0;
  std::vector<HamiltonianTerm<E>> terms;
  double identity_offset = 0.0;

  /// Lambda = sum_m |coeff_m|.
  double one_norm() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.coeff);
    return s;
  }

  std::vector<double> coefficients() const {
    std::vector<double> c;
    c.reserve(terms.size());
    for (const auto& t : terms) c.push_back(t.coeff);
    return c;
  }

  std::vector<int> groups() const {
    std::vector<int> g;
    g.reserve(terms.size());
    for (const auto& t : terms) g.push_back(t.group);
    return g;
  }

  void validate() const {
    for (std::size_t m = 0; m < terms.size(); ++m) {
      const auto& t = terms[m];
      if (t.element.system_size() != system_size) {
        throw std::invalid_argument("Hamiltonian: term " + std::to_string(m) + " has the wrong system size");
      }
      if (t.element.is_identity()) throw std::invalid_argument("Hamiltonian: identity term must go in identity_offset");
      if (!std::isfinite(t.coeff) || t.coeff == 0.0) {
        throw std::invalid_argument("Hamiltonian: term " + std::to_string(m) + " has a zero or non-finite coefficient");
      }
    }
  }
};

}  // namespace thermoprop
