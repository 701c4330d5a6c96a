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

#include "thermoprop/observables.hpp"

#include "thermoprop/fermion_ops.hpp"

namespace thermoprop {

namespace {

MajoranaPolynomial spin_z_poly(std::size_t n_sites, std::size_t site) {
  const std::size_t n_modes = 2 * n_sites;
  return MajoranaPolynomial::number(n_modes, fermion_mode(site, 0)) -
         MajoranaPolynomial::number(n_modes, fermion_mode(site, 1));
}

ObservableExpansion<MajoranaMonomial> to_observable(const MajoranaPolynomial& p) {
  const auto form = p.real_form();
  ObservableExpansion<MajoranaMonomial> o;
  o.system_size = p.n_generators();
  o.identity = form.identity;
  o.terms = form.terms;
  return o;
}

void check_site(std::size_t n_sites, std::size_t site) {
  if (site >= n_sites) throw std::out_of_range("site index " + std::to_string(site) + " out of range");
}

}  // namespace

ObservableExpansion<MajoranaMonomial> spin_z_observable(std::size_t n_sites, std::size_t site) {
  check_site(n_sites, site);
  return to_observable(spin_z_poly(n_sites, site));
}

ObservableExpansion<MajoranaMonomial> spin_zz_observable(std::size_t n_sites, std::size_t r, std::size_t i) {
  check_site(n_sites, r);
  check_site(n_sites, i);
  return to_observable(spin_z_poly(n_sites, r) * spin_z_poly(n_sites, i));
}

double spin_correlation_czz(const OperatorMap<MajoranaMonomial>& state, const HexTriangularLattice& lattice,
                            std::size_t r, std::size_t i) {
  const std::size_t n = lattice.n_sites();
  if (state.system_size() != 4 * n) throw std::invalid_argument("spin_correlation_czz: state/lattice size mismatch");
  const double zz = expectation(state, spin_zz_observable(n, r, i));
  return zz - expectation(state, spin_z_observable(n, r)) * expectation(state, spin_z_observable(n, i));
}

std::vector<double> czz_map(const OperatorMap<MajoranaMonomial>& state, const HexTriangularLattice& lattice) {
  std::vector<double> out(lattice.n_sites());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spin_correlation_czz(state, lattice, lattice.center_index, i);
  return out;
}

}  // namespace thermoprop
