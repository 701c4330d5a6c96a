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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "thermoprop/hamiltonian.hpp"

namespace thermoprop {

/// Group tags assigned by the builders.
inline constexpr int kNearestNeighborGroup = 1;
inline constexpr int kNextNearestGroup = 2;
inline constexpr int kHoppingGroup = 1;
inline constexpr int kOnsiteGroup = 2;

enum class J1J2Order {
  /// All J1 bonds left to right, then all J2 bonds.
  j1_then_j2,
  /// Bond by bond: J1 (i,i+1) then J2 (i,i+2) for each i.
  by_site,
};

/// Open-chain J1-J2 Heisenberg model: J1 (XX+YY+ZZ) on (i,i+1) and
/// J2 (XX+YY+ZZ) on (i,i+2). Zero couplings emit no terms.
Hamiltonian<PauliString> build_j1j2(std::size_t n, double j1, double j2, J1J2Order order = J1J2Order::j1_then_j2);

enum class Geometry { all_to_all, nearest_neighbor, heisenberg_1d };

Geometry parse_geometry(std::string_view name);
std::string_view to_string(Geometry g);

/// Random distinct weight-2 Pauli terms with coefficients in {-1, +1}.
/// `heisenberg_1d` ignores the seed and emits the +1 open chain; it accepts
/// n_terms of 0 or 3(n-1).
Hamiltonian<PauliString> build_random_2local(std::size_t n, std::size_t n_terms, Geometry geometry,
                                             std::uint64_t seed);

/// Hexagonal patch of the triangular lattice: all axial sites (q, r) with
/// max(|q|, |r|, |q+r|) <= rings, ordered by (r, q).
struct HexTriangularLattice {
  std::size_t rings = 0;
  std::vector<std::array<int, 2>> axial;
  std::vector<std::array<double, 2>> positions;
  /// Nearest-neighbor pairs (i < j), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t center_index = 0;

  std::size_t n_sites() const { return axial.size(); }
  std::size_t degree(std::size_t site) const;
};

HexTriangularLattice build_hex_lattice(std::size_t rings);

/// Mode index of (site, spin) with spin 0 = up, 1 = down: site-major.
constexpr std::size_t fermion_mode(std::size_t site, int spin) { return 2 * site + static_cast<std::size_t>(spin); }

/// Spinful Fermi-Hubbard model on the lattice in the Majorana basis
/// (4 generators per site). Hopping monomials come first in edge order
/// (group kHoppingGroup), then the on-site monomials (kOnsiteGroup). Equal
/// monomials are combined and exact zeros dropped; all constants go to
/// identity_offset.
Hamiltonian<MajoranaMonomial> build_fermi_hubbard_tri(const HexTriangularLattice& lattice, double t, double u,
                                                      double mu);

/// "site_index,x,y" rows.
void write_lattice_csv(std::ostream& os, const HexTriangularLattice& lattice);
/// "i,j" rows.
void write_edges_csv(std::ostream& os, const HexTriangularLattice& lattice);

}  // namespace thermoprop
