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

#include "thermoprop/models.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "thermoprop/fermion_ops.hpp"
#include "thermoprop/rng.hpp"

namespace thermoprop {

namespace {

PauliString two_site(std::size_t n, std::size_t i, PauliOp a, std::size_t j, PauliOp b) {
  PauliString p(n);
  p.set(i, a);
  p.set(j, b);
  return p;
}

constexpr std::array<PauliOp, 3> kXYZ = {PauliOp::X, PauliOp::Y, PauliOp::Z};

void heisenberg_bond(Hamiltonian<PauliString>& h, std::size_t i, std::size_t j, double coupling, int group) {
  if (coupling == 0.0) return;
  for (auto op : kXYZ) h.terms.push_back({two_site(h.system_size, i, op, j, op), coupling, group});
}

}  // namespace

Hamiltonian<PauliString> build_j1j2(std::size_t n, double j1, double j2, J1J2Order order) {
  if (n < 3) throw std::invalid_argument("build_j1j2: need n >= 3");
  Hamiltonian<PauliString> h;
  h.system_size = n;
  if (order == J1J2Order::j1_then_j2) {
    for (std::size_t i = 0; i + 1 < n; ++i) heisenberg_bond(h, i, i + 1, j1, kNearestNeighborGroup);
    for (std::size_t i = 0; i + 2 < n; ++i) heisenberg_bond(h, i, i + 2, j2, kNextNearestGroup);
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      heisenberg_bond(h, i, i + 1, j1, kNearestNeighborGroup);
      if (i + 2 < n) heisenberg_bond(h, i, i + 2, j2, kNextNearestGroup);
    }
  }
  return h;
}

Geometry parse_geometry(std::string_view name) {
  if (name == "all_to_all") return Geometry::all_to_all;
  if (name == "nearest_neighbor" || name == "nn") return Geometry::nearest_neighbor;
  if (name == "heisenberg_1d") return Geometry::heisenberg_1d;
  throw std::invalid_argument("unknown geometry '" + std::string(name) + "'");
}

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::all_to_all: return "all_to_all";
    case Geometry::nearest_neighbor: return "nearest_neighbor";
    default: return "heisenberg_1d";
  }
}

Hamiltonian<PauliString> build_random_2local(std::size_t n, std::size_t n_terms, Geometry geometry,
                                             std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("build_random_2local: need n >= 2");
  Hamiltonian<PauliString> h;
  h.system_size = n;
  if (geometry == Geometry::heisenberg_1d) {
    if (n_terms != 0 && n_terms != 3 * (n - 1)) {
      throw std::invalid_argument("build_random_2local: heisenberg_1d on " + std::to_string(n) + " sites has " +
                                  std::to_string(3 * (n - 1)) + " terms");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) heisenberg_bond(h, i, i + 1, 1.0, kNearestNeighborGroup);
    return h;
  }
  const std::size_t pairs = geometry == Geometry::all_to_all ? n * (n - 1) / 2 : n - 1;
  if (n_terms == 0 || n_terms > 9 * pairs) {
    throw std::invalid_argument("build_random_2local: " + std::to_string(n_terms) + " distinct terms are infeasible (max " +
                                std::to_string(9 * pairs) + ")");
  }
  CounterRng rng(seed, 0);
  std::set<PauliString> seen;
  while (h.terms.size() < n_terms) {
    std::size_t i = 0, j = 0;
    if (geometry == Geometry::all_to_all) {
      i = rng.below(n);
      j = rng.below(n - 1);
      if (j >= i) ++j;
      if (i > j) std::swap(i, j);
    } else {
      i = rng.below(n - 1);
      j = i + 1;
    }
    const auto a = kXYZ[rng.below(3)];
    const auto b = kXYZ[rng.below(3)];
    const double sign = rng.below(2) == 0 ? 1.0 : -1.0;
    auto p = two_site(n, i, a, j, b);
    if (!seen.insert(p).second) continue;
    h.terms.push_back({p, sign, kNearestNeighborGroup});
  }
  return h;
}

std::size_t HexTriangularLattice::degree(std::size_t site) const {
  std::size_t d = 0;
  for (const auto& [a, b] : edges) d += (a == site) + (b == site);
  return d;
}

HexTriangularLattice build_hex_lattice(std::size_t rings) {
  HexTriangularLattice lat;
  lat.rings = rings;
  const int r_max = static_cast<int>(rings);
  for (int r = -r_max; r <= r_max; ++r) {
    for (int q = -r_max; q <= r_max; ++q) {
      if (std::abs(q + r) > r_max) continue;
      lat.axial.push_back({q, r});
    }
  }
  std::map<std::array<int, 2>, std::size_t> index;
  for (std::size_t s = 0; s < lat.axial.size(); ++s) {
    const auto [q, r] = lat.axial[s];
    index[lat.axial[s]] = s;
    lat.positions.push_back({q + 0.5 * r, r * std::sqrt(3.0) / 2.0});
    if (q == 0 && r == 0) lat.center_index = s;
  }
  static constexpr std::array<std::array<int, 2>, 3> kForward = {{{1, 0}, {0, 1}, {-1, 1}}};
  for (std::size_t s = 0; s < lat.axial.size(); ++s) {
    for (const auto& d : kForward) {
      auto it = index.find({lat.axial[s][0] + d[0], lat.axial[s][1] + d[1]});
      if (it != index.end()) lat.edges.emplace_back(std::min(s, it->second), std::max(s, it->second));
    }
  }
  std::sort(lat.edges.begin(), lat.edges.end());
  return lat;
}

Hamiltonian<MajoranaMonomial> build_fermi_hubbard_tri(const HexTriangularLattice& lattice, double t, double u,
                                                      double mu) {
  const std::size_t n_sites = lattice.n_sites();
  if (n_sites == 0) throw std::invalid_argument("build_fermi_hubbard_tri: empty lattice");
  const std::size_t n_modes = 2 * n_sites;
  using Poly = MajoranaPolynomial;

  // Insertion-ordered accumulation so the term list follows construction order.
  std::vector<std::pair<MajoranaMonomial, double>> ordered;
  std::vector<int> group_of;
  std::map<MajoranaMonomial, std::size_t> slot;
  double offset = 0.0;
  auto append = [&](const Poly& p, int group) {
    const auto form = p.real_form();
    offset += form.identity;
    for (const auto& [m, c] : form.terms) {
      auto [it, inserted] = slot.emplace(m, ordered.size());
      if (inserted) {
        ordered.emplace_back(m, c);
        group_of.push_back(group);
      } else {
        ordered[it->second].second += c;
      }
    }
  };

  for (const auto& [i, j] : lattice.edges) {
    for (int spin = 0; spin < 2; ++spin) {
      const std::size_t a = fermion_mode(i, spin), b = fermion_mode(j, spin);
      Poly hop = Poly::creation(n_modes, a) * Poly::annihilation(n_modes, b) +
                 Poly::creation(n_modes, b) * Poly::annihilation(n_modes, a);
      append(hop * Poly::Coeff(-t), kHoppingGroup);
    }
  }
  for (std::size_t s = 0; s < n_sites; ++s) {
    const Poly n_up = Poly::number(n_modes, fermion_mode(s, 0));
    const Poly n_dn = Poly::number(n_modes, fermion_mode(s, 1));
    append((n_up * n_dn) * Poly::Coeff(u) - (n_up + n_dn) * Poly::Coeff(mu), kOnsiteGroup);
  }

  Hamiltonian<MajoranaMonomial> h;
  h.system_size = 2 * n_modes;
  h.identity_offset = offset;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    if (ordered[k].second == 0.0) continue;
    h.terms.push_back({ordered[k].first, ordered[k].second, group_of[k]});
  }
  return h;
}

void write_lattice_csv(std::ostream& os, const HexTriangularLattice& lattice) {
  std::ostringstream buf;
  buf << std::setprecision(17) << "site_index,x,y\n";
  for (std::size_t s = 0; s < lattice.n_sites(); ++s) {
    buf << s << ',' << lattice.positions[s][0] << ',' << lattice.positions[s][1] << '\n';
  }
  os << buf.str();
}

void write_edges_csv(std::ostream& os, const HexTriangularLattice& lattice) {
  std::ostringstream buf;
  buf << "i,j\n";
  for (const auto& [i, j] : lattice.edges) buf << i << ',' << j << '\n';
  os << buf.str();
}

}  // namespace thermoprop
