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

#include <cmath>

#include <gtest/gtest.h>

#include "thermoprop/gate_kernels.hpp"
#include "thermoprop/models.hpp"

using namespace thermoprop;

TEST(Observables, MaximallyMixed) {
  OperatorMap<PauliString> state(3);
  auto o = ObservableExpansion<PauliString>::single(PauliString::parse("XZI"), 2.0);
  EXPECT_EQ(expectation(state, o), 0.0);
  o.identity = 0.75;
  EXPECT_EQ(expectation(state, o), 0.75);
  const auto h = build_j1j2(3, 1.0, 0.5);
  EXPECT_EQ(energy_density(state, h, 3), 0.0);
  EXPECT_THROW(energy_density(state, h, 0), std::invalid_argument);
  EXPECT_NEAR(log_partition(state), 3 * std::log(2.0), 1e-15);
}

TEST(Observables, SingleQubitThermal) {
  OperatorMap<PauliString> state(1);
  const auto z = PauliString::parse("Z");
  apply_imaginary_gate(state, z, 0.5);
  const auto o = ObservableExpansion<PauliString>::single(z);
  EXPECT_NEAR(expectation(state, o), -0.462117, 1e-6);
  EXPECT_NEAR(log_partition(state), std::log(2 * std::cosh(0.5)), 1e-15);
}

TEST(Observables, SpinCorrelationsAtInfiniteTemperature) {
  const auto lat = build_hex_lattice(1);
  OperatorMap<MajoranaMonomial> state(4 * lat.n_sites());
  const auto map = czz_map(state, lat);
  for (std::size_t i = 0; i < map.size(); ++i) {
    EXPECT_NEAR(map[i], i == lat.center_index ? 0.5 : 0.0, 1e-15);
  }
  EXPECT_EQ(spin_z_observable(7, 2).terms.size(), 2u);
  EXPECT_THROW(spin_z_observable(7, 7), std::out_of_range);
  OperatorMap<MajoranaMonomial> wrong(8);
  EXPECT_THROW(czz_map(wrong, lat), std::invalid_argument);
}

TEST(Observables, FermiHubbardEnergyIncludesOffset) {
  const auto lat = build_hex_lattice(1);
  const auto h = build_fermi_hubbard_tri(lat, 1.0, 8.0, 4.0);
  OperatorMap<MajoranaMonomial> state(h.system_size);
  EXPECT_DOUBLE_EQ(energy(state, h), -14.0);
  EXPECT_DOUBLE_EQ(energy_density(state, h, 7), -2.0);
  EXPECT_NEAR(log_partition(state), 14 * std::log(2.0), 1e-14);
}
