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

#include "thermoprop/propagation.hpp"

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "thermoprop/exact_oracle.hpp"
#include "thermoprop/models.hpp"
#include "thermoprop/observables.hpp"

using namespace thermoprop;

namespace {

Hamiltonian<PauliString> single_term(const char* p, double lambda) {
  Hamiltonian<PauliString> h;
  h.system_size = std::strlen(p);
  h.terms.push_back({PauliString::parse(p), lambda, 0});
  return h;
}

template <class E>
OperatorMap<E> run(const Hamiltonian<E>& h, const GateSchedule& s, const TruncationPolicy& policy = {},
                   KernelKind kernel = KernelKind::parallel) {
  PropagationOptions opts;
  opts.kernel = kernel;
  return propagate_thermal(h, s, policy, {}, {}, opts).final_state;
}

}  // namespace

TEST(Propagation, SingleTermIsExact) {
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto h = single_term("Z", lambda);
    const auto s = build_trotter_schedule(h, 0.5, 0.05);
    const auto state = run(h, s);
    EXPECT_NEAR(expectation(state, as_observable(h)) / lambda, -std::tanh(0.5 * lambda), 1e-12);
    EXPECT_NEAR(log_partition(state), std::log(2 * std::cosh(0.5 * lambda)), 1e-12);
  }
}

TEST(Propagation, ZeroBetaIsMaximallyMixed) {
  const auto h = build_j1j2(6, 1.0, 0.5);
  const auto s = build_trotter_schedule(h, 0.0, 0.02);
  const auto state = run(h, s);
  EXPECT_EQ(state.size(), 1u);
  EXPECT_EQ(state.identity_coeff(), 1.0);
  EXPECT_EQ(energy(state, h), 0.0);
  EXPECT_NEAR(log_partition(state), 6 * std::log(2.0), 1e-15);
}

TEST(Propagation, CheckpointsSnapAndObserve) {
  const auto h = build_j1j2(5, 1.0, 0.5);
  const auto s = build_trotter_schedule(h, 0.2, 0.02);
  const std::vector<double> betas{0.2, 0.0, 0.1, 0.101};
  std::vector<double> seen;
  const auto res = propagate_thermal<PauliString>(
      h, s, {}, betas, [&](const Checkpoint& cp, const OperatorMap<PauliString>&) { seen.push_back(cp.beta); });
  ASSERT_EQ(res.checkpoints.size(), 4u);
  EXPECT_EQ(res.checkpoints[1].gates_applied, 0u);
  EXPECT_EQ(res.checkpoints[2].gates_applied, 5 * h.terms.size());
  EXPECT_EQ(res.checkpoints[3].gates_applied, res.checkpoints[2].gates_applied + 1);  // nearest boundary
  EXPECT_EQ(res.checkpoints[0].gates_applied, s.gates.size());
  EXPECT_NEAR(res.checkpoints[2].beta, 0.1, 1e-15);
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  EXPECT_THROW(propagate_thermal(h, s, {}, std::vector<double>{0.3}), std::invalid_argument);
}

TEST(Propagation, MatchesProductFormulaOracle) {
  const auto h = build_j1j2(6, 1.0, 0.5);
  const auto s = build_trotter_schedule(h, 0.3, 0.02);
  const auto state = run(h, s);
  std::vector<ObservableExpansion<PauliString>> os{as_observable(h)};
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      PauliString zz(6);
      zz.set(i, PauliOp::Z);
      zz.set(j, PauliOp::Z);
      os.push_back(ObservableExpansion<PauliString>::single(zz));
    }
  }
  const std::vector<std::size_t> all{s.gates.size()};
  const auto ref = dense::evaluate_product_formula(h, s, all, os);
  for (std::size_t k = 0; k < os.size(); ++k) EXPECT_NEAR(expectation(state, os[k]), ref.values[0][k], 1e-12);
  EXPECT_NEAR(log_partition(state), ref.log_trace[0], 1e-11);
  EXPECT_GE(state.log_factor(), 0.0);
}

TEST(Propagation, ReferenceKernelAgrees) {
  const auto h = build_random_2local(6, 15, Geometry::all_to_all, 4);
  const auto s = build_qdrift_schedule(h, 0.5, 0.05, 9);
  TruncationPolicy policy;
  policy.coeff_threshold = 1e-6;
  const auto a = run(h, s, policy, KernelKind::parallel);
  const auto b = run(h, s, policy, KernelKind::reference);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    EXPECT_EQ(a.terms()[i].element, b.terms()[i].element);
    EXPECT_EQ(a.terms()[i].coeff, b.terms()[i].coeff);
  }
  EXPECT_EQ(a.log_factor(), b.log_factor());
}

TEST(Propagation, MajoranaMatchesJordanWignerOracle) {
  const auto lat = build_hex_lattice(1);
  // Three sites of the seven-site patch keep the dense check small.
  HexTriangularLattice tri = lat;
  tri.axial.resize(3);
  tri.positions.resize(3);
  tri.edges.clear();
  for (const auto& e : lat.edges) {
    if (e.second < 3) tri.edges.push_back(e);
  }
  ASSERT_FALSE(tri.edges.empty());
  const auto h = build_fermi_hubbard_tri(tri, 1.0, 8.0, 4.0);
  const auto s = build_trotter_schedule(h, 0.1, 0.01);
  const auto state = run(h, s);
  const auto hp = jw_map(h);
  const auto sp = jw_map(s, h);
  EXPECT_NEAR(energy(state, h), dense_product_formula_expectation(hp, sp, jw_map(as_observable(h))), 1e-12);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto zz = spin_zz_observable(3, 0, i);
    EXPECT_NEAR(expectation(state, zz), dense_product_formula_expectation(hp, sp, jw_map(zz)), 1e-12);
  }
}

TEST(Propagation, TighterThresholdKeepsMoreTerms) {
  const auto h = build_j1j2(8, 1.0, 0.5);
  const auto s = build_trotter_schedule(h, 0.4, 0.02);
  std::size_t prev = 0;
  for (int e = 6; e <= 12; e += 2) {
    TruncationPolicy policy;
    policy.coeff_threshold = std::ldexp(1.0, -e);
    const auto n = run(h, s, policy).size();
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(Propagation, TermCap) {
  const auto h = build_j1j2(8, 1.0, 0.5);
  const auto s = build_trotter_schedule(h, 0.2, 0.02);
  PropagationOptions opts;
  opts.max_terms = 50;
  EXPECT_THROW(propagate_thermal(h, s, {}, {}, {}, opts), TermCapExceeded);
}

TEST(Propagation, ScheduleMismatch) {
  const auto h = build_j1j2(4, 1.0, 0.5);
  const auto other = build_j1j2(5, 1.0, 0.5);
  const auto s = build_trotter_schedule(other, 0.1, 0.02);
  EXPECT_THROW(propagate_thermal(h, s, {}, {}), std::invalid_argument);
}
