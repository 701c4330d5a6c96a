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

#include "thermoprop/exact_oracle.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "thermoprop/errors.hpp"
#include "thermoprop/models.hpp"

using namespace thermoprop;

namespace {

Hamiltonian<PauliString> single_term(const char* p, double lambda) {
  Hamiltonian<PauliString> h;
  h.system_size = std::strlen(p);
  h.terms.push_back({PauliString::parse(p), lambda, 0});
  return h;
}

ObservableExpansion<PauliString> obs(const char* p) {
  return ObservableExpansion<PauliString>::single(PauliString::parse(p));
}

// e^{-beta H} through a full diagonalization of the 2^n matrix.
Eigen::MatrixXcd brute_gibbs(const Hamiltonian<PauliString>& h, double beta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense::matrix(h));
  const Eigen::VectorXd w = (-beta * es.eigenvalues().array()).exp();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd brute_gate(const PauliString& p, double half) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << p.n_qubits());
  return std::cosh(half) * Eigen::MatrixXcd::Identity(dim, dim) - std::sinh(half) * dense::matrix(p);
}

double brute_product_formula(const Hamiltonian<PauliString>& h, const GateSchedule& s,
                             const ObservableExpansion<PauliString>& o) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.system_size);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : s.gates) {
    const auto gm = brute_gate(h.terms[g.term_index].element, 0.5 * g.angle);
    a = gm * a * gm;
  }
  return ((dense::matrix(o) * a).trace() / a.trace()).real();
}

Hamiltonian<PauliString> complex_model(std::size_t n) {
  // Contains odd numbers of Y, so the matrix has imaginary entries.
  auto h = build_random_2local(n, 12, Geometry::all_to_all, 3);
  h.terms.push_back({PauliString::single(n, 0, PauliOp::Y), 0.4, 0});
  h.terms.push_back({PauliString::single(n, n - 1, PauliOp::X), -0.3, 0});
  return h;
}

}  // namespace

TEST(DenseMatrix, SingleQubit) {
  const auto y = dense::matrix(PauliString::parse("Y"));
  EXPECT_EQ(y(0, 1), std::complex<double>(0, -1));
  EXPECT_EQ(y(1, 0), std::complex<double>(0, 1));
  // Qubit j is bit j of the basis index.
  const auto zi = dense::matrix(PauliString::parse("ZI"));
  EXPECT_EQ(zi(1, 1).real(), -1.0);
  EXPECT_EQ(zi(2, 2).real(), 1.0);
}

TEST(SectorDecomposition, CosetsCoverTheBasis) {
  const std::vector<std::uint64_t> xs{0b0011, 0b0110, 0b0101, 0};
  dense::SectorDecomposition sd(4, xs);
  EXPECT_EQ(sd.rank(), 2u);
  EXPECT_EQ(sd.block_dimension() * sd.n_blocks(), 16u);
  std::vector<int> hits(16, 0);
  for (std::size_t b = 0; b < sd.n_blocks(); ++b) {
    for (std::uint64_t c = 0; c < sd.block_dimension(); ++c) ++hits[sd.bitstring(b, c)];
  }
  for (int h : hits) EXPECT_EQ(h, 1);
  for (auto x : xs) {
    const auto c = sd.coordinates(x);
    ASSERT_TRUE(c.has_value());
    // Translating by x maps coordinates by XOR.
    for (std::uint64_t k = 0; k < sd.block_dimension(); ++k) EXPECT_EQ(sd.bitstring(1, k) ^ x, sd.bitstring(1, k ^ *c));
  }
  EXPECT_FALSE(sd.coordinates(0b1000).has_value());
}

TEST(SectorDecomposition, SizeCaps) {
  std::vector<std::uint64_t> xs;
  for (int q = 0; q < 13; ++q) xs.push_back(std::uint64_t{1} << q);
  EXPECT_THROW(dense::SectorDecomposition(13, xs), DimensionTooLarge);
  EXPECT_THROW(dense::SectorDecomposition(17, std::vector<std::uint64_t>{}), DimensionTooLarge);
  EXPECT_THROW(dense::matrix(PauliString(13)), DimensionTooLarge);
}

TEST(ThermalOracle, TwoLevelSystems) {
  for (double beta : {0.0, 0.3, 1.0, 2.5}) {
    const auto hz = single_term("Z", 1.0);
    dense::ThermalOracle oz(hz);
    EXPECT_NEAR(oz.expectation(beta, obs("Z")), -std::tanh(beta), 1e-14);
    EXPECT_NEAR(oz.log_partition(beta), std::log(2 * std::cosh(beta)), 1e-14);
    dense::ThermalOracle ozz(single_term("ZZ", 1.0));
    EXPECT_NEAR(ozz.expectation(beta, obs("ZZ")), -std::tanh(beta), 1e-14);
  }
  dense::ThermalOracle o(single_term("XY", 0.7));
  EXPECT_NEAR(o.expectation(0.0, obs("XY")), 0.0, 1e-15);
  auto id = obs("II");
  EXPECT_NEAR(o.expectation(1.0, id), 1.0, 1e-14);
}

TEST(ThermalOracle, MatchesBruteForce) {
  for (const auto& h : {build_j1j2(6, 1.0, 0.5), complex_model(5)}) {
    dense::ThermalOracle oracle(h);
    const double beta = 0.7;
    const auto rho = brute_gibbs(h, beta);
    const double z = rho.trace().real();
    EXPECT_NEAR(oracle.log_partition(beta), std::log(z), 1e-11);
    for (const auto& t : h.terms) {
      const auto o = ObservableExpansion<PauliString>::single(t.element);
      const double expected = (dense::matrix(o) * rho).trace().real() / z;
      EXPECT_NEAR(oracle.expectation(beta, o), expected, 1e-12) << t.element;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense::matrix(h));
    EXPECT_NEAR(oracle.ground_energy(), es.eigenvalues()(0), 1e-11);
    const auto spec = oracle.spectrum();
    ASSERT_EQ(spec.size(), static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t k = 0; k < spec.size(); ++k) EXPECT_NEAR(spec[k], es.eigenvalues()(k), 1e-11);
  }
}

TEST(ProductFormula, MatchesBruteForce) {
  for (const auto& h : {build_j1j2(5, 1.0, 0.5), complex_model(4)}) {
    const auto s = build_qdrift_schedule(h, 0.4, 0.05, 21);
    std::vector<ObservableExpansion<PauliString>> os{as_observable(h)};
    os.push_back(ObservableExpansion<PauliString>::single(h.terms[0].element));
    const std::vector<std::size_t> counts{s.gates.size(), 0, s.gates.size() / 2};
    const auto res = dense::evaluate_product_formula(h, s, counts, os);
    GateSchedule half = s;
    half.gates.resize(s.gates.size() / 2);
    for (std::size_t j = 0; j < os.size(); ++j) {
      EXPECT_NEAR(res.values[0][j], brute_product_formula(h, s, os[j]), 1e-12);
      EXPECT_NEAR(res.values[2][j], brute_product_formula(h, half, os[j]), 1e-12);
    }
    EXPECT_NEAR(res.values[1][1], 0.0, 1e-15);
    EXPECT_NEAR(res.log_trace[1], h.system_size * std::log(2.0), 1e-14);
  }
}

TEST(ProductFormula, SingleTermHasNoSplittingError) {
  for (double lambda : {0.5, -1.0, 2.0}) {
    const auto h = single_term("XZY", lambda);
    const auto s = build_trotter_schedule(h, 1.0, 0.1);
    const auto o = obs("XZY");
    EXPECT_NEAR(dense_product_formula_expectation(h, s, o), dense_thermal_expectation(h, 1.0, o), 1e-12);
    EXPECT_NEAR(dense_product_formula_expectation(h, s, o), -std::tanh(lambda), 1e-12);
  }
}

TEST(ProductFormula, ConvergenceOrderByObservable) {
  const auto h = build_j1j2(6, 1.0, 0.0);
  PauliString zz(6);
  zz.set(0, PauliOp::Z);
  zz.set(1, PauliOp::Z);
  const std::vector<ObservableExpansion<PauliString>> obs{as_observable(h),
                                                          ObservableExpansion<PauliString>::single(zz)};
  dense::ThermalOracle oracle(h);
  std::vector<double> prev(obs.size(), 0.0);
  TrotterOptions opts;
  opts.allow_tail = true;
  for (double tau : {0.04, 0.02, 0.01}) {
    const auto s = build_trotter_schedule(h, 0.5, tau, opts);
    for (std::size_t j = 0; j < obs.size(); ++j) {
      const double dev =
          std::abs(dense_product_formula_expectation(h, s, obs[j]) - oracle.expectation(0.5, obs[j]));
      if (prev[j] > 0.0) {
        const double ratio = prev[j] / dev;
        if (j == 0) {
          EXPECT_GT(ratio, 3.5);
          EXPECT_LT(ratio, 4.5);
        } else {
          EXPECT_GT(ratio, 1.5);
          EXPECT_LT(ratio, 3.0);
        }
      }
      prev[j] = dev;
    }
  }
}

TEST(JordanWigner, ObservableAndHamiltonianMaps) {
  const auto lat = build_hex_lattice(0);
  const auto h = build_fermi_hubbard_tri(lat, 1.0, 8.0, 4.0);
  const auto hp = jw_map(h);
  EXPECT_EQ(hp.system_size, 2u);
  EXPECT_EQ(hp.identity_offset, h.identity_offset);
  // n_up n_dn - ... : the spectrum of U n n - mu n is {0, -4, -4, 0} at U=8, mu=4.
  dense::ThermalOracle o(hp);
  const auto spec = o.spectrum();
  EXPECT_NEAR(spec[0], -4.0, 1e-12);
  EXPECT_NEAR(spec[1], -4.0, 1e-12);
  EXPECT_NEAR(spec[2], 0.0, 1e-12);
  EXPECT_NEAR(spec[3], 0.0, 1e-12);
}
