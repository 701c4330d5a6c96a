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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thermoprop/hamiltonian.hpp"
#include "thermoprop/observables.hpp"
#include "thermoprop/schedule.hpp"

namespace thermoprop {

/// Jordan-Wigner image of a monomial: m_{2j-1} -> Z^{j-1} X_j and
/// m_{2j} -> Z^{j-1} Y_j (1-based), i.e. generator 2j / 2j+1 (0-based) on
/// qubit j. Returns P and the real phase with M = phase·P.
Product<PauliString> jw_map(const MajoranaMonomial& m);

Hamiltonian<PauliString> jw_map(const Hamiltonian<MajoranaMonomial>& h);
ObservableExpansion<PauliString> jw_map(const ObservableExpansion<MajoranaMonomial>& o);
/// Gate angles carry the sign of the term coefficient; flips those whose
/// Jordan-Wigner image picked up a minus sign so `s` drives jw_map(h).
GateSchedule jw_map(const GateSchedule& s, const Hamiltonian<MajoranaMonomial>& h);

namespace dense {

/// Largest invariant block the oracles will diagonalize or propagate.
inline constexpr std::size_t kMaxBlockQubits = 12;
/// Largest total register, i.e. 2^16 basis columns for the product formula.
inline constexpr std::size_t kMaxQubits = 16;

/// Full 2^n x 2^n matrix; basis index bit j is qubit j.
Eigen::MatrixXcd matrix(const PauliString& p);
Eigen::MatrixXcd matrix(const ObservableExpansion<PauliString>& o);
Eigen::MatrixXcd matrix(const Hamiltonian<PauliString>& h);

/// Partition of the computational basis into cosets of the GF(2) span of the
/// Hamiltonian's X-masks. Every term maps a coset into itself, so H, the
/// Trotter product, and the thermal state are block diagonal.
class SectorDecomposition {
 public:
  SectorDecomposition(std::size_t n_qubits, std::span<const std::uint64_t> x_masks);

  std::size_t n_qubits() const { return n_; }
  std::size_t rank() const { return basis_.size(); }
  std::size_t block_dimension() const { return std::size_t{1} << basis_.size(); }
  std::size_t n_blocks() const { return std::size_t{1} << (n_ - basis_.size()); }

  /// Coordinates of `x` in the span basis, or nullopt when x is outside.
  std::optional<std::uint64_t> coordinates(std::uint64_t x) const;
  /// Bitstring of coordinate vector `c` in block `block`.
  std::uint64_t bitstring(std::size_t block, std::uint64_t c) const;
  /// Bit k of the result is parity(basis_k & z).
  std::uint64_t project_z(std::uint64_t z) const;
  std::uint64_t block_offset(std::size_t block) const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> basis_;  // reduced echelon form
  std::vector<int> pivots_;
  std::vector<int> free_bits_;
};

/// Exact e^{-beta H} via per-block eigendecomposition; one decomposition
/// serves every beta.
class ThermalOracle {
 public:
  explicit ThermalOracle(const Hamiltonian<PauliString>& h);
  ~ThermalOracle();
  ThermalOracle(ThermalOracle&&) noexcept;
  ThermalOracle& operator=(ThermalOracle&&) noexcept;

  /// Tr(O e^{-beta H}) / Tr(e^{-beta H}).
  double expectation(double beta, const ObservableExpansion<PauliString>& o) const;
  double log_partition(double beta) const;
  double ground_energy() const;
  /// Eigenvalues of H, ascending (all blocks merged).
  std::vector<double> spectrum() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ProductFormulaResult {
  /// values[k][j]: observable j after gate_counts[k] gates.
  std::vector<std::vector<double>> values;
  /// log Tr(A) after gate_counts[k] gates, A the unnormalized sandwich.
  std::vector<double> log_trace;
};

/// Builds A = (G_g ... G_1) I (G_1 ... G_g) with G = e^{-theta P/2} exactly,
/// column by column, and reports Tr(O A)/Tr(A) at each requested gate count.
ProductFormulaResult evaluate_product_formula(const Hamiltonian<PauliString>& h, const GateSchedule& schedule,
                                              std::span<const std::size_t> gate_counts,
                                              std::span<const ObservableExpansion<PauliString>> observables);

}  // namespace dense

/// Exact thermal expectation Tr(O e^{-beta H}) / Tr(e^{-beta H}).
double dense_thermal_expectation(const Hamiltonian<PauliString>& h, double beta,
                                 const ObservableExpansion<PauliString>& o);

/// Normalized expectation of O in the exact product-formula sandwich for
/// the whole schedule.
double dense_product_formula_expectation(const Hamiltonian<PauliString>& h, const GateSchedule& schedule,
                                         const ObservableExpansion<PauliString>& o);

}  // namespace thermoprop
