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
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "thermoprop/hamiltonian.hpp"
#include "thermoprop/models.hpp"
#include "thermoprop/pauli_string.hpp"

namespace thermoprop {

struct BoundInputs {
  double beta_lambda = 0.0;
  int k = 1;
  int m = 1;
  double pbf = 0.0;
  double obs_one_norm = 1.0;
  double beta = 0.0;
  int M = 0;
  int degree = 0;
  int term_weight = 2;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct SmallAngleBound {
  double epsilon = 0.0;
  /// 2 eps / (1 - eps), or +inf when eps >= 1.
  double normalized = 0.0;
};

/// eps = e^{bl/2} (e bl / 2k)^k.
SmallAngleBound thm1_small_angle_bound(double beta_lambda, int k);

/// Closed form C(w,2) / (9 C(n,2) - 4w(3n - 2w - 1)), scaled by e^alpha.
/// Throws std::domain_error when the denominator is not positive.
double pbf_all_to_all(int w, int n, double alpha = 0.0);

/// Enumerated conditional probability for uniform all-to-all weight-2
/// gates: C(w,2) / (9 C(n,2) - 2w(3n - 2w - 1)).
double pbf_all_to_all_exact(int w, int n);

/// (w - 1) / (9M - 12w) for a chain with M edges, scaled by e^alpha.
/// Throws std::domain_error unless 9M > 12w.
double pbf_nn(int w, int M, double alpha = 0.0);

/// ||o||_1 e^{bl/2} (e bl pbf / 2m)^m. Throws std::domain_error unless
/// m > e bl pbf / 2.
double thm2_weight_bound(const BoundInputs& in);

/// ||o||_1 exp(c1 beta M) (c2 beta l w)^{k/w}.
double thm3_trotter_bound(const BoundInputs& in);

/// Sum over anticommuting pairs of 2 |lambda lambda'|.
double trotter_commutator_sum(const Hamiltonian<PauliString>& h);

enum class Placement { contiguous, dispersed };

Placement parse_placement(std::string_view name);
std::string_view to_string(Placement p);

/// Weight-w Z string: centered block, or every other site when dispersed.
PauliString reference_string(std::size_t n, std::size_t w, Placement placement);

/// Every two-qubit Pauli on every edge of the geometry (9 per edge).
/// all_to_all uses all pairs, nearest_neighbor the open chain.
std::vector<PauliString> uniform_gate_set(Geometry geometry, std::size_t n);

struct BackflowEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t commuting = 0;
  std::uint64_t samples = 0;
};

/// Pr(weight drops | gate commutes) with gates weighted by `weights`.
/// Throws std::domain_error when no gate commutes.
BackflowEstimate exhaustive_backflow(const PauliString& q, std::span<const PauliString> gates,
                                     std::span<const double> weights);

/// Monte-Carlo version: gates sampled with probability proportional to
/// |weights|. Chunks draw from independent streams, so the estimate does not
/// depend on the thread count.
BackflowEstimate sampled_backflow(const PauliString& q, std::span<const PauliString> gates,
                                  std::span<const double> weights, std::uint64_t samples, std::uint64_t seed);

BackflowEstimate empirical_backflow(const PauliString& q, const Hamiltonian<PauliString>& h, std::uint64_t samples,
                                    std::uint64_t seed);

struct BackflowRow {
  int w = 0;
  int n = 0;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
};

/// Header "w,n,analytic,empirical,stderr"; NaN marks a domain error.
void write_backflow_csv(std::ostream& os, std::span<const BackflowRow> rows);

}  // namespace thermoprop
