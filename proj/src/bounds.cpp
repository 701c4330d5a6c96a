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

#include "thermoprop/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "thermoprop/rng.hpp"

namespace thermoprop {

namespace {

double choose2(int x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SmallAngleBound thm1_small_angle_bound(double beta_lambda, int k) {
  if (k < 1) throw std::invalid_argument("thm1_small_angle_bound: k must be >= 1");
  require_non_negative(beta_lambda, "beta_lambda");
  SmallAngleBound b;
  b.epsilon = std::exp(0.5 * beta_lambda) * std::pow(std::numbers::e * beta_lambda / (2.0 * k), k);
  b.normalized = b.epsilon < 1.0 ? 2.0 * b.epsilon / (1.0 - b.epsilon) : std::numeric_limits<double>::infinity();
  return b;
}

double pbf_all_to_all(int w, int n, double alpha) {
  if (w < 0 || n < 2 || w > n) throw std::invalid_argument("pbf_all_to_all: need 0 <= w <= n, n >= 2");
  const double denom = 9.0 * choose2(n) - 4.0 * w * (3.0 * n - 2.0 * w - 1.0);
  if (denom <= 0.0) {
    throw std::domain_error("pbf_all_to_all: denominator " + fmt(denom) + " is not positive for w=" +
                            std::to_string(w) + ", n=" + std::to_string(n));
  }
  return std::exp(alpha) * choose2(w) / denom;
}

double pbf_all_to_all_exact(int w, int n) {
  if (w < 0 || n < 2 || w > n) throw std::invalid_argument("pbf_all_to_all_exact: need 0 <= w <= n, n >= 2");
  return choose2(w) / (9.0 * choose2(n) - 2.0 * w * (3.0 * n - 2.0 * w - 1.0));
}

double pbf_nn(int w, int M, double alpha) {
  if (w < 0 || M < 1) throw std::invalid_argument("pbf_nn: need w >= 0, M >= 1");
  const int denom = 9 * M - 12 * w;
  if (denom <= 0) {
    throw std::domain_error("pbf_nn: 9M - 12w = " + std::to_string(denom) + " is not positive for w=" +
                            std::to_string(w) + ", M=" + std::to_string(M));
  }
  return std::exp(alpha) * (w - 1 > 0 ? w - 1 : 0) / static_cast<double>(denom);
}

double thm2_weight_bound(const BoundInputs& in) {
  require_non_negative(in.beta_lambda, "beta_lambda");
  require_non_negative(in.obs_one_norm, "obs_one_norm");
  if (!(in.pbf >= 0.0 && in.pbf <= 1.0)) throw std::invalid_argument("thm2_weight_bound: pbf must lie in [0, 1]");
  if (in.m < 1) throw std::invalid_argument("thm2_weight_bound: m must be >= 1");
  const double x = std::numbers::e * in.beta_lambda * in.pbf / 2.0;
  if (!(in.m > x)) {
    throw std::domain_error("thm2_weight_bound: m=" + std::to_string(in.m) + " must exceed e*bl*pbf/2 = " + fmt(x));
  }
  return in.obs_one_norm * std::exp(0.5 * in.beta_lambda) * std::pow(x / in.m, in.m);
}

double thm3_trotter_bound(const BoundInputs& in) {
  if (!(in.c1 > 0.0 && in.c2 > 0.0)) throw std::invalid_argument("thm3_trotter_bound: c1, c2 must be positive");
  if (in.term_weight < 1) throw std::invalid_argument("thm3_trotter_bound: term_weight must be >= 1");
  if (in.k < 1) throw std::invalid_argument("thm3_trotter_bound: k must be >= 1");
  require_non_negative(in.beta, "beta");
  require_non_negative(in.obs_one_norm, "obs_one_norm");
  const double base = in.c2 * in.beta * in.degree * in.term_weight;
  return in.obs_one_norm * std::exp(in.c1 * in.beta * in.M) *
         std::pow(base, static_cast<double>(in.k) / in.term_weight);
}

double trotter_commutator_sum(const Hamiltonian<PauliString>& h) {
  double acc = 0.0;
  for (std::size_t a = 0; a < h.terms.size(); ++a) {
    for (std::size_t b = a + 1; b < h.terms.size(); ++b) {
      if (!commutes(h.terms[a].element, h.terms[b].element)) {
        acc += 2.0 * std::abs(h.terms[a].coeff * h.terms[b].coeff);
      }
    }
  }
  return acc;
}

Placement parse_placement(std::string_view name) {
  if (name == "contiguous") return Placement::contiguous;
  if (name == "dispersed") return Placement::dispersed;
  throw std::invalid_argument("unknown placement '" + std::string(name) + "'");
}

std::string_view to_string(Placement p) { return p == Placement::contiguous ? "contiguous" : "dispersed"; }

PauliString reference_string(std::size_t n, std::size_t w, Placement placement) {
  PauliString q(n);
  if (placement == Placement::contiguous) {
    if (w > n) throw std::invalid_argument("reference_string: weight exceeds register");
    const std::size_t start = (n - w) / 2;
    for (std::size_t i = 0; i < w; ++i) q.set(start + i, PauliOp::Z);
  } else {
    if (w > 0 && 2 * w - 1 > n) throw std::invalid_argument("reference_string: dispersed weight needs 2w - 1 <= n");
    const std::size_t start = w == 0 ? 0 : (n - (2 * w - 1)) / 2;
    for (std::size_t i = 0; i < w; ++i) q.set(start + 2 * i, PauliOp::Z);
  }
  return q;
}

std::vector<PauliString> uniform_gate_set(Geometry geometry, std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform_gate_set: need n >= 2");
  static constexpr PauliOp kOps[] = {PauliOp::X, PauliOp::Y, PauliOp::Z};
  std::vector<PauliString> out;
  auto add_edge = [&](std::size_t i, std::size_t j) {
    for (auto a : kOps) {
      for (auto b : kOps) {
        PauliString g(n);
        g.set(i, a);
        g.set(j, b);
        out.push_back(g);
      }
    }
  };
  if (geometry == Geometry::all_to_all) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) add_edge(i, j);
    }
  } else if (geometry == Geometry::nearest_neighbor) {
    for (std::size_t i = 0; i + 1 < n; ++i) add_edge(i, i + 1);
  } else {
    throw std::invalid_argument("uniform_gate_set: geometry must be all_to_all or nearest_neighbor");
  }
  return out;
}

namespace {

struct Counts {
  double commuting = 0.0;
  double decaying = 0.0;
};

void check_gates(const PauliString& q, std::span<const PauliString> gates, std::span<const double> weights) {
  if (gates.size() != weights.size()) throw std::invalid_argument("backflow: gates and weights differ in length");
  if (gates.empty()) throw std::invalid_argument("backflow: empty gate set");
  for (const auto& g : gates) detail::require_same_size(q.n_qubits(), g.n_qubits(), "backflow");
}

bool decays(const PauliString& q, const PauliString& g, std::size_t w) {
  return weight(multiply(g, q).element) < w;
}

}  // namespace

BackflowEstimate exhaustive_backflow(const PauliString& q, std::span<const PauliString> gates,
                                     std::span<const double> weights) {
  check_gates(q, gates, weights);
  const std::size_t w = weight(q);
  Counts c;
  std::uint64_t n_commuting = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (!commutes(q, gates[i])) continue;
    const double p = std::abs(weights[i]);
    c.commuting += p;
    ++n_commuting;
    if (decays(q, gates[i], w)) c.decaying += p;
  }
  if (c.commuting == 0.0) throw std::domain_error("backflow: no gate commutes with the reference string");
  return {c.decaying / c.commuting, 0.0, n_commuting, gates.size()};
}

BackflowEstimate sampled_backflow(const PauliString& q, std::span<const PauliString> gates,
                                  std::span<const double> weights, std::uint64_t samples, std::uint64_t seed) {
  check_gates(q, gates, weights);
  if (samples == 0) throw std::invalid_argument("backflow: samples must be positive");
  std::vector<double> cdf(gates.size());
  double total = 0.0;
  for (std::size_t i = 0; i < gates.size(); ++i) cdf[i] = total += std::abs(weights[i]);
  if (!(total > 0.0)) throw std::invalid_argument("backflow: weights sum to zero");

  const std::size_t w = weight(q);
  std::vector<char> commute(gates.size()), decay(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    commute[i] = commutes(q, gates[i]);
    decay[i] = commute[i] && decays(q, gates[i], w);
  }

  constexpr std::uint64_t kChunk = 4096;
  const auto n_chunks = static_cast<std::ptrdiff_t>((samples + kChunk - 1) / kChunk);
  std::uint64_t n_commuting = 0, n_decaying = 0;
#pragma omp parallel for reduction(+ : n_commuting, n_decaying) schedule(static)
  for (std::ptrdiff_t chunk = 0; chunk < n_chunks; ++chunk) {
    CounterRng rng(seed, static_cast<std::uint64_t>(chunk));
    const std::uint64_t begin = static_cast<std::uint64_t>(chunk) * kChunk;
    const std::uint64_t end = std::min(samples, begin + kChunk);
    for (std::uint64_t s = begin; s < end; ++s) {
      const double u = rng.uniform() * total;
      auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      idx = std::min(idx, gates.size() - 1);
      n_commuting += commute[idx];
      n_decaying += decay[idx];
    }
  }
  if (n_commuting == 0) throw std::domain_error("backflow: no sampled gate commuted with the reference string");
  const double p = static_cast<double>(n_decaying) / static_cast<double>(n_commuting);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_commuting)), n_commuting, samples};
}

BackflowEstimate empirical_backflow(const PauliString& q, const Hamiltonian<PauliString>& h, std::uint64_t samples,
                                    std::uint64_t seed) {
  std::vector<PauliString> gates;
  for (const auto& t : h.terms) gates.push_back(t.element);
  const auto weights = h.coefficients();
  return sampled_backflow(q, gates, weights, samples, seed);
}

void write_backflow_csv(std::ostream& os, std::span<const BackflowRow> rows) {
  os << "w,n,analytic,empirical,stderr\n";
  for (const auto& r : rows) {
    os << r.w << ',' << r.n << ',' << fmt(r.analytic) << ',' << fmt(r.empirical) << ',' << fmt(r.std_error) << '\n';
  }
}

}  // namespace thermoprop
