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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Eigenvalues>

#include "thermoprop/errors.hpp"

namespace thermoprop {

Product<PauliString> jw_map(const MajoranaMonomial& m) {
  const std::size_t n_qubits = m.n_modes();
  Product<PauliString> out{PauliString::identity(n_qubits), Phase(hermitian_phase_exponent(length(m)))};
  for (auto p : m.indices()) {
    const std::size_t j = p / 2;
    PauliString image(n_qubits);
    for (std::size_t k = 0; k < j; ++k) image.set(k, PauliOp::Z);
    image.set(j, p % 2 == 0 ? PauliOp::X : PauliOp::Y);
    const auto prod = multiply(out.element, image);
    out.element = prod.element;
    out.phase = out.phase * prod.phase;
  }
  if (!out.phase.is_real()) throw std::logic_error("jw_map: Hermitian monomial mapped to a non-Hermitian string");
  return out;
}

Hamiltonian<PauliString> jw_map(const Hamiltonian<MajoranaMonomial>& h) {
  Hamiltonian<PauliString> out;
  out.system_size = h.system_size / 2;
  out.identity_offset = h.identity_offset;
  for (const auto& t : h.terms) {
    const auto img = jw_map(t.element);
    out.terms.push_back({img.element, img.phase.sign() * t.coeff, t.group});
  }
  return out;
}

ObservableExpansion<PauliString> jw_map(const ObservableExpansion<MajoranaMonomial>& o) {
  ObservableExpansion<PauliString> out;
  out.system_size = o.system_size / 2;
  out.identity = o.identity;
  for (const auto& [m, c] : o.terms) {
    const auto img = jw_map(m);
    out.terms.emplace_back(img.element, img.phase.sign() * c);
  }
  return out;
}

GateSchedule jw_map(const GateSchedule& s, const Hamiltonian<MajoranaMonomial>& h) {
  if (s.n_terms != h.terms.size()) throw std::invalid_argument("jw_map: schedule/Hamiltonian mismatch");
  std::vector<double> sign;
  for (const auto& t : h.terms) sign.push_back(static_cast<double>(jw_map(t.element).phase.sign()));
  GateSchedule out = s;
  for (auto& g : out.gates) g.angle *= sign.at(g.term_index);
  return out;
}

namespace dense {

namespace {

struct Masks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int y_count = 0;
};

Masks masks_of(const PauliString& p) {
  if (p.n_qubits() > 64) throw DimensionTooLarge("dense oracle: more than 64 qubits");
  Masks m;
  m.x = p.x_words()[0];
  m.z = p.z_words()[0];
  m.y_count = std::popcount(m.x & m.z);
  return m;
}

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

void check_register(std::size_t n_qubits) {
  if (n_qubits > kMaxQubits) {
    throw DimensionTooLarge("dense oracle: " + std::to_string(n_qubits) + " qubits exceeds the cap of " +
                            std::to_string(kMaxQubits));
  }
}

/// A Pauli term restricted to one coset: P|c> = phase(c)|c ^ x>, with
/// phase(c) = i^y (-1)^{s0 ^ parity(c & zc)}.
struct BlockTerm {
  std::uint64_t x = 0;
  std::uint64_t zc = 0;
  std::uint64_t z_full = 0;
  int y_count = 0;
  double coeff = 0.0;
  bool in_span = true;
};

BlockTerm block_term(const SectorDecomposition& sd, const PauliString& p, double coeff) {
  const auto m = masks_of(p);
  BlockTerm t;
  const auto c = sd.coordinates(m.x);
  t.in_span = c.has_value();
  t.x = c.value_or(0);
  t.zc = sd.project_z(m.z);
  t.z_full = m.z;
  t.y_count = m.y_count;
  t.coeff = coeff;
  return t;
}

template <class Scalar>
Scalar y_phase(int y_count) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return (y_count % 4 == 2) ? -1.0 : 1.0;
  } else {
    return Phase(y_count).value();
  }
}

template <class Scalar>
Scalar term_phase(const BlockTerm& t, int s0, std::uint64_t c) {
  const Scalar base = y_phase<Scalar>(t.y_count);
  return (s0 ^ parity(c & t.zc)) ? -base : base;
}

bool all_real(const std::vector<BlockTerm>& terms) {
  return std::all_of(terms.begin(), terms.end(), [](const BlockTerm& t) { return t.y_count % 2 == 0; });
}

double conj_mul_real(double a, double b) { return a * b; }
double conj_mul_real(const std::complex<double>& a, const std::complex<double>& b) { return (std::conj(a) * b).real(); }

/// <w|P|w> restricted to the block.
template <class Scalar>
double term_expectation(const std::vector<Scalar>& w, const BlockTerm& t, int s0) {
  if (!t.in_span) return 0.0;
  if constexpr (std::is_same_v<Scalar, double>) {
    if (t.y_count % 2 != 0) return 0.0;  // imaginary antisymmetric on real vectors
  }
  double acc = 0.0;
  const std::uint64_t d = w.size();
  for (std::uint64_t c = 0; c < d; ++c) {
    acc += conj_mul_real(w[c ^ t.x], term_phase<Scalar>(t, s0, c) * w[c]);
  }
  return acc;
}

}  // namespace

Eigen::MatrixXcd matrix(const PauliString& p) {
  if (p.n_qubits() > kMaxBlockQubits) throw DimensionTooLarge("dense::matrix: register too large");
  const auto m = masks_of(p);
  const std::size_t dim = std::size_t{1} << p.n_qubits();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto base = Phase(m.y_count).value();
  for (std::uint64_t b = 0; b < dim; ++b) {
    out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) = parity(b & m.z) ? -base : base;
  }
  return out;
}

Eigen::MatrixXcd matrix(const ObservableExpansion<PauliString>& o) {
  if (o.system_size > kMaxBlockQubits) throw DimensionTooLarge("dense::matrix: register too large");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << o.system_size);
  Eigen::MatrixXcd out = o.identity * Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& [p, c] : o.terms) out += c * matrix(p);
  return out;
}

Eigen::MatrixXcd matrix(const Hamiltonian<PauliString>& h) { return matrix(as_observable(h)); }

SectorDecomposition::SectorDecomposition(std::size_t n_qubits, std::span<const std::uint64_t> x_masks) : n_(n_qubits) {
  check_register(n_qubits);
  for (std::uint64_t v : x_masks) {
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if ((v >> pivots_[k]) & 1U) v ^= basis_[k];
    }
    if (v == 0) continue;
    const int pivot = std::countr_zero(v);
    // Keep the basis reduced: clear the new pivot from existing vectors.
    for (auto& b : basis_) {
      if ((b >> pivot) & 1U) b ^= v;
    }
    basis_.push_back(v);
    pivots_.push_back(pivot);
  }
  if (basis_.size() > kMaxBlockQubits) {
    throw DimensionTooLarge("dense oracle: invariant block of 2^" + std::to_string(basis_.size()) +
                            " states exceeds the cap of 2^" + std::to_string(kMaxBlockQubits));
  }
  std::uint64_t pivot_mask = 0;
  for (int p : pivots_) pivot_mask |= std::uint64_t{1} << p;
  for (std::size_t q = 0; q < n_; ++q) {
    if (!((pivot_mask >> q) & 1U)) free_bits_.push_back(static_cast<int>(q));
  }
}

std::optional<std::uint64_t> SectorDecomposition::coordinates(std::uint64_t x) const {
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if ((x >> pivots_[k]) & 1U) {
      c |= std::uint64_t{1} << k;
      x ^= basis_[k];
    }
  }
  if (x != 0) return std::nullopt;
  return c;
}

std::uint64_t SectorDecomposition::block_offset(std::size_t block) const {
  std::uint64_t b = 0;
  for (std::size_t k = 0; k < free_bits_.size(); ++k) {
    if ((block >> k) & 1U) b |= std::uint64_t{1} << free_bits_[k];
  }
  return b;
}

std::uint64_t SectorDecomposition::bitstring(std::size_t block, std::uint64_t c) const {
  std::uint64_t b = block_offset(block);
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if ((c >> k) & 1U) b ^= basis_[k];
  }
  return b;
}

std::uint64_t SectorDecomposition::project_z(std::uint64_t z) const {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (parity(basis_[k] & z)) out |= std::uint64_t{1} << k;
  }
  return out;
}

namespace {

SectorDecomposition sectors_for(const Hamiltonian<PauliString>& h) {
  std::vector<std::uint64_t> xs;
  for (const auto& t : h.terms) xs.push_back(masks_of(t.element).x);
  return SectorDecomposition(h.system_size, xs);
}

std::vector<BlockTerm> block_terms(const SectorDecomposition& sd, const ObservableExpansion<PauliString>& o) {
  std::vector<BlockTerm> out;
  out.reserve(o.terms.size());
  for (const auto& [p, c] : o.terms) out.push_back(block_term(sd, p, c));
  return out;
}

}  // namespace

struct ThermalOracle::Impl {
  SectorDecomposition sectors;
  bool real = true;
  std::vector<Eigen::VectorXd> evals;
  std::vector<Eigen::MatrixXcd> evecs;
  double e_min = std::numeric_limits<double>::infinity();

  explicit Impl(const Hamiltonian<PauliString>& h) : sectors(sectors_for(h)) {
    const auto terms = block_terms(sectors, as_observable(h));
    real = all_real(terms);
    const auto d = static_cast<Eigen::Index>(sectors.block_dimension());
    for (std::size_t b = 0; b < sectors.n_blocks(); ++b) {
      const std::uint64_t off = sectors.block_offset(b);
      if (real) {
        Eigen::MatrixXd hb = h.identity_offset * Eigen::MatrixXd::Identity(d, d);
        for (const auto& t : terms) {
          const int s0 = parity(off & t.z_full);
          for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(d); ++c) {
            hb(static_cast<Eigen::Index>(c ^ t.x), static_cast<Eigen::Index>(c)) += t.coeff * term_phase<double>(t, s0, c);
          }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hb);
        evals.push_back(es.eigenvalues());
        evecs.push_back(es.eigenvectors().cast<std::complex<double>>());
      } else {
        Eigen::MatrixXcd hb = h.identity_offset * Eigen::MatrixXcd::Identity(d, d);
        for (const auto& t : terms) {
          const int s0 = parity(off & t.z_full);
          for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(d); ++c) {
            hb(static_cast<Eigen::Index>(c ^ t.x), static_cast<Eigen::Index>(c)) +=
                t.coeff * term_phase<std::complex<double>>(t, s0, c);
          }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hb);
        evals.push_back(es.eigenvalues());
        evecs.push_back(es.eigenvectors());
      }
      e_min = std::min(e_min, evals.back().minCoeff());
    }
  }
};

ThermalOracle::ThermalOracle(const Hamiltonian<PauliString>& h) : impl_(std::make_unique<Impl>(h)) {}
ThermalOracle::~ThermalOracle() = default;
ThermalOracle::ThermalOracle(ThermalOracle&&) noexcept = default;
ThermalOracle& ThermalOracle::operator=(ThermalOracle&&) noexcept = default;

double ThermalOracle::expectation(double beta, const ObservableExpansion<PauliString>& o) const {
  const auto& sd = impl_->sectors;
  if (o.system_size != sd.n_qubits()) throw std::invalid_argument("ThermalOracle: observable size mismatch");
  const auto terms = block_terms(sd, o);
  double z = 0.0, acc = 0.0;
  const auto d = sd.block_dimension();
  std::vector<std::complex<double>> v(d);
  for (std::size_t b = 0; b < sd.n_blocks(); ++b) {
    const std::uint64_t off = sd.block_offset(b);
    const auto& vals = impl_->evals[b];
    const auto& vecs = impl_->evecs[b];
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
      const double w = std::exp(-beta * (vals(k) - impl_->e_min));
      z += w;
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) v[c] = vecs(static_cast<Eigen::Index>(c), k);
      double ev = o.identity;
      for (const auto& t : terms) ev += t.coeff * term_expectation(v, t, parity(off & t.z_full));
      acc += w * ev;
    }
  }
  return acc / z;
}

double ThermalOracle::log_partition(double beta) const {
  double z = 0.0;
  for (const auto& vals : impl_->evals) {
    for (Eigen::Index k = 0; k < vals.size(); ++k) z += std::exp(-beta * (vals(k) - impl_->e_min));
  }
  return std::log(z) - beta * impl_->e_min;
}

double ThermalOracle::ground_energy() const { return impl_->e_min; }

std::vector<double> ThermalOracle::spectrum() const {
  std::vector<double> out;
  for (const auto& vals : impl_->evals) out.insert(out.end(), vals.begin(), vals.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <class Scalar>
void apply_block_gate(std::vector<Scalar>& v, const BlockTerm& t, int s0, double ch, double sh) {
  const std::uint64_t d = v.size();
  if (t.x == 0) {
    for (std::uint64_t c = 0; c < d; ++c) v[c] *= ch - sh * term_phase<Scalar>(t, s0, c);
    return;
  }
  const std::uint64_t high = std::uint64_t{1} << (63 - std::countl_zero(t.x));
  for (std::uint64_t c = 0; c < d; ++c) {
    if (c & high) continue;
    const std::uint64_t e = c ^ t.x;
    const Scalar vc = v[c], ve = v[e];
    // P|c> = ph(c)|e>, P|e> = ph(e)|c>.
    v[e] = ch * ve - sh * term_phase<Scalar>(t, s0, c) * vc;
    v[c] = ch * vc - sh * term_phase<Scalar>(t, s0, e) * ve;
  }
}

template <class Scalar>
ProductFormulaResult run_product_formula(const SectorDecomposition& sd, const std::vector<BlockTerm>& h_terms,
                                         const GateSchedule& schedule, std::span<const std::size_t> gate_counts,
                                         const std::vector<ObservableExpansion<PauliString>>& observables) {
  const std::size_t n_cp = gate_counts.size(), n_obs = observables.size();
  std::vector<std::vector<BlockTerm>> obs_terms;
  for (const auto& o : observables) obs_terms.push_back(block_terms(sd, o));

  std::vector<std::size_t> order(n_cp);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return gate_counts[a] < gate_counts[b]; });
  const std::size_t last = n_cp == 0 ? 0 : gate_counts[order.back()];
  if (last > schedule.gates.size()) throw std::invalid_argument("product formula: checkpoint beyond the schedule");

  const std::size_t d = sd.block_dimension();
  const std::size_t stride = n_obs + 1;  // trace, then observables
  std::vector<double> totals(n_cp * stride, 0.0);
  std::vector<double> per_column(d * n_cp * stride);

  for (std::size_t b = 0; b < sd.n_blocks(); ++b) {
    const std::uint64_t off = sd.block_offset(b);
    std::vector<int> h_s0(h_terms.size());
    for (std::size_t m = 0; m < h_terms.size(); ++m) h_s0[m] = parity(off & h_terms[m].z_full);
    std::vector<std::vector<int>> obs_s0(n_obs);
    for (std::size_t j = 0; j < n_obs; ++j) {
      for (const auto& t : obs_terms[j]) obs_s0[j].push_back(parity(off & t.z_full));
    }

#pragma omp parallel
    {
      std::vector<Scalar> w(d);
#pragma omp for schedule(dynamic, 4)
      for (std::ptrdiff_t cc = 0; cc < static_cast<std::ptrdiff_t>(d); ++cc) {
        const auto col = static_cast<std::size_t>(cc);
        std::fill(w.begin(), w.end(), Scalar(0.0));
        w[col] = 1.0;
        std::size_t next = 0, applied = 0;
        while (next < n_cp) {
          while (next < n_cp && gate_counts[order[next]] == applied) {
            double* out = &per_column[(col * n_cp + order[next]) * stride];
            double norm = 0.0;
            for (const auto& x : w) norm += conj_mul_real(x, x);
            out[0] = norm;
            for (std::size_t j = 0; j < n_obs; ++j) {
              double ev = observables[j].identity * norm;
              for (std::size_t k = 0; k < obs_terms[j].size(); ++k) {
                ev += obs_terms[j][k].coeff * term_expectation(w, obs_terms[j][k], obs_s0[j][k]);
              }
              out[1 + j] = ev;
            }
            ++next;
          }
          if (next == n_cp) break;
          const Gate& g = schedule.gates[applied];
          const double half = 0.5 * g.angle;
          apply_block_gate(w, h_terms[g.term_index], h_s0[g.term_index], std::cosh(half), std::sinh(half));
          ++applied;
        }
      }
    }
    for (std::size_t col = 0; col < d; ++col) {
      for (std::size_t k = 0; k < n_cp * stride; ++k) totals[k] += per_column[col * n_cp * stride + k];
    }
  }

  ProductFormulaResult res;
  res.values.assign(n_cp, std::vector<double>(n_obs));
  res.log_trace.resize(n_cp);
  for (std::size_t k = 0; k < n_cp; ++k) {
    const double tr = totals[k * stride];
    res.log_trace[k] = std::log(tr);
    for (std::size_t j = 0; j < n_obs; ++j) res.values[k][j] = totals[k * stride + 1 + j] / tr;
  }
  return res;
}

}  // namespace

ProductFormulaResult evaluate_product_formula(const Hamiltonian<PauliString>& h, const GateSchedule& schedule,
                                              std::span<const std::size_t> gate_counts,
                                              std::span<const ObservableExpansion<PauliString>> observables) {
  h.validate();
  if (schedule.n_terms != h.terms.size()) throw std::invalid_argument("product formula: schedule/Hamiltonian mismatch");
  for (const auto& o : observables) {
    if (o.system_size != h.system_size) throw std::invalid_argument("product formula: observable size mismatch");
  }
  const auto sd = sectors_for(h);
  std::vector<BlockTerm> h_terms;
  for (const auto& t : h.terms) h_terms.push_back(block_term(sd, t.element, t.coeff));
  const std::vector<ObservableExpansion<PauliString>> obs(observables.begin(), observables.end());
  if (all_real(h_terms)) return run_product_formula<double>(sd, h_terms, schedule, gate_counts, obs);
  return run_product_formula<std::complex<double>>(sd, h_terms, schedule, gate_counts, obs);
}

}  // namespace dense

double dense_thermal_expectation(const Hamiltonian<PauliString>& h, double beta,
                                 const ObservableExpansion<PauliString>& o) {
  return dense::ThermalOracle(h).expectation(beta, o);
}

double dense_product_formula_expectation(const Hamiltonian<PauliString>& h, const GateSchedule& schedule,
                                         const ObservableExpansion<PauliString>& o) {
  const std::size_t all = schedule.gates.size();
  const auto res = dense::evaluate_product_formula(h, schedule, std::span<const std::size_t>(&all, 1),
                                                   std::span<const ObservableExpansion<PauliString>>(&o, 1));
  return res.values[0][0];
}

}  // namespace thermoprop
