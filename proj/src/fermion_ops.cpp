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

#include "thermoprop/fermion_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace thermoprop {

MajoranaPolynomial MajoranaPolynomial::scalar(std::size_t n_modes, Coeff c) {
  MajoranaPolynomial p(n_modes);
  p.add(MajoranaMonomial::identity(2 * n_modes), c);
  return p;
}

MajoranaPolynomial MajoranaPolynomial::generator(std::size_t n_modes, std::size_t index) {
  MajoranaPolynomial p(n_modes);
  p.add(MajoranaMonomial::from_indices(2 * n_modes, {index}), 1.0);
  return p;
}

MajoranaPolynomial MajoranaPolynomial::annihilation(std::size_t n_modes, std::size_t mode) {
  if (mode >= n_modes) throw std::out_of_range("annihilation: mode out of range");
  return (generator(n_modes, 2 * mode) + generator(n_modes, 2 * mode + 1) * Coeff(0.0, 1.0)) * Coeff(0.5);
}

MajoranaPolynomial MajoranaPolynomial::creation(std::size_t n_modes, std::size_t mode) {
  if (mode >= n_modes) throw std::out_of_range("creation: mode out of range");
  return (generator(n_modes, 2 * mode) - generator(n_modes, 2 * mode + 1) * Coeff(0.0, 1.0)) * Coeff(0.5);
}

MajoranaPolynomial MajoranaPolynomial::number(std::size_t n_modes, std::size_t mode) {
  return creation(n_modes, mode) * annihilation(n_modes, mode);
}

void MajoranaPolynomial::add(const MajoranaMonomial& m, Coeff c) {
  if (m.n_generators() != n_generators_) throw std::invalid_argument("MajoranaPolynomial: size mismatch");
  terms_[m] += c;
}

MajoranaPolynomial& MajoranaPolynomial::operator+=(const MajoranaPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

MajoranaPolynomial& MajoranaPolynomial::operator-=(const MajoranaPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

MajoranaPolynomial& MajoranaPolynomial::operator*=(Coeff c) {
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

MajoranaPolynomial operator*(const MajoranaPolynomial& a, const MajoranaPolynomial& b) {
  if (a.n_generators_ != b.n_generators_) throw std::invalid_argument("MajoranaPolynomial: size mismatch");
  MajoranaPolynomial out(a.n_modes());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      const auto prod = multiply(ma, mb);
      out.add(prod.element, ca * cb * prod.phase.value());
    }
  }
  return out;
}

MajoranaPolynomial::RealForm MajoranaPolynomial::real_form(double tol) const {
  RealForm form;
  for (const auto& [m, c] : terms_) {
    if (std::abs(c.imag()) > tol) {
      throw std::invalid_argument("MajoranaPolynomial: coefficient of " + m.to_string() + " is not real");
    }
    if (m.is_identity()) {
      form.identity += c.real();
    } else if (std::abs(c.real()) > tol) {
      form.terms.emplace_back(m, c.real());
    }
  }
  return form;
}

}  // namespace thermoprop
