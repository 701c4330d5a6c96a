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

#include <complex>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "thermoprop/majorana_monomial.hpp"

namespace thermoprop {

/// Complex linear combination of Hermitian Majorana monomials, used to
/// expand second-quantized expressions (c, c^dagger, n) into the basis.
/// Mode j owns generators 2j and 2j+1 (0-based), i.e. m_{2j+1}, m_{2j+2}.
class MajoranaPolynomial {
 public:
  using Coeff = std::complex<double>;

  explicit MajoranaPolynomial(std::size_t n_modes) : n_generators_(2 * n_modes) {}

  static MajoranaPolynomial scalar(std::size_t n_modes, Coeff c);
  static MajoranaPolynomial generator(std::size_t n_modes, std::size_t index);
  /// c_j = (m_{2j} + i m_{2j+1}) / 2.
  static MajoranaPolynomial annihilation(std::size_t n_modes, std::size_t mode);
  static MajoranaPolynomial creation(std::size_t n_modes, std::size_t mode);
  /// n_j = c_j^dagger c_j.
  static MajoranaPolynomial number(std::size_t n_modes, std::size_t mode);

  std::size_t n_generators() const { return n_generators_; }
  std::size_t n_modes() const { return n_generators_ / 2; }
  const std::map<MajoranaMonomial, Coeff>& terms() const { return terms_; }

  void add(const MajoranaMonomial& m, Coeff c);

  MajoranaPolynomial& operator+=(const MajoranaPolynomial& o);
  MajoranaPolynomial& operator-=(const MajoranaPolynomial& o);
  MajoranaPolynomial& operator*=(Coeff c);
  friend MajoranaPolynomial operator+(MajoranaPolynomial a, const MajoranaPolynomial& b) { return a += b; }
  friend MajoranaPolynomial operator-(MajoranaPolynomial a, const MajoranaPolynomial& b) { return a -= b; }
  friend MajoranaPolynomial operator*(MajoranaPolynomial a, Coeff c) { return a *= c; }
  friend MajoranaPolynomial operator*(Coeff c, MajoranaPolynomial a) { return a *= c; }
  friend MajoranaPolynomial operator*(const MajoranaPolynomial& a, const MajoranaPolynomial& b);

  /// Real coefficient of the identity and of every non-identity monomial
  /// whose coefficient is not negligible. Throws if any imaginary part
  /// exceeds `tol` (the expression was not Hermitian).
  struct RealForm {
    double identity = 0.0;
    std::vector<std::pair<MajoranaMonomial, double>> terms;
  };
  RealForm real_form(double tol = 1e-12) const;

 private:
  std::size_t n_generators_;
  std::map<MajoranaMonomial, Coeff> terms_;
};

}  // namespace thermoprop
