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
#include <cstdint>
#include <ostream>

namespace thermoprop {

/// A power of the imaginary unit, i^exponent with exponent in {0,1,2,3}.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int exponent) : exponent_(static_cast<std::uint8_t>(((exponent % 4) + 4) % 4)) {}

  static constexpr Phase plus_one() { return Phase(0); }
  static constexpr Phase plus_i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }

  constexpr int exponent() const { return exponent_; }
  constexpr bool is_real() const { return (exponent_ & 1U) == 0; }

  /// +1 or -1; only meaningful when is_real().
  constexpr double sign() const { return exponent_ == 0 ? 1.0 : -1.0; }

  constexpr Phase conj() const { return Phase(4 - exponent_); }

  std::complex<double> value() const {
    switch (exponent_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  friend constexpr Phase operator*(Phase a, Phase b) { return Phase(a.exponent_ + b.exponent_); }
  friend constexpr bool operator==(Phase a, Phase b) = default;

  friend std::ostream& operator<<(std::ostream& os, Phase p) {
    static constexpr const char* kNames[] = {"+1", "+i", "-1", "-i"};
    return os << kNames[p.exponent_];
  }

 private:
  std::uint8_t exponent_ = 0;
};

/// Result of multiplying two basis elements: a * b = phase * element.
template <class Element>
struct Product {
  Element element;
  Phase phase;
};

}  // namespace thermoprop
