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

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "thermoprop/phase.hpp"

namespace thermoprop {

enum class PauliOp : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

/// An n-qubit Pauli string packed as two bit vectors. Site j carries
/// (x_j, z_j) = (0,0)/(1,0)/(1,1)/(0,1) for I/X/Y/Z. The string is always
/// the Hermitian operator (Y = iXZ), never an X·Z product with a phase.
class PauliString {
 public:
  static constexpr std::size_t kWords = 2;
  static constexpr std::size_t kMaxQubits = 64 * kWords;
  using Words = std::array<std::uint64_t, kWords>;

  PauliString() = default;
  explicit PauliString(std::size_t n_qubits) : n_(static_cast<std::uint32_t>(n_qubits)) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
      throw std::invalid_argument("PauliString: qubit count must be in [1, " +
                                  std::to_string(kMaxQubits) + "]");
    }
  }

  static PauliString identity(std::size_t n_qubits) { return PauliString(n_qubits); }

  /// Single-site operator `op` on `site`, identity elsewhere.
  static PauliString single(std::size_t n_qubits, std::size_t site, PauliOp op) {
    PauliString p(n_qubits);
    p.set(site, op);
    return p;
  }

  /// Parses text such as "IXYZ" (site 0 leftmost).
  static PauliString parse(std::string_view text);

  std::size_t n_qubits() const { return n_; }
  std::size_t system_size() const { return n_; }

  PauliOp at(std::size_t site) const {
    check_site(site);
    const auto w = site / 64, b = site % 64;
    const unsigned x = (x_[w] >> b) & 1U, z = (z_[w] >> b) & 1U;
    return static_cast<PauliOp>(x | (z << 1U));
  }

  void set(std::size_t site, PauliOp op) {
    check_site(site);
    const auto w = site / 64, b = site % 64;
    const auto v = static_cast<unsigned>(op);
    const std::uint64_t mask = std::uint64_t{1} << b;
    x_[w] = (v & 1U) ? (x_[w] | mask) : (x_[w] & ~mask);
    z_[w] = (v & 2U) ? (z_[w] | mask) : (z_[w] & ~mask);
  }

  const Words& x_words() const { return x_; }
  const Words& z_words() const { return z_; }

  bool is_identity() const {
    for (std::size_t w = 0; w < kWords; ++w) {
      if ((x_[w] | z_[w]) != 0) return false;
    }
    return true;
  }

  std::string to_string() const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  /// Canonical storage order: lexicographic on (z words, x words).
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.z_ <=> b.z_; c != 0) return c;
    return a.x_ <=> b.x_;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n_;
    for (std::size_t w = 0; w < kWords; ++w) {
      h ^= x_[w] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= z_[w] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  friend std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.to_string(); }

 private:
  friend Product<PauliString> multiply(const PauliString& p, const PauliString& q);

  void check_site(std::size_t site) const {
    if (site >= n_) throw std::out_of_range("PauliString: site out of range");
  }

  std::uint32_t n_ = 0;
  Words x_{};
  Words z_{};
};

namespace detail {
inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": mismatched system sizes");
}
}  // namespace detail

/// Number of non-identity sites.
inline std::size_t weight(const PauliString& p) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < PauliString::kWords; ++i) {
    w += static_cast<std::size_t>(std::popcount(p.x_words()[i] | p.z_words()[i]));
  }
  return w;
}

inline bool commutes(const PauliString& p, const PauliString& q) {
  detail::require_same_size(p.n_qubits(), q.n_qubits(), "commutes");
  std::uint64_t parity = 0;
  for (std::size_t i = 0; i < PauliString::kWords; ++i) {
    parity ^= (p.x_words()[i] & q.z_words()[i]) ^ (p.z_words()[i] & q.x_words()[i]);
  }
  return (std::popcount(parity) & 1) == 0;
}

/// p·q = phase·r with r's bits the XOR of the inputs.
inline Product<PauliString> multiply(const PauliString& p, const PauliString& q) {
  detail::require_same_size(p.n_qubits(), q.n_qubits(), "multiply");
  Product<PauliString> out{PauliString(), Phase()};
  out.element.n_ = p.n_;
  int exponent = 0;
  for (std::size_t i = 0; i < PauliString::kWords; ++i) {
    const std::uint64_t x1 = p.x_[i], z1 = p.z_[i], x2 = q.x_[i], z2 = q.z_[i];
    const std::uint64_t px = x1 & ~z1, py = x1 & z1, pz = ~x1 & z1;
    const std::uint64_t qx = x2 & ~z2, qy = x2 & z2, qz = ~x2 & z2;
    // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
    const std::uint64_t plus = (px & qy) | (py & qz) | (pz & qx);
    const std::uint64_t minus = (py & qx) | (pz & qy) | (px & qz);
    exponent += std::popcount(plus) - std::popcount(minus);
    out.element.x_[i] = x1 ^ x2;
    out.element.z_[i] = z1 ^ z2;
  }
  out.phase = Phase(exponent);
  return out;
}

inline std::size_t order(const PauliString& p) { return weight(p); }

}  // namespace thermoprop

template <>
struct std::hash<thermoprop::PauliString> {
  std::size_t operator()(const thermoprop::PauliString& p) const noexcept { return p.hash(); }
};
