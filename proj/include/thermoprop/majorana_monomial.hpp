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
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "thermoprop/pauli_string.hpp"
#include "thermoprop/phase.hpp"

namespace thermoprop {

/// Hermitian Majorana monomial M_b = i^{r_b} m_1^{b_1} ... m_{2N}^{b_{2N}}.
///
/// Generator p (0-based) is bit p of the packed vector. Text rendering and
/// parsing use 1-based generator labels, "m{1,2,5,6}". The phase exponent
/// r_b is implicit: 0 when |b| = 0,1 (mod 4) and 1 otherwise, so every
/// stored monomial is Hermitian and squares to the identity.
class MajoranaMonomial {
 public:
  static constexpr std::size_t kWords = 4;
  static constexpr std::size_t kMaxGenerators = 64 * kWords;
  using Words = std::array<std::uint64_t, kWords>;

  MajoranaMonomial() = default;
  explicit MajoranaMonomial(std::size_t n_generators) : n_(static_cast<std::uint32_t>(n_generators)) {
    if (n_generators == 0 || n_generators % 2 != 0 || n_generators > kMaxGenerators) {
      throw std::invalid_argument("MajoranaMonomial: generator count must be even and in [2, " +
                                  std::to_string(kMaxGenerators) + "]");
    }
  }

  static MajoranaMonomial identity(std::size_t n_generators) { return MajoranaMonomial(n_generators); }

  /// Monomial over the given 0-based generator indices (order irrelevant,
  /// duplicates rejected).
  static MajoranaMonomial from_indices(std::size_t n_generators, std::initializer_list<std::size_t> indices) {
    return from_indices(n_generators, std::vector<std::size_t>(indices));
  }
  static MajoranaMonomial from_indices(std::size_t n_generators, const std::vector<std::size_t>& indices);

  /// Monomial from a bit string such as "1100", generator 1 leftmost.
  static MajoranaMonomial from_bits(std::string_view bits);

  /// Parses "m{1,2,5,6}" (1-based labels) for a system of n_generators.
  static MajoranaMonomial parse(std::size_t n_generators, std::string_view text);

  std::size_t n_generators() const { return n_; }
  std::size_t n_modes() const { return n_ / 2; }
  std::size_t system_size() const { return n_; }

  bool test(std::size_t generator) const {
    check(generator);
    return ((bits_[generator / 64] >> (generator % 64)) & 1U) != 0;
  }
  void flip(std::size_t generator) {
    check(generator);
    bits_[generator / 64] ^= std::uint64_t{1} << (generator % 64);
  }

  const Words& words() const { return bits_; }

  bool is_identity() const {
    for (auto w : bits_) {
      if (w != 0) return false;
    }
    return true;
  }

  /// 0-based indices of the generators present, ascending.
  std::vector<std::size_t> indices() const;

  std::string to_string() const;

  friend bool operator==(const MajoranaMonomial& a, const MajoranaMonomial& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }
  friend std::strong_ordering operator<=>(const MajoranaMonomial& a, const MajoranaMonomial& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n_;
    for (auto w : bits_) h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }

  friend std::ostream& operator<<(std::ostream& os, const MajoranaMonomial& m) { return os << m.to_string(); }

 private:
  friend Product<MajoranaMonomial> multiply(const MajoranaMonomial& a, const MajoranaMonomial& b);

  void check(std::size_t generator) const {
    if (generator >= n_) throw std::out_of_range("MajoranaMonomial: generator out of range");
  }

  std::uint32_t n_ = 0;
  Words bits_{};
};

inline std::size_t length(const MajoranaMonomial& m) {
  std::size_t n = 0;
  for (auto w : m.words()) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

/// Hermitian phase exponent r_b for a monomial of the given length.
constexpr int hermitian_phase_exponent(std::size_t len) { return (len % 4 == 2 || len % 4 == 3) ? 1 : 0; }

inline bool commutes(const MajoranaMonomial& a, const MajoranaMonomial& b) {
  detail::require_same_size(a.n_generators(), b.n_generators(), "commutes");
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < MajoranaMonomial::kWords; ++i) {
    overlap += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
  }
  return ((length(a) * length(b) - overlap) & 1U) == 0;
}

namespace detail {
/// Parity of the number of transpositions needed to sort the generator
/// sequence of a followed by b: sum over q in b of #{p in a : p > q}.
inline int reorder_parity(const MajoranaMonomial::Words& a, const MajoranaMonomial::Words& b) {
  unsigned above = 0;  // parity of a-bits in higher words
  int s = 0;
  for (std::size_t k = MajoranaMonomial::kWords; k-- > 0;) {
    std::uint64_t y = a[k] >> 1;
    y ^= y >> 1;
    y ^= y >> 2;
    y ^= y >> 4;
    y ^= y >> 8;
    y ^= y >> 16;
    y ^= y >> 32;
    if (above) y = ~y;
    s ^= std::popcount(y & b[k]) & 1;
    above ^= static_cast<unsigned>(std::popcount(a[k]) & 1);
  }
  return s;
}
}  // namespace detail

/// a·b = phase·c with c = a XOR b in Hermitian normal form.
inline Product<MajoranaMonomial> multiply(const MajoranaMonomial& a, const MajoranaMonomial& b) {
  detail::require_same_size(a.n_generators(), b.n_generators(), "multiply");
  Product<MajoranaMonomial> out{MajoranaMonomial(), Phase()};
  out.element.n_ = a.n_;
  for (std::size_t i = 0; i < MajoranaMonomial::kWords; ++i) out.element.bits_[i] = a.bits_[i] ^ b.bits_[i];
  const int s = detail::reorder_parity(a.bits_, b.bits_);
  out.phase = Phase(hermitian_phase_exponent(length(a)) + hermitian_phase_exponent(length(b)) -
                    hermitian_phase_exponent(length(out.element)) + 2 * s);
  return out;
}

inline std::size_t order(const MajoranaMonomial& m) { return length(m); }

}  // namespace thermoprop

template <>
struct std::hash<thermoprop::MajoranaMonomial> {
  std::size_t operator()(const thermoprop::MajoranaMonomial& m) const noexcept { return m.hash(); }
};
