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

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "thermoprop/majorana_monomial.hpp"
#include "thermoprop/pauli_string.hpp"

namespace thermoprop {

enum class BasisKind { pauli, majorana };

/// Operator-basis elements that square to the identity and pairwise either
/// commute or anticommute.
template <class E>
concept BasisElement = std::totally_ordered<E> && requires(const E& a, const E& b, std::size_t n) {
  { commutes(a, b) } -> std::same_as<bool>;
  { multiply(a, b) } -> std::same_as<Product<E>>;
  { order(a) } -> std::convertible_to<std::size_t>;
  { a.is_identity() } -> std::same_as<bool>;
  { a.system_size() } -> std::convertible_to<std::size_t>;
  { E::identity(n) } -> std::same_as<E>;
};

template <class E>
struct BasisTraits;

template <>
struct BasisTraits<PauliString> {
  static constexpr BasisKind kind = BasisKind::pauli;
  static constexpr std::string_view tag = "pauli";
  /// Hilbert-space qubits for a system of `size` basis sites.
  static constexpr std::size_t hilbert_qubits(std::size_t size) { return size; }
  static PauliString parse(std::size_t, std::string_view text) { return PauliString::parse(text); }
  /// Non-decreasing along operator< for strings of one size.
  static std::uint64_t sort_key(const PauliString& p) {
    const std::uint64_t z = p.z_words()[0];
    if (p.n_qubits() <= 32) return (z << 32) | p.x_words()[0];
    return z;
  }
};

template <>
struct BasisTraits<MajoranaMonomial> {
  static constexpr BasisKind kind = BasisKind::majorana;
  static constexpr std::string_view tag = "majorana";
  static constexpr std::size_t hilbert_qubits(std::size_t size) { return size / 2; }
  static MajoranaMonomial parse(std::size_t size, std::string_view text) {
    return MajoranaMonomial::parse(size, text);
  }
  static std::uint64_t sort_key(const MajoranaMonomial& m) { return m.words()[0]; }
};

}  // namespace thermoprop
