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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "thermoprop/operator_map.hpp"

namespace thermoprop {

namespace detail {

inline void check_gate(bool generator_is_identity, double angle) {
  if (generator_is_identity) throw std::invalid_argument("imaginary-time gate: identity generator");
  if (!std::isfinite(angle)) throw std::invalid_argument("imaginary-time gate: non-finite angle");
}

/// Weight of the sinh branch landing on g·q, for g·q = phase·(gq):
/// -sinh(theta)·phase. Commuting products always carry a real phase.
inline double sinh_branch(double sh, Phase phase) { return phase.sign() > 0 ? -sh : sh; }

inline std::uint32_t bump(std::uint32_t count) {
  return count == UINT32_MAX ? count : count + 1;
}

/// Bucketed lookup into a sorted term vector: buckets over the leading
/// 64-bit sort key, then a binary search inside the bucket.
template <BasisElement E>
class KeyIndex {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit KeyIndex(const std::vector<Term<E>>& terms) {
    if (terms.empty()) return;
    lo_ = BasisTraits<E>::sort_key(terms.front().element);
    hi_ = BasisTraits<E>::sort_key(terms.back().element);
    const int want = std::clamp(static_cast<int>(std::bit_width(terms.size() / 4)), 1, 26);
    const int span = std::bit_width(hi_ - lo_);
    shift_ = span > want ? span - want : 0;
    const std::size_t n_buckets = static_cast<std::size_t>(((hi_ - lo_) >> shift_)) + 2;
    start_.assign(n_buckets, 0);
    for (const auto& t : terms) ++start_[bucket(BasisTraits<E>::sort_key(t.element)) + 1];
    for (std::size_t b = 1; b < n_buckets; ++b) start_[b] += start_[b - 1];
  }

  std::size_t find(const std::vector<Term<E>>& terms, const E& e) const {
    if (terms.empty()) return npos;
    const std::uint64_t key = BasisTraits<E>::sort_key(e);
    if (key < lo_ || key > hi_) return npos;
    const std::size_t b = bucket(key);
    const auto first = terms.begin() + static_cast<std::ptrdiff_t>(start_[b]);
    const auto last = terms.begin() + static_cast<std::ptrdiff_t>(start_[b + 1]);
    auto it = std::lower_bound(first, last, e, [](const Term<E>& t, const E& x) { return t.element < x; });
    return (it != last && it->element == e) ? static_cast<std::size_t>(it - terms.begin()) : npos;
  }

 private:
  std::size_t bucket(std::uint64_t key) const { return static_cast<std::size_t>((key - lo_) >> shift_); }

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  int shift_ = 0;
  std::vector<std::size_t> start_;
};

/// Merges sorted, disjoint `extra` into sorted `terms` from the back,
/// without a second full-size buffer.
template <BasisElement E>
void merge_into(std::vector<Term<E>>& terms, std::vector<Term<E>>& extra) {
  if (extra.empty()) return;
  const std::size_t n = terms.size();
  const std::size_t total = n + extra.size();
  if (total > terms.capacity()) terms.reserve(total + total / 8);
  terms.resize(total, Term<E>{extra.front().element, 0.0, 0});
  std::size_t a = n, b = extra.size(), out = total;
  while (b > 0) {
    if (a > 0 && extra[b - 1].element < terms[a - 1].element) {
      terms[--out] = std::move(terms[--a]);
    } else {
      terms[--out] = std::move(extra[--b]);
    }
  }
}

}  // namespace detail

/// Imaginary-time gate e^{-theta G/2} (.) e^{-theta G/2}, OpenMP kernel.
///
/// Multiplication by G is an involution on basis elements, so the update
/// decomposes into independent pairs {Q, GQ}: for commuting Q,
///   alpha'_Q  = cosh(theta) alpha_Q  - sinh(theta) phi alpha_GQ
///   alpha'_GQ = cosh(theta) alpha_GQ - sinh(theta) phi alpha_Q
/// with G·Q = phi·GQ. Each output depends on exactly two inputs, so the
/// result is bit-identical for any thread count and matches the serial
/// reference below. Anticommuting terms pass through unchanged.
template <BasisElement E>
void apply_imaginary_gate(OperatorMap<E>& state, const E& generator, double angle) {
  detail::check_gate(generator.is_identity(), angle);
  detail::require_same_size(generator.system_size(), state.system_size(), "apply_imaginary_gate");
  if (angle == 0.0) return;
  const double ch = std::cosh(angle);
  const double sh = std::sinh(angle);

  auto& terms = state.mutable_terms();
  const std::size_t n = terms.size();
  const detail::KeyIndex<E> index(terms);
  constexpr auto npos = detail::KeyIndex<E>::npos;

  // The {I, G} pair, G·G = +I.
  const double a_id = state.identity_coeff();
  const std::uint32_t c_id = state.identity_sinh_count();
  const std::size_t g_idx = index.find(terms, generator);
  const bool g_present = g_idx != npos;
  const double a_g = g_present ? terms[g_idx].coeff : 0.0;
  const std::uint32_t c_g = g_present ? terms[g_idx].sinh_count : 0;

  // Pair (i, j) with i < j is owned by the iteration for i, which reads and
  // writes both coefficients; elements are never written here.
  std::vector<Term<E>> spawned;
#pragma omp parallel
  {
    std::vector<Term<E>> local;
#pragma omp for schedule(dynamic, 4096)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      Term<E>& q = terms[i];
      if (i == g_idx || !commutes(generator, q.element)) continue;
      const auto prod = multiply(generator, q.element);
      const double w = detail::sinh_branch(sh, prod.phase);
      const std::size_t j = index.find(terms, prod.element);
      if (j == npos) {
        local.push_back(Term<E>{prod.element, w * q.coeff, detail::bump(q.sinh_count)});
        q.coeff = ch * q.coeff;
      } else if (i < j) {
        Term<E>& p = terms[j];
        const double aq = q.coeff, ap = p.coeff;
        const std::uint32_t cq = q.sinh_count, cp = p.sinh_count;
        q.coeff = ch * aq + w * ap;
        p.coeff = ch * ap + w * aq;
        q.sinh_count = std::min(cq, detail::bump(cp));
        p.sinh_count = std::min(cp, detail::bump(cq));
      }
    }
#pragma omp critical(thermoprop_gate_spawn)
    spawned.insert(spawned.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
  }

  if (g_present) {
    terms[g_idx].coeff = ch * a_g + (-sh) * a_id;
    terms[g_idx].sinh_count = std::min(c_g, detail::bump(c_id));
    state.set_identity(ch * a_id + (-sh) * a_g, std::min(c_id, detail::bump(c_g)));
  } else {
    spawned.push_back(Term<E>{generator, (-sh) * a_id, detail::bump(c_id)});
    state.set_identity(ch * a_id, c_id);
  }

  // Spawned elements are distinct (G· is injective) and absent from
  // `terms`, so sorting them gives a unique order.
  std::sort(spawned.begin(), spawned.end(), [](const Term<E>& a, const Term<E>& b) { return a.element < b.element; });
  detail::merge_into(terms, spawned);
}

namespace reference {

/// Serial reference for apply_imaginary_gate: scatters each branch of every
/// term into an ordered map, exactly as the branching rule is written.
template <BasisElement E>
void apply_imaginary_gate(OperatorMap<E>& state, const E& generator, double angle) {
  detail::check_gate(generator.is_identity(), angle);
  detail::require_same_size(generator.system_size(), state.system_size(), "apply_imaginary_gate");
  if (angle == 0.0) return;
  const double ch = std::cosh(angle);
  const double sh = std::sinh(angle);

  struct Slot {
    double coeff = 0.0;
    std::uint32_t count = UINT32_MAX;
  };
  std::map<E, Slot> out;
  auto deposit = [&out](const E& e, double value, std::uint32_t c) {
    auto& slot = out[e];
    slot.coeff = slot.coeff + value;
    slot.count = std::min(slot.count, c);
  };
  auto branch = [&](const E& q, double alpha, std::uint32_t c) {
    if (!commutes(generator, q)) {
      deposit(q, alpha, c);
      return;
    }
    const auto prod = multiply(generator, q);
    if (!prod.phase.is_real()) throw std::logic_error("commuting product with imaginary phase");
    deposit(q, ch * alpha, c);
    deposit(prod.element, detail::sinh_branch(sh, prod.phase) * alpha, detail::bump(c));
  };

  branch(state.identity_element(), state.identity_coeff(), state.identity_sinh_count());
  for (const auto& t : state.terms()) branch(t.element, t.coeff, t.sinh_count);

  std::vector<Term<E>> terms;
  terms.reserve(out.size());
  double id_coeff = 0.0;
  std::uint32_t id_count = 0;
  for (const auto& [e, slot] : out) {
    if (e.is_identity()) {
      id_coeff = slot.coeff;
      id_count = slot.count;
    } else {
      terms.push_back(Term<E>{e, slot.coeff, slot.count});
    }
  }
  state.mutable_terms().swap(terms);
  state.set_identity(id_coeff, id_count);
}

}  // namespace reference

}  // namespace thermoprop
