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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoprop/basis.hpp"
#include "thermoprop/errors.hpp"

namespace thermoprop {

/// Which terms survive a truncation pass. Thresholds are relative to a
/// normalized identity coefficient of 1.
struct TruncationPolicy {
  double coeff_threshold = 0.0;
  /// Pauli weight or Majorana length cutoff.
  std::optional<std::size_t> max_weight;
  /// Drops terms whose cheapest path took more than this many sinh branches.
  std::optional<std::uint32_t> max_sinh_count;

  void validate() const {
    if (!(coeff_threshold >= 0.0 && coeff_threshold < 1.0)) {
      throw std::invalid_argument("TruncationPolicy: coeff_threshold must lie in [0, 1)");
    }
    if (max_weight && *max_weight < 1) throw std::invalid_argument("TruncationPolicy: max_weight must be >= 1");
  }
};

template <BasisElement E>
struct Term {
  E element;
  double coeff = 0.0;
  /// Smallest number of sinh branches over the paths merged into this term.
  std::uint32_t sinh_count = 0;
};

/// Sparse real expansion alpha_I I + sum_P alpha_P P of the evolving operator.
///
/// Non-identity terms live in a vector sorted by element; the identity
/// coefficient is stored separately and never truncated. The product of all
/// normalization factors divided out so far is kept as a log.
template <BasisElement E>
class OperatorMap {
 public:
  using element_type = E;

  explicit OperatorMap(std::size_t system_size) : identity_(E::identity(system_size)) {}

  std::size_t system_size() const { return identity_.system_size(); }
  const E& identity_element() const { return identity_; }
  double identity_coeff() const { return identity_coeff_; }
  std::uint32_t identity_sinh_count() const { return identity_sinh_count_; }
  double log_factor() const { return log_factor_; }

  /// Term count including the identity.
  std::size_t size() const { return terms_.size() + 1; }
  std::span<const Term<E>> terms() const { return terms_; }

  const Term<E>* find(const E& element) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), element,
                               [](const Term<E>& t, const E& e) { return t.element < e; });
    return (it != terms_.end() && it->element == element) ? &*it : nullptr;
  }

  double coefficient(const E& element) const {
    if (element.is_identity()) return identity_coeff_;
    const auto* t = find(element);
    return t ? t->coeff : 0.0;
  }

  /// Adds `delta` to the coefficient of `element`. Exact zeros are kept
  /// until the next truncation pass.
  void merge_add(const E& element, double delta, std::uint32_t sinh_count = 0) {
    if (!std::isfinite(delta)) throw std::invalid_argument("merge_add: non-finite coefficient");
    detail::require_same_size(element.system_size(), system_size(), "merge_add");
    if (element.is_identity()) {
      identity_coeff_ += delta;
      identity_sinh_count_ = std::min(identity_sinh_count_, sinh_count);
      return;
    }
    auto it = std::lower_bound(terms_.begin(), terms_.end(), element,
                               [](const Term<E>& t, const E& e) { return t.element < e; });
    if (it != terms_.end() && it->element == element) {
      it->coeff += delta;
      it->sinh_count = std::min(it->sinh_count, sinh_count);
    } else {
      terms_.insert(it, Term<E>{element, delta, sinh_count});
    }
  }

  // Raw access for the propagation kernels. Callers keep `terms` sorted,
  // unique, and free of the identity.
  std::vector<Term<E>>& mutable_terms() { return terms_; }
  void set_identity(double coeff, std::uint32_t sinh_count) {
    identity_coeff_ = coeff;
    identity_sinh_count_ = sinh_count;
  }
  void add_log_factor(double delta) { log_factor_ += delta; }

 private:
  E identity_;
  double identity_coeff_ = 1.0;
  std::uint32_t identity_sinh_count_ = 0;
  double log_factor_ = 0.0;
  std::vector<Term<E>> terms_;
};

/// Divides every coefficient by alpha_I and records log(alpha_I).
template <BasisElement E>
void normalize_by_identity(OperatorMap<E>& state) {
  const double f = state.identity_coeff();
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw SimulationDiverged("identity coefficient is " + std::to_string(f) + "; cannot normalize");
  }
  if (f == 1.0) return;
  auto& terms = state.mutable_terms();
  const double inv = 1.0 / f;
  const auto n = static_cast<std::ptrdiff_t>(terms.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) terms[static_cast<std::size_t>(i)].coeff *= inv;
  state.set_identity(1.0, state.identity_sinh_count());
  state.add_log_factor(std::log(f));
}

/// Removes exact zeros and everything the policy rejects. Returns the
/// number of removed terms; the identity is never removed.
template <BasisElement E>
std::size_t apply_truncation(OperatorMap<E>& state, const TruncationPolicy& policy) {
  auto& terms = state.mutable_terms();
  const std::size_t before = terms.size();
  const double thr = policy.coeff_threshold;
  const std::size_t max_w = policy.max_weight.value_or(std::numeric_limits<std::size_t>::max());
  const std::uint32_t max_s = policy.max_sinh_count.value_or(std::numeric_limits<std::uint32_t>::max());
  std::erase_if(terms, [&](const Term<E>& t) {
    const double a = std::abs(t.coeff);
    return a == 0.0 || a < thr || t.sinh_count > max_s || order(t.element) > max_w;
  });
  return before - terms.size();
}

struct TermStats {
  std::size_t term_count = 0;
  /// histogram[w] = number of terms of weight (or length) w.
  std::vector<std::size_t> weight_histogram;
  double max_abs_coeff = 0.0;
};

template <BasisElement E>
TermStats term_stats(const OperatorMap<E>& state) {
  TermStats s;
  s.term_count = state.size();
  s.weight_histogram.assign(1, 1);
  s.max_abs_coeff = std::abs(state.identity_coeff());
  for (const auto& t : state.terms()) {
    const std::size_t w = order(t.element);
    if (w >= s.weight_histogram.size()) s.weight_histogram.resize(w + 1, 0);
    ++s.weight_histogram[w];
    s.max_abs_coeff = std::max(s.max_abs_coeff, std::abs(t.coeff));
  }
  return s;
}

/// Text snapshot: a header line "basis <tag> size <n> log_factor <x>" then
/// one "<element> <coefficient>" row per term in canonical order, identity
/// first. Numbers carry 17 significant digits.
template <BasisElement E>
void write_snapshot(std::ostream& os, const OperatorMap<E>& state) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "basis " << BasisTraits<E>::tag << " size " << state.system_size() << " log_factor "
      << state.log_factor() << '\n';
  buf << state.identity_element().to_string() << ' ' << state.identity_coeff() << '\n';
  for (const auto& t : state.terms()) buf << t.element.to_string() << ' ' << t.coeff << '\n';
  os << buf.str();
}

template <BasisElement E>
OperatorMap<E> read_snapshot(std::istream& is) {
  std::string kw_basis, tag, kw_size, kw_log;
  std::size_t size = 0;
  double log_factor = 0.0;
  if (!(is >> kw_basis >> tag >> kw_size >> size >> kw_log >> log_factor) || kw_basis != "basis" ||
      kw_size != "size" || kw_log != "log_factor") {
    throw std::invalid_argument("read_snapshot: malformed header");
  }
  if (tag != BasisTraits<E>::tag) throw std::invalid_argument("read_snapshot: basis mismatch (" + tag + ")");
  OperatorMap<E> state(size);
  state.set_identity(0.0, 0);
  state.add_log_factor(log_factor);
  std::string text;
  double coeff = 0.0;
  while (is >> text >> coeff) state.merge_add(BasisTraits<E>::parse(size, text), coeff);
  return state;
}

}  // namespace thermoprop
