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

#include "thermoprop/majorana_monomial.hpp"

#include <gtest/gtest.h>

#include "thermoprop/exact_oracle.hpp"

using namespace thermoprop;

namespace {

using M = MajoranaMonomial;

Eigen::MatrixXcd jw_matrix(const M& m) {
  const auto img = jw_map(m);
  return img.phase.value() * dense::matrix(img.element);
}

std::vector<M> all_monomials(std::size_t n_generators) {
  std::vector<M> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n_generators); ++bits) {
    M m(n_generators);
    for (std::size_t p = 0; p < n_generators; ++p) {
      if ((bits >> p) & 1U) m.flip(p);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST(MajoranaMonomial, TextForms) {
  const auto a = M::from_bits("1100");
  EXPECT_EQ(a.indices(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(M::parse(4, "m{1,2}"), a);
  EXPECT_EQ(M::parse(4, a.to_string()), a);
  EXPECT_THROW(M(3), std::invalid_argument);
  EXPECT_THROW(M::parse(4, "m{1,5}"), std::invalid_argument);
}

TEST(MajoranaMonomial, MultiplyExamples) {
  const auto e1 = M::from_bits("1000");
  auto r = multiply(e1, e1);
  EXPECT_TRUE(r.element.is_identity());
  EXPECT_EQ(r.phase, Phase::plus_one());

  r = multiply(M::from_bits("1100"), M::from_bits("0011"));
  EXPECT_EQ(r.element, M::from_bits("1111"));
  EXPECT_EQ(r.phase, Phase::minus_one());

  r = multiply(M::from_bits("10"), M::from_bits("01"));
  EXPECT_EQ(r.element, M::from_bits("11"));
  EXPECT_EQ(r.phase, Phase::minus_i());
}

TEST(MajoranaMonomial, CommutesAndLength) {
  EXPECT_FALSE(commutes(M::from_bits("10"), M::from_bits("01")));
  EXPECT_TRUE(commutes(M::from_bits("1100"), M::from_bits("1100")));
  EXPECT_TRUE(commutes(M::from_bits("1100"), M::from_bits("0011")));
  EXPECT_EQ(length(M::identity(4)), 0u);
  EXPECT_EQ(length(M::from_bits("1100")), 2u);
  EXPECT_EQ(length(M::from_bits("1111")), 4u);
}

TEST(MajoranaMonomial, JordanWignerImages) {
  auto r = jw_map(M::from_bits("10"));
  EXPECT_EQ(r.element, PauliString::parse("X"));
  r = jw_map(M::from_bits("01"));
  EXPECT_EQ(r.element, PauliString::parse("Y"));
  r = jw_map(M::from_bits("0010"));
  EXPECT_EQ(r.element, PauliString::parse("ZX"));
  EXPECT_EQ(r.phase, Phase::plus_one());
  // i m1 m2 = i (X)(Y) = -Z
  r = jw_map(M::from_bits("1100"));
  EXPECT_EQ(r.element, PauliString::parse("ZI"));
  EXPECT_EQ(r.phase, Phase::minus_one());
}

TEST(MajoranaMonomial, GeneratorsAnticommute) {
  for (std::size_t p = 0; p < 6; ++p) {
    for (std::size_t q = 0; q < 6; ++q) {
      const auto a = jw_matrix(M::from_indices(6, {p}));
      const auto b = jw_matrix(M::from_indices(6, {q}));
      const Eigen::MatrixXcd anti = a * b + b * a;
      const double expected = p == q ? 2.0 : 0.0;
      ASSERT_LT((anti - expected * Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-14);
    }
  }
}

// Products, phases and commutation agree with the Jordan-Wigner matrices
// for every pair of monomials on three modes.
TEST(MajoranaMonomial, MatchesDenseAlgebra) {
  const auto monomials = all_monomials(6);
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& m : monomials) {
    mats.push_back(jw_matrix(m));
    ASSERT_LT((mats.back() - mats.back().adjoint()).norm(), 1e-14) << m;
  }
  for (std::size_t a = 0; a < monomials.size(); ++a) {
    for (std::size_t b = 0; b < monomials.size(); ++b) {
      const auto r = multiply(monomials[a], monomials[b]);
      const Eigen::MatrixXcd expected = mats[a] * mats[b];
      ASSERT_LT((expected - r.phase.value() * jw_matrix(r.element)).norm(), 1e-13)
          << monomials[a] << " * " << monomials[b];
      const bool dense_commute = (mats[a] * mats[b] - mats[b] * mats[a]).norm() < 1e-13;
      ASSERT_EQ(commutes(monomials[a], monomials[b]), dense_commute);
    }
  }
}

TEST(MajoranaMonomial, ReorderAcrossWords) {
  // Generators straddling the 64-bit word boundary.
  const auto a = M::from_indices(140, {3, 70});
  const auto b = M::from_indices(140, {65, 130});
  const auto ab = multiply(a, b);
  const auto ba = multiply(b, a);
  EXPECT_EQ(ab.element, ba.element);
  EXPECT_EQ(commutes(a, b), ab.phase == ba.phase);
  // m3 m70 m65 m130 -> one transposition (70 past 65): sign -1, with
  // i·i / i^0 prefactors giving another -1.
  EXPECT_EQ(ab.phase, Phase::plus_one());
}
