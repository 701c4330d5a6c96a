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

#include "thermoprop/pauli_string.hpp"

#include <complex>
#include <unordered_set>

#include <gtest/gtest.h>

#include "thermoprop/exact_oracle.hpp"

using namespace thermoprop;

namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

std::vector<PauliString> all_strings(std::size_t n) {
  std::vector<PauliString> out;
  std::size_t count = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < count; ++code) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) p.set(q, static_cast<PauliOp>((code >> (2 * q)) & 3U));
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST(PauliString, ParseAndPrint) {
  auto p = P("IXYZ");
  EXPECT_EQ(p.n_qubits(), 4u);
  EXPECT_EQ(p.at(0), PauliOp::I);
  EXPECT_EQ(p.at(1), PauliOp::X);
  EXPECT_EQ(p.at(2), PauliOp::Y);
  EXPECT_EQ(p.at(3), PauliOp::Z);
  EXPECT_EQ(p.to_string(), "IXYZ");
  EXPECT_THROW(P("IXQ"), std::invalid_argument);
  EXPECT_THROW(PauliString(0), std::invalid_argument);
}

TEST(PauliString, WideRegister) {
  PauliString p(100);
  p.set(3, PauliOp::Y);
  p.set(99, PauliOp::X);
  EXPECT_EQ(weight(p), 2u);
  EXPECT_EQ(p.at(99), PauliOp::X);
  auto q = PauliString::single(100, 99, PauliOp::Z);
  EXPECT_FALSE(commutes(p, q));
  auto prod = multiply(p, q);
  EXPECT_EQ(prod.element.at(99), PauliOp::Y);
  EXPECT_EQ(prod.phase, Phase::minus_i());  // XZ = -iY
}

TEST(PauliString, MultiplyExamples) {
  auto r = multiply(P("XI"), P("YI"));
  EXPECT_EQ(r.element, P("ZI"));
  EXPECT_EQ(r.phase, Phase::plus_i());

  r = multiply(P("XZ"), P("II"));
  EXPECT_EQ(r.element, P("XZ"));
  EXPECT_EQ(r.phase, Phase::plus_one());

  r = multiply(P("XX"), P("YY"));
  EXPECT_EQ(r.element, P("ZZ"));
  EXPECT_EQ(r.phase, Phase::minus_one());
}

TEST(PauliString, CommutesExamples) {
  EXPECT_FALSE(commutes(P("X"), P("Y")));
  EXPECT_TRUE(commutes(P("XI"), P("IZ")));
  EXPECT_TRUE(commutes(P("XX"), P("YY")));
  EXPECT_EQ(weight(P("III")), 0u);
  EXPECT_EQ(weight(P("XIZ")), 2u);
  EXPECT_EQ(weight(P("YYY")), 3u);
}

TEST(PauliString, MismatchedSizesRejected) {
  EXPECT_THROW(multiply(P("X"), P("XX")), std::invalid_argument);
  EXPECT_THROW(commutes(P("X"), P("XX")), std::invalid_argument);
}

// Every pair of two-qubit strings agrees with the matrix product.
TEST(PauliString, MatchesDenseAlgebra) {
  const auto strings = all_strings(2);
  for (const auto& p : strings) {
    const auto mp = dense::matrix(p);
    for (const auto& q : strings) {
      const auto mq = dense::matrix(q);
      const auto r = multiply(p, q);
      const Eigen::MatrixXcd expected = mp * mq;
      const Eigen::MatrixXcd got = r.phase.value() * dense::matrix(r.element);
      ASSERT_LT((expected - got).norm(), 1e-14) << p << " * " << q;
      const bool dense_commute = (mp * mq - mq * mp).norm() < 1e-14;
      ASSERT_EQ(commutes(p, q), dense_commute) << p << " , " << q;
    }
  }
}

TEST(PauliString, HermitianAndInvolutive) {
  for (const auto& p : all_strings(3)) {
    const auto m = dense::matrix(p);
    ASSERT_LT((m - m.adjoint()).norm(), 1e-14);
    const auto sq = multiply(p, p);
    ASSERT_TRUE(sq.element.is_identity());
    ASSERT_EQ(sq.phase, Phase::plus_one());
  }
}

TEST(PauliString, OrderingAndHashing) {
  const auto strings = all_strings(3);
  std::unordered_set<PauliString> seen(strings.begin(), strings.end());
  EXPECT_EQ(seen.size(), strings.size());
  auto sorted = strings;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_TRUE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}
