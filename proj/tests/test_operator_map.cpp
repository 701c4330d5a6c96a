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

#include "thermoprop/operator_map.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "thermoprop/majorana_monomial.hpp"
#include "thermoprop/pauli_string.hpp"

using namespace thermoprop;

namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

}  // namespace

TEST(OperatorMap, StartsAtIdentity) {
  OperatorMap<PauliString> s(3);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.identity_coeff(), 1.0);
  EXPECT_EQ(s.coefficient(P("III")), 1.0);
  EXPECT_EQ(s.coefficient(P("XII")), 0.0);
}

TEST(OperatorMap, MergeAdd) {
  OperatorMap<PauliString> s(1);
  s.merge_add(P("Z"), -0.3);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.coefficient(P("Z")), -0.3);

  s.merge_add(P("Z"), 0.3);
  EXPECT_EQ(s.coefficient(P("Z")), 0.0);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(apply_truncation(s, {}), 1u);
  EXPECT_EQ(s.size(), 1u);

  s.merge_add(P("I"), 0.5);
  EXPECT_DOUBLE_EQ(s.identity_coeff(), 1.5);

  EXPECT_THROW(s.merge_add(P("X"), std::nan("")), std::invalid_argument);
  EXPECT_THROW(s.merge_add(P("XX"), 1.0), std::invalid_argument);
}

TEST(OperatorMap, MergeKeepsSmallestSinhCount) {
  OperatorMap<PauliString> s(1);
  s.merge_add(P("X"), 0.1, 4);
  s.merge_add(P("X"), 0.1, 2);
  s.merge_add(P("X"), 0.1, 3);
  EXPECT_EQ(s.find(P("X"))->sinh_count, 2u);
}

TEST(OperatorMap, Normalize) {
  OperatorMap<PauliString> s(1);
  s.set_identity(2.0, 0);
  s.merge_add(P("Z"), 1.0);
  normalize_by_identity(s);
  EXPECT_EQ(s.identity_coeff(), 1.0);
  EXPECT_DOUBLE_EQ(s.coefficient(P("Z")), 0.5);
  EXPECT_DOUBLE_EQ(s.log_factor(), std::log(2.0));

  OperatorMap<PauliString> t(1);
  t.set_identity(std::cosh(0.3), 0);
  t.merge_add(P("Z"), -std::sinh(0.3));
  normalize_by_identity(t);
  EXPECT_NEAR(t.coefficient(P("Z")), -0.291313, 1e-6);

  OperatorMap<PauliString> z(1);
  z.set_identity(0.0, 0);
  EXPECT_THROW(normalize_by_identity(z), SimulationDiverged);
  z.set_identity(-1.0, 0);
  EXPECT_THROW(normalize_by_identity(z), SimulationDiverged);
}

TEST(OperatorMap, CoefficientThreshold) {
  OperatorMap<PauliString> s(1);
  s.merge_add(P("Z"), 0.4);
  s.merge_add(P("X"), 0.6);
  TruncationPolicy policy;
  policy.coeff_threshold = 0.5;
  EXPECT_EQ(apply_truncation(s, policy), 1u);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.coefficient(P("X")), 0.6);
  // Idempotent.
  EXPECT_EQ(apply_truncation(s, policy), 0u);
}

TEST(OperatorMap, WeightCutoff) {
  OperatorMap<PauliString> s(2);
  s.merge_add(P("XX"), 0.3);
  s.merge_add(P("ZI"), 0.2);
  TruncationPolicy policy;
  policy.max_weight = 1;
  apply_truncation(s, policy);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.coefficient(P("ZI")), 0.2);
  EXPECT_EQ(s.coefficient(P("XX")), 0.0);
}

TEST(OperatorMap, SinhCutoff) {
  OperatorMap<PauliString> s(1);
  s.merge_add(P("X"), 0.3, 1);
  s.merge_add(P("Z"), 0.3, 3);
  TruncationPolicy policy;
  policy.max_sinh_count = 2;
  apply_truncation(s, policy);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_NE(s.find(P("X")), nullptr);
}

TEST(OperatorMap, PolicyValidation) {
  TruncationPolicy policy;
  for (int e = 9; e <= 18; ++e) {
    policy.coeff_threshold = std::ldexp(1.0, -e);
    EXPECT_NO_THROW(policy.validate());
  }
  policy.coeff_threshold = -1e-3;
  EXPECT_THROW(policy.validate(), std::invalid_argument);
  policy.coeff_threshold = 1.0;
  EXPECT_THROW(policy.validate(), std::invalid_argument);
  policy.coeff_threshold = 0.0;
  policy.max_weight = 0;
  EXPECT_THROW(policy.validate(), std::invalid_argument);
}

TEST(OperatorMap, TermStats) {
  OperatorMap<PauliString> s(2);
  auto st = term_stats(s);
  EXPECT_EQ(st.term_count, 1u);
  EXPECT_EQ(st.weight_histogram, (std::vector<std::size_t>{1}));

  s.merge_add(P("ZI"), -0.3);
  st = term_stats(s);
  EXPECT_EQ(st.term_count, 2u);
  EXPECT_EQ(st.weight_histogram, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(st.max_abs_coeff, 1.0);
}

TEST(OperatorMap, SnapshotRoundTrip) {
  OperatorMap<MajoranaMonomial> s(8);
  s.merge_add(MajoranaMonomial::from_indices(8, {0, 1}), 0.1 / 3.0);
  s.merge_add(MajoranaMonomial::from_indices(8, {2, 3, 4, 7}), -2.0 / 7.0);
  s.add_log_factor(0.125);

  std::stringstream ss;
  write_snapshot(ss, s);
  const auto back = read_snapshot<MajoranaMonomial>(ss);
  EXPECT_EQ(back.size(), s.size());
  EXPECT_EQ(back.log_factor(), s.log_factor());
  EXPECT_EQ(back.identity_coeff(), s.identity_coeff());
  for (const auto& t : s.terms()) EXPECT_EQ(back.coefficient(t.element), t.coeff);

  std::stringstream wrong("basis pauli size 2 log_factor 0\nII 1\n");
  EXPECT_THROW(read_snapshot<MajoranaMonomial>(wrong), std::invalid_argument);
}
