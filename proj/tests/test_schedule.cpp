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

#include "thermoprop/schedule.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "thermoprop/models.hpp"

using namespace thermoprop;

TEST(TrotterSchedule, GateCountAndAngles) {
  const std::vector<double> c{0.5, -1.0, 2.0};
  const std::vector<int> g{0, 0, 0};
  const auto s = build_trotter_schedule(c, g, 0.1, 0.05);
  ASSERT_EQ(s.gates.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(s.gates[i].term_index, i % 3);
    EXPECT_DOUBLE_EQ(s.gates[i].angle, 0.05 * c[i % 3]);
  }
  EXPECT_DOUBLE_EQ(s.lambda, 3.5);
  EXPECT_FALSE(s.seed.has_value());
}

TEST(TrotterSchedule, RejectsBadInputs) {
  const std::vector<double> c{1.0};
  const std::vector<int> g{0};
  EXPECT_THROW(build_trotter_schedule(c, g, 1.0, 0.3), std::invalid_argument);
  EXPECT_THROW(build_trotter_schedule(c, g, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_trotter_schedule(c, g, -1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(build_trotter_schedule(std::vector<double>{0.0}, g, 1.0, 0.1), std::invalid_argument);
  EXPECT_NO_THROW(build_trotter_schedule(c, g, 0.3, 0.1));  // 0.3/0.1 is 2.9999999999999996
  EXPECT_EQ(build_trotter_schedule(c, g, 0.0, 0.1).gates.size(), 0u);
}

TEST(TrotterSchedule, ShuffledGroupKeepsOtherSlots) {
  const auto h = build_j1j2(8, 1.0, 0.5);
  TrotterOptions opts;
  opts.ordering = TrotterOrdering::shuffle_group;
  opts.shuffle_group = kNextNearestGroup;
  opts.seed = 5;
  const auto s = build_trotter_schedule(h, 0.1, 0.02, opts);
  const std::size_t m = h.terms.size();
  ASSERT_EQ(s.gates.size(), 5 * m);
  bool any_moved = false;
  for (std::size_t layer = 0; layer < 5; ++layer) {
    std::vector<int> seen(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
      const auto idx = s.gates[layer * m + k].term_index;
      ++seen[idx];
      if (h.terms[k].group != kNextNearestGroup) {
        EXPECT_EQ(idx, k);
      }
      if (idx != k) any_moved = true;
      EXPECT_EQ(h.terms[idx].group, h.terms[k].group);
    }
    for (int v : seen) EXPECT_EQ(v, 1);
  }
  EXPECT_TRUE(any_moved);
  EXPECT_EQ(build_trotter_schedule(h, 0.1, 0.02, opts).gates.size(), s.gates.size());
}

TEST(QdriftSchedule, ThirtyUnitTermsGiveFifteenHundredGates) {
  const std::vector<double> c(30, 1.0);
  const auto s = build_qdrift_schedule(c, 1.0, 0.02, 1);
  EXPECT_EQ(s.gates.size(), 1500u);
  for (const auto& g : s.gates) EXPECT_EQ(g.angle, 0.02);
}

TEST(QdriftSchedule, SignsFollowCoefficients) {
  const std::vector<double> c{2.0, -1.0};
  const auto s = build_qdrift_schedule(c, 1.0, 0.01, 3);
  EXPECT_EQ(s.gates.size(), 300u);
  for (const auto& g : s.gates) EXPECT_EQ(g.angle, g.term_index == 0 ? 0.01 : -0.01);
}

TEST(QdriftSchedule, UniformFrequencies) {
  const std::size_t m = 10;
  const std::vector<double> c(m, 1.0);
  const auto s = build_qdrift_schedule(c, 1.0, 1e-4, 99);  // 10^5 draws
  ASSERT_EQ(s.gates.size(), 100000u);
  std::vector<double> counts(m, 0.0);
  for (const auto& g : s.gates) counts[g.term_index] += 1.0;
  const double n = 1e5, p = 0.1;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (double k : counts) EXPECT_LT(std::abs(k - n * p), 4 * sigma);
}

TEST(QdriftSchedule, DeterministicPerSeedAndStream) {
  const std::vector<double> c{1.0, 0.5, -0.25};
  const auto a = build_qdrift_schedule(c, 2.0, 0.05, 42, 3);
  const auto b = build_qdrift_schedule(c, 2.0, 0.05, 42, 3);
  const auto other = build_qdrift_schedule(c, 2.0, 0.05, 42, 4);
  ASSERT_EQ(a.gates.size(), b.gates.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    EXPECT_EQ(a.gates[i].term_index, b.gates[i].term_index);
    differs |= a.gates[i].term_index != other.gates[i].term_index;
  }
  EXPECT_TRUE(differs);
}

TEST(GateSchedule, CheckpointSnapping) {
  const std::vector<double> c(4, 1.0);
  const std::vector<int> g(4, 0);
  const auto s = build_trotter_schedule(c, g, 1.0, 0.1);
  EXPECT_EQ(s.gates_for_beta(0.0), 0u);
  EXPECT_EQ(s.gates_for_beta(0.5), 20u);
  EXPECT_EQ(s.gates_for_beta(1.0), 40u);
  EXPECT_EQ(s.gates_for_beta(0.26), 10u);  // nearest boundary is 0.25
  EXPECT_DOUBLE_EQ(s.beta_after(10), 0.25);
  EXPECT_THROW(s.gates_for_beta(1.5), std::invalid_argument);

  const auto q = build_qdrift_schedule(c, 1.0, 0.1, 0);
  EXPECT_EQ(q.gates.size(), 40u);
  EXPECT_EQ(q.gates_for_beta(0.5), 20u);
}

TEST(TrotterSchedule, TailLayer) {
  const std::vector<double> c{1.0, -2.0};
  const std::vector<int> g{0, 0};
  TrotterOptions opts;
  opts.allow_tail = true;
  const auto s = build_trotter_schedule(c, g, 0.5, 0.04, opts);
  ASSERT_EQ(s.gates.size(), 13u * 2);
  EXPECT_NEAR(s.tail_tau, 0.02, 1e-15);
  EXPECT_NEAR(s.gates.back().angle, -0.04, 1e-15);
  EXPECT_NEAR(s.beta_after(s.gates.size()), 0.5, 1e-15);
  EXPECT_NEAR(s.beta_after(24), 0.48, 1e-15);
  EXPECT_EQ(s.gates_for_beta(0.5), 26u);
  EXPECT_EQ(s.gates_for_beta(0.49), 25u);
  EXPECT_EQ(s.gates_for_beta(0.2), 10u);
  EXPECT_EQ(build_trotter_schedule(c, g, 0.4, 0.04, opts).tail_tau, 0.0);
}

TEST(GateSchedule, TextRoundTrip) {
  const std::vector<double> c{1.0, -0.3};
  const auto s = build_qdrift_schedule(c, 1.0, 0.1, 8);
  std::stringstream ss;
  write_schedule(ss, s);
  const auto back = read_schedule(ss);
  EXPECT_EQ(back.source, s.source);
  EXPECT_EQ(back.seed, s.seed);
  EXPECT_EQ(back.lambda, s.lambda);
  EXPECT_EQ(back.tail_tau, s.tail_tau);
  ASSERT_EQ(back.gates.size(), s.gates.size());
  for (std::size_t i = 0; i < s.gates.size(); ++i) {
    EXPECT_EQ(back.gates[i].term_index, s.gates[i].term_index);
    EXPECT_EQ(back.gates[i].angle, s.gates[i].angle);
  }
}
