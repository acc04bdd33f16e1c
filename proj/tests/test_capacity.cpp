// Copyright 2026 The qcap Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qcap/capacity.hpp"

namespace {

using qcap::DensityMatrix;
using qcap::Mat;
using qcap::Slope;
using qcap::TensorSpace;
using qcap::TradeoffCurve;
using qcap::TradeoffPoint;
namespace ch = qcap::channels;

qcap::OptimizerOptions quick() {
  qcap::OptimizerOptions o;
  o.restarts = 6;
  o.max_iters = 200;
  o.seed = 4;
  o.threads = 1;
  return o;
}

TradeoffPoint pt(double q, double c) {
  TradeoffPoint p;
  p.r_q = q;
  p.r_c = c;
  return p;
}

/// r_c = 1 - r_q on [0, 1].
TradeoffCurve unit_line() {
  TradeoffCurve c;
  c.points = {pt(0.0, 1.0), pt(1.0, 0.0)};
  c.c_c_endpoint = c.c_q_endpoint = 1.0;
  return c;
}

DensityMatrix cc_bit() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  return DensityMatrix(TensorSpace{{"A", 2}, {"R", 2}}, m);
}

DensityMatrix bell() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return DensityMatrix(TensorSpace{{"A", 2}, {"R", 2}}, m);
}

/// cc bit on (A1, R1) and Bell pair on (A2, R2), regrouped as A = A1 A2.
DensityMatrix bit_ebit() {
  const Mat c = cc_bit().matrix(), b = bell().matrix();
  Mat out = Mat::Zero(16, 16);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int r1 = 0; r1 < 2; ++r1)
        for (int r2 = 0; r2 < 2; ++r2)
          for (int b1 = 0; b1 < 2; ++b1)
            for (int b2 = 0; b2 < 2; ++b2)
              for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2) {
                  const int row = ((a1 * 2 + a2) * 2 + r1) * 2 + r2;
                  const int col = ((b1 * 2 + b2) * 2 + s1) * 2 + s2;
                  out(row, col) = c(a1 * 2 + r1, b1 * 2 + s1) * b(a2 * 2 + r2, b2 * 2 + s2);
                }
  return DensityMatrix(TensorSpace{{"A", 4}, {"R", 4}}, out);
}

qcap::CapacityReport synthetic_report(double s_c, double s_q, const TradeoffCurve& curve) {
  qcap::KIDecomposition kid;
  kid.s_c = s_c;
  kid.s_q_given_c = s_q;
  kid.s_cq = s_c + s_q;
  return qcap::capacity_report(kid, curve);
}

TEST(Slope, Kinds) {
  EXPECT_TRUE(Slope::of(0.0, 0.0).degenerate());
  EXPECT_TRUE(Slope::of(1.0, 0.0).infinite());
  EXPECT_TRUE(Slope::of(0.0, 1.0).finite());
  EXPECT_EQ(Slope::of(0.0, 1.0).value, 0.0);
  EXPECT_DOUBLE_EQ(Slope::of(1.0, 2.0).value, 0.5);
}

TEST(Intersect, UnitLine) {
  const auto r = qcap::intersect(unit_line(), Slope::of(1.0, 1.0));
  EXPECT_NEAR(r.r_q, 0.5, 1e-12);
  EXPECT_NEAR(r.r_c, 0.5, 1e-12);
  // Slope 3: r_c = 3 r_q meets 1 - r_q at r_q = 1/4.
  const auto s = qcap::intersect(unit_line(), Slope::of(3.0, 1.0));
  EXPECT_NEAR(s.r_q, 0.25, 1e-12);
  EXPECT_NEAR(s.r_c, 0.75, 1e-12);
  const auto inf = qcap::intersect(unit_line(), Slope::of(1.0, 0.0));
  EXPECT_EQ(inf.r_q, 0.0);
  EXPECT_EQ(inf.r_c, 1.0);
  const auto zero = qcap::intersect(unit_line(), Slope::of(0.0, 1.0));
  EXPECT_EQ(zero.r_q, 1.0);
  EXPECT_EQ(zero.r_c, 0.0);
  const auto deg = qcap::intersect(unit_line(), Slope::of(0.0, 0.0));
  EXPECT_EQ(deg.r_q + deg.r_c, 0.0);
}

TEST(Report, Invariants) {
  const auto rep = synthetic_report(1.0, 1.0, unit_line());
  EXPECT_NEAR(rep.c_g, 1.0, 1e-12);
  ASSERT_TRUE(rep.copies_per_use.has_value());
  EXPECT_NEAR(*rep.copies_per_use, 0.5, 1e-12);
  EXPECT_NEAR(rep.intersection.r_c, rep.slope.value * rep.intersection.r_q, 1e-12);
  const auto deg = synthetic_report(0.0, 0.0, unit_line());
  EXPECT_FALSE(deg.copies_per_use.has_value());
  EXPECT_EQ(deg.c_g, 0.0);
}

TEST(PlanBlock, Examples) {
  EXPECT_EQ(qcap::plan_block(synthetic_report(1.0, 1.0, unit_line()), 100, 0.01).m, 49);
  EXPECT_EQ(qcap::plan_block(synthetic_report(1.0, 0.0, unit_line()), 10, 0.1).m, 9);
  const auto tiny = qcap::plan_block(synthetic_report(1.0, 1.0, unit_line()), 1, 0.01);
  EXPECT_EQ(tiny.m, 0);
  EXPECT_EQ(tiny.rate_check, 0.0);
  EXPECT_FALSE(qcap::plan_block(synthetic_report(0.0, 0.0, unit_line()), 10, 0.1).m.has_value());
  EXPECT_THROW(qcap::plan_block(synthetic_report(1.0, 1.0, unit_line()), 0, 0.1), qcap::ValidationError);
  EXPECT_THROW(qcap::plan_block(synthetic_report(1.0, 1.0, unit_line()), 10, 0.0), qcap::ValidationError);
  // Rate check never exceeds c_g.
  const auto rep = synthetic_report(1.0, 1.0, unit_line());
  EXPECT_LE(qcap::plan_block(rep, 1000, 0.01).rate_check, rep.c_g + 1e-12);
}

TEST(GeneralizedCapacity, CollapsesToEndpoints) {
  const auto classical = qcap::generalized_capacity(cc_bit(), ch::identity(2), 1, quick(), 5);
  EXPECT_TRUE(classical.slope.infinite());
  EXPECT_NEAR(classical.c_g, 1.0, 1e-3);
  EXPECT_NEAR(classical.intersection.r_q, 0.0, 1e-12);
  const auto quantum = qcap::generalized_capacity(bell(), ch::identity(2), 1, quick(), 5);
  EXPECT_TRUE(quantum.slope.finite());
  EXPECT_EQ(quantum.slope.value, 0.0);
  EXPECT_NEAR(quantum.c_g, 1.0, 1e-3);
  EXPECT_NEAR(quantum.intersection.r_c, 0.0, 1e-12);
}

TEST(GeneralizedCapacity, BitPlusEbit) {
  const auto rep = qcap::generalized_capacity(bit_ebit(), ch::identity(2), 1, quick(), 9);
  EXPECT_NEAR(rep.s_c, 1.0, 1e-9);
  EXPECT_NEAR(rep.s_q_given_c, 1.0, 1e-9);
  EXPECT_NEAR(rep.slope.value, 1.0, 1e-9);
  EXPECT_NEAR(rep.intersection.r_q, 0.5, 0.02);
  EXPECT_NEAR(rep.intersection.r_c, 0.5, 0.02);
  ASSERT_TRUE(rep.copies_per_use.has_value());
  EXPECT_NEAR(*rep.copies_per_use, 0.5, 0.01);
}

}  // namespace
