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
#include <vector>

#include "oracles.hpp"
#include "qcap/converse.hpp"
#include "qcap/verify.hpp"

namespace {

using qcap::DensityMatrix;
using qcap::ExtendedSource;
using qcap::Gadget;
using qcap::Mat;
using qcap::TensorSpace;
using qcap::Vec;

qcap::GadgetOptions quick(std::uint64_t seed = 0) {
  qcap::GadgetOptions o;
  o.restarts = 2;
  o.max_iters = 40;
  o.stages = 3;
  o.seed = seed;
  return o;
}

/// Sources with |C||Q| <= 2 so the explicit oracle below stays small.
std::vector<ExtendedSource> small_sources() {
  const auto all = qcap::verify::converse_test_sources(11);
  std::vector<ExtendedSource> out;
  for (const auto& s : all) {
    if (s.dim_c * s.dim_q <= 2) out.push_back(s);
  }
  return out;
}

double oracle_fidelity(const Mat& a, const Mat& b) {
  Eigen::SelfAdjointEigenSolver<Mat> ea(0.5 * (a + a.adjoint()));
  const Eigen::VectorXd root = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat ra = ea.eigenvectors() * root.asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> m(0.5 * (ra * b * ra + (ra * b * ra).adjoint()));
  double f = 0.0;
  for (Eigen::Index i = 0; i < m.eigenvalues().size(); ++i) f += std::sqrt(std::max(0.0, m.eigenvalues()(i)));
  return f;
}

struct OracleValue {
  double y, w, fidelity;
};

/// Builds every U|c, omega_c> on C^ Q^ E R R' explicitly and reads the
/// quantities off partial traces.
OracleValue gadget_oracle(const ExtendedSource& s, const Mat& u) {
  const std::size_t dc = s.dim_c, dq = s.dim_q, dr = s.dim_r, drp = s.dim_rp;
  const std::size_t de = dc * dq * dc * dq;
  const std::vector<std::size_t> dims{dc, dq, de, dr, drp};
  const auto rr = static_cast<Eigen::Index>(dr * drp);
  const Eigen::Index total = u.rows() * rr;
  Mat tau = Mat::Zero(total, total);
  double w = 0.0;
  for (std::size_t c = 0; c < dc; ++c) {
    Vec v = Vec::Zero(total);
    for (Eigen::Index a = 0; a < u.rows(); ++a) {
      for (Eigen::Index j = 0; j < rr; ++j) {
        for (std::size_t q = 0; q < dq; ++q) {
          v(a * rr + j) += u(a, static_cast<Eigen::Index>(c * dq + q)) *
                           s.branches[c](static_cast<Eigen::Index>(q) * rr + j);
        }
      }
    }
    const Mat proj = v * v.adjoint();
    tau += s.p[c] * proj;
    w += s.p[c] * oracle::vn(oracle::ptrace(proj, dims, {true, false, false, false, false}));
  }
  OracleValue o;
  o.y = oracle::vn(oracle::ptrace(tau, dims, {true, true, false, true, true})) -
        oracle::vn(oracle::ptrace(tau, dims, {true, false, false, false, false}));
  o.w = w;
  o.fidelity = oracle_fidelity(s.base(), oracle::ptrace(tau, dims, {true, true, false, true, false}));
  return o;
}

TEST(ExtendSource, Shapes) {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(3, 3) = 0.5;
  const DensityMatrix cc(TensorSpace{{"C", 2}, {"Q", 1}, {"R", 2}}, m);
  const ExtendedSource a = qcap::extend_source(cc);
  EXPECT_EQ(a.dim_c, 2u);
  EXPECT_EQ(a.dim_rp, 1u);
  EXPECT_LT((a.base() - m).norm(), 1e-12);

  // Mixed omega_c of rank 3 needs R' of dimension 3.
  const DensityMatrix mixed = qcap::random::state(TensorSpace{{"Q", 2}, {"R", 2}}, 8, 3);
  const DensityMatrix one(TensorSpace{{"C", 1}, {"Q", 2}, {"R", 2}}, mixed.matrix());
  const ExtendedSource b = qcap::extend_source(one);
  EXPECT_EQ(b.dim_rp, 3u);
  EXPECT_LT((b.base() - mixed.matrix()).norm(), 1e-10);
  for (const auto& v : b.branches) EXPECT_NEAR(v.norm(), 1.0, 1e-12);

  Mat coherent = Mat::Zero(2, 2);
  coherent.setConstant(0.5);
  EXPECT_THROW(qcap::extend_source(DensityMatrix(TensorSpace{{"C", 2}, {"Q", 1}, {"R", 1}}, coherent)),
               qcap::ValidationError);
  EXPECT_THROW(qcap::extend_source(qcap::random::state(TensorSpace{{"Q", 2}, {"R", 2}}, 1)), qcap::ValidationError);
}

TEST(ExtendSource, TensorProductBase) {
  const auto src = qcap::verify::converse_test_sources(3);
  const ExtendedSource t = qcap::tensor(src[3], src[4]);
  EXPECT_EQ(t.dim_c, src[3].dim_c * src[4].dim_c);
  // Base of the product equals the product of bases with C1 C2 Q1 Q2 R1 R2
  // reordered; compare entropies, which are order independent.
  EXPECT_NEAR(oracle::vn(t.base()), oracle::vn(src[3].base()) + oracle::vn(src[4].base()), 1e-10);
}

TEST(GadgetEvaluator, MatchesExplicitOracle) {
  qcap::Rng rng(21);
  for (const auto& s : small_sources()) {
    for (Gadget kind : {Gadget::kY, Gadget::kW}) {
      const qcap::GadgetEvaluator eval(s, kind);
      for (int trial = 0; trial < 3; ++trial) {
        const Mat u = qcap::random::isometry(static_cast<std::size_t>(eval.dim_in()),
                                             static_cast<std::size_t>(eval.dim_out()), rng);
        const auto v = eval(u);
        const OracleValue o = gadget_oracle(s, u);
        EXPECT_NEAR(v.value, kind == Gadget::kY ? o.y : o.w, 1e-9);
        EXPECT_NEAR(v.fidelity, std::min(1.0, o.fidelity), 1e-6);
      }
      const auto id = eval(eval.identity_embedding());
      EXPECT_NEAR(id.fidelity, 1.0, 1e-6);
      EXPECT_NEAR(id.value, 0.0, 1e-9);
    }
  }
}

TEST(Estimates, ZeroAtZeroEpsilonAndMonotone) {
  const std::vector<double> grid{0.0, 0.05, 0.1, 0.25, 0.5};
  const auto all = qcap::verify::converse_test_sources(11);
  for (std::size_t i = 0; i < 4; ++i) {
    for (Gadget kind : {Gadget::kY, Gadget::kW}) {
      const auto est = qcap::estimate_grid(all[i], kind, grid, quick(i));
      const auto chk = qcap::verify::check_grid(all[i], kind, est);
      EXPECT_LE(std::abs(chk.at_zero), 1e-3) << "source " << i;
      EXPECT_TRUE(chk.monotone) << "source " << i;
      EXPECT_LE(chk.worst_infeasibility, 1e-10) << "source " << i;
      // Witnesses are isometries.
      for (const auto& e : est) {
        EXPECT_LT((e.witness.adjoint() * e.witness - Mat::Identity(e.witness.cols(), e.witness.cols())).norm(), 1e-9);
      }
    }
  }
}

TEST(Estimates, ClassicalBitBound) {
  const ExtendedSource bit = qcap::verify::converse_test_sources(0)[0];
  const auto w = qcap::estimate_W(bit, 0.5, quick());
  EXPECT_LE(w.value, 1.0 + 1e-9);
  EXPECT_GE(w.value, 0.0);
  const auto y = qcap::estimate_Y(bit, 0.5, quick());
  EXPECT_LE(y.value, 1.0 + 1e-9);
}

TEST(Estimates, DimensionBounds) {
  // S(Q^ R R'|C^) <= log2 |Q||R||R'| and S(C^|C') <= log2 |C|.
  for (const auto& s : qcap::verify::converse_test_sources(2)) {
    const double y = qcap::estimate_Y(s, 0.2, quick()).value;
    const double w = qcap::estimate_W(s, 0.2, quick()).value;
    EXPECT_LE(y, std::log2(static_cast<double>(s.dim_q * s.dim_r * s.dim_rp)) + 1e-9);
    EXPECT_LE(w, std::log2(static_cast<double>(s.dim_c)) + 1e-9);
    EXPECT_GE(y, -1e-9);
    EXPECT_GE(w, -1e-9);
  }
}

TEST(Estimates, Guardrails) {
  const auto src = qcap::verify::converse_test_sources(0);
  const ExtendedSource big = qcap::tensor(src[2], src[0]);  // |C||Q| = 8
  EXPECT_THROW(qcap::estimate_Y(big, 0.1, quick()), qcap::ResourceError);
  EXPECT_THROW(qcap::estimate_grid(src[0], Gadget::kY, {0.1, 0.0}, quick()), qcap::ValidationError);
  EXPECT_THROW(qcap::estimate_grid(src[0], Gadget::kY, {0.7}, quick()), qcap::ValidationError);
}

}  // namespace
