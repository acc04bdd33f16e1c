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

#include "oracles.hpp"
#include "qcap/core/channel.hpp"
#include "qcap/core/entropy.hpp"
#include "qcap/core/random.hpp"
#include "qcap/verify.hpp"

namespace {

using qcap::DensityMatrix;
using qcap::Mat;
using qcap::PureState;
using qcap::TensorSpace;
using qcap::Vec;

PureState bell() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return PureState(TensorSpace{{"A", 2}, {"B", 2}}, v);
}

DensityMatrix basis_state(std::size_t d, std::size_t i, const std::string& label = "A") {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return DensityMatrix(TensorSpace(label, d), m);
}

DensityMatrix maximally_mixed(std::size_t d, const std::string& label = "A") {
  const auto n = static_cast<Eigen::Index>(d);
  return DensityMatrix(TensorSpace(label, d), Mat::Identity(n, n) / static_cast<double>(d));
}

DensityMatrix plus_state() {
  Mat m = Mat::Constant(2, 2, 0.5);
  return DensityMatrix(TensorSpace("A", 2), m);
}

TEST(DensityMatrix, RejectsInvalidMatrices) {
  Mat bad_trace = Mat::Identity(2, 2);
  EXPECT_THROW(DensityMatrix(TensorSpace("A", 2), bad_trace), qcap::ValidationError);
  Mat negative = Mat::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(TensorSpace("A", 2), negative), qcap::ValidationError);
  Mat non_hermitian = Mat::Identity(2, 2) / 2.0;
  non_hermitian(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(TensorSpace("A", 2), non_hermitian), qcap::ValidationError);
  EXPECT_THROW(DensityMatrix(TensorSpace("A", 3), Mat::Identity(2, 2) / 2.0), qcap::DimensionError);
}

TEST(DensityMatrix, ClampsTinyNegativeEigenvalues) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0 + 5e-11;
  m(1, 1) = -5e-11;
  const DensityMatrix rho(TensorSpace("A", 2), m);
  EXPECT_GE(qcap::linalg::spectrum(rho.matrix()).minCoeff(), -1e-15);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
}

TEST(TensorSpace, RejectsDuplicateAndUnknownLabels) {
  EXPECT_THROW((TensorSpace{{"A", 2}, {"A", 2}}), qcap::LabelError);
  const DensityMatrix rho = maximally_mixed(2);
  EXPECT_THROW(qcap::partial_trace(rho, {"Z"}), qcap::LabelError);
}

TEST(Tensor, ProductMatchesKronecker) {
  const DensityMatrix a = basis_state(2, 0), b = maximally_mixed(3, "B");
  const DensityMatrix ab = qcap::tensor(a, b);
  EXPECT_EQ(ab.dim(), 6u);
  EXPECT_LT((ab.matrix() - oracle::kron(a.matrix(), b.matrix())).norm(), 1e-15);
  EXPECT_EQ(ab.space().labels(), (std::vector<std::string>{"A", "B"}));
}

TEST(PartialTrace, MatchesLoopOracle) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const TensorSpace sp{{"A", 2}, {"B", 3}, {"C", 2}};
    const DensityMatrix rho = qcap::random::state(sp, s);
    for (const auto& keep : std::vector<std::vector<std::string>>{{"A"}, {"B"}, {"C"}, {"A", "C"}, {"B", "C"}}) {
      std::vector<bool> mask{false, false, false};
      for (const auto& l : keep) mask[sp.index_of(l)] = true;
      const Mat expect = oracle::ptrace(rho.matrix(), {2, 3, 2}, mask);
      EXPECT_LT((qcap::partial_trace(rho, keep).matrix() - expect).norm(), 1e-12);
    }
  }
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const DensityMatrix a = qcap::partial_trace(bell(), {"A"});
  EXPECT_LT((a.matrix() - Mat::Identity(2, 2) / 2.0).norm(), 1e-15);
}

TEST(Purify, RoundTripAndReferenceDimension) {
  const DensityMatrix rho = qcap::random::state(TensorSpace("A", 3), 42, 2);
  const PureState psi = qcap::purify(rho, "R");
  EXPECT_EQ(psi.space().dim_of("R"), 2u);
  EXPECT_LT((qcap::partial_trace(psi, {"A"}).matrix() - rho.matrix()).norm(), 1e-10);
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(qcap::entropy(basis_state(2, 0)), 0.0, 1e-12);
  EXPECT_NEAR(qcap::entropy(maximally_mixed(2)), 1.0, 1e-12);
  EXPECT_NEAR(qcap::entropy(maximally_mixed(4)), 2.0, 1e-12);
  const DensityMatrix b = bell().density();
  EXPECT_NEAR(qcap::entropy(b), 0.0, 1e-12);
  EXPECT_NEAR(qcap::conditional_entropy(b, {"A"}, {"B"}), -1.0, 1e-12);
}

TEST(Entropy, MatchesEigenOracleOnRandomStates) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = qcap::random::state(TensorSpace{{"A", 2}, {"B", 3}}, s);
    EXPECT_NEAR(qcap::entropy(rho), oracle::vn(rho.matrix()), 1e-12);
    EXPECT_NEAR(qcap::entropy(rho, {"B"}), oracle::vn(oracle::ptrace(rho.matrix(), {2, 3}, {false, true})), 1e-12);
  }
}

TEST(MutualInformation, Examples) {
  EXPECT_NEAR(qcap::mutual_information(bell().density(), {"A"}, {"B"}), 2.0, 1e-12);
  Mat cc = Mat::Zero(4, 4);
  cc(0, 0) = cc(3, 3) = 0.5;
  const DensityMatrix classical(TensorSpace{{"A", 2}, {"B", 2}}, cc);
  EXPECT_NEAR(qcap::mutual_information(classical, {"A"}, {"B"}), 1.0, 1e-12);
  const DensityMatrix prod = qcap::tensor(plus_state(), maximally_mixed(2, "B"));
  EXPECT_NEAR(qcap::mutual_information(prod, {"A"}, {"B"}), 0.0, 1e-12);
  EXPECT_THROW(qcap::mutual_information(prod, {"A"}, {"A"}), qcap::ValidationError);
}

TEST(Fidelity, Examples) {
  const DensityMatrix z0 = basis_state(2, 0), z1 = basis_state(2, 1), mixed = maximally_mixed(2);
  EXPECT_NEAR(qcap::fidelity(z0, z0), 1.0, 1e-12);
  EXPECT_NEAR(qcap::fidelity(z0, z1), 0.0, 1e-12);
  EXPECT_NEAR(qcap::trace_distance(z0, z1), 1.0, 1e-12);
  // Pure-vs-mixed closed form sqrt(<psi|rho|psi>).
  EXPECT_NEAR(qcap::fidelity(z0, mixed), std::sqrt(0.5), 1e-12);
  EXPECT_THROW(qcap::fidelity(z0, maximally_mixed(3)), qcap::DimensionError);
}

TEST(Fidelity, SymmetricAndMatchesPureOracle) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix a = qcap::random::state(TensorSpace("A", 3), s);
    const DensityMatrix b = qcap::random::state(TensorSpace("A", 3), s + 100);
    EXPECT_NEAR(qcap::fidelity(a, b), qcap::fidelity(b, a), 1e-10);
    const PureState psi = qcap::random::pure(TensorSpace("A", 3), s + 200);
    const double expect = std::sqrt((psi.vector().adjoint() * a.matrix() * psi.vector())(0, 0).real());
    EXPECT_NEAR(qcap::fidelity(psi.density(), a), expect, 1e-8);
    EXPECT_NEAR(qcap::trace_distance(a, b), oracle::trace_distance(a.matrix(), b.matrix()), 1e-12);
  }
}

TEST(ApplyChannel, Examples) {
  const DensityMatrix rho = qcap::random::state(TensorSpace{{"A", 2}, {"R", 2}}, 3);
  const DensityMatrix same = qcap::apply_channel(qcap::channels::identity(2), rho, "A");
  EXPECT_LT((same.matrix() - rho.matrix()).norm(), 1e-14);

  const DensityMatrix deph = qcap::apply_channel(qcap::channels::dephasing(0.5), plus_state(), "A");
  EXPECT_LT((deph.matrix() - Mat::Identity(2, 2) / 2.0).norm(), 1e-14);

  const DensityMatrix half = qcap::apply_channel(qcap::channels::dephasing(0.5), bell().density(), "A");
  Mat expect = Mat::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 0.5;
  EXPECT_LT((half.matrix() - expect).norm(), 1e-14);

  EXPECT_THROW(qcap::apply_channel(qcap::channels::identity(3), rho, "A"), qcap::DimensionError);
}

TEST(ApplyChannel, ActsOnNamedSubsystemOnly) {
  const DensityMatrix rho = qcap::random::state(TensorSpace{{"R", 3}, {"A", 2}}, 5);
  const qcap::QuantumChannel n = qcap::random::channel(2, 3, 2, 9);
  const DensityMatrix out = qcap::apply_channel(n, rho, "A");
  EXPECT_EQ(out.space().dim_of("A"), 3u);
  Mat expect = Mat::Zero(9, 9);
  for (const Mat& k : n.kraus()) {
    const Mat kk = oracle::kron(Mat::Identity(3, 3), k);
    expect += kk * rho.matrix() * kk.adjoint();
  }
  EXPECT_LT((out.matrix() - expect).norm(), 1e-12);
}

TEST(Stinespring, EnvironmentDimensions) {
  EXPECT_EQ(qcap::stinespring(qcap::channels::identity(2)).rows(), 2);
  EXPECT_LT((qcap::stinespring(qcap::channels::identity(2)) - Mat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(qcap::channels::dephasing(0.2).kraus().size(), 2u);
  EXPECT_EQ(qcap::channels::erasure(0.2).kraus().size(), 3u);
  const Mat v = qcap::stinespring(qcap::channels::erasure(0.2));
  EXPECT_EQ(v.rows(), 9);
  EXPECT_LT((v.adjoint() * v - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(ChannelPower, Examples) {
  const qcap::QuantumChannel n = qcap::channels::dephasing(0.3);
  const qcap::QuantumChannel one = qcap::channel_power(n, 1);
  EXPECT_EQ(one.kraus().size(), n.kraus().size());
  const qcap::QuantumChannel id2 = qcap::channel_power(qcap::channels::identity(2), 2);
  EXPECT_EQ(id2.dim_in(), 4u);
  const DensityMatrix r = qcap::random::state(TensorSpace("A", 4), 1);
  EXPECT_LT((id2(r.matrix()) - r.matrix()).norm(), 1e-14);

  const Mat pp = oracle::kron(plus_state().matrix(), plus_state().matrix());
  const Mat single = n(plus_state().matrix());
  EXPECT_LT((qcap::channel_power(n, 2)(pp) - oracle::kron(single, single)).norm(), 1e-14);
  EXPECT_THROW(qcap::channel_power(n, 13), qcap::ResourceError);
}

TEST(Channel, RejectsIncompleteKraus) {
  Mat k = Mat::Identity(2, 2) * 0.5;
  EXPECT_THROW(qcap::QuantumChannel(2, 2, {k}), qcap::ValidationError);
  EXPECT_THROW(qcap::channels::parse("dephasing(1.5)"), qcap::ValidationError);
  EXPECT_THROW(qcap::channels::parse("nonsense"), qcap::ValidationError);
  EXPECT_EQ(qcap::channels::parse("identity(3)").dim_in(), 3u);
  EXPECT_EQ(qcap::channels::parse("trace(2)").dim_out(), 1u);
}

TEST(Random, DeterministicAndValid) {
  const TensorSpace sp{{"A", 2}, {"B", 2}};
  EXPECT_EQ(qcap::random::state(sp, 11).matrix(), qcap::random::state(sp, 11).matrix());
  EXPECT_NEAR(qcap::random::state(sp, 11).matrix().trace().real(), 1.0, 1e-10);
  const qcap::QuantumChannel n = qcap::random::channel(3, 2, 4, 8);
  Mat sum = Mat::Zero(3, 3);
  for (const Mat& k : n.kraus()) sum += k.adjoint() * k;
  EXPECT_LT((sum - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Random, DerivedSeedsDependOnPathOnly) {
  EXPECT_EQ(qcap::derive_seed(7, {1, 2}), qcap::derive_seed(7, {1, 2}));
  EXPECT_NE(qcap::derive_seed(7, {1, 2}), qcap::derive_seed(7, {2, 1}));
  EXPECT_NE(qcap::derive_seed(7, {1}), qcap::derive_seed(8, {1}));
}

// Property suites at reduced counts; the acceptance binary runs the full
// instance counts.
TEST(Properties, CoreInequalities) {
  for (const auto& r : {qcap::verify::fuchs_van_de_graaf(100, 1), qcap::verify::fannes_audenaert(100, 1),
                        qcap::verify::almost_product(50, 1), qcap::verify::strong_subadditivity(50, 1),
                        qcap::verify::purify_round_trip(50, 1), qcap::verify::stinespring_consistency(50, 1)}) {
    EXPECT_TRUE(r.ok()) << r.name << " worst excess " << r.worst_excess;
    EXPECT_GT(r.instances, 0u);
  }
}

}  // namespace
