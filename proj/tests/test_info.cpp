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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qcap/info.hpp"
#include "qcap/verify.hpp"

namespace {

using qcap::CQEnsemble;
using qcap::DensityMatrix;
using qcap::Mat;
using qcap::TensorSpace;
using qcap::Vec;
namespace ch = qcap::channels;

Vec bell_vector() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return v;
}

Vec ket(std::size_t d, std::size_t i) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

DensityMatrix half_identity() { return DensityMatrix(TensorSpace("A", 2), Mat::Identity(2, 2) / 2.0); }

TEST(CoherentInformation, Examples) {
  EXPECT_NEAR(qcap::coherent_information(half_identity(), ch::identity(2)), 1.0, 1e-12);
  EXPECT_NEAR(qcap::coherent_information(half_identity(), ch::dephasing(0.5)), 0.0, 1e-12);
  // Analytic 1 - h(p) for the dephasing channel at the maximally mixed input.
  EXPECT_NEAR(qcap::coherent_information(half_identity(), ch::dephasing(0.1)), 1.0 - oracle::h2(0.1), 1e-12);
  EXPECT_NEAR(1.0 - oracle::h2(0.1), 0.531004, 1e-6);
}

TEST(CoherentInformation, RangeAndDimensionCheck) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = qcap::random::state(TensorSpace("A", 3), s);
    const double ic = qcap::coherent_information(rho, qcap::random::channel(3, 2, 3, s + 50));
    EXPECT_LE(std::abs(ic), std::log2(3.0) + 1e-9);
  }
  EXPECT_THROW(qcap::coherent_information(half_identity(), ch::identity(3)), qcap::DimensionError);
}

TEST(HolevoInformation, Examples) {
  const CQEnsemble single(2, 1, {{1.0, ket(2, 0)}});
  EXPECT_NEAR(qcap::holevo_information(single, ch::identity(2)), 0.0, 1e-12);
  const CQEnsemble basis(2, 1, {{0.5, ket(2, 0)}, {0.5, ket(2, 1)}});
  EXPECT_NEAR(qcap::holevo_information(basis, ch::identity(2)), 1.0, 1e-12);
  Vec plus = Vec::Constant(2, std::sqrt(0.5));
  const CQEnsemble nonorth(2, 1, {{0.5, ket(2, 0)}, {0.5, plus}});
  // Average state has eigenvalues cos^2(pi/8), sin^2(pi/8).
  const double c2 = std::pow(std::cos(std::numbers::pi / 8.0), 2);
  EXPECT_NEAR(qcap::holevo_information(nonorth, ch::identity(2)), oracle::h2(c2), 1e-12);
  EXPECT_NEAR(oracle::h2(c2), 0.600876, 1e-6);
}

TEST(GeneralizedInformation, Examples) {
  const CQEnsemble bell(2, 2, {{1.0, bell_vector()}});
  const auto g = qcap::generalized_information(bell, ch::identity(2));
  EXPECT_NEAR(g.i_g, 1.0, 1e-12);
  EXPECT_NEAR(g.r_c, 0.0, 1e-12);
  EXPECT_NEAR(g.r_q, 1.0, 1e-12);

  const CQEnsemble basis(2, 1, {{0.5, ket(2, 0)}, {0.5, ket(2, 1)}});
  const auto h = qcap::generalized_information(basis, ch::identity(2));
  EXPECT_NEAR(h.i_g, 1.0, 1e-12);
  EXPECT_NEAR(h.r_c, 1.0, 1e-12);
  EXPECT_NEAR(h.r_q, 0.0, 1e-12);
}

TEST(GeneralizedInformation, RotatedBellPairOverHalfDephasing) {
  // (X (x) I)|Bell> as the second branch.
  Vec rotated = Vec::Zero(4);
  rotated(1) = rotated(2) = std::sqrt(0.5);
  const CQEnsemble ens(2, 2, {{0.5, bell_vector()}, {0.5, rotated}});
  const auto g = qcap::generalized_information(ens, ch::dephasing(0.5));
  // r_q equals the average per-branch coherent information.
  double avg = 0.0;
  for (std::size_t x = 0; x < ens.size(); ++x) {
    const qcap::PureState psi(TensorSpace{{"A", 2}, {"R", 2}}, ens[x].vector);
    avg += 0.5 * qcap::coherent_information(psi, ch::dephasing(0.5), "A");
  }
  EXPECT_NEAR(g.r_q, avg, 1e-12);
  const auto j = oracle::joint_generalized_info(ens, ch::dephasing(0.5));
  EXPECT_NEAR(g.r_q, j.r_q, 1e-10);
  EXPECT_NEAR(g.r_c, j.r_c, 1e-10);
}

TEST(GeneralizedInformation, MatchesJointStateOracle) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    qcap::Rng rng(s);
    const std::size_t da = 2 + s % 2, dr = 1 + s % 3, k = 1 + s % 4;
    std::vector<CQEnsemble::Entry> entries;
    for (std::size_t i = 0; i < k; ++i) {
      const Vec v = qcap::random::gaussian_vector(static_cast<Eigen::Index>(da * dr), rng);
      entries.push_back({1.0 / static_cast<double>(k), v / v.norm()});
    }
    const CQEnsemble ens(da, dr, entries);
    const qcap::QuantumChannel n = qcap::random::channel(da, 2, 3, rng);
    const auto g = qcap::generalized_information(ens, n);
    const auto j = oracle::joint_generalized_info(ens, n);
    EXPECT_NEAR(g.r_c, j.r_c, 1e-10);
    EXPECT_NEAR(g.r_q, j.r_q, 1e-10);
    EXPECT_NEAR(g.i_g, g.r_c + g.r_q, 1e-14);
    EXPECT_GE(g.r_c, -1e-9);
  }
}

TEST(GeneralizedInformation, AdditiveOnProducts) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    qcap::Rng rng(s + 7);
    auto random_ens = [&](std::size_t da, std::size_t dr, std::size_t k) {
      std::vector<CQEnsemble::Entry> e;
      for (std::size_t i = 0; i < k; ++i) {
        const Vec v = qcap::random::gaussian_vector(static_cast<Eigen::Index>(da * dr), rng);
        e.push_back({1.0 / static_cast<double>(k), v / v.norm()});
      }
      return CQEnsemble(da, dr, e);
    };
    const CQEnsemble e1 = random_ens(2, 2, 2), e2 = random_ens(2, 1, 3);
    const qcap::QuantumChannel n1 = qcap::random::channel(2, 2, 2, rng), n2 = ch::dephasing(0.2);
    const double sum = qcap::generalized_information(e1, n1).i_g + qcap::generalized_information(e2, n2).i_g;
    const double joint = qcap::generalized_information(qcap::tensor(e1, e2), qcap::tensor(n1, n2)).i_g;
    EXPECT_NEAR(joint, sum, 1e-8);
  }
}

TEST(GeneralizedInformation, PermutationInvariant) {
  qcap::Rng rng(99);
  std::vector<CQEnsemble::Entry> e;
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  for (double x : p) {
    const Vec v = qcap::random::gaussian_vector(4, rng);
    e.push_back({x, v / v.norm()});
  }
  const qcap::QuantumChannel n = ch::amplitude_damping(0.3);
  const double base = qcap::generalized_information(CQEnsemble(2, 2, e), n).r_c;
  std::reverse(e.begin(), e.end());
  EXPECT_NEAR(qcap::generalized_information(CQEnsemble(2, 2, e), n).r_c, base, 1e-12);
}

TEST(CQEnsemble, Validation) {
  EXPECT_THROW(CQEnsemble(2, 1, {}), qcap::ValidationError);
  EXPECT_THROW(CQEnsemble(2, 1, {{0.7, ket(2, 0)}}), qcap::ValidationError);
  EXPECT_THROW(CQEnsemble(2, 1, {{1.0, ket(3, 0)}}), qcap::DimensionError);
  EXPECT_THROW(CQEnsemble(2, 1, {{1.0, 2.0 * ket(2, 0)}}), qcap::ValidationError);
  const CQEnsemble ok(2, 2, {{1.0, bell_vector()}});
  EXPECT_THROW(qcap::generalized_information(ok, ch::identity(3)), qcap::DimensionError);
}

TEST(Properties, InfoMeasures) {
  for (const auto& r : {qcap::verify::data_processing(60, 3), qcap::verify::trivial_x_reduction(40, 3),
                        qcap::verify::trivial_r_reduction(40, 3)}) {
    EXPECT_TRUE(r.ok()) << r.name << " worst excess " << r.worst_excess;
  }
}

}  // namespace
