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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "qcap/core/channel.hpp"

namespace qcap {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed splitting: the seed of stream (a, b, ...) under `seed`
/// depends only on the path, never on the order streams are consumed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

namespace random {

inline Mat ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

inline Vec gaussian_vector(Eigen::Index n, Rng& rng) { return ginibre(n, 1, rng).col(0); }

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
inline Mat unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  return linalg::orthonormal_columns(ginibre(n, n, rng));
}

inline Mat isometry(std::size_t din, std::size_t dout, Rng& rng) {
  return linalg::orthonormal_columns(
      ginibre(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din), rng));
}

/// Ginibre-induced mixed state G G^dag / Tr; rank 0 means full rank.
inline DensityMatrix state(const TensorSpace& space, Rng& rng, std::size_t rank = 0) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  const auto k = rank == 0 ? d : static_cast<Eigen::Index>(rank);
  const Mat g = ginibre(d, k, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::unchecked(space, linalg::hermitize(rho));
}

inline DensityMatrix state(const TensorSpace& space, std::uint64_t seed, std::size_t rank = 0) {
  Rng rng(seed);
  return state(space, rng, rank);
}

inline PureState pure(const TensorSpace& space, Rng& rng) {
  return PureState::normalized(space, gaussian_vector(static_cast<Eigen::Index>(space.dim()), rng));
}

inline PureState pure(const TensorSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  return pure(space, rng);
}

/// Channel whose Stinespring isometry is the first dim_in columns of a Haar
/// unitary on dim_out * kraus_count.
inline QuantumChannel channel(std::size_t din, std::size_t dout, std::size_t kraus_count, Rng& rng) {
  if (dout * kraus_count < din) {
    throw DimensionError("random channel needs dim_out * kraus_count >= dim_in");
  }
  const Mat v = isometry(din, dout * kraus_count, rng);
  std::vector<Mat> k(kraus_count, Mat::Zero(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din)));
  for (std::size_t b = 0; b < dout; ++b) {
    for (std::size_t e = 0; e < kraus_count; ++e) {
      k[e].row(static_cast<Eigen::Index>(b)) = v.row(static_cast<Eigen::Index>(b * kraus_count + e));
    }
  }
  return QuantumChannel(din, dout, std::move(k));
}

inline QuantumChannel channel(std::size_t din, std::size_t dout, std::size_t kraus_count,
                              std::uint64_t seed) {
  Rng rng(seed);
  return channel(din, dout, kraus_count, rng);
}

}  // namespace random
}  // namespace qcap
