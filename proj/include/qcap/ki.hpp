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

// Koashi-Imoto decomposition of a bipartite state rho^{A'R}:
//   (U (x) I) rho (U^dag (x) I) = (+)_c p_c mu_c^{N_c} (x) omega_c^{Q_c R}.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <vector>

#include "qcap/algebra.hpp"
#include "qcap/core/entropy.hpp"

namespace qcap {

struct KIBlock {
  double p = 0.0;
  std::size_t dim_q = 1;
  std::size_t dim_n = 1;
  /// First row of the block in u_ki; rows offset + n * dim_q + q.
  std::size_t offset = 0;
  DensityMatrix mu;     // on N
  DensityMatrix omega;  // on Q (x) R
};

struct KIDecomposition {
  /// Unitary on A'. Rows are the block bases in canonical block order
  /// followed by the kernel of rho_A (dead dimensions).
  Mat u_ki;
  std::vector<KIBlock> blocks;
  std::size_t dim_a = 1;
  std::size_t dim_r = 1;
  std::size_t dead_dims = 0;
  double s_c = 0.0;
  double s_q_given_c = 0.0;
  double s_cq = 0.0;
  /// Trace distance between (u_ki (x) I) rho (u_ki (x) I)^dag and ki_form().
  double reconstruction_error = 0.0;

  std::size_t max_dim_q() const {
    std::size_t m = 1;
    for (const auto& b : blocks) m = std::max(m, b.dim_q);
    return m;
  }

  /// sum_c p_c mu_c (x) omega_c laid out in the row space of u_ki, times R.
  Mat ki_form() const {
    const auto dr = static_cast<Eigen::Index>(dim_r);
    const auto d = static_cast<Eigen::Index>(dim_a) * dr;
    Mat out = Mat::Zero(d, d);
    for (const auto& b : blocks) {
      const Mat local = b.p * linalg::kron(b.mu.matrix(), b.omega.matrix());
      const auto base = static_cast<Eigen::Index>(b.offset) * dr;
      out.block(base, base, local.rows(), local.cols()) = local;
    }
    return out;
  }
};

/// Generalized Gell-Mann basis of Hermitian d x d matrices plus the identity.
inline std::vector<Mat> hermitian_basis(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<Mat> out;
  out.push_back(Mat::Identity(n, n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Mat s = Mat::Zero(n, n);
      s(j, k) = s(k, j) = 1.0;
      out.push_back(s);
      Mat a = Mat::Zero(n, n);
      a(j, k) = cplx(0.0, -1.0);
      a(k, j) = cplx(0.0, 1.0);
      out.push_back(a);
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    Mat g = Mat::Zero(n, n);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index i = 0; i < l; ++i) g(i, i) = scale;
    g(l, l) = -static_cast<double>(l) * scale;
    out.push_back(g);
  }
  return out;
}

namespace detail {

inline void require_bipartite(const DensityMatrix& rho) {
  if (rho.space().size() < 2) {
    throw ValidationError("expected a state on A' (x) R with at least two subsystems");
  }
}

inline std::size_t reference_dim(const DensityMatrix& rho) { return rho.dim() / rho.space()[0].dim; }

}  // namespace detail

/// Tr_R[(I (x) X_k) rho] for the Hermitian basis {X_k} of R. The first
/// subsystem is A'; all remaining subsystems together form R.
inline std::vector<Mat> steered_operators(const DensityMatrix& rho) {
  detail::require_bipartite(rho);
  const auto da = static_cast<Eigen::Index>(rho.space()[0].dim);
  const auto dr = static_cast<Eigen::Index>(detail::reference_dim(rho));
  const Mat& m = rho.matrix();
  std::vector<Mat> out;
  for (const Mat& x : hermitian_basis(static_cast<std::size_t>(dr))) {
    Mat e = Mat::Zero(da, da);
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index b = 0; b < da; ++b) {
        e(a, b) = (m.block(a * dr, b * dr, dr, dr) * x).trace();
      }
    }
    out.push_back(linalg::hermitize(e));
  }
  return out;
}

namespace detail {

struct RawBlock {
  Mat embed;  // dim_a x (dim_n * dim_q), columns in N (x) Q order
  std::size_t dim_q, dim_n;
  double p;
  std::vector<double> diag;  // diagonal of embed embed^dag, for tie-breaking
};

inline bool canonical_before(const RawBlock& a, const RawBlock& b) {
  constexpr double kTie = 1e-9;
  if (std::abs(a.p - b.p) > kTie) return a.p > b.p;
  if (a.dim_q != b.dim_q) return a.dim_q > b.dim_q;
  for (std::size_t i = 0; i < a.diag.size(); ++i) {
    if (std::abs(a.diag[i] - b.diag[i]) > kTie) return a.diag[i] > b.diag[i];
  }
  return false;
}

}  // namespace detail

/// Koashi-Imoto decomposition. The first subsystem of `rho` is A'; the rest
/// is the reference. `seed` drives the generic draws of the algebra
/// factorization and does not affect the returned invariants.
inline KIDecomposition ki_decompose(const DensityMatrix& rho, std::uint64_t seed = 0) {
  detail::require_bipartite(rho);
  const std::size_t da = rho.space()[0].dim;
  const std::size_t dr = detail::reference_dim(rho);
  const auto na = static_cast<Eigen::Index>(da);
  const auto nr = static_cast<Eigen::Index>(dr);

  std::vector<bool> keep(rho.space().size(), false);
  keep[0] = true;
  const Mat rho_a = linalg::hermitize(detail::reduce(rho.matrix(), rho.space().dims(), keep));

  const algebra::GeneratedAlgebra gen = algebra::generate_algebra(steered_operators(rho), rho_a);
  const algebra::BlockStructure bs = algebra::decompose_algebra(gen.algebra, seed);

  std::vector<detail::RawBlock> raw;
  for (const auto& b : bs.blocks) {
    detail::RawBlock r{gen.support * b.embed, b.dim_q, b.dim_n, 0.0, {}};
    const Mat proj = r.embed * r.embed.adjoint();
    for (Eigen::Index i = 0; i < na; ++i) r.diag.push_back(proj(i, i).real());
    // p_c = Tr[(P_c (x) I) rho] = Tr[P_c rho_A].
    r.p = (proj * rho_a).trace().real();
    raw.push_back(std::move(r));
  }
  std::stable_sort(raw.begin(), raw.end(), detail::canonical_before);

  KIDecomposition kid;
  kid.dim_a = da;
  kid.dim_r = dr;
  kid.dead_dims = static_cast<std::size_t>(gen.kernel.cols());
  kid.u_ki = Mat::Zero(na, na);
  Eigen::Index row = 0;
  for (const auto& r : raw) {
    kid.u_ki.block(row, 0, r.embed.cols(), na) = r.embed.adjoint();
    row += r.embed.cols();
  }
  if (gen.kernel.cols() > 0) kid.u_ki.block(row, 0, gen.kernel.cols(), na) = gen.kernel.adjoint();

  const Mat u_full = linalg::kron(kid.u_ki, Mat::Identity(nr, nr));
  const Mat transformed = linalg::hermitize(u_full * rho.matrix() * u_full.adjoint());

  std::size_t offset = 0;
  std::vector<double> probs;
  for (const auto& r : raw) {
    const auto nc = static_cast<Eigen::Index>(r.dim_n * r.dim_q);
    const auto base = static_cast<Eigen::Index>(offset) * nr;
    Mat local = transformed.block(base, base, nc * nr, nc * nr);
    const double p = local.trace().real();
    if (!(p > 0.0)) throw NumericalError("ki_decompose: block carries no weight");
    local /= p;
    const std::vector<std::size_t> dims{r.dim_n, r.dim_q, dr};
    KIBlock blk;
    blk.p = p;
    blk.dim_q = r.dim_q;
    blk.dim_n = r.dim_n;
    blk.offset = offset;
    blk.mu = DensityMatrix::unchecked(TensorSpace("N", r.dim_n),
                                      linalg::hermitize(detail::reduce(local, dims, {true, false, false})));
    blk.omega = DensityMatrix::unchecked(TensorSpace{{"Q", r.dim_q}, {"R", dr}},
                                         linalg::hermitize(detail::reduce(local, dims, {false, true, true})));
    probs.push_back(p);
    kid.blocks.push_back(std::move(blk));
    offset += r.dim_n * r.dim_q;
  }
  kid.reconstruction_error = trace_distance(transformed, kid.ki_form());

  kid.s_c = linalg::entropy_of_probabilities(probs);
  kid.s_q_given_c = 0.0;
  for (const auto& b : kid.blocks) {
    const Mat q = detail::reduce(b.omega.matrix(), {b.dim_q, dr}, {true, false});
    kid.s_q_given_c += b.p * linalg::von_neumann(q);
  }
  kid.s_cq = kid.s_c + kid.s_q_given_c;
  return kid;
}

/// The unitary u_ki as a channel on A'.
inline QuantumChannel ki_channel(const KIDecomposition& kid) {
  return QuantumChannel(kid.dim_a, kid.dim_a, {kid.u_ki});
}

/// Undoes u_ki: maps the block layout back to A'.
inline QuantumChannel reverse_ki_channel(const KIDecomposition& kid) {
  return QuantumChannel(kid.dim_a, kid.dim_a, {kid.u_ki.adjoint()});
}

/// The essential source sum_c p_c |c><c| (x) omega_c on C (x) Q (x) R, with
/// every Q_c embedded in a common Q of dimension max_c dim Q_c.
inline DensityMatrix cq_source(const KIDecomposition& kid) {
  const std::size_t nc = kid.blocks.size();
  const std::size_t dq = kid.max_dim_q();
  const auto nr = static_cast<Eigen::Index>(kid.dim_r);
  const auto dqr = static_cast<Eigen::Index>(dq) * nr;
  Mat out = Mat::Zero(static_cast<Eigen::Index>(nc) * dqr, static_cast<Eigen::Index>(nc) * dqr);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& b = kid.blocks[c];
    const auto w = static_cast<Eigen::Index>(b.dim_q) * nr;
    out.block(static_cast<Eigen::Index>(c) * dqr, static_cast<Eigen::Index>(c) * dqr, w, w) =
        b.p * b.omega.matrix();
  }
  return DensityMatrix::unchecked(TensorSpace{{"C", nc}, {"Q", dq}, {"R", kid.dim_r}}, out);
}

/// A' -> C (x) Q: applies u_ki, measures the block, discards N. Dead
/// dimensions go to |0,0>.
inline QuantumChannel ki_encode_channel(const KIDecomposition& kid) {
  const auto nc = static_cast<Eigen::Index>(kid.blocks.size());
  const auto dq = static_cast<Eigen::Index>(kid.max_dim_q());
  const auto na = static_cast<Eigen::Index>(kid.dim_a);
  std::vector<Mat> kraus;
  for (Eigen::Index c = 0; c < nc; ++c) {
    const auto& b = kid.blocks[static_cast<std::size_t>(c)];
    const auto bq = static_cast<Eigen::Index>(b.dim_q);
    for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(b.dim_n); ++n) {
      Mat k = Mat::Zero(nc * dq, na);
      for (Eigen::Index q = 0; q < bq; ++q) {
        k.row(c * dq + q) = kid.u_ki.row(static_cast<Eigen::Index>(b.offset) + n * bq + q);
      }
      kraus.push_back(std::move(k));
    }
  }
  for (Eigen::Index t = na - static_cast<Eigen::Index>(kid.dead_dims); t < na; ++t) {
    Mat k = Mat::Zero(nc * dq, na);
    k.row(0) = kid.u_ki.row(t);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(kid.dim_a, static_cast<std::size_t>(nc * dq), std::move(kraus));
}

/// C (x) Q -> A': re-prepares mu_c on N next to Q_c and undoes u_ki. Padding
/// inputs (q >= dim Q_c) are sent to a fixed state.
inline QuantumChannel ki_decode_channel(const KIDecomposition& kid) {
  const auto nc = static_cast<Eigen::Index>(kid.blocks.size());
  const auto dq = static_cast<Eigen::Index>(kid.max_dim_q());
  const auto na = static_cast<Eigen::Index>(kid.dim_a);
  const Mat back = kid.u_ki.adjoint();
  std::vector<Mat> kraus;
  for (Eigen::Index c = 0; c < nc; ++c) {
    const auto& b = kid.blocks[static_cast<std::size_t>(c)];
    const auto bq = static_cast<Eigen::Index>(b.dim_q);
    const linalg::Eigh e = linalg::eigh(b.mu.matrix());
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
      const double nu = std::max(0.0, e.values(k));
      if (nu <= 0.0) continue;
      Mat op = Mat::Zero(na, nc * dq);
      for (Eigen::Index q = 0; q < bq; ++q) {
        Vec col = Vec::Zero(na);
        for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(b.dim_n); ++n) {
          col += e.vectors(n, k) * back.col(static_cast<Eigen::Index>(b.offset) + n * bq + q);
        }
        op.col(c * dq + q) = std::sqrt(nu) * col;
      }
      kraus.push_back(std::move(op));
    }
    for (Eigen::Index q = bq; q < dq; ++q) {
      Mat op = Mat::Zero(na, nc * dq);
      op(0, c * dq + q) = 1.0;
      kraus.push_back(std::move(op));
    }
  }
  // Eigenvalues of mu_c are renormalized so completeness holds exactly.
  Mat sum = Mat::Zero(nc * dq, nc * dq);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  const RVec scale = sum.diagonal().real().cwiseSqrt().cwiseInverse();
  for (auto& k : kraus) k = k * scale.asDiagonal();
  return QuantumChannel(static_cast<std::size_t>(nc * dq), kid.dim_a, std::move(kraus));
}

}  // namespace qcap
