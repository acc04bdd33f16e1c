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

// Finite-dimensional *-algebras of matrices: constructive closure from a
// generating set, center, and the block factorization
//   A  ~=  (+)_c  M_{d_c} (x) I_{m_c}.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "qcap/core/random.hpp"

namespace qcap::algebra {

/// Hermitian, Hilbert-Schmidt orthonormal spanning set of a *-algebra of
/// s x s matrices.
struct OperatorAlgebra {
  std::vector<Mat> basis;
  Eigen::Index size() const { return basis.empty() ? 0 : basis.front().rows(); }
  std::size_t dim() const { return basis.size(); }
};

/// Incrementally grown orthonormal basis of Hermitian matrices.
class HermitianSpan {
 public:
  explicit HermitianSpan(double tol) : tol_(tol) {}

  /// Adds the Hermitian and anti-Hermitian parts of x. A part counts as new
  /// when its residual after projection exceeds tol in Frobenius norm, so
  /// callers should pass operators of norm about one.
  int add(const Mat& x) {
    int added = 0;
    added += add_hermitian(0.5 * (x + x.adjoint()));
    added += add_hermitian(cplx(0.0, -0.5) * (x - x.adjoint()));
    return added;
  }

  const std::vector<Mat>& basis() const { return basis_; }

 private:
  int add_hermitian(Mat h) {
    if (h.norm() <= tol_) return 0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis_) h -= (b.adjoint() * h).trace() * b;
    }
    const double r = h.norm();
    if (r <= tol_) return 0;
    h = linalg::hermitize(h / r);
    basis_.push_back(std::move(h));
    return 1;
  }

  double tol_;
  std::vector<Mat> basis_;
};

/// Output of generate_algebra: the support of rho_A and the algebra, in the
/// eigenbasis of rho_A restricted to its support.
struct GeneratedAlgebra {
  Mat support;       // d x s, columns = eigenvectors of rho_A with nonzero eigenvalue
  RVec eigenvalues;  // the s nonzero eigenvalues, descending
  Mat kernel;        // d x (d - s)
  OperatorAlgebra algebra;
};

namespace detail {

/// Groups sorted scalars into clusters separated by gaps larger than `gap`.
inline std::vector<int> cluster_labels(const std::vector<double>& values, double gap) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> label(values.size(), 0);
  int current = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && values[order[k]] - values[order[k - 1]] > gap) ++current;
    label[order[k]] = current;
  }
  return label;
}

/// Splits the spectrum of a Hermitian matrix into eigenvalue clusters.
struct Clustered {
  Mat vectors;
  std::vector<std::vector<Eigen::Index>> groups;  // column indices per cluster, ascending value
  double min_gap = 0.0;                           // smallest gap between clusters
};

inline Clustered cluster_spectrum(const Mat& h, double gap) {
  const linalg::Eigh e = linalg::eigh(h);
  Clustered c;
  c.vectors = e.vectors;
  c.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (i == 0 || e.values(i) - e.values(i - 1) > gap) {
      if (i > 0) c.min_gap = std::min(c.min_gap, e.values(i) - e.values(i - 1));
      c.groups.emplace_back();
    }
    c.groups.back().push_back(i);
  }
  return c;
}

inline Mat columns(const Mat& m, const std::vector<Eigen::Index>& idx) {
  Mat out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(idx[k]);
  return out;
}

}  // namespace detail

/// Smallest *-algebra on the support of rho_A containing the identity and the
/// normalized operators rho_A^{-1/2} E rho_A^{-1/2}, closed under products,
/// adjoints and the modular group X -> rho_A^{it} X rho_A^{-it}.
///
/// Modular invariance is imposed by adding, for each element X, its spectral
/// components sum_{lambda_i/lambda_j = nu} P_i X P_j. Without it the algebra
/// can be strictly smaller than the one whose block structure factorizes the
/// state.
inline GeneratedAlgebra generate_algebra(const std::vector<Mat>& ops, const Mat& rho_a,
                                         double tol = 1e-7, double support_tol = 1e-9) {
  const auto d = rho_a.rows();
  const linalg::Eigh e = linalg::eigh(rho_a);
  std::vector<Eigen::Index> sup, ker;
  for (Eigen::Index i = d; i-- > 0;) {
    (e.values(i) > support_tol ? sup : ker).push_back(i);
  }
  GeneratedAlgebra out;
  out.support = detail::columns(e.vectors, sup);
  out.kernel = detail::columns(e.vectors, ker);
  const auto s = static_cast<Eigen::Index>(sup.size());
  if (s == 0) throw ValidationError("generate_algebra: rho_A has empty support");
  out.eigenvalues.resize(s);
  for (Eigen::Index i = 0; i < s; ++i) out.eigenvalues(i) = e.values(sup[static_cast<std::size_t>(i)]);

  const RVec inv_sqrt = out.eigenvalues.cwiseSqrt().cwiseInverse();

  // Modular spectral classes of index pairs (i, j) by log(lambda_i / lambda_j).
  std::vector<double> log_ratio(static_cast<std::size_t>(s * s));
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      log_ratio[static_cast<std::size_t>(i * s + j)] =
          std::log(out.eigenvalues(i)) - std::log(out.eigenvalues(j));
    }
  }
  const std::vector<int> cls = detail::cluster_labels(log_ratio, 1e-7);
  const int n_cls = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;

  HermitianSpan span(tol);
  span.add(Mat::Identity(s, s));
  for (const auto& op : ops) {
    if (op.rows() != d || op.cols() != d) throw DimensionError("generate_algebra: operator shape");
    Mat m = out.support.adjoint() * op * out.support;
    m = inv_sqrt.asDiagonal() * m * inv_sqrt.asDiagonal();
    const double n = m.norm();
    if (n > 0.0) span.add(m / n);
  }

  const std::size_t max_dim = static_cast<std::size_t>(s * s);
  for (std::size_t i = 0; i < span.basis().size(); ++i) {
    if (n_cls > 1) {
      const Mat x = span.basis()[i];
      for (int c = 0; c < n_cls; ++c) {
        Mat comp = Mat::Zero(s, s);
        for (Eigen::Index a = 0; a < s; ++a) {
          for (Eigen::Index b = 0; b < s; ++b) {
            if (cls[static_cast<std::size_t>(a * s + b)] == c) comp(a, b) = x(a, b);
          }
        }
        span.add(comp);
      }
    }
    for (std::size_t j = 0; j <= i; ++j) {
      const Mat xi = span.basis()[i];
      const Mat xj = span.basis()[j];
      span.add(xi * xj);
    }
    if (span.basis().size() > max_dim) {
      throw NumericalError("generate_algebra: span exceeded the full matrix algebra; closure did not converge");
    }
  }
  out.algebra.basis = span.basis();
  return out;
}

/// One simple block: columns of `embed` form an orthonormal basis of the
/// block subspace ordered as N (x) Q, i.e. column n * dim_q + q; the algebra
/// acts there as I_N (x) M_{dim_q}.
struct AlgebraBlock {
  Mat embed;
  std::size_t dim_q = 1;
  std::size_t dim_n = 1;
};

struct BlockStructure {
  std::vector<AlgebraBlock> blocks;
};

/// Orthonormal Hermitian basis of the center {Z in A : [Z, B] = 0 for all B}.
inline std::vector<Mat> center(const OperatorAlgebra& alg, double null_tol = 1e-10) {
  const auto n = static_cast<Eigen::Index>(alg.dim());
  const auto& b = alg.basis;
  std::vector<Mat> comm(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      comm[static_cast<std::size_t>(i * n + j)] =
          b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] -
          b[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(i)];
    }
  }
  Mat g = Mat::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index c = a; c < n; ++c) {
      cplx acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        acc += (comm[static_cast<std::size_t>(a * n + j)].adjoint() *
                comm[static_cast<std::size_t>(c * n + j)]).trace();
      }
      g(a, c) = acc;
      g(c, a) = std::conj(acc);
    }
  }
  const linalg::Eigh e = linalg::eigh(g);
  HermitianSpan z(1e-8);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (e.values(k) > null_tol) continue;
    Mat m = Mat::Zero(alg.size(), alg.size());
    for (Eigen::Index i = 0; i < n; ++i) m += e.vectors(i, k) * b[static_cast<std::size_t>(i)];
    z.add(m);
  }
  return z.basis();
}

/// Block decomposition of a *-algebra: center projectors from a random
/// Hermitian central element, then the tensor factorization of each block
/// from a generic Hermitian element (its eigenspaces are the Q-index slices)
/// and a generic element (whose compressions align the N bases of the
/// slices). Degenerate draws are retried up to 16 times.
inline BlockStructure decompose_algebra(const OperatorAlgebra& alg, std::uint64_t seed = 0,
                                        double residual_tol = 1e-8) {
  constexpr int kAttempts = 16;
  constexpr double kGap = 1e-7;
  const auto s = alg.size();
  if (alg.dim() == 0) throw ValidationError("decompose_algebra: empty basis");
  Rng rng(derive_seed(seed, {0xA16EB7A}));
  std::normal_distribution<double> gauss(0.0, 1.0);

  const std::vector<Mat> zbasis = center(alg);
  if (zbasis.empty()) throw NumericalError("decompose_algebra: center is empty (identity missing)");

  // Center projectors.
  std::vector<Mat> block_spaces;
  bool ok = false;
  for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
    Mat z = Mat::Zero(s, s);
    for (const auto& zb : zbasis) z += gauss(rng) * zb;
    const detail::Clustered cl = detail::cluster_spectrum(z, kGap);
    if (cl.groups.size() != zbasis.size()) continue;
    block_spaces.clear();
    for (const auto& g : cl.groups) block_spaces.push_back(detail::columns(cl.vectors, g));
    ok = true;
  }
  if (!ok) throw NumericalError("decompose_algebra: could not separate the center (degenerate draws)");

  BlockStructure out;
  for (const Mat& v : block_spaces) {
    const auto nc = v.cols();
    std::vector<Mat> local;
    local.reserve(alg.dim());
    HermitianSpan local_span(1e-7);
    for (const auto& b : alg.basis) {
      local.push_back(v.adjoint() * b * v);
      local_span.add(local.back());
    }
    const auto rank = static_cast<Eigen::Index>(local_span.basis().size());
    const auto dq = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(rank))));
    if (dq * dq != rank || nc % dq != 0) {
      std::ostringstream os;
      os << "decompose_algebra: block of size " << nc << " carries an algebra of dimension " << rank
         << ", which is not a full matrix algebra tensor identity";
      throw NumericalError(os.str());
    }
    const auto mn = nc / dq;

    bool factored = false;
    Mat f(nc, nc);
    for (int attempt = 0; attempt < kAttempts && !factored; ++attempt) {
      Mat h = Mat::Zero(nc, nc);
      Mat g = Mat::Zero(nc, nc);
      for (const auto& lb : local_span.basis()) {
        h += gauss(rng) * lb;
        g += cplx(gauss(rng), gauss(rng)) * lb;
      }
      const detail::Clustered cl = detail::cluster_spectrum(h, kGap);
      if (static_cast<Eigen::Index>(cl.groups.size()) != dq) continue;
      bool sizes_ok = true;
      for (const auto& grp : cl.groups) sizes_ok = sizes_ok && static_cast<Eigen::Index>(grp.size()) == mn;
      if (!sizes_ok) continue;
      const Mat e1 = detail::columns(cl.vectors, cl.groups[0]);
      bool aligned = true;
      for (Eigen::Index q = 0; q < dq && aligned; ++q) {
        Mat fq;
        if (q == 0) {
          fq = e1;
        } else {
          const Mat eq = detail::columns(cl.vectors, cl.groups[static_cast<std::size_t>(q)]);
          const Mat x = eq.adjoint() * g * e1;
          const double scale = x.norm() / std::sqrt(static_cast<double>(mn));
          if (scale < 1e-6) {
            aligned = false;
            break;
          }
          fq = eq * (x / scale);
        }
        for (Eigen::Index j = 0; j < mn; ++j) f.col(j * dq + q) = fq.col(j);
      }
      if (!aligned) continue;
      factored = true;
    }
    if (!factored) throw NumericalError("decompose_algebra: could not factor a block (degenerate draws)");

    // Verify: f unitary and every element acts as I_N (x) x_Q.
    double residual = linalg::max_abs(f.adjoint() * f - Mat::Identity(nc, nc));
    for (const auto& lb : local) {
      const Mat y = f.adjoint() * lb * f;
      Mat xq = Mat::Zero(dq, dq);
      for (Eigen::Index j = 0; j < mn; ++j) xq += y.block(j * dq, j * dq, dq, dq);
      xq /= static_cast<double>(mn);
      residual = std::max(residual, linalg::max_abs(y - linalg::kron(Mat::Identity(mn, mn), xq)));
    }
    if (residual > residual_tol) {
      std::ostringstream os;
      os << "decompose_algebra: factorization residual " << residual << " above " << residual_tol;
      throw NumericalError(os.str());
    }
    out.blocks.push_back({v * f, static_cast<std::size_t>(dq), static_cast<std::size_t>(mn)});
  }
  return out;
}

}  // namespace qcap::algebra
