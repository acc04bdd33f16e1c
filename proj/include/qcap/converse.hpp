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

// Lower-bound estimators for the converse functions
//   Y_eps = max S(Q^ R R' | C^)_tau,   W_eps = max S(C^ | C')_tau
// over isometries U: CQ -> C^ Q^ E with F(omega^{CQR}, tau^{C^Q^R}) >= 1 - eps.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <utility>
#include <vector>

#include "qcap/core/random.hpp"
#include "qcap/ki.hpp"
#include "qcap/optimize.hpp"

namespace qcap {

/// omega^{CQRR'C'} = sum_c p_c |c><c| (x) |omega_c><omega_c|^{QRR'} (x) |c><c|^{C'},
/// stored as the weights and the branch vectors on Q (x) R (x) R'.
struct ExtendedSource {
  std::vector<double> p;
  std::vector<Vec> branches;
  std::size_t dim_c = 1;
  std::size_t dim_q = 1;
  std::size_t dim_r = 1;
  std::size_t dim_rp = 1;

  /// omega^{CQR}.
  Mat base() const {
    const auto qr = static_cast<Eigen::Index>(dim_q * dim_r);
    const auto rp = static_cast<Eigen::Index>(dim_rp);
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dim_c) * qr, static_cast<Eigen::Index>(dim_c) * qr);
    for (std::size_t c = 0; c < dim_c; ++c) {
      Mat phi(qr, rp);
      for (Eigen::Index i = 0; i < qr; ++i) {
        for (Eigen::Index j = 0; j < rp; ++j) phi(i, j) = branches[c](i * rp + j);
      }
      out.block(static_cast<Eigen::Index>(c) * qr, static_cast<Eigen::Index>(c) * qr, qr, qr) =
          p[c] * phi * phi.adjoint();
    }
    return out;
  }
};

/// Extension of a KI-form state on C (x) Q (x) R (three subsystems in that
/// order). Each omega_c is purified with R' of dimension max_c rank(omega_c).
inline ExtendedSource extend_source(const DensityMatrix& omega, double tol = 1e-10) {
  if (omega.space().size() != 3) throw ValidationError("extend_source expects a state on C (x) Q (x) R");
  const std::size_t dc = omega.space()[0].dim;
  const std::size_t dq = omega.space()[1].dim;
  const std::size_t dr = omega.space()[2].dim;
  const auto qr = static_cast<Eigen::Index>(dq * dr);
  const Mat& m = omega.matrix();
  for (std::size_t a = 0; a < dc; ++a) {
    for (std::size_t b = 0; b < dc; ++b) {
      if (a == b) continue;
      const double off = linalg::max_abs(
          m.block(static_cast<Eigen::Index>(a) * qr, static_cast<Eigen::Index>(b) * qr, qr, qr));
      if (off > tol) {
        std::ostringstream os;
        os << "extend_source: state is not classical on C (off-diagonal block " << off << ")";
        throw ValidationError(os.str());
      }
    }
  }
  ExtendedSource src;
  src.dim_c = dc;
  src.dim_q = dq;
  src.dim_r = dr;
  std::vector<linalg::Eigh> eig;
  std::vector<std::vector<Eigen::Index>> support(dc);
  std::size_t rank = 1;
  for (std::size_t c = 0; c < dc; ++c) {
    const Mat blk = m.block(static_cast<Eigen::Index>(c) * qr, static_cast<Eigen::Index>(c) * qr, qr, qr);
    const double pc = blk.trace().real();
    src.p.push_back(std::max(0.0, pc));
    eig.push_back(linalg::eigh(pc > 0.0 ? Mat(blk / pc) : Mat(blk)));
    for (Eigen::Index i = qr; i-- > 0;) {
      if (pc > 0.0 && eig.back().values(i) > tol::kEntropyCutoff) support[c].push_back(i);
    }
    rank = std::max(rank, support[c].size());
  }
  src.dim_rp = rank;
  const auto rp = static_cast<Eigen::Index>(rank);
  for (std::size_t c = 0; c < dc; ++c) {
    Vec v = Vec::Zero(qr * rp);
    if (support[c].empty()) {
      v(0) = 1.0;
    } else {
      double norm = 0.0;
      for (std::size_t k = 0; k < support[c].size(); ++k) norm += eig[c].values(support[c][k]);
      for (std::size_t k = 0; k < support[c].size(); ++k) {
        const Eigen::Index i = support[c][k];
        const double amp = std::sqrt(eig[c].values(i) / norm);
        for (Eigen::Index a = 0; a < qr; ++a) v(a * rp + static_cast<Eigen::Index>(k)) = amp * eig[c].vectors(a, i);
      }
    }
    src.branches.push_back(std::move(v));
  }
  double total = 0.0;
  for (double x : src.p) total += x;
  for (double& x : src.p) x /= total;
  return src;
}

inline ExtendedSource extend_source(const KIDecomposition& kid) { return extend_source(cq_source(kid)); }

/// omega_1 (x) omega_2 with C = C1 C2, Q = Q1 Q2, R = R1 R2, R' = R'1 R'2.
inline ExtendedSource tensor(const ExtendedSource& a, const ExtendedSource& b) {
  ExtendedSource out;
  out.dim_c = a.dim_c * b.dim_c;
  out.dim_q = a.dim_q * b.dim_q;
  out.dim_r = a.dim_r * b.dim_r;
  out.dim_rp = a.dim_rp * b.dim_rp;
  const std::vector<std::size_t> dims{a.dim_q, a.dim_r, a.dim_rp, b.dim_q, b.dim_r, b.dim_rp};
  const std::vector<std::size_t> perm{0, 3, 1, 4, 2, 5};
  for (std::size_t i = 0; i < a.dim_c; ++i) {
    for (std::size_t j = 0; j < b.dim_c; ++j) {
      out.p.push_back(a.p[i] * b.p[j]);
      out.branches.push_back(detail::permute(linalg::kron(a.branches[i], b.branches[j]), dims, perm));
    }
  }
  return out;
}

enum class Gadget { kY, kW };

struct GadgetValue {
  double value = 0.0;
  double fidelity = 0.0;
};

struct GadgetGradient {
  GadgetValue at;
  Mat d_value;
  Mat d_fidelity;
};

/// Evaluates the objective and the fidelity constraint for an isometry U of
/// shape (|C||Q||E|) x (|C||Q|), output index (c^ |Q| + q^) |E| + e.
class GadgetEvaluator {
 public:
  GadgetEvaluator(ExtendedSource src, Gadget kind) : src_(std::move(src)), kind_(kind) {
    dc_ = static_cast<Eigen::Index>(src_.dim_c);
    dq_ = static_cast<Eigen::Index>(src_.dim_q);
    dr_ = static_cast<Eigen::Index>(src_.dim_r);
    drp_ = static_cast<Eigen::Index>(src_.dim_rp);
    de_ = dc_ * dq_ * dc_ * dq_;
    for (std::size_t c = 0; c < src_.dim_c; ++c) {
      Mat phi(dq_, dr_ * drp_);
      for (Eigen::Index q = 0; q < dq_; ++q) {
        for (Eigen::Index j = 0; j < dr_ * drp_; ++j) phi(q, j) = src_.branches[c](q * dr_ * drp_ + j);
      }
      phi_.push_back(std::move(phi));
    }
    // Square root with round-off eigenvalues dropped; psd_sqrt would turn
    // them into 1e-8 sized kernel components.
    const linalg::Eigh be = linalg::eigh(src_.base());
    RVec root(be.values.size());
    for (Eigen::Index i = 0; i < root.size(); ++i) {
      root(i) = be.values(i) > tol::kEntropyCutoff ? std::sqrt(be.values(i)) : 0.0;
    }
    sqrt_base_ = be.vectors * root.asDiagonal() * be.vectors.adjoint();
  }

  const ExtendedSource& source() const { return src_; }
  Eigen::Index dim_in() const { return dc_ * dq_; }
  Eigen::Index dim_out() const { return dc_ * dq_ * de_; }

  /// |c, q> -> |c, q>|0>_E, the zero-value feasible point.
  Mat identity_embedding() const {
    Mat u = Mat::Zero(dim_out(), dim_in());
    for (Eigen::Index i = 0; i < dim_in(); ++i) u(i * de_, i) = 1.0;
    return u;
  }

  GadgetValue operator()(const Mat& u) const {
    const Eigen::Index cq = dc_ * dq_;
    const Eigen::Index rr = dr_ * drp_;
    Mat tau_cqr = Mat::Zero(cq * dr_, cq * dr_);
    Mat tau_c = Mat::Zero(dc_, dc_);
    double w = 0.0;
    std::vector<Mat> t(src_.dim_c);
    for (std::size_t c = 0; c < src_.dim_c; ++c) {
      const double pc = src_.p[c];
      if (pc <= 0.0) continue;
      t[c] = u.middleCols(static_cast<Eigen::Index>(c) * dq_, dq_) * phi_[c];  // (cq e) x (r r')
      // Reduced state on C^ Q^ R: rows (cq, r), columns (e, r').
      Mat mcr(cq * dr_, de_ * drp_);
      for (Eigen::Index a = 0; a < cq; ++a) {
        for (Eigen::Index e = 0; e < de_; ++e) {
          for (Eigen::Index r = 0; r < dr_; ++r) {
            for (Eigen::Index rp = 0; rp < drp_; ++rp) mcr(a * dr_ + r, e * drp_ + rp) = t[c](a * de_ + e, r * drp_ + rp);
          }
        }
      }
      tau_cqr.noalias() += pc * mcr * mcr.adjoint();
      // Reduced state on C^: rows c^, columns (q^, e, r r').
      Mat mc(dc_, dq_ * de_ * rr);
      for (Eigen::Index ch = 0; ch < dc_; ++ch) {
        for (Eigen::Index k = 0; k < dq_ * de_; ++k) {
          mc.row(ch).segment(k * rr, rr) = t[c].row(ch * dq_ * de_ + k);
        }
      }
      const Mat rc = mc * mc.adjoint();
      tau_c += pc * rc;
      if (kind_ == Gadget::kW) w += pc * linalg::von_neumann(rc);
    }
    GadgetValue out;
    const RVec ev = linalg::spectrum(sqrt_base_ * tau_cqr * sqrt_base_);
    out.fidelity = fidelity_from_spectrum(ev);
    out.fidelity = std::min(out.fidelity, 1.0);
    if (kind_ == Gadget::kW) {
      out.value = w;
      return out;
    }
    // S(C^ Q^ R R') from the environment Gram matrix of the branch blocks.
    const Eigen::Index ne = de_;
    std::vector<Mat> k(src_.dim_c);
    for (std::size_t c = 0; c < src_.dim_c; ++c) {
      if (src_.p[c] <= 0.0) continue;
      k[c].resize(ne, cq * rr);
      for (Eigen::Index a = 0; a < cq; ++a) {
        for (Eigen::Index e = 0; e < ne; ++e) k[c].row(e).segment(a * rr, rr) = t[c].row(a * de_ + e);
      }
    }
    const Eigen::Index nc = dc_;
    Mat g = Mat::Zero(nc * ne, nc * ne);
    for (Eigen::Index a = 0; a < nc; ++a) {
      const double pa = src_.p[static_cast<std::size_t>(a)];
      if (pa <= 0.0) continue;
      for (Eigen::Index b = a; b < nc; ++b) {
        const double pb = src_.p[static_cast<std::size_t>(b)];
        if (pb <= 0.0) continue;
        const Mat blk = std::sqrt(pa * pb) * (k[static_cast<std::size_t>(a)].conjugate() *
                                              k[static_cast<std::size_t>(b)].transpose());
        g.block(a * ne, b * ne, ne, ne) = blk;
        if (b != a) g.block(b * ne, a * ne, ne, ne) = blk.adjoint();
      }
    }
    out.value = linalg::von_neumann(g) - linalg::von_neumann(tau_c);
    return out;
  }

  /// Value and fidelity with their Euclidean gradients in U under the real
  /// inner product Re Tr(A^dag B), exact along tangent directions of the
  /// isometries. Log factors are cut off at 1e-12 so that rank-deficient
  /// points give finite gradients.
  GadgetGradient gradient(const Mat& u) const {
    const Eigen::Index cq = dc_ * dq_;
    const Eigen::Index rr = dr_ * drp_;
    std::vector<Mat> t(src_.dim_c);
    Mat tau_cqr = Mat::Zero(cq * dr_, cq * dr_);
    Mat x1 = Mat::Zero(cq * rr, cq * rr);  // C^ Q^ R R'
    Mat x2 = Mat::Zero(dc_, dc_);          // C^
    std::vector<Mat> xc(src_.dim_c);       // C^ per branch
    for (std::size_t c = 0; c < src_.dim_c; ++c) {
      const double pc = src_.p[c];
      t[c] = u.middleCols(static_cast<Eigen::Index>(c) * dq_, dq_) * phi_[c];
      if (pc <= 0.0) continue;
      xc[c] = Mat::Zero(dc_, dc_);
      for (Eigen::Index e = 0; e < de_; ++e) {
        const Mat m = rows_at(t[c], e);  // cq x rr
        Vec v(cq * rr);
        for (Eigen::Index a = 0; a < cq; ++a) v.segment(a * rr, rr) = m.row(a).transpose();
        x1.noalias() += pc * v * v.adjoint();
        Mat mr(cq * dr_, drp_);
        for (Eigen::Index a = 0; a < cq; ++a) {
          for (Eigen::Index r = 0; r < dr_; ++r) mr.row(a * dr_ + r) = m.row(a).segment(r * drp_, drp_);
        }
        tau_cqr.noalias() += pc * mr * mr.adjoint();
        Mat mc(dc_, dq_ * rr);
        for (Eigen::Index ch = 0; ch < dc_; ++ch) {
          for (Eigen::Index q = 0; q < dq_; ++q) mc.row(ch).segment(q * rr, rr) = m.row(ch * dq_ + q);
        }
        xc[c].noalias() += mc * mc.adjoint();
      }
      x2 += pc * xc[c];
    }

    GadgetGradient out;
    // Fidelity and M = A (A tau A)^{-1/2} A / 2 with A = sqrt(omega).
    const linalg::Eigh fe = linalg::eigh(sqrt_base_ * tau_cqr * sqrt_base_);
    RVec inv(fe.values.size());
    const double floor = kRelativeFloor * std::max(fe.values.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < fe.values.size(); ++i) {
      const double l = fe.values(i);
      inv(i) = l > floor ? 1.0 / std::sqrt(l) : 0.0;
    }
    out.at.fidelity = fidelity_from_spectrum(fe.values);
    const Mat mf = 0.5 * sqrt_base_ * fe.vectors * inv.asDiagonal() * fe.vectors.adjoint() * sqrt_base_;

    Mat k1, k2;
    std::vector<Mat> kc(src_.dim_c);
    if (kind_ == Gadget::kY) {
      k1 = neg_log2(x1, out.at.value, 1.0);
      k2 = neg_log2(x2, out.at.value, -1.0);
    } else {
      for (std::size_t c = 0; c < src_.dim_c; ++c) {
        if (src_.p[c] <= 0.0) continue;
        double s = 0.0;
        kc[c] = neg_log2(xc[c], s, 1.0);
        out.at.value += src_.p[c] * s;
      }
    }

    out.d_value = Mat::Zero(u.rows(), u.cols());
    out.d_fidelity = Mat::Zero(u.rows(), u.cols());
    for (std::size_t c = 0; c < src_.dim_c; ++c) {
      const double pc = src_.p[c];
      if (pc <= 0.0) continue;
      Mat wv = Mat::Zero(u.rows(), rr);
      Mat wf = Mat::Zero(u.rows(), rr);
      const Mat& k2c = kind_ == Gadget::kY ? k2 : kc[c];
      for (Eigen::Index e = 0; e < de_; ++e) {
        const Mat m = rows_at(t[c], e);
        Mat lv = Mat::Zero(cq, rr);
        if (kind_ == Gadget::kY) {
          Vec v(cq * rr);
          for (Eigen::Index a = 0; a < cq; ++a) v.segment(a * rr, rr) = m.row(a).transpose();
          const Vec w = k1 * v;
          for (Eigen::Index a = 0; a < cq; ++a) lv.row(a) = w.segment(a * rr, rr).transpose();
        }
        // Action of K (x) I on C^ for the second entropy (Y: minus S(C^)).
        const double sign = kind_ == Gadget::kY ? -1.0 : 1.0;
        for (Eigen::Index ch = 0; ch < dc_; ++ch) {
          for (Eigen::Index ch2 = 0; ch2 < dc_; ++ch2) {
            const cplx kk = sign * k2c(ch, ch2);
            if (kk == cplx(0.0, 0.0)) continue;
            for (Eigen::Index q = 0; q < dq_; ++q) lv.row(ch * dq_ + q) += kk * m.row(ch2 * dq_ + q);
          }
        }
        Mat lf = Mat::Zero(cq, rr);
        for (Eigen::Index rp = 0; rp < drp_; ++rp) {
          Vec v(cq * dr_);
          for (Eigen::Index a = 0; a < cq; ++a) {
            for (Eigen::Index r = 0; r < dr_; ++r) v(a * dr_ + r) = m(a, r * drp_ + rp);
          }
          const Vec w = mf * v;
          for (Eigen::Index a = 0; a < cq; ++a) {
            for (Eigen::Index r = 0; r < dr_; ++r) lf(a, r * drp_ + rp) = w(a * dr_ + r);
          }
        }
        for (Eigen::Index a = 0; a < cq; ++a) {
          wv.row(a * de_ + e) = lv.row(a);
          wf.row(a * de_ + e) = lf.row(a);
        }
      }
      const auto cols = static_cast<Eigen::Index>(c) * dq_;
      out.d_value.middleCols(cols, dq_) += 2.0 * pc * wv * phi_[c].adjoint();
      out.d_fidelity.middleCols(cols, dq_) += 2.0 * pc * wf * phi_[c].adjoint();
    }
    return out;
  }

 private:
  /// Eigenvalues of sqrt(omega) tau sqrt(omega) below this fraction of the
  /// largest are round-off from the kernel of omega and are dropped.
  static constexpr double kRelativeFloor = 1e-10;

  static double fidelity_from_spectrum(const RVec& ev) {
    const double floor = kRelativeFloor * std::max(ev.maxCoeff(), 0.0);
    double f = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > floor) f += std::sqrt(ev(i));
    }
    return std::min(f, 1.0);
  }

  /// Rows a * |E| + e of t, a = 0 .. |C||Q| - 1.
  Mat rows_at(const Mat& t, Eigen::Index e) const {
    const Eigen::Index cq = dc_ * dq_;
    Mat m(cq, t.cols());
    for (Eigen::Index a = 0; a < cq; ++a) m.row(a) = t.row(a * de_ + e);
    return m;
  }

  /// -log2 x, the derivative of S(x) up to a trace term that vanishes along
  /// isometries; adds sign * S(x) to `acc`.
  static Mat neg_log2(const Mat& x, double& acc, double sign) {
    const linalg::Eigh e = linalg::eigh(x);
    RVec l(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      const double v = std::max(e.values(i), 1e-12);
      l(i) = -std::log2(v);
      if (e.values(i) > tol::kEntropyCutoff) acc += sign * e.values(i) * l(i);
    }
    return e.vectors * l.asDiagonal() * e.vectors.adjoint();
  }

  ExtendedSource src_;
  Gadget kind_;
  Eigen::Index dc_, dq_, dr_, drp_, de_;
  std::vector<Mat> phi_;
  Mat sqrt_base_;
};

struct GadgetEstimate {
  double epsilon = 0.0;
  double value = 0.0;  // lower bound on the constrained maximum
  double achieved_fidelity = 0.0;
  Mat witness;  // isometry CQ -> C^ Q^ E
};

struct GadgetOptions {
  int restarts = 4;
  int max_iters = 60;
  int stages = 4;
  double kappa0 = 10.0;
  double noise = 0.3;
  std::uint64_t seed = 0;
};

namespace detail {

inline Mat isometry_from_params(const RVec& x, Eigen::Index rows, Eigen::Index cols) {
  Mat z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Eigen::Index k = 2 * (j * rows + i);
      z(i, j) = cplx(x(k), x(k + 1));
    }
  }
  return linalg::orthonormal_columns(z);
}

inline RVec params_from_matrix(const Mat& z) {
  RVec x(2 * z.size());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const Eigen::Index k = 2 * (j * z.rows() + i);
      x(k) = z(i, j).real();
      x(k + 1) = z(i, j).imag();
    }
  }
  return x;
}

}  // namespace detail

/// Estimates along an ascending epsilon grid. Each grid step starts from the
/// previous witness and keeps it when nothing better is found, so the
/// returned values are non-decreasing in epsilon.
inline std::vector<GadgetEstimate> estimate_grid(const ExtendedSource& src, Gadget kind,
                                                 const std::vector<double>& eps_grid,
                                                 const GadgetOptions& opts) {
  if (src.dim_c * src.dim_q > 4) {
    std::ostringstream os;
    os << "converse estimators need |C||Q| <= 4, got " << src.dim_c * src.dim_q;
    throw ResourceError(os.str());
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 0.0 && eps_grid[i] <= 0.5)) throw ValidationError("epsilon must lie in [0, 0.5]");
    if (i > 0 && eps_grid[i] < eps_grid[i - 1]) throw ValidationError("epsilon grid must be ascending");
  }
  const GadgetEvaluator eval(src, kind);
  const Eigen::Index rows = eval.dim_out();
  const Eigen::Index cols = eval.dim_in();
  auto evaluate = [&](const RVec& x) { return eval(detail::isometry_from_params(x, rows, cols)); };

  RVec warm = detail::params_from_matrix(eval.identity_embedding());
  GadgetValue warm_val = evaluate(warm);
  std::vector<GadgetEstimate> out;
  for (std::size_t gi = 0; gi < eps_grid.size(); ++gi) {
    const double eps = eps_grid[gi];
    const double target = 1.0 - eps;
    auto feasible = [&](const GadgetValue& v) { return v.fidelity >= target - 1e-10; };
    RVec best = warm;
    GadgetValue best_val = warm_val;
    for (int r = 0; r < opts.restarts; ++r) {
      Rng rng(derive_seed(opts.seed, {gi, static_cast<std::uint64_t>(r)}));
      RVec x = warm;
      if (r > 0) {
        std::normal_distribution<double> g(0.0, opts.noise);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += g(rng);
      }
      double kappa = opts.kappa0;
      for (int stage = 0; stage < opts.stages; ++stage, kappa *= 10.0) {
        AscentProblem prob;
        prob.value = [&](const RVec& y) {
          const GadgetValue v = evaluate(y);
          const double gap = std::max(0.0, target - v.fidelity);
          return v.value - kappa * gap * gap;
        };
        // Riemannian gradient: the Euclidean one projected onto the tangent
        // space G - U herm(U^dag G) of the isometries at U.
        prob.gradient = [&](const RVec& y, double) {
          const Mat u = detail::isometry_from_params(y, rows, cols);
          const GadgetGradient gg = eval.gradient(u);
          const double gap = std::max(0.0, target - gg.at.fidelity);
          const Mat g = gg.d_value + (2.0 * kappa * gap) * gg.d_fidelity;
          const Mat a = u.adjoint() * g;
          return detail::params_from_matrix(g - u * (0.5 * (a + a.adjoint())));
        };
        prob.retract = [&](RVec& y) { y = detail::params_from_matrix(detail::isometry_from_params(y, rows, cols)); };
        AscentOptions ao;
        ao.max_iters = opts.max_iters;
        ao.initial_step = 0.05;
        x = projected_gradient_ascent(prob, x, ao).x;
      }
      GadgetValue v = evaluate(x);
      if (!feasible(v)) {
        // Pull back toward the (feasible) warm start.
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 30; ++it) {
          const double mid = 0.5 * (lo + hi);
          const GadgetValue vm = evaluate(warm + mid * (x - warm));
          (feasible(vm) ? lo : hi) = mid;
        }
        x = warm + lo * (x - warm);
        v = evaluate(x);
      }
      if (feasible(v) && v.value > best_val.value) {
        best = x;
        best_val = v;
      }
    }
    warm = best;
    warm_val = best_val;
    out.push_back({eps, best_val.value, best_val.fidelity, detail::isometry_from_params(best, rows, cols)});
  }
  return out;
}

inline GadgetEstimate estimate_Y(const ExtendedSource& src, double eps, const GadgetOptions& opts) {
  return estimate_grid(src, Gadget::kY, {eps}, opts).front();
}

inline GadgetEstimate estimate_W(const ExtendedSource& src, double eps, const GadgetOptions& opts) {
  return estimate_grid(src, Gadget::kW, {eps}, opts).front();
}

}  // namespace qcap
