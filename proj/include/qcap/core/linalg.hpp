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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qcap/core/error.hpp"

namespace qcap {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

namespace tol {
/// Eigenvalues below this contribute nothing to an entropy.
inline constexpr double kEntropyCutoff = 1e-12;
/// Hermiticity, trace and positivity tolerance for density matrices.
inline constexpr double kState = 1e-10;
/// Unit-norm tolerance for pure states (on the squared norm).
inline constexpr double kPure = 1e-12;
/// Kraus completeness residual.
inline constexpr double kChannel = 1e-10;
}  // namespace tol

namespace linalg {

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Mat& m) {
  return max_abs(m - m.adjoint());
}

/// Eigen-decomposition of the Hermitian part of `m`; eigenvalues ascending.
struct Eigh {
  RVec values;
  Mat vectors;
};

inline Eigh eigh(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver failed to converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues of the Hermitian part of `m`, ascending. Closed form for
/// dimensions one and two since those dominate the optimizer inner loops.
inline RVec spectrum(const Mat& m) {
  const auto n = m.rows();
  if (n == 1) {
    RVec v(1);
    v(0) = m(0, 0).real();
    return v;
  }
  if (n == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double r = std::sqrt(half * half + std::norm(b));
    RVec v(2);
    v << mean - r, mean + r;
    return v;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver failed to converge");
  }
  return es.eigenvalues();
}

/// Shannon entropy in bits of a list of eigenvalues/probabilities; entries at
/// or below the cutoff contribute zero.
inline double entropy_of_spectrum(const RVec& lambda) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double l = lambda(i);
    if (l > tol::kEntropyCutoff) s -= l * std::log2(l);
  }
  return s;
}

inline double entropy_of_probabilities(const std::vector<double>& p) {
  double s = 0.0;
  for (double l : p) {
    if (l > tol::kEntropyCutoff) s -= l * std::log2(l);
  }
  return s;
}

/// Von Neumann entropy in bits of a (Hermitian, unit-trace) matrix.
inline double von_neumann(const Mat& m) { return entropy_of_spectrum(spectrum(m)); }

inline double binary_entropy(double e) {
  if (e <= 0.0 || e >= 1.0) return 0.0;
  return -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

/// Square root of the PSD part of a Hermitian matrix (negative eigenvalues
/// clamped to zero).
inline Mat psd_sqrt(const Mat& m) {
  const Eigh e = eigh(m);
  RVec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

/// Orthonormalize the columns of a tall matrix by Householder QR with the
/// diagonal of R made real positive, so an isometry maps to itself.
inline Mat orthonormal_columns(const Mat& a) {
  if (a.rows() < a.cols()) {
    throw DimensionError("orthonormal_columns: more columns than rows");
  }
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(a.rows(), a.cols());
  const Mat& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const cplx d = r(j, j);
    const double ad = std::abs(d);
    if (ad > 0.0) q.col(j) *= d / ad;
  }
  return q;
}

/// Trace norm of a Hermitian matrix.
inline double trace_norm_hermitian(const Mat& m) {
  return spectrum(m).cwiseAbs().sum();
}

}  // namespace linalg
}  // namespace qcap
