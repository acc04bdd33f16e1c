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

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcap/core/linalg.hpp"
#include "qcap/core/space.hpp"

namespace qcap {

/// Hermitian, positive semidefinite, unit-trace matrix on a labeled space.
class DensityMatrix {
 public:
  /// The 1 x 1 state on the empty space.
  DensityMatrix() : m_(Mat::Identity(1, 1)) {}

  /// Validates and cleans `m`: Hermitian within 1e-10, trace within 1e-10 of
  /// one, eigenvalues >= -1e-10. Small negative eigenvalues are clamped and
  /// the result renormalized.
  DensityMatrix(TensorSpace space, const Mat& m) : space_(std::move(space)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (m.rows() != d || m.cols() != d) {
      std::ostringstream os;
      os << "density matrix is " << m.rows() << "x" << m.cols() << " but the space has dimension "
         << d;
      throw DimensionError(os.str());
    }
    if (linalg::hermiticity_defect(m) > tol::kState) {
      throw ValidationError("density matrix is not Hermitian");
    }
    const cplx tr = m.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) > tol::kState) {
      std::ostringstream os;
      os << "density matrix trace is " << tr.real() << " (expected 1)";
      throw ValidationError(os.str());
    }
    const linalg::Eigh e = linalg::eigh(m);
    if (e.values.size() > 0 && e.values.minCoeff() < -tol::kState) {
      std::ostringstream os;
      os << "density matrix has eigenvalue " << e.values.minCoeff();
      throw ValidationError(os.str());
    }
    if (e.values.size() > 0 && e.values.minCoeff() < 0.0) {
      RVec clamped = e.values.cwiseMax(0.0);
      clamped /= clamped.sum();
      m_ = e.vectors * clamped.asDiagonal() * e.vectors.adjoint();
    } else {
      m_ = linalg::hermitize(m);
    }
  }

  /// Wraps a matrix already known to be a valid state (outputs of library
  /// operations); only the shape is checked.
  static DensityMatrix unchecked(TensorSpace space, Mat m) {
    if (m.rows() != static_cast<Eigen::Index>(space.dim()) || m.rows() != m.cols()) {
      throw DimensionError("matrix shape does not match space");
    }
    DensityMatrix out;
    out.space_ = std::move(space);
    out.m_ = std::move(m);
    return out;
  }

  const TensorSpace& space() const { return space_; }
  const Mat& matrix() const { return m_; }
  std::size_t dim() const { return space_.dim(); }

  DensityMatrix relabeled(const TensorSpace& space) const {
    if (space.dim() != space_.dim()) throw DimensionError("relabel changes dimension");
    return unchecked(space, m_);
  }

 private:
  TensorSpace space_;
  Mat m_;
};

/// Unit vector on a labeled space.
class PureState {
 public:
  PureState(TensorSpace space, const Vec& v) : space_(std::move(space)), v_(v) {
    if (v_.size() != static_cast<Eigen::Index>(space_.dim())) {
      throw DimensionError("state vector length does not match space");
    }
    const double n2 = v_.squaredNorm();
    if (std::abs(n2 - 1.0) > tol::kPure) {
      std::ostringstream os;
      os << "pure state has squared norm " << n2;
      throw ValidationError(os.str());
    }
    v_ /= std::sqrt(n2);
  }

  /// Normalizes any nonzero vector.
  static PureState normalized(TensorSpace space, const Vec& v) {
    const double n = v.norm();
    if (n == 0.0) throw ValidationError("cannot normalize a zero vector");
    return PureState(std::move(space), v / n);
  }

  const TensorSpace& space() const { return space_; }
  const Vec& vector() const { return v_; }

  DensityMatrix density() const {
    return DensityMatrix::unchecked(space_, v_ * v_.adjoint());
  }

 private:
  TensorSpace space_;
  Vec v_;
};

namespace detail {

/// Strides of a row-major multi-index.
inline std::vector<std::size_t> strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

/// Full-space offsets of every composite index over the selected subsystems.
inline std::vector<std::size_t> offsets(const std::vector<std::size_t>& dims,
                                        const std::vector<bool>& select) {
  const auto st = strides(dims);
  std::vector<std::size_t> out{0};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!select[k]) continue;
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[k]);
    for (std::size_t base : out) {
      for (std::size_t i = 0; i < dims[k]; ++i) next.push_back(base + i * st[k]);
    }
    out = std::move(next);
  }
  return out;
}

/// Partial trace of a square matrix over the subsystems with keep[k]==false.
inline Mat reduce(const Mat& m, const std::vector<std::size_t>& dims,
                  const std::vector<bool>& keep) {
  std::vector<bool> traced(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) traced[k] = !keep[k];
  const auto ok = offsets(dims, keep);
  const auto ot = offsets(dims, traced);
  const auto dk = static_cast<Eigen::Index>(ok.size());
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::size_t t : ot) acc += m(ok[i] + t, ok[j] + t);
      out(i, j) = acc;
    }
  }
  return out;
}

/// Left-multiplies the rows of `x` (indexed by `dims`) by `op` acting on
/// subsystem k. The result's rows are indexed by dims with dims[k] replaced by
/// op.rows().
inline Mat apply_left(const Mat& op, const Mat& x, const std::vector<std::size_t>& dims,
                      std::size_t k) {
  std::size_t pre = 1, post = 1;
  for (std::size_t i = 0; i < k; ++i) pre *= dims[i];
  for (std::size_t i = k + 1; i < dims.size(); ++i) post *= dims[i];
  const auto din = static_cast<std::size_t>(op.cols());
  const auto dout = static_cast<std::size_t>(op.rows());
  if (din != dims[k]) throw DimensionError("operator does not match subsystem dimension");
  Mat out = Mat::Zero(static_cast<Eigen::Index>(pre * dout * post), x.cols());
  for (std::size_t a = 0; a < pre; ++a) {
    for (std::size_t o = 0; o < dout; ++o) {
      for (std::size_t i = 0; i < din; ++i) {
        const cplx c = op(o, i);
        if (c == cplx(0.0, 0.0)) continue;
        for (std::size_t b = 0; b < post; ++b) {
          out.row(static_cast<Eigen::Index>((a * dout + o) * post + b)) +=
              c * x.row(static_cast<Eigen::Index>((a * din + i) * post + b));
        }
      }
    }
  }
  return out;
}

/// Reorders tensor factors of a vector: output factor j is input factor perm[j].
inline Vec permute(const Vec& v, const std::vector<std::size_t>& dims,
                   const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> odims(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) odims[j] = dims[perm[j]];
  const auto ist = strides(dims);
  const auto n = static_cast<std::size_t>(v.size());
  Vec out(v.size());
  std::vector<std::size_t> digit(perm.size(), 0);
  for (std::size_t o = 0; o < n; ++o) {
    std::size_t src = 0;
    for (std::size_t j = 0; j < perm.size(); ++j) src += digit[j] * ist[perm[j]];
    out(static_cast<Eigen::Index>(o)) = v(static_cast<Eigen::Index>(src));
    for (std::size_t j = perm.size(); j-- > 0;) {
      if (++digit[j] < odims[j]) break;
      digit[j] = 0;
    }
  }
  return out;
}

inline std::vector<bool> keep_mask(const TensorSpace& space, const std::vector<std::string>& keep) {
  std::vector<bool> mask(space.size(), false);
  for (const auto& l : keep) mask[space.index_of(l)] = true;
  return mask;
}

}  // namespace detail

/// Kronecker product on the concatenated space; labels must be disjoint.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  TensorSpace s = a.space().concat(b.space());
  return DensityMatrix::unchecked(std::move(s), linalg::kron(a.matrix(), b.matrix()));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  TensorSpace s = a.space().concat(b.space());
  return PureState(std::move(s), linalg::kron(a.vector(), b.vector()));
}

/// Reduced state on the subsystems in `keep` (kept in the original order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  const auto mask = detail::keep_mask(rho.space(), keep);
  TensorSpace out = rho.space().restrict_to(keep);
  return DensityMatrix::unchecked(std::move(out),
                                  detail::reduce(rho.matrix(), rho.space().dims(), mask));
}

/// Reduced state of a pure state, computed without forming |v><v|.
inline DensityMatrix partial_trace(const PureState& psi, const std::vector<std::string>& keep) {
  const auto mask = detail::keep_mask(psi.space(), keep);
  std::vector<bool> traced(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) traced[k] = !mask[k];
  const auto dims = psi.space().dims();
  const auto ok = detail::offsets(dims, mask);
  const auto ot = detail::offsets(dims, traced);
  Mat coeff(static_cast<Eigen::Index>(ok.size()), static_cast<Eigen::Index>(ot.size()));
  for (std::size_t i = 0; i < ok.size(); ++i) {
    for (std::size_t t = 0; t < ot.size(); ++t) {
      coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          psi.vector()(static_cast<Eigen::Index>(ok[i] + ot[t]));
    }
  }
  return DensityMatrix::unchecked(psi.space().restrict_to(keep), coeff * coeff.adjoint());
}

/// Purification on space + (ref_label, rank(rho)). Reference basis vector i
/// pairs with the i-th largest eigenvalue.
inline PureState purify(const DensityMatrix& rho, const std::string& ref_label = "R") {
  const linalg::Eigh e = linalg::eigh(rho.matrix());
  const auto d = e.values.size();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = d; i-- > 0;) {
    if (e.values(i) > tol::kEntropyCutoff) support.push_back(i);
  }
  if (support.empty()) throw ValidationError("cannot purify a zero matrix");
  const auto rank = static_cast<Eigen::Index>(support.size());
  TensorSpace space = rho.space().concat(TensorSpace(ref_label, static_cast<std::size_t>(rank)));
  Vec v = Vec::Zero(d * rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    const Eigen::Index i = support[static_cast<std::size_t>(r)];
    const double amp = std::sqrt(e.values(i));
    for (Eigen::Index a = 0; a < d; ++a) v(a * rank + r) = amp * e.vectors(a, i);
  }
  return PureState::normalized(std::move(space), v);
}

}  // namespace qcap
