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
#include <string>
#include <vector>

#include "qcap/core/state.hpp"

namespace qcap {

/// Von Neumann entropy in bits.
inline double entropy(const DensityMatrix& rho) { return linalg::von_neumann(rho.matrix()); }

/// Entropy of the reduced state on `labels`; the empty set has entropy 0.
inline double entropy(const DensityMatrix& rho, const std::vector<std::string>& labels) {
  if (labels.empty()) return 0.0;
  return entropy(partial_trace(rho, labels));
}

namespace detail {

inline void require_disjoint(const std::vector<std::vector<std::string>>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      for (const auto& a : sets[i]) {
        if (std::find(sets[j].begin(), sets[j].end(), a) != sets[j].end()) {
          throw LabelError("label '" + a + "' appears in more than one argument set");
        }
      }
    }
  }
}

inline std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

/// S(a|b) = S(ab) - S(b).
inline double conditional_entropy(const DensityMatrix& rho, const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  detail::require_disjoint({a, b});
  return entropy(rho, detail::join(a, b)) - entropy(rho, b);
}

/// I(a:b) = S(a) + S(b) - S(ab).
inline double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  detail::require_disjoint({a, b});
  return entropy(rho, a) + entropy(rho, b) - entropy(rho, detail::join(a, b));
}

/// I(a:b|c) = S(ac) + S(bc) - S(abc) - S(c).
inline double conditional_mutual_information(const DensityMatrix& rho,
                                             const std::vector<std::string>& a,
                                             const std::vector<std::string>& b,
                                             const std::vector<std::string>& c) {
  detail::require_disjoint({a, b, c});
  return entropy(rho, detail::join(a, c)) + entropy(rho, detail::join(b, c)) -
         entropy(rho, detail::join(detail::join(a, b), c)) - entropy(rho, c);
}

/// Uhlmann fidelity F = Tr sqrt(sqrt(rho) xi sqrt(rho)), clamped to [0, 1].
/// Evaluated on the support of the lower-rank argument, so that eigenvalue
/// noise of a pure input does not leak through the square root.
inline double fidelity(const Mat& rho, const Mat& xi) {
  if (rho.rows() != xi.rows() || rho.cols() != xi.cols()) {
    throw DimensionError("fidelity: dimension mismatch");
  }
  linalg::Eigh ea = linalg::eigh(rho), eb = linalg::eigh(xi);
  auto rank = [](const RVec& v) { return (v.array() > tol::kEntropyCutoff).count(); };
  const bool swap = rank(eb.values) < rank(ea.values);
  const linalg::Eigh& e = swap ? eb : ea;
  const Mat& other = swap ? rho : xi;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > tol::kEntropyCutoff) keep.push_back(i);
  }
  Mat s(e.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    s.col(static_cast<Eigen::Index>(j)) = e.vectors.col(keep[j]) * std::sqrt(e.values(keep[j]));
  }
  const RVec ev = linalg::spectrum(s.adjoint() * other * s);
  double f = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) f += std::sqrt(std::max(0.0, ev(i)));
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& xi) {
  if (rho.dim() != xi.dim()) throw DimensionError("fidelity: dimension mismatch");
  return fidelity(rho.matrix(), xi.matrix());
}

/// Half the trace norm of the difference, in [0, 1].
inline double trace_distance(const Mat& rho, const Mat& xi) {
  if (rho.rows() != xi.rows() || rho.cols() != xi.cols()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  return std::clamp(0.5 * linalg::trace_norm_hermitian(rho - xi), 0.0, 1.0);
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& xi) {
  if (rho.dim() != xi.dim()) throw DimensionError("trace_distance: dimension mismatch");
  return trace_distance(rho.matrix(), xi.matrix());
}

}  // namespace qcap
