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

#include "qcap/core/channel.hpp"
#include "qcap/core/entropy.hpp"

namespace qcap {

/// Ensemble {p_x, |phi_x> on A (x) R} standing for the cq state
/// sum_x p_x |phi_x><phi_x| (x) |x><x|.
class CQEnsemble {
 public:
  struct Entry {
    double p = 0.0;
    Vec vector;
  };

  CQEnsemble(std::size_t dim_a, std::size_t dim_r, std::vector<Entry> entries)
      : dim_a_(dim_a), dim_r_(dim_r), entries_(std::move(entries)) {
    if (dim_a_ < 1 || dim_r_ < 1) throw DimensionError("ensemble dimensions must be positive");
    if (entries_.empty()) throw ValidationError("ensemble has no entries");
    double total = 0.0;
    const auto d = static_cast<Eigen::Index>(dim_a_ * dim_r_);
    for (auto& e : entries_) {
      if (!(e.p >= 0.0)) throw ValidationError("ensemble probability is negative");
      if (e.vector.size() != d) {
        std::ostringstream os;
        os << "ensemble vector has length " << e.vector.size() << ", expected " << d;
        throw DimensionError(os.str());
      }
      const double n2 = e.vector.squaredNorm();
      if (std::abs(n2 - 1.0) > tol::kPure) {
        std::ostringstream os;
        os << "ensemble vector has squared norm " << n2;
        throw ValidationError(os.str());
      }
      e.vector /= std::sqrt(n2);
      total += e.p;
    }
    if (std::abs(total - 1.0) > tol::kState) {
      std::ostringstream os;
      os << "ensemble probabilities sum to " << total;
      throw ValidationError(os.str());
    }
  }

  std::size_t dim_a() const { return dim_a_; }
  std::size_t dim_r() const { return dim_r_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  /// Cardinality bound |X| <= dim_A^2 + 2 used when optimizing.
  std::size_t cardinality_bound() const { return dim_a_ * dim_a_ + 2; }

  /// Reduced state of entry x on A.
  Mat marginal_a(std::size_t x) const {
    const Mat phi = as_matrix(x);
    return phi * phi.adjoint();
  }

  /// Entry x reshaped to a dim_A x dim_R coefficient matrix.
  Mat as_matrix(std::size_t x) const {
    const Vec& v = entries_[x].vector;
    Mat m(static_cast<Eigen::Index>(dim_a_), static_cast<Eigen::Index>(dim_r_));
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
      for (Eigen::Index r = 0; r < m.cols(); ++r) m(a, r) = v(a * m.cols() + r);
    }
    return m;
  }

 private:
  std::size_t dim_a_;
  std::size_t dim_r_;
  std::vector<Entry> entries_;
};

/// Independent product of two ensembles: entries (x, y) with A = A1 A2 and
/// R = R1 R2.
inline CQEnsemble tensor(const CQEnsemble& a, const CQEnsemble& b) {
  const std::vector<std::size_t> dims{a.dim_a(), a.dim_r(), b.dim_a(), b.dim_r()};
  const std::vector<std::size_t> perm{0, 2, 1, 3};
  std::vector<CQEnsemble::Entry> out;
  for (const auto& x : a.entries()) {
    for (const auto& y : b.entries()) {
      out.push_back({x.p * y.p, detail::permute(linalg::kron(x.vector, y.vector), dims, perm)});
    }
  }
  return CQEnsemble(a.dim_a() * b.dim_a(), a.dim_r() * b.dim_r(), std::move(out));
}

/// Output quantities of one branch (N (x) id_R)|phi><phi|.
struct BranchTerms {
  Mat sigma_b;        // reduced output state on B
  double s_b = 0.0;   // S(B)
  double s_br = 0.0;  // S(BR)
};

/// Evaluates one pure branch. For a pure input S(BR) equals the entropy of
/// the environment, whose state is the Gram matrix of the vectors
/// (K_k (x) I)|phi>; whichever of the two is smaller gets diagonalized.
inline BranchTerms evaluate_branch(const QuantumChannel& n, const Mat& phi_ar) {
  const auto& kraus = n.kraus();
  const auto ne = static_cast<Eigen::Index>(kraus.size());
  const auto db = static_cast<Eigen::Index>(n.dim_out());
  const auto dr = phi_ar.cols();
  std::vector<Mat> v;
  v.reserve(kraus.size());
  for (const auto& k : kraus) v.push_back(k * phi_ar);
  BranchTerms t;
  t.sigma_b = Mat::Zero(db, db);
  for (const auto& vk : v) t.sigma_b.noalias() += vk * vk.adjoint();
  t.s_b = linalg::von_neumann(t.sigma_b);
  if (ne <= db * dr) {
    Mat g(ne, ne);
    for (Eigen::Index i = 0; i < ne; ++i) {
      for (Eigen::Index j = i; j < ne; ++j) {
        const cplx c = (v[static_cast<std::size_t>(i)].adjoint() * v[static_cast<std::size_t>(j)]).trace();
        g(i, j) = c;
        g(j, i) = std::conj(c);
      }
    }
    t.s_br = linalg::von_neumann(g);
  } else {
    Mat s = Mat::Zero(db * dr, db * dr);
    for (const auto& vk : v) {
      Vec flat(db * dr);
      for (Eigen::Index b = 0; b < db; ++b) {
        for (Eigen::Index r = 0; r < dr; ++r) flat(b * dr + r) = vk(b, r);
      }
      s.noalias() += flat * flat.adjoint();
    }
    t.s_br = linalg::von_neumann(s);
  }
  return t;
}

namespace detail {
inline void require_channel_input(std::size_t dim_a, const QuantumChannel& n) {
  if (dim_a != n.dim_in()) {
    std::ostringstream os;
    os << "input dimension " << dim_a << " does not match channel input " << n.dim_in();
    throw DimensionError(os.str());
  }
}
}  // namespace detail

/// I(R>B) = S(B) - S(BR) of sigma = (N (x) id_R)|psi><psi|, where `a_label`
/// names the channel input and every other subsystem is the reference.
inline double coherent_information(const PureState& psi, const QuantumChannel& n,
                                   const std::string& a_label) {
  detail::require_channel_input(psi.space().dim_of(a_label), n);
  const DensityMatrix sigma = apply_channel(n, psi.density(), a_label);
  return entropy(sigma, {a_label}) - entropy(sigma);
}

/// Coherent information of the purification of `rho` (a state on A alone).
inline double coherent_information(const DensityMatrix& rho, const QuantumChannel& n) {
  if (rho.space().size() != 1) {
    throw ValidationError("coherent_information expects a single-system input state");
  }
  const std::string a = rho.space()[0].label;
  const std::string ref = a == "R" ? "R_ref" : "R";
  return coherent_information(purify(rho, ref), n, a);
}

/// Holevo information I(B:X) of a classical ensemble of A-states.
inline double holevo_information(const std::vector<std::pair<double, DensityMatrix>>& ens,
                                 const QuantumChannel& n) {
  if (ens.empty()) throw ValidationError("empty ensemble");
  double total = 0.0;
  for (const auto& [p, rho] : ens) {
    if (!(p >= 0.0)) throw ValidationError("ensemble probability is negative");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::kState) throw ValidationError("ensemble probabilities do not sum to 1");
  const auto db = static_cast<Eigen::Index>(n.dim_out());
  Mat avg = Mat::Zero(db, db);
  double cond = 0.0;
  for (const auto& [p, rho] : ens) {
    detail::require_channel_input(rho.dim(), n);
    const Mat out = n(rho.matrix());
    avg += p * out;
    cond += p * linalg::von_neumann(out);
  }
  return linalg::von_neumann(avg) - cond;
}

/// Holevo information of the A-marginals of a cq ensemble.
inline double holevo_information(const CQEnsemble& ens, const QuantumChannel& n) {
  std::vector<std::pair<double, DensityMatrix>> classical;
  classical.reserve(ens.size());
  for (std::size_t x = 0; x < ens.size(); ++x) {
    classical.emplace_back(ens[x].p,
                           DensityMatrix::unchecked(TensorSpace("A", ens.dim_a()), ens.marginal_a(x)));
  }
  return holevo_information(classical, n);
}

struct GeneralizedInfo {
  double i_g = 0.0;  // r_c + r_q
  double r_c = 0.0;  // I(B:X)
  double r_q = 0.0;  // I(R>BX), signed
};

/// Generalized information of a cq ensemble. The classical register is kept
/// implicit: sigma^{BRX} is block diagonal in x, so every term reduces to
/// per-branch entropies plus the entropy of the averaged output.
inline GeneralizedInfo generalized_information(const CQEnsemble& ens, const QuantumChannel& n) {
  detail::require_channel_input(ens.dim_a(), n);
  const auto db = static_cast<Eigen::Index>(n.dim_out());
  Mat avg = Mat::Zero(db, db);
  double avg_sb = 0.0, avg_sbr = 0.0;
  for (std::size_t x = 0; x < ens.size(); ++x) {
    const double p = ens[x].p;
    if (p == 0.0) continue;
    const BranchTerms t = evaluate_branch(n, ens.as_matrix(x));
    avg += p * t.sigma_b;
    avg_sb += p * t.s_b;
    avg_sbr += p * t.s_br;
  }
  GeneralizedInfo g;
  g.r_c = linalg::von_neumann(avg) - avg_sb;
  g.r_q = avg_sb - avg_sbr;
  g.i_g = g.r_c + g.r_q;
  return g;
}

}  // namespace qcap
