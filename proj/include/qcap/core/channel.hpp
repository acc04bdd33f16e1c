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
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcap/core/state.hpp"

namespace qcap {

/// CPTP map given by Kraus operators of shape dim_out x dim_in.
class QuantumChannel {
 public:
  QuantumChannel(std::size_t dim_in, std::size_t dim_out, std::vector<Mat> kraus)
      : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
    if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("channel dimensions must be positive");
    if (kraus_.empty()) throw ValidationError("channel needs at least one Kraus operator");
    Mat sum = Mat::Zero(static_cast<Eigen::Index>(dim_in_), static_cast<Eigen::Index>(dim_in_));
    for (const auto& k : kraus_) {
      if (k.rows() != static_cast<Eigen::Index>(dim_out_) ||
          k.cols() != static_cast<Eigen::Index>(dim_in_)) {
        throw DimensionError("Kraus operator has the wrong shape");
      }
      sum += k.adjoint() * k;
    }
    const double residual = linalg::max_abs(sum - Mat::Identity(sum.rows(), sum.cols()));
    if (residual > tol::kChannel) {
      std::ostringstream os;
      os << "Kraus operators are not complete (residual " << residual << ")";
      throw ValidationError(os.str());
    }
  }

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const std::vector<Mat>& kraus() const { return kraus_; }

  /// Action on a bare dim_in x dim_in operator.
  Mat operator()(const Mat& rho) const {
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dim_out_), static_cast<Eigen::Index>(dim_out_));
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::vector<Mat> kraus_;
};

/// (N (x) id) rho with N acting on the subsystem `target`.
inline DensityMatrix apply_channel(const QuantumChannel& n, const DensityMatrix& rho,
                                   const std::string& target) {
  const std::size_t k = rho.space().index_of(target);
  const auto dims = rho.space().dims();
  if (dims[k] != n.dim_in()) {
    std::ostringstream os;
    os << "channel input dimension " << n.dim_in() << " does not match subsystem '" << target
       << "' of dimension " << dims[k];
    throw DimensionError(os.str());
  }
  TensorSpace out_space = rho.space().with_dim(target, n.dim_out());
  const auto out_dims = out_space.dims();
  const auto d = static_cast<Eigen::Index>(out_space.dim());
  Mat out = Mat::Zero(d, d);
  for (const auto& kr : n.kraus()) {
    const Mat left = detail::apply_left(kr, rho.matrix(), dims, k);
    const Mat both = detail::apply_left(kr, left.adjoint(), dims, k);
    out += both.adjoint();
  }
  return DensityMatrix::unchecked(std::move(out_space), linalg::hermitize(out));
}

/// Stinespring isometry V = sum_k K_k (x) |k>_E with output ordering B (x) E.
inline Mat stinespring(const QuantumChannel& n) {
  const auto ne = static_cast<Eigen::Index>(n.kraus().size());
  const auto dout = static_cast<Eigen::Index>(n.dim_out());
  Mat v = Mat::Zero(dout * ne, static_cast<Eigen::Index>(n.dim_in()));
  for (Eigen::Index e = 0; e < ne; ++e) {
    const Mat& kr = n.kraus()[static_cast<std::size_t>(e)];
    for (Eigen::Index b = 0; b < dout; ++b) v.row(b * ne + e) = kr.row(b);
  }
  return v;
}

/// Kraus set of N2 o N1 (all pairwise products).
inline QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (first.dim_out() != second.dim_in()) {
    throw DimensionError("compose: output of the first channel does not feed the second");
  }
  std::vector<Mat> k;
  k.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& b : second.kraus()) {
    for (const auto& a : first.kraus()) k.push_back(b * a);
  }
  return QuantumChannel(first.dim_in(), second.dim_out(), std::move(k));
}

/// N1 (x) N2 acting on the first (x) second input factor.
inline QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Mat> k;
  k.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& x : a.kraus()) {
    for (const auto& y : b.kraus()) k.push_back(linalg::kron(x, y));
  }
  return QuantumChannel(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(), std::move(k));
}

/// Largest l * log2(dim_in) accepted by channel_power.
inline constexpr double kMaxPowerQubits = 12.0;

/// N^{(x) l}.
inline QuantumChannel channel_power(const QuantumChannel& n, int l) {
  if (l < 1) throw ValidationError("channel_power: l must be positive");
  if (l * std::log2(static_cast<double>(n.dim_in())) > kMaxPowerQubits + 1e-12) {
    std::ostringstream os;
    os << "channel_power: l * log2(dim_in) = " << l * std::log2(static_cast<double>(n.dim_in()))
       << " exceeds " << kMaxPowerQubits;
    throw ResourceError(os.str());
  }
  QuantumChannel out = n;
  for (int i = 1; i < l; ++i) out = tensor(out, n);
  return out;
}

namespace channels {

inline QuantumChannel identity(std::size_t d) {
  return QuantumChannel(d, d, {Mat::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))});
}

namespace detail {
inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << name << " parameter must lie in [0, 1], got " << p;
    throw ValidationError(os.str());
  }
}
}  // namespace detail

/// rho -> (1-p) rho + p Z rho Z. p = 1/2 is the fully dephasing channel.
inline QuantumChannel dephasing(double p) {
  detail::require_probability(p, "dephasing");
  Mat i = Mat::Identity(2, 2);
  Mat z(2, 2);
  z << 1, 0, 0, -1;
  return QuantumChannel(2, 2, {std::sqrt(1.0 - p) * i, std::sqrt(p) * z});
}

/// rho -> (1-p) rho + p I/2, written with the four Pauli Kraus operators.
inline QuantumChannel depolarizing(double p) {
  detail::require_probability(p, "depolarizing");
  Mat i = Mat::Identity(2, 2);
  Mat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  const double w = std::sqrt(p / 4.0);
  return QuantumChannel(2, 2, {std::sqrt(1.0 - 0.75 * p) * i, w * x, w * y, w * z});
}

/// Qubit erasure into a qutrit whose basis vector |2> flags the erasure.
inline QuantumChannel erasure(double p) {
  detail::require_probability(p, "erasure");
  Mat k0 = Mat::Zero(3, 2), k1 = Mat::Zero(3, 2), k2 = Mat::Zero(3, 2);
  k0(0, 0) = k0(1, 1) = std::sqrt(1.0 - p);
  k1(2, 0) = std::sqrt(p);
  k2(2, 1) = std::sqrt(p);
  return QuantumChannel(2, 3, {k0, k1, k2});
}

inline QuantumChannel amplitude_damping(double g) {
  detail::require_probability(g, "amplitude_damping");
  Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - g);
  k1(0, 1) = std::sqrt(g);
  return QuantumChannel(2, 2, {k0, k1});
}

/// Discards the input: d -> 1.
inline QuantumChannel trace_out(std::size_t d) {
  std::vector<Mat> k;
  for (std::size_t i = 0; i < d; ++i) {
    Mat row = Mat::Zero(1, static_cast<Eigen::Index>(d));
    row(0, static_cast<Eigen::Index>(i)) = 1.0;
    k.push_back(row);
  }
  return QuantumChannel(d, 1, std::move(k));
}

/// Parses "identity(d)", "dephasing(p)", "depolarizing(p)", "erasure(p)",
/// "amplitude_damping(g)" and "trace(d)".
inline QuantumChannel parse(const std::string& spec) {
  static const std::regex re(R"(^\s*([a-z_]+)\s*\(\s*([-+0-9.eE]+)\s*\)\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) {
    throw ValidationError("unrecognized channel spec '" + spec + "'");
  }
  const std::string name = m[1];
  double arg = 0.0;
  try {
    std::size_t pos = 0;
    arg = std::stod(m[2], &pos);
    if (pos != static_cast<std::size_t>(m[2].length())) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("bad numeric argument in channel spec '" + spec + "'");
  }
  auto as_dim = [&]() {
    if (arg < 1 || arg != std::floor(arg) || arg > 4096) {
      throw ValidationError("channel dimension must be a positive integer in '" + spec + "'");
    }
    return static_cast<std::size_t>(arg);
  };
  if (name == "identity") return identity(as_dim());
  if (name == "dephasing") return dephasing(arg);
  if (name == "depolarizing") return depolarizing(arg);
  if (name == "erasure") return erasure(arg);
  if (name == "amplitude_damping") return amplitude_damping(arg);
  if (name == "trace") return trace_out(as_dim());
  throw ValidationError("unknown channel '" + name + "'");
}

}  // namespace channels
}  // namespace qcap
