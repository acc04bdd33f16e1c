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

// Generalized capacity of a channel for a source: intersect the trade-off
// envelope with the ray r_c = (S(C) / S(Q|C)) r_q.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#include "qcap/ki.hpp"
#include "qcap/tradeoff.hpp"

namespace qcap {

struct Slope {
  enum class Kind { kFinite, kInfinite, kDegenerate };
  Kind kind = Kind::kFinite;
  double value = 0.0;  // meaningful for kFinite; 0 when S(C) vanishes

  bool finite() const { return kind == Kind::kFinite; }
  bool infinite() const { return kind == Kind::kInfinite; }
  bool degenerate() const { return kind == Kind::kDegenerate; }

  static Slope of(double s_c, double s_q_given_c, double floor = 1e-9) {
    const bool c0 = s_c <= floor;
    const bool q0 = s_q_given_c <= floor;
    if (c0 && q0) return {Kind::kDegenerate, 0.0};
    if (q0) return {Kind::kInfinite, std::numeric_limits<double>::infinity()};
    if (c0) return {Kind::kFinite, 0.0};
    return {Kind::kFinite, s_c / s_q_given_c};
  }
};

inline Slope slope_of(const KIDecomposition& kid) { return Slope::of(kid.s_c, kid.s_q_given_c); }

/// Intersection of r_c = slope * r_q with the envelope. For finite slope > 0
/// g(r) = f(r) - slope * r is strictly decreasing and is solved by bisection
/// on [0, c_q].
inline RatePair intersect(const TradeoffCurve& curve, const Slope& slope) {
  if (curve.points.empty()) throw ValidationError("intersect: empty curve");
  if (slope.degenerate()) return {0.0, 0.0};
  if (slope.infinite()) return {0.0, curve.c_c_endpoint};
  if (slope.value == 0.0) return {curve.c_q_endpoint, 0.0};
  const double s = slope.value;
  const double hi_r = curve.c_q_endpoint;
  auto g = [&](double r) { return curve.envelope(r) - s * r; };
  if (hi_r <= 0.0) return {0.0, 0.0};
  if (g(hi_r) >= 0.0) return {hi_r, s * hi_r};
  double lo = 0.0, hi = hi_r;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= 0.0 ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  return {r, s * r};
}

struct CapacityReport {
  Slope slope;
  RatePair intersection;
  double c_g = 0.0;
  /// c_g / S(CQ); empty when S(CQ) vanishes.
  std::optional<double> copies_per_use;
  int level = 1;
  double s_c = 0.0;
  double s_q_given_c = 0.0;
  double s_cq = 0.0;
  /// Ensemble attaining the intersection, when it sits on a witnessed
  /// envelope vertex (within 1e-6).
  std::optional<CQEnsemble> witness;
  bool optimizer_fallback = false;
};

/// Report from an existing decomposition and curve.
inline CapacityReport capacity_report(const KIDecomposition& kid, const TradeoffCurve& curve) {
  CapacityReport rep;
  rep.slope = slope_of(kid);
  rep.level = curve.level;
  rep.s_c = kid.s_c;
  rep.s_q_given_c = kid.s_q_given_c;
  rep.s_cq = kid.s_cq;
  rep.intersection = intersect(curve, rep.slope);
  rep.c_g = rep.intersection.r_q + rep.intersection.r_c;
  if (!rep.slope.degenerate() && kid.s_cq > 1e-9) rep.copies_per_use = rep.c_g / kid.s_cq;
  rep.optimizer_fallback = curve.fallback;
  for (const auto& p : curve.points) {
    if (p.synthetic || !p.witness) continue;
    if (std::abs(p.r_q - rep.intersection.r_q) <= 1e-6 && std::abs(p.r_c - rep.intersection.r_c) <= 1e-6) {
      rep.witness = p.witness;
      break;
    }
  }
  return rep;
}

/// KI decomposition of `rho` (A' first, reference after), the level-l curve
/// on the default Chebyshev grid, and their intersection.
inline CapacityReport generalized_capacity(const DensityMatrix& rho, const QuantumChannel& n, int l,
                                           const OptimizerOptions& opts, std::size_t grid_points = 21) {
  const KIDecomposition kid = ki_decompose(rho, derive_seed(opts.seed, {0x6B1D}));
  OptimizerOptions o = opts;
  o.seed = derive_seed(opts.seed, {0xC0DE});
  const TradeoffCurve curve = compute_curve(n, l, chebyshev_grid(grid_points), o);
  return capacity_report(kid, curve);
}

struct BlockPlan {
  /// Empty for a degenerate source.
  std::optional<long long> m;
  double rate_check = 0.0;  // m * S(CQ) / n
};

/// Number of source copies m sent in n channel uses:
///   m = floor(min(n r_q* / (S(Q|C) + delta), n r_c* / (S(C) + delta))),
/// with only the non-vanishing constraint when one entropy is zero.
inline BlockPlan plan_block(const CapacityReport& rep, long long n, double delta) {
  if (n < 1) throw ValidationError("plan_block: n must be at least 1");
  if (!(delta > 0.0)) throw ValidationError("plan_block: delta must be positive");
  BlockPlan plan;
  if (rep.slope.degenerate() || rep.s_cq <= 1e-9) return plan;
  const double nn = static_cast<double>(n);
  double bound = std::numeric_limits<double>::infinity();
  if (rep.s_q_given_c > 1e-9) bound = std::min(bound, nn * rep.intersection.r_q / (rep.s_q_given_c + delta));
  if (rep.s_c > 1e-9) bound = std::min(bound, nn * rep.intersection.r_c / (rep.s_c + delta));
  // Guard against floor() dropping an exact integer by round-off.
  const long long m = std::max(0LL, static_cast<long long>(std::floor(bound + 1e-9)));
  plan.m = m;
  plan.rate_check = static_cast<double>(m) * rep.s_cq / nn;
  return plan;
}

}  // namespace qcap
