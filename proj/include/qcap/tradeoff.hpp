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

// Single-letter (level l) classical/quantum trade-off frontier by scalarized
// ensemble optimization, and its concave envelope.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcap/core/random.hpp"
#include "qcap/info.hpp"
#include "qcap/optimize.hpp"

namespace qcap {

struct RatePair {
  double r_q = 0.0;
  double r_c = 0.0;
};

/// (I(R>B^l X)/l, I(B^l:X)/l) for an ensemble on A^l (x) R, where `n_l` is
/// already the l-fold channel. r_q is clamped at 0.
inline RatePair evaluate_point_power(const CQEnsemble& ens, const QuantumChannel& n_l, int l) {
  if (l < 1) throw ValidationError("level must be positive");
  const GeneralizedInfo g = generalized_information(ens, n_l);
  return {std::max(0.0, g.r_q) / l, g.r_c / l};
}

inline RatePair evaluate_point(const CQEnsemble& ens, const QuantumChannel& n, int l) {
  return evaluate_point_power(ens, channel_power(n, l), l);
}

/// Objective (1-t) I(B:X) + t I(R>BX) of an ensemble with `entries` entries
/// on A (x) R, dim R = dim A, parameterized by
///   x = [w_0 .. w_{K-1}, re/im of v_0, ..., re/im of v_{K-1}]
/// with p = w^2 / |w|^2 and phi_x = v_x / |v_x|.
class ScalarizedObjective {
 public:
  ScalarizedObjective(const QuantumChannel& n_l, std::size_t entries, double t)
      : n_(n_l), k_(entries), da_(n_l.dim_in()), t_(t) {
    if (k_ < 1) throw ValidationError("ensemble needs at least one entry");
    block_ = 2 * da_ * da_;
  }

  std::size_t entries() const { return k_; }
  std::size_t dim_a() const { return da_; }
  std::size_t param_count() const { return k_ * (1 + block_); }

  double value(const RVec& x) const {
    const Probe pr = probe(x);
    return combine(pr.avg, pr.p, pr.terms);
  }

  /// Central differences, reusing per-entry terms: a vector coordinate only
  /// touches its own branch and the average output.
  RVec gradient(const RVec& x, double h) const {
    const Probe base = probe(x);
    RVec g(x.size());
    RVec y = x;
    for (std::size_t i = 0; i < k_; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      double f[2];
      for (int s = 0; s < 2; ++s) {
        y(ii) = x(ii) + (s == 0 ? h : -h);
        const std::vector<double> p = probabilities(y);
        Mat avg = Mat::Zero(base.avg.rows(), base.avg.cols());
        for (std::size_t j = 0; j < k_; ++j) avg += p[j] * base.terms[j].sigma_b;
        f[s] = combine(avg, p, base.terms);
      }
      y(ii) = x(ii);
      g(ii) = (f[0] - f[1]) / (2.0 * h);
    }
    std::vector<BranchTerms> terms = base.terms;
    for (std::size_t e = 0; e < k_; ++e) {
      const auto off = static_cast<Eigen::Index>(k_ + e * block_);
      for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(block_); ++c) {
        double f[2];
        for (int s = 0; s < 2; ++s) {
          y(off + c) = x(off + c) + (s == 0 ? h : -h);
          terms[e] = evaluate_branch(n_, branch_matrix(y, e));
          const Mat avg = base.avg + base.p[e] * (terms[e].sigma_b - base.terms[e].sigma_b);
          f[s] = combine(avg, base.p, terms);
        }
        y(off + c) = x(off + c);
        g(off + c) = (f[0] - f[1]) / (2.0 * h);
      }
      terms[e] = base.terms[e];
    }
    return g;
  }

  /// Rescales w and every v_x to unit norm (the objective is invariant).
  void retract(RVec& x) const {
    const double wn = x.head(static_cast<Eigen::Index>(k_)).norm();
    if (wn > 0.0) x.head(static_cast<Eigen::Index>(k_)) /= wn;
    for (std::size_t e = 0; e < k_; ++e) {
      auto seg = x.segment(static_cast<Eigen::Index>(k_ + e * block_), static_cast<Eigen::Index>(block_));
      const double vn = seg.norm();
      if (vn > 0.0) seg /= vn;
    }
  }

  CQEnsemble decode(const RVec& x) const {
    const std::vector<double> p = probabilities(x);
    std::vector<CQEnsemble::Entry> out;
    for (std::size_t e = 0; e < k_; ++e) out.push_back({p[e], branch_vector(x, e)});
    return CQEnsemble(da_, da_, std::move(out));
  }

  RVec encode(const CQEnsemble& ens) const {
    if (ens.dim_a() != da_ || ens.dim_r() != da_ || ens.size() != k_) {
      throw DimensionError("encode: ensemble does not match the parameterization");
    }
    RVec x(static_cast<Eigen::Index>(param_count()));
    for (std::size_t e = 0; e < k_; ++e) {
      x(static_cast<Eigen::Index>(e)) = std::sqrt(ens[e].p);
      const Vec& v = ens[e].vector;
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        x(static_cast<Eigen::Index>(k_ + e * block_) + 2 * j) = v(j).real();
        x(static_cast<Eigen::Index>(k_ + e * block_) + 2 * j + 1) = v(j).imag();
      }
    }
    return x;
  }

 private:
  struct Probe {
    std::vector<double> p;
    std::vector<BranchTerms> terms;
    Mat avg;
  };

  std::vector<double> probabilities(const RVec& x) const {
    std::vector<double> p(k_);
    double s = 0.0;
    for (std::size_t e = 0; e < k_; ++e) s += x(static_cast<Eigen::Index>(e)) * x(static_cast<Eigen::Index>(e));
    for (std::size_t e = 0; e < k_; ++e) {
      const double w = x(static_cast<Eigen::Index>(e));
      p[e] = s > 0.0 ? w * w / s : 1.0 / static_cast<double>(k_);
    }
    return p;
  }

  Vec branch_vector(const RVec& x, std::size_t e) const {
    const auto n = static_cast<Eigen::Index>(da_ * da_);
    const auto off = static_cast<Eigen::Index>(k_ + e * block_);
    Vec v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = cplx(x(off + 2 * j), x(off + 2 * j + 1));
    const double nv = v.norm();
    if (nv > 0.0) {
      v /= nv;
    } else {
      v = Vec::Zero(n);
      v(0) = 1.0;
    }
    return v;
  }

  Mat branch_matrix(const RVec& x, std::size_t e) const {
    const Vec v = branch_vector(x, e);
    const auto d = static_cast<Eigen::Index>(da_);
    Mat m(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index r = 0; r < d; ++r) m(a, r) = v(a * d + r);
    }
    return m;
  }

  Probe probe(const RVec& x) const {
    Probe pr;
    pr.p = probabilities(x);
    const auto db = static_cast<Eigen::Index>(n_.dim_out());
    pr.avg = Mat::Zero(db, db);
    pr.terms.reserve(k_);
    for (std::size_t e = 0; e < k_; ++e) {
      pr.terms.push_back(evaluate_branch(n_, branch_matrix(x, e)));
      pr.avg += pr.p[e] * pr.terms.back().sigma_b;
    }
    return pr;
  }

  double combine(const Mat& avg, const std::vector<double>& p, const std::vector<BranchTerms>& terms) const {
    double sb = 0.0, sbr = 0.0;
    for (std::size_t e = 0; e < k_; ++e) {
      sb += p[e] * terms[e].s_b;
      sbr += p[e] * terms[e].s_br;
    }
    const double r_c = linalg::von_neumann(avg) - sb;
    const double r_q = sb - sbr;
    return (1.0 - t_) * r_c + t_ * r_q;
  }

  const QuantumChannel& n_;
  std::size_t k_;
  std::size_t da_;
  std::size_t block_;
  double t_;
};

struct OptimizerOptions {
  int restarts = 24;
  int max_iters = 300;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: QCAP_THREADS or hardware count
  double fd_step = 1e-5;
};

struct ScalarizedResult {
  CQEnsemble ensemble;
  double t = 0.0;
  double objective = 0.0;
  double r_q = 0.0;  // clamped, per channel use
  double r_c = 0.0;
  /// Set when no restart beat the maximally entangled baseline; the
  /// baseline is returned instead.
  bool fallback = false;
};

namespace detail {

/// Every entry maximally entangled on A (x) R, equal weights.
inline CQEnsemble baseline_ensemble(std::size_t da, std::size_t k) {
  const auto d = static_cast<Eigen::Index>(da);
  Vec phi = Vec::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(da));
  std::vector<CQEnsemble::Entry> e(k, {1.0 / static_cast<double>(k), phi});
  return CQEnsemble(da, da, std::move(e));
}

/// Computational basis states |a>|0> with equal weight on the first dim A
/// entries and zero weight elsewhere.
inline CQEnsemble classical_ensemble(std::size_t da, std::size_t k) {
  const auto d = static_cast<Eigen::Index>(da);
  std::vector<CQEnsemble::Entry> e;
  for (std::size_t x = 0; x < k; ++x) {
    Vec v = Vec::Zero(d * d);
    const auto a = static_cast<Eigen::Index>(x % da);
    v(a * d) = 1.0;
    e.push_back({x < da ? 1.0 / static_cast<double>(da) : 0.0, v});
  }
  return CQEnsemble(da, da, std::move(e));
}

}  // namespace detail

/// Multi-start maximization of (1-t) I(B^l:X) + t I(R>B^l X) over ensembles
/// on A^l (x) R with dim R = dim A^l and dim(A^l)^2 + 2 entries. Restart 0
/// starts next to the maximally entangled ensemble, restart 1 next to a
/// computational-basis ensemble, the rest at random points. Restart r uses
/// the stream derive_seed(seed, {r}).
inline ScalarizedResult optimize_scalarized_power(const QuantumChannel& n_l, int l, double t,
                                                  const OptimizerOptions& opts) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("scalarization weight t must lie in [0, 1]");
  if (opts.restarts < 1) throw ValidationError("need at least one restart");
  const std::size_t da = n_l.dim_in();
  const std::size_t k = da * da + 2;
  const ScalarizedObjective obj(n_l, k, t);

  AscentProblem prob;
  prob.value = [&](const RVec& x) { return obj.value(x); };
  prob.gradient = [&](const RVec& x, double h) { return obj.gradient(x, h); };
  prob.retract = [&](RVec& x) { obj.retract(x); };
  AscentOptions ao;
  ao.max_iters = opts.max_iters;
  ao.fd_step = opts.fd_step;

  const auto nres = static_cast<std::size_t>(opts.restarts);
  std::vector<AscentResult> results(nres);
  parallel_for(nres, opts.threads, [&](std::size_t r) {
    Rng rng(derive_seed(opts.seed, {r}));
    RVec x;
    const auto np = static_cast<Eigen::Index>(obj.param_count());
    if (r == 0 || r == 1) {
      x = obj.encode(r == 0 ? detail::baseline_ensemble(da, k) : detail::classical_ensemble(da, k));
      std::normal_distribution<double> g(0.0, 1e-3);
      for (Eigen::Index i = 0; i < np; ++i) x(i) += g(rng);
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      x.resize(np);
      for (Eigen::Index i = 0; i < np; ++i) x(i) = g(rng);
    }
    results[r] = projected_gradient_ascent(prob, x, ao);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < nres; ++r) {
    if (results[r].value > results[best].value) best = r;
  }
  const CQEnsemble base = detail::baseline_ensemble(da, k);
  const double base_value = obj.value(obj.encode(base));
  ScalarizedResult out{obj.decode(results[best].x), t, results[best].value, 0.0, 0.0, false};
  if (results[best].value < base_value - 1e-12) {
    out.ensemble = base;
    out.objective = base_value;
    out.fallback = true;
  }
  const RatePair rp = evaluate_point_power(out.ensemble, n_l, l);
  out.r_q = rp.r_q;
  out.r_c = rp.r_c;
  return out;
}

inline ScalarizedResult optimize_scalarized(const QuantumChannel& n, int l, double t,
                                            const OptimizerOptions& opts) {
  return optimize_scalarized_power(channel_power(n, l), l, t, opts);
}

struct TradeoffPoint {
  double r_q = 0.0;
  double r_c = 0.0;
  double t = 0.0;
  /// True for envelope vertices without a witness (axis projections).
  bool synthetic = false;
  std::optional<CQEnsemble> witness;
};

struct TradeoffCurve {
  int level = 1;
  /// Vertices of the upper concave envelope, ascending r_q, from
  /// (0, c_c_endpoint) to (c_q_endpoint, 0).
  std::vector<TradeoffPoint> points;
  /// Every optimizer result, in grid order.
  std::vector<TradeoffPoint> samples;
  double c_q_endpoint = 0.0;
  double c_c_endpoint = 0.0;
  bool fallback = false;

  /// Piecewise-linear envelope f(r_q); 0 beyond c_q_endpoint.
  double envelope(double r_q) const {
    if (points.empty()) throw ValidationError("empty trade-off curve");
    if (r_q <= points.front().r_q) return points.front().r_c;
    for (std::size_t i = 1; i < points.size(); ++i) {
      const auto& a = points[i - 1];
      const auto& b = points[i];
      if (r_q <= b.r_q) {
        const double w = b.r_q > a.r_q ? (r_q - a.r_q) / (b.r_q - a.r_q) : 1.0;
        return a.r_c + w * (b.r_c - a.r_c);
      }
    }
    return 0.0;
  }
};

/// Chebyshev-spaced weights t_k = (1 - cos(pi k / (n-1))) / 2, k = 0..n-1.
inline std::vector<double> chebyshev_grid(std::size_t n) {
  if (n < 2) throw ValidationError("grid needs at least two points");
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1)));
  }
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

/// Upper concave envelope of achieved points together with the axis anchors
/// (0, max r_c) and (max r_q, 0).
inline std::vector<TradeoffPoint> concave_envelope(const std::vector<TradeoffPoint>& samples) {
  if (samples.empty()) throw ValidationError("no points to envelope");
  std::vector<TradeoffPoint> pts;
  for (const auto& s : samples) {
    TradeoffPoint q = s;
    // Coordinates within round-off of an axis are put on it.
    q.r_q = q.r_q < 1e-12 ? 0.0 : q.r_q;
    q.r_c = q.r_c < 1e-12 ? 0.0 : q.r_c;
    pts.push_back(std::move(q));
  }
  std::size_t ic = 0, iq = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].r_c > pts[ic].r_c) ic = i;
    if (pts[i].r_q > pts[iq].r_q) iq = i;
  }
  TradeoffPoint left{0.0, pts[ic].r_c, pts[ic].t, true, std::nullopt};
  TradeoffPoint right{pts[iq].r_q, 0.0, pts[iq].t, true, std::nullopt};
  pts.push_back(left);
  pts.push_back(right);
  // Sort ascending r_q; among equal r_q keep the highest r_c first and
  // prefer witnessed points.
  std::stable_sort(pts.begin(), pts.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    if (a.r_q != b.r_q) return a.r_q < b.r_q;
    if (a.r_c != b.r_c) return a.r_c > b.r_c;
    return !a.synthetic && b.synthetic;
  });
  std::vector<TradeoffPoint> hull;
  for (auto& p : pts) {
    if (!hull.empty() && p.r_q == hull.back().r_q) continue;  // lower duplicate
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it lies on or below the chord a -> p.
      const double cross = (b.r_q - a.r_q) * (p.r_c - a.r_c) - (b.r_c - a.r_c) * (p.r_q - a.r_q);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(std::move(p));
  }
  // A sample at the largest r_q may carry r_c > 0; the region still contains
  // its projection onto the axis.
  if (hull.back().r_c > 0.0) hull.push_back(right);
  return hull;
}

struct CurveCheck {
  bool ok = true;
  std::string message;
};

/// Sorted by r_q, r_c non-increasing, chord slopes non-increasing, endpoints
/// on the axes, all coordinates >= -1e-9.
inline CurveCheck validate_curve(const TradeoffCurve& c, double tol = 1e-7) {
  auto fail = [](const std::string& m) { return CurveCheck{false, m}; };
  const auto& p = c.points;
  if (p.empty()) return fail("empty curve");
  for (const auto& q : p) {
    if (q.r_q < -1e-9 || q.r_c < -1e-9) return fail("negative coordinate");
  }
  if (std::abs(p.front().r_q) > 1e-9 || std::abs(p.front().r_c - c.c_c_endpoint) > 1e-9) {
    return fail("first point is not (0, c_c)");
  }
  if (std::abs(p.back().r_q - c.c_q_endpoint) > 1e-9 || std::abs(p.back().r_c) > 1e-9) {
    return fail("last point is not (c_q, 0)");
  }
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].r_q < p[i - 1].r_q) return fail("points not sorted by r_q");
    if (p[i].r_c > p[i - 1].r_c + tol) return fail("r_c increases along the curve");
    const double dq = p[i].r_q - p[i - 1].r_q;
    if (dq <= 0.0) continue;
    const double slope = (p[i].r_c - p[i - 1].r_c) / dq;
    if (slope > prev_slope + tol) {
      std::ostringstream os;
      os << "chord slopes increase at point " << i;
      return fail(os.str());
    }
    prev_slope = slope;
  }
  return {};
}

/// Scalarized optimization at every grid weight, then the concave envelope.
/// Weight i uses the seed stream derive_seed(seed, {i}).
inline TradeoffCurve compute_curve(const QuantumChannel& n, int l, const std::vector<double>& t_grid,
                                   const OptimizerOptions& opts) {
  if (t_grid.empty()) throw ValidationError("empty weight grid");
  bool has0 = false, has1 = false;
  for (double t : t_grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("grid weights must lie in [0, 1]");
    has0 = has0 || t == 0.0;
    has1 = has1 || t == 1.0;
  }
  if (!has0 || !has1) throw ValidationError("weight grid must include 0 and 1");
  const QuantumChannel n_l = channel_power(n, l);
  std::vector<ScalarizedResult> res;
  res.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    OptimizerOptions o = opts;
    o.seed = derive_seed(opts.seed, {i});
    res.push_back(optimize_scalarized_power(n_l, l, t_grid[i], o));
  }
  TradeoffCurve c;
  c.level = l;
  for (const auto& r : res) {
    c.samples.push_back({r.r_q, r.r_c, r.t, false, r.ensemble});
    c.fallback = c.fallback || r.fallback;
  }
  c.points = concave_envelope(c.samples);
  c.c_c_endpoint = c.points.front().r_c;
  c.c_q_endpoint = c.points.back().r_q;
  return c;
}

/// Time-sharing witness: the union of two ensembles with weights lambda and
/// 1 - lambda. Its rates are lambda * r1 + (1 - lambda) * r2 for r_q and at
/// least that for r_c.
inline CQEnsemble time_sharing(const CQEnsemble& a, const CQEnsemble& b, double lambda) {
  if (a.dim_a() != b.dim_a() || a.dim_r() != b.dim_r()) throw DimensionError("time_sharing: shape mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("time_sharing: lambda outside [0, 1]");
  std::vector<CQEnsemble::Entry> e;
  for (const auto& x : a.entries()) e.push_back({lambda * x.p, x.vector});
  for (const auto& x : b.entries()) e.push_back({(1.0 - lambda) * x.p, x.vector});
  return CQEnsemble(a.dim_a(), a.dim_r(), std::move(e));
}

}  // namespace qcap
