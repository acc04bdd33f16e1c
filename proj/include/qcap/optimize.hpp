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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qcap/core/linalg.hpp"

namespace qcap {

/// Worker count: QCAP_THREADS if set and positive, else the hardware count.
inline std::size_t worker_count(std::size_t requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QCAP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; results must be written to per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
inline void parallel_for(std::size_t n, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(n, worker_count(threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct AscentOptions {
  int max_iters = 500;
  double fd_step = 1e-5;
  /// Stop after `patience` consecutive iterations improving by less than this.
  double tolerance = 1e-11;
  int patience = 8;
  double initial_step = 0.1;
};

struct AscentResult {
  RVec x;
  double value = 0.0;
  int iterations = 0;
};

/// Objective, gradient and retraction of a problem on a product of unit
/// spheres (or any manifold with a cheap retraction).
struct AscentProblem {
  std::function<double(const RVec&)> value;
  /// Optional; central differences of `value` are used when empty.
  std::function<RVec(const RVec&, double)> gradient;
  /// Maps a point back onto the feasible parameter set; identity when empty.
  std::function<void(RVec&)> retract;
};

/// Central-difference gradient with step h.
inline RVec central_difference(const std::function<double(const RVec&)>& f, const RVec& x, double h) {
  RVec g(x.size());
  RVec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    y(i) = xi + h;
    const double fp = f(y);
    y(i) = xi - h;
    const double fm = f(y);
    y(i) = xi;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Projected gradient ascent with Barzilai-Borwein step lengths and a
/// monotone safeguard: a step that lowers the objective is halved until it
/// does not (or the step underflows, which ends the run).
inline AscentResult projected_gradient_ascent(const AscentProblem& prob, RVec x,
                                              const AscentOptions& opts) {
  auto retract = [&](RVec& v) {
    if (prob.retract) prob.retract(v);
  };
  auto grad = [&](const RVec& v) {
    return prob.gradient ? prob.gradient(v, opts.fd_step) : central_difference(prob.value, v, opts.fd_step);
  };
  retract(x);
  double fx = prob.value(x);
  RVec g = grad(x);
  double step = opts.initial_step;
  int quiet = 0;
  AscentResult res;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    const double gn = g.norm();
    if (!(gn > 1e-14)) break;
    RVec xn;
    double fn = fx;
    double s = step;
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      xn = x + s * g;
      retract(xn);
      fn = prob.value(xn);
      if (std::isfinite(fn) && fn >= fx - 1e-15) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;
    const RVec gnew = grad(xn);
    const RVec sv = xn - x;
    const RVec yv = gnew - g;
    const double sy = -sv.dot(yv);
    const double ss = sv.squaredNorm();
    step = sy > 1e-300 ? std::clamp(ss / sy, 1e-8, 1e4) : std::min(2.0 * s, 1e4);
    const double gain = fn - fx;
    x = std::move(xn);
    fx = fn;
    g = gnew;
    quiet = gain < opts.tolerance ? quiet + 1 : 0;
    if (quiet >= opts.patience) {
      ++it;
      break;
    }
  }
  res.x = std::move(x);
  res.value = fx;
  res.iterations = it;
  return res;
}

}  // namespace qcap
