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

// Seeded property suites behind `qcap verify`. Every check draws its
// instances from derive_seed(seed, {suite tag, instance}).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qcap/converse.hpp"
#include "qcap/core/random.hpp"
#include "qcap/info.hpp"
#include "qcap/typicality.hpp"

namespace qcap::verify {

struct PropertyResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  /// Largest amount by which the inequality was exceeded (0 if never).
  double worst_excess = 0.0;
  std::string note;

  bool ok() const { return violations == 0; }

  void record(double excess, double tol) {
    ++instances;
    if (excess > tol) ++violations;
    worst_excess = std::max(worst_excess, excess);
  }
};

namespace detail {

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline DensityMatrix random_state(std::size_t d, Rng& rng, const std::string& label = "A") {
  return random::state(TensorSpace(label, d), rng, pick(rng, 1, d));
}

inline CQEnsemble random_ensemble(std::size_t da, std::size_t dr, std::size_t k, Rng& rng) {
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) s += (x = uniform(rng, 0.05, 1.0));
  std::vector<CQEnsemble::Entry> entries;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec v = random::gaussian_vector(static_cast<Eigen::Index>(da * dr), rng);
    entries.push_back({w[i] / s, v / v.norm()});
  }
  return CQEnsemble(da, dr, std::move(entries));
}

/// Random channel with enough Kraus operators for din -> dout.
inline QuantumChannel random_channel(std::size_t din, std::size_t dout, Rng& rng) {
  const std::size_t lo = (din + dout - 1) / dout;
  return random::channel(din, dout, pick(rng, lo, lo + 2), rng);
}

}  // namespace detail

// ---- core ----

/// 1 - F <= T <= sqrt(1 - F^2) with T the trace distance.
inline PropertyResult fuchs_van_de_graaf(std::size_t count, std::uint64_t seed, double tol = 1e-9) {
  PropertyResult r{"fuchs_van_de_graaf"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0xF1D, i}));
    const std::size_t d = detail::pick(rng, 2, 4);
    const DensityMatrix a = detail::random_state(d, rng), b = detail::random_state(d, rng);
    const double f = fidelity(a, b), t = trace_distance(a, b);
    r.record(std::max(1.0 - f - t, t - std::sqrt(std::max(0.0, 1.0 - f * f))), tol);
  }
  return r;
}

/// |S(a) - S(b)| <= T log2 d + h(T).
inline PropertyResult fannes_audenaert(std::size_t count, std::uint64_t seed, double tol = 1e-9) {
  PropertyResult r{"fannes_audenaert"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0xFA7, i}));
    const std::size_t d = detail::pick(rng, 2, 4);
    const DensityMatrix a = detail::random_state(d, rng);
    DensityMatrix b = detail::random_state(d, rng);
    if (i % 2 == 1) {
      // Nearby pairs exercise the small-T regime.
      const double lam = detail::uniform(rng, 0.0, 0.1);
      b = DensityMatrix(a.space(), (1.0 - lam) * a.matrix() + lam * b.matrix());
    }
    const double t = trace_distance(a, b);
    const double bound = t * std::log2(static_cast<double>(d)) + linalg::binary_entropy(std::min(t, 1.0));
    r.record(std::abs(entropy(a) - entropy(b)) - bound, tol);
  }
  return r;
}

/// F(xi^AB, psi (x) xi^B) >= 1 - 4 eps whenever F(xi^A, psi) >= 1 - eps,
/// on mixtures xi = (1 - lam) psi (x) xi^B + lam tau with lam tuned to a
/// target eps in [0, max_eps].
inline PropertyResult almost_product(std::size_t count, std::uint64_t seed, double max_eps = 0.05) {
  PropertyResult r{"almost_product"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0xA1B, i}));
    const std::size_t da = detail::pick(rng, 2, 3), db = detail::pick(rng, 2, 3);
    const TensorSpace ab{{"A", da}, {"B", db}};
    const PureState psi = random::pure(TensorSpace("A", da), rng);
    const DensityMatrix xb = detail::random_state(db, rng, "B");
    const DensityMatrix tau = random::state(ab, rng, detail::pick(rng, 1, da * db));
    const Mat prod = linalg::kron(psi.density().matrix(), xb.matrix());
    const double a = (psi.vector().adjoint() * partial_trace(tau, {"A"}).matrix() * psi.vector())(0, 0).real();
    const double target = detail::uniform(rng, 0.0, max_eps);
    const double lam = a < 1.0 - 1e-12 ? std::min(1.0, (1.0 - (1.0 - target) * (1.0 - target)) / (1.0 - a)) : 0.0;
    const DensityMatrix xi(ab, (1.0 - lam) * prod + lam * tau.matrix());
    const double eps = 1.0 - fidelity(partial_trace(xi, {"A"}), psi.density());
    const DensityMatrix ref = tensor(psi.density(), partial_trace(xi, {"B"}));
    r.record((1.0 - 4.0 * eps) - fidelity(xi, ref), 1e-9);
  }
  return r;
}

/// I(A:B|C) >= 0.
inline PropertyResult strong_subadditivity(std::size_t count, std::uint64_t seed, double tol = 1e-9) {
  PropertyResult r{"strong_subadditivity"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0x55A, i}));
    const TensorSpace s{{"A", detail::pick(rng, 2, 3)}, {"B", 2}, {"C", detail::pick(rng, 1, 2)}};
    const DensityMatrix rho = random::state(s, rng, detail::pick(rng, 1, s.dim()));
    r.record(-conditional_mutual_information(rho, {"A"}, {"B"}, {"C"}), tol);
  }
  return r;
}

/// Tr_R purify(rho) = rho.
inline PropertyResult purify_round_trip(std::size_t count, std::uint64_t seed, double tol = 1e-10) {
  PropertyResult r{"purify_round_trip"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0x9u, i}));
    const DensityMatrix rho = detail::random_state(detail::pick(rng, 2, 5), rng);
    const DensityMatrix back = partial_trace(purify(rho, "R"), {"A"});
    r.record(linalg::max_abs(back.matrix() - rho.matrix()), tol);
  }
  return r;
}

/// Kraus action equals the Stinespring isometry followed by tracing out E.
inline PropertyResult stinespring_consistency(std::size_t count, std::uint64_t seed, double tol = 1e-10) {
  PropertyResult r{"stinespring_consistency"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0x57u, i}));
    const std::size_t din = detail::pick(rng, 2, 3), dout = detail::pick(rng, 2, 3);
    const QuantumChannel n = detail::random_channel(din, dout, rng);
    const std::size_t k = n.kraus().size();
    const DensityMatrix rho = detail::random_state(din, rng);
    const Mat v = stinespring(n);
    const DensityMatrix full = DensityMatrix::unchecked(TensorSpace{{"B", dout}, {"E", k}},
                                                        v * rho.matrix() * v.adjoint());
    const Mat via_env = partial_trace(full, {"B"}).matrix();
    r.record(linalg::max_abs(via_env - n(rho.matrix())), tol);
  }
  return r;
}

// ---- info measures ----

/// I_G(ens, N2 o N1) <= I_G(ens, N1).
inline PropertyResult data_processing(std::size_t count, std::uint64_t seed, double tol = 1e-9) {
  PropertyResult r{"data_processing"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0xD9u, i}));
    const std::size_t da = detail::pick(rng, 2, 3), dr = detail::pick(rng, 1, 2);
    const std::size_t db = detail::pick(rng, 2, 3), dc = detail::pick(rng, 2, 3);
    const CQEnsemble ens = detail::random_ensemble(da, dr, detail::pick(rng, 1, 4), rng);
    const QuantumChannel n1 = detail::random_channel(da, db, rng);
    const QuantumChannel n2 = detail::random_channel(db, dc, rng);
    const double before = generalized_information(ens, n1).i_g;
    const double after = generalized_information(ens, compose(n2, n1)).i_g;
    r.record(after - before, tol);
  }
  return r;
}

/// One-entry ensembles reduce to the coherent information.
inline PropertyResult trivial_x_reduction(std::size_t count, std::uint64_t seed, double tol = 1e-10) {
  PropertyResult r{"trivial_x_reduction"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0x7Au, i}));
    const std::size_t da = detail::pick(rng, 2, 3), dr = detail::pick(rng, 1, 3);
    const CQEnsemble ens = detail::random_ensemble(da, dr, 1, rng);
    const QuantumChannel n = detail::random_channel(da, detail::pick(rng, 2, 3), rng);
    const PureState psi(TensorSpace{{"A", da}, {"R", dr}}, ens[0].vector);
    r.record(std::abs(generalized_information(ens, n).i_g - coherent_information(psi, n, "A")), tol);
  }
  return r;
}

/// Ensembles with a trivial reference reduce to the Holevo information.
inline PropertyResult trivial_r_reduction(std::size_t count, std::uint64_t seed, double tol = 1e-10) {
  PropertyResult r{"trivial_r_reduction"};
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {0x7Bu, i}));
    const std::size_t da = detail::pick(rng, 2, 3);
    const CQEnsemble ens = detail::random_ensemble(da, 1, detail::pick(rng, 1, 5), rng);
    const QuantumChannel n = detail::random_channel(da, detail::pick(rng, 2, 3), rng);
    std::vector<std::pair<double, DensityMatrix>> classical;
    for (std::size_t x = 0; x < ens.size(); ++x) {
      classical.emplace_back(ens[x].p, PureState(TensorSpace("A", da), ens[x].vector).density());
    }
    r.record(std::abs(generalized_information(ens, n).i_g - holevo_information(classical, n)), tol);
  }
  return r;
}

// ---- converse gadgets ----

/// Ten KI-form sources with |C||Q| <= 4: the classical bit, the ebit, bit
/// (x) ebit and seeded random blocks.
inline std::vector<ExtendedSource> converse_test_sources(std::uint64_t seed) {
  // Sources in KI form: R holds a copy of c next to the quantum reference,
  // so distinct classes have orthogonal reference supports.
  std::vector<ExtendedSource> out;
  auto make = [](std::vector<double> p, std::size_t dq, std::size_t dr0, const std::vector<Vec>& local) {
    ExtendedSource s;
    s.p = std::move(p);
    s.dim_c = s.p.size();
    s.dim_q = dq;
    s.dim_r = s.dim_c * dr0;
    const auto nq = static_cast<Eigen::Index>(dq);
    const auto n0 = static_cast<Eigen::Index>(dr0);
    const auto nr = static_cast<Eigen::Index>(s.dim_r);
    for (std::size_t c = 0; c < s.dim_c; ++c) {
      Vec v = Vec::Zero(nq * nr);
      const auto off = static_cast<Eigen::Index>(c) * n0;
      for (Eigen::Index q = 0; q < nq; ++q) {
        for (Eigen::Index r = 0; r < n0; ++r) v(q * nr + off + r) = local[c](q * n0 + r);
      }
      s.branches.push_back(std::move(v));
    }
    return s;
  };
  const Vec one = Vec::Ones(1);
  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = std::sqrt(0.5);
  out.push_back(make({0.5, 0.5}, 1, 1, {one, one}));
  out.push_back(make({1.0}, 2, 2, {bell}));
  out.push_back(tensor(out[0], out[1]));
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}, {4, 1}, {1, 4}};
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    Rng rng(derive_seed(seed, {0xC5u, i}));
    const auto [dc, dq] = shapes[i];
    const std::size_t dr0 = dq == 1 ? 1 : detail::pick(rng, 1, 2);
    std::vector<double> p(dc);
    double s = 0.0;
    for (auto& x : p) s += (x = detail::uniform(rng, 0.2, 1.0));
    for (auto& x : p) x /= s;
    std::vector<Vec> br;
    for (std::size_t c = 0; c < dc; ++c) {
      const Vec v = random::gaussian_vector(static_cast<Eigen::Index>(dq * dr0), rng);
      br.push_back(v / v.norm());
    }
    out.push_back(make(std::move(p), dq, dr0, br));
  }
  return out;
}

struct GridCheck {
  double at_zero = 0.0;          // estimate at eps = 0
  bool monotone = true;          // non-decreasing along the grid
  double worst_infeasibility = 0.0;  // max(0, 1 - eps - F(witness))
};

/// Evaluates the reported witnesses afresh and checks the grid invariants.
inline GridCheck check_grid(const ExtendedSource& src, Gadget kind, const std::vector<GadgetEstimate>& grid) {
  GridCheck g;
  const GadgetEvaluator eval(src, kind);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].epsilon == 0.0) g.at_zero = grid[i].value;
    if (i > 0 && grid[i].value < grid[i - 1].value) g.monotone = false;
    const GadgetValue v = eval(grid[i].witness);
    g.worst_infeasibility = std::max(g.worst_infeasibility, (1.0 - grid[i].epsilon) - v.fidelity);
  }
  return g;
}

// ---- typicality ----

inline std::vector<std::vector<double>> typicality_test_distributions() {
  return {{0.5, 0.5},       {0.3, 0.7},           {0.9, 0.1},           {1.0, 0.0},
          {0.2, 0.3, 0.5},  {0.6, 0.4, 0.0},      {0.25, 0.25, 0.25, 0.25}, {0.1, 0.2, 0.3, 0.4}};
}

/// |T^n_delta| <= 2^{n (H(p) + c delta)} for n <= max_n and every delta.
inline PropertyResult typical_dimension_bound(const std::vector<std::vector<double>>& dists,
                                              const std::vector<double>& deltas, int max_n = 12) {
  PropertyResult r{"typical_dimension_bound"};
  for (const auto& p : dists) {
    const double h = linalg::entropy_of_probabilities(p), c = typical_constant(p);
    for (double delta : deltas) {
      for (int n = 1; n <= max_n; ++n) {
        const double size = typical_set_size(TypicalSpec(p, n, delta));
        const double bound = std::exp2(static_cast<double>(n) * (h + c * delta));
        r.record(std::log2(std::max(size, 1e-300)) - std::log2(bound), 1e-9);
      }
    }
  }
  return r;
}

/// |T_{Y|X}(x^n)| <= 2^{n (H(Y|X) + c' delta)} for typical x^n.
inline PropertyResult conditional_dimension_bound(const std::vector<double>& px,
                                                  const std::vector<std::vector<double>>& py_given_x,
                                                  const std::vector<double>& deltas, int max_n = 12) {
  PropertyResult r{"conditional_dimension_bound"};
  double hyx = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) hyx += px[x] * linalg::entropy_of_probabilities(py_given_x[x]);
  const double c = conditional_typical_constant(py_given_x);
  for (double delta : deltas) {
    for (int n = 1; n <= max_n; ++n) {
      for_each_typical(TypicalSpec(px, n, delta), [&](const std::vector<int>& xn) {
        const double size = conditional_typical_size(xn, py_given_x, delta);
        const double bound = static_cast<double>(n) * (hyx + c * delta);
        r.record(std::log2(std::max(size, 1e-300)) - bound, 1e-9);
      });
    }
  }
  return r;
}

}  // namespace qcap::verify
