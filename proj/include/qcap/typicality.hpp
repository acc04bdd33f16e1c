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

// Strongly typical sequences, typical and conditionally typical projectors.
//
// A sequence x^n is typical when |N(x|x^n) - n p(x)| <= n delta for every
// symbol and symbols with p(x) = 0 do not occur at all.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "qcap/converse.hpp"

namespace qcap {

/// Slack for count comparisons: n * 1e-12.
inline constexpr double kCountSlack = 1e-12;

struct TypicalSpec {
  std::vector<double> p;
  int n = 1;
  double delta = 0.1;

  TypicalSpec(std::vector<double> dist, int length, double slack) : p(std::move(dist)), n(length), delta(slack) {
    if (p.empty()) throw ValidationError("distribution is empty");
    double s = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw ValidationError("distribution has a negative entry");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "distribution sums to " << s;
      throw ValidationError(os.str());
    }
    if (n < 1) throw ValidationError("block length must be at least 1");
    if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  }

  std::size_t alphabet() const { return p.size(); }
};

/// Typicality of a count vector (counts sum to n).
inline bool counts_typical(const std::vector<long long>& counts, const std::vector<double>& p, long long n,
                           double delta) {
  const double nn = static_cast<double>(n);
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double k = static_cast<double>(counts[x]);
    if (p[x] == 0.0) {
      if (counts[x] != 0) return false;
      continue;
    }
    if (std::abs(k - nn * p[x]) > nn * delta + kCountSlack * nn) return false;
  }
  return true;
}

inline std::vector<long long> symbol_counts(const std::vector<int>& seq, std::size_t alphabet) {
  std::vector<long long> c(alphabet, 0);
  for (int s : seq) {
    if (s < 0 || static_cast<std::size_t>(s) >= alphabet) throw ValidationError("symbol outside the alphabet");
    ++c[static_cast<std::size_t>(s)];
  }
  return c;
}

inline bool is_typical(const std::vector<int>& seq, const TypicalSpec& spec) {
  if (seq.size() != static_cast<std::size_t>(spec.n)) throw ValidationError("sequence length differs from n");
  return counts_typical(symbol_counts(seq, spec.alphabet()), spec.p, spec.n, spec.delta);
}

inline constexpr int kMaxEnumerateLength = 20;

/// Calls fn for every typical sequence in lexicographic order.
inline void for_each_typical(const TypicalSpec& spec, const std::function<void(const std::vector<int>&)>& fn) {
  if (spec.n > kMaxEnumerateLength) {
    std::ostringstream os;
    os << "enumeration is limited to n <= " << kMaxEnumerateLength << ", got " << spec.n;
    throw ResourceError(os.str());
  }
  const std::size_t k = spec.alphabet();
  const double nn = static_cast<double>(spec.n);
  const double slack = nn * spec.delta + kCountSlack * nn;
  std::vector<int> seq(static_cast<std::size_t>(spec.n));
  std::vector<long long> counts(k, 0);
  // Depth-first with pruning: a prefix is extendable when no count already
  // exceeds its upper limit and every lower limit is still reachable.
  std::function<void(int)> rec = [&](int pos) {
    const int left = spec.n - pos;
    long long need = 0;
    for (std::size_t x = 0; x < k; ++x) {
      if (spec.p[x] == 0.0) continue;
      const double lower = nn * spec.p[x] - slack;
      if (static_cast<double>(counts[x]) > nn * spec.p[x] + slack) return;
      need += std::max(0LL, static_cast<long long>(std::ceil(lower - static_cast<double>(counts[x]))));
    }
    if (need > left) return;
    if (left == 0) {
      if (counts_typical(counts, spec.p, spec.n, spec.delta)) fn(seq);
      return;
    }
    for (std::size_t x = 0; x < k; ++x) {
      if (spec.p[x] == 0.0) continue;
      seq[static_cast<std::size_t>(pos)] = static_cast<int>(x);
      ++counts[x];
      rec(pos + 1);
      --counts[x];
    }
  };
  rec(0);
}

inline std::vector<std::vector<int>> enumerate_typical(const TypicalSpec& spec) {
  std::vector<std::vector<int>> out;
  for_each_typical(spec, [&](const std::vector<int>& s) { out.push_back(s); });
  return out;
}

/// c = sum over the support of |log2 p(x)|.
inline double typical_constant(const std::vector<double>& p) {
  double c = 0.0;
  for (double x : p) {
    if (x > 0.0) c += std::abs(std::log2(x));
  }
  return c;
}

namespace detail {

/// Calls fn(counts) for every count vector of n items over k symbols.
inline void for_each_type(std::size_t k, long long n, const std::function<void(const std::vector<long long>&)>& fn) {
  std::vector<long long> c(k, 0);
  std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long left) {
    if (i + 1 == k) {
      c[i] = left;
      fn(c);
      return;
    }
    for (long long v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n);
}

inline double log2_multinomial(const std::vector<long long>& c) {
  long long n = 0;
  double s = 0.0;
  for (long long v : c) {
    n += v;
    s -= std::lgamma(static_cast<double>(v) + 1.0);
  }
  return (s + std::lgamma(static_cast<double>(n) + 1.0)) / std::log(2.0);
}

inline double log2_type_probability(const std::vector<long long>& c, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (c[x] == 0) continue;
    if (p[x] == 0.0) return -std::numeric_limits<double>::infinity();
    s += static_cast<double>(c[x]) * std::log2(p[x]);
  }
  return s;
}

inline void require_type_budget(std::size_t k, long long n) {
  // Number of types is C(n + k - 1, k - 1).
  double types = 1.0;
  for (std::size_t i = 1; i < k; ++i) types *= static_cast<double>(n + static_cast<long long>(i)) / static_cast<double>(i);
  if (types > 5e6) throw ResourceError("too many type classes to sum exactly");
}

}  // namespace detail

/// |T^n_delta| summed over type classes.
inline double typical_set_size(const TypicalSpec& spec) {
  detail::require_type_budget(spec.alphabet(), spec.n);
  double total = 0.0;
  detail::for_each_type(spec.alphabet(), spec.n, [&](const std::vector<long long>& c) {
    if (counts_typical(c, spec.p, spec.n, spec.delta)) total += std::exp2(detail::log2_multinomial(c));
  });
  return total;
}

/// Pr(x^n in T^n_delta) for i.i.d. x^n ~ p, summed over type classes.
inline double typical_probability(const TypicalSpec& spec) {
  detail::require_type_budget(spec.alphabet(), spec.n);
  double total = 0.0;
  detail::for_each_type(spec.alphabet(), spec.n, [&](const std::vector<long long>& c) {
    if (counts_typical(c, spec.p, spec.n, spec.delta)) {
      total += std::exp2(detail::log2_multinomial(c) + detail::log2_type_probability(c, spec.p));
    }
  });
  return total;
}

/// Fraction of `samples` i.i.d. sequences that are typical.
inline double sampled_typical_fraction(const TypicalSpec& spec, std::size_t samples, Rng& rng) {
  std::discrete_distribution<int> draw(spec.p.begin(), spec.p.end());
  std::size_t hits = 0;
  std::vector<long long> counts(spec.alphabet());
  for (std::size_t s = 0; s < samples; ++s) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < spec.n; ++i) ++counts[static_cast<std::size_t>(draw(rng))];
    if (counts_typical(counts, spec.p, spec.n, spec.delta)) ++hits;
  }
  return samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
}

/// Conditional typicality of y^n given x^n:
///   |N(x, y) - p(y|x) N(x)| <= n delta for all (x, y), zero-probability
/// pairs excluded.
inline bool is_conditionally_typical(const std::vector<int>& yn, const std::vector<int>& xn,
                                     const std::vector<std::vector<double>>& p_y_given_x, double delta) {
  if (yn.size() != xn.size()) throw ValidationError("sequences differ in length");
  const std::size_t kx = p_y_given_x.size();
  const double nn = static_cast<double>(xn.size());
  std::vector<long long> nx(kx, 0);
  std::vector<std::vector<long long>> nxy(kx);
  for (std::size_t x = 0; x < kx; ++x) nxy[x].assign(p_y_given_x[x].size(), 0);
  for (std::size_t i = 0; i < xn.size(); ++i) {
    const auto x = static_cast<std::size_t>(xn[i]);
    const auto y = static_cast<std::size_t>(yn[i]);
    if (x >= kx || y >= nxy[x].size()) throw ValidationError("symbol outside the alphabet");
    ++nx[x];
    ++nxy[x][y];
  }
  for (std::size_t x = 0; x < kx; ++x) {
    for (std::size_t y = 0; y < nxy[x].size(); ++y) {
      const double py = p_y_given_x[x][y];
      if (py == 0.0) {
        if (nxy[x][y] != 0) return false;
        continue;
      }
      if (std::abs(static_cast<double>(nxy[x][y]) - py * static_cast<double>(nx[x])) >
          nn * delta + kCountSlack * nn) {
        return false;
      }
    }
  }
  return true;
}

/// Constant of the conditional dimension bound
///   |T_{Y|X}(x^n)| <= 2^{n [S(B|X) + c delta]}  for typical x^n:
///   c = sum_{x, y} |log2 p(y|x)| + sum_x H(p(.|x)).
inline double conditional_typical_constant(const std::vector<std::vector<double>>& p_y_given_x) {
  double c = 0.0;
  for (const auto& row : p_y_given_x) {
    c += typical_constant(row);
    c += linalg::entropy_of_probabilities(row);
  }
  return c;
}

namespace detail {

/// Exact count or probability of the conditionally typical set: the
/// constraint factorizes over the symbols x, each a multinomial over y with
/// N(x) trials.
inline double conditional_sum(const std::vector<int>& xn, const std::vector<std::vector<double>>& p_y_given_x,
                              double delta, bool probability) {
  const std::size_t kx = p_y_given_x.size();
  const double nn = static_cast<double>(xn.size());
  std::vector<long long> nx(kx, 0);
  for (int x : xn) {
    if (x < 0 || static_cast<std::size_t>(x) >= kx) throw ValidationError("symbol outside the alphabet");
    ++nx[static_cast<std::size_t>(x)];
  }
  double log_total = 0.0;
  for (std::size_t x = 0; x < kx; ++x) {
    const auto& row = p_y_given_x[x];
    require_type_budget(row.size(), nx[x]);
    double acc = 0.0;
    for_each_type(row.size(), nx[x], [&](const std::vector<long long>& c) {
      for (std::size_t y = 0; y < row.size(); ++y) {
        if (row[y] == 0.0) {
          if (c[y] != 0) return;
          continue;
        }
        if (std::abs(static_cast<double>(c[y]) - row[y] * static_cast<double>(nx[x])) >
            nn * delta + kCountSlack * nn) {
          return;
        }
      }
      double l = log2_multinomial(c);
      if (probability) l += log2_type_probability(c, row);
      acc += std::exp2(l);
    });
    if (acc <= 0.0) return 0.0;
    log_total += std::log2(acc);
  }
  return std::exp2(log_total);
}

}  // namespace detail

inline double conditional_typical_size(const std::vector<int>& xn, const std::vector<std::vector<double>>& p_y_given_x,
                                       double delta) {
  return detail::conditional_sum(xn, p_y_given_x, delta, false);
}

inline double conditional_typical_probability(const std::vector<int>& xn,
                                              const std::vector<std::vector<double>>& p_y_given_x, double delta) {
  return detail::conditional_sum(xn, p_y_given_x, delta, true);
}

/// Projector sum over kept index sequences s of (x)_i |b_i(s_i)><b_i(s_i)|,
/// where b_i are the per-position orthonormal bases and w_i the matching
/// eigenvalues of the state being projected.
struct TypicalProjector {
  std::vector<Mat> bases;
  std::vector<RVec> weights;
  std::vector<std::vector<int>> sequences;

  std::size_t rank() const { return sequences.size(); }

  /// Tr(rho_1 (x) ... (x) rho_n  Pi), exact.
  double mass() const {
    double m = 0.0;
    for (const auto& s : sequences) {
      double w = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i) w *= weights[i](s[i]);
      m += w;
    }
    return m;
  }

  /// Dense matrix on the n-fold space (at most 2^12 dimensional).
  Mat dense() const {
    std::size_t dim = 1;
    for (const auto& b : bases) dim *= static_cast<std::size_t>(b.rows());
    if (dim > 4096) throw ResourceError("dense typical projector above 4096 dimensions");
    const auto d = static_cast<Eigen::Index>(dim);
    Mat out = Mat::Zero(d, d);
    for (const auto& s : sequences) {
      Vec v = Vec::Ones(1);
      for (std::size_t i = 0; i < s.size(); ++i) v = linalg::kron(v, Vec(bases[i].col(s[i])));
      out.noalias() += v * v.adjoint();
    }
    return out;
  }
};

namespace detail {

inline void require_projector_budget(int n, double dim) {
  if (static_cast<double>(n) * std::log2(dim) > 12.0 + 1e-12) {
    std::ostringstream os;
    os << "typical projector needs n log2 dim <= 12, got " << static_cast<double>(n) * std::log2(dim);
    throw ResourceError(os.str());
  }
}

/// Spectrum as a probability vector: eigenvalues below the entropy cutoff
/// become exact zeros, the rest are renormalized.
inline std::pair<Mat, std::vector<double>> spectral_distribution(const Mat& rho) {
  const linalg::Eigh e = linalg::eigh(rho);
  const auto d = e.values.size();
  Mat basis(e.vectors.rows(), d);
  std::vector<double> p(static_cast<std::size_t>(d));
  double s = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index j = d - 1 - i;  // descending
    basis.col(i) = e.vectors.col(j);
    const double v = e.values(j) > tol::kEntropyCutoff ? e.values(j) : 0.0;
    p[static_cast<std::size_t>(i)] = v;
    s += v;
  }
  for (double& v : p) v /= s;
  return {basis, p};
}

}  // namespace detail

/// Typical projector of rho^{(x) n}: eigenbasis sequences whose label counts
/// are typical for the spectrum.
inline TypicalProjector typical_projector(const DensityMatrix& rho, int n, double delta) {
  detail::require_projector_budget(n, static_cast<double>(rho.dim()));
  auto [basis, p] = detail::spectral_distribution(rho.matrix());
  const TypicalSpec spec(p, n, delta);
  TypicalProjector out;
  RVec w(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) w(static_cast<Eigen::Index>(i)) = p[i];
  out.bases.assign(static_cast<std::size_t>(n), basis);
  out.weights.assign(static_cast<std::size_t>(n), w);
  out.sequences = enumerate_typical(spec);
  return out;
}

/// Conditionally typical projector of sigma_{x_1} (x) ... (x) sigma_{x_n}.
inline TypicalProjector conditional_typical_projector(const std::vector<DensityMatrix>& sigma,
                                                      const std::vector<int>& xn, double delta) {
  if (sigma.empty()) throw ValidationError("no branch states");
  const std::size_t d = sigma.front().dim();
  for (const auto& s : sigma) {
    if (s.dim() != d) throw DimensionError("branch states differ in dimension");
  }
  const int n = static_cast<int>(xn.size());
  if (n < 1) throw ValidationError("empty conditioning sequence");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  detail::require_projector_budget(n, static_cast<double>(d));
  std::vector<Mat> basis;
  std::vector<std::vector<double>> cond;
  for (const auto& s : sigma) {
    auto [b, p] = detail::spectral_distribution(s.matrix());
    basis.push_back(std::move(b));
    cond.push_back(std::move(p));
  }
  TypicalProjector out;
  for (int x : xn) {
    if (x < 0 || static_cast<std::size_t>(x) >= sigma.size()) throw ValidationError("symbol outside the alphabet");
    const auto& p = cond[static_cast<std::size_t>(x)];
    RVec w(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) w(static_cast<Eigen::Index>(i)) = p[i];
    out.bases.push_back(basis[static_cast<std::size_t>(x)]);
    out.weights.push_back(w);
  }
  // Enumerate y^n position by position (lexicographic), keeping the
  // conditionally typical ones.
  std::vector<int> yn(static_cast<std::size_t>(n), 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == n) {
      if (is_conditionally_typical(yn, xn, cond, delta)) out.sequences.push_back(yn);
      return;
    }
    const auto& p = cond[static_cast<std::size_t>(xn[static_cast<std::size_t>(pos)])];
    for (std::size_t y = 0; y < d; ++y) {
      if (p[y] == 0.0) continue;
      yn[static_cast<std::size_t>(pos)] = static_cast<int>(y);
      rec(pos + 1);
    }
  };
  rec(0);
  return out;
}

/// The typical-projected source: classical strings restricted to the typical
/// set, each branch |omega_{c^m}> on (Q R R')^m conjugated by its conditional
/// typical projector on Q^m and renormalized.
struct ProjectedSource {
  std::vector<std::vector<int>> strings;
  std::vector<double> probs;     // renormalized over the kept strings
  std::vector<Vec> branches;     // unit vectors, position-major (Q R R')^m
  std::vector<double> branch_mass;  // Tr(Pi omega_{c^m}) before renormalizing
  double classical_mass = 0.0;      // Pr(c^m typical)
  /// sum over kept strings of p(c^m) Tr(Pi omega_{c^m}).
  double retained_mass = 0.0;
};

inline ProjectedSource project_and_renormalize(const ExtendedSource& src, int m, double delta) {
  const double cq = static_cast<double>(src.dim_c * src.dim_q);
  if (m < 1) throw ValidationError("m must be at least 1");
  if (static_cast<double>(m) * std::log2(cq) > 12.0 + 1e-12) {
    throw ResourceError("project_and_renormalize needs m log2(|C||Q|) <= 12");
  }
  const std::size_t block = src.dim_q * src.dim_r * src.dim_rp;
  if (static_cast<double>(m) * std::log2(static_cast<double>(block)) > 20.0 + 1e-12) {
    throw ResourceError("project_and_renormalize: branch vectors above 2^20 entries");
  }
  const auto dq = static_cast<Eigen::Index>(src.dim_q);
  const auto rest = static_cast<Eigen::Index>(src.dim_r * src.dim_rp);

  // Q marginals and their eigen-bases.
  std::vector<Mat> basis;
  std::vector<std::vector<double>> cond;
  for (std::size_t c = 0; c < src.dim_c; ++c) {
    Mat phi(dq, rest);
    for (Eigen::Index q = 0; q < dq; ++q) {
      for (Eigen::Index j = 0; j < rest; ++j) phi(q, j) = src.branches[c](q * rest + j);
    }
    auto [b, p] = detail::spectral_distribution(phi * phi.adjoint());
    basis.push_back(std::move(b));
    cond.push_back(std::move(p));
  }

  ProjectedSource out;
  const TypicalSpec spec(src.p, m, delta);
  for_each_typical(spec, [&](const std::vector<int>& cm) {
    double pc = 1.0;
    for (int c : cm) pc *= src.p[static_cast<std::size_t>(c)];
    out.classical_mass += pc;
    // Branch in the per-position eigenbasis of the Q marginal.
    Vec v = Vec::Ones(1);
    for (int c : cm) {
      const auto cc = static_cast<std::size_t>(c);
      Vec local = src.branches[cc];
      Mat loc(dq, rest);
      for (Eigen::Index q = 0; q < dq; ++q) loc.row(q) = local.segment(q * rest, rest).transpose();
      loc = basis[cc].adjoint() * loc;
      for (Eigen::Index q = 0; q < dq; ++q) local.segment(q * rest, rest) = loc.row(q).transpose();
      v = linalg::kron(v, local);
    }
    // Zero every component whose eigen-label string is not conditionally
    // typical.
    const auto total = v.size();
    std::vector<int> yn(cm.size());
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      if (v(idx) == cplx(0.0, 0.0)) continue;
      Eigen::Index r = idx;
      for (std::size_t i = cm.size(); i-- > 0;) {
        const Eigen::Index pos = r % static_cast<Eigen::Index>(block);
        r /= static_cast<Eigen::Index>(block);
        yn[i] = static_cast<int>(pos / rest);
      }
      if (!is_conditionally_typical(yn, cm, cond, delta)) v(idx) = 0.0;
    }
    const double mass = v.squaredNorm();
    // Back to the computational basis.
    Vec w = Vec::Ones(1);
    {
      Eigen::Index stride = total;
      Vec cur = v;
      for (std::size_t i = 0; i < cm.size(); ++i) {
        stride /= static_cast<Eigen::Index>(block);
        const Mat& b = basis[static_cast<std::size_t>(cm[i])];
        // Apply b on the Q index of position i.
        Vec nxt = Vec::Zero(total);
        const Eigen::Index outer = total / (stride * static_cast<Eigen::Index>(block));
        for (Eigen::Index o = 0; o < outer; ++o) {
          for (Eigen::Index q = 0; q < dq; ++q) {
            for (Eigen::Index q2 = 0; q2 < dq; ++q2) {
              const cplx c = b(q2, q);
              if (c == cplx(0.0, 0.0)) continue;
              for (Eigen::Index j = 0; j < rest * stride; ++j) {
                nxt(o * static_cast<Eigen::Index>(block) * stride + q2 * rest * stride + j) +=
                    c * cur(o * static_cast<Eigen::Index>(block) * stride + q * rest * stride + j);
              }
            }
          }
        }
        cur = std::move(nxt);
      }
      w = std::move(cur);
    }
    out.strings.push_back(cm);
    out.branch_mass.push_back(mass);
    out.probs.push_back(pc * mass);
    out.retained_mass += pc * mass;
    out.branches.push_back(mass > 0.0 ? Vec(w / std::sqrt(mass)) : w);
  });
  if (!(out.retained_mass > 0.0)) throw NumericalError("typical projection retained zero mass");
  for (double& p : out.probs) p /= out.retained_mass;
  return out;
}

}  // namespace qcap
