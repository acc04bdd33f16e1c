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

// Decomposes a source, traces the dephasing trade-off curve and intersects
// the two.  Usage: capacity_demo [state.json] [channel]

#include <cstdio>
#include <string>

#include "qcap/qcap.hpp"

int main(int argc, char** argv) {
  const std::string state = argc > 1 ? argv[1] : QCAP_SAMPLES_DIR "/bit_ebit.json";
  const std::string channel = argc > 2 ? argv[2] : "dephasing(0.1)";
  try {
    const qcap::DensityMatrix rho = qcap::io::load_state(state);
    const qcap::KIDecomposition kid = qcap::ki_decompose(rho);
    std::printf("blocks %zu  S(C) %.6f  S(Q|C) %.6f\n", kid.blocks.size(), kid.s_c, kid.s_q_given_c);
    for (const auto& b : kid.blocks) std::printf("  p %.6f  dim_Q %zu  dim_N %zu\n", b.p, b.dim_q, b.dim_n);

    qcap::OptimizerOptions opts;
    opts.restarts = 8;
    opts.seed = 1;
    const qcap::TradeoffCurve curve =
        qcap::compute_curve(qcap::io::load_channel(channel), 1, qcap::chebyshev_grid(11), opts);
    for (const auto& p : curve.points) std::printf("  r_q %.6f  r_c %.6f%s\n", p.r_q, p.r_c, p.synthetic ? "  *" : "");

    const qcap::CapacityReport rep = qcap::capacity_report(kid, curve);
    std::printf("C_G %.6f at (%.6f, %.6f)\n", rep.c_g, rep.intersection.r_q, rep.intersection.r_c);
    if (rep.copies_per_use) std::printf("copies per use %.6f\n", *rep.copies_per_use);
  } catch (const qcap::Error& e) {
    std::fprintf(stderr, "capacity_demo: %s\n", e.what());
    return 2;
  }
  return 0;
}
