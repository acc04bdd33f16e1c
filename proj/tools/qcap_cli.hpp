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

// qcap command-line front end. Exit codes: 0 success, 1 a verified property
// failed, 2 invalid input, 3 numerical failure.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcap/capacity.hpp"
#include "qcap/io.hpp"
#include "qcap/ki.hpp"
#include "qcap/tradeoff.hpp"
#include "qcap/verify.hpp"

namespace qcap::cli {

enum ExitCode : int { kOk = 0, kPropertyFailed = 1, kInvalid = 2, kNumerical = 3 };

namespace detail {

using io::Json;

struct Output {
  std::string path;
  std::ostream* out = nullptr;

  void emit(const std::string& text) const {
    if (path.empty()) {
      *out << text;
    } else {
      io::write_text(path, text);
    }
  }
};

inline Json property_json(const verify::PropertyResult& r) {
  Json j{{"name", r.name},
         {"instances", r.instances},
         {"violations", r.violations},
         {"worst_excess", r.worst_excess},
         {"ok", r.ok()}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

struct VerifyArgs {
  std::uint64_t seed = 0;
  std::size_t count = 200;
  // converse
  std::string source;
  std::vector<double> eps_grid{0.0, 0.05, 0.1, 0.2};
  int restarts = 4;
  std::string gadget = "both";
  // typicality
  std::vector<double> dist{0.3, 0.7};
  int n = 2000;
  double delta = 0.05;
  std::size_t samples = 10000;
};

inline Json verify_core(const VerifyArgs& a) {
  Json checks = Json::array();
  for (const auto& r : {verify::fuchs_van_de_graaf(a.count, a.seed), verify::fannes_audenaert(a.count, a.seed),
                        verify::almost_product(a.count, a.seed), verify::strong_subadditivity(a.count, a.seed),
                        verify::purify_round_trip(a.count, a.seed), verify::stinespring_consistency(a.count, a.seed),
                        verify::data_processing(a.count, a.seed), verify::trivial_x_reduction(a.count, a.seed),
                        verify::trivial_r_reduction(a.count, a.seed)}) {
    checks.push_back(property_json(r));
  }
  return checks;
}

inline Json verify_converse(const VerifyArgs& a) {
  std::vector<ExtendedSource> sources;
  if (a.source.empty()) {
    sources = verify::converse_test_sources(a.seed);
  } else {
    const DensityMatrix rho = io::load_state(a.source);
    const auto labels = rho.space().labels();
    if (labels == std::vector<std::string>{"C", "Q", "R"}) {
      sources.push_back(extend_source(rho));
    } else {
      sources.push_back(extend_source(ki_decompose(rho, derive_seed(a.seed, {0x6B1D}))));
    }
  }
  std::vector<Gadget> kinds;
  if (a.gadget == "Y" || a.gadget == "both") kinds.push_back(Gadget::kY);
  if (a.gadget == "W" || a.gadget == "both") kinds.push_back(Gadget::kW);
  GadgetOptions opts;
  opts.restarts = a.restarts;
  Json checks = Json::array();
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (Gadget k : kinds) {
      opts.seed = derive_seed(a.seed, {s, static_cast<std::uint64_t>(k)});
      const auto grid = estimate_grid(sources[s], k, a.eps_grid, opts);
      const verify::GridCheck g = verify::check_grid(sources[s], k, grid);
      Json j = io::to_json(io::GadgetGrid{k, grid});
      j["source"] = s;
      j["value_at_zero"] = g.at_zero;
      j["monotone"] = g.monotone;
      j["worst_infeasibility"] = g.worst_infeasibility;
      j["ok"] = g.at_zero <= 1e-3 && g.monotone && g.worst_infeasibility <= 1e-6;
      checks.push_back(std::move(j));
    }
  }
  return checks;
}

inline Json verify_typicality(const VerifyArgs& a) {
  const TypicalSpec spec(a.dist, a.n, a.delta);
  Json checks = Json::array();
  Rng rng(derive_seed(a.seed, {0x7E5}));
  const double frac = sampled_typical_fraction(spec, a.samples, rng);
  Json sampled{{"name", "sampled_typical_fraction"},
               {"n", a.n},
               {"delta", a.delta},
               {"samples", a.samples},
               {"fraction", frac},
               {"ok", frac >= 0.95}};
  try {
    sampled["exact_probability"] = typical_probability(spec);
  } catch (const ResourceError&) {
    sampled["exact_probability"] = nullptr;
  }
  checks.push_back(std::move(sampled));
  auto dists = verify::typicality_test_distributions();
  dists.push_back(a.dist);
  checks.push_back(property_json(verify::typical_dimension_bound(dists, {0.01, 0.05, 0.1, 0.2})));
  checks.push_back(property_json(
      verify::conditional_dimension_bound({0.4, 0.6}, {{0.5, 0.5}, {0.9, 0.1}}, {0.05, 0.1, 0.2}, 10)));
  return checks;
}

inline bool all_ok(const Json& checks) {
  for (const auto& c : checks) {
    if (!c.at("ok").get<bool>()) return false;
  }
  return true;
}

}  // namespace detail

/// Runs one command. Diagnostics go to `err`, results to `out` or --out.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using detail::Json;
  CLI::App app{"Generalized capacity of quantum channels for structured sources", "qcap"};
  app.require_subcommand(1);

  std::string state_path, channel_spec, ensemble_path, out_path, format;
  std::uint64_t seed = 0;
  int level = 1, restarts = 24, max_iters = 300;
  std::size_t grid = 21;

  auto* info = app.add_subcommand("info", "Entropies, coherent, Holevo and generalized information");
  info->add_option("--state", state_path, "State JSON file");
  info->add_option("--ensemble", ensemble_path, "Ensemble JSON file");
  info->add_option("--channel", channel_spec, "Named channel or ChannelSpec JSON file");
  info->add_option("--out", out_path, "Output file (default: stdout)");

  auto* kid = app.add_subcommand("kid", "Koashi-Imoto decomposition of a state on A' (x) R");
  kid->add_option("--state", state_path, "State JSON file; first subsystem is A'")->required();
  kid->add_option("--seed", seed, "Seed");
  kid->add_option("--out", out_path, "Output file (default: stdout)");

  auto* curve = app.add_subcommand("curve", "Trade-off curve of a channel");
  curve->add_option("--channel", channel_spec, "Named channel or ChannelSpec JSON file")->required();
  curve->add_option("--level", level, "Tensor power l")->check(CLI::Range(1, 12));
  curve->add_option("--grid", grid, "Number of Chebyshev weights")->check(CLI::Range(2, 1000));
  curve->add_option("--restarts", restarts, "Optimizer restarts per weight")->check(CLI::Range(1, 10000));
  curve->add_option("--max-iters", max_iters, "Ascent iterations per restart")->check(CLI::Range(1, 100000));
  curve->add_option("--seed", seed, "Seed")->required();
  curve->add_option("--format", format, "csv or json (default from --out, else csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  curve->add_option("--out", out_path, "Output file (default: stdout)");

  auto* cap = app.add_subcommand("capacity", "Generalized capacity of a channel for a source");
  cap->add_option("--state", state_path, "Source state JSON file; first subsystem is A'")->required();
  cap->add_option("--channel", channel_spec, "Named channel or ChannelSpec JSON file")->required();
  cap->add_option("--level", level, "Tensor power l")->check(CLI::Range(1, 12));
  cap->add_option("--grid", grid, "Number of Chebyshev weights")->check(CLI::Range(2, 1000));
  cap->add_option("--restarts", restarts, "Optimizer restarts per weight")->check(CLI::Range(1, 10000));
  cap->add_option("--max-iters", max_iters, "Ascent iterations per restart")->check(CLI::Range(1, 100000));
  cap->add_option("--seed", seed, "Seed")->required();
  cap->add_option("--out", out_path, "Output file (default: stdout)");

  detail::VerifyArgs va;
  std::string suite;
  auto* ver = app.add_subcommand("verify", "Seeded property suites");
  ver->add_option("suite", suite, "core, converse, typicality or all")
      ->required()
      ->check(CLI::IsMember({"core", "converse", "typicality", "all"}));
  ver->add_option("--seed", va.seed, "Seed")->required();
  ver->add_option("--count", va.count, "Instances per core property")->check(CLI::Range(1, 1000000));
  ver->add_option("--source", va.source, "Source state JSON file (converse)");
  ver->add_option("--eps-grid", va.eps_grid, "Ascending epsilon grid (converse)")->delimiter(',');
  ver->add_option("--restarts", va.restarts, "Restarts per grid point (converse)")->check(CLI::Range(1, 1000));
  ver->add_option("--gadget", va.gadget, "Y, W or both (converse)")->check(CLI::IsMember({"Y", "W", "both"}));
  ver->add_option("--dist", va.dist, "Distribution (typicality)")->delimiter(',');
  ver->add_option("--n", va.n, "Sequence length (typicality)")->check(CLI::Range(1, 1000000));
  ver->add_option("--delta", va.delta, "Typicality slack (typicality)");
  ver->add_option("--samples", va.samples, "Sampled sequences (typicality)");
  ver->add_option("--out", out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qcap: " << e.what() << "\n";
    return kInvalid;
  }

  const detail::Output sink{out_path, &out};
  try {
    if (*info) {
      Json j = Json::object();
      if (!state_path.empty()) {
        const DensityMatrix rho = io::load_state(state_path);
        Json marg = Json::object();
        for (const auto& l : rho.space().labels()) marg[l] = entropy(rho, {l});
        j["state"] = Json{{"entropy", entropy(rho)}, {"marginals", std::move(marg)}};
        if (!channel_spec.empty()) {
          const QuantumChannel n = io::load_channel(channel_spec);
          const auto a = rho.space()[0].label;
          j["state"]["coherent_information"] = coherent_information(partial_trace(rho, {a}), n);
        }
      }
      if (!ensemble_path.empty()) {
        if (channel_spec.empty()) throw ValidationError("--ensemble needs --channel");
        const CQEnsemble ens = io::load_ensemble(ensemble_path);
        const QuantumChannel n = io::load_channel(channel_spec);
        const GeneralizedInfo g = generalized_information(ens, n);
        j["ensemble"] = Json{{"I_G", g.i_g}, {"r_c", g.r_c}, {"r_q", g.r_q}, {"holevo", holevo_information(ens, n)}};
      }
      if (j.empty()) throw ValidationError("info needs --state or --ensemble");
      sink.emit(io::dump(j));
    } else if (*kid) {
      sink.emit(io::dump(io::to_json(ki_decompose(io::load_state(state_path), seed))));
    } else if (*curve) {
      OptimizerOptions o;
      o.restarts = restarts;
      o.max_iters = max_iters;
      o.seed = seed;
      const TradeoffCurve c = compute_curve(io::load_channel(channel_spec), level, chebyshev_grid(grid), o);
      if (format.empty()) format = out_path.size() >= 5 && out_path.ends_with(".json") ? "json" : "csv";
      sink.emit(format == "json" ? io::dump(io::to_json(c)) : io::curve_to_csv(c));
    } else if (*cap) {
      OptimizerOptions o;
      o.restarts = restarts;
      o.max_iters = max_iters;
      o.seed = seed;
      const CapacityReport r =
          generalized_capacity(io::load_state(state_path), io::load_channel(channel_spec), level, o, grid);
      sink.emit(io::dump(io::to_json(r)));
    } else if (*ver) {
      Json report{{"suite", suite}, {"seed", va.seed}};
      Json checks = Json::array();
      auto append = [&](const Json& more) {
        for (const auto& c : more) checks.push_back(c);
      };
      if (suite == "core" || suite == "all") append(detail::verify_core(va));
      if (suite == "converse" || suite == "all") append(detail::verify_converse(va));
      if (suite == "typicality" || suite == "all") append(detail::verify_typicality(va));
      const bool ok = detail::all_ok(checks);
      report["checks"] = std::move(checks);
      report["ok"] = ok;
      sink.emit(io::dump(report));
      if (!ok) {
        err << "qcap: verify " << suite << ": property violations\n";
        return kPropertyFailed;
      }
    }
  } catch (const ValidationError& e) {
    err << "qcap: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalError& e) {
    err << "qcap: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "qcap: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"qcap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qcap::cli
