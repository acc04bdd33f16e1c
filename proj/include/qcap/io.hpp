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

// JSON and CSV encodings. Complex scalars are [re, im] pairs, matrices are
// row-major nested arrays.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcap/capacity.hpp"
#include "qcap/converse.hpp"
#include "qcap/ki.hpp"
#include "qcap/tradeoff.hpp"

namespace qcap::io {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError("schema: " + (path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(path, "missing field '" + key + "'");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

inline std::size_t positive_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) schema_error(path, "expected a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

inline bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected a boolean");
  return j.get<bool>();
}

}  // namespace detail

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const Json& j, const std::string& path = "") {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    detail::schema_error(path, "expected a complex scalar [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat matrix_from_json(const Json& j, const std::string& path = "") {
  if (!j.is_array() || j.empty()) detail::schema_error(path, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) detail::schema_error(path + "/0", "expected a non-empty row");
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != cols) detail::schema_error(rp, "rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          complex_from_json(j[i][k], rp + "/" + std::to_string(k));
    }
  }
  return m;
}

inline Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline Vec vector_from_json(const Json& j, const std::string& path = "") {
  if (!j.is_array() || j.empty()) detail::schema_error(path, "expected a non-empty array of complex scalars");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], path + "/" + std::to_string(i));
  }
  return v;
}

// ---- states and channels ----

inline Json space_to_json(const TensorSpace& s) {
  Json dims = Json::array();
  for (const auto& p : s.parts()) dims.push_back(Json::array({p.label, p.dim}));
  return dims;
}

inline TensorSpace space_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) detail::schema_error(path, "expected a non-empty array of [label, dim]");
  std::vector<Subsystem> parts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ip = path + "/" + std::to_string(i);
    const Json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_string()) detail::schema_error(ip, "expected [label, dim]");
    parts.push_back({e[0].get<std::string>(), detail::positive_int(e[1], ip + "/1")});
  }
  return TensorSpace(std::move(parts));
}

inline Json to_json(const DensityMatrix& rho) {
  return Json{{"dims", space_to_json(rho.space())}, {"matrix", matrix_to_json(rho.matrix())}};
}

inline DensityMatrix state_from_json(const Json& j) {
  const TensorSpace space = space_from_json(detail::field(j, "dims", ""), "/dims");
  const Mat m = matrix_from_json(detail::field(j, "matrix", ""), "/matrix");
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != space.dim()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << " x " << m.cols() << " but dims give " << space.dim();
    detail::schema_error("/matrix", os.str());
  }
  return DensityMatrix(space, m);
}

inline Json to_json(const QuantumChannel& n) {
  Json kraus = Json::array();
  for (const auto& k : n.kraus()) kraus.push_back(matrix_to_json(k));
  return Json{{"dim_in", n.dim_in()}, {"dim_out", n.dim_out()}, {"kraus", std::move(kraus)}};
}

/// A ChannelSpec object or a named channel string such as "dephasing(0.1)".
inline QuantumChannel channel_from_json(const Json& j) {
  if (j.is_string()) return channels::parse(j.get<std::string>());
  const std::size_t din = detail::positive_int(detail::field(j, "dim_in", ""), "/dim_in");
  const std::size_t dout = detail::positive_int(detail::field(j, "dim_out", ""), "/dim_out");
  const Json& ks = detail::field(j, "kraus", "");
  if (!ks.is_array() || ks.empty()) detail::schema_error("/kraus", "expected a non-empty array of matrices");
  std::vector<Mat> kraus;
  for (std::size_t i = 0; i < ks.size(); ++i) kraus.push_back(matrix_from_json(ks[i], "/kraus/" + std::to_string(i)));
  return QuantumChannel(din, dout, std::move(kraus));
}

// ---- ensembles ----

inline Json to_json(const CQEnsemble& e) {
  Json entries = Json::array();
  for (const auto& x : e.entries()) entries.push_back(Json{{"p", x.p}, {"vector", vector_to_json(x.vector)}});
  return Json{{"dim_A", e.dim_a()}, {"dim_R", e.dim_r()}, {"entries", std::move(entries)}};
}

inline CQEnsemble ensemble_from_json(const Json& j, const std::string& path = "") {
  const std::size_t da = detail::positive_int(detail::field(j, "dim_A", path), path + "/dim_A");
  const std::size_t dr = detail::positive_int(detail::field(j, "dim_R", path), path + "/dim_R");
  const Json& es = detail::field(j, "entries", path);
  if (!es.is_array() || es.empty()) detail::schema_error(path + "/entries", "expected a non-empty array");
  std::vector<CQEnsemble::Entry> entries;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string ep = path + "/entries/" + std::to_string(i);
    entries.push_back({detail::number(detail::field(es[i], "p", ep), ep + "/p"),
                       vector_from_json(detail::field(es[i], "vector", ep), ep + "/vector")});
  }
  return CQEnsemble(da, dr, std::move(entries));
}

// ---- KI decomposition ----

inline Json to_json(const KIDecomposition& kid) {
  Json blocks = Json::array();
  for (const auto& b : kid.blocks) {
    blocks.push_back(Json{{"p", b.p},
                          {"dim_Q", b.dim_q},
                          {"dim_N", b.dim_n},
                          {"offset", b.offset},
                          {"mu", to_json(b.mu)},
                          {"omega", to_json(b.omega)}});
  }
  return Json{{"blocks", std::move(blocks)},
              {"S_C", kid.s_c},
              {"S_Q_given_C", kid.s_q_given_c},
              {"S_CQ", kid.s_cq},
              {"dim_A", kid.dim_a},
              {"dim_R", kid.dim_r},
              {"dead_dims", kid.dead_dims},
              {"reconstruction_error", kid.reconstruction_error},
              {"u_ki", matrix_to_json(kid.u_ki)}};
}

inline KIDecomposition kid_from_json(const Json& j) {
  KIDecomposition kid;
  const Json& bs = detail::field(j, "blocks", "");
  if (!bs.is_array() || bs.empty()) detail::schema_error("/blocks", "expected a non-empty array");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const std::string bp = "/blocks/" + std::to_string(i);
    KIBlock b;
    b.p = detail::number(detail::field(bs[i], "p", bp), bp + "/p");
    b.dim_q = detail::positive_int(detail::field(bs[i], "dim_Q", bp), bp + "/dim_Q");
    b.dim_n = detail::positive_int(detail::field(bs[i], "dim_N", bp), bp + "/dim_N");
    const Json& off = detail::field(bs[i], "offset", bp);
    if (!off.is_number_integer() || off.get<long long>() < 0) detail::schema_error(bp + "/offset", "expected a count");
    b.offset = static_cast<std::size_t>(off.get<long long>());
    b.mu = state_from_json(detail::field(bs[i], "mu", bp));
    b.omega = state_from_json(detail::field(bs[i], "omega", bp));
    kid.blocks.push_back(std::move(b));
  }
  kid.s_c = detail::number(detail::field(j, "S_C", ""), "/S_C");
  kid.s_q_given_c = detail::number(detail::field(j, "S_Q_given_C", ""), "/S_Q_given_C");
  kid.s_cq = detail::number(detail::field(j, "S_CQ", ""), "/S_CQ");
  kid.dim_a = detail::positive_int(detail::field(j, "dim_A", ""), "/dim_A");
  kid.dim_r = detail::positive_int(detail::field(j, "dim_R", ""), "/dim_R");
  const Json& dead = detail::field(j, "dead_dims", "");
  if (!dead.is_number_integer() || dead.get<long long>() < 0) detail::schema_error("/dead_dims", "expected a count");
  kid.dead_dims = static_cast<std::size_t>(dead.get<long long>());
  kid.reconstruction_error = detail::number(detail::field(j, "reconstruction_error", ""), "/reconstruction_error");
  kid.u_ki = matrix_from_json(detail::field(j, "u_ki", ""), "/u_ki");
  return kid;
}

// ---- trade-off curves ----

/// Shortest round-trip decimal, independent of the locale.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Envelope vertices as CSV: header "t,r_q,r_c,synthetic".
inline std::string curve_to_csv(const TradeoffCurve& c) {
  std::string out = "t,r_q,r_c,synthetic\n";
  for (const auto& p : c.points) {
    out += format_double(p.t) + "," + format_double(p.r_q) + "," + format_double(p.r_c) + "," +
           (p.synthetic ? "true" : "false") + "\n";
  }
  return out;
}

inline Json to_json(const TradeoffPoint& p) {
  return Json{{"t", p.t},
              {"r_q", p.r_q},
              {"r_c", p.r_c},
              {"synthetic", p.synthetic},
              {"witness", p.witness ? to_json(*p.witness) : Json(nullptr)}};
}

inline TradeoffPoint point_from_json(const Json& j, const std::string& path) {
  TradeoffPoint p;
  p.t = detail::number(detail::field(j, "t", path), path + "/t");
  p.r_q = detail::number(detail::field(j, "r_q", path), path + "/r_q");
  p.r_c = detail::number(detail::field(j, "r_c", path), path + "/r_c");
  p.synthetic = detail::boolean(detail::field(j, "synthetic", path), path + "/synthetic");
  const Json& w = detail::field(j, "witness", path);
  if (!w.is_null()) p.witness = ensemble_from_json(w, path + "/witness");
  return p;
}

inline Json to_json(const TradeoffCurve& c) {
  Json points = Json::array(), samples = Json::array();
  for (const auto& p : c.points) points.push_back(to_json(p));
  for (const auto& p : c.samples) samples.push_back(to_json(p));
  return Json{{"level", c.level},
              {"c_q_endpoint", c.c_q_endpoint},
              {"c_c_endpoint", c.c_c_endpoint},
              {"optimizer_fallback", c.fallback},
              {"points", std::move(points)},
              {"samples", std::move(samples)}};
}

inline TradeoffCurve curve_from_json(const Json& j) {
  TradeoffCurve c;
  c.level = static_cast<int>(detail::positive_int(detail::field(j, "level", ""), "/level"));
  c.c_q_endpoint = detail::number(detail::field(j, "c_q_endpoint", ""), "/c_q_endpoint");
  c.c_c_endpoint = detail::number(detail::field(j, "c_c_endpoint", ""), "/c_c_endpoint");
  c.fallback = detail::boolean(detail::field(j, "optimizer_fallback", ""), "/optimizer_fallback");
  for (const char* key : {"points", "samples"}) {
    const Json& arr = detail::field(j, key, "");
    if (!arr.is_array()) detail::schema_error(std::string("/") + key, "expected an array");
    auto& dst = std::string(key) == "points" ? c.points : c.samples;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      dst.push_back(point_from_json(arr[i], std::string("/") + key + "/" + std::to_string(i)));
    }
  }
  if (c.points.empty()) detail::schema_error("/points", "expected at least one point");
  return c;
}

// ---- capacity reports ----

inline Json to_json(const Slope& s) {
  const char* kind = s.finite() ? "finite" : s.infinite() ? "infinite" : "degenerate";
  return Json{{"kind", kind}, {"value", s.finite() ? Json(s.value) : Json(nullptr)}};
}

inline Slope slope_from_json(const Json& j, const std::string& path) {
  const Json& k = detail::field(j, "kind", path);
  const std::string kind = k.is_string() ? k.get<std::string>() : "";
  if (kind == "finite") return {Slope::Kind::kFinite, detail::number(detail::field(j, "value", path), path + "/value")};
  if (kind == "infinite") return {Slope::Kind::kInfinite, std::numeric_limits<double>::infinity()};
  if (kind == "degenerate") return {Slope::Kind::kDegenerate, 0.0};
  detail::schema_error(path + "/kind", "expected finite, infinite or degenerate");
}

inline Json to_json(const CapacityReport& r) {
  return Json{{"slope", to_json(r.slope)},
              {"intersection", Json{{"r_q", r.intersection.r_q}, {"r_c", r.intersection.r_c}}},
              {"c_g", r.c_g},
              {"copies_per_use", r.copies_per_use ? Json(*r.copies_per_use) : Json(nullptr)},
              {"level", r.level},
              {"S_C", r.s_c},
              {"S_Q_given_C", r.s_q_given_c},
              {"S_CQ", r.s_cq},
              {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
              {"optimizer_fallback", r.optimizer_fallback}};
}

inline CapacityReport report_from_json(const Json& j) {
  CapacityReport r;
  r.slope = slope_from_json(detail::field(j, "slope", ""), "/slope");
  const Json& in = detail::field(j, "intersection", "");
  r.intersection.r_q = detail::number(detail::field(in, "r_q", "/intersection"), "/intersection/r_q");
  r.intersection.r_c = detail::number(detail::field(in, "r_c", "/intersection"), "/intersection/r_c");
  r.c_g = detail::number(detail::field(j, "c_g", ""), "/c_g");
  const Json& cpu = detail::field(j, "copies_per_use", "");
  if (!cpu.is_null()) r.copies_per_use = detail::number(cpu, "/copies_per_use");
  r.level = static_cast<int>(detail::positive_int(detail::field(j, "level", ""), "/level"));
  r.s_c = detail::number(detail::field(j, "S_C", ""), "/S_C");
  r.s_q_given_c = detail::number(detail::field(j, "S_Q_given_C", ""), "/S_Q_given_C");
  r.s_cq = detail::number(detail::field(j, "S_CQ", ""), "/S_CQ");
  const Json& w = detail::field(j, "witness", "");
  if (!w.is_null()) r.witness = ensemble_from_json(w, "/witness");
  r.optimizer_fallback = detail::boolean(detail::field(j, "optimizer_fallback", ""), "/optimizer_fallback");
  return r;
}

// ---- converse gadget grids ----

struct GadgetGrid {
  Gadget kind = Gadget::kY;
  std::vector<GadgetEstimate> estimates;
};

inline Json to_json(const GadgetGrid& g) {
  Json grid = Json::array();
  for (const auto& e : g.estimates) {
    grid.push_back(Json{{"epsilon", e.epsilon},
                        {"value", e.value},
                        {"achieved_fidelity", e.achieved_fidelity},
                        {"witness", matrix_to_json(e.witness)}});
  }
  return Json{{"gadget", g.kind == Gadget::kY ? "Y" : "W"}, {"grid", std::move(grid)}};
}

inline GadgetGrid gadget_grid_from_json(const Json& j) {
  GadgetGrid g;
  const Json& k = detail::field(j, "gadget", "");
  if (k == "Y") {
    g.kind = Gadget::kY;
  } else if (k == "W") {
    g.kind = Gadget::kW;
  } else {
    detail::schema_error("/gadget", "expected \"Y\" or \"W\"");
  }
  const Json& grid = detail::field(j, "grid", "");
  if (!grid.is_array()) detail::schema_error("/grid", "expected an array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::string p = "/grid/" + std::to_string(i);
    GadgetEstimate e;
    e.epsilon = detail::number(detail::field(grid[i], "epsilon", p), p + "/epsilon");
    e.value = detail::number(detail::field(grid[i], "value", p), p + "/value");
    e.achieved_fidelity = detail::number(detail::field(grid[i], "achieved_fidelity", p), p + "/achieved_fidelity");
    e.witness = matrix_from_json(detail::field(grid[i], "witness", p), p + "/witness");
    g.estimates.push_back(std::move(e));
  }
  return g;
}

// ---- files ----

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("schema: " + origin + ": malformed JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Json read_json_file(const std::string& path) { return parse_json(read_file(path), path); }

inline DensityMatrix load_state(const std::string& path) { return state_from_json(read_json_file(path)); }

/// A named channel string, or the path of a ChannelSpec JSON file.
inline QuantumChannel load_channel(const std::string& spec) {
  if (spec.find('(') != std::string::npos) return channels::parse(spec);
  if (std::filesystem::exists(spec)) return channel_from_json(read_json_file(spec));
  throw ValidationError("channel '" + spec + "' is neither a named channel nor a file");
}

inline CQEnsemble load_ensemble(const std::string& path) { return ensemble_from_json(read_json_file(path)); }

/// Pretty JSON with a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

}  // namespace qcap::io
