// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ibc {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw SchemaError(what + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw SchemaError("unknown field in " + what + ": " + key);
}

const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw SchemaError(what + " needs '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, double fallback, const std::string& what) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw SchemaError(what + "." + key + " must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key, int fallback, const std::string& what) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw SchemaError(what + "." + key + " must be an integer");
  return j.at(key).get<int>();
}

std::string text(const json& j, const char* key, const std::string& what) {
  const json& v = require(j, key, what);
  if (!v.is_string()) throw SchemaError(what + "." + key + " must be a string");
  return v.get<std::string>();
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SchemaError("complex numbers are written as [re, im]");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

SectorSpec sector_from_json(const json& j, std::size_t idx) {
  const std::string what = "sectors[" + std::to_string(idx) + "]";
  check_keys(j, {"name", "geometry", "length", "nodes", "spinor_dim", "A", "B"}, what);
  SectorSpec s;
  s.name = j.contains("name") ? text(j, "name", what) : "s" + std::to_string(idx);
  s.geometry = geometry_from_name(text(j, "geometry", what));
  if (s.geometry == Geometry::kPoint) {
    s.nodes = integer(j, "nodes", 1, what);
    s.spinor_dim = integer(j, "spinor_dim", 1, what);
    s.B = j.contains("B") ? matrix_from_json(j.at("B")) : CMatrix::Zero(s.spinor_dim, s.spinor_dim);
    if (j.contains("A") && !j.at("A").empty()) throw SchemaError(what + ": a point sector has no A");
    if (j.contains("B")) s.spinor_dim = static_cast<int>(s.B.rows());
    return s;
  }
  s.length = number(j, "length", 1.0, what);
  s.nodes = integer(j, "nodes", 0, what);
  const json& a = require(j, "A", what);
  if (!a.is_array()) throw SchemaError(what + ".A must be a list of matrices");
  for (const auto& m : a) s.A.push_back(matrix_from_json(m));
  if (s.A.empty()) throw SchemaError(what + ".A is empty");
  s.spinor_dim = static_cast<int>(s.A[0].rows());
  if (j.contains("spinor_dim") && integer(j, "spinor_dim", 0, what) != s.spinor_dim)
    throw SchemaError(what + ": spinor_dim disagrees with A");
  s.B = j.contains("B") ? matrix_from_json(j.at("B")) : CMatrix::Zero(s.spinor_dim, s.spinor_dim);
  return s;
}

json sector_to_json(const SectorSpec& s) {
  json j{{"name", s.name}, {"geometry", geometry_name(s.geometry)}, {"B", matrix_to_json(s.B)}};
  if (s.geometry == Geometry::kPoint) {
    j["spinor_dim"] = s.spinor_dim;
    return j;
  }
  j["length"] = s.length;
  j["nodes"] = s.nodes;
  json a = json::array();
  for (const auto& m : s.A) a.push_back(matrix_to_json(m));
  j["A"] = a;
  return j;
}

int sector_index(const json& j, const char* key, const ModelSpec& m, const std::string& what) {
  const int s = integer(j, key, -1, what);
  if (s < 0 || s >= static_cast<int>(m.sectors.size()))
    throw SchemaError(what + "." + key + " is not a sector index");
  return s;
}

HermitianSplit face_split(const json& j, const SectorSpec& s, Face f, const std::string& what) {
  const CMatrix an = s.normal_matrix(f);
  if (j.contains("An") && !approx_equal(matrix_from_json(j.at("An")), an, 1e-12))
    throw SchemaError(what + ": An does not match the inward normal matrix of the face");
  return hermitian_split(an);
}

CMatrix unitary_field(const json& j, const HermitianSplit& split, const std::string& what) {
  if (j.contains("L")) return matrix_from_json(j.at("L"));
  if (j.contains("subspace")) return unitary_from_subspace(subspace_from_json(j.at("subspace")), split);
  throw SchemaError(what + " needs 'L' or 'subspace'");
}

WallSpec wall_from_json(const json& j, const ModelSpec& m, std::size_t idx) {
  const std::string what = "walls[" + std::to_string(idx) + "]";
  check_keys(j, {"sector", "face", "An", "L", "subspace"}, what);
  WallSpec w;
  w.sector = sector_index(j, "sector", m, what);
  w.face = face_from_name(text(j, "face", what));
  const SectorSpec& s = m.sectors[static_cast<std::size_t>(w.sector)];
  const auto faces = faces_of(s.geometry);
  if (std::find(faces.begin(), faces.end(), w.face) == faces.end())
    throw SchemaError(what + ": sector has no face " + face_name(w.face));
  HermitianSplit split = face_split(j, s, w.face, what);
  CMatrix L = unitary_field(j, split, what);
  try {
    w.bc = make_reflecting_bc(std::move(split), std::move(L));
  } catch (const Error& e) {
    throw SchemaError(what + ": " + e.what());
  }
  return w;
}

CouplingSpec coupling_from_json(const json& j, const ModelSpec& m, std::size_t idx) {
  const std::string what = "couplings[" + std::to_string(idx) + "]";
  check_keys(j, {"source_sector", "source_face", "target_sector", "map", "nu_weight", "An", "L", "subspace", "N"},
             what);
  CouplingSpec c;
  c.source_sector = sector_index(j, "source_sector", m, what);
  c.target_sector = sector_index(j, "target_sector", m, what);
  c.source_face = face_from_name(text(j, "source_face", what));
  const std::string map = text(j, "map", what);
  if (map == "point")
    c.map = CouplingMap::kPoint;
  else if (map == "diagonal")
    c.map = CouplingMap::kDiagonal;
  else
    throw SchemaError(what + ".map must be 'point' or 'diagonal'");
  c.nu_weight = number(j, "nu_weight", 1.0, what);
  const SectorSpec& s = m.sectors[static_cast<std::size_t>(c.source_sector)];
  const auto faces = faces_of(s.geometry);
  if (std::find(faces.begin(), faces.end(), c.source_face) == faces.end())
    throw SchemaError(what + ": sector has no face " + face_name(c.source_face));
  c.split = face_split(j, s, c.source_face, what);
  c.L = unitary_field(j, c.split, what);
  c.N = matrix_from_json(require(j, "N", what));
  return c;
}

json coupling_to_json(const CouplingSpec& c) {
  return json{{"source_sector", c.source_sector},
              {"source_face", face_name(c.source_face)},
              {"target_sector", c.target_sector},
              {"map", coupling_map_name(c.map)},
              {"nu_weight", c.nu_weight},
              {"An", matrix_to_json(c.split.A)},
              {"L", matrix_to_json(c.L)},
              {"N", matrix_to_json(c.N)}};
}

InitialData initial_from_json(const json& j) {
  check_keys(j, {"points", "pulses"}, "initial");
  InitialData d;
  if (j.contains("points"))
    for (const auto& p : j.at("points")) {
      check_keys(p, {"sector", "value"}, "initial.points[]");
      d.points.push_back({integer(p, "sector", -1, "initial.points[]"), complex_from_json(require(p, "value", "point"))});
    }
  if (j.contains("pulses"))
    for (const auto& p : j.at("pulses")) {
      const std::string what = "initial.pulses[]";
      check_keys(p, {"sector", "center", "width", "wavenumber", "spinor"}, what);
      Pulse pulse;
      pulse.sector = integer(p, "sector", -1, what);
      const json& c = require(p, "center", what);
      if (c.is_number())
        pulse.center = {c.get<double>()};
      else if (c.is_array())
        for (const auto& x : c) pulse.center.push_back(x.get<double>());
      else
        throw SchemaError(what + ".center must be a number or a list");
      pulse.width = number(p, "width", 0.05, what);
      pulse.wavenumber = number(p, "wavenumber", 0.0, what);
      pulse.spinor = vector_from_json(require(p, "spinor", what));
      d.pulses.push_back(std::move(pulse));
    }
  return d;
}

json initial_to_json(const InitialData& d) {
  json points = json::array();
  for (const auto& p : d.points) points.push_back({{"sector", p.sector}, {"value", complex_to_json(p.value)}});
  json pulses = json::array();
  for (const auto& p : d.pulses)
    pulses.push_back({{"sector", p.sector},
                      {"center", p.center},
                      {"width", p.width},
                      {"wavenumber", p.wavenumber},
                      {"spinor", vector_to_json(p.spinor)}});
  return json{{"points", points}, {"pulses", pulses}};
}

}  // namespace

PointSourceParams point_source_params_from_json(const json& j) {
  const std::string what = "point_source params";
  check_keys(j, {"X", "nodes", "theta", "N", "m", "hbar", "override"}, what);
  PointSourceParams p;
  p.X = number(j, "X", p.X, what);
  p.nodes = integer(j, "nodes", p.nodes, what);
  p.theta = number(j, "theta", p.theta, what);
  if (j.contains("N")) p.N = vector_from_json(j.at("N"));
  p.m = number(j, "m", p.m, what);
  p.hbar = number(j, "hbar", p.hbar, what);
  if (j.contains("override")) p.override_conditions = j.at("override").get<bool>();
  return p;
}

LienertNickelParams lienert_nickel_params_from_json(const json& j) {
  const std::string what = "lienert_nickel params";
  check_keys(j, {"X", "nodes", "theta", "N", "m", "hbar"}, what);
  LienertNickelParams p;
  p.X = number(j, "X", p.X, what);
  p.nodes = integer(j, "nodes", p.nodes, what);
  p.theta = number(j, "theta", p.theta, what);
  if (j.contains("N")) p.N = matrix_from_json(j.at("N"));
  p.m = number(j, "m", p.m, what);
  p.hbar = number(j, "hbar", p.hbar, what);
  return p;
}

ModelSpec model_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("model must be an object");
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion)
    throw SchemaError("unsupported schema_version");
  ModelSpec m;
  try {
    if (j.contains("builtin")) {
      check_keys(j, {"schema_version", "builtin", "params", "initial"}, "model");
      const std::string name = text(j, "builtin", "model");
      const json params = j.contains("params") ? j.at("params") : json::object();
      if (name == "point_source")
        m = builtin_point_source(point_source_params_from_json(params));
      else if (name == "lienert_nickel")
        m = builtin_lienert_nickel(lienert_nickel_params_from_json(params));
      else
        throw SchemaError("unknown builtin model '" + name + "'");
    } else {
      check_keys(j, {"schema_version", "hbar", "sectors", "walls", "couplings", "initial"}, "model");
      m.hbar = number(j, "hbar", 1.0, "model");
      const json& sectors = require(j, "sectors", "model");
      if (!sectors.is_array()) throw SchemaError("model.sectors must be a list");
      for (std::size_t i = 0; i < sectors.size(); ++i) m.sectors.push_back(sector_from_json(sectors[i], i));
      if (j.contains("walls"))
        for (std::size_t i = 0; i < j.at("walls").size(); ++i) m.walls.push_back(wall_from_json(j.at("walls")[i], m, i));
      if (j.contains("couplings"))
        for (std::size_t i = 0; i < j.at("couplings").size(); ++i)
          m.couplings.push_back(coupling_from_json(j.at("couplings")[i], m, i));
    }
    if (j.contains("initial")) m.initial = initial_from_json(j.at("initial"));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model: ") + e.what());
  } catch (const PreconditionError& e) {
    throw SchemaError(e.what());
  }
  validate_model(m);
  return m;
}

json model_to_json(const ModelSpec& model) {
  json j{{"schema_version", kSchemaVersion}};
  if (!model.builtin.empty()) {
    j["builtin"] = model.builtin;
    j["params"] = model.builtin_params;
  } else {
    j["hbar"] = model.hbar;
    json sectors = json::array();
    for (const auto& s : model.sectors) sectors.push_back(sector_to_json(s));
    j["sectors"] = sectors;
    json walls = json::array();
    for (const auto& w : model.walls)
      walls.push_back({{"sector", w.sector},
                       {"face", face_name(w.face)},
                       {"An", matrix_to_json(w.bc.split.A)},
                       {"L", matrix_to_json(w.bc.L)}});
    j["walls"] = walls;
    json couplings = json::array();
    for (const auto& c : model.couplings) couplings.push_back(coupling_to_json(c));
    j["couplings"] = couplings;
  }
  j["initial"] = initial_to_json(model.initial);
  return j;
}

json state_to_json(const ModelSpec& model, const State& s, int step) {
  json sectors = json::array();
  for (std::size_t k = 0; k < model.sectors.size(); ++k) {
    const SectorSpec& sec = model.sectors[k];
    json coords = json::array();
    json psi = json::array();
    const int r = sec.spinor_dim;
    for (int node = 0; node < sec.node_count(); ++node) {
      coords.push_back(sec.coordinates(node));
      psi.push_back(vector_to_json(s.psi[k].segment(node * r, r)));
    }
    sectors.push_back({{"name", sec.name},
                       {"geometry", geometry_name(sec.geometry)},
                       {"spinor_dim", r},
                       {"coordinates", coords},
                       {"psi", psi}});
  }
  return json{{"step", step}, {"t", s.t}, {"sectors", sectors}};
}

State state_from_json(const ModelSpec& model, const json& j) {
  try {
    State s;
    s.t = j.at("t").get<double>();
    const json& sectors = j.at("sectors");
    if (sectors.size() != model.sectors.size()) throw SchemaError("snapshot has the wrong number of sectors");
    for (std::size_t k = 0; k < model.sectors.size(); ++k) {
      const SectorSpec& sec = model.sectors[k];
      const json& psi = sectors[k].at("psi");
      if (static_cast<int>(psi.size()) != sec.node_count()) throw SchemaError("snapshot grid does not match model");
      CVector v(sec.dof());
      for (int node = 0; node < sec.node_count(); ++node) {
        const CVector x = vector_from_json(psi[static_cast<std::size_t>(node)]);
        if (x.size() != sec.spinor_dim) throw SchemaError("snapshot spinor has wrong dimension");
        v.segment(node * sec.spinor_dim, sec.spinor_dim) = x;
      }
      s.psi.push_back(std::move(v));
    }
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("snapshot: ") + e.what());
  }
}

std::vector<std::string> series_header(const ModelSpec& model) {
  std::vector<std::string> h{"t", "norm_total"};
  for (std::size_t s = 0; s < model.sectors.size(); ++s) h.push_back("norm_s" + std::to_string(s));
  const auto faces = model_faces(model);
  for (std::size_t f = 0; f < faces.size(); ++f) h.push_back("flux_f" + std::to_string(f));
  for (std::size_t s = 0; s < model.sectors.size(); ++s) h.push_back("gain_s" + std::to_string(s));
  h.push_back("residual");
  return h;
}

std::vector<double> series_values(const AuditRow& row) {
  std::vector<double> v{row.t, row.norm_total};
  v.insert(v.end(), row.norms.begin(), row.norms.end());
  v.insert(v.end(), row.fluxes.begin(), row.fluxes.end());
  v.insert(v.end(), row.gains.begin(), row.gains.end());
  v.push_back(row.residual);
  return v;
}

std::string format_series_row(const std::vector<double>& values) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i > 0) out += ',';
    out += buf;
  }
  return out;
}

void write_series_csv(const std::filesystem::path& path, const ModelSpec& model, const AuditReport& report) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  const auto header = series_header(model);
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << '\n';
  for (const auto& row : report.rows) f << format_series_row(series_values(row)) << '\n';
  if (!f) throw Error("failed writing " + path.string());
}

SeriesTable read_series_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read " + path.string());
  SeriesTable t;
  std::string line;
  if (!std::getline(f, line)) throw SchemaError(path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw SchemaError("non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != t.header.size()) throw SchemaError("row width differs from header in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(1) << '\n';
  if (!f) throw Error("failed writing " + path.string());
}

}  // namespace ibc
