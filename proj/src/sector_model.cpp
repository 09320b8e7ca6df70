// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/sector_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "ibc/bc_catalog.hpp"

namespace ibc {

std::string geometry_name(Geometry g) {
  switch (g) {
    case Geometry::kPoint:
      return "point";
    case Geometry::kInterval:
      return "interval";
    case Geometry::kWedge:
      return "wedge";
  }
  return "?";
}

Geometry geometry_from_name(const std::string& s) {
  if (s == "point") return Geometry::kPoint;
  if (s == "interval") return Geometry::kInterval;
  if (s == "wedge") return Geometry::kWedge;
  throw SchemaError("unknown geometry '" + s + "'");
}

std::string face_name(Face f) {
  switch (f) {
    case Face::kLeft:
      return "left";
    case Face::kRight:
      return "right";
    case Face::kZ1Zero:
      return "z1_zero";
    case Face::kDiagonal:
      return "diagonal";
    case Face::kZ2Max:
      return "z2_max";
  }
  return "?";
}

Face face_from_name(const std::string& s) {
  for (Face f : {Face::kLeft, Face::kRight, Face::kZ1Zero, Face::kDiagonal, Face::kZ2Max})
    if (face_name(f) == s) return f;
  throw SchemaError("unknown face '" + s + "'");
}

std::vector<Face> faces_of(Geometry g) {
  switch (g) {
    case Geometry::kPoint:
      return {};
    case Geometry::kInterval:
      return {Face::kLeft, Face::kRight};
    case Geometry::kWedge:
      return {Face::kZ1Zero, Face::kDiagonal, Face::kZ2Max};
  }
  return {};
}

std::string coupling_map_name(CouplingMap m) { return m == CouplingMap::kPoint ? "point" : "diagonal"; }

double SectorSpec::dx() const {
  if (geometry == Geometry::kPoint || nodes < 2) return 0.0;
  return length / (nodes - 1);
}

int SectorSpec::node_count() const {
  switch (geometry) {
    case Geometry::kPoint:
      return 1;
    case Geometry::kInterval:
      return nodes;
    case Geometry::kWedge:
      return nodes * (nodes + 1) / 2;
  }
  return 0;
}

std::vector<double> SectorSpec::weights() const {
  const double h = dx();
  std::vector<double> w(static_cast<std::size_t>(node_count()), 1.0);
  if (geometry == Geometry::kInterval) {
    for (auto& x : w) x = h;
    w.front() = w.back() = 0.5 * h;
  } else if (geometry == Geometry::kWedge) {
    const int n = nodes - 1;
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i) {
        const int edges = (i == 0) + (i == j) + (j == n);
        const double f = edges == 0 ? 1.0 : edges == 1 ? 0.5 : 0.25;
        w[static_cast<std::size_t>(wedge_index(i, j))] = f * h * h;
      }
  }
  return w;
}

std::vector<double> SectorSpec::coordinates(int node) const {
  if (geometry == Geometry::kPoint) return {};
  if (geometry == Geometry::kInterval) return {node * dx()};
  int j = 0;
  while ((j + 1) * (j + 2) / 2 <= node) ++j;
  const int i = node - j * (j + 1) / 2;
  return {i * dx(), j * dx()};
}

std::vector<FaceNode> SectorSpec::face_nodes(Face f) const {
  const double h = dx();
  const int n = nodes - 1;
  std::vector<FaceNode> out;
  switch (geometry) {
    case Geometry::kPoint:
      break;
    case Geometry::kInterval:
      if (f == Face::kLeft) out.push_back({0, 1.0});
      if (f == Face::kRight) out.push_back({n, 1.0});
      break;
    case Geometry::kWedge: {
      const double diag = std::numbers::sqrt2 * h;
      for (int k = 0; k <= n; ++k) {
        const double end = (k == 0 || k == n) ? 0.5 : 1.0;
        if (f == Face::kZ1Zero) out.push_back({wedge_index(0, k), end * h});
        if (f == Face::kDiagonal) out.push_back({wedge_index(k, k), end * diag});
        if (f == Face::kZ2Max) out.push_back({wedge_index(k, n), end * h});
      }
      break;
    }
  }
  if (out.empty()) throw SchemaError("face " + face_name(f) + " does not belong to a " + geometry_name(geometry));
  return out;
}

CMatrix SectorSpec::normal_matrix(Face f) const {
  switch (f) {
    case Face::kLeft:
      return A.at(0);
    case Face::kRight:
      return -A.at(0);
    case Face::kZ1Zero:
      return A.at(0);
    case Face::kDiagonal:
      return (A.at(1) - A.at(0)) / std::numbers::sqrt2;
    case Face::kZ2Max:
      return -A.at(1);
  }
  return {};
}

namespace {

void validate_sector(const SectorSpec& s, std::size_t idx) {
  const std::string where = "sector " + std::to_string(idx) + ": ";
  if (s.spinor_dim < 1) throw SchemaError(where + "spinor dimension must be positive");
  std::size_t expected_a = 0;
  if (s.geometry == Geometry::kInterval) expected_a = 1;
  if (s.geometry == Geometry::kWedge) expected_a = 2;
  if (s.A.size() != expected_a)
    throw SchemaError(where + geometry_name(s.geometry) + " needs " + std::to_string(expected_a) +
                      " coefficient matrices");
  if (s.geometry != Geometry::kPoint) {
    if (s.nodes < 3) throw SchemaError(where + "needs at least 3 nodes per direction");
    if (!(s.length > 0.0) || !std::isfinite(s.length)) throw SchemaError(where + "length must be positive");
  } else if (s.nodes != 1) {
    throw SchemaError(where + "a point sector has exactly one node");
  }
  for (const auto& a : s.A) {
    if (a.rows() != s.spinor_dim || a.cols() != s.spinor_dim)
      throw SchemaError(where + "coefficient matrices must be spinor_dim square");
    if (!all_finite(a) || hermiticity_defect(a) > 1e-12) throw SchemaError(where + "A^a must be Hermitian");
  }
  if (s.B.rows() != s.spinor_dim || s.B.cols() != s.spinor_dim)
    throw SchemaError(where + "B must be spinor_dim square");
  if (!all_finite(s.B) || hermiticity_defect(s.B) > 1e-12)
    throw SchemaError(where + "B must be Hermitian when the A^a are constant");
}

void require_sector(const ModelSpec& m, int s, const std::string& what) {
  if (s < 0 || s >= static_cast<int>(m.sectors.size()))
    throw SchemaError(what + " refers to missing sector " + std::to_string(s));
}

void require_face(const SectorSpec& s, Face f, const std::string& what) {
  const auto faces = faces_of(s.geometry);
  if (std::find(faces.begin(), faces.end(), f) == faces.end())
    throw SchemaError(what + ": sector '" + s.name + "' has no face " + face_name(f));
}

}  // namespace

std::vector<std::string> validate_model(const ModelSpec& model) {
  if (!(model.hbar > 0.0)) throw SchemaError("hbar must be positive");
  if (model.sectors.empty()) throw SchemaError("model has no sectors");
  for (std::size_t i = 0; i < model.sectors.size(); ++i) validate_sector(model.sectors[i], i);

  std::map<std::pair<int, Face>, int> cover;
  for (std::size_t w = 0; w < model.walls.size(); ++w) {
    const WallSpec& wall = model.walls[w];
    const std::string what = "wall " + std::to_string(w);
    require_sector(model, wall.sector, what);
    const SectorSpec& s = model.sectors[static_cast<std::size_t>(wall.sector)];
    require_face(s, wall.face, what);
    if (!approx_equal(wall.bc.split.A, s.normal_matrix(wall.face), 1e-12))
      throw SchemaError(what + ": An does not match the inward normal matrix of the face");
    ++cover[{wall.sector, wall.face}];
  }

  std::vector<std::string> warnings;
  for (std::size_t c = 0; c < model.couplings.size(); ++c) {
    const CouplingSpec& cp = model.couplings[c];
    const std::string what = "coupling " + std::to_string(c);
    require_sector(model, cp.source_sector, what);
    require_sector(model, cp.target_sector, what);
    if (cp.source_sector == cp.target_sector) throw SchemaError(what + ": source and target coincide");
    const SectorSpec& src = model.sectors[static_cast<std::size_t>(cp.source_sector)];
    const SectorSpec& dst = model.sectors[static_cast<std::size_t>(cp.target_sector)];
    require_face(src, cp.source_face, what);
    if (cp.map == CouplingMap::kPoint && dst.geometry != Geometry::kPoint)
      throw SchemaError(what + ": map 'point' needs a point target sector");
    if (cp.map == CouplingMap::kDiagonal) {
      if (src.geometry != Geometry::kWedge || cp.source_face != Face::kDiagonal || dst.geometry != Geometry::kInterval)
        throw SchemaError(what + ": map 'diagonal' couples a wedge diagonal to an interval");
      if (dst.nodes != src.nodes || std::abs(dst.length - src.length) > 1e-12 * src.length)
        throw SchemaError(what + ": wedge and interval grids differ");
    }
    if (cp.N.rows() != src.spinor_dim || cp.N.cols() != dst.spinor_dim)
      throw SchemaError(what + ": N must be " + std::to_string(src.spinor_dim) + "x" +
                        std::to_string(dst.spinor_dim));
    if (!approx_equal(cp.split.A, src.normal_matrix(cp.source_face), 1e-12))
      throw SchemaError(what + ": An does not match the inward normal matrix of the face");
    if (unitarity_defect(cp.L, cp.split) > kSubspaceTol) throw SchemaError(what + ": L is not unitary E+ -> E-");

    const auto target_w = dst.weights();
    for (const FaceNode& fn : src.face_nodes(cp.source_face)) {
      const int t = cp.map == CouplingMap::kPoint ? 0 : static_cast<int>(src.coordinates(fn.node)[0] / src.dx() + 0.5);
      const double nu = fn.lambda / target_w[static_cast<std::size_t>(t)];
      if (std::abs(nu - cp.nu_weight) > 1e-12 * std::max(1.0, nu))
        throw SchemaError(what + ": nu_weight " + std::to_string(cp.nu_weight) +
                          " contradicts the boundary measure (expected " + std::to_string(nu) + ")");
    }
    for (const auto& msg : check_simple_conditions(cp.split, cp.N).passed()
                               ? std::vector<std::string>{}
                               : simple_ibc_constraint(cp.split, cp.L, cp.N, model.hbar).warnings)
      warnings.push_back(what + ": " + msg);
    ++cover[{cp.source_sector, cp.source_face}];
  }

  for (std::size_t i = 0; i < model.sectors.size(); ++i)
    for (Face f : faces_of(model.sectors[i].geometry)) {
      const int n = cover[{static_cast<int>(i), f}];
      if (n == 0) throw SchemaError("face " + face_name(f) + " of sector " + std::to_string(i) + " is uncovered");
      if (n > 1) throw SchemaError("face " + face_name(f) + " of sector " + std::to_string(i) + " is covered twice");
    }

  for (const Pulse& p : model.initial.pulses) {
    require_sector(model, p.sector, "pulse");
    const SectorSpec& s = model.sectors[static_cast<std::size_t>(p.sector)];
    if (p.spinor.size() != s.spinor_dim) throw SchemaError("pulse spinor has the wrong dimension");
    if (p.center.size() != s.coordinates(0).size()) throw SchemaError("pulse center has the wrong dimension");
    if (!(p.width > 0.0)) throw SchemaError("pulse width must be positive");
  }
  for (const PointValue& pv : model.initial.points) {
    require_sector(model, pv.sector, "point value");
    if (model.sectors[static_cast<std::size_t>(pv.sector)].geometry != Geometry::kPoint)
      throw SchemaError("point values need a point sector");
  }
  return warnings;
}

State zero_state(const ModelSpec& model) {
  State s;
  for (const auto& sec : model.sectors) s.psi.push_back(CVector::Zero(sec.dof()));
  return s;
}

State initial_state(const ModelSpec& model) {
  State s = zero_state(model);
  for (const PointValue& pv : model.initial.points) s.psi[static_cast<std::size_t>(pv.sector)](0) += pv.value;
  for (const Pulse& p : model.initial.pulses) {
    const SectorSpec& sec = model.sectors[static_cast<std::size_t>(p.sector)];
    CVector& psi = s.psi[static_cast<std::size_t>(p.sector)];
    for (int node = 0; node < sec.node_count(); ++node) {
      const auto x = sec.coordinates(node);
      double r2 = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - p.center[a]) * (x[a] - p.center[a]);
      const double first = x.empty() ? 0.0 : x[0];
      const cplx amp = std::exp(-r2 / (2.0 * p.width * p.width)) * std::polar(1.0, p.wavenumber * first);
      psi.segment(node * sec.spinor_dim, sec.spinor_dim) += amp * p.spinor;
    }
  }
  return s;
}

namespace {

SectorSpec point_sector(const std::string& name) {
  SectorSpec s;
  s.name = name;
  s.geometry = Geometry::kPoint;
  s.nodes = 1;
  s.spinor_dim = 1;
  s.B = CMatrix::Zero(1, 1);
  return s;
}

SectorSpec interval_sector(const std::string& name, double X, int nodes, double m) {
  const SpinRep rep = one_d_rep();
  SectorSpec s;
  s.name = name;
  s.geometry = Geometry::kInterval;
  s.length = X;
  s.nodes = nodes;
  s.spinor_dim = 2;
  s.A = rep.alphas;
  s.B = m * rep.beta;
  return s;
}

ReflectingBC one_d_mit(double normal) {
  const double n[1] = {normal};
  return mit_bag(one_d_rep(), n);
}

}  // namespace

ModelSpec builtin_point_source(const PointSourceParams& p) {
  if (p.N.size() != 2) throw PreconditionError("point source: N must be a 2-spinor");
  ModelSpec model;
  model.hbar = p.hbar;
  model.sectors.push_back(point_sector("zero"));
  model.sectors.push_back(interval_sector("one", p.X, p.nodes, p.m));

  const ReflectingBC left = interval_wall(true, p.theta);
  CouplingSpec c;
  c.source_sector = 1;
  c.source_face = Face::kLeft;
  c.target_sector = 0;
  c.map = CouplingMap::kPoint;
  c.nu_weight = 1.0;
  c.split = left.split;
  c.L = left.L;
  c.N = p.N;
  const SimpleConditions cond = check_simple_conditions(c.split, c.N);
  if (!cond.passed() && !p.override_conditions)
    throw PreconditionError("point source: N^dag sigma_3 N = " + std::to_string(cond.coupling_flux_norm) +
                            " violates |N_1| = |N_2|");
  model.couplings.push_back(std::move(c));
  model.walls.push_back({1, Face::kRight, one_d_mit(-1.0)});

  model.initial.points.push_back({0, {0.0, 0.0}});
  Pulse pulse;
  pulse.sector = 1;
  pulse.center = {0.4 * p.X};
  pulse.width = 0.05 * p.X;
  pulse.spinor = CVector::Zero(2);
  pulse.spinor(1) = 1.0;
  model.initial.pulses.push_back(pulse);

  model.builtin = "point_source";
  model.builtin_params = json{{"X", p.X},       {"nodes", p.nodes}, {"theta", p.theta}, {"N", vector_to_json(p.N)},
                              {"m", p.m},       {"hbar", p.hbar},   {"override", p.override_conditions}};
  return model;
}

CMatrix lienert_nickel_b(const CMatrix& N, double theta, double hbar) {
  if (N.rows() != 4 || N.cols() != 2) throw DimensionError("Lienert-Nickel N must be 4x2");
  CMatrix b(1, 2);
  const cplx e = std::polar(1.0, theta);
  for (int k = 0; k < 2; ++k) b(0, k) = kI / (std::numbers::sqrt2 * hbar) * (N(1, k) + e * N(2, k));
  return b;
}

bool lienert_nickel_admissible(const CMatrix& N, double tol) {
  if (N.rows() != 4 || N.cols() != 2) return false;
  const double scale = std::max(1.0, max_abs(N));
  if (max_abs(N.row(0)) > tol * scale || max_abs(N.row(3)) > tol * scale) return false;
  const CMatrix gram = -N.row(1).adjoint() * N.row(1) + N.row(2).adjoint() * N.row(2);
  return max_abs(gram) <= tol * scale * scale;
}

ModelSpec builtin_lienert_nickel(const LienertNickelParams& p) {
  if (!lienert_nickel_admissible(p.N))
    throw PreconditionError("Lienert-Nickel: N needs vanishing first and last rows and -N2^dag N2 + N3^dag N3 = 0");
  const SpinRep rep = one_d_rep();
  ModelSpec model;
  model.hbar = p.hbar;
  model.sectors.push_back(interval_sector("one", p.X, p.nodes, p.m));

  SectorSpec wedge;
  wedge.name = "two";
  wedge.geometry = Geometry::kWedge;
  wedge.length = p.X;
  wedge.nodes = p.nodes;
  wedge.spinor_dim = 4;
  wedge.A = tensor_alphas(rep, 2);
  const CMatrix id = CMatrix::Identity(2, 2);
  wedge.B = p.m * (kron(rep.beta, id) + kron(id, rep.beta));
  model.sectors.push_back(wedge);

  const ReflectingBC left = one_d_mit(1.0);
  const ReflectingBC right = one_d_mit(-1.0);
  model.walls.push_back({0, Face::kLeft, left});
  model.walls.push_back({0, Face::kRight, right});

  const SectorSpec& w = model.sectors[1];
  const Subspace z1 = Subspace::span(kron(left.subspace().basis(), id));
  const Subspace z2 = Subspace::span(kron(id, right.subspace().basis()));
  model.walls.push_back({1, Face::kZ1Zero, reflecting_bc_from_subspace(hermitian_split(w.normal_matrix(Face::kZ1Zero)), z1)});
  model.walls.push_back({1, Face::kZ2Max, reflecting_bc_from_subspace(hermitian_split(w.normal_matrix(Face::kZ2Max)), z2)});

  const ReflectingBC diag = lienert_two_particle(p.theta);
  CouplingSpec c;
  c.source_sector = 1;
  c.source_face = Face::kDiagonal;
  c.target_sector = 0;
  c.map = CouplingMap::kDiagonal;
  c.nu_weight = std::numbers::sqrt2;
  c.split = diag.split;
  c.L = diag.L;
  c.N = p.N;
  model.couplings.push_back(std::move(c));

  Pulse pulse;
  pulse.sector = 0;
  pulse.center = {0.5 * p.X};
  pulse.width = 0.05 * p.X;
  pulse.spinor = CVector::Zero(2);
  pulse.spinor(0) = 1.0;
  model.initial.pulses.push_back(pulse);

  model.builtin = "lienert_nickel";
  model.builtin_params = json{{"X", p.X},   {"nodes", p.nodes}, {"theta", p.theta}, {"N", matrix_to_json(p.N)},
                              {"m", p.m},   {"hbar", p.hbar}};
  return model;
}

}  // namespace ibc
