// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ibc/ibc_core.hpp"
#include "ibc/lagrangian.hpp"

namespace ibc {

enum class Geometry { kPoint, kInterval, kWedge };

/// Boundary faces. Interval: left (x = 0), right (x = X).
/// Wedge {0 <= z1 <= z2 <= X}: z1_zero, diagonal (z1 = z2), z2_max.
enum class Face { kLeft, kRight, kZ1Zero, kDiagonal, kZ2Max };

std::string geometry_name(Geometry g);
Geometry geometry_from_name(const std::string& s);
std::string face_name(Face f);
Face face_from_name(const std::string& s);
std::vector<Face> faces_of(Geometry g);

/// One boundary node of a face with its quadrature weight.
struct FaceNode {
  int node = 0;
  double lambda = 0.0;
};

/// Constant-coefficient sector of configuration space.
///
/// `nodes` counts grid points per direction including both ends. Wedge
/// nodes (i, j) with i <= j are stored at index j (j + 1) / 2 + i.
struct SectorSpec {
  std::string name;
  Geometry geometry = Geometry::kPoint;
  double length = 1.0;
  int nodes = 1;
  int spinor_dim = 1;
  std::vector<CMatrix> A;
  CMatrix B;

  double dx() const;
  int node_count() const;
  int dof() const { return node_count() * spinor_dim; }
  /// Cell volumes of the trapezoid rule (1 for the point sector).
  std::vector<double> weights() const;
  /// Configuration-space coordinates of a node.
  std::vector<double> coordinates(int node) const;
  std::vector<FaceNode> face_nodes(Face f) const;
  /// Inward normal component n . A on a face.
  CMatrix normal_matrix(Face f) const;
  int wedge_index(int i, int j) const { return j * (j + 1) / 2 + i; }
};

enum class CouplingMap {
  /// Every boundary node maps to the single point of a point sector.
  kPoint,
  /// Wedge diagonal node (z, z) maps to interval node z.
  kDiagonal,
};

std::string coupling_map_name(CouplingMap m);

/// Interior-boundary coupling of one source face to a target sector.
struct CouplingSpec {
  int source_sector = 0;
  Face source_face = Face::kLeft;
  int target_sector = 0;
  CouplingMap map = CouplingMap::kPoint;
  double nu_weight = 1.0;
  HermitianSplit split;
  CMatrix L;
  /// E_target -> E_source
  CMatrix N;
};

struct WallSpec {
  int sector = 0;
  Face face = Face::kLeft;
  ReflectingBC bc;
};

struct Pulse {
  int sector = 0;
  std::vector<double> center;
  double width = 0.05;
  double wavenumber = 0.0;
  CVector spinor;
};

struct PointValue {
  int sector = 0;
  cplx value{0.0, 0.0};
};

struct InitialData {
  std::vector<PointValue> points;
  std::vector<Pulse> pulses;
};

struct ModelSpec {
  std::vector<SectorSpec> sectors;
  std::vector<CouplingSpec> couplings;
  std::vector<WallSpec> walls;
  double hbar = 1.0;
  InitialData initial;
  /// Set by the builders; recorded so that model files stay readable.
  std::string builtin;
  json builtin_params;
};

/// Spinor values per sector; psi[s] has node_count * spinor_dim entries,
/// node-major.
struct State {
  double t = 0.0;
  std::vector<CVector> psi;
};

/// Throws SchemaError or PreconditionError on the first violated rule. Returns
/// the warnings of couplings whose N breaks the simple-IBC conditions.
std::vector<std::string> validate_model(const ModelSpec& model);

State zero_state(const ModelSpec& model);
/// Sum of Gaussian pulses plus point values.
State initial_state(const ModelSpec& model);

struct PointSourceParams {
  double X = 1.0;
  int nodes = 101;
  double theta = 0.0;
  CVector N = CVector::Zero(2);
  double m = 0.0;
  double hbar = 1.0;
  /// Accept N with N^dag sigma_3 N != 0.
  bool override_conditions = false;
};

/// Sector 0 point {0}, sector 1 interval [0, X]: IBC at x = 0 built from the
/// theta wall and N, MIT wall at x = X. Default initial data: empty point
/// sector and a left-moving pulse centred at 0.4 X.
ModelSpec builtin_point_source(const PointSourceParams& p);

struct LienertNickelParams {
  double X = 1.0;
  int nodes = 101;
  double theta = 0.0;
  /// 4 x 2
  CMatrix N = CMatrix::Zero(4, 2);
  double m = 0.0;
  double hbar = 1.0;
};

/// Sector 0 interval [0, X] with MIT walls, sector 1 wedge with product MIT
/// walls on z1 = 0 and z2 = X, and the diagonal coupled to sector 0.
ModelSpec builtin_lienert_nickel(const LienertNickelParams& p);

/// Closed form of the 1 x 2 matrix B with psi_{-+} - e^{i theta} psi_{+-} = B psi(z).
CMatrix lienert_nickel_b(const CMatrix& N, double theta, double hbar);

/// Rows 1 and 4 of N vanish and N_2 and N_3 have equal Gram matrices.
bool lienert_nickel_admissible(const CMatrix& N, double tol = 1e-10);

}  // namespace ibc
