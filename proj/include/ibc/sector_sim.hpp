// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "ibc/sector_model.hpp"

namespace ibc {

using SparseC = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

/// Linear constraint at one boundary node in unscaled values:
/// R psi(node) = M psi_target(target_node). M is empty for walls.
struct NodeConstraint {
  int sector = 0;
  int node = 0;
  Face face = Face::kLeft;
  double lambda = 0.0;
  CMatrix R;
  CMatrix M;
  int target_sector = -1;
  int target_node = -1;
};

/// Hamiltonian compressed to the constraint subspace V.
///
/// All grid vectors use scaled values sqrt(w) psi, so the discrete L2
/// inner product is the Euclidean one. V has orthonormal columns.
struct DiscreteHamiltonian {
  SparseC H;
  SparseC V;
  /// Difference operator and coupling on the full grid.
  SparseC H_raw;
  /// (H_raw + H_raw^dag) / 2, before compression.
  SparseC H_full;
  RVector sqrt_weights;
  std::vector<int> sector_offsets;
  std::vector<NodeConstraint> constraints;
  double hbar = 1.0;
  std::vector<std::string> warnings;

  int full_dim() const { return static_cast<int>(V.rows()); }
  int reduced_dim() const { return static_cast<int>(V.cols()); }
};

DiscreteHamiltonian assemble(const ModelSpec& model);

/// max |H - H^dag| over the stored entries.
double sparse_hermiticity_defect(const SparseC& h);

CVector scaled_vector(const DiscreteHamiltonian& h, const State& s);
State state_from_scaled(const ModelSpec& model, const DiscreteHamiltonian& h, const CVector& x, double t);
/// Coefficients in V of the orthogonal projection of s.
CVector reduce(const DiscreteHamiltonian& h, const State& s);
State expand(const ModelSpec& model, const DiscreteHamiltonian& h, const CVector& c, double t);

/// Cayley propagator (I + i dt H / 2hbar)^{-1} (I - i dt H / 2hbar) with a
/// single sparse LU factorization.
class CrankNicolson {
 public:
  CrankNicolson(const DiscreteHamiltonian& h, double dt);
  ~CrankNicolson();
  CrankNicolson(const CrankNicolson&) = delete;
  CrankNicolson& operator=(const CrankNicolson&) = delete;

  CVector step(const CVector& c) const;
  double dt() const { return dt_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double dt_;
};

/// One step on a state; the state is projected into V first.
State step_cn(const ModelSpec& model, const DiscreteHamiltonian& h, const State& psi, double dt);

/// Exact transport for massless models made of point sectors and intervals
/// whose A is diagonal with entries +-1. Steps with dt = dx.
State evolve_characteristics(const ModelSpec& model, const State& psi, double T);
/// Throws PreconditionError when the characteristics solver cannot run.
void require_characteristics(const ModelSpec& model);
double characteristics_dx(const ModelSpec& model);
/// Norm conserved exactly by the characteristics step: dx per node and
/// component, leaving out components that exit the grid on the next step.
double characteristic_norm(const ModelSpec& model, const State& s);

struct AuditRow {
  double t = 0.0;
  double norm_total = 0.0;
  std::vector<double> norms;
  std::vector<double> fluxes;
  std::vector<double> gains;
  double residual = 0.0;
};

struct FaceRef {
  int sector = 0;
  Face face = Face::kLeft;
  bool coupled = false;
};

struct AuditReport {
  std::vector<FaceRef> faces;
  std::vector<AuditRow> rows;
};

std::vector<FaceRef> model_faces(const ModelSpec& model);

/// Norms, inward face fluxes sum lambda psi^dag A^n psi, gains
/// (2/hbar) sum lambda Im(psi_target^dag N^dag psi) and the residual
/// sum(gains) + sum(fluxes of coupled faces).
AuditRow audit_state(const ModelSpec& model, const State& s);
AuditReport audit(const ModelSpec& model, const std::vector<State>& states);

/// Central differences of sector norms over the report's rows; rows at the
/// ends use one-sided differences.
std::vector<double> discrete_gain(const AuditReport& report, int sector);
/// Loss through a face: minus its inward flux.
std::vector<double> face_loss(const AuditReport& report, int face_index);

enum class Method { kCrankNicolson, kCharacteristics };
Method method_from_name(const std::string& s);
std::string method_name(Method m);

using StepObserver = std::function<void(int step, const State& state)>;

struct RunResult {
  State final_state;
  AuditReport report;
  double projection_defect = 0.0;
};

/// Evolves `steps` steps of size dt and audits every step (including step 0).
RunResult run(const ModelSpec& model, const State& psi0, int steps, double dt, Method method,
              const StepObserver& observer = {});

/// Discrete L2 distance with trapezoid weights summed over sectors.
double state_distance(const ModelSpec& model, const State& a, const State& b);
double state_norm(const ModelSpec& model, const State& a);

}  // namespace ibc
