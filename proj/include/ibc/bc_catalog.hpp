// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>

#include "ibc/lagrangian.hpp"
#include "ibc/spin_algebra.hpp"

namespace ibc {

/// Reflecting BC with subspace ker(gamma^n - i), gamma^n = n . (gamma^1, ...).
/// Works for any representation that carries gamma matrices.
ReflectingBC mit_bag(const SpinRep& rep, std::span<const double> n);

/// Local conditions on [0, 1] for the 1d Dirac equation with components
/// (psi_-, psi_+): psi_+(0) = e^{i theta} psi_-(0), psi_+(1) = e^{i phi} psi_-(1).
/// Boundary matrices are taken w.r.t. the inward normal: sigma_3 at 0 and
/// -sigma_3 at 1.
std::pair<ReflectingBC, ReflectingBC> interval_conditions(double theta, double phi);
/// One wall of the above; left = true gives the x = 0 condition.
ReflectingBC interval_wall(bool left, double phase);

/// Self-adjoint 2x2 matrix T = [[a, b], [conj(b), c]].
struct AhwT {
  double a = 0.0;
  cplx b{0.0, 0.0};
  double c = 0.0;

  CMatrix matrix() const;
};

/// (1 + ia)(1 + ic) + |b|^2; never zero.
cplx ahw_denominator(const AhwT& t);
/// 2x2 unitary mapping (psi_2, psi_3) to (psi_1, psi_4) in the Weyl
/// representation with n = e_3.
CMatrix ahw_compact_l(const AhwT& t);
ReflectingBC ahw_from_t(const AhwT& t);

/// Angles of L = [[cos z e^{i eta}, sin z e^{i kappa}],
///                [sin z e^{i tau}, -cos z e^{i(kappa + tau - eta)}]].
/// Phases that are unconstrained at zeta in {0, pi/2} are set to 0.
struct UnitaryAngles {
  double zeta = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
};
UnitaryAngles decompose_unitary2(const CMatrix& compact_l);
CMatrix compose_unitary2(const UnitaryAngles& angles);

inline constexpr double kNoTTol = 1e-9;

struct AhwInverse {
  cplx n_prime;
  /// Empty when |n_prime| <= kNoTTol: L lies outside the T-family.
  std::optional<AhwT> t;
  UnitaryAngles angles;
};
/// Requires bc over the split of the Weyl alpha^3.
AhwInverse ahw_to_t(const ReflectingBC& bc);

/// Conversions between ambient 4x4 L (supported E+ -> E- of Weyl alpha^3)
/// and the 2x2 form acting (psi_2, psi_3) -> (psi_1, psi_4).
CMatrix compact_from_ambient_l(const CMatrix& L);
CMatrix ambient_from_compact_l(const CMatrix& compact);
HermitianSplit weyl_alpha3_split();

/// P- psi = e^{i eta} P+ psi over the split of diag(1, -1).
ReflectingBC benguria(double eta);

/// psi_{-+} - e^{i theta} psi_{+-} = 0 on the diagonal of the two-particle
/// 1d configuration space, A^n = diag(0, -sqrt2, sqrt2, 0).
ReflectingBC lienert_two_particle(double theta);
CMatrix lienert_normal_matrix();

struct PlaneWaveProblem {
  std::array<double, 3> k{0.0, 0.0, 1.0};
  double m = 0.0;
  double hbar = 1.0;
  ReflectingBC bc;
  SpinRep rep = weyl_rep();

  std::array<double, 3> k_incoming() const { return {k[0], k[1], -k[2]}; }
  double energy() const;
};

/// Orthonormal basis of the positive-energy eigenspace of hbar k.alpha + m beta.
CMatrix positive_energy_basis(const SpinRep& rep, const std::array<double, 3>& k, double m, double hbar);

struct Reflection {
  CVector v;
  /// |R (u + v)|
  double constraint_residual = 0.0;
  /// (u + v)^dag A^n (u + v)
  double total_flux = 0.0;
};

/// The unique v in E_{+E}(k) with R (u + v) = 0 for incoming u in E_{+E}(k').
Reflection reflect_plane_wave(const PlaneWaveProblem& p, const CVector& u);

/// Columns: coefficients of v in positive_energy_basis(k) for each basis
/// vector of positive_energy_basis(k').
CMatrix reflection_matrix(const PlaneWaveProblem& p);

json ahw_t_to_json(const AhwT& t);
AhwT ahw_t_from_json(const json& j);

}  // namespace ibc
