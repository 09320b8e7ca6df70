// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ibc/lagrangian.hpp"
#include "ibc/spin_algebra.hpp"

namespace ibc {

/// Interior-boundary data at one boundary point q.
///
/// N maps the target space E_{f(q)} (dim r_f) into E_q (dim r). Ltilde is
/// an ambient unitary for the split of the natural-coordinate A' (see
/// TildeForm); when the hat form vanishes an r x r L may be given instead
/// and is padded with zeros.
struct IbcSpec {
  HermitianSplit split;
  CMatrix N;
  double hbar = 1.0;
  CMatrix Ltilde;

  int dim_q() const { return split.dim(); }
  int dim_target() const { return static_cast<int>(N.cols()); }
  CMatrix n_plus() const { return split.Pplus * N; }
  CMatrix n_minus() const { return split.Pminus * N; }
  CMatrix n_zero() const { return split.P0 * N; }
};

/// Forms on E_q + E_{f(q)}.
///
/// Atilde, Ftilde and Aprime are given in block coordinates
/// (psi_plus, psi_minus, psi_zero, psi_star): the coefficients of psi_q in
/// the E+, E-, E0 eigenbases followed by psi_star. `frame` maps block
/// coordinates to natural ones (psi_q, psi_star). Ahat acts on
/// (psi_zero, psi_star) in the same coordinates.
struct TildeForm {
  CMatrix Atilde;
  CMatrix Ahat;
  CMatrix Ftilde;
  CMatrix Aprime;
  CMatrix frame;
  HermitianSplit hat_split;

  CMatrix natural(const CMatrix& block) const { return frame * block * frame.adjoint(); }
};

inline const std::vector<std::string> kBlockOrder = {"plus", "minus", "zero", "star"};

CMatrix a_tilde(const HermitianSplit& split, const CMatrix& N, double hbar);
CMatrix a_hat(const HermitianSplit& split, const CMatrix& N, double hbar);
CMatrix f_tilde(const HermitianSplit& split, const CMatrix& N, double hbar);
CMatrix a_prime(const TildeForm& tf);
/// Frobenius norm of Aprime outside the blocks plus, minus and (zero, star).
double a_prime_off_block_norm(const TildeForm& tf, const HermitianSplit& split);
/// Unitary change from block to natural coordinates.
CMatrix block_frame(const HermitianSplit& split, int dim_target);
TildeForm tilde_form(const HermitianSplit& split, const CMatrix& N, double hbar);

/// Natural-coordinate versions: Atilde = [[A, (i/hbar) N], [-(i/hbar) N^dag, 0]].
CMatrix a_tilde_natural(const HermitianSplit& split, const CMatrix& N, double hbar);
CMatrix f_tilde_natural(const HermitianSplit& split, const CMatrix& N, double hbar);
CMatrix a_prime_natural(const HermitianSplit& split, const CMatrix& N, double hbar);

/// Ltilde zero-padded to the full ambient size when given as r x r.
CMatrix padded_ltilde(const IbcSpec& spec);

/// Subspace of E_q + E_{f(q)} (natural coordinates) for the general IBC.
/// Throws SignatureError when dim(E+ + Ehat+) != dim(E- + Ehat-).
Subspace tilde_subspace(const IbcSpec& spec, double tol = kSubspaceTol);
/// Inverse direction: the Ltilde belonging to a subspace.
CMatrix ltilde_from_subspace(const Subspace& s, const HermitianSplit& split, const CMatrix& N, double hbar);

struct SimpleConditions {
  double p0n_norm = 0.0;
  double coupling_flux_norm = 0.0;
  bool p0n_zero = false;
  bool coupling_flux_zero = false;
  bool passed() const { return p0n_zero && coupling_flux_zero; }
};

/// P0 N = 0 and N^dag A^inv N = 0 at one point.
SimpleConditions check_simple_conditions(const HermitianSplit& split, const CMatrix& N, double tol = 1e-10);

/// Quadrature sum of w_i N_i^dag A^n_i N_i over boundary nodes.
CMatrix integrated_coupling_flux(std::span<const CMatrix> Ns, std::span<const double> weights,
                                 std::span<const CMatrix> An);

struct SimpleIbc {
  CMatrix R;
  CMatrix M;
  std::vector<std::string> warnings;
};

/// R psi_q = M psi_star with M = -(i/hbar) R A^inv N.
SimpleIbc simple_ibc_constraint(const HermitianSplit& split, const CMatrix& L, const CMatrix& N, double hbar);

/// Joint kernel of [R, -M] in natural coordinates.
Subspace simple_ibc_subspace(const SimpleIbc& ibc);

/// (2/hbar) Im(psi_star^dag N^dag psi_q) + psi_q^dag A^n psi_q.
double local_conservation_residual(const CVector& psi_q, const CVector& psi_star, const CMatrix& N,
                                   const CMatrix& An, double hbar);

struct ProjectorFormReport {
  double projector_distance = 0.0;
  int samples = 0;
  int disagreements = 0;
  double max_member_residual = 0.0;
  std::uint64_t seed = 0;
  bool equivalent = false;
};

/// Compares (gamma^n - i) psi1 = -(i/hbar)(gamma^n - i) alpha^n N psi0 with
/// P_- psi1 = -(i/hbar) P_- alpha^n N psi0, P_- = (1 + i gamma^n)/2.
ProjectorFormReport compare_projector_forms(const SpinRep& rep, std::span<const double> n, const CMatrix& N, double hbar,
                              int samples, std::uint64_t seed);
bool projector_forms_equivalent(const SpinRep& rep, std::span<const double> n, const CMatrix& N, double hbar,
                               int samples, std::uint64_t seed = 0);

json ibc_spec_to_json(const IbcSpec& spec);
/// Schema {An, N, hbar, Ltilde, block_order}.
IbcSpec ibc_spec_from_json(const json& j);

}  // namespace ibc
