// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <optional>

#include "ibc/sector_sim.hpp"

namespace ibc {

namespace {

/// Speeds +-1 of the components of an interval sector.
std::vector<int> speeds(const SectorSpec& s) {
  std::vector<int> v;
  for (int c = 0; c < s.spinor_dim; ++c) v.push_back(static_cast<int>(std::lround(s.A[0](c, c).real())));
  return v;
}

/// Boundary data for solving the outgoing part at one interval end.
struct BoundarySolve {
  CMatrix incoming;   // P- of A^n
  CMatrix from_in;    // psi_b = from_in a + from_star m
  CMatrix from_star;
};

BoundarySolve boundary_solve(const HermitianSplit& split, const CMatrix& L, const CMatrix* M) {
  BoundarySolve b;
  const CMatrix k = split.inv_sqrt_plus * L.adjoint();
  b.incoming = split.Pminus;
  b.from_in = split.Pminus + k * split.sqrt_minus;
  if (M != nullptr) b.from_star = -k * *M;
  return b;
}

struct IntervalEnd {
  int sector;
  Face face;
  BoundarySolve solve;
  int coupling = -1;
};

}  // namespace

void require_characteristics(const ModelSpec& model) {
  std::optional<double> h;
  for (const auto& s : model.sectors) {
    if (s.geometry == Geometry::kWedge)
      throw PreconditionError("characteristics solver handles point and interval sectors only");
    if (s.geometry == Geometry::kPoint) continue;
    const CMatrix& a = s.A[0];
    for (int i = 0; i < s.spinor_dim; ++i)
      for (int j = 0; j < s.spinor_dim; ++j) {
        const cplx expected = i == j ? a(i, i) : cplx(0.0, 0.0);
        if (std::abs(a(i, j) - expected) > 1e-14 || (i == j && std::abs(std::abs(a(i, i)) - 1.0) > 1e-14))
          throw PreconditionError("characteristics solver needs A diagonal with entries +-1");
      }
    if (max_abs(s.B) > 0.0) throw PreconditionError("characteristics solver needs m = 0 (B = 0)");
    if (h && std::abs(*h - s.dx()) > 1e-14 * *h) throw PreconditionError("characteristics solver needs a common dx");
    h = s.dx();
  }
  if (!h) throw PreconditionError("characteristics solver needs an interval sector");
  std::vector<int> per_target(model.sectors.size(), 0);
  for (const auto& c : model.couplings) {
    if (c.map != CouplingMap::kPoint) throw PreconditionError("characteristics solver supports point couplings only");
    if (++per_target[static_cast<std::size_t>(c.target_sector)] > 1)
      throw PreconditionError("characteristics solver supports one coupling per point sector");
  }
}

double characteristics_dx(const ModelSpec& model) {
  for (const auto& s : model.sectors)
    if (s.geometry == Geometry::kInterval) return s.dx();
  throw PreconditionError("characteristics solver needs an interval sector");
}

double characteristic_norm(const ModelSpec& model, const State& s) {
  double sum = 0.0;
  for (std::size_t k = 0; k < model.sectors.size(); ++k) {
    const SectorSpec& sec = model.sectors[k];
    if (sec.geometry == Geometry::kPoint) {
      sum += s.psi[k].squaredNorm();
      continue;
    }
    const auto v = speeds(sec);
    const int n = sec.nodes - 1;
    for (int node = 0; node <= n; ++node)
      for (int c = 0; c < sec.spinor_dim; ++c) {
        const bool leaving = (node == 0 && v[static_cast<std::size_t>(c)] < 0) ||
                             (node == n && v[static_cast<std::size_t>(c)] > 0);
        if (!leaving) sum += sec.dx() * std::norm(s.psi[k](node * sec.spinor_dim + c));
      }
  }
  return sum;
}

State evolve_characteristics(const ModelSpec& model, const State& psi, double T) {
  require_characteristics(model);
  const double h = characteristics_dx(model);
  const long steps = std::lround(T / h);
  if (steps < 0 || std::abs(steps * h - T) > 1e-9 * std::max(1.0, T))
    throw PreconditionError("characteristics solver needs T to be a multiple of dx");
  const double dt = h;
  const double hbar = model.hbar;

  std::vector<IntervalEnd> ends;
  std::vector<CMatrix> ibc_m(model.couplings.size());
  for (std::size_t c = 0; c < model.couplings.size(); ++c) {
    const CouplingSpec& cp = model.couplings[c];
    ibc_m[c] = simple_ibc_constraint(cp.split, cp.L, cp.N, hbar).M;
    ends.push_back({cp.source_sector, cp.source_face, boundary_solve(cp.split, cp.L, &ibc_m[c]), static_cast<int>(c)});
  }
  for (const auto& w : model.walls) ends.push_back({w.sector, w.face, boundary_solve(w.bc.split, w.bc.L, nullptr), -1});

  State cur = psi;
  for (long step = 0; step < steps; ++step) {
    State next = cur;
    std::vector<bool> point_done(model.sectors.size(), false);

    for (std::size_t k = 0; k < model.sectors.size(); ++k) {
      const SectorSpec& sec = model.sectors[k];
      if (sec.geometry != Geometry::kInterval) continue;
      const int r = sec.spinor_dim;
      const int n = sec.nodes - 1;
      const auto v = speeds(sec);
      for (int node = 0; node <= n; ++node)
        for (int c = 0; c < r; ++c) {
          const int from = node - v[static_cast<std::size_t>(c)];
          if (from >= 0 && from <= n) next.psi[k](node * r + c) = cur.psi[k](from * r + c);
        }
    }

    for (const IntervalEnd& e : ends) {
      const SectorSpec& sec = model.sectors[static_cast<std::size_t>(e.sector)];
      const int r = sec.spinor_dim;
      const int node = e.face == Face::kLeft ? 0 : sec.nodes - 1;
      CVector& target = next.psi[static_cast<std::size_t>(e.sector)];
      const CVector a = e.solve.incoming * target.segment(node * r, r);
      if (e.coupling < 0) {
        target.segment(node * r, r) = e.solve.from_in * a;
        continue;
      }
      const CouplingSpec& cp = model.couplings[static_cast<std::size_t>(e.coupling)];
      const SectorSpec& pt = model.sectors[static_cast<std::size_t>(cp.target_sector)];
      const CVector& star = cur.psi[static_cast<std::size_t>(cp.target_sector)];
      const int rf = pt.spinor_dim;
      const double lambda = sec.face_nodes(e.face)[0].lambda;
      const CMatrix nd = cp.N.adjoint();
      const CMatrix g = pt.B + lambda * nd * e.solve.from_star;
      const CMatrix id = CMatrix::Identity(rf, rf);
      const cplx half = kI * (dt / (2.0 * hbar));
      const CVector rhs = (id - half * g) * star - (2.0 * half * lambda) * (nd * (e.solve.from_in * a));
      const CVector star_new = (id + half * g).partialPivLu().solve(rhs);
      const CVector mid = 0.5 * (star + star_new);
      target.segment(node * r, r) = e.solve.from_in * a + e.solve.from_star * mid;
      next.psi[static_cast<std::size_t>(cp.target_sector)] = star_new;
      point_done[static_cast<std::size_t>(cp.target_sector)] = true;
    }

    for (std::size_t k = 0; k < model.sectors.size(); ++k) {
      const SectorSpec& sec = model.sectors[k];
      if (sec.geometry != Geometry::kPoint || point_done[k]) continue;
      const CMatrix id = CMatrix::Identity(sec.spinor_dim, sec.spinor_dim);
      const cplx half = kI * (dt / (2.0 * hbar));
      next.psi[k] = (id + half * sec.B).partialPivLu().solve(CVector((id - half * sec.B) * cur.psi[k]));
    }
    next.t = cur.t + dt;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace ibc
