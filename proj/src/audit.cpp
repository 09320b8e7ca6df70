// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "ibc/sector_sim.hpp"

namespace ibc {

std::vector<FaceRef> model_faces(const ModelSpec& model) {
  std::vector<FaceRef> out;
  for (std::size_t s = 0; s < model.sectors.size(); ++s)
    for (Face f : faces_of(model.sectors[s].geometry)) {
      FaceRef ref{static_cast<int>(s), f, false};
      for (const auto& c : model.couplings)
        if (c.source_sector == ref.sector && c.source_face == f) ref.coupled = true;
      out.push_back(ref);
    }
  return out;
}

AuditRow audit_state(const ModelSpec& model, const State& s) {
  AuditRow row;
  row.t = s.t;
  for (std::size_t k = 0; k < model.sectors.size(); ++k) {
    const SectorSpec& sec = model.sectors[k];
    const auto w = sec.weights();
    const int r = sec.spinor_dim;
    double n = 0.0;
    for (int node = 0; node < sec.node_count(); ++node)
      n += w[static_cast<std::size_t>(node)] * s.psi[k].segment(node * r, r).squaredNorm();
    row.norms.push_back(n);
    row.norm_total += n;
  }

  double coupled_flux = 0.0;
  for (const FaceRef& f : model_faces(model)) {
    const SectorSpec& sec = model.sectors[static_cast<std::size_t>(f.sector)];
    const CMatrix an = sec.normal_matrix(f.face);
    const int r = sec.spinor_dim;
    double flux = 0.0;
    for (const FaceNode& fn : sec.face_nodes(f.face)) {
      const CVector v = s.psi[static_cast<std::size_t>(f.sector)].segment(fn.node * r, r);
      flux += fn.lambda * v.dot(an * v).real();
    }
    row.fluxes.push_back(flux);
    if (f.coupled) coupled_flux += flux;
  }

  row.gains.assign(model.sectors.size(), 0.0);
  for (const auto& c : model.couplings) {
    const SectorSpec& src = model.sectors[static_cast<std::size_t>(c.source_sector)];
    const SectorSpec& dst = model.sectors[static_cast<std::size_t>(c.target_sector)];
    const int r = src.spinor_dim;
    const int rt = dst.spinor_dim;
    const CMatrix nd = c.N.adjoint();
    double g = 0.0;
    for (const FaceNode& fn : src.face_nodes(c.source_face)) {
      const int t = c.map == CouplingMap::kPoint ? 0 : static_cast<int>(std::lround(src.coordinates(fn.node)[0] / src.dx()));
      const CVector psi_b = s.psi[static_cast<std::size_t>(c.source_sector)].segment(fn.node * r, r);
      const CVector psi_t = s.psi[static_cast<std::size_t>(c.target_sector)].segment(t * rt, rt);
      g += fn.lambda * psi_t.dot(nd * psi_b).imag();
    }
    row.gains[static_cast<std::size_t>(c.target_sector)] += 2.0 / model.hbar * g;
  }
  double total_gain = 0.0;
  for (double g : row.gains) total_gain += g;
  row.residual = total_gain + coupled_flux;
  return row;
}

AuditReport audit(const ModelSpec& model, const std::vector<State>& states) {
  AuditReport rep;
  rep.faces = model_faces(model);
  for (const State& s : states) rep.rows.push_back(audit_state(model, s));
  return rep;
}

std::vector<double> discrete_gain(const AuditReport& report, int sector) {
  const auto& rows = report.rows;
  const std::size_t n = rows.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  const auto s = static_cast<std::size_t>(sector);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    out[i] = (rows[hi].norms[s] - rows[lo].norms[s]) / (rows[hi].t - rows[lo].t);
  }
  return out;
}

std::vector<double> face_loss(const AuditReport& report, int face_index) {
  std::vector<double> out;
  for (const auto& r : report.rows) out.push_back(-r.fluxes[static_cast<std::size_t>(face_index)]);
  return out;
}

}  // namespace ibc
