// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/sector_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SparseLU>

namespace ibc {

namespace {

using Triplet = Eigen::Triplet<cplx, int>;

class Assembler {
 public:
  Assembler(const ModelSpec& model, DiscreteHamiltonian& out) : model_(model), out_(out) {
    int offset = 0;
    for (const auto& s : model.sectors) {
      out_.sector_offsets.push_back(offset);
      weights_.push_back(s.weights());
      offset += s.dof();
    }
    ndof_ = offset;
    out_.sqrt_weights.resize(ndof_);
    for (std::size_t s = 0; s < model.sectors.size(); ++s) {
      const int r = model.sectors[s].spinor_dim;
      for (int node = 0; node < model.sectors[s].node_count(); ++node)
        for (int c = 0; c < r; ++c)
          out_.sqrt_weights(dof(static_cast<int>(s), node) + c) = std::sqrt(weights_[s][static_cast<std::size_t>(node)]);
    }
  }

  int ndof() const { return ndof_; }

  int dof(int sector, int node) const {
    return out_.sector_offsets[static_cast<std::size_t>(sector)] +
           node * model_.sectors[static_cast<std::size_t>(sector)].spinor_dim;
  }

  double weight(int sector, int node) const {
    return weights_[static_cast<std::size_t>(sector)][static_cast<std::size_t>(node)];
  }

  /// Adds the unscaled block `b` acting from (cs, cn) into (rs, rn).
  void add_block(int rs, int rn, int cs, int cn, const CMatrix& b) {
    const double scale = std::sqrt(weight(rs, rn) / weight(cs, cn));
    const int r0 = dof(rs, rn);
    const int c0 = dof(cs, cn);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j)
        if (b(i, j) != cplx(0.0, 0.0)) triplets_.emplace_back(r0 + i, c0 + j, scale * b(i, j));
  }

  /// -i hbar A D on one grid line given by node indices.
  void add_line_derivative(int sector, const std::vector<int>& line, const CMatrix& A, double h) {
    const int n = static_cast<int>(line.size());
    if (n < 2) return;
    const CMatrix k = (-kI * model_.hbar) * A;
    for (int p = 0; p < n; ++p) {
      if (p == 0) {
        add_block(sector, line[0], sector, line[1], k / h);
        add_block(sector, line[0], sector, line[0], -k / h);
      } else if (p == n - 1) {
        add_block(sector, line[p], sector, line[p], k / h);
        add_block(sector, line[p], sector, line[p - 1], -k / h);
      } else {
        add_block(sector, line[p], sector, line[p + 1], k / (2.0 * h));
        add_block(sector, line[p], sector, line[p - 1], -k / (2.0 * h));
      }
    }
  }

  void add_sector(int s) {
    const SectorSpec& sec = model_.sectors[static_cast<std::size_t>(s)];
    for (int node = 0; node < sec.node_count(); ++node) add_block(s, node, s, node, sec.B);
    const double h = sec.dx();
    if (sec.geometry == Geometry::kInterval) {
      std::vector<int> line(static_cast<std::size_t>(sec.nodes));
      std::iota(line.begin(), line.end(), 0);
      add_line_derivative(s, line, sec.A[0], h);
    } else if (sec.geometry == Geometry::kWedge) {
      const int n = sec.nodes - 1;
      for (int j = 0; j <= n; ++j) {
        std::vector<int> line;
        for (int i = 0; i <= j; ++i) line.push_back(sec.wedge_index(i, j));
        add_line_derivative(s, line, sec.A[0], h);
      }
      for (int i = 0; i <= n; ++i) {
        std::vector<int> line;
        for (int j = i; j <= n; ++j) line.push_back(sec.wedge_index(i, j));
        add_line_derivative(s, line, sec.A[1], h);
      }
    }
  }

  static int target_node(const SectorSpec& src, const CouplingSpec& c, int node) {
    if (c.map == CouplingMap::kPoint) return 0;
    return static_cast<int>(std::lround(src.coordinates(node)[0] / src.dx()));
  }

  void add_coupling(const CouplingSpec& c) {
    const SectorSpec& src = model_.sectors[static_cast<std::size_t>(c.source_sector)];
    const SimpleIbc ibc = simple_ibc_constraint(c.split, c.L, c.N, model_.hbar);
    const CMatrix nd = c.N.adjoint();
    for (const FaceNode& fn : src.face_nodes(c.source_face)) {
      const int t = target_node(src, c, fn.node);
      add_block(c.target_sector, t, c.source_sector, fn.node, (fn.lambda / weight(c.target_sector, t)) * nd);
      out_.constraints.push_back({c.source_sector, fn.node, c.source_face, fn.lambda, ibc.R, ibc.M, c.target_sector, t});
    }
  }

  void add_wall(const WallSpec& w) {
    const SectorSpec& sec = model_.sectors[static_cast<std::size_t>(w.sector)];
    for (const FaceNode& fn : sec.face_nodes(w.face))
      out_.constraints.push_back({w.sector, fn.node, w.face, fn.lambda, w.bc.R, CMatrix(), -1, -1});
  }

  SparseC raw() const {
    SparseC h(ndof_, ndof_);
    h.setFromTriplets(triplets_.begin(), triplets_.end());
    return h;
  }

  SparseC constraint_basis() const {
    const auto& cons = out_.constraints;
    std::vector<int> parent(static_cast<std::size_t>(ndof_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };

    std::vector<char> touched(static_cast<std::size_t>(ndof_), 0);
    auto dofs_of = [&](const NodeConstraint& c) {
      std::vector<int> d;
      const int r = model_.sectors[static_cast<std::size_t>(c.sector)].spinor_dim;
      for (int k = 0; k < r; ++k) d.push_back(dof(c.sector, c.node) + k);
      if (c.M.size() > 0) {
        const int rt = model_.sectors[static_cast<std::size_t>(c.target_sector)].spinor_dim;
        for (int k = 0; k < rt; ++k) d.push_back(dof(c.target_sector, c.target_node) + k);
      }
      return d;
    };
    for (const auto& c : cons) {
      const auto d = dofs_of(c);
      for (int x : d) {
        touched[static_cast<std::size_t>(x)] = 1;
        unite(d[0], x);
      }
    }

    // Component members and constraints, keyed by root (the smallest dof).
    std::vector<std::vector<int>> members(static_cast<std::size_t>(ndof_));
    std::vector<std::vector<int>> comp_cons(static_cast<std::size_t>(ndof_));
    for (int x = 0; x < ndof_; ++x)
      if (touched[static_cast<std::size_t>(x)]) members[static_cast<std::size_t>(find(x))].push_back(x);
    for (std::size_t i = 0; i < cons.size(); ++i)
      comp_cons[static_cast<std::size_t>(find(dofs_of(cons[i])[0]))].push_back(static_cast<int>(i));

    std::vector<Triplet> trip;
    int col = 0;
    for (int x = 0; x < ndof_; ++x) {
      if (!touched[static_cast<std::size_t>(x)]) {
        trip.emplace_back(x, col++, cplx(1.0, 0.0));
        continue;
      }
      if (find(x) != x) continue;
      const auto& mem = members[static_cast<std::size_t>(x)];
      auto local_index = [&](int d) {
        return static_cast<int>(std::lower_bound(mem.begin(), mem.end(), d) - mem.begin());
      };
      int nrows = 0;
      for (int ci : comp_cons[static_cast<std::size_t>(x)]) nrows += static_cast<int>(cons[static_cast<std::size_t>(ci)].R.rows());
      CMatrix rows = CMatrix::Zero(nrows, static_cast<int>(mem.size()));
      int row = 0;
      for (int ci : comp_cons[static_cast<std::size_t>(x)]) {
        const NodeConstraint& c = cons[static_cast<std::size_t>(ci)];
        const double sw = std::sqrt(weight(c.sector, c.node));
        for (int i = 0; i < c.R.rows(); ++i) {
          for (int k = 0; k < c.R.cols(); ++k) rows(row + i, local_index(dof(c.sector, c.node) + k)) += c.R(i, k) / sw;
          if (c.M.size() > 0) {
            const double tw = std::sqrt(weight(c.target_sector, c.target_node));
            for (int k = 0; k < c.M.cols(); ++k)
              rows(row + i, local_index(dof(c.target_sector, c.target_node) + k)) -= c.M(i, k) / tw;
          }
        }
        row += static_cast<int>(c.R.rows());
      }
      const CMatrix kernel = kernel_basis(rows);
      for (int k = 0; k < kernel.cols(); ++k) {
        for (int i = 0; i < kernel.rows(); ++i)
          if (kernel(i, k) != cplx(0.0, 0.0)) trip.emplace_back(mem[static_cast<std::size_t>(i)], col, kernel(i, k));
        ++col;
      }
    }
    SparseC v(ndof_, col);
    v.setFromTriplets(trip.begin(), trip.end());
    return v;
  }

 private:
  const ModelSpec& model_;
  DiscreteHamiltonian& out_;
  std::vector<std::vector<double>> weights_;
  std::vector<Triplet> triplets_;
  int ndof_ = 0;
};

SparseC exact_hermitian_part(const SparseC& h) {
  const SparseC ht = h.adjoint();
  SparseC out = (h + ht) * 0.5;
  out.makeCompressed();
  return out;
}

}  // namespace

DiscreteHamiltonian assemble(const ModelSpec& model) {
  DiscreteHamiltonian out;
  out.warnings = validate_model(model);
  out.hbar = model.hbar;
  Assembler a(model, out);
  for (std::size_t s = 0; s < model.sectors.size(); ++s) a.add_sector(static_cast<int>(s));
  for (const auto& c : model.couplings) a.add_coupling(c);
  for (const auto& w : model.walls) a.add_wall(w);
  out.H_raw = a.raw();
  out.H_full = exact_hermitian_part(out.H_raw);
  out.V = a.constraint_basis();
  const SparseC vt = out.V.adjoint();
  const SparseC reduced = vt * out.H_full * out.V;
  out.H = exact_hermitian_part(reduced);
  return out;
}

double sparse_hermiticity_defect(const SparseC& h) {
  const SparseC d = h - SparseC(h.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseC::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

CVector scaled_vector(const DiscreteHamiltonian& h, const State& s) {
  CVector x(h.full_dim());
  for (std::size_t k = 0; k < s.psi.size(); ++k) x.segment(h.sector_offsets[k], s.psi[k].size()) = s.psi[k];
  if (x.size() != h.sqrt_weights.size()) throw DimensionError("state does not match the discretization");
  return x.cwiseProduct(h.sqrt_weights.cast<cplx>());
}

State state_from_scaled(const ModelSpec& model, const DiscreteHamiltonian& h, const CVector& x, double t) {
  State s;
  s.t = t;
  const CVector psi = x.cwiseQuotient(h.sqrt_weights.cast<cplx>());
  for (std::size_t k = 0; k < model.sectors.size(); ++k)
    s.psi.push_back(psi.segment(h.sector_offsets[k], model.sectors[k].dof()));
  return s;
}

CVector reduce(const DiscreteHamiltonian& h, const State& s) { return h.V.adjoint() * scaled_vector(h, s); }

State expand(const ModelSpec& model, const DiscreteHamiltonian& h, const CVector& c, double t) {
  return state_from_scaled(model, h, h.V * c, t);
}

struct CrankNicolson::Impl {
  Eigen::SparseLU<SparseC> lu;
  SparseC explicit_part;
};

CrankNicolson::CrankNicolson(const DiscreteHamiltonian& h, double dt) : impl_(std::make_unique<Impl>()), dt_(dt) {
  if (!(dt > 0.0)) throw PreconditionError("time step must be positive");
  SparseC id(h.reduced_dim(), h.reduced_dim());
  id.setIdentity();
  const cplx a = kI * (dt / (2.0 * h.hbar));
  SparseC implicit_part = id + a * h.H;
  impl_->explicit_part = id - a * h.H;
  implicit_part.makeCompressed();
  impl_->lu.analyzePattern(implicit_part);
  impl_->lu.factorize(implicit_part);
  if (impl_->lu.info() != Eigen::Success) throw SingularSystemError("Crank-Nicolson factorization failed");
}

CrankNicolson::~CrankNicolson() = default;

CVector CrankNicolson::step(const CVector& c) const {
  const CVector rhs = impl_->explicit_part * c;
  CVector out = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) throw SingularSystemError("Crank-Nicolson solve failed");
  return out;
}

State step_cn(const ModelSpec& model, const DiscreteHamiltonian& h, const State& psi, double dt) {
  const CrankNicolson cn(h, dt);
  return expand(model, h, cn.step(reduce(h, psi)), psi.t + dt);
}

Method method_from_name(const std::string& s) {
  if (s == "cn") return Method::kCrankNicolson;
  if (s == "characteristics") return Method::kCharacteristics;
  throw SchemaError("unknown method '" + s + "' (expected cn or characteristics)");
}

std::string method_name(Method m) { return m == Method::kCrankNicolson ? "cn" : "characteristics"; }

RunResult run(const ModelSpec& model, const State& psi0, int steps, double dt, Method method,
              const StepObserver& observer) {
  if (steps < 0) throw PreconditionError("number of steps must be non-negative");
  RunResult out;
  out.report.faces = model_faces(model);
  auto record = [&](int step, const State& s) {
    out.report.rows.push_back(audit_state(model, s));
    if (observer) observer(step, s);
  };

  if (method == Method::kCrankNicolson) {
    const DiscreteHamiltonian h = assemble(model);
    const CrankNicolson cn(h, dt);
    const CVector x0 = scaled_vector(h, psi0);
    CVector c = h.V.adjoint() * x0;
    out.projection_defect = (x0 - h.V * c).norm() / std::max(1e-300, x0.norm());
    State s = expand(model, h, c, psi0.t);
    record(0, s);
    for (int k = 1; k <= steps; ++k) {
      c = cn.step(c);
      s = expand(model, h, c, psi0.t + k * dt);
      record(k, s);
    }
    out.final_state = std::move(s);
  } else {
    validate_model(model);
    require_characteristics(model);
    const double h = characteristics_dx(model);
    if (std::abs(dt - h) > 1e-12 * h)
      throw PreconditionError("characteristics solver needs dt = dx = " + std::to_string(h));
    State s = psi0;
    record(0, s);
    for (int k = 1; k <= steps; ++k) {
      s = evolve_characteristics(model, s, h);
      s.t = psi0.t + k * dt;
      record(k, s);
    }
    out.final_state = std::move(s);
  }
  return out;
}

double state_norm(const ModelSpec& model, const State& a) {
  double sum = 0.0;
  for (std::size_t s = 0; s < model.sectors.size(); ++s) {
    const auto w = model.sectors[s].weights();
    const int r = model.sectors[s].spinor_dim;
    for (int node = 0; node < model.sectors[s].node_count(); ++node)
      sum += w[static_cast<std::size_t>(node)] * a.psi[s].segment(node * r, r).squaredNorm();
  }
  return std::sqrt(sum);
}

double state_distance(const ModelSpec& model, const State& a, const State& b) {
  State d = a;
  for (std::size_t s = 0; s < d.psi.size(); ++s) d.psi[s] -= b.psi[s];
  return state_norm(model, d);
}

}  // namespace ibc
