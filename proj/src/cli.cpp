// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "ibc/bc_catalog.hpp"
#include "ibc/ibc_core.hpp"
#include "ibc/model_io.hpp"
#include "ibc/random.hpp"
#include "ibc/sector_sim.hpp"

namespace ibc::cli {

namespace {

constexpr int kFluxSamples = 64;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw SchemaError(what + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw SchemaError("unknown field in " + what + ": " + key);
}

json read_input(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("cannot read " + path.string());
  return read_json_file(path);
}

double tol_or(const Options& opt, double fallback) { return opt.tol.value_or(fallback); }

json base_report(const std::string& command, const Options& opt) {
  return json{{"command", command}, {"seed", opt.seed}};
}

Outcome finish(json report, std::vector<std::string> failures) {
  const bool passed = failures.empty();
  report["passed"] = passed;
  report["failures"] = failures;
  return {passed ? kExitPass : kExitFail, std::move(report)};
}

/// Largest |phi^dag A phi| over random unit members of s.
double sampled_flux(const Subspace& s, const CMatrix& A, Rng& rng) {
  double worst = 0.0;
  if (s.dim() == 0) return 0.0;
  for (int k = 0; k < kFluxSamples; ++k) {
    CVector c = random_gaussian_vector(rng, s.dim());
    c.normalize();
    const CVector phi = s.basis() * c;
    worst = std::max(worst, std::abs(phi.dot(A * phi)));
  }
  return worst;
}

Outcome check_reflecting(const json& payload, const Options& opt) {
  check_keys(payload, {"An", "L", "subspace", "C"}, "reflecting payload");
  if (!payload.contains("An")) throw SchemaError("reflecting payload needs 'An'");
  const int given = static_cast<int>(payload.contains("L")) + static_cast<int>(payload.contains("subspace")) +
                    static_cast<int>(payload.contains("C"));
  if (given != 1) throw SchemaError("reflecting payload needs exactly one of 'L', 'subspace', 'C'");
  const HermitianSplit split = hermitian_split(matrix_from_json(payload.at("An")));
  const double tol = tol_or(opt, kSubspaceTol);
  Rng rng(opt.seed);

  json report = base_report("check", opt);
  report["kind"] = "reflecting";
  report["dim_plus"] = split.dim_plus();
  report["dim_minus"] = split.dim_minus();
  report["dim_zero"] = split.dim_zero();
  std::vector<std::string> failures;
  const bool balanced = split.balanced();
  report["signature_balanced"] = balanced;
  if (!balanced) failures.push_back("dim E+ != dim E-");

  Subspace s;
  std::optional<CMatrix> L;
  if (payload.contains("subspace")) {
    s = subspace_from_json(payload.at("subspace"));
    if (s.ambient_dim() != split.dim()) throw SchemaError("subspace ambient dimension differs from An");
  } else {
    CMatrix given_l;
    if (payload.contains("C")) {
      const CMatrix C = matrix_from_json(payload.at("C"));
      if (C.rows() != split.dim() || C.cols() != split.dim()) throw SchemaError("C must be square like An");
      const double cdef = c_flux_defect(C, split);
      report["c_flux_defect"] = cdef;
      if (cdef > tol) failures.push_back("C does not preserve the normal flux");
      given_l = unitary_from_c(C, split);
    } else {
      given_l = matrix_from_json(payload.at("L"));
      if (given_l.rows() != split.dim() || given_l.cols() != split.dim())
        throw SchemaError("L must be square like An");
    }
    const double udef = unitarity_defect(given_l, split);
    report["unitarity_defect"] = udef;
    report["unitary"] = udef <= tol;
    if (udef > tol) failures.push_back("L is not unitary E+ -> E-");
    s = subspace_from_unitary(given_l, split, tol);
    L = given_l;
  }
  report["subspace_dim"] = s.dim();
  const bool complete = is_complete_lagrangian(s, split.A, tol);
  report["complete_lagrangian"] = complete;
  if (!complete) failures.push_back("not complete Lagrangian");
  const double flux = sampled_flux(s, split.A, rng);
  report["max_sampled_flux"] = flux;
  report["flux_samples"] = kFluxSamples;
  if (flux > tol) failures.push_back("boundary flux does not vanish");
  if (!L && complete) {
    const CMatrix derived = unitary_from_subspace(s, split, tol);
    report["L"] = matrix_to_json(derived);
    report["unitarity_defect"] = unitarity_defect(derived, split);
  }
  return finish(std::move(report), std::move(failures));
}

Outcome check_ibc(const json& payload, const Options& opt) {
  const IbcSpec spec = ibc_spec_from_json(payload);
  const double tol = tol_or(opt, kSubspaceTol);
  const double block_tol = tol_or(opt, 1e-11);
  const double member_tol = tol_or(opt, 1e-10);
  Rng rng(opt.seed);

  json report = base_report("check", opt);
  report["kind"] = "ibc";
  std::vector<std::string> failures;

  const SimpleConditions simple = check_simple_conditions(spec.split, spec.N, tol_or(opt, 1e-10));
  report["p0n_norm"] = simple.p0n_norm;
  report["p0n_zero"] = simple.p0n_zero;
  report["coupling_flux_norm"] = simple.coupling_flux_norm;
  report["coupling_flux_zero"] = simple.coupling_flux_zero;
  report["simple_ibc"] = simple.passed();

  const TildeForm tf = tilde_form(spec.split, spec.N, spec.hbar);
  const double herm = std::max(hermiticity_defect(tf.Atilde), hermiticity_defect(tf.Ahat));
  report["hermiticity_defect"] = herm;
  if (herm > 1e-12 * std::max(1.0, max_abs(tf.Atilde))) failures.push_back("Atilde or Ahat is not Hermitian");
  const double off_block = a_prime_off_block_norm(tf, spec.split);
  report["block_residual"] = off_block;
  if (off_block > block_tol * std::max(1.0, max_abs(tf.Atilde))) failures.push_back("Aprime is not block diagonal");

  const int plus = spec.split.dim_plus() + tf.hat_split.dim_plus();
  const int minus = spec.split.dim_minus() + tf.hat_split.dim_minus();
  report["dim_plus_total"] = plus;
  report["dim_minus_total"] = minus;
  report["signature_balanced"] = plus == minus;
  if (plus != minus) {
    failures.push_back("dim(E+ + Ehat+) != dim(E- + Ehat-)");
    return finish(std::move(report), std::move(failures));
  }

  const HermitianSplit prime = hermitian_split(a_prime_natural(spec.split, spec.N, spec.hbar));
  const double udef = unitarity_defect(padded_ltilde(spec), prime);
  report["unitarity_defect"] = udef;
  if (udef > tol) failures.push_back("Ltilde is not unitary");
  const Subspace s = tilde_subspace(spec, tol);
  const CMatrix at_nat = a_tilde_natural(spec.split, spec.N, spec.hbar);
  const bool complete = is_complete_lagrangian(s, at_nat, tol);
  report["complete_lagrangian"] = complete;
  if (!complete) failures.push_back("not complete Lagrangian");
  const double flux = sampled_flux(s, at_nat, rng);
  report["max_member_residual"] = flux;
  report["member_samples"] = kFluxSamples;
  if (flux > member_tol) failures.push_back("tilde subspace members carry flux");
  return finish(std::move(report), std::move(failures));
}

Outcome check_model(const json& payload, const Options& opt) {
  const ModelSpec model = model_from_json(payload);
  json report = base_report("check", opt);
  report["kind"] = "model";
  report["warnings"] = validate_model(model);
  const DiscreteHamiltonian h = assemble(model);
  const double defect = sparse_hermiticity_defect(h.H);
  report["full_dim"] = h.full_dim();
  report["reduced_dim"] = h.reduced_dim();
  report["hermiticity_defect"] = defect;
  std::vector<std::string> failures;
  if (defect > tol_or(opt, 1e-13)) failures.push_back("assembled H is not Hermitian");
  return finish(std::move(report), std::move(failures));
}

/// Boundary data in the convert formats.
struct ConvertInput {
  HermitianSplit split;
  CMatrix L;
};

bool is_weyl_alpha3(const CMatrix& an) {
  return an.rows() == 4 && an.cols() == 4 && approx_equal(an, weyl_alpha3_split().A, 1e-12);
}

/// The 2x2 form written next to a 4x4 matrix by convert must agree with it.
void check_compact_copy(const json& payload, const char* key, const CMatrix& ambient) {
  if (!payload.contains(key)) return;
  if (ambient.rows() != 4 || !approx_equal(matrix_from_json(payload.at(key)), compact_from_ambient_l(ambient), 1e-12))
    throw SchemaError(std::string("'") + key + "' disagrees with the 4x4 matrix");
}

ConvertInput convert_input(const std::string& from, const json& payload) {
  if (from == "t") {
    const AhwT t = ahw_t_from_json(payload);
    const ReflectingBC bc = ahw_from_t(t);
    return {bc.split, bc.L};
  }
  if (from == "l") {
    check_keys(payload, {"An", "L", "L2"}, "L payload");
    if (!payload.contains("L")) throw SchemaError("L payload needs 'L'");
    const CMatrix L = matrix_from_json(payload.at("L"));
    if (!payload.contains("An")) {
      if (L.rows() != 2 || L.cols() != 2) throw SchemaError("without An, L must be the 2x2 form");
      return {weyl_alpha3_split(), ambient_from_compact_l(L)};
    }
    HermitianSplit split = hermitian_split(matrix_from_json(payload.at("An")));
    if (is_weyl_alpha3(split.A) && L.rows() == 2 && L.cols() == 2) return {split, ambient_from_compact_l(L)};
    check_compact_copy(payload, "L2", L);
    return {std::move(split), L};
  }
  check_keys(payload, {"An", "C", "C2"}, "C payload");
  if (!payload.contains("C")) throw SchemaError("C payload needs 'C'");
  HermitianSplit split = payload.contains("An") ? hermitian_split(matrix_from_json(payload.at("An")))
                                                : weyl_alpha3_split();
  CMatrix C = matrix_from_json(payload.at("C"));
  if (is_weyl_alpha3(split.A) && C.rows() == 2 && C.cols() == 2) C = ambient_from_compact_l(C);
  check_compact_copy(payload, "C2", C);
  CMatrix L = unitary_from_c(C, split);
  return {std::move(split), std::move(L)};
}

}  // namespace

SpecFile spec_file_from_json(const json& j) {
  check_keys(j, {"kind", "payload", "schema_version"}, "spec file");
  for (const char* key : {"kind", "payload", "schema_version"})
    if (!j.contains(key)) throw SchemaError(std::string("spec file needs '") + key + "'");
  if (!j.at("kind").is_string() || !j.at("schema_version").is_string())
    throw SchemaError("kind and schema_version must be strings");
  SpecFile f{j.at("kind").get<std::string>(), j.at("payload"), j.at("schema_version").get<std::string>()};
  if (f.kind != "reflecting" && f.kind != "ibc" && f.kind != "model")
    throw SchemaError("kind must be reflecting, ibc or model");
  if (f.schema_version != kSchemaVersion) throw SchemaError("unsupported schema_version " + f.schema_version);
  return f;
}

SpecFile read_spec_file(const std::filesystem::path& path) { return spec_file_from_json(read_input(path)); }

Outcome cmd_check(const std::filesystem::path& path, const Options& opt) {
  const SpecFile spec = read_spec_file(path);
  if (spec.kind == "reflecting") return check_reflecting(spec.payload, opt);
  if (spec.kind == "ibc") return check_ibc(spec.payload, opt);
  return check_model(spec.payload, opt);
}

Outcome cmd_convert(const std::string& from, const std::string& to, const std::filesystem::path& path,
                    const Options& opt) {
  static const std::set<std::string> forms = {"t", "l", "c"};
  if (!forms.contains(from) || !forms.contains(to) || from == to)
    throw UsageError("invalid direction pair " + from + " -> " + to);
  json payload = read_input(path);
  if (payload.contains("kind")) {
    const SpecFile spec = spec_file_from_json(payload);
    if (spec.kind != "reflecting") throw SchemaError("convert needs a reflecting spec");
    payload = spec.payload;
  }
  const ConvertInput in = convert_input(from, payload);
  const double tol = tol_or(opt, kSubspaceTol);

  json report = base_report("convert", opt);
  report["from"] = from;
  report["to"] = to;
  std::vector<std::string> failures;
  const double udef = unitarity_defect(in.L, in.split);
  report["unitarity_defect"] = udef;
  if (udef > tol) {
    failures.push_back("L is not unitary E+ -> E-");
    return finish(std::move(report), std::move(failures));
  }

  if (to == "l") {
    json out{{"An", matrix_to_json(in.split.A)}, {"L", matrix_to_json(in.L)}};
    if (is_weyl_alpha3(in.split.A)) out["L2"] = matrix_to_json(compact_from_ambient_l(in.L));
    report["result"] = out;
  } else if (to == "c") {
    const CMatrix C = c_from_unitary(in.L, in.split);
    json out{{"An", matrix_to_json(in.split.A)}, {"C", matrix_to_json(C)}};
    if (is_weyl_alpha3(in.split.A)) out["C2"] = matrix_to_json(compact_from_ambient_l(C));
    report["result"] = out;
  } else {
    if (!is_weyl_alpha3(in.split.A)) throw SchemaError("T form needs An = alpha^3 in the Weyl representation");
    const AhwInverse inv = ahw_to_t(make_reflecting_bc(in.split, in.L));
    report["n_prime"] = json::array({inv.n_prime.real(), inv.n_prime.imag()});
    report["n_prime_abs"] = std::abs(inv.n_prime);
    report["angles"] = {{"zeta", inv.angles.zeta}, {"eta", inv.angles.eta}, {"kappa", inv.angles.kappa},
                        {"tau", inv.angles.tau}};
    if (inv.t)
      report["result"] = ahw_t_to_json(*inv.t);
    else
      report["result"] = "no-T";
  }
  return finish(std::move(report), std::move(failures));
}

Outcome cmd_reflect(const std::array<double, 3>& k, double m, const std::string& bc, double hbar,
                    const Options& opt) {
  if (!(k[2] > 0.0)) throw UsageError("k3 must be positive");
  PlaneWaveProblem p;
  p.k = k;
  p.m = m;
  p.hbar = hbar;
  const std::array<double, 3> normal{0.0, 0.0, 1.0};
  if (bc == "mit") {
    p.bc = mit_bag(p.rep, normal);
  } else {
    const SpecFile spec = read_spec_file(bc);
    if (spec.kind != "reflecting") throw SchemaError("--bc needs a reflecting spec");
    p.bc = reflecting_bc_from_json(spec.payload);
    if (p.bc.split.dim() != 4) throw SchemaError("--bc must act on C^4");
  }
  const double tol_v = tol_or(opt, 1e-10);
  const double tol_flux = tol_or(opt, 1e-11);

  json report = base_report("reflect", opt);
  report["k"] = k;
  report["m"] = m;
  report["energy"] = p.energy();
  std::vector<std::string> failures;
  const CMatrix u_basis = positive_energy_basis(p.rep, p.k_incoming(), m, hbar);
  const CMatrix v_basis = positive_energy_basis(p.rep, p.k, m, hbar);
  report["u_basis"] = matrix_to_json(u_basis);
  report["v_basis"] = matrix_to_json(v_basis);
  json per = json::array();
  try {
    for (Eigen::Index c = 0; c < u_basis.cols(); ++c) {
      const Reflection r = reflect_plane_wave(p, u_basis.col(c));
      const double outside = (r.v - v_basis * (v_basis.adjoint() * r.v)).norm();
      per.push_back({{"v", vector_to_json(r.v)},
                     {"constraint_residual", r.constraint_residual},
                     {"total_flux", r.total_flux},
                     {"distance_from_eigenspace", outside}});
      if (outside > tol_v) failures.push_back("v is not in the positive-energy eigenspace");
      if (r.constraint_residual > tol_v) failures.push_back("v does not satisfy the boundary condition");
      if (std::abs(r.total_flux) > tol_flux) failures.push_back("total flux does not vanish");
    }
    report["reflection_matrix"] = matrix_to_json(reflection_matrix(p));
  } catch (const SingularSystemError& e) {
    report["reflections"] = per;
    failures.push_back(std::string("singular system: ") + e.what());
    return finish(std::move(report), std::move(failures));
  }
  report["reflections"] = per;
  return finish(std::move(report), std::move(failures));
}

namespace {

ModelSpec load_model(const std::filesystem::path& path) {
  json j = read_input(path);
  if (j.contains("kind")) {
    const SpecFile spec = spec_file_from_json(j);
    if (spec.kind != "model") throw SchemaError("simulate needs a model spec");
    j = spec.payload;
  }
  return model_from_json(j);
}

std::string snapshot_name(int step) { return "snap_" + std::to_string(step) + ".json"; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = std::abs(a[i] - b[i]);
    d = std::isnan(x) ? std::numeric_limits<double>::infinity() : std::max(d, x);
  }
  return d;
}

}  // namespace

Outcome cmd_simulate(const SimulateArgs& args, const Options& opt) {
  const ModelSpec model = load_model(args.model);
  if (args.steps < 0) throw UsageError("--steps must be non-negative");
  if (args.out.empty()) throw UsageError("--out is required");
  const Method method = method_from_name(args.method);
  double dt = 0.0;
  if (args.dt) {
    dt = *args.dt;
  } else {
    double h = std::numeric_limits<double>::infinity();
    for (const auto& s : model.sectors)
      if (s.geometry != Geometry::kPoint) h = std::min(h, s.dx());
    dt = method == Method::kCharacteristics ? h : 0.5 * h;
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("--dt must be positive");
  const int every = args.snapshot_every > 0 ? args.snapshot_every : std::max(1, args.steps);

  std::error_code ec;
  std::filesystem::create_directories(args.out, ec);
  if (ec || !std::filesystem::is_directory(args.out)) throw UsageError("cannot create " + args.out.string());
  write_json_file(args.out / "model.json", model_to_json(model));

  std::vector<int> snapshots;
  const StepObserver observer = [&](int step, const State& s) {
    if (step % every == 0 || step == args.steps) {
      write_json_file(args.out / snapshot_name(step), state_to_json(model, s, step));
      snapshots.push_back(step);
    }
  };
  const RunResult result = run(model, initial_state(model), args.steps, dt, method, observer);
  write_series_csv(args.out / "series.csv", model, result.report);

  const auto& rows = result.report.rows;
  const double n0 = rows.front().norm_total;
  double drift = 0.0;
  double residual = 0.0;
  for (const auto& r : rows) {
    drift = std::max(drift, std::abs(r.norm_total - n0) / std::max(n0, 1e-300));
    residual = std::max(residual, std::abs(r.residual));
  }
  json report = base_report("simulate", opt);
  report["method"] = method_name(method);
  report["dt"] = dt;
  report["steps"] = args.steps;
  report["out"] = args.out.string();
  report["snapshots"] = snapshots;
  report["warnings"] = validate_model(model);
  report["norm_initial"] = n0;
  report["norm_final"] = rows.back().norm_total;
  report["relative_norm_drift"] = drift;
  report["max_abs_residual"] = residual;
  report["projection_defect"] = result.projection_defect;
  json balance = json::array();
  for (const auto& c : model.couplings) {
    const auto gain = discrete_gain(result.report, c.target_sector);
    int face = 0;
    for (std::size_t f = 0; f < result.report.faces.size(); ++f)
      if (result.report.faces[f].sector == c.source_sector && result.report.faces[f].face == c.source_face)
        face = static_cast<int>(f);
    const auto loss = face_loss(result.report, face);
    double worst = 0.0;
    for (std::size_t i = 0; i < gain.size(); ++i) worst = std::max(worst, std::abs(gain[i] - loss[i]));
    balance.push_back({{"target_sector", c.target_sector}, {"face", face}, {"max_gain_minus_loss", worst}});
  }
  report["balance"] = balance;
  std::vector<std::string> failures;
  if (opt.tol && method == Method::kCrankNicolson && drift > *opt.tol) failures.push_back("norm drift exceeds --tol");
  return finish(std::move(report), std::move(failures));
}

Outcome cmd_audit(const std::filesystem::path& dir, const Options& opt) {
  if (!std::filesystem::is_directory(dir)) throw UsageError("no such directory " + dir.string());
  const ModelSpec model = model_from_json(read_input(dir / "model.json"));
  if (!std::filesystem::is_regular_file(dir / "series.csv")) throw UsageError("missing series.csv in " + dir.string());
  const SeriesTable table = read_series_csv(dir / "series.csv");
  const double tol = tol_or(opt, 1e-12);

  json report = base_report("audit", opt);
  std::vector<std::string> failures;
  const auto header = series_header(model);
  const bool header_ok = table.header == header;
  report["header_matches"] = header_ok;
  if (!header_ok) {
    failures.push_back("series header does not match the model");
    return finish(std::move(report), std::move(failures));
  }

  const std::size_t ns = model.sectors.size();
  const auto faces = model_faces(model);
  double row_defect = 0.0;
  for (const auto& row : table.rows) {
    double norms = 0.0;
    double balance = 0.0;
    for (std::size_t s = 0; s < ns; ++s) norms += row[2 + s];
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].coupled) balance += row[2 + ns + f];
    for (std::size_t s = 0; s < ns; ++s) balance += row[2 + ns + faces.size() + s];
    const double scale = std::max(1.0, std::abs(row[1]));
    row_defect = std::max(row_defect, std::abs(norms - row[1]) / scale);
    row_defect = std::max(row_defect, std::abs(balance - row.back()) / scale);
    if (std::isnan(norms) || std::isnan(balance)) row_defect = std::numeric_limits<double>::infinity();
  }
  report["rows"] = table.rows.size();
  report["row_consistency_defect"] = row_defect;
  if (row_defect > tol) failures.push_back("series rows are not internally consistent");

  const std::regex snap_re("snap_([0-9]+)\\.json");
  std::vector<int> steps;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, snap_re)) steps.push_back(std::stoi(m[1].str()));
  }
  std::sort(steps.begin(), steps.end());
  if (steps.empty()) failures.push_back("no snapshots found");
  double mismatch = 0.0;
  for (int step : steps) {
    const json snap = read_json_file(dir / snapshot_name(step));
    if (!snap.contains("step") || snap.at("step") != step) failures.push_back("snapshot step field disagrees with file name");
    if (step >= static_cast<int>(table.rows.size())) {
      failures.push_back("snapshot " + std::to_string(step) + " has no series row");
      continue;
    }
    const State s = state_from_json(model, snap);
    const auto values = series_values(audit_state(model, s));
    mismatch = std::max(mismatch, max_abs_diff(values, table.rows[static_cast<std::size_t>(step)]));
  }
  report["snapshots"] = steps;
  report["max_snapshot_mismatch"] = mismatch;
  if (mismatch > tol) failures.push_back("series does not match the snapshots");
  return finish(std::move(report), std::move(failures));
}

std::string render_text(const json& report) {
  std::ostringstream out;
  if (report.contains("command"))
    out << report.at("command").get<std::string>() << ": "
        << (report.value("passed", false) ? "PASS" : "FAIL") << '\n';
  for (const auto& [key, value] : report.items()) {
    if (key == "command" || key == "passed") continue;
    if (value.is_array() && !value.empty() && value.front().is_string()) {
      for (const auto& v : value) out << "  " << key << ": " << v.get<std::string>() << '\n';
      continue;
    }
    if (value.is_structured() && value.dump().size() > 96) {
      out << "  " << key << ": <" << value.size() << " entries>\n";
      continue;
    }
    out << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  return out.str();
}

namespace {

std::array<double, 3> parse_k(const std::string& s) {
  std::array<double, 3> k{};
  std::stringstream ss(s);
  std::string cell;
  int i = 0;
  while (std::getline(ss, cell, ',')) {
    if (i >= 3) throw UsageError("--k takes kx,ky,kz");
    try {
      k[static_cast<std::size_t>(i++)] = std::stod(cell);
    } catch (const std::exception&) {
      throw UsageError("--k takes kx,ky,kz");
    }
  }
  if (i != 3) throw UsageError("--k takes kx,ky,kz");
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary and interior-boundary conditions for Dirac-type operators"};
  app.require_subcommand(1);
  std::optional<double> tol;
  bool text = false;
  app.add_option("--tol", tol, "Override the tolerances of the command");
  app.add_flag("--text", text, "Print a text rendering instead of JSON");

  std::string path;
  auto* check = app.add_subcommand("check", "Certify a reflecting, ibc or model spec");
  check->add_option("spec", path, "Spec file")->required();
  check->add_option("--tol", tol);
  check->add_flag("--text", text);

  std::string from, to;
  auto* convert = app.add_subcommand("convert", "Convert between T, L and C parametrizations");
  convert->add_option("--from", from)->required()->check(CLI::IsMember({"t", "l", "c"}));
  convert->add_option("--to", to)->required()->check(CLI::IsMember({"t", "l", "c"}));
  convert->add_option("input", path, "Input JSON")->required();
  convert->add_option("--tol", tol);
  convert->add_flag("--text", text);

  std::string k_text, bc = "mit";
  double mass = 0.0, hbar = 1.0;
  auto* reflect = app.add_subcommand("reflect", "Reflect plane waves at a boundary");
  reflect->add_option("--k", k_text, "kx,ky,kz with kz > 0")->required();
  reflect->add_option("--m", mass, "Mass");
  reflect->add_option("--hbar", hbar);
  reflect->add_option("--bc", bc, "Reflecting spec file or 'mit'");
  reflect->add_option("--tol", tol);
  reflect->add_flag("--text", text);

  SimulateArgs sim;
  std::string out_dir;
  double dt = 0.0;
  auto* simulate = app.add_subcommand("simulate", "Evolve a sector model and write series.csv and snapshots");
  simulate->add_option("model", path, "Model file")->required();
  auto* dt_opt = simulate->add_option("--dt", dt);
  simulate->add_option("--steps", sim.steps);
  simulate->add_option("--method", sim.method)->check(CLI::IsMember({"cn", "characteristics"}));
  simulate->add_option("--out", out_dir)->required();
  simulate->add_option("--snapshot-every", sim.snapshot_every);
  simulate->add_option("--tol", tol);
  simulate->add_flag("--text", text);

  auto* audit_cmd = app.add_subcommand("audit", "Recompute a run's balance from its snapshots");
  audit_cmd->add_option("dir", path, "Output directory of simulate")->required();
  audit_cmd->add_option("--tol", tol);
  audit_cmd->add_flag("--text", text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Options opt;
  opt.tol = tol;
  Outcome outcome;
  try {
    opt.seed = seed_from_env();
    if (check->parsed()) {
      outcome = cmd_check(path, opt);
    } else if (convert->parsed()) {
      outcome = cmd_convert(from, to, path, opt);
    } else if (reflect->parsed()) {
      outcome = cmd_reflect(parse_k(k_text), mass, bc, hbar, opt);
    } else if (simulate->parsed()) {
      sim.model = path;
      sim.out = out_dir;
      if (dt_opt->count() > 0) sim.dt = dt;
      outcome = cmd_simulate(sim, opt);
    } else {
      outcome = cmd_audit(path, opt);
    }
  } catch (const UsageError& e) {
    outcome = {kExitUsage, json{{"error", e.what()}, {"kind", "usage"}, {"passed", false}}};
  } catch (const SchemaError& e) {
    outcome = {kExitUsage, json{{"error", e.what()}, {"kind", "schema"}, {"passed", false}}};
  } catch (const DimensionError& e) {
    outcome = {kExitUsage, json{{"error", e.what()}, {"kind", "schema"}, {"passed", false}}};
  } catch (const NotHermitianError& e) {
    outcome = {kExitUsage, json{{"error", e.what()}, {"kind", "schema"}, {"passed", false}}};
  } catch (const json::exception& e) {
    outcome = {kExitUsage, json{{"error", e.what()}, {"kind", "schema"}, {"passed", false}}};
  } catch (const Error& e) {
    outcome = {kExitFail, json{{"error", e.what()}, {"kind", "failure"}, {"passed", false}}};
  } catch (const std::exception& e) {
    outcome = {kExitFail, json{{"error", e.what()}, {"kind", "failure"}, {"passed", false}}};
  }
  outcome.report["seed"] = opt.seed;
  if (text)
    std::cout << render_text(outcome.report);
  else
    std::cout << outcome.report.dump(2) << '\n';
  return outcome.exit_code;
}

}  // namespace ibc::cli
