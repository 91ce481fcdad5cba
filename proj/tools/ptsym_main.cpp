#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ptsym/continuation.hpp"
#include "ptsym/correlators.hpp"
#include "ptsym/format.hpp"
#include "ptsym/json_io.hpp"
#include "ptsym/pais_uhlenbeck.hpp"
#include "ptsym/pt_analysis.hpp"

namespace {

using namespace ptsym;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitPropertyFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int emit(const std::string& command, const std::string& digest, double tol,
         ordered_json payload, bool pass) {
  ordered_json report;
  report["command"] = command;
  report["version"] = kVersion;
  report["tol"] = tol;
  report["input_digest"] = digest;
  report["pass"] = pass;
  report["payload"] = std::move(payload);
  std::cout << dump_g17(report) << "\n";
  return pass ? kExitPass : kExitPropertyFail;
}

ordered_json spectrum_to_json(const SpectrumReport& rep) {
  ordered_json j;
  switch (rep.spectral_class) {
    case SpectralClass::RealComplete: j["class"] = "RealComplete"; break;
    case SpectralClass::ConjugatePairs: j["class"] = "ConjugatePairs"; break;
    case SpectralClass::JordanBlock: j["class"] = "JordanBlock"; break;
  }
  auto eigs = ordered_json::array();
  for (const auto& e : rep.eigenvalues) {
    ordered_json item;
    item["value"] = complex_to_json(e.value);
    item["algebraic"] = e.algebraic;
    item["geometric"] = e.geometric;
    eigs.push_back(std::move(item));
  }
  j["eigenvalues"] = std::move(eigs);
  auto pairs = ordered_json::array();
  for (const auto& [a, b] : rep.pairing) pairs.push_back({a, b});
  j["pairing"] = std::move(pairs);
  j["pairing_violated"] = rep.pairing_violated;
  j["pairing_ambiguous"] = rep.pairing_ambiguous;
  j["best_effort"] = rep.best_effort;
  j["cluster_tol"] = rep.cluster_tol;
  return j;
}

ordered_json series_to_json(const TwoPointSeries& s) {
  ordered_json j;
  j["vacuum_label"] = s.vacuum_label;
  j["vacuum_energy_absorbed"] = s.vacuum_energy;
  auto terms = ordered_json::array();
  for (const auto& t : s.terms) {
    ordered_json item;
    item["amplitude"] = complex_to_json(t.amplitude);
    item["energy"] = complex_to_json(t.energy);
    terms.push_back(std::move(item));
  }
  j["terms"] = std::move(terms);
  return j;
}

std::string param_digest(std::initializer_list<double> params, const std::string& tag) {
  std::string s = tag;
  for (double p : params) s += "," + format_g17(p);
  return digest_hex(s);
}

// ---------------------------------------------------------------------------

int run_classify(const std::string& matrix_path, double tol) {
  const std::string bytes = file_bytes(matrix_path);
  const ComplexMatrix h = read_matrix_file(matrix_path);
  const SpectrumReport rep = classify_spectrum(h, tol);
  ordered_json payload = spectrum_to_json(rep);
  const SecularReality sec = secular_reality(h);
  payload["secular_max_imag"] = sec.max_imag;
  return emit("classify", digest_hex(bytes), tol, std::move(payload), true);
}

int run_find_pt(const std::string& matrix_path, double tol) {
  const std::string bytes = file_bytes(matrix_path);
  const ComplexMatrix h = read_matrix_file(matrix_path);
  const AntilinearSearch search = find_antilinear_symmetry(h, tol);
  ordered_json payload;
  payload["solution_space_dim"] = search.solution_space_dim;
  switch (search.status) {
    case AntilinearSearch::Status::Involutive: payload["symmetry"] = "involutive"; break;
    case AntilinearSearch::Status::NonInvolutive: payload["symmetry"] = "non-involutive"; break;
    case AntilinearSearch::Status::Absent: payload["symmetry"] = "absent"; break;
  }
  if (search.symmetry) {
    payload["A"] = matrix_to_json(search.symmetry->A);
    payload["involution_defect"] = search.symmetry->involution_defect;
    payload["intertwining_residual"] = search.symmetry->intertwining_residual;
  }
  return emit("find-pt", digest_hex(bytes), tol, std::move(payload), search.found());
}

int run_build_v(const std::string& matrix_path, double tol) {
  const std::string bytes = file_bytes(matrix_path);
  const ComplexMatrix h = read_matrix_file(matrix_path);
  const VOperator v = construct_V(h, tol);
  ordered_json payload;
  payload["V"] = matrix_to_json(v.V);
  payload["residual"] = v.residual;
  return emit("build-v", digest_hex(bytes), tol, std::move(payload), true);
}

int run_disguise(const std::string& matrix_path, double tol) {
  const std::string bytes = file_bytes(matrix_path);
  const ComplexMatrix h = read_matrix_file(matrix_path);
  const auto s = hermitianize(h, tol);
  ordered_json payload;
  payload["hermitian_in_disguise"] = s.has_value();
  if (s) {
    const ComplexMatrix conj_h = (*s) * h * inverse(*s);
    payload["S"] = matrix_to_json(*s);
    payload["hermiticity_defect"] = (conj_h - conj_h.adjoint()).norm_inf();
  } else {
    payload["class"] = spectrum_to_json(eigen_system(h, tol))["class"];
  }
  return emit("disguise", digest_hex(bytes), tol, std::move(payload), s.has_value());
}

int run_two_point(const std::string& matrix_path, const std::string& phi_path, double tol,
                  double tau_max, double tau_step) {
  const std::string bytes = file_bytes(matrix_path) + "|" + file_bytes(phi_path);
  const ComplexMatrix h = read_matrix_file(matrix_path);
  const ComplexMatrix phi = read_matrix_file(phi_path);
  const auto grid = default_tau_grid(tau_max, tau_step);

  ordered_json payload;
  // certify phi against a symmetry that intertwines both H and phi when one
  // exists; fall back to the H-only search otherwise
  AntilinearSearch search = find_joint_antilinear_symmetry(h, phi, tol);
  payload["jointly_certified"] = search.involutive();
  if (!search.involutive()) search = find_antilinear_symmetry(h, tol);
  if (search.involutive()) {
    const ComplexMatrix mapped =
        search.symmetry->A * phi.conjugate() * inverse(search.symmetry->A);
    payload["pt_even_defect"] = (mapped - phi).norm_inf();
  }
  const RealityCertificate cert = reality_certificate(h, phi, grid, tol);
  payload["series"] = series_to_json(cert.series);
  payload["max_imag"] = cert.max_imag;
  payload["reality"] = cert.pass;
  if (cert.witness) {
    ordered_json w;
    w["amplitude"] = complex_to_json(cert.witness->amplitude);
    w["energy"] = complex_to_json(cert.witness->energy);
    payload["witness"] = std::move(w);
  }
  return emit("two-point", digest_hex(bytes), tol, std::move(payload), cert.pass);
}

int run_pu_energy(const PUParams& params, int n_sites, double delta_tau, double tol,
                  double omega2_max, double omega2_step, const std::string& csv_path) {
  const LatticeSpec lattice{n_sites, delta_tau};
  ordered_json payload;
  std::string digest;

  if (omega2_step > 0.0) {
    std::vector<double> omegas;
    for (double w = params.omega2; w <= omega2_max + 0.5 * omega2_step; w += omega2_step)
      omegas.push_back(w);
    const auto points =
        sweep_omega2(params, lattice, omegas, /*with_energy=*/true, Execution::Parallel);
    bool all_positive = true;
    for (const auto& p : points) all_positive = all_positive && p.positive;
    payload["mode"] = "sweep";
    payload["points"] = points.size();
    payload["all_positive"] = all_positive;
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      write_sweep_csv(out, points);
      payload["csv"] = csv_path;
    }
    digest = param_digest({params.gamma, params.omega1, params.omega2, omega2_max, omega2_step,
                           double(n_sites), delta_tau},
                          "pu-energy-sweep");
    return emit("pu-energy", digest, tol, std::move(payload), all_positive);
  }

  const GroundEnergyResult res = ground_energy(params, delta_tau, lattice.total_time());
  payload["mode"] = "single";
  payload["E0"] = res.e0;
  payload["achieved_tol"] = res.achieved_tol;
  payload["converged"] = res.converged;
  auto rows = ordered_json::array();
  for (const auto& r : res.rows) {
    ordered_json item;
    item["T"] = r.total_time;
    item["F"] = r.free_energy;
    item["E0_estimate"] = r.e0_estimate;
    rows.push_back(std::move(item));
  }
  payload["rows"] = std::move(rows);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    write_energy_csv(out, res.rows);
    payload["csv"] = csv_path;
  }
  digest = param_digest({params.gamma, params.omega1, params.omega2, double(n_sites), delta_tau},
                        "pu-energy");
  return emit("pu-energy", digest, tol, std::move(payload), res.converged);
}

int run_pu_correlator(const PUParams& params, int n_sites, double delta_tau, double tol,
                      double tau_max, double tau_step, const std::string& csv_path) {
  const LatticeSpec lattice{n_sites, delta_tau};
  std::vector<double> taus;
  for (double t = 0.0; t <= tau_max + 0.5 * tau_step; t += tau_step) taus.push_back(t);
  const CorrelatorResult corr = lattice_correlator(params, lattice, taus);

  ordered_json payload;
  auto values = ordered_json::array();
  for (size_t i = 0; i < corr.taus.size(); ++i) values.push_back({corr.taus[i], corr.values[i]});
  payload["correlator"] = std::move(values);
  payload["decays"] = corr.decays;

  if (corr.decays && taus.size() >= 3) {
    if (std::abs(params.omega1 - params.omega2) > 1e-12) {
      const auto fit = fit_two_exponential(corr.taus, corr.values, params.omega1, params.omega2);
      payload["fit"] = {{"model", "c1*exp(-w1*tau) + c2*exp(-w2*tau)"},
                        {"c1", fit.c1},
                        {"c2", fit.c2},
                        {"rel_residual", fit.rel_residual}};
    } else {
      const auto fit = fit_linear_exponential(corr.taus, corr.values, params.omega1);
      payload["fit"] = {{"model", "(a + b*tau)*exp(-w*tau)"},
                        {"a", fit.a},
                        {"b", fit.b},
                        {"rel_residual", fit.rel_residual}};
    }
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    write_correlator_csv(out, corr);
    payload["csv"] = csv_path;
  }
  const std::string digest = param_digest(
      {params.gamma, params.omega1, params.omega2, double(n_sites), delta_tau, tau_max, tau_step},
      "pu-correlator");
  return emit("pu-correlator", digest, tol, std::move(payload), true);
}

int run_wedge(const PUParams& params, double theta_z, double theta_zdot, double tol) {
  const WedgeReport rep = wedge_scan(params, theta_z, theta_zdot);
  ordered_json payload;
  payload["theta_z"] = rep.theta_z;
  payload["theta_zdot"] = rep.theta_zdot;
  payload["re_z_per_unit_norm"] = rep.re_z;
  payload["re_zdot_per_unit_norm"] = rep.re_zdot;
  payload["z_term"] = damping_name(rep.z_term);
  payload["zdot_term"] = damping_name(rep.zdot_term);
  payload["both_damped"] = rep.both_damped();
  const std::string digest = param_digest(
      {params.epsilon, params.omega1, params.omega2, theta_z, theta_zdot}, "wedge");
  return emit("wedge", digest, tol, std::move(payload), true);
}

int run_algebra_check(double tol) {
  using K = PhasePolynomial::Kind;
  ordered_json checks = ordered_json::array();
  bool all = true;
  auto add = [&](const std::string& name, double defect, double bound) {
    const bool ok = defect <= bound;
    all = all && ok;
    ordered_json item;
    item["name"] = name;
    item["defect"] = defect;
    item["pass"] = ok;
    checks.push_back(std::move(item));
  };

  const auto q = PhasePolynomial::q(K::Quantum);
  const auto p = PhasePolynomial::p(K::Quantum);
  add("[q,p] = i", commutator(q, p).distance(PhasePolynomial::monomial(K::Quantum, 0, 0, {0, 1})),
      0.0);

  const auto cq = PhasePolynomial::q(K::Classical);
  const auto cp = PhasePolynomial::p(K::Classical);
  add("{q,p} = 1",
      poisson_bracket(cq, cp).distance(PhasePolynomial::monomial(K::Classical, 0, 0, 1.0)), 0.0);

  // Jacobi on a fixed cubic triple
  const auto u = PhasePolynomial::monomial(K::Classical, 2, 1, {1.0, 0.5});
  const auto v = PhasePolynomial::monomial(K::Classical, 1, 2, {-0.25, 2.0});
  const auto w = PhasePolynomial::monomial(K::Classical, 3, 0, {0.75, -1.0});
  PhasePolynomial jacobi = poisson_bracket(u, poisson_bracket(v, w));
  jacobi += poisson_bracket(v, poisson_bracket(w, u));
  jacobi += poisson_bracket(w, poisson_bracket(u, v));
  add("Jacobi identity", jacobi.distance(PhasePolynomial(K::Classical)), 0.0);

  double worst_flow = 0.0, worst_pt = 0.0, worst_classical = 0.0, worst_symplectic = 0.0;
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Complex omega(-0.9 + 0.45 * a, -0.8 + 0.55 * b);
      const auto qf = similarity_flow(q, omega);
      const auto pf = similarity_flow(p, omega);
      worst_flow = std::max(
          worst_flow,
          commutator(qf, pf).distance(PhasePolynomial::monomial(K::Quantum, 0, 0, {0, 1})));
      const auto rep = pt_conjugate_check(omega);
      worst_pt = std::max({worst_pt, rep.defect_q, rep.defect_p});
      worst_classical = std::max(worst_classical, classical_pt_transform(omega).max_defect);
      worst_symplectic = std::max(worst_symplectic, symplectic_check(symplectic_rotation(omega)));
    }
  }
  add("commutator preserved on omega grid", worst_flow, 1e-13);
  add("(PT)' q' (TP)' = -q', (PT)' p' (TP)' = +p'", worst_pt, 1e-13);
  add("classical (PT)' eta' = -sigma3 eta'", worst_classical, 1e-13);
  add("M J M^T = J for M(omega)", worst_symplectic, 1e-13);

  ordered_json payload;
  payload["checks"] = std::move(checks);
  return emit("algebra-check", digest_hex("algebra-check"), tol, std::move(payload), all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptsym: spectral, symmetry, and path-integral checks for small non-Hermitian Hamiltonians"};
  app.require_subcommand(1);

  std::string matrix_path, phi_path, csv_path;
  double tol = 1e-9;
  double tau_max = 5.0, tau_step = 0.25;
  PUParams params;
  params.gamma = 1.0;
  int n_sites = 200;
  double delta_tau = 0.1;
  double theta_z = 0.0, theta_zdot = 0.0;
  double omega2_max = 0.0, omega2_step = 0.0;

  auto add_tol = [&](CLI::App* cmd) { cmd->add_option("--tol", tol, "tolerance (default 1e-9)"); };
  auto add_matrix = [&](CLI::App* cmd) {
    cmd->add_option("--matrix", matrix_path, "matrix file (.json or .csv)")->required();
  };
  auto add_lattice = [&](CLI::App* cmd) {
    cmd->add_option("--omega1", params.omega1, "first frequency");
    cmd->add_option("--omega2", params.omega2, "second frequency");
    cmd->add_option("--gamma", params.gamma, "overall stiffness");
    cmd->add_option("--n-sites", n_sites, "interior lattice sites");
    cmd->add_option("--delta-tau", delta_tau, "lattice spacing");
    cmd->add_option("--csv", csv_path, "write CSV output to this path");
  };

  auto* classify = app.add_subcommand("classify", "spectral class and eigenvalue report");
  add_matrix(classify);
  add_tol(classify);

  auto* find_pt = app.add_subcommand("find-pt", "search for an antilinear symmetry A.K");
  add_matrix(find_pt);
  add_tol(find_pt);

  auto* build_v = app.add_subcommand("build-v", "construct V with H^dag V = V H");
  add_matrix(build_v);
  add_tol(build_v);

  auto* disguise = app.add_subcommand("disguise", "Hermitianize via S = V^(1/2) when real-complete");
  add_matrix(disguise);
  add_tol(disguise);

  auto* two_point = app.add_subcommand("two-point", "Euclidean two-point function and reality certificate");
  add_matrix(two_point);
  two_point->add_option("--phi", phi_path, "field operator matrix file")->required();
  two_point->add_option("--tau-max", tau_max, "largest Euclidean time");
  two_point->add_option("--tau-step", tau_step, "grid step");
  add_tol(two_point);

  auto* pu_energy = app.add_subcommand("pu-energy", "ground energy from lattice free-energy slopes");
  add_lattice(pu_energy);
  pu_energy->add_option("--omega2-max", omega2_max, "sweep omega2 up to this value");
  pu_energy->add_option("--omega2-step", omega2_step, "sweep step (enables sweep mode)");
  add_tol(pu_energy);

  auto* pu_corr = app.add_subcommand("pu-correlator", "lattice <z(tau) z(0)> with decay fits");
  add_lattice(pu_corr);
  pu_corr->add_option("--tau-max", tau_max, "largest correlator separation");
  pu_corr->add_option("--tau-step", tau_step, "correlator grid step");
  add_tol(pu_corr);

  auto* wedge = app.add_subcommand("wedge", "Stokes-wedge damping signs of the deformed action");
  wedge->add_option("--omega1", params.omega1, "first frequency");
  wedge->add_option("--omega2", params.omega2, "second frequency");
  wedge->add_option("--eps", params.epsilon, "deformation strength")->required();
  wedge->add_option("--theta-z", theta_z, "z contour angle (radians)");
  wedge->add_option("--theta-zdot", theta_zdot, "zdot contour angle (radians)");
  add_tol(wedge);

  auto* algebra = app.add_subcommand("algebra-check", "exact phase-space and Weyl-algebra identities");
  add_tol(algebra);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << std::flush;
    return kExitValidation;
  }

  try {
    if (app.got_subcommand(classify)) return run_classify(matrix_path, tol);
    if (app.got_subcommand(find_pt)) return run_find_pt(matrix_path, tol);
    if (app.got_subcommand(build_v)) return run_build_v(matrix_path, tol);
    if (app.got_subcommand(disguise)) return run_disguise(matrix_path, tol);
    if (app.got_subcommand(two_point))
      return run_two_point(matrix_path, phi_path, tol, tau_max, tau_step);
    if (app.got_subcommand(pu_energy))
      return run_pu_energy(params, n_sites, delta_tau, tol, omega2_max, omega2_step, csv_path);
    if (app.got_subcommand(pu_corr))
      return run_pu_correlator(params, n_sites, delta_tau, tol, tau_max, tau_step, csv_path);
    if (app.got_subcommand(wedge)) return run_wedge(params, theta_z, theta_zdot, tol);
    if (app.got_subcommand(algebra)) return run_algebra_check(tol);
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitNumerical;
  }
  std::cerr << "unknown command\n" << app.help() << std::flush;
  return kExitValidation;
}
