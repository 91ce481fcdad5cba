#include "ptsym/pais_uhlenbeck.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ptsym/format.hpp"

namespace ptsym {

void PUParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive");
  if (!(omega1 >= 0.0) || !(omega2 >= 0.0) || !std::isfinite(omega1) || !std::isfinite(omega2))
    throw ValidationError("frequencies must be non-negative");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("epsilon must be non-negative");
}

void LatticeSpec::validate() const {
  if (n_sites < 5) throw ValidationError("pentadiagonal stencil needs n_sites >= 5");
  if (!(delta_tau > 0.0) || !std::isfinite(delta_tau))
    throw ValidationError("delta_tau must be positive");
}

LatticeQuadraticForm::LatticeQuadraticForm(int n)
    : n_(n), d0_(n, 0.0), d1_(n > 1 ? n - 1 : 0, 0.0), d2_(n > 2 ? n - 2 : 0, 0.0) {
  if (n < 3) throw ValidationError("lattice form needs at least 3 sites");
}

double LatticeQuadraticForm::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ValidationError("index out of range");
  const int d = std::abs(i - j);
  const int lo = std::min(i, j);
  if (d == 0) return d0_[lo];
  if (d == 1) return d1_[lo];
  if (d == 2) return d2_[lo];
  return 0.0;
}

double& LatticeQuadraticForm::band(int diag, int i) {
  switch (diag) {
    case 0: return d0_[i];
    case 1: return d1_[i];
    default: return d2_[i];
  }
}

const double& LatticeQuadraticForm::band(int diag, int i) const {
  return const_cast<LatticeQuadraticForm*>(this)->band(diag, i);
}

LatticeQuadraticForm action_matrix(const PUParams& p, const LatticeSpec& l) {
  p.validate();
  l.validate();
  const int n = l.n_sites;
  const double dt = l.delta_tau;
  const double ws2 = p.omega1 * p.omega1 + p.omega2 * p.omega2;
  const double wp2 = p.omega1 * p.omega1 * p.omega2 * p.omega2;

  LatticeQuadraticForm k(n);

  // z'' rows: stencil (1, -2, 1)/dt^2 centered at each interior site,
  // Dirichlet zeros outside the lattice
  const double c4 = p.gamma * dt / (dt * dt * dt * dt);
  for (int m = 0; m < n; ++m) {
    const int pos[3] = {m - 1, m, m + 1};
    const double w[3] = {1.0, -2.0, 1.0};
    for (int a = 0; a < 3; ++a) {
      if (pos[a] < 0 || pos[a] >= n) continue;
      for (int b = a; b < 3; ++b) {
        if (pos[b] < 0 || pos[b] >= n) continue;
        k.band(pos[b] - pos[a], pos[a]) += c4 * w[a] * w[b];
      }
    }
  }

  // z' links: forward difference (z_{l} - z_{l-1})/dt for l = 0..n
  const double c2 = p.gamma * dt * ws2 / (dt * dt);
  for (int link = 0; link <= n; ++link) {
    const int lo = link - 1, hi = link;
    if (lo >= 0) k.band(0, lo) += c2;
    if (hi < n) k.band(0, hi) += c2;
    if (lo >= 0 && hi < n) k.band(1, lo) -= c2;
  }

  const double c0 = p.gamma * dt * wp2;
  for (int m = 0; m < n; ++m) k.band(0, m) += c0;

  return k;
}

namespace {

/// Banded LDL^T with half-bandwidth 2; returns the pivots.
std::vector<double> banded_pivots(const LatticeQuadraticForm& k) {
  const int n = k.size();
  std::vector<double> d(n, 0.0);
  // l[0][i] = L(i+1, i), l[1][i] = L(i+2, i)
  std::vector<double> l1(n, 0.0), l2(n, 0.0);

  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(k.at(i, i)));

  for (int i = 0; i < n; ++i) {
    double di = k.at(i, i);
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
    if (std::abs(di) <= 1e-300 * std::max(1.0, scale)) {
      std::ostringstream msg;
      msg << "singular action kernel: zero pivot at index " << i;
      throw NumericalError(msg.str(), di);
    }
    d[i] = di;
    if (i + 1 < n) {
      double v = k.at(i + 1, i);
      if (i >= 1) v -= l1[i - 1] * l2[i - 1] * d[i - 1];
      l1[i] = v / di;
    }
    if (i + 2 < n) l2[i] = k.at(i + 2, i) / di;
  }
  return d;
}

std::vector<double> banded_solve_unit(const LatticeQuadraticForm& k, int src) {
  const int n = k.size();
  std::vector<double> d(n, 0.0), l1(n, 0.0), l2(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double di = k.at(i, i);
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
    d[i] = di;
    if (i + 1 < n) {
      double v = k.at(i + 1, i);
      if (i >= 1) v -= l1[i - 1] * l2[i - 1] * d[i - 1];
      l1[i] = v / di;
    }
    if (i + 2 < n) l2[i] = k.at(i + 2, i) / di;
  }
  std::vector<double> x(n, 0.0);
  x[src] = 1.0;
  for (int i = 0; i < n; ++i) {  // L y = e_src
    if (i >= 1) x[i] -= l1[i - 1] * x[i - 1];
    if (i >= 2) x[i] -= l2[i - 2] * x[i - 2];
  }
  for (int i = 0; i < n; ++i) x[i] /= d[i];
  for (int i = n - 1; i >= 0; --i) {  // L^T x = y
    if (i + 1 < n) x[i] -= l1[i] * x[i + 1];
    if (i + 2 < n) x[i] -= l2[i] * x[i + 2];
  }
  return x;
}

}  // namespace

LogdetResult logdet_partition(const LatticeQuadraticForm& k) {
  const auto d = banded_pivots(k);
  LogdetResult out;
  out.positive = true;
  for (double piv : d) {
    if (piv <= 0.0) out.positive = false;
    out.logdet += std::log(std::abs(piv));
  }
  return out;
}

double normalized_free_energy(const PUParams& p, const LatticeSpec& l) {
  const LogdetResult res = logdet_partition(action_matrix(p, l));
  const double per_site = std::log(p.gamma / (l.delta_tau * l.delta_tau * l.delta_tau));
  return 0.5 * (res.logdet - l.n_sites * per_site);
}

GroundEnergyResult ground_energy(const PUParams& p, double delta_tau, double total_time) {
  p.validate();
  if (!(p.omega1 > 0.0) || !(p.omega2 > 0.0))
    throw ValidationError("ground energy extraction needs omega1, omega2 > 0");
  const int n_full = static_cast<int>(std::lround(total_time / delta_tau));
  if (n_full < 40) throw ValidationError("total_time/delta_tau too small for slope extraction");

  GroundEnergyResult out;
  const int fractions[4] = {n_full / 4, n_full / 2, (3 * n_full) / 4, n_full};
  for (int idx = 0; idx < 4; ++idx) {
    LatticeSpec l{fractions[idx], delta_tau};
    EnergyRow row;
    row.total_time = fractions[idx] * delta_tau;
    row.free_energy = normalized_free_energy(p, l);
    if (idx > 0) {
      const EnergyRow& prev = out.rows.back();
      row.e0_estimate = (row.free_energy - prev.free_energy) / (row.total_time - prev.total_time);
    }
    out.rows.push_back(row);
  }
  const double slope_last = out.rows[3].e0_estimate;
  const double slope_prev = out.rows[2].e0_estimate;
  out.e0 = slope_last;
  out.achieved_tol = std::abs(slope_last - slope_prev) / std::max(1e-15, std::abs(slope_last));
  out.converged = out.achieved_tol < 1e-2;
  return out;
}

CorrelatorResult lattice_correlator(const PUParams& p, const LatticeSpec& l,
                                    const std::vector<double>& tau_list) {
  const LatticeQuadraticForm k = action_matrix(p, l);
  if (!logdet_partition(k).positive)
    throw ValidationError("correlator needs a positive-definite action kernel");

  const int n = l.n_sites;
  const int src = std::clamp(static_cast<int>(std::lround(0.5 * (n + 1))) - 1, 0, n - 1);
  const auto col = banded_solve_unit(k, src);

  CorrelatorResult out;
  out.taus = tau_list;
  for (double tau : tau_list) {
    const int tgt = src + static_cast<int>(std::lround(tau / l.delta_tau));
    if (tgt < 0 || tgt >= n)
      throw ValidationError("tau reaches outside the lattice; enlarge total time");
    out.values.push_back(col[tgt]);
  }
  // an exponential scale shows as at least a halving over the window, while
  // the massless kernel only falls off polynomially toward the boundary
  if (!out.values.empty())
    out.decays = std::abs(out.values.back()) < 0.5 * std::abs(out.values.front());
  return out;
}

namespace {

struct Fit2x2 {
  // least squares for values ~ c1 * b1(tau) + c2 * b2(tau)
  double c1 = 0.0, c2 = 0.0, rel_residual = 0.0;
};

template <typename B1, typename B2>
Fit2x2 fit_two_basis(const std::vector<double>& taus, const std::vector<double>& values, B1 b1,
                     B2 b2) {
  if (taus.size() != values.size() || taus.size() < 3)
    throw ValidationError("fit needs matching tau/value lists with >= 3 points");
  double a11 = 0, a12 = 0, a22 = 0, r1 = 0, r2 = 0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double x1 = b1(taus[i]), x2 = b2(taus[i]);
    a11 += x1 * x1;
    a12 += x1 * x2;
    a22 += x2 * x2;
    r1 += x1 * values[i];
    r2 += x2 * values[i];
  }
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-300) throw NumericalError("degenerate fit basis", det);
  Fit2x2 f;
  f.c1 = (a22 * r1 - a12 * r2) / det;
  f.c2 = (a11 * r2 - a12 * r1) / det;
  double num = 0, den = 0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double model = f.c1 * b1(taus[i]) + f.c2 * b2(taus[i]);
    num += (values[i] - model) * (values[i] - model);
    den += values[i] * values[i];
  }
  f.rel_residual = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
  return f;
}

}  // namespace

TwoExponentialFit fit_two_exponential(const std::vector<double>& taus,
                                      const std::vector<double>& values, double w1, double w2) {
  const auto f = fit_two_basis(
      taus, values, [w1](double t) { return std::exp(-w1 * t); },
      [w2](double t) { return std::exp(-w2 * t); });
  return TwoExponentialFit{f.c1, f.c2, f.rel_residual};
}

LinearExponentialFit fit_linear_exponential(const std::vector<double>& taus,
                                            const std::vector<double>& values, double w) {
  const auto f = fit_two_basis(
      taus, values, [w](double t) { return std::exp(-w * t); },
      [w](double t) { return t * std::exp(-w * t); });
  return LinearExponentialFit{f.c1, f.c2, f.rel_residual};
}

WedgeReport wedge_scan(const PUParams& p, double theta_z, double theta_zdot) {
  p.validate();
  if (!(p.epsilon > 0.0)) throw ValidationError("wedge scan needs epsilon > 0");
  if (!std::isfinite(theta_z) || !std::isfinite(theta_zdot))
    throw ValidationError("contour angles must be finite");
  const double ws2 = p.omega1 * p.omega1 + p.omega2 * p.omega2;

  auto classify = [](double re, double cos_factor) {
    if (std::abs(cos_factor) <= 1e-12) return WedgeDamping::Marginal;
    return re < 0.0 ? WedgeDamping::Damped : WedgeDamping::Divergent;
  };

  WedgeReport rep;
  rep.theta_z = theta_z;
  rep.theta_zdot = theta_zdot;
  const double cz = std::cos(2.0 * theta_z);
  const double czd = std::cos(2.0 * theta_zdot);
  rep.re_z = p.epsilon * ws2 * cz;
  rep.re_zdot = -2.0 * p.epsilon * czd;
  rep.z_term = classify(rep.re_z, ws2 > 0.0 ? cz : 0.0);
  rep.zdot_term = classify(rep.re_zdot, czd);
  return rep;
}

const char* damping_name(WedgeDamping d) {
  switch (d) {
    case WedgeDamping::Damped: return "damped";
    case WedgeDamping::Divergent: return "divergent";
    default: return "marginal";
  }
}

std::vector<SweepPoint> sweep_omega2(const PUParams& base, const LatticeSpec& l,
                                     const std::vector<double>& omega2_values, bool with_energy,
                                     Execution exec) {
  base.validate();
  l.validate();
  const int count = static_cast<int>(omega2_values.size());
  std::vector<SweepPoint> points(count);

  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < count; ++i) {
    PUParams p = base;
    p.omega2 = omega2_values[i];
    SweepPoint pt;
    pt.omega1 = p.omega1;
    pt.omega2 = p.omega2;
    pt.n_sites = l.n_sites;
    pt.delta_tau = l.delta_tau;
    const LogdetResult res = logdet_partition(action_matrix(p, l));
    pt.logdet = res.logdet;
    pt.positive = res.positive;
    if (with_energy && p.omega1 > 0.0 && p.omega2 > 0.0)
      pt.e0_estimate = ground_energy(p, l.delta_tau, l.total_time()).e0;
    points[i] = pt;
  }
  return points;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
  os << "omega1,omega2,N,delta_tau,logdet,E0_estimate\n";
  for (const auto& p : points)
    os << format_g17(p.omega1) << ',' << format_g17(p.omega2) << ',' << p.n_sites << ','
       << format_g17(p.delta_tau) << ',' << format_g17(p.logdet) << ','
       << format_g17(p.e0_estimate) << '\n';
}

void write_correlator_csv(std::ostream& os, const CorrelatorResult& corr) {
  os << "tau,value\n";
  for (size_t i = 0; i < corr.taus.size(); ++i)
    os << format_g17(corr.taus[i]) << ',' << format_g17(corr.values[i]) << '\n';
}

void write_energy_csv(std::ostream& os, const std::vector<EnergyRow>& rows) {
  os << "T,F,E0_estimate\n";
  for (const auto& r : rows)
    os << format_g17(r.total_time) << ',' << format_g17(r.free_energy) << ','
       << format_g17(r.e0_estimate) << '\n';
}

}  // namespace ptsym
