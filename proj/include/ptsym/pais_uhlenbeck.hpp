#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ptsym/errors.hpp"

namespace ptsym {

/// Parameters of the fourth-order oscillator
/// L = (gamma/2) [zdd^2 - (w1^2 + w2^2) zd^2 + w1^2 w2^2 z^2],
/// plus the Feynman deformation strength epsilon used by the wedge scan.
struct PUParams {
  double gamma = 1.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double epsilon = 0.0;

  void validate() const;
};

/// Euclidean-time lattice: n_sites interior points, Dirichlet zero at both
/// ends, spacing delta_tau.
struct LatticeSpec {
  int n_sites = 0;
  double delta_tau = 0.0;

  void validate() const;
  double total_time() const { return (n_sites + 1) * delta_tau; }
};

/// Symmetric pentadiagonal kernel K of the discretized Euclidean action
/// S_E = (1/2) z^T K z.
class LatticeQuadraticForm {
 public:
  explicit LatticeQuadraticForm(int n);
  int size() const { return n_; }
  double at(int i, int j) const;
  double& band(int diag, int i);              // diag in {0,1,2}, i-th entry
  const double& band(int diag, int i) const;

 private:
  int n_;
  std::vector<double> d0_, d1_, d2_;
};

/// Assemble K from the central second difference for z'' and forward first
/// differences for z'; positive-definite for any real omegas >= 0.
LatticeQuadraticForm action_matrix(const PUParams& p, const LatticeSpec& l);

struct LogdetResult {
  double logdet = 0.0;   // sum log|pivot|
  bool positive = false; // all pivots > 0, i.e. det(K)^{-1/2} is real
};

/// Banded Cholesky-type LDL^T; throws NumericalError (with the pivot index in
/// the message) on an exactly singular pivot.
LogdetResult logdet_partition(const LatticeQuadraticForm& k);

/// Free energy with the per-site scale log(gamma / delta_tau^3) subtracted,
/// so that differences at equal delta_tau isolate the ground energy.
double normalized_free_energy(const PUParams& p, const LatticeSpec& l);

struct EnergyRow {
  double total_time = 0.0;
  double free_energy = 0.0;
  double e0_estimate = 0.0;  // slope against the previous row; 0 for the first
};

struct GroundEnergyResult {
  double e0 = 0.0;
  double achieved_tol = 0.0;  // spread between the two largest-T slopes
  bool converged = false;
  std::vector<EnergyRow> rows;
};

/// E0 from large-T slopes of the normalized free energy, evaluated on the
/// family N/4, N/2, 3N/4, N at fixed delta_tau. Requires omega1, omega2 > 0.
GroundEnergyResult ground_energy(const PUParams& p, double delta_tau, double total_time);

struct CorrelatorResult {
  std::vector<double> taus;
  std::vector<double> values;  // <z(tau) z(0)> = K^{-1} row at the mid-lattice source
  bool decays = false;
};

CorrelatorResult lattice_correlator(const PUParams& p, const LatticeSpec& l,
                                    const std::vector<double>& tau_list);

struct TwoExponentialFit {
  double c1 = 0.0, c2 = 0.0;
  double rel_residual = 0.0;
};
TwoExponentialFit fit_two_exponential(const std::vector<double>& taus,
                                      const std::vector<double>& values, double w1, double w2);

struct LinearExponentialFit {
  double a = 0.0, b = 0.0;  // (a + b tau) e^{-w tau}
  double rel_residual = 0.0;
};
LinearExponentialFit fit_linear_exponential(const std::vector<double>& taus,
                                            const std::vector<double>& values, double w);

enum class WedgeDamping { Damped, Divergent, Marginal };

/// Sign of Re(i Delta S) per unit path norm on rays z = e^{i theta_z} |z|,
/// zdot = e^{i theta_zdot} |zdot|; the deformation contributes
/// -2 eps cos(2 theta_zdot) |zdot|^2 + eps (w1^2 + w2^2) cos(2 theta_z) |z|^2.
struct WedgeReport {
  double theta_z = 0.0, theta_zdot = 0.0;
  double re_z = 0.0, re_zdot = 0.0;
  WedgeDamping z_term = WedgeDamping::Marginal;
  WedgeDamping zdot_term = WedgeDamping::Marginal;

  bool both_damped() const {
    return z_term == WedgeDamping::Damped && zdot_term == WedgeDamping::Damped;
  }
};

WedgeReport wedge_scan(const PUParams& p, double theta_z, double theta_zdot);

const char* damping_name(WedgeDamping d);

// ---------------------------------------------------------------------------
// Parameter sweeps: independent lattice evaluations fan out across threads;
// the serial path is kept as the reference and must agree bit for bit.
// ---------------------------------------------------------------------------

struct SweepPoint {
  double omega1 = 0.0, omega2 = 0.0;
  int n_sites = 0;
  double delta_tau = 0.0;
  double logdet = 0.0;
  bool positive = false;
  double e0_estimate = 0.0;
};

enum class Execution { Serial, Parallel };

std::vector<SweepPoint> sweep_omega2(const PUParams& base, const LatticeSpec& l,
                                     const std::vector<double>& omega2_values,
                                     bool with_energy, Execution exec);

/// CSV: omega1,omega2,N,delta_tau,logdet,E0_estimate
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);
/// CSV: tau,value
void write_correlator_csv(std::ostream& os, const CorrelatorResult& corr);
/// CSV: T,F,E0_estimate
void write_energy_csv(std::ostream& os, const std::vector<EnergyRow>& rows);

}  // namespace ptsym
