#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptsym/pt_analysis.hpp"

namespace ptsym {

/// Field operator certified PT-even against a particular antilinear symmetry:
/// A conj(phi) A^{-1} = phi within tolerance. The certifying symmetry rides
/// along so that eigenbasis phases downstream are fixed against the same A.
struct FieldOperator {
  ComplexMatrix phi;
  double pt_even_defect = 0.0;
  AntilinearSymmetry symmetry;
};

/// Certify phi as PT-even under the symmetry A. Throws ValidationError
/// ("not PT-even", carrying the defect in the message) above tolerance.
FieldOperator check_pt_even(const ComplexMatrix& phi, const AntilinearSymmetry& a, double tol);

struct ElementRelation {
  std::string description;
  int n = 0, m = 0;
  double defect = 0.0;
  bool pass = false;
};

/// Matrix elements phi_nm = L_n phi R_m with the reality/pairing report:
/// real-sector elements must be real, cross-sector elements must satisfy
/// phi_nm = conj(phi_{perm(n) perm(m)}).
struct LrElements {
  ComplexMatrix elements;
  std::vector<ElementRelation> relations;
  double max_defect = 0.0;
  bool all_pass = true;
};

LrElements lr_matrix_elements(const FieldOperator& phi, const BiorthogonalSystem& bio,
                              double tol);

struct TwoPointTerm {
  Complex amplitude;
  Complex energy;  // enters as exp(-energy * tau); vacuum real part absorbed
};

/// Spectral form of the Euclidean two-point function
/// G(tau) = sum_k amplitude_k exp(-energy_k tau).
struct TwoPointSeries {
  std::vector<TwoPointTerm> terms;
  std::string vacuum_label;
  double vacuum_energy = 0.0;  // Re E_0, absorbed into the energies
};

Complex evaluate(const TwoPointSeries& series, double tau);

std::vector<double> default_tau_grid(double tau_max = 5.0, double step = 0.25);

struct TwoPointResult {
  TwoPointSeries series;
  double max_imag = 0.0;
};

/// Two-point function in the eigenbasis. Vacuum = lowest Re E state; in the
/// mixed sector the lowest state must have real energy (ValidationError
/// otherwise); with no real eigenvalue at all the symmetrized combination
/// over the lowest conjugate pair is used.
TwoPointResult two_point_euclidean(const ComplexMatrix& h, const FieldOperator& phi,
                                   const std::vector<double>& tau_grid, double tol);

struct RealityCertificate {
  bool pass = false;
  double max_imag = 0.0;
  std::optional<TwoPointTerm> witness;  // worst offending term on failure
  TwoPointSeries series;
};

/// Reality certificate for the Euclidean continuation; no PT preconditions,
/// so it runs (and fails with a witness) on non-PT-symmetric input.
RealityCertificate reality_certificate(const ComplexMatrix& h, const ComplexMatrix& phi,
                                       const std::vector<double>& tau_grid, double tol);

}  // namespace ptsym
