#pragma once

#include <optional>
#include <vector>

#include "ptsym/linalg.hpp"

namespace ptsym {

/// Linear part A of an antilinear symmetry PT = A.K (K = entrywise
/// conjugation) certified against a particular Hamiltonian.
struct AntilinearSymmetry {
  ComplexMatrix A;
  double involution_defect = 0.0;     // ||A conj(A) - I||_inf
  double intertwining_residual = 0.0; // ||A conj(H) - H A||_inf / (||A|| ||H||)
};

/// Outcome of the antilinear-symmetry search. NonInvolutive is reported
/// distinctly: an invertible intertwiner exists but none with (AK)^2 = I
/// was found in the solution space.
struct AntilinearSearch {
  enum class Status { Involutive, NonInvolutive, Absent };
  Status status = Status::Absent;
  std::optional<AntilinearSymmetry> symmetry;
  int solution_space_dim = 0;

  bool found() const { return status != Status::Absent; }
  bool involutive() const { return status == Status::Involutive; }
};

/// Search for invertible A with A conj(H) = H A by flattening to an
/// n^2-dimensional homogeneous system; invertible elements are detected by
/// sampling <= 32 deterministic random combinations of the solution basis.
/// Dimension capped at 16.
AntilinearSearch find_antilinear_symmetry(const ComplexMatrix& h, double tol);

/// Same search restricted to the A that intertwine both H and a candidate
/// field operator (A conj(phi) = phi A as well). A success certifies phi as
/// PT-even against a bona fide symmetry; the joint constraint usually
/// removes the phase/commutant freedom of the H-only search.
AntilinearSearch find_joint_antilinear_symmetry(const ComplexMatrix& h,
                                                const ComplexMatrix& phi, double tol);

struct SecularReality {
  PolynomialC coeffs;     // det(H - lambda I), leading coefficient (-1)^n
  double max_imag = 0.0;  // largest |Im| over coefficients
};

/// Reality of the secular determinant: all-real coefficients characterize
/// antilinear symmetry of H.
SecularReality secular_reality(const ComplexMatrix& h);

/// eigen_system plus conjugate-pairing verification.
SpectrumReport classify_spectrum(const ComplexMatrix& h, double tol);

/// Right eigencolumns R, left eigenrows L = R^{-1}, the conjugate-pairing
/// permutation at column level, and per-column energies.
///
/// When an involutive antilinear symmetry A exists, eigenvector phases are
/// fixed so that A conj(v_n) = v_{perm[n]}; the elementwise reality and
/// pairing relations for PT-even operators hold only in such a basis.
struct BiorthogonalSystem {
  ComplexMatrix R;
  ComplexMatrix L;
  std::vector<int> perm;          // column-level pairing, perm[perm[i]] == i
  std::vector<Complex> energies;  // per column, ascending (Re, Im)
  bool pairing_violated = false;
  bool phase_fixed = false;       // PT phase convention applied

  int dim() const { return R.dim(); }
  std::vector<Complex> right(int col) const;
  std::vector<Complex> left(int row) const;
};

/// Throws ValidationError("non-diagonalizable...") on Jordan input and
/// NumericalError when the eigenbasis condition number exceeds 1/tol.
/// The two-argument form searches for a symmetry itself; pass an explicit A
/// to fix phases against the symmetry that certifies a field operator.
BiorthogonalSystem build_biorthogonal(const ComplexMatrix& h, double tol);
BiorthogonalSystem build_biorthogonal(const ComplexMatrix& h, double tol,
                                      const AntilinearSymmetry& a);

/// Invertible V with H^dag V = V H; supplies left vectors via <L| = <R|V.
struct VOperator {
  ComplexMatrix V;
  double residual = 0.0;  // ||H^dag V - V H||_inf / (||H|| ||V||)
};

/// Real-complete case: V = (R R^dag)^{-1}, Hermitian positive-definite.
/// Conjugate-pair case: V = (R^dag)^{-1} Pi R^{-1}.
/// Jordan case: generic invertible element of the intertwining solution space.
/// Requires an antilinear symmetry (ValidationError otherwise).
VOperator construct_V(const ComplexMatrix& h, double tol);

/// S = V^{1/2} for the real-complete class, so that S H S^{-1} is Hermitian;
/// nullopt when the spectrum is not real-complete and no Hermitian conjugate
/// exists.
std::optional<ComplexMatrix> hermitianize(const ComplexMatrix& h, double tol);

struct NormInvarianceEntry {
  int i = 0;  // right eigenvector index
  int j = 0;  // left (Dirac-conjugated) index
  Complex overlap0;       // <R_j|V|R_i> at t = 0
  double max_variation = 0.0;
  double modulus = 0.0;
  bool h4_admissible = false;  // E_i == conj(E_j) within tolerance
  bool pass = false;
};

struct NormInvarianceReport {
  std::vector<NormInvarianceEntry> entries;
  bool pass = true;
};

/// Evolves every overlap <L_j(t)|R_i(t)> = <R_j|V|R_i> e^{-i(E_i - conj(E_j))t}
/// over the grid and checks that overlaps are time-independent exactly for the
/// admissible pairs (equal real parts, opposite imaginary parts), and nonzero
/// only for those.
NormInvarianceReport norm_invariance_check(const ComplexMatrix& h,
                                           const std::vector<double>& t_grid, double tol);

/// True iff A maps every eigenvector with eigenvalue E to an eigenvector with
/// eigenvalue conj(E), i.e. PT = A.K maps solutions to solutions.
bool pt_maps_solutions(const ComplexMatrix& h, const ComplexMatrix& a, double tol);

}  // namespace ptsym
