#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ptsym/complex_matrix.hpp"

namespace ptsym {

/// Polynomial with complex coefficients, degree-ascending storage.
/// Invariant: nonzero leading coefficient, coeffs.size() == degree+1.
class PolynomialC {
 public:
  explicit PolynomialC(std::vector<Complex> coeffs);
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex eval(Complex z) const;
  PolynomialC derivative() const;
  /// sum_k |c_k| |z|^k, the backward-error scale at z.
  double scale_at(Complex z) const;

 private:
  std::vector<Complex> coeffs_;
};

/// Coefficients of det(H - lambda I), leading coefficient (-1)^n.
/// Faddeev-LeVerrier recursion; exact for integer entries up to rounding.
PolynomialC char_poly(const ComplexMatrix& h);

/// All roots with multiplicity via Aberth-Ehrlich simultaneous iteration.
/// Deterministic start (circle of radius 1 + max|c_k/c_n|), cap 500 sweeps,
/// output sorted by (Re, Im). Throws NumericalError on non-convergence.
std::vector<Complex> poly_roots(const PolynomialC& p, double tol);

struct NullspaceResult {
  int rank = 0;
  std::vector<std::vector<Complex>> basis;  // orthonormal, spans the numerical nullspace
};

/// Rank and orthonormal nullspace basis via Gaussian elimination with full
/// pivoting; pivot threshold tol * ||A||_inf.
NullspaceResult rank_nullspace(const ComplexMatrix& a, double tol);

/// Full-pivot LU helpers (n <= 16 scale; no external decompositions).
Complex determinant(const ComplexMatrix& a);
std::optional<ComplexMatrix> try_inverse(const ComplexMatrix& a, double tol);
ComplexMatrix inverse(const ComplexMatrix& a);  // throws NumericalError when singular

enum class SpectralClass { RealComplete, ConjugatePairs, JordanBlock };

struct EigenvalueInfo {
  Complex value;       // cluster representative (mean of clustered roots)
  int algebraic = 0;
  int geometric = 0;
};

/// Eigenvalue report: clustered roots with multiplicities, a spectral class
/// tag, and the conjugate pairing i <-> j with E_j ~ conj(E_i) when one exists.
struct SpectrumReport {
  std::vector<EigenvalueInfo> eigenvalues;  // sorted by (Re, Im)
  SpectralClass spectral_class = SpectralClass::RealComplete;
  std::vector<std::pair<int, int>> pairing;  // indices into eigenvalues, i < j
  bool pairing_violated = false;             // some non-real eigenvalue lacks a partner
  bool pairing_ambiguous = false;            // two partner candidates within cluster_tol
  bool best_effort = false;                  // n > 16, outside the exact-style guarantees
  double cluster_tol = 0.0;
  int dim = 0;

  bool is_real(int i) const;
  /// Partner index under the conjugate pairing (i itself for real eigenvalues).
  int partner(int i) const;
};

inline constexpr double kDefaultClusterScale = 1e-6;

/// Roots of char_poly clustered at cluster_scale*(1+max|lambda|), geometric
/// multiplicities from rank_nullspace(H - lambda I), class per the report
/// invariants. n > 16 is allowed but treated as best effort.
SpectrumReport eigen_system(const ComplexMatrix& h, double tol,
                            double cluster_scale = kDefaultClusterScale);

}  // namespace ptsym
