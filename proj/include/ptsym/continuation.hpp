#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ptsym/complex_matrix.hpp"

namespace ptsym {

/// Polynomial in the phase-space symbols q, p with complex coefficients.
/// Classical polynomials commute; quantum ones are kept normal-ordered
/// (every q to the left of every p) under [q, p] = i.
class PhasePolynomial {
 public:
  enum class Kind { Classical, Quantum };
  using Key = std::pair<int, int>;  // (power of q, power of p)

  explicit PhasePolynomial(Kind kind) : kind_(kind) {}
  static PhasePolynomial monomial(Kind kind, int qpow, int ppow, Complex coeff);
  static PhasePolynomial q(Kind kind) { return monomial(kind, 1, 0, 1.0); }
  static PhasePolynomial p(Kind kind) { return monomial(kind, 0, 1, 1.0); }

  Kind kind() const { return kind_; }
  const std::map<Key, Complex>& terms() const { return terms_; }
  Complex coeff(int qpow, int ppow) const;
  bool empty() const { return terms_.empty(); }
  /// max |coefficient| of the difference against another polynomial
  double distance(const PhasePolynomial& other) const;

  PhasePolynomial& operator+=(const PhasePolynomial& o);
  PhasePolynomial& operator-=(const PhasePolynomial& o);
  PhasePolynomial& operator*=(Complex s);
  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
  friend PhasePolynomial operator*(Complex s, PhasePolynomial a) { return a *= s; }

  void add_term(int qpow, int ppow, Complex coeff);  // drops exact zeros

 private:
  Kind kind_;
  std::map<Key, Complex> terms_;
};

/// {u, v} = du/dq dv/dp - du/dp dv/dq, classical inputs only.
PhasePolynomial poisson_bracket(const PhasePolynomial& u, const PhasePolynomial& v);

/// Commutative product of classical polynomials.
PhasePolynomial classical_product(const PhasePolynomial& u, const PhasePolynomial& v);

/// Normal-ordered product under [q, p] = i; the reordering coefficients are
/// exact integers, so products of integer-coefficient inputs stay exact.
PhasePolynomial weyl_product(const PhasePolynomial& a, const PhasePolynomial& b);

PhasePolynomial commutator(const PhasePolynomial& a, const PhasePolynomial& b);

/// Conjugation by exp(omega p q): each monomial q^a p^b picks up the exact
/// eigenfactor e^{-i omega (a-b)}, so q -> e^{-i omega} q, p -> e^{+i omega} p.
PhasePolynomial similarity_flow(const PhasePolynomial& x, Complex omega);

/// Base antilinear rule: q -> -q, p -> +p, coefficients conjugated.
PhasePolynomial pt_conjugate(const PhasePolynomial& x);

/// Action of the transformed operator: flow by conj(omega), then omega,
/// applied to the base conjugate (the composition e^{w pq} e^{w* pq} PT ...).
PhasePolynomial pt_conjugate_transformed(const PhasePolynomial& x, Complex omega);

// ---------------------------------------------------------------------------
// 2x2 phase-space checks
// ---------------------------------------------------------------------------

/// M J M^T with J = [[0,1],[-1,0]]; zero defect characterizes symplectic maps.
double symplectic_check(const ComplexMatrix& m);

/// exp(-i omega sigma3) = diag(e^{-i omega}, e^{+i omega}), symplectic for
/// every complex omega.
ComplexMatrix symplectic_rotation(Complex omega);

struct ClassicalPtReport {
  ComplexMatrix linear_part;  // M (-sigma3) exp(-i conj(omega) sigma3)
  double max_defect = 0.0;    // over the sampled real phase-space points
  bool pass = false;
};

/// Verifies that the transformed operator sends eta' = M eta to -sigma3 eta'
/// for real eta, i.e. primed variables transform like unprimed ones.
ClassicalPtReport classical_pt_transform(Complex omega);

struct QuantumPtReport {
  double defect_q = 0.0;  // (PT)' q' (TP)' + q'
  double defect_p = 0.0;  // (PT)' p' (TP)' - p'
  bool pass = false;
};

QuantumPtReport pt_conjugate_check(Complex omega);

}  // namespace ptsym
