#include "ptsym/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "ptsym/errors.hpp"

namespace ptsym {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double acc = 1.0;
  for (int i = 0; i < k; ++i) acc = acc * double(n - i) / double(i + 1);
  return acc;
}

double factorial(int k) {
  double acc = 1.0;
  for (int i = 2; i <= k; ++i) acc *= double(i);
  return acc;
}

Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_kind(const PhasePolynomial& x, PhasePolynomial::Kind kind, const char* what) {
  if (x.kind() != kind) throw ValidationError(what);
}

}  // namespace

PhasePolynomial PhasePolynomial::monomial(Kind kind, int qpow, int ppow, Complex coeff) {
  PhasePolynomial x(kind);
  x.add_term(qpow, ppow, coeff);
  return x;
}

Complex PhasePolynomial::coeff(int qpow, int ppow) const {
  const auto it = terms_.find({qpow, ppow});
  return it == terms_.end() ? Complex(0.0) : it->second;
}

double PhasePolynomial::distance(const PhasePolynomial& other) const {
  double worst = 0.0;
  for (const auto& [key, c] : terms_) worst = std::max(worst, std::abs(c - other.coeff(key.first, key.second)));
  for (const auto& [key, c] : other.terms_)
    worst = std::max(worst, std::abs(c - coeff(key.first, key.second)));
  return worst;
}

void PhasePolynomial::add_term(int qpow, int ppow, Complex coeff) {
  if (qpow < 0 || ppow < 0) throw ValidationError("negative exponent");
  if (coeff == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace({qpow, ppow}, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& o) {
  if (o.kind_ != kind_) throw ValidationError("mixing classical and quantum polynomials");
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& o) {
  if (o.kind_ != kind_) throw ValidationError("mixing classical and quantum polynomials");
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

PhasePolynomial classical_product(const PhasePolynomial& u, const PhasePolynomial& v) {
  require_kind(u, PhasePolynomial::Kind::Classical, "classical_product needs classical inputs");
  require_kind(v, PhasePolynomial::Kind::Classical, "classical_product needs classical inputs");
  PhasePolynomial out(PhasePolynomial::Kind::Classical);
  for (const auto& [ka, ca] : u.terms())
    for (const auto& [kb, cb] : v.terms())
      out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return out;
}

namespace {

PhasePolynomial derivative(const PhasePolynomial& x, bool by_q) {
  PhasePolynomial out(x.kind());
  for (const auto& [key, c] : x.terms()) {
    const int a = key.first, b = key.second;
    if (by_q && a > 0) out.add_term(a - 1, b, double(a) * c);
    if (!by_q && b > 0) out.add_term(a, b - 1, double(b) * c);
  }
  return out;
}

}  // namespace

PhasePolynomial poisson_bracket(const PhasePolynomial& u, const PhasePolynomial& v) {
  require_kind(u, PhasePolynomial::Kind::Classical, "poisson_bracket needs classical inputs");
  require_kind(v, PhasePolynomial::Kind::Classical, "poisson_bracket needs classical inputs");
  PhasePolynomial out = classical_product(derivative(u, true), derivative(v, false));
  out -= classical_product(derivative(u, false), derivative(v, true));
  return out;
}

PhasePolynomial weyl_product(const PhasePolynomial& a, const PhasePolynomial& b) {
  require_kind(a, PhasePolynomial::Kind::Quantum, "weyl_product needs quantum inputs");
  require_kind(b, PhasePolynomial::Kind::Quantum, "weyl_product needs quantum inputs");
  PhasePolynomial out(PhasePolynomial::Kind::Quantum);
  // q^a1 p^b1 q^a2 p^b2 with p^b q^a = sum_k k! C(a,k) C(b,k) (-i)^k q^{a-k} p^{b-k}
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const int b1 = ka.second, a2 = kb.first;
      const int kmax = std::min(b1, a2);
      for (int k = 0; k <= kmax; ++k) {
        const Complex reorder =
            factorial(k) * binomial(a2, k) * binomial(b1, k) * i_power(3 * k);  // (-i)^k
        out.add_term(ka.first + a2 - k, b1 + kb.second - k, ca * cb * reorder);
      }
    }
  }
  return out;
}

PhasePolynomial commutator(const PhasePolynomial& a, const PhasePolynomial& b) {
  PhasePolynomial out = weyl_product(a, b);
  out -= weyl_product(b, a);
  return out;
}

PhasePolynomial similarity_flow(const PhasePolynomial& x, Complex omega) {
  PhasePolynomial out(x.kind());
  for (const auto& [key, c] : x.terms()) {
    const Complex factor = std::exp(Complex(0.0, -1.0) * omega * double(key.first - key.second));
    out.add_term(key.first, key.second, c * factor);
  }
  return out;
}

PhasePolynomial pt_conjugate(const PhasePolynomial& x) {
  PhasePolynomial out(x.kind());
  for (const auto& [key, c] : x.terms()) {
    const double sign = (key.first % 2 == 0) ? 1.0 : -1.0;
    out.add_term(key.first, key.second, sign * std::conj(c));
  }
  return out;
}

PhasePolynomial pt_conjugate_transformed(const PhasePolynomial& x, Complex omega) {
  return similarity_flow(similarity_flow(pt_conjugate(x), std::conj(omega)), omega);
}

// ---------------------------------------------------------------------------
// 2x2 checks
// ---------------------------------------------------------------------------

double symplectic_check(const ComplexMatrix& m) {
  if (m.dim() != 2) throw ValidationError("symplectic check is for 2x2 maps");
  const ComplexMatrix j = ComplexMatrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}});
  return (m * j * m.transpose() - j).norm_inf();
}

ComplexMatrix symplectic_rotation(Complex omega) {
  const Complex f = std::exp(Complex(0.0, -1.0) * omega);
  return ComplexMatrix::from_rows({{f, 0.0}, {0.0, 1.0 / f}});
}

ClassicalPtReport classical_pt_transform(Complex omega) {
  const ComplexMatrix m = symplectic_rotation(omega);
  const ComplexMatrix minus_sigma3 = ComplexMatrix::from_rows({{-1.0, 0.0}, {0.0, 1.0}});
  ClassicalPtReport rep;
  rep.linear_part = m * minus_sigma3 * symplectic_rotation(std::conj(omega));

  const std::vector<std::vector<Complex>> samples = {
      {1.0, 2.0}, {0.0, 0.0}, {-0.7, 0.3}, {2.5, -4.0}};
  for (const auto& eta : samples) {
    const auto eta_primed = m.apply(eta);
    std::vector<Complex> conj_primed(2);
    for (int i = 0; i < 2; ++i) conj_primed[i] = std::conj(eta_primed[i]);
    const auto lhs = rep.linear_part.apply(conj_primed);
    const auto rhs = minus_sigma3.apply(eta_primed);
    for (int i = 0; i < 2; ++i)
      rep.max_defect = std::max(rep.max_defect, std::abs(lhs[i] - rhs[i]));
  }
  rep.pass = rep.max_defect <= 1e-13;
  return rep;
}

QuantumPtReport pt_conjugate_check(Complex omega) {
  using K = PhasePolynomial::Kind;
  const PhasePolynomial qp = similarity_flow(PhasePolynomial::q(K::Quantum), omega);
  const PhasePolynomial pp = similarity_flow(PhasePolynomial::p(K::Quantum), omega);

  QuantumPtReport rep;
  rep.defect_q = pt_conjugate_transformed(qp, omega).distance(Complex(-1.0) * qp);
  rep.defect_p = pt_conjugate_transformed(pp, omega).distance(pp);
  rep.pass = rep.defect_q <= 1e-13 && rep.defect_p <= 1e-13;
  return rep;
}

}  // namespace ptsym
