#pragma once

// Shared instance generators and small independent oracles used by the unit
// and acceptance suites. Everything here is deliberately separate from the
// library's computational path: 2x2 spectra come from the quadratic formula,
// PT instances from the explicit construction H = B + A conj(B) A^{-1}.

#include <cmath>
#include <random>
#include <vector>

#include "ptsym/complex_matrix.hpp"
#include "ptsym/linalg.hpp"

namespace corpus {

using ptsym::Complex;
using ptsym::ComplexMatrix;

/// The 2x2 family [[1+i, s], [s, 1-i]] with spectrum 1 +/- sqrt(s^2 - 1).
inline ComplexMatrix m_of_s(double s) {
  return ComplexMatrix::from_rows({{Complex(1.0, 1.0), Complex(s, 0.0)},
                                   {Complex(s, 0.0), Complex(1.0, -1.0)}});
}

inline ComplexMatrix sigma1() {
  return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

/// Independent 2x2 spectrum oracle: quadratic formula on (trace, det).
inline std::pair<Complex, Complex> quadratic_eigs(const ComplexMatrix& h) {
  const Complex tr = h(0, 0) + h(1, 1);
  const Complex det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

inline ComplexMatrix random_complex(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  ComplexMatrix b = random_complex(n, rng);
  ComplexMatrix h = b + b.adjoint();
  return 0.5 * h;
}

/// Random real orthogonal involution: A = Q diag(+/-1) Q^T.
inline ComplexMatrix random_real_involution(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  // Gram-Schmidt on random real vectors
  std::vector<std::vector<double>> q;
  while (static_cast<int>(q.size()) < n) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    for (const auto& w : q) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += w[i] * v[i];
      for (int i = 0; i < n; ++i) v[i] -= d * w[i];
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-3) continue;
    for (auto& x : v) x /= nrm;
    q.push_back(std::move(v));
  }
  ComplexMatrix a(n);
  for (int k = 0; k < n; ++k) {
    const double sign = coin(rng) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += Complex(sign * q[k][i] * q[k][j], 0.0);
  }
  return a;
}

struct PtInstance {
  ComplexMatrix h;
  ComplexMatrix a;  // involutive antilinear symmetry of h, A conj(H) A^{-1} = H
};

/// H = B + A conj(B) A^{-1} is antilinearly symmetric under A by construction.
inline PtInstance random_pt_instance(int n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_real_involution(n, rng);
  const ComplexMatrix b = random_complex(n, rng);
  return PtInstance{b + a * b.conjugate() * a, a};
}

/// phi = C + A conj(C) A^{-1} is PT-even under the same A.
inline ComplexMatrix random_pt_even_phi(int n, const ComplexMatrix& a, std::mt19937_64& rng) {
  const ComplexMatrix c = random_complex(n, rng);
  return c + a * c.conjugate() * a;
}

/// Diagonalizable matrix with one deliberately unpaired complex eigenvalue of
/// lowest real part; the remaining eigenvalues are real.
inline ComplexMatrix random_unpaired_instance(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    ComplexMatrix d(n);
    d(0, 0) = Complex(-1.0 - u(rng), 0.4 + 0.6 * u(rng));
    for (int i = 1; i < n; ++i) d(i, i) = Complex(-0.5 + 0.8 * i + 0.3 * u(rng), 0.0);
    const ComplexMatrix s = random_complex(n, rng);
    const auto sinv = ptsym::try_inverse(s, 1e-8);
    if (!sinv) continue;
    if (s.norm_inf() * sinv->norm_inf() > 100.0) continue;
    return s * d * *sinv;
  }
}

}  // namespace corpus
