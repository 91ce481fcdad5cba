#include "ptsym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptsym {

namespace {

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// ---------------------------------------------------------------------------
// Full-pivot Gaussian elimination kernel shared by rank/nullspace/det/solve.
// ---------------------------------------------------------------------------
struct FullPivotLU {
  ComplexMatrix u;            // eliminated matrix, pivots on the diagonal
  std::vector<int> row_perm;  // row_perm[k] = original row in slot k
  std::vector<int> col_perm;
  int rank = 0;
  int swap_sign = 1;
  double pivot_threshold = 0.0;
  double smallest_rejected = 0.0;

  explicit FullPivotLU(const ComplexMatrix& a, double tol) : u(a) {
    const int n = a.dim();
    row_perm.resize(n);
    col_perm.resize(n);
    for (int i = 0; i < n; ++i) row_perm[i] = col_perm[i] = i;
    pivot_threshold = tol * a.norm_inf();

    for (int k = 0; k < n; ++k) {
      int pi = k, pj = k;
      double best = 0.0;
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j) {
          const double m = std::abs(u(i, j));
          if (m > best) {
            best = m;
            pi = i;
            pj = j;
          }
        }
      if (best <= pivot_threshold) {
        smallest_rejected = best;
        break;
      }
      if (pi != k) {
        for (int j = 0; j < n; ++j) std::swap(u(k, j), u(pi, j));
        std::swap(row_perm[k], row_perm[pi]);
        swap_sign = -swap_sign;
      }
      if (pj != k) {
        for (int i = 0; i < n; ++i) std::swap(u(i, k), u(i, pj));
        std::swap(col_perm[k], col_perm[pj]);
        swap_sign = -swap_sign;
      }
      const Complex piv = u(k, k);
      for (int i = k + 1; i < n; ++i) {
        const Complex f = u(i, k) / piv;
        u(i, k) = f;  // keep the multiplier; rows below stay eliminated
        for (int j = k + 1; j < n; ++j) u(i, j) -= f * u(k, j);
      }
      ++rank;
    }
  }
};

void orthonormalize(std::vector<std::vector<Complex>>& basis) {
  // modified Gram-Schmidt, two passes
  for (auto& v : basis) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& w : basis) {
        if (&w == &v) break;
        const Complex c = dot_conj(w, v);
        for (size_t i = 0; i < v.size(); ++i) v[i] -= c * w[i];
      }
    }
    const double nrm = vector_norm(v);
    if (nrm > 0.0)
      for (auto& z : v) z /= nrm;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PolynomialC
// ---------------------------------------------------------------------------

PolynomialC::PolynomialC(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  while (coeffs_.size() > 1 && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
  if (coeffs_.empty() || coeffs_.back() == Complex(0.0))
    throw ValidationError("polynomial needs a nonzero leading coefficient");
}

Complex PolynomialC::eval(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

PolynomialC PolynomialC::derivative() const {
  if (degree() == 0)
    throw ValidationError("derivative of a constant is the zero polynomial");
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
  return PolynomialC(std::move(d));
}

double PolynomialC::scale_at(Complex z) const {
  double acc = 0.0, zp = 1.0;
  const double az = std::abs(z);
  for (const auto& c : coeffs_) {
    acc += std::abs(c) * zp;
    zp *= az;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial (Faddeev-LeVerrier)
// ---------------------------------------------------------------------------

PolynomialC char_poly(const ComplexMatrix& h) {
  const int n = h.dim();
  if (!h.is_finite()) throw ValidationError("matrix entries must be finite");

  // det(lambda I - H) = lambda^n + c_{n-1} lambda^{n-1} + ... + c_0
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  ComplexMatrix m = ComplexMatrix::zero(n);
  for (int k = 1; k <= n; ++k) {
    m = h * m;
    const Complex ck = c[n - k + 1];
    for (int i = 0; i < n; ++i) m(i, i) += ck;
    c[n - k] = -(h * m).trace() / double(k);
  }
  // det(H - lambda I) = (-1)^n det(lambda I - H)
  if (n % 2 == 1)
    for (auto& z : c) z = -z;
  return PolynomialC(std::move(c));
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich root finder
// ---------------------------------------------------------------------------

std::vector<Complex> poly_roots(const PolynomialC& p, double tol) {
  const int d = p.degree();
  if (d < 1) throw ValidationError("poly_roots needs degree >= 1");

  std::vector<Complex> mon(p.coeffs());
  const Complex lead = mon.back();
  for (auto& z : mon) z /= lead;

  if (d == 1) return {-mon[0]};

  auto eval_both = [&](Complex z, Complex& pv, Complex& dv) {
    pv = 0.0;
    dv = 0.0;
    for (int k = d; k >= 0; --k) {
      dv = dv * z + pv;
      pv = pv * z + mon[k];
    }
  };

  double radius = 0.0;
  for (int k = 0; k < d; ++k) radius = std::max(radius, std::abs(mon[k]));
  radius += 1.0;

  std::vector<Complex> z(d);
  for (int j = 0; j < d; ++j) {
    const double angle = 2.0 * std::numbers::pi * double(j) / double(d) + 0.4;
    z[j] = radius * Complex(std::cos(angle), std::sin(angle));
  }

  constexpr int kMaxSweeps = 500;
  const double step_tol = 1e-14;
  bool done = false;
  for (int sweep = 0; sweep < kMaxSweeps && !done; ++sweep) {
    done = true;
    for (int j = 0; j < d; ++j) {
      Complex pv, dv;
      eval_both(z[j], pv, dv);
      if (pv == Complex(0.0)) continue;
      Complex newton;
      if (dv == Complex(0.0)) {
        newton = Complex(step_tol, step_tol);  // nudge off a critical point
      } else {
        newton = pv / dv;
      }
      Complex repel = 0.0;
      for (int k = 0; k < d; ++k) {
        if (k == j) continue;
        Complex diff = z[j] - z[k];
        if (std::abs(diff) < 1e-300) diff = Complex(1e-300, 0.0);
        repel += 1.0 / diff;
      }
      const Complex denom = 1.0 - newton * repel;
      const Complex w = (std::abs(denom) < 1e-300) ? newton : newton / denom;
      z[j] -= w;
      if (std::abs(w) > step_tol * (1.0 + std::abs(z[j]))) done = false;
    }
  }

  PolynomialC monic(mon);
  double worst = 0.0;
  for (int j = 0; j < d; ++j)
    worst = std::max(worst, std::abs(monic.eval(z[j])) / monic.scale_at(z[j]));
  if (!done && worst > tol)
    throw NumericalError("root iteration did not converge within 500 sweeps", worst);

  std::sort(z.begin(), z.end(), lex_less);
  return z;
}

// ---------------------------------------------------------------------------
// Rank / nullspace / solve
// ---------------------------------------------------------------------------

NullspaceResult rank_nullspace(const ComplexMatrix& a, double tol) {
  if (!a.is_finite()) throw ValidationError("matrix entries must be finite");
  const int n = a.dim();
  FullPivotLU lu(a, tol);
  NullspaceResult out;
  out.rank = lu.rank;
  const int r = lu.rank;

  for (int f = r; f < n; ++f) {
    std::vector<Complex> x(n, Complex(0.0));  // in pivoted column coordinates
    x[f] = 1.0;
    for (int i = r - 1; i >= 0; --i) {
      Complex s = lu.u(i, f);
      for (int j = i + 1; j < r; ++j) s += lu.u(i, j) * x[j];
      x[i] = -s / lu.u(i, i);
    }
    std::vector<Complex> v(n, Complex(0.0));
    for (int j = 0; j < n; ++j) v[lu.col_perm[j]] = x[j];
    out.basis.push_back(std::move(v));
  }
  orthonormalize(out.basis);
  return out;
}

Complex determinant(const ComplexMatrix& a) {
  FullPivotLU lu(a, 0.0);
  if (lu.rank < a.dim()) return Complex(0.0);
  Complex det = double(lu.swap_sign);
  for (int k = 0; k < a.dim(); ++k) det *= lu.u(k, k);
  return det;
}

std::optional<ComplexMatrix> try_inverse(const ComplexMatrix& a, double tol) {
  const int n = a.dim();
  FullPivotLU lu(a, tol);
  if (lu.rank < n) return std::nullopt;

  ComplexMatrix inv(n);
  for (int col = 0; col < n; ++col) {
    std::vector<Complex> b(n, Complex(0.0));
    for (int i = 0; i < n; ++i) b[i] = (lu.row_perm[i] == col) ? 1.0 : 0.0;
    for (int i = 0; i < n; ++i)  // forward, multipliers stored below diagonal
      for (int j = 0; j < i; ++j) b[i] -= lu.u(i, j) * b[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) b[i] -= lu.u(i, j) * b[j];
      b[i] /= lu.u(i, i);
    }
    for (int i = 0; i < n; ++i) inv(lu.col_perm[i], col) = b[i];
  }
  return inv;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  auto inv = try_inverse(a, 0.0);
  if (!inv) throw NumericalError("singular matrix", 0.0);
  return *inv;
}

// ---------------------------------------------------------------------------
// Eigen system with clustering and Jordan detection
// ---------------------------------------------------------------------------

bool SpectrumReport::is_real(int i) const {
  return std::abs(eigenvalues[i].value.imag()) <= cluster_tol;
}

int SpectrumReport::partner(int i) const {
  for (const auto& [a, b] : pairing) {
    if (a == i) return b;
    if (b == i) return a;
  }
  return i;
}

SpectrumReport eigen_system(const ComplexMatrix& h, double tol, double cluster_scale) {
  const int n = h.dim();
  const PolynomialC p = char_poly(h);
  const auto roots = poly_roots(p, tol);

  double max_abs = 0.0;
  for (const auto& r : roots) max_abs = std::max(max_abs, std::abs(r));
  const double cluster_tol = cluster_scale * (1.0 + max_abs);

  SpectrumReport rep;
  rep.dim = n;
  rep.cluster_tol = cluster_tol;
  rep.best_effort = n > 16;

  // greedy clustering of the sorted roots
  std::vector<std::vector<Complex>> clusters;
  for (const auto& r : roots) {
    bool placed = false;
    for (auto& c : clusters) {
      Complex mean = 0.0;
      for (const auto& m : c) mean += m;
      mean /= double(c.size());
      if (std::abs(r - mean) <= cluster_tol) {
        c.push_back(r);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({r});
  }

  // A cluster of m nearly coincident roots is located far more accurately by
  // the nearby simple root of the (m-1)-th derivative than by its members.
  auto derivative_root = [&](Complex mean, int m, double radius) {
    if (m < 2) return mean;
    PolynomialC d = p;
    for (int k = 1; k < m; ++k) d = d.derivative();
    const PolynomialC dd = d.derivative();
    Complex z = mean;
    for (int it = 0; it < 30; ++it) {
      const Complex num = d.eval(z);
      const Complex den = dd.eval(z);
      if (std::abs(den) < 1e-300) break;
      const Complex step = num / den;
      z -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    return (std::abs(z - mean) <= radius) ? z : mean;
  };

  // An m-fold root only scatters over a radius ~ eps^(1/m) under rounding, so
  // for m >= 3 the documented cluster tolerance is too tight and the phase-1
  // clusters must be re-examined. A candidate group merges only when the
  // Taylor coefficients at the refined center bound the root spread by the
  // numerical indistinguishability radius (eps * scale / |p^(m)/m!|)^(1/m).
  auto taylor_spread_consistent = [&](Complex center, const std::vector<Complex>& members) {
    const int m = static_cast<int>(members.size());
    std::vector<double> mags;  // |p^(k)(center)| / k!
    PolynomialC d = p;
    mags.push_back(std::abs(p.eval(center)));
    double kfact = 1.0;
    for (int k = 1; k <= m; ++k) {
      d = d.derivative();
      kfact *= double(k);
      mags.push_back(std::abs(d.eval(center)) / kfact);
    }
    const double q = mags[m];
    if (q < 1e-300) return false;
    const double rho = std::pow(2.2e-16 * p.scale_at(center) / q, 1.0 / double(m));
    for (const auto& r : members)
      if (std::abs(r - center) > std::max(5.0 * rho, cluster_tol)) return false;
    for (int k = 0; k < m; ++k) {
      const double spread = std::pow(mags[k] / q, 1.0 / double(m - k));
      if (spread > std::max(8.0 * rho, cluster_tol)) return false;
    }
    return true;
  };

  auto cluster_mean = [](const std::vector<Complex>& c) {
    Complex mean = 0.0;
    for (const auto& m : c) mean += m;
    return mean / double(c.size());
  };

  // phase 2: groups of total multiplicity >= 3. Collect connected components
  // of clusters under the prefilter distance and accept the largest
  // nearest-to-center prefix whose Taylor spread test passes.
  const double prefilter = std::max(cluster_tol, 1e-3 * (1.0 + max_abs));
  {
    const int nc = static_cast<int>(clusters.size());
    std::vector<int> comp(nc);
    for (int i = 0; i < nc; ++i) comp[i] = i;
    const auto find_root = [&](int i) {
      while (comp[i] != i) i = comp[i] = comp[comp[i]];
      return i;
    };
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j)
        if (std::abs(cluster_mean(clusters[i]) - cluster_mean(clusters[j])) <= prefilter)
          comp[find_root(i)] = find_root(j);

    std::vector<std::vector<int>> groups(nc);
    for (int i = 0; i < nc; ++i) groups[find_root(i)].push_back(i);

    std::vector<std::vector<Complex>> rebuilt;
    for (const auto& g : groups) {
      if (g.empty()) continue;
      std::vector<Complex> roots_in_group;
      for (int idx : g)
        roots_in_group.insert(roots_in_group.end(), clusters[idx].begin(), clusters[idx].end());
      const int total = static_cast<int>(roots_in_group.size());
      bool merged = false;
      if (total >= 3 && static_cast<int>(g.size()) > 1) {
        Complex center = cluster_mean(roots_in_group);
        std::sort(roots_in_group.begin(), roots_in_group.end(),
                  [&](Complex a, Complex b) { return std::abs(a - center) < std::abs(b - center); });
        for (int take = total; take >= 3 && !merged; --take) {
          std::vector<Complex> prefix(roots_in_group.begin(), roots_in_group.begin() + take);
          const Complex z = derivative_root(cluster_mean(prefix), take, prefilter);
          if (!taylor_spread_consistent(z, prefix)) continue;
          rebuilt.push_back(std::move(prefix));
          // leftover roots keep their original clustering structure
          std::vector<Complex> rest(roots_in_group.begin() + take, roots_in_group.end());
          for (const auto& r : rest) rebuilt.push_back({r});
          merged = true;
        }
      }
      if (!merged)
        for (int idx : g) rebuilt.push_back(clusters[idx]);
    }
    clusters = std::move(rebuilt);
  }

  for (const auto& c : clusters) {
    const Complex mean = cluster_mean(c);
    const int m = static_cast<int>(c.size());
    EigenvalueInfo info;
    info.value = derivative_root(mean, m, m >= 3 ? prefilter : cluster_tol);
    info.algebraic = m;
    ComplexMatrix shifted = h;
    for (int i = 0; i < n; ++i) shifted(i, i) -= info.value;
    double t = tol;
    int geo = 0;
    for (int attempt = 0; attempt < 4 && geo < 1; ++attempt, t *= 10.0)
      geo = n - rank_nullspace(shifted, t).rank;
    if (geo < 1)
      throw NumericalError("no nullspace found at a reported eigenvalue", t / 10.0);
    info.geometric = std::min(geo, info.algebraic);
    rep.eigenvalues.push_back(info);
  }

  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const EigenvalueInfo& a, const EigenvalueInfo& b) {
              return lex_less(a.value, b.value);
            });

  bool jordan = false;
  bool any_complex = false;
  for (const auto& e : rep.eigenvalues) {
    if (e.geometric < e.algebraic) jordan = true;
    if (std::abs(e.value.imag()) > cluster_tol) any_complex = true;
  }

  // conjugate pairing by greedy nearest-match on conj(E)
  if (any_complex) {
    const int m = static_cast<int>(rep.eigenvalues.size());
    std::vector<bool> used(m, false);
    for (int i = 0; i < m; ++i) {
      if (used[i] || rep.is_real(i)) continue;
      const Complex target = std::conj(rep.eigenvalues[i].value);
      int best = -1, second = -1;
      double best_d = 0.0, second_d = 0.0;
      for (int j = 0; j < m; ++j) {
        if (j == i || used[j] || rep.is_real(j)) continue;
        const double dist = std::abs(rep.eigenvalues[j].value - target);
        if (best < 0 || dist < best_d) {
          second = best;
          second_d = best_d;
          best = j;
          best_d = dist;
        } else if (second < 0 || dist < second_d) {
          second = j;
          second_d = dist;
        }
      }
      if (best < 0 || best_d > cluster_tol) {
        rep.pairing_violated = true;
        continue;
      }
      if (second >= 0 && second_d <= cluster_tol) rep.pairing_ambiguous = true;
      if (rep.eigenvalues[i].algebraic != rep.eigenvalues[best].algebraic)
        rep.pairing_violated = true;
      used[i] = used[best] = true;
      rep.pairing.emplace_back(std::min(i, best), std::max(i, best));
    }
  }

  rep.spectral_class = jordan ? SpectralClass::JordanBlock
                      : any_complex ? SpectralClass::ConjugatePairs
                                    : SpectralClass::RealComplete;
  return rep;
}

}  // namespace ptsym
