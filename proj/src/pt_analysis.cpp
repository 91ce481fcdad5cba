#include "ptsym/pt_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ptsym {

namespace {

constexpr int kMaxDim = 16;
constexpr int kSampleBudget = 32;
constexpr uint64_t kSearchSeed = 0x9e3779b97f4a7c15ULL;

// column-stacking convention: vec(A X B) = kron(B^T, A) vec(X)
ComplexMatrix unvec_col(const std::vector<Complex>& v, int n) {
  ComplexMatrix a(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = v[static_cast<size_t>(j) * n + i];
  return a;
}

bool is_invertible(const ComplexMatrix& a, double tol) {
  return rank_nullspace(a, tol).rank == a.dim();
}

double intertwining_residual(const ComplexMatrix& a, const ComplexMatrix& h) {
  const ComplexMatrix r = a * h.conjugate() - h * a;
  const double scale = a.norm_inf() * h.norm_inf();
  return scale > 0.0 ? r.norm_inf() / scale : r.norm_inf();
}

double involution_defect(const ComplexMatrix& a) {
  return (a * a.conjugate() - ComplexMatrix::identity(a.dim())).norm_inf();
}

/// Search the intertwining solution space for an element with A conj(A) = I.
/// Fast path: A conj(A) already scalar, rescale by the principal root.
/// Otherwise run the solution-space-preserving averaging iteration
/// X <- (X + conj(X)^{-1})/2, whose fixed points are exactly the involutive
/// elements (conj(X)^{-1} intertwines whenever X does).
std::optional<ComplexMatrix> normalize_involution(ComplexMatrix a, double tol) {
  const int n = a.dim();
  const double fro = a.norm_fro();
  if (fro > 0.0) a *= Complex(std::sqrt(double(n)) / fro, 0.0);

  const ComplexMatrix w = a * a.conjugate();
  const Complex c = w.trace() / double(n);
  ComplexMatrix dev = w;
  for (int i = 0; i < n; ++i) dev(i, i) -= c;
  if (dev.norm_inf() <= std::max(tol, 1e-12) * std::max(1.0, w.norm_inf())) {
    // A conj(A) = c I with c necessarily real; only c > 0 can be rescaled away
    if (c.real() <= 0.0) return std::nullopt;
    a *= Complex(1.0 / std::sqrt(c.real()), 0.0);
    return a;
  }

  ComplexMatrix x = a;
  double defect = involution_defect(x);
  for (int it = 0; it < 80 && defect > 1e-13; ++it) {
    const auto inv = try_inverse(x.conjugate(), 1e-13);
    if (!inv) return std::nullopt;
    x = 0.5 * (x + *inv);
    const double next = involution_defect(x);
    if (it > 20 && next > 0.9 * defect) return std::nullopt;  // stagnated
    defect = next;
  }
  if (defect > 1e-11) return std::nullopt;
  return x;
}

ComplexMatrix random_combination(const std::vector<std::vector<Complex>>& basis, int n,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> v(static_cast<size_t>(n) * n, Complex(0.0));
  for (const auto& b : basis) {
    const Complex coeff(gauss(rng), gauss(rng));
    for (size_t k = 0; k < v.size(); ++k) v[k] += coeff * b[k];
  }
  return unvec_col(v, n);
}

ComplexMatrix permutation_matrix(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  ComplexMatrix p(n);
  for (int m = 0; m < n; ++m) p(perm[m], m) = 1.0;
  return p;
}

/// Principal square root of a Hermitian positive-definite matrix via the
/// Denman-Beavers iteration with determinant scaling.
ComplexMatrix sqrt_hpd(const ComplexMatrix& v) {
  const int n = v.dim();
  ComplexMatrix x = v;
  ComplexMatrix y = ComplexMatrix::identity(n);
  for (int it = 0; it < 60; ++it) {
    const double dx = std::abs(determinant(x));
    const double dy = std::abs(determinant(y));
    double mu = 1.0;
    if (dx > 0.0 && dy > 0.0) mu = std::pow(dx * dy, -1.0 / (2.0 * n));
    const ComplexMatrix xs = Complex(mu, 0.0) * x;
    const ComplexMatrix ys = Complex(mu, 0.0) * y;
    const ComplexMatrix xn = 0.5 * (xs + inverse(ys));
    const ComplexMatrix yn = 0.5 * (ys + inverse(xs));
    const double delta = (xn - xs).norm_inf();
    x = xn;
    y = yn;
    if (delta <= 1e-15 * std::max(1.0, x.norm_inf())) break;
  }
  x = 0.5 * (x + x.adjoint());  // the principal root of an HPD matrix is Hermitian
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Antilinear symmetry search
// ---------------------------------------------------------------------------

namespace {

/// Sample the solution-space basis for an invertible element and normalize it
/// to an involution; the residual is verified against every target matrix.
AntilinearSearch search_solution_space(const std::vector<const ComplexMatrix*>& targets, int n,
                                       const NullspaceResult& ns, double tol) {
  AntilinearSearch out;
  out.solution_space_dim = static_cast<int>(ns.basis.size());
  if (ns.basis.empty()) return out;

  const auto worst_residual = [&](const ComplexMatrix& a) {
    double worst = 0.0;
    for (const auto* t : targets) worst = std::max(worst, intertwining_residual(a, *t));
    return worst;
  };

  std::mt19937_64 rng(kSearchSeed);
  std::optional<ComplexMatrix> non_involutive;
  for (int attempt = 0; attempt < kSampleBudget; ++attempt) {
    ComplexMatrix cand = random_combination(ns.basis, n, rng);
    if (!is_invertible(cand, tol)) continue;
    if (auto fixed = normalize_involution(cand, tol)) {
      AntilinearSymmetry sym{*fixed, involution_defect(*fixed), worst_residual(*fixed)};
      if (sym.intertwining_residual <= std::max(tol, 1e-10)) {
        out.status = AntilinearSearch::Status::Involutive;
        out.symmetry = std::move(sym);
        return out;
      }
    }
    if (!non_involutive) non_involutive = std::move(cand);
  }

  if (non_involutive) {
    out.status = AntilinearSearch::Status::NonInvolutive;
    out.symmetry = AntilinearSymmetry{*non_involutive, involution_defect(*non_involutive),
                                      worst_residual(*non_involutive)};
  }
  return out;  // Absent: no invertible element among the samples
}

ComplexMatrix intertwining_system(const ComplexMatrix& t) {
  const ComplexMatrix eye = ComplexMatrix::identity(t.dim());
  return kron(t.conjugate().transpose(), eye) - kron(eye, t);
}

}  // namespace

AntilinearSearch find_antilinear_symmetry(const ComplexMatrix& h, double tol) {
  const int n = h.dim();
  if (n > kMaxDim) throw ValidationError("antilinear search supports n <= 16");

  // real matrices commute with plain conjugation: A = I, no search needed
  if ((h - h.conjugate()).norm_inf() == 0.0) {
    AntilinearSearch out;
    out.status = AntilinearSearch::Status::Involutive;
    out.symmetry = AntilinearSymmetry{ComplexMatrix::identity(n), 0.0, 0.0};
    out.solution_space_dim =
        static_cast<int>(rank_nullspace(intertwining_system(h), tol).basis.size());
    return out;
  }
  return search_solution_space({&h}, n, rank_nullspace(intertwining_system(h), tol), tol);
}

AntilinearSearch find_joint_antilinear_symmetry(const ComplexMatrix& h,
                                                const ComplexMatrix& phi, double tol) {
  const int n = h.dim();
  if (phi.dim() != n) throw ValidationError("field operator dimension mismatch");
  if (n > kMaxDim) throw ValidationError("antilinear search supports n <= 16");

  if ((h - h.conjugate()).norm_inf() == 0.0 && (phi - phi.conjugate()).norm_inf() == 0.0) {
    AntilinearSearch out;
    out.status = AntilinearSearch::Status::Involutive;
    out.symmetry = AntilinearSymmetry{ComplexMatrix::identity(n), 0.0, 0.0};
    out.solution_space_dim = 1;  // at least the identity direction
    return out;
  }

  // common nullspace of both intertwining systems via the stacked Gram matrix
  const ComplexMatrix m1 = intertwining_system(h);
  const ComplexMatrix m2 = intertwining_system(phi);
  const ComplexMatrix gram = m1.adjoint() * m1 + m2.adjoint() * m2;
  return search_solution_space({&h, &phi}, n, rank_nullspace(gram, tol), tol);
}

SecularReality secular_reality(const ComplexMatrix& h) {
  PolynomialC p = char_poly(h);
  double max_imag = 0.0;
  for (const auto& c : p.coeffs()) max_imag = std::max(max_imag, std::abs(c.imag()));
  return SecularReality{std::move(p), max_imag};
}

SpectrumReport classify_spectrum(const ComplexMatrix& h, double tol) {
  SpectrumReport rep = eigen_system(h, tol);
  for (const auto& [i, j] : rep.pairing) {
    const Complex defect = rep.eigenvalues[j].value - std::conj(rep.eigenvalues[i].value);
    if (std::abs(defect) > rep.cluster_tol) rep.pairing_violated = true;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Biorthogonal system
// ---------------------------------------------------------------------------

std::vector<Complex> BiorthogonalSystem::right(int col) const {
  std::vector<Complex> v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = R(i, col);
  return v;
}

std::vector<Complex> BiorthogonalSystem::left(int row) const {
  std::vector<Complex> v(dim());
  for (int j = 0; j < dim(); ++j) v[j] = L(row, j);
  return v;
}

namespace {

BiorthogonalSystem build_biorthogonal_impl(const ComplexMatrix& h, double tol,
                                           const ComplexMatrix* symmetry) {
  const int n = h.dim();
  const SpectrumReport rep = eigen_system(h, tol);
  if (rep.spectral_class == SpectralClass::JordanBlock)
    throw ValidationError("non-diagonalizable: no biorthogonal eigensystem exists");

  const bool fix_phases = symmetry != nullptr && !rep.pairing_violated;
  const ComplexMatrix* a = fix_phases ? symmetry : nullptr;

  const int nc = static_cast<int>(rep.eigenvalues.size());
  std::vector<std::vector<std::vector<Complex>>> cluster_basis(nc);

  auto nullspace_basis = [&](int ci) {
    ComplexMatrix shifted = h;
    for (int i = 0; i < n; ++i) shifted(i, i) -= rep.eigenvalues[ci].value;
    double t = tol;
    NullspaceResult ns;
    for (int attempt = 0; attempt < 4; ++attempt, t *= 10.0) {
      ns = rank_nullspace(shifted, t);
      if (static_cast<int>(ns.basis.size()) == rep.eigenvalues[ci].algebraic) return ns.basis;
    }
    throw NumericalError("eigenspace dimension mismatch", double(ns.basis.size()));
  };

  for (int ci = 0; ci < nc; ++ci) {
    if (!cluster_basis[ci].empty()) continue;
    const int pi = rep.partner(ci);
    if (fix_phases && rep.is_real(ci)) {
      // pick representatives fixed by A.K: w = u + A conj(u)
      auto basis = nullspace_basis(ci);
      for (auto& u : basis) {
        std::vector<Complex> au = a->apply([&] {
          std::vector<Complex> cu(u.size());
          for (size_t k = 0; k < u.size(); ++k) cu[k] = std::conj(u[k]);
          return cu;
        }());
        std::vector<Complex> w(u.size()), w_alt(u.size());
        for (size_t k = 0; k < u.size(); ++k) {
          w[k] = u[k] + au[k];
          w_alt[k] = Complex(0.0, 1.0) * (u[k] - au[k]);
        }
        if (vector_norm(w_alt) > vector_norm(w)) w = std::move(w_alt);
        const double nrm = vector_norm(w);
        if (nrm < 0.1 * vector_norm(u)) continue;  // keep u, degenerate projection
        for (auto& z : w) z /= nrm;
        u = std::move(w);
      }
      cluster_basis[ci] = std::move(basis);
    } else if (fix_phases && pi != ci) {
      // construct the partner cluster from this one: v' = A conj(v)
      auto basis = nullspace_basis(ci);
      std::vector<std::vector<Complex>> partner;
      for (const auto& u : basis) {
        std::vector<Complex> cu(u.size());
        for (size_t k = 0; k < u.size(); ++k) cu[k] = std::conj(u[k]);
        partner.push_back(a->apply(cu));
      }
      cluster_basis[ci] = std::move(basis);
      cluster_basis[pi] = std::move(partner);
    } else {
      cluster_basis[ci] = nullspace_basis(ci);
    }
  }

  BiorthogonalSystem bio;
  bio.pairing_violated = rep.pairing_violated;
  bio.phase_fixed = fix_phases;

  std::vector<int> col_of_cluster(nc, 0);
  int col = 0;
  ComplexMatrix r(n);
  for (int ci = 0; ci < nc; ++ci) {
    col_of_cluster[ci] = col;
    for (const auto& v : cluster_basis[ci]) {
      for (int i = 0; i < n; ++i) r(i, col) = v[i];
      bio.energies.push_back(rep.eigenvalues[ci].value);
      ++col;
    }
  }
  if (col != n) throw NumericalError("incomplete eigenbasis", double(col));

  bio.perm.resize(n);
  for (int ci = 0; ci < nc; ++ci) {
    const int pi = rep.pairing_violated ? ci : rep.partner(ci);
    for (int k = 0; k < rep.eigenvalues[ci].algebraic; ++k)
      bio.perm[col_of_cluster[ci] + k] = col_of_cluster[pi] + k;
  }

  auto l = try_inverse(r, 0.0);
  if (!l) throw NumericalError("eigenbasis is numerically singular", 0.0);
  const double cond = r.norm_inf() * l->norm_inf();
  if (cond > 1.0 / tol)
    throw NumericalError("ill-conditioned eigenbasis (condition exceeds 1/tol)", cond);

  bio.R = std::move(r);
  bio.L = std::move(*l);
  return bio;
}

}  // namespace

BiorthogonalSystem build_biorthogonal(const ComplexMatrix& h, double tol) {
  const AntilinearSearch search = find_antilinear_symmetry(h, tol);
  return build_biorthogonal_impl(h, tol,
                                 search.involutive() ? &search.symmetry->A : nullptr);
}

BiorthogonalSystem build_biorthogonal(const ComplexMatrix& h, double tol,
                                      const AntilinearSymmetry& a) {
  if (intertwining_residual(a.A, h) > std::max(tol, 1e-9) * 10.0)
    throw ValidationError("supplied A does not intertwine H with conj(H)");
  if (involution_defect(a.A) > std::max(tol, 1e-9) * 10.0)
    throw ValidationError("supplied A is not an involution under conjugation");
  return build_biorthogonal_impl(h, tol, &a.A);
}

// ---------------------------------------------------------------------------
// V operator and Hermitianization
// ---------------------------------------------------------------------------

VOperator construct_V(const ComplexMatrix& h, double tol) {
  const int n = h.dim();
  const AntilinearSearch search = find_antilinear_symmetry(h, tol);
  if (!search.found())
    throw ValidationError("no antilinear symmetry: V is not defined for this Hamiltonian");

  const SpectrumReport rep = eigen_system(h, tol);
  ComplexMatrix v(n);
  if (rep.spectral_class == SpectralClass::JordanBlock) {
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const ComplexMatrix flat = kron(eye, h.adjoint()) - kron(h.transpose(), eye);
    const NullspaceResult ns = rank_nullspace(flat, tol);
    if (ns.basis.empty())
      throw NumericalError("no invertible V: intertwining solution space is trivial", 0.0);
    std::mt19937_64 rng(kSearchSeed);
    bool ok = false;
    for (int attempt = 0; attempt < kSampleBudget && !ok; ++attempt) {
      ComplexMatrix cand = random_combination(ns.basis, n, rng);
      if (is_invertible(cand, tol)) {
        v = std::move(cand);
        ok = true;
      }
    }
    if (!ok)
      throw NumericalError("no invertible V found in the intertwining solution space", 0.0);
  } else if (rep.spectral_class == SpectralClass::RealComplete) {
    const BiorthogonalSystem bio = build_biorthogonal(h, tol);
    v = inverse(bio.R * bio.R.adjoint());
    v = 0.5 * (v + v.adjoint());
  } else {
    const BiorthogonalSystem bio = build_biorthogonal(h, tol);
    v = inverse(bio.R.adjoint()) * permutation_matrix(bio.perm) * bio.L;
  }

  const ComplexMatrix defect = h.adjoint() * v - v * h;
  const double scale = h.norm_inf() * v.norm_inf();
  return VOperator{std::move(v), scale > 0.0 ? defect.norm_inf() / scale : defect.norm_inf()};
}

std::optional<ComplexMatrix> hermitianize(const ComplexMatrix& h, double tol) {
  const SpectrumReport rep = eigen_system(h, tol);
  if (rep.spectral_class != SpectralClass::RealComplete) return std::nullopt;

  const VOperator vop = construct_V(h, tol);
  ComplexMatrix s = sqrt_hpd(vop.V);
  const ComplexMatrix conj_h = s * h * inverse(s);
  const double defect = (conj_h - conj_h.adjoint()).norm_inf();
  if (defect > std::max(tol, tol * conj_h.norm_inf()) * 10.0)
    throw NumericalError("Hermitianization defect above tolerance", defect);
  return s;
}

// ---------------------------------------------------------------------------
// Norm invariance and solution mapping
// ---------------------------------------------------------------------------

NormInvarianceReport norm_invariance_check(const ComplexMatrix& h,
                                           const std::vector<double>& t_grid, double tol) {
  const int n = h.dim();
  const BiorthogonalSystem bio = build_biorthogonal(h, tol);
  const VOperator vop = construct_V(h, tol);
  const ComplexMatrix overlap0 = bio.R.adjoint() * vop.V * bio.R;

  double omax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) omax = std::max(omax, std::abs(overlap0(i, j)));
  const double zero_tol = tol * std::max(1.0, omax);

  NormInvarianceReport rep;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      NormInvarianceEntry e;
      e.i = i;
      e.j = j;
      e.overlap0 = overlap0(j, i);
      e.modulus = std::abs(e.overlap0);
      const Complex rate = bio.energies[i] - std::conj(bio.energies[j]);
      e.h4_admissible = std::abs(rate) <= std::max(tol, kDefaultClusterScale) *
                                              (1.0 + std::abs(bio.energies[i]));
      for (double t : t_grid) {
        const Complex ot = e.overlap0 * std::exp(Complex(0.0, -1.0) * rate * t);
        e.max_variation = std::max(e.max_variation, std::abs(ot - e.overlap0));
      }
      e.pass = e.h4_admissible ? (e.max_variation <= zero_tol) : (e.modulus <= zero_tol);
      rep.pass = rep.pass && e.pass;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

bool pt_maps_solutions(const ComplexMatrix& h, const ComplexMatrix& a, double tol) {
  const int n = h.dim();
  const SpectrumReport rep = eigen_system(h, tol);
  const double scale = std::max(1.0, h.norm_inf());
  for (const auto& info : rep.eigenvalues) {
    ComplexMatrix shifted = h;
    for (int i = 0; i < n; ++i) shifted(i, i) -= info.value;
    const auto ns = rank_nullspace(shifted, tol);
    for (const auto& u : ns.basis) {
      std::vector<Complex> cu(u.size());
      for (size_t k = 0; k < u.size(); ++k) cu[k] = std::conj(u[k]);
      const auto w = a.apply(cu);
      const auto hw = h.apply(w);
      double resid = 0.0;
      for (int i = 0; i < n; ++i)
        resid = std::max(resid, std::abs(hw[i] - std::conj(info.value) * w[i]));
      if (resid > tol * scale * std::max(1.0, vector_norm(w)) * 10.0) return false;
    }
  }
  return true;
}

}  // namespace ptsym
