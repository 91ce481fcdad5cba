#include "ptsym/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptsym {

namespace {

bool col_is_real(const BiorthogonalSystem& bio, int col) {
  return std::abs(bio.energies[col].imag()) <=
         kDefaultClusterScale * (1.0 + std::abs(bio.energies[col]));
}

bool has_real_energy(const BiorthogonalSystem& bio) {
  for (int c = 0; c < bio.dim(); ++c)
    if (col_is_real(bio, c)) return true;
  return false;
}

ComplexMatrix sandwich(const BiorthogonalSystem& bio, const ComplexMatrix& phi) {
  return bio.L * phi * bio.R;
}

TwoPointSeries assemble_series(const BiorthogonalSystem& bio, const ComplexMatrix& phimat,
                               bool symmetrized_pair) {
  TwoPointSeries series;
  const int n = bio.dim();
  if (!symmetrized_pair) {
    const double e0 = bio.energies[0].real();
    series.vacuum_energy = e0;
    std::ostringstream label;
    label << "state 0 (Re E0 = " << e0 << ")";
    series.vacuum_label = label.str();
    for (int m = 0; m < n; ++m)
      series.terms.push_back({phimat(0, m) * phimat(m, 0), bio.energies[m] - e0});
  } else {
    const int a = 0;
    const int b = bio.perm[0];
    const double e0 = bio.energies[a].real();
    series.vacuum_energy = e0;
    std::ostringstream label;
    label << "pair (" << a << "," << b << ") (Re E = " << e0 << "), symmetrized sum";
    series.vacuum_label = label.str();
    for (int m = 0; m < n; ++m) {
      const Complex amp = phimat(a, m) * phimat(m, a) + phimat(b, m) * phimat(m, b);
      series.terms.push_back({amp, bio.energies[m] - e0});
    }
  }
  return series;
}

double max_imag_on_grid(const TwoPointSeries& series, const std::vector<double>& grid) {
  double worst = 0.0;
  for (double tau : grid) worst = std::max(worst, std::abs(evaluate(series, tau).imag()));
  return worst;
}

}  // namespace

FieldOperator check_pt_even(const ComplexMatrix& phi, const AntilinearSymmetry& a, double tol) {
  if (phi.dim() != a.A.dim()) throw ValidationError("field operator dimension mismatch");
  const ComplexMatrix mapped = a.A * phi.conjugate() * inverse(a.A);
  const double defect = (mapped - phi).norm_inf();
  if (defect > tol * std::max(1.0, phi.norm_inf())) {
    std::ostringstream msg;
    msg << "not PT-even: defect " << defect;
    throw ValidationError(msg.str());
  }
  return FieldOperator{phi, defect, a};
}

LrElements lr_matrix_elements(const FieldOperator& phi, const BiorthogonalSystem& bio,
                              double tol) {
  if (phi.phi.dim() != bio.dim()) throw ValidationError("field operator dimension mismatch");
  LrElements out;
  out.elements = sandwich(bio, phi.phi);
  const int n = bio.dim();

  double scale = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(out.elements(i, j)));
  const double threshold = tol * scale;

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int pa = bio.perm[a], pb = bio.perm[b];
      ElementRelation rel;
      rel.n = a;
      rel.m = b;
      std::ostringstream d;
      if (pa == a && pb == b) {
        rel.defect = std::abs(out.elements(a, b).imag());
        d << "Im phi[" << a << "][" << b << "] = 0";
      } else {
        // report each conjugate pair once
        if (std::make_pair(pa, pb) < std::make_pair(a, b)) continue;
        rel.defect = std::abs(out.elements(a, b) - std::conj(out.elements(pa, pb)));
        d << "phi[" << a << "][" << b << "] = conj(phi[" << pa << "][" << pb << "])";
      }
      rel.description = d.str();
      rel.pass = rel.defect <= threshold;
      out.max_defect = std::max(out.max_defect, rel.defect);
      out.all_pass = out.all_pass && rel.pass;
      out.relations.push_back(std::move(rel));
    }
  }
  return out;
}

Complex evaluate(const TwoPointSeries& series, double tau) {
  Complex g = 0.0;
  for (const auto& t : series.terms) g += t.amplitude * std::exp(-t.energy * tau);
  return g;
}

std::vector<double> default_tau_grid(double tau_max, double step) {
  if (step <= 0.0 || tau_max < 0.0) throw ValidationError("bad tau grid parameters");
  std::vector<double> grid;
  for (double tau = 0.0; tau <= tau_max + 0.5 * step; tau += step) grid.push_back(tau);
  return grid;
}

TwoPointResult two_point_euclidean(const ComplexMatrix& h, const FieldOperator& phi,
                                   const std::vector<double>& tau_grid, double tol) {
  SpectrumReport rep = eigen_system(h, tol);
  if (rep.spectral_class == SpectralClass::JordanBlock)
    throw ValidationError(
        "non-diagonalizable: use the pais_uhlenbeck module for the Jordan showcase");

  const BiorthogonalSystem bio = build_biorthogonal(h, tol, phi.symmetry);
  const bool lowest_real = col_is_real(bio, 0);
  if (!lowest_real && has_real_energy(bio))
    throw ValidationError("mixed sector: the lowest state must have purely real energy");

  const ComplexMatrix phimat = sandwich(bio, phi.phi);
  TwoPointResult out;
  out.series = assemble_series(bio, phimat, /*symmetrized_pair=*/!lowest_real);
  out.max_imag = max_imag_on_grid(out.series, tau_grid);
  return out;
}

RealityCertificate reality_certificate(const ComplexMatrix& h, const ComplexMatrix& phi,
                                       const std::vector<double>& tau_grid, double tol) {
  if (phi.dim() != h.dim()) throw ValidationError("field operator dimension mismatch");
  const BiorthogonalSystem bio = build_biorthogonal(h, tol);
  const ComplexMatrix phimat = sandwich(bio, phi);

  // Vacuum selection is relaxed here: an unpaired complex lowest state goes
  // through the plain spectral sum and fails below with itself as witness.
  const bool pair_vacuum = !col_is_real(bio, 0) && bio.perm[0] != 0;

  RealityCertificate cert;
  cert.series = assemble_series(bio, phimat, pair_vacuum);
  cert.max_imag = max_imag_on_grid(cert.series, tau_grid);
  cert.pass = cert.max_imag <= tol;

  // An unpaired complex vacuum energy is a reality violation in itself: the
  // continued evolution carries e^{-E0 tau} with Im E0 != 0, whatever the
  // matrix elements of phi do.
  if (!pair_vacuum && !col_is_real(bio, 0)) {
    cert.pass = false;
    cert.witness = TwoPointTerm{phimat(0, 0) * phimat(0, 0), bio.energies[0]};
    return cert;
  }
  if (!cert.pass) {
    double worst = -1.0;
    for (const auto& term : cert.series.terms) {
      double imag = 0.0;
      for (double tau : tau_grid)
        imag = std::max(imag, std::abs((term.amplitude * std::exp(-term.energy * tau)).imag()));
      if (imag > worst) {
        worst = imag;
        // report the physical energy, with the vacuum offset restored
        cert.witness = TwoPointTerm{term.amplitude, term.energy + cert.series.vacuum_energy};
      }
    }
  }
  return cert;
}

}  // namespace ptsym
