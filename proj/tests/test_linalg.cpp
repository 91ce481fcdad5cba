#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "corpus.hpp"
#include "ptsym/linalg.hpp"

using namespace ptsym;
using corpus::m_of_s;

namespace {

double cdist(Complex a, Complex b) { return std::abs(a - b); }

std::vector<Complex> sorted_values(const SpectrumReport& rep) {
  std::vector<Complex> v;
  for (const auto& e : rep.eigenvalues)
    for (int k = 0; k < e.algebraic; ++k) v.push_back(e.value);
  return v;
}

}  // namespace

TEST_CASE("complex matrix validation") {
  CHECK_THROWS_AS(ComplexMatrix(2, std::vector<Complex>(3)), ValidationError);
  CHECK_THROWS_AS(ComplexMatrix(2, {Complex(0, 0), Complex(1, 0), Complex(0, 0),
                                    Complex(std::nan(""), 0)}),
                  ValidationError);
  CHECK_THROWS_AS(ComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}), ValidationError);
}

TEST_CASE("char_poly hand-expanded examples") {
  // det(M(2) - lambda I) = (1-lambda)^2 + 1 - 4 = lambda^2 - 2 lambda - 2
  const auto p = char_poly(m_of_s(2.0));
  REQUIRE(p.degree() == 2);
  CHECK(cdist(p.coeffs()[0], {-2.0, 0.0}) < 1e-14);
  CHECK(cdist(p.coeffs()[1], {-2.0, 0.0}) < 1e-14);
  CHECK(cdist(p.coeffs()[2], {1.0, 0.0}) < 1e-14);

  const auto pid = char_poly(ComplexMatrix::identity(2));
  CHECK(cdist(pid.coeffs()[0], {1.0, 0.0}) < 1e-14);
  CHECK(cdist(pid.coeffs()[1], {-2.0, 0.0}) < 1e-14);
  CHECK(cdist(pid.coeffs()[2], {1.0, 0.0}) < 1e-14);

  // diag(1+i, 2): (1+i-lambda)(2-lambda) = lambda^2 - (3+i) lambda + 2+2i
  const auto pd = char_poly(
      ComplexMatrix::from_rows({{Complex(1, 1), 0.0}, {0.0, 2.0}}));
  CHECK(cdist(pd.coeffs()[0], {2.0, 2.0}) < 1e-14);
  CHECK(cdist(pd.coeffs()[1], {-3.0, -1.0}) < 1e-14);
  CHECK(cdist(pd.coeffs()[2], {1.0, 0.0}) < 1e-14);

  // odd dimension: leading coefficient (-1)^3
  const auto p3 = char_poly(ComplexMatrix::identity(3));
  CHECK(cdist(p3.coeffs()[3], {-1.0, 0.0}) < 1e-14);
}

TEST_CASE("poly_roots reproduces the closed-form spectra") {
  const double s3 = std::sqrt(3.0);
  auto roots = poly_roots(PolynomialC({{-2.0, 0.0}, {-2.0, 0.0}, {1.0, 0.0}}), 1e-9);
  REQUIRE(roots.size() == 2);
  CHECK(cdist(roots[0], {1.0 - s3, 0.0}) < 1e-12);
  CHECK(cdist(roots[1], {1.0 + s3, 0.0}) < 1e-12);

  roots = poly_roots(PolynomialC({{1.0, 0.0}, {-2.0, 0.0}, {1.0, 0.0}}), 1e-9);
  REQUIRE(roots.size() == 2);
  CHECK(cdist(roots[0], {1.0, 0.0}) < 1e-6);
  CHECK(cdist(roots[1], {1.0, 0.0}) < 1e-6);

  // lambda^2 - 2 lambda + 1.75: 1 +/- i sqrt(3)/2
  roots = poly_roots(PolynomialC({{1.75, 0.0}, {-2.0, 0.0}, {1.0, 0.0}}), 1e-9);
  REQUIRE(roots.size() == 2);
  CHECK(cdist(roots[0], {1.0, -0.8660254037844386}) < 1e-12);
  CHECK(cdist(roots[1], {1.0, 0.8660254037844386}) < 1e-12);

  roots = poly_roots(PolynomialC({{-4.0, 0.0}, {2.0, 0.0}}), 1e-9);
  REQUIRE(roots.size() == 1);
  CHECK(cdist(roots[0], {2.0, 0.0}) < 1e-14);
}

TEST_CASE("poly_roots residual bound and determinism") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Complex> c(7);
    for (auto& z : c) z = Complex(u(rng), u(rng));
    if (std::abs(c.back()) < 0.1) c.back() = 1.0;
    const PolynomialC p(c);
    const auto r1 = poly_roots(p, 1e-9);
    const auto r2 = poly_roots(p, 1e-9);
    REQUIRE(r1.size() == 6);
    for (size_t k = 0; k < r1.size(); ++k) {
      CHECK(r1[k] == r2[k]);  // bitwise deterministic
      CHECK(std::abs(p.eval(r1[k])) <= 10.0 * 1e-9 * p.scale_at(r1[k]));
    }
  }
}

TEST_CASE("rank_nullspace on the stated cases") {
  const auto zero = rank_nullspace(ComplexMatrix::zero(2), 1e-9);
  CHECK(zero.rank == 0);
  REQUIRE(zero.basis.size() == 2);
  CHECK(std::abs(dot_conj(zero.basis[0], zero.basis[1])) < 1e-12);

  // M(1) - I = [[i, 1], [1, -i]]: rank 1, nullspace along (1, -i)
  ComplexMatrix a = m_of_s(1.0);
  a(0, 0) -= 1.0;
  a(1, 1) -= 1.0;
  const auto ns = rank_nullspace(a, 1e-9);
  CHECK(ns.rank == 1);
  REQUIRE(ns.basis.size() == 1);
  const auto& v = ns.basis[0];
  CHECK(std::abs(v[1] + Complex(0, 1) * v[0]) < 1e-10);  // i v0 + v1 = 0

  const auto d = rank_nullspace(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}), 1e-9);
  CHECK(d.rank == 1);
  REQUIRE(d.basis.size() == 1);
  CHECK(std::abs(d.basis[0][0]) < 1e-12);
  CHECK(std::abs(std::abs(d.basis[0][1]) - 1.0) < 1e-12);
}

TEST_CASE("rank_nullspace residual bound and row-permutation stability") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    // rank-2 4x4 built from two outer products
    ComplexMatrix m(4);
    for (int rep = 0; rep < 2; ++rep) {
      const auto x = corpus::random_complex(4, rng);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) += x(i, 0) * x(j, 1);
    }
    const auto ns = rank_nullspace(m, 1e-9);
    CHECK(ns.rank == 2);
    for (const auto& v : ns.basis) {
      const auto mv = m.apply(v);
      CHECK(vector_norm(mv) <= 1e-9 * m.norm_inf() * vector_norm(v) * 10.0);
    }
    // permuted rows: same rank
    ComplexMatrix perm(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) perm(i, j) = m((i + 1) % 4, j);
    CHECK(rank_nullspace(perm, 1e-9).rank == ns.rank);
  }
}

TEST_CASE("eigen_system on the 2x2 family") {
  const double s3 = std::sqrt(3.0);

  auto rep = eigen_system(m_of_s(2.0), 1e-9);
  REQUIRE(rep.eigenvalues.size() == 2);
  CHECK(rep.spectral_class == SpectralClass::RealComplete);
  CHECK(cdist(rep.eigenvalues[0].value, {1.0 - s3, 0.0}) < 1e-10);
  CHECK(cdist(rep.eigenvalues[1].value, {1.0 + s3, 0.0}) < 1e-10);
  CHECK(rep.eigenvalues[0].algebraic == 1);
  CHECK(rep.eigenvalues[0].geometric == 1);

  rep = eigen_system(m_of_s(1.0), 1e-9);
  REQUIRE(rep.eigenvalues.size() == 1);
  CHECK(rep.spectral_class == SpectralClass::JordanBlock);
  CHECK(rep.eigenvalues[0].algebraic == 2);
  CHECK(rep.eigenvalues[0].geometric == 1);
  CHECK(cdist(rep.eigenvalues[0].value, {1.0, 0.0}) < 1e-10);

  rep = eigen_system(m_of_s(0.5), 1e-9);
  REQUIRE(rep.eigenvalues.size() == 2);
  CHECK(rep.spectral_class == SpectralClass::ConjugatePairs);
  REQUIRE(rep.pairing.size() == 1);
  CHECK(rep.pairing[0] == std::pair<int, int>(0, 1));
  CHECK(!rep.pairing_violated);
}

TEST_CASE("eigen_system detects higher Jordan structure") {
  // single 3x3 block: triple eigenvalue, one eigenvector
  const auto j3 = ComplexMatrix::from_rows({{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0}});
  auto rep = eigen_system(j3, 1e-9);
  REQUIRE(rep.eigenvalues.size() == 1);
  CHECK(rep.spectral_class == SpectralClass::JordanBlock);
  CHECK(rep.eigenvalues[0].algebraic == 3);
  CHECK(rep.eigenvalues[0].geometric == 1);
  CHECK(cdist(rep.eigenvalues[0].value, {1.0, 0.0}) < 1e-10);

  // same block hidden by a similarity
  std::mt19937_64 rng(83);
  ComplexMatrix s = corpus::random_complex(3, rng);
  for (int i = 0; i < 3; ++i) s(i, i) += 3.0;
  rep = eigen_system(s * j3 * inverse(s), 1e-9);
  REQUIRE(rep.eigenvalues.size() == 1);
  CHECK(rep.spectral_class == SpectralClass::JordanBlock);
  CHECK(rep.eigenvalues[0].algebraic == 3);
  CHECK(rep.eigenvalues[0].geometric == 1);

  // 4x4 block at 0.5
  ComplexMatrix j4(4);
  for (int i = 0; i < 4; ++i) {
    j4(i, i) = 0.5;
    if (i + 1 < 4) j4(i, i + 1) = 1.0;
  }
  rep = eigen_system(j4, 1e-9);
  REQUIRE(rep.eigenvalues.size() == 1);
  CHECK(rep.eigenvalues[0].algebraic == 4);
  CHECK(rep.eigenvalues[0].geometric == 1);

  // mixed: 2-block at 1 plus a conjugate pair
  const auto mixed = ComplexMatrix::from_rows({{1.0, 1.0, 0.0, 0.0},
                                               {0.0, 1.0, 0.0, 0.0},
                                               {0.0, 0.0, Complex(2.0, 1.0), 0.0},
                                               {0.0, 0.0, 0.0, Complex(2.0, -1.0)}});
  rep = eigen_system(mixed, 1e-9);
  CHECK(rep.spectral_class == SpectralClass::JordanBlock);
  REQUIRE(rep.eigenvalues.size() == 3);

  // three genuinely distinct close eigenvalues must not be merged
  rep = eigen_system(ComplexMatrix::from_rows({{0.999, 0.0, 0.0},
                                               {0.0, 1.0, 0.0},
                                               {0.0, 0.0, 1.001}}),
                     1e-9);
  CHECK(rep.spectral_class == SpectralClass::RealComplete);
  CHECK(rep.eigenvalues.size() == 3);

  // a true 2-block with a distinct neighbor at 1e-4 keeps its identity
  rep = eigen_system(ComplexMatrix::from_rows({{1.0, 1.0, 0.0},
                                               {0.0, 1.0, 0.0},
                                               {0.0, 0.0, 1.0001}}),
                     1e-9);
  REQUIRE(rep.eigenvalues.size() == 2);
  CHECK(rep.spectral_class == SpectralClass::JordanBlock);
  CHECK(rep.eigenvalues[0].algebraic == 2);
  CHECK(rep.eigenvalues[1].algebraic == 1);
}

TEST_CASE("eigen_system trace/det and similarity invariants") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = corpus::random_complex(4, rng);
    const auto rep = eigen_system(h, 1e-9);
    Complex sum = 0.0, prod = 1.0;
    for (const auto& v : sorted_values(rep)) {
      sum += v;
      prod *= v;
    }
    const Complex tr = h.trace();
    const Complex det = determinant(h);
    CHECK(std::abs(sum - tr) <= 1e-8 * std::max(1.0, std::abs(tr)));
    CHECK(std::abs(prod - det) <= 1e-8 * std::max(1.0, std::abs(det)));

    // eigenvalues invariant under a well-conditioned similarity
    ComplexMatrix s = corpus::random_complex(4, rng);
    for (int i = 0; i < 4; ++i) s(i, i) += 3.0;
    const auto conj = s * h * inverse(s);
    auto v1 = sorted_values(rep);
    auto v2 = sorted_values(eigen_system(conj, 1e-9));
    REQUIRE(v1.size() == v2.size());
    for (size_t k = 0; k < v1.size(); ++k) {
      // greedy match within 1e-6
      double best = 1e9;
      for (const auto& w : v2) best = std::min(best, std::abs(v1[k] - w));
      CHECK(best < 1e-6);
    }
  }
}

TEST_CASE("char_poly residual at reported eigenvalues") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = corpus::random_complex(4, rng);
    const auto p = char_poly(h);
    for (const auto& e : eigen_system(h, 1e-9).eigenvalues)
      CHECK(std::abs(p.eval(e.value)) <= 10.0 * 1e-9 * p.scale_at(e.value));
  }
}

TEST_CASE("quadratic oracle agrees with eigen_system on the family grid") {
  for (double s : {0.25, 0.5, 1.5, 2.0, 3.0}) {
    const auto h = m_of_s(s);
    const auto [lo, hi] = corpus::quadratic_eigs(h);
    const auto rep = eigen_system(h, 1e-9);
    REQUIRE(rep.eigenvalues.size() == 2);
    CHECK(cdist(rep.eigenvalues[0].value, lo) < 1e-10);
    CHECK(cdist(rep.eigenvalues[1].value, hi) < 1e-10);
  }
}
