#pragma once

#include <complex>
#include <vector>

#include "ptsym/errors.hpp"

namespace ptsym {

using Complex = std::complex<double>;

/// Dense square complex matrix with value semantics, row-major storage.
/// All workbench operators (Hamiltonians, field operators, symmetry
/// operators, metric operators) live here.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) { check_dim(n); }
  ComplexMatrix(int n, std::vector<Complex> entries);

  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int n) { return ComplexMatrix(n); }
  /// Row-major initializer, validates squareness and finiteness.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  int dim() const { return n_; }
  Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<Complex>& data() const { return a_; }

  ComplexMatrix conjugate() const;
  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;

  Complex trace() const;
  double norm_inf() const;    // max absolute row sum
  double norm_fro() const;
  bool is_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  std::vector<Complex> apply(const std::vector<Complex>& v) const;  // A v

 private:
  static void check_dim(int n);
  int n_ = 0;
  std::vector<Complex> a_;
};

/// Kronecker product, used to flatten intertwining equations X A = B X
/// into n^2-dimensional linear systems.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

double vector_norm(const std::vector<Complex>& v);
Complex dot_conj(const std::vector<Complex>& a, const std::vector<Complex>& b);  // sum conj(a_i) b_i

}  // namespace ptsym
