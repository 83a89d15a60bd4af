#pragma once

// Dense complex Hermitian linear algebra at desk scale (d <~ 64): a cyclic
// Jacobi eigensolver with complex rotations, operator norms, PSD square
// roots, Faddeev-LeVerrier characteristic polynomials, and the frame/Gram
// operators of finite vector systems. Everything is a pure function on
// immutable values.

#include <complex>
#include <vector>

#include "kspave/errors.hpp"
#include "kspave/poly.hpp"

namespace kspave {

using Complex = std::complex<double>;
using Cvector = std::vector<Complex>;

namespace tol {
inline constexpr double kHermitian = 1e-12;  // construction symmetry check
inline constexpr double kPsd = 1e-10;        // eigenvalue clamping threshold
inline constexpr double kJacobiOff = 1e-14;  // off-diagonal mass, relative
inline constexpr double kParseval = 1e-8;
inline constexpr double kProjection = 1e-8;
}  // namespace tol

// General dense complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {
    if (rows < 0 || cols < 0) throw InvalidInput("matrix dimensions must be nonnegative");
  }
  static Matrix identity(int d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  Matrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix operator*(const Matrix& b) const;
  Matrix scaled(Complex s) const;

  // Rows/columns restricted to idx (in order), for principal compressions.
  Matrix submatrix(const std::vector<int>& idx) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
};

// Square matrix validated conjugate-symmetric (within 1e-12 relative to the
// largest entry) with a real diagonal; stored exactly Hermitized.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m, double tolerance = tol::kHermitian);

  static HermitianMatrix zero(int d);
  static HermitianMatrix identity(int d);
  static HermitianMatrix diagonal(const std::vector<double>& d);
  static HermitianMatrix rank_one(const Cvector& u);  // u u*

  int dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  Complex operator()(int i, int j) const { return mat_(i, j); }
  double diag(int i) const { return mat_(i, i).real(); }
  double trace_real() const;

  HermitianMatrix principal_submatrix(const std::vector<int>& idx) const;

 private:
  Matrix mat_;
};

// Finite indexed family of vectors in C^dim.
class VectorSystem {
 public:
  VectorSystem(int dim, std::vector<Cvector> vectors);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(vectors_.size()); }
  const Cvector& vec(int i) const { return vectors_[i]; }
  const std::vector<Cvector>& vectors() const { return vectors_; }

  double norm_squared(int i) const;
  double max_norm_squared() const;
  VectorSystem subsystem(const std::vector<int>& idx) const;

 private:
  int dim_;
  std::vector<Cvector> vectors_;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;  // non-increasing
  double residual = 0.0;            // max ||A v - lambda v|| over computed pairs
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // non-increasing
  Matrix vectors;                   // unitary; column j pairs with eigenvalues[j]
  double residual = 0.0;
};

// Cyclic Jacobi with complex rotations; converges when the off-diagonal
// Frobenius mass drops below 1e-14 relative to ||A||_F.
EigenDecomposition eigh(const HermitianMatrix& a);

SpectrumReport eigenvalues(const HermitianMatrix& a);

double operator_norm(const HermitianMatrix& a);  // max |eigenvalue|
double operator_norm(const Matrix& a);           // largest singular value

// Hermitian PSD square root. Eigenvalues in [-1e-10, 0) are clamped to 0;
// anything lower is rejected as not PSD.
HermitianMatrix psd_sqrt(const HermitianMatrix& a);

// Smallest eigenvalue; convenience for PSD checks and Riesz bounds.
double min_eigenvalue(const HermitianMatrix& a);

// Monic det(zI - A) by the Faddeev-LeVerrier recurrence, kept independent of
// the eigensolver so the two paths can cross-check each other.
RealPolynomial char_poly(const HermitianMatrix& a);

HermitianMatrix frame_operator(const VectorSystem& v);  // sum u_i u_i*
HermitianMatrix gram_matrix(const VectorSystem& v);     // (<u_j, u_i>)_{i,j}

// Columns of psd_sqrt(g): a vector system in C^m whose Gram matrix is g.
VectorSystem vector_system_from_gram(const HermitianMatrix& g);

// LU determinant with partial pivoting.
Complex det_lu(Matrix a);

// tr(M^{-1} B); throws SingularPoint when M is numerically singular.
Complex trace_inverse_times(const Matrix& m, const Matrix& b);

// Solve M x = rhs columns; throws SingularPoint on singular M.
Matrix solve_lu(Matrix m, Matrix rhs);

Complex inner_product(const Cvector& x, const Cvector& y);  // <x, y> = sum x conj(y)
double norm_squared(const Cvector& x);

}  // namespace kspave
