#include "kspave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kspave {

Matrix Matrix::identity(int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Complex Matrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : a_) m = std::max(m, std::abs(z));
  return m;
}

bool Matrix::all_finite() const {
  for (const Complex& z : a_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Matrix Matrix::operator+(const Matrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw InvalidInput("matrix add: shape mismatch");
  Matrix m(rows_, cols_);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + b.a_[k];
  return m;
}

Matrix Matrix::operator-(const Matrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw InvalidInput("matrix sub: shape mismatch");
  Matrix m(rows_, cols_);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - b.a_[k];
  return m;
}

Matrix Matrix::operator*(const Matrix& b) const {
  if (cols_ != b.rows_) throw InvalidInput("matrix mul: shape mismatch");
  Matrix m(rows_, b.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Complex aik = (*this)(i, k);
      if (aik == Complex(0.0)) continue;
      for (int j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

Matrix Matrix::scaled(Complex s) const {
  Matrix m = *this;
  for (Complex& z : m.a_) z *= s;
  return m;
}

Matrix Matrix::submatrix(const std::vector<int>& idx) const {
  Matrix m(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = (*this)(idx[i], idx[j]);
  return m;
}

HermitianMatrix::HermitianMatrix(const Matrix& m, double tolerance) : mat_(m) {
  if (!m.square() || m.rows() == 0)
    throw InvalidInput("hermitian matrix must be square with positive dimension");
  if (!m.all_finite()) throw InvalidInput("hermitian matrix has non-finite entries");
  const double scale = std::max(1.0, m.max_abs());
  for (int i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i).imag()) > tolerance * scale)
      throw InvalidInput("diagonal entry has a non-real part beyond tolerance");
    for (int j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 2.0 * tolerance * scale)
        throw InvalidInput("matrix is not conjugate-symmetric within tolerance");
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      mat_(i, j) = avg;
      mat_(j, i) = std::conj(avg);
    }
    mat_(i, i) = Complex(mat_(i, i).real(), 0.0);
  }
}

HermitianMatrix HermitianMatrix::zero(int d) { return HermitianMatrix(Matrix(d, d)); }

HermitianMatrix HermitianMatrix::identity(int d) {
  return HermitianMatrix(Matrix::identity(d));
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::rank_one(const Cvector& u) {
  const int d = static_cast<int>(u.size());
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = u[i] * std::conj(u[j]);
  return HermitianMatrix(m);
}

double HermitianMatrix::trace_real() const { return mat_.trace().real(); }

HermitianMatrix HermitianMatrix::principal_submatrix(const std::vector<int>& idx) const {
  if (idx.empty()) throw InvalidInput("principal_submatrix: empty index set");
  return HermitianMatrix(mat_.submatrix(idx));
}

VectorSystem::VectorSystem(int dim, std::vector<Cvector> vectors)
    : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ <= 0) throw InvalidInput("vector system dimension must be positive");
  if (vectors_.empty()) throw InvalidInput("vector system must hold at least one vector");
  for (const Cvector& v : vectors_) {
    if (static_cast<int>(v.size()) != dim_)
      throw InvalidInput("vector length does not match system dimension");
    for (const Complex& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidInput("vector entry is not finite");
  }
}

double VectorSystem::norm_squared(int i) const { return kspave::norm_squared(vectors_[i]); }

double VectorSystem::max_norm_squared() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, norm_squared(i));
  return m;
}

VectorSystem VectorSystem::subsystem(const std::vector<int>& idx) const {
  std::vector<Cvector> vs;
  vs.reserve(idx.size());
  for (int i : idx) vs.push_back(vectors_[i]);
  return VectorSystem(dim_, std::move(vs));
}

Complex inner_product(const Cvector& x, const Cvector& y) {
  if (x.size() != y.size()) throw InvalidInput("inner product: length mismatch");
  Complex s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k] * std::conj(y[k]);
  return s;
}

double norm_squared(const Cvector& x) {
  double s = 0.0;
  for (const Complex& z : x) s += std::norm(z);
  return s;
}

namespace {

// One cyclic Jacobi pass infrastructure: annihilate the (p, q) entry with a
// complex rotation U (U[pp]=c, U[pq]=-s w, U[qp]=s conj(w), U[qq]=c).
void jacobi_rotate(Matrix& a, Matrix& v, int p, int q) {
  const Complex apq = a(p, q);
  const double absg = std::abs(apq);
  if (absg == 0.0) return;
  const Complex w = apq / absg;
  const double alpha = a(p, p).real();
  const double beta = a(q, q).real();
  const double tau = (beta - alpha) / (2.0 * absg);
  // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
  const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const int n = a.rows();
  for (int k = 0; k < n; ++k) {  // A <- A U
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = c * akp + s * std::conj(w) * akq;
    a(k, q) = -s * w * akp + c * akq;
  }
  for (int k = 0; k < n; ++k) {  // A <- U^H A
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = c * apk + s * w * aqk;
    a(q, k) = -s * std::conj(w) * apk + c * aqk;
  }
  for (int k = 0; k < n; ++k) {  // V <- V U
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = c * vkp + s * std::conj(w) * vkq;
    v(k, q) = -s * w * vkp + c * vkq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = Complex(a(p, p).real(), 0.0);
  a(q, q) = Complex(a(q, q).real(), 0.0);
}

double offdiag_mass(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& h) {
  const int n = h.dim();
  Matrix a = h.mat();
  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius_norm();
  const double thresh = tol::kJacobiOff * std::max(scale, 1e-300);
  constexpr int kMaxSweeps = 128;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_mass(a) <= thresh) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] > diag[y]; });
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }

  // residual: max over pairs of ||A v - lambda v||
  const Matrix& m = h.mat();
  double res = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) acc += m(i, k) * out.vectors(k, j);
      acc -= out.eigenvalues[j] * out.vectors(i, j);
      s += std::norm(acc);
    }
    res = std::max(res, std::sqrt(s));
  }
  out.residual = res;
  return out;
}

SpectrumReport eigenvalues(const HermitianMatrix& a) {
  EigenDecomposition e = eigh(a);
  return SpectrumReport{std::move(e.eigenvalues), e.residual};
}

double operator_norm(const HermitianMatrix& a) {
  const SpectrumReport r = eigenvalues(a);
  double m = 0.0;
  for (double x : r.eigenvalues) m = std::max(m, std::abs(x));
  return m;
}

double operator_norm(const Matrix& a) {
  if (!a.square()) throw InvalidInput("operator_norm: matrix must be square");
  if (a.rows() == 0) throw InvalidInput("operator_norm: dimension zero");
  // Hermitian fast path.
  const double scale = std::max(1.0, a.max_abs());
  bool herm = true;
  for (int i = 0; i < a.rows() && herm; ++i)
    for (int j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-13 * scale) {
        herm = false;
        break;
      }
  if (herm) return operator_norm(HermitianMatrix(a, 1e-12));
  const Matrix g = a.adjoint() * a;
  const SpectrumReport r = eigenvalues(HermitianMatrix(g, 1e-10));
  return std::sqrt(std::max(0.0, r.eigenvalues.front()));
}

double min_eigenvalue(const HermitianMatrix& a) {
  return eigenvalues(a).eigenvalues.back();
}

HermitianMatrix psd_sqrt(const HermitianMatrix& a) {
  EigenDecomposition e = eigh(a);
  const double norm = std::max(std::abs(e.eigenvalues.front()),
                               std::abs(e.eigenvalues.back()));
  for (double& lam : e.eigenvalues) {
    if (lam < -tol::kPsd * std::max(1.0, norm))
      throw NotPsd("psd_sqrt: eigenvalue below the PSD tolerance");
    lam = std::max(lam, 0.0);
  }
  const int n = a.dim();
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += e.vectors(i, k) * std::sqrt(e.eigenvalues[k]) * std::conj(e.vectors(j, k));
      b(i, j) = acc;
    }
  return HermitianMatrix(b, 1e-10);
}

RealPolynomial char_poly(const HermitianMatrix& a) {
  const int d = a.dim();
  std::vector<double> coeffs(d + 1, 0.0);
  coeffs[d] = 1.0;
  Matrix m = Matrix::identity(d);
  for (int k = 1; k <= d; ++k) {
    Matrix am = a.mat() * m;
    const double ck = -am.trace().real() / static_cast<double>(k);
    coeffs[d - k] = ck;
    for (int i = 0; i < d; ++i) am(i, i) += ck;
    m = std::move(am);
  }
  return RealPolynomial(std::move(coeffs));
}

HermitianMatrix frame_operator(const VectorSystem& v) {
  const int d = v.dim();
  Matrix s(d, d);
  for (int n = 0; n < v.size(); ++n) {
    const Cvector& u = v.vec(n);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s(i, j) += u[i] * std::conj(u[j]);
  }
  return HermitianMatrix(s, 1e-10);
}

HermitianMatrix gram_matrix(const VectorSystem& v) {
  const int m = v.size();
  Matrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = inner_product(v.vec(j), v.vec(i));
  return HermitianMatrix(g, 1e-10);
}

VectorSystem vector_system_from_gram(const HermitianMatrix& g) {
  const HermitianMatrix s = psd_sqrt(g);
  const int m = g.dim();
  std::vector<Cvector> vs(m, Cvector(m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) vs[j][i] = s(i, j);
  return VectorSystem(m, std::move(vs));
}

Complex det_lu(Matrix a) {
  if (!a.square()) throw InvalidInput("det: matrix must be square");
  const int n = a.rows();
  if (n == 0) return 1.0;
  Complex det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(a(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    const Complex inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) * inv;
      if (f == Complex(0.0)) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

Matrix solve_lu(Matrix m, Matrix rhs) {
  if (!m.square() || m.rows() != rhs.rows())
    throw InvalidInput("solve: shape mismatch");
  const int n = m.rows();
  const int nrhs = rhs.cols();
  const double scale = std::max(m.max_abs(), 1e-300);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(m(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        piv = i;
      }
    if (best <= 1e-14 * scale) throw SingularPoint("solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      for (int j = 0; j < nrhs; ++j) std::swap(rhs(k, j), rhs(piv, j));
    }
    const Complex inv = 1.0 / m(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) * inv;
      if (f == Complex(0.0)) continue;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      for (int j = 0; j < nrhs; ++j) rhs(i, j) -= f * rhs(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    const Complex inv = 1.0 / m(k, k);
    for (int j = 0; j < nrhs; ++j) {
      Complex acc = rhs(k, j);
      for (int i = k + 1; i < n; ++i) acc -= m(k, i) * rhs(i, j);
      rhs(k, j) = acc * inv;
    }
  }
  return rhs;
}

Complex trace_inverse_times(const Matrix& m, const Matrix& b) {
  return solve_lu(m, b).trace();
}

}  // namespace kspave
