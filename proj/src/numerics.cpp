#include "optoring/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace optoring::numerics {

namespace {

std::string dims(const RealMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_finite(const std::vector<double>& data) {
  for (double v : data) {
    if (!std::isfinite(v)) throw NumericalError("matrix entry is not finite");
  }
}

void require_same_shape(const RealMatrix& a, const RealMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + dims(a) + " vs " + dims(b));
  }
}

void require_square(const RealMatrix& m, const char* what) {
  if (!m.is_square()) throw DimensionError(std::string(what) + ": matrix is not square (" + dims(m) + ")");
}

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

}  // namespace

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  require_finite(data_);
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (data_.size() != rows * cols) throw DimensionError("entry count does not match rows x cols");
  require_finite(data_);
}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged initializer list");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(data_);
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::diagonal(const std::vector<double>& d) {
  RealMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  require_finite(m.data_);
  return m;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double RealMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) sum += std::abs((*this)(r, c));
    best = std::max(best, sum);
  }
  return best;
}

double RealMatrix::norm_frobenius() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

double RealMatrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "operator+");
  RealMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "operator-");
  RealMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*: inner dimensions differ " + dims(a) + " * " + dims(b));
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix out = a;
  for (double& v : out.data_) v *= s;
  return out;
}

RealMatrix symmetrize(const RealMatrix& m) {
  require_square(m, "symmetrize");
  RealMatrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r + 1; c < m.cols(); ++c) {
      const double v = 0.5 * (m(r, c) + m(c, r));
      out(r, c) = v;
      out(c, r) = v;
    }
  return out;
}

RealMatrix kronecker(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexSpectrum eig_complex(const RealMatrix& m) {
  require_square(m, "eig_complex");
  if (m.rows() > kMaxDimension) throw DimensionError("eig_complex: dimension " + dims(m) + " exceeds 64");

  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_complex: QR iteration did not converge for " + dims(m) + " matrix");
  }
  ComplexSpectrum spectrum(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(spectrum.begin(), spectrum.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });

  double scale = 0.0;
  for (const auto& z : spectrum) scale = std::max(scale, std::abs(z));
  const double tol = 1e-9 * std::max(scale, std::numeric_limits<double>::min());
  for (const auto& z : spectrum) {
    if (z.imag() == 0.0) continue;
    const auto conj_match = std::find_if(spectrum.begin(), spectrum.end(),
                                         [&](const auto& w) { return std::abs(w - std::conj(z)) <= tol; });
    if (conj_match == spectrum.end()) {
      throw NumericalError("eig_complex: spectrum of " + dims(m) + " matrix is not conjugate-closed");
    }
  }
  return spectrum;
}

std::vector<double> eig_hermitian(const RealMatrix& re, const RealMatrix& im) {
  require_square(re, "eig_hermitian");
  require_same_shape(re, im, "eig_hermitian");
  Eigen::MatrixXcd h(re.rows(), re.cols());
  for (std::size_t r = 0; r < re.rows(); ++r)
    for (std::size_t c = 0; c < re.cols(); ++c) h(r, c) = {re(r, c), im(r, c)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: did not converge for " + dims(re) + " matrix");
  }
  return {solver.eigenvalues().begin(), solver.eigenvalues().end()};
}

RealMatrix solve_linear(const RealMatrix& a, const RealMatrix& b) {
  require_square(a, "solve_linear");
  if (b.rows() != a.rows()) throw DimensionError("solve_linear: rhs has " + dims(b) + ", system is " + dims(a));

  const std::size_t n = a.rows();
  const double threshold = 1e-14 * a.norm_inf();
  RealMatrix lu = a;
  RealMatrix x = b;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(lu(r, k)) > std::abs(lu(pivot, k))) pivot = r;
    if (!(std::abs(lu(pivot, k)) > threshold)) {
      throw SingularMatrixError("solve_linear: matrix is numerically singular at column " + std::to_string(k));
    }
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu(k, c), lu(pivot, c));
      for (std::size_t c = 0; c < x.cols(); ++c) std::swap(x(k, c), x(pivot, c));
    }
    const double inv = 1.0 / lu(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = lu(r, k) * inv;
      if (f == 0.0) continue;
      lu(r, k) = 0.0;
      for (std::size_t c = k + 1; c < n; ++c) lu(r, c) -= f * lu(k, c);
      for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) -= f * x(k, c);
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      double sum = x(k, c);
      for (std::size_t j = k + 1; j < n; ++j) sum -= lu(k, j) * x(j, c);
      x(k, c) = sum / lu(k, k);
    }
  }
  return x;
}

RealMatrix solve_lyapunov(const RealMatrix& s, const RealMatrix& n) {
  require_square(s, "solve_lyapunov");
  require_same_shape(s, n, "solve_lyapunov");
  const std::size_t d = s.rows();
  const RealMatrix eye = RealMatrix::identity(d);

  // Row-major vec: vec(S C) = (S (x) I) vec(C), vec(C S^T) = (I (x) S) vec(C).
  const RealMatrix system = kronecker(s, eye) + kronecker(eye, s);
  RealMatrix rhs(d * d, 1);
  for (std::size_t i = 0; i < d * d; ++i) rhs(i, 0) = -n.entries()[i];

  RealMatrix vec_c(d * d, 1);
  try {
    vec_c = solve_linear(system, rhs);
  } catch (const SingularMatrixError&) {
    throw NoUniqueSolutionError("solve_lyapunov: drift spectrum has eigenvalue pairs summing to zero");
  }
  return symmetrize(RealMatrix(d, d, vec_c.entries()));
}

double lyapunov_residual(const RealMatrix& s, const RealMatrix& c, const RealMatrix& n) {
  return (s * c + c * s.transpose() + n).norm_frobenius();
}

StabilityVerdict is_hurwitz(const RealMatrix& s) {
  const ComplexSpectrum spectrum = eig_complex(s);
  const double margin = spectrum.front().real();
  return {margin < -1e-9 * s.norm_inf(), margin};
}

}  // namespace optoring::numerics
