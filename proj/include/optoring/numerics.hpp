#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace optoring::numerics {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when S C + C S^T = -N has no unique solution, i.e. two eigenvalues
/// of S sum to zero.
class NoUniqueSolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Dense real matrix, row-major. Entries are required to be finite.
class RealMatrix {
 public:
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static RealMatrix identity(std::size_t n);
  static RealMatrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  const std::vector<double>& entries() const { return data_; }

  RealMatrix transpose() const;

  double norm_inf() const;
  double norm_frobenius() const;
  double max_abs() const;

  friend RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator*(double s, const RealMatrix& a);
  friend bool operator==(const RealMatrix& a, const RealMatrix& b) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

RealMatrix symmetrize(const RealMatrix& m);
RealMatrix kronecker(const RealMatrix& a, const RealMatrix& b);

/// Eigenvalues ordered by descending real part, ties by descending imaginary part.
using ComplexSpectrum = std::vector<std::complex<double>>;

inline constexpr std::size_t kMaxDimension = 64;

/// All eigenvalues of a real square matrix (dimension <= 64). Checks that the
/// non-real eigenvalues close under conjugation.
ComplexSpectrum eig_complex(const RealMatrix& m);

/// Eigenvalues of the Hermitian matrix re + i*im (im antisymmetric), ascending.
std::vector<double> eig_hermitian(const RealMatrix& re, const RealMatrix& im);

/// Solves a x = b by LU with partial pivoting. Throws SingularMatrixError when
/// a pivot falls below 1e-14 * ||a||_inf.
RealMatrix solve_linear(const RealMatrix& a, const RealMatrix& b);

/// Solves s C + C s^T = -n through the d^2-dimensional vectorized system.
/// The returned C is symmetrized.
RealMatrix solve_lyapunov(const RealMatrix& s, const RealMatrix& n);

/// Residual ||s C + C s^T + n||_F.
double lyapunov_residual(const RealMatrix& s, const RealMatrix& c, const RealMatrix& n);

struct StabilityVerdict {
  bool stable;
  /// max Re(lambda) over the spectrum.
  double margin;
};

/// Eigenvalue form of the Routh-Hurwitz condition. Margins within
/// 1e-9 * ||s||_inf of zero are classified unstable.
StabilityVerdict is_hurwitz(const RealMatrix& s);

}  // namespace optoring::numerics
