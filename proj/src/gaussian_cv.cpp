#include "optoring/gaussian_cv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace optoring::gaussian_cv {

namespace {

// Below this distance from the vacuum threshold mu = 1/2 the state counts as separable.
constexpr double kSimonEpsilon = 1e-12;
constexpr double kPairingTolerance = 1e-9;

double logneg_from_mu(double mu) {
  if (mu >= 0.5 - kSimonEpsilon) return 0.0;
  return -std::log(2.0 * mu);
}

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double block_det(const RealMatrix& m, std::size_t r, std::size_t c) {
  return det2(m(r, c), m(r, c + 1), m(r + 1, c), m(r + 1, c + 1));
}

double det4(const RealMatrix& m) {
  // Laplace expansion over 2x2 minors of the first two rows.
  const auto minor = [&](std::size_t row, std::size_t a, std::size_t b) {
    return det2(m(row, a), m(row, b), m(row + 1, a), m(row + 1, b));
  };
  return minor(0, 0, 1) * minor(2, 2, 3) - minor(0, 0, 2) * minor(2, 1, 3) + minor(0, 0, 3) * minor(2, 1, 2) +
         minor(0, 1, 2) * minor(2, 0, 3) - minor(0, 1, 3) * minor(2, 0, 2) + minor(0, 2, 3) * minor(2, 0, 1);
}

void require_modes(const CovarianceMatrix& c, std::size_t n, const char* what) {
  if (c.n_modes() != n) {
    throw ArgumentError(std::string(what) + ": expected a " + std::to_string(n) + "-mode state, got " +
                        std::to_string(c.n_modes()));
  }
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(RealMatrix m) : n_modes_(m.rows() / 2), m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() % 2 != 0) {
    throw ArgumentError("covariance matrix must be 2n x 2n");
  }
  for (std::size_t r = 0; r < m_.rows(); ++r)
    for (std::size_t c = r + 1; c < m_.cols(); ++c)
      if (m_(r, c) != m_(c, r)) throw ArgumentError("covariance matrix must be exactly symmetric");
}

CovarianceMatrix CovarianceMatrix::vacuum(std::size_t n_modes) {
  return CovarianceMatrix(0.5 * RealMatrix::identity(2 * n_modes));
}

CovarianceMatrix CovarianceMatrix::thermal(const std::vector<double>& occupancies) {
  std::vector<double> diag;
  for (double n : occupancies) {
    diag.push_back(n + 0.5);
    diag.push_back(n + 0.5);
  }
  return CovarianceMatrix(RealMatrix::diagonal(diag));
}

CovarianceMatrix CovarianceMatrix::two_mode_squeezed(double r) {
  const double a = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  return CovarianceMatrix(RealMatrix{
      {a, 0, s, 0},
      {0, a, 0, -s},
      {s, 0, a, 0},
      {0, -s, 0, a},
  });
}

RealMatrix symplectic_form(std::size_t n_modes) {
  RealMatrix omega(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

std::string_view to_string(Partition p) {
  switch (p) {
    case Partition::M1M2: return "M1M2";
    case Partition::CM1: return "CM1";
    case Partition::CM2: return "CM2";
    case Partition::Split1v23: return "1|23";
    case Partition::Split2v31: return "2|31";
    case Partition::Split3v12: return "3|12";
  }
  return "?";
}

CovarianceMatrix reduce(const CovarianceMatrix& c, std::size_t first, std::size_t second) {
  require_modes(c, 3, "reduce");
  if (first == second || first > 2 || second > 2) {
    throw ArgumentError("reduce: mode indices must be distinct and in {0, 1, 2}");
  }
  if (first > second) std::swap(first, second);
  const std::size_t idx[4] = {2 * first, 2 * first + 1, 2 * second, 2 * second + 1};
  RealMatrix out(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t k = 0; k < 4; ++k) out(r, k) = c(idx[r], idx[k]);
  return CovarianceMatrix(std::move(out));
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& c, std::size_t mode) {
  if (mode >= c.n_modes()) throw ArgumentError("partial_transpose: mode index out of range");
  RealMatrix out = c.matrix();
  const std::size_t p = 2 * mode + 1;
  for (std::size_t k = 0; k < out.cols(); ++k) {
    if (k == p) continue;
    out(p, k) = -out(p, k);
    out(k, p) = -out(k, p);
  }
  return CovarianceMatrix(std::move(out));
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& c) {
  // (i Omega) c and Omega c share eigenvalue moduli.
  const auto spectrum = numerics::eig_complex(symplectic_form(c.n_modes()) * c.matrix());
  std::vector<double> moduli;
  moduli.reserve(spectrum.size());
  for (const auto& z : spectrum) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end());

  const double floor = std::numeric_limits<double>::epsilon() * c.matrix().max_abs();
  std::vector<double> nu;
  nu.reserve(c.n_modes());
  for (std::size_t k = 0; k + 1 < moduli.size(); k += 2) {
    const double a = moduli[k];
    const double b = moduli[k + 1];
    if (std::abs(a - b) > kPairingTolerance * b + floor) {
      throw numerics::NumericalError("symplectic_eigenvalues: eigenvalues do not pair (" + std::to_string(a) +
                                     " vs " + std::to_string(b) + ")");
    }
    nu.push_back(0.5 * (a + b));
  }
  return nu;
}

double log_negativity(const CovarianceMatrix& c, std::size_t flipped_mode) {
  const auto nu = symplectic_eigenvalues(partial_transpose(c, flipped_mode));
  return logneg_from_mu(nu.front());
}

double log_negativity(const CovarianceMatrix& c, Partition partition) {
  switch (partition) {
    case Partition::M1M2:
    case Partition::CM1:
    case Partition::CM2:
      require_modes(c, 2, "log_negativity");
      return log_negativity(c, std::size_t{0});
    case Partition::Split1v23:
      require_modes(c, 3, "log_negativity");
      return log_negativity(c, std::size_t{0});
    case Partition::Split2v31:
      require_modes(c, 3, "log_negativity");
      return log_negativity(c, std::size_t{1});
    case Partition::Split3v12:
      require_modes(c, 3, "log_negativity");
      return log_negativity(c, std::size_t{2});
  }
  throw ArgumentError("log_negativity: unknown partition");
}

double two_mode_logneg_invariant(const CovarianceMatrix& c) {
  require_modes(c, 2, "two_mode_logneg_invariant");
  const RealMatrix& m = c.matrix();
  const double det_a = block_det(m, 0, 0);
  const double det_b = block_det(m, 2, 2);
  const double det_k = block_det(m, 0, 2);
  const double det_c = det4(m);

  const double sigma = det_a + det_b - 2.0 * det_k;
  double disc = sigma * sigma - 4.0 * det_c;
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, sigma * sigma)) {
      throw numerics::NumericalError("two_mode_logneg_invariant: negative discriminant");
    }
    disc = 0.0;
  }
  // Smaller root of x^2 - sigma x + det c, via the product of roots.
  const double larger = 0.5 * (sigma + std::sqrt(disc));
  const double mu = std::sqrt(det_c / larger);
  return logneg_from_mu(mu);
}

ResidualContangle residual_contangle(const CovarianceMatrix& c) {
  require_modes(c, 3, "residual_contangle");
  ResidualContangle out;
  out.e_12 = log_negativity(reduce(c, 0, 1), Partition::M1M2);
  out.e_13 = log_negativity(reduce(c, 0, 2), Partition::CM1);
  out.e_23 = log_negativity(reduce(c, 1, 2), Partition::CM2);
  out.e_1v23 = log_negativity(c, Partition::Split1v23);
  out.e_2v31 = log_negativity(c, Partition::Split2v31);
  out.e_3v12 = log_negativity(c, Partition::Split3v12);

  const auto sq = [](double x) { return x * x; };
  out.r_1 = sq(out.e_1v23) - sq(out.e_12) - sq(out.e_13);
  out.r_2 = sq(out.e_2v31) - sq(out.e_23) - sq(out.e_12);
  out.r_3 = sq(out.e_3v12) - sq(out.e_13) - sq(out.e_23);
  out.r_min = std::min({out.r_1, out.r_2, out.r_3});
  return out;
}

PhysicalityCheck check_physical(const CovarianceMatrix& c) {
  const auto eigs = numerics::eig_hermitian(c.matrix(), 0.5 * symplectic_form(c.n_modes()));
  const double margin = eigs.front();
  return {margin >= -1e-9, margin};
}

}  // namespace optoring::gaussian_cv
