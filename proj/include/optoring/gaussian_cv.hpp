#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "optoring/numerics.hpp"

namespace optoring::gaussian_cv {

using numerics::RealMatrix;

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Second moments of quadrature fluctuations, ordered (q1, p1, q2, p2, ...).
/// Units are hbar = 1 with [q, p] = i, so the vacuum has variance 1/2.
class CovarianceMatrix {
 public:
  /// Requires a 2n x 2n, exactly symmetric matrix.
  explicit CovarianceMatrix(RealMatrix m);

  static CovarianceMatrix vacuum(std::size_t n_modes);
  /// Product of thermal states with the given mean occupancies.
  static CovarianceMatrix thermal(const std::vector<double>& occupancies);
  /// Two-mode squeezed vacuum with squeezing parameter r.
  static CovarianceMatrix two_mode_squeezed(double r);

  std::size_t n_modes() const { return n_modes_; }
  const RealMatrix& matrix() const { return m_; }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

 private:
  std::size_t n_modes_;
  RealMatrix m_;
};

/// Block-diagonal symplectic form with per-mode blocks [[0, 1], [-1, 0]].
RealMatrix symplectic_form(std::size_t n_modes);

/// Mode indices are zero-based. For the ring cavity, 0 and 1 are the mirrors
/// and 2 is the optical mode.
enum class Partition {
  M1M2,  // two-mode state of modes (0, 1)
  CM1,   // two-mode state of modes (0, 2)
  CM2,   // two-mode state of modes (1, 2)
  Split1v23,
  Split2v31,
  Split3v12,
};

std::string_view to_string(Partition p);

/// The 4x4 state of two modes of a three-mode state, lower index first.
CovarianceMatrix reduce(const CovarianceMatrix& c, std::size_t first, std::size_t second);

/// P c P with P flipping the momentum of `mode`.
CovarianceMatrix partial_transpose(const CovarianceMatrix& c, std::size_t mode);

/// Absolute values of the eigenvalues of (i Omega) c, one per +/- pair, ascending.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& c);

/// max(0, -ln 2 mu) where mu is the smallest symplectic eigenvalue after
/// transposing `flipped_mode`.
double log_negativity(const CovarianceMatrix& c, std::size_t flipped_mode);

/// Two-mode labels take a two-mode state and flip its first mode; one-vs-two
/// labels take the full three-mode state and flip the single mode.
double log_negativity(const CovarianceMatrix& c, Partition partition);

/// Log-negativity of a two-mode state from the local symplectic invariants
/// det A, det B, det K and det c.
double two_mode_logneg_invariant(const CovarianceMatrix& c);

struct ResidualContangle {
  // Pairwise negativities E_{A|B}.
  double e_12 = 0.0;
  double e_13 = 0.0;
  double e_23 = 0.0;
  // One-vs-two negativities E_{A|BC}.
  double e_1v23 = 0.0;
  double e_2v31 = 0.0;
  double e_3v12 = 0.0;
  double r_1 = 0.0;
  double r_2 = 0.0;
  double r_3 = 0.0;
  double r_min = 0.0;
};

/// R_{A|BC} = E_{A|BC}^2 - E_{A|B}^2 - E_{A|C}^2 for each single mode A.
ResidualContangle residual_contangle(const CovarianceMatrix& c);

struct PhysicalityCheck {
  bool physical;
  /// Smallest eigenvalue of c + (i/2) Omega.
  double margin;
};

PhysicalityCheck check_physical(const CovarianceMatrix& c);

}  // namespace optoring::gaussian_cv
