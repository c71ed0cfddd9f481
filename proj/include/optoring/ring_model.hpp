#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "optoring/gaussian_cv.hpp"
#include "optoring/numerics.hpp"

namespace optoring::ring_model {

using gaussian_cv::CovarianceMatrix;
using numerics::RealMatrix;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;  // J / K

/// Invalid physical input. `field()` names the offending parameter.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Effective detuning, already including the radiation-pressure shift.
struct EffectiveDetuning {
  double delta;  // rad/s
};

/// Bare cavity-laser detuning; the effective value is found self-consistently.
struct CavityDetuning {
  double delta_c;  // rad/s
};

using DetuningMode = std::variant<EffectiveDetuning, CavityDetuning>;

/// Laboratory inputs. Angular frequencies and rates in rad/s.
struct PhysicalParams {
  double theta;  // mirror incidence angle, radians
  double omega_L;
  double omega_m1;
  double omega_m2;
  double gamma_m1;
  double gamma_m2;
  double g1;
  double g2;
  double kappa;
  double lambda;  // mirror-mirror coupling
  double power;   // W
  double temp1;   // K
  double temp2;   // K
  DetuningMode detuning;

  /// Throws ParameterError naming the first invalid field.
  void validate() const;
};

/// Experimental parameter set: theta = pi/3, Omega_L = 2pi 3.7e14, Omega_M = 2pi 1e7,
/// gamma_M = 2pi 100, g1 = 2pi 35, g2 = 0.9 g1, kappa = pi 1e7, together with
/// lambda = 0.1 Omega_M, P_L = 60 mW, T = 1 mK and Delta = Omega_M.
PhysicalParams experimental_params();

struct DerivedParams {
  double eta1;
  double eta2;
  double eps_L;  // 1/s
  double a_s;    // |a^s|, real non-negative by phase choice
  double G1;
  double G2;
  double n_th1;
  double n_th2;
  double delta;  // effective detuning
  double q1_s;
  double q2_s;
};

/// Bose-Einstein occupancy; exactly zero at T = 0.
double thermal_occupancy(double omega, double temperature);

/// Drive amplitude sqrt(2 kappa P / (hbar Omega_L)).
double drive_amplitude(const PhysicalParams& p);

DerivedParams derive_params(const PhysicalParams& p);

struct MirrorPositions {
  double q1;
  double q2;
};

/// Exact coupled stationary positions, including the lambda cross term.
MirrorPositions steady_state_positions(const DerivedParams& d, const PhysicalParams& p);

struct DetuningRoot {
  double delta;
  double a_s;
};

/// Real roots of Delta (kappa^2 + Delta^2) = Delta_c (kappa^2 + Delta^2) - K eps_L^2,
/// K = eta1^2/Omega_M1 + eta2^2/Omega_M2, ascending in Delta.
std::vector<DetuningRoot> effective_detuning_roots(double delta_c, const PhysicalParams& p);

/// Drift matrix of (dq1, dp1, dq2, dp2, dx, dy).
RealMatrix build_drift(const DerivedParams& d, const PhysicalParams& p);

/// Diffusion matrix diag(0, gamma1 (2 n1 + 1), 0, gamma2 (2 n2 + 1), kappa, kappa).
RealMatrix build_noise(const DerivedParams& d, const PhysicalParams& p);

struct SteadyState {
  DerivedParams derived;
  numerics::StabilityVerdict stability;
  /// Present only in the stable regime.
  std::optional<CovarianceMatrix> covariance;

  bool stable() const { return covariance.has_value(); }
};

SteadyState steady_covariance(const PhysicalParams& p);

struct EntanglementMeasures {
  double E_M1M2;
  double E_CM1;
  double E_CM2;
  double E_1v23;
  double E_2v31;
  double E_3v12;
  double R_1;
  double R_2;
  double R_3;
  double R_min;
};

struct EntanglementReport {
  DerivedParams derived;
  bool stable;
  double stability_margin;  // rad/s
  /// Absent when unstable.
  std::optional<EntanglementMeasures> measures;
  std::optional<CovarianceMatrix> covariance;
};

EntanglementReport entanglement_report(const PhysicalParams& p);

}  // namespace optoring::ring_model
