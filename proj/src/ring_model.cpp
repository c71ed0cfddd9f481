#include "optoring/ring_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>

namespace optoring::ring_model {

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ParameterError(field, message);
}

}  // namespace

void PhysicalParams::validate() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  require(finite(theta) && theta >= 0.0 && theta < kPi, "theta", "must lie in [0, pi)");
  require(finite(omega_L) && omega_L > 0.0, "omega_L", "must be positive");
  require(finite(omega_m1) && omega_m1 > 0.0, "omega_m1", "must be positive");
  require(finite(omega_m2) && omega_m2 > 0.0, "omega_m2", "must be positive");
  require(finite(gamma_m1) && gamma_m1 >= 0.0, "gamma_m1", "must be non-negative");
  require(finite(gamma_m2) && gamma_m2 >= 0.0, "gamma_m2", "must be non-negative");
  require(finite(g1), "g1", "must be finite");
  require(finite(g2), "g2", "must be finite");
  require(finite(kappa) && kappa > 0.0, "kappa", "must be positive");
  require(finite(lambda), "lambda", "must be finite");
  require(finite(power) && power >= 0.0, "power", "must be non-negative");
  require(finite(temp1) && temp1 >= 0.0, "temp1", "must be non-negative");
  require(finite(temp2) && temp2 >= 0.0, "temp2", "must be non-negative");
  std::visit(
      [](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, EffectiveDetuning>) {
          require(std::isfinite(mode.delta), "delta", "must be finite");
        } else {
          require(std::isfinite(mode.delta_c), "delta_c", "must be finite");
        }
      },
      detuning);
}

PhysicalParams experimental_params() {
  const double omega_m = 2.0 * kPi * 1e7;
  const double g1 = 2.0 * kPi * 35.0;
  return PhysicalParams{
      .theta = kPi / 3.0,
      .omega_L = 2.0 * kPi * 3.7e14,
      .omega_m1 = omega_m,
      .omega_m2 = omega_m,
      .gamma_m1 = 2.0 * kPi * 1e2,
      .gamma_m2 = 2.0 * kPi * 1e2,
      .g1 = g1,
      .g2 = 0.9 * g1,
      .kappa = kPi * 1e7,
      .lambda = 0.1 * omega_m,
      .power = 0.09,
      .temp1 = 1e-3,
      .temp2 = 1e-3,
      .detuning = EffectiveDetuning{omega_m},
  };
}

double thermal_occupancy(double omega, double temperature) {
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

double drive_amplitude(const PhysicalParams& p) {
  return std::sqrt(2.0 * p.kappa * p.power / (kHbar * p.omega_L));
}

MirrorPositions steady_state_positions(const DerivedParams& d, const PhysicalParams& p) {
  // Omega1 q1 + lambda q2 = -eta1 |a|^2,  lambda q1 + Omega2 q2 = +eta2 |a|^2
  const double det = p.omega_m1 * p.omega_m2 - p.lambda * p.lambda;
  if (det == 0.0) throw NoSolutionError("steady_state_positions: degenerate stiffness, Omega1 Omega2 = lambda^2");
  const double intensity = d.a_s * d.a_s;
  const double f1 = -d.eta1 * intensity;
  const double f2 = d.eta2 * intensity;
  return {(f1 * p.omega_m2 - p.lambda * f2) / det, (p.omega_m1 * f2 - p.lambda * f1) / det};
}

std::vector<DetuningRoot> effective_detuning_roots(double delta_c, const PhysicalParams& p) {
  const double c2 = std::pow(std::cos(p.theta / 2.0), 2);
  const double eta1 = p.g1 * c2;
  const double eta2 = p.g2 * c2;
  const double eps = drive_amplitude(p);
  const double k = eta1 * eta1 / p.omega_m1 + eta2 * eta2 / p.omega_m2;

  // In units of kappa: x^3 - xc x^2 + x + (b - xc) = 0, b = K eps^2 / kappa^3.
  const double xc = delta_c / p.kappa;
  const double b = k * eps * eps / (p.kappa * p.kappa * p.kappa);
  const double a2 = -xc;
  const double a1 = 1.0;
  const double a0 = b - xc;

  const auto poly = [&](double x) { return ((x + a2) * x + a1) * x + a0; };
  const auto dpoly = [&](double x) { return (3.0 * x + 2.0 * a2) * x + a1; };

  const numerics::RealMatrix companion{{-a2, -a1, -a0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  const auto eigs = numerics::eig_complex(companion);

  const double disc = 18.0 * a2 * a1 * a0 - 4.0 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 - 4.0 * a1 * a1 * a1 -
                      27.0 * a0 * a0;
  std::vector<double> xs;
  if (disc >= 0.0) {
    for (const auto& z : eigs) xs.push_back(z.real());
  } else {
    const auto most_real = std::min_element(eigs.begin(), eigs.end(), [](const auto& u, const auto& v) {
      return std::abs(u.imag()) < std::abs(v.imag());
    });
    xs.push_back(most_real->real());
  }
  for (double& x : xs) {
    for (int it = 0; it < 50; ++it) {
      const double slope = dpoly(x);
      if (slope == 0.0) break;
      const double step = poly(x) / slope;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
  }
  std::sort(xs.begin(), xs.end());

  std::vector<DetuningRoot> roots;
  roots.reserve(xs.size());
  for (double x : xs) {
    const double delta = x * p.kappa;
    roots.push_back({delta, eps / std::sqrt(p.kappa * p.kappa + delta * delta)});
  }
  return roots;
}

DerivedParams derive_params(const PhysicalParams& p) {
  p.validate();
  DerivedParams d{};
  const double c2 = std::pow(std::cos(p.theta / 2.0), 2);
  d.eta1 = p.g1 * c2;
  d.eta2 = p.g2 * c2;
  d.eps_L = drive_amplitude(p);
  d.n_th1 = thermal_occupancy(p.omega_m1, p.temp1);
  d.n_th2 = thermal_occupancy(p.omega_m2, p.temp2);

  if (const auto* eff = std::get_if<EffectiveDetuning>(&p.detuning)) {
    d.delta = eff->delta;
    d.a_s = d.eps_L / std::sqrt(p.kappa * p.kappa + d.delta * d.delta);
  } else {
    const auto roots = effective_detuning_roots(std::get<CavityDetuning>(p.detuning).delta_c, p);
    if (roots.empty()) throw NoSolutionError("derive_params: no real effective detuning");
    // Weakest-field branch on the red-detuned side.
    d.delta = roots.back().delta;
    d.a_s = roots.back().a_s;
  }
  d.G1 = std::sqrt(2.0) * d.eta1 * d.a_s;
  d.G2 = std::sqrt(2.0) * d.eta2 * d.a_s;
  const auto q = steady_state_positions(d, p);
  d.q1_s = q.q1;
  d.q2_s = q.q2;
  return d;
}

RealMatrix build_drift(const DerivedParams& d, const PhysicalParams& p) {
  const double w1 = p.omega_m1;
  const double w2 = p.omega_m2;
  const double lam = p.lambda;
  const double k = p.kappa;
  const double D = d.delta;
  return RealMatrix{
      {0.0, w1, 0.0, 0.0, 0.0, 0.0},
      {-w1, -p.gamma_m1, -lam, 0.0, -d.G1, 0.0},
      {0.0, 0.0, 0.0, w2, 0.0, 0.0},
      {-lam, 0.0, -w2, -p.gamma_m2, d.G2, 0.0},
      {0.0, 0.0, 0.0, 0.0, -k, D},
      {-d.G1, 0.0, d.G2, 0.0, -D, -k},
  };
}

RealMatrix build_noise(const DerivedParams& d, const PhysicalParams& p) {
  return RealMatrix::diagonal({
      0.0,
      p.gamma_m1 * (2.0 * d.n_th1 + 1.0),
      0.0,
      p.gamma_m2 * (2.0 * d.n_th2 + 1.0),
      p.kappa,
      p.kappa,
  });
}

SteadyState steady_covariance(const PhysicalParams& p) {
  SteadyState out{derive_params(p), {false, 0.0}, std::nullopt};
  const RealMatrix drift = build_drift(out.derived, p);
  out.stability = numerics::is_hurwitz(drift);
  if (!out.stability.stable) return out;
  try {
    out.covariance.emplace(numerics::solve_lyapunov(drift, build_noise(out.derived, p)));
  } catch (const numerics::NoUniqueSolutionError&) {
    out.stability.stable = false;
  }
  return out;
}

EntanglementReport entanglement_report(const PhysicalParams& p) {
  SteadyState state = steady_covariance(p);
  EntanglementReport report{state.derived, state.stable(), state.stability.margin, std::nullopt, std::nullopt};
  if (!state.stable()) return report;

  const auto rc = gaussian_cv::residual_contangle(*state.covariance);
  report.measures = EntanglementMeasures{
      .E_M1M2 = rc.e_12,
      .E_CM1 = rc.e_13,
      .E_CM2 = rc.e_23,
      .E_1v23 = rc.e_1v23,
      .E_2v31 = rc.e_2v31,
      .E_3v12 = rc.e_3v12,
      .R_1 = rc.r_1,
      .R_2 = rc.r_2,
      .R_3 = rc.r_3,
      .R_min = rc.r_min,
  };
  report.covariance = std::move(state.covariance);
  return report;
}

}  // namespace optoring::ring_model
