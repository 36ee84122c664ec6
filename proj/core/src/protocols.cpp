#include "sta/protocols.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace sta {

namespace {

double resolve_f_max(const ProtocolSpec& spec, const OscillatorParams& params) {
  return spec.f_max != 0.0 ? spec.f_max : params.f_max();
}

// Linear transport profile in sigma = t/(s·T0).
AnalyticSignal linear_profile(double f_max, Direction dir, double t_f) {
  if (dir == Direction::Forward) return AnalyticSignal::polynomial({0.0, f_max}, t_f);
  return AnalyticSignal::polynomial({f_max, -f_max}, t_f);
}

// Smoothstep quintic 10σ³ − 15σ⁴ + 6σ⁵ scaled to f_max, mirrored for
// backward transport (P(1−σ) = 1 − P(σ)).
AnalyticSignal quintic_profile(double f_max, Direction dir, double t_f) {
  if (dir == Direction::Forward)
    return AnalyticSignal::polynomial({0.0, 0.0, 0.0, 10.0 * f_max, -15.0 * f_max, 6.0 * f_max},
                                      t_f);
  return AnalyticSignal::polynomial({f_max, 0.0, 0.0, -10.0 * f_max, 15.0 * f_max, -6.0 * f_max},
                                    t_f);
}

// Spectral weight of sine mode n in the residual-excitation functional,
// expressed at dimensionless frequency θ = ω″·t_f, and its θ-derivatives.
// The excitation transform of the ramp-plus-sines ansatz factors as
// (nonvanishing prefactor) × W(θ) with W(θ) = 1 + Σ a_n·mode_weight(n, θ),
// so order-N flatness at the design point is N real conditions on W.
double mode_weight(int n, double theta, int deriv_order) {
  const double c = two_pi * static_cast<double>(n);
  if (deriv_order == 0) return c * (1.0 + 0.5 * c * (1.0 / (theta - c) - 1.0 / (theta + c)));
  double factorial = 1.0;
  for (int j = 2; j <= deriv_order; ++j) factorial *= j;
  const double sign = (deriv_order % 2 == 0) ? 1.0 : -1.0;
  const double pm = std::pow(theta - c, -(deriv_order + 1));
  const double pp = std::pow(theta + c, -(deriv_order + 1));
  return c * 0.5 * c * sign * factorial * (pm - pp);
}

}  // namespace

void ProtocolSpec::validate() const {
  if (!(s > 0.0)) throw config_error("protocol.s must be > 0");
  if (kind == ProtocolKind::FourierN && fourier_order < 1)
    throw config_error("protocol.order must be >= 1 for the fourier protocol");
  if (f_max < 0.0) throw config_error("protocol.f_max must be >= 0");
}

std::string ProtocolSpec::label() const {
  switch (kind) {
    case ProtocolKind::LinearRamp: return "linear";
    case ProtocolKind::Counterdiabatic: return "cd";
    case ProtocolKind::UnitaryEquivalent: return "ue";
    case ProtocolKind::FourierN: return "fourier" + std::to_string(fourier_order);
  }
  return "unknown";
}

DriveWaveform build_linear(const ProtocolSpec& spec, const OscillatorParams& params) {
  spec.validate();
  params.validate();
  const double t_f = spec.s * two_pi / params.omega_nominal;
  return DriveWaveform(t_f, linear_profile(resolve_f_max(spec, params), spec.direction, t_f),
                       AnalyticSignal::zero());
}

DriveWaveform build_cd(const ProtocolSpec& spec, const OscillatorParams& params) {
  spec.validate();
  params.validate();
  const double t_f = spec.s * two_pi / params.omega_nominal;
  const double omega = params.omega_nominal;
  AnalyticSignal force = linear_profile(resolve_f_max(spec, params), spec.direction, t_f);
  // h = −ḟ/(mω²); constant for a linear ramp, |h| = h_max/(2πs)
  const double f_dot = force.derivative()(0.0);
  const double h_val = -f_dot / (params.mass_scale * omega * omega);
  AnalyticSignal momentum =
      h_val == 0.0 ? AnalyticSignal::zero() : AnalyticSignal::constant(h_val);
  return DriveWaveform(t_f, std::move(force), std::move(momentum));
}

DriveWaveform build_ue(const ProtocolSpec& spec, const OscillatorParams& params) {
  spec.validate();
  params.validate();
  const double t_f = spec.s * two_pi / params.omega_nominal;
  const double omega = params.omega_nominal;
  AnalyticSignal transport = quintic_profile(resolve_f_max(spec, params), spec.direction, t_f);
  AnalyticSignal aux = transport.derivative().derivative() * (1.0 / (omega * omega));
  AnalyticSignal force = transport + aux;
  return DriveWaveform(t_f, std::move(force), AnalyticSignal::zero(), std::move(aux));
}

DriveWaveform build_fourier(const ProtocolSpec& spec, const OscillatorParams& params) {
  spec.validate();
  params.validate();
  if (spec.kind != ProtocolKind::FourierN)
    throw config_error("build_fourier: protocol.kind must be fourier");
  const int order = spec.fourier_order;
  const int n_modes = order + 1;
  const double t_f = spec.s * two_pi / params.omega_nominal;
  const double f_max = resolve_f_max(spec, params);
  const double theta_star = params.omega_nominal * t_f;  // = 2πs

  // A sine mode whose frequency coincides with the design point makes the
  // factored design system meaningless (0·∞ in the spectral weight).
  for (int n = 1; n <= n_modes; ++n) {
    if (std::abs(theta_star - two_pi * n) < 1e-9)
      throw numerical_error("fourier design: mode n=" + std::to_string(n) +
                            " is resonant with the design frequency (s=" +
                            std::to_string(spec.s) + " integer); constraint set is degenerate");
  }

  Eigen::MatrixXd design(n_modes, n_modes);
  Eigen::VectorXd rhs(n_modes);
  // endpoint slope condition: 1 + Σ 2πn a_n = 0
  for (int j = 0; j < n_modes; ++j) design(0, j) = two_pi * static_cast<double>(j + 1);
  rhs(0) = -1.0;
  // order-N spectral zero: W(θ*) = 0 and N−1 θ-derivatives of W vanish
  for (int k = 0; k < order; ++k) {
    for (int j = 0; j < n_modes; ++j) design(k + 1, j) = mode_weight(j + 1, theta_star, k);
    rhs(k + 1) = (k == 0) ? -1.0 : 0.0;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(design);
  lu.setThreshold(1e-12);
  if (lu.rank() < n_modes)
    throw numerical_error("fourier design: constraint system rank " +
                          std::to_string(lu.rank()) + " of " + std::to_string(n_modes) +
                          "; the spectral-zero rows at the design frequency are degenerate");
  Eigen::VectorXd a = lu.solve(rhs);

  const double residual = (design * a - rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw numerical_error("fourier design: constraint residual " + std::to_string(residual) +
                          " exceeds 1e-10");

  std::vector<double> sines(a.data(), a.data() + n_modes);
  if (spec.direction == Direction::Forward) {
    for (double& c : sines) c *= f_max;
    return DriveWaveform(t_f, AnalyticSignal({0.0, f_max}, sines, {}, t_f),
                         AnalyticSignal::zero());
  }
  for (double& c : sines) c *= -f_max;
  return DriveWaveform(t_f, AnalyticSignal({f_max, -f_max}, sines, {}, t_f),
                       AnalyticSignal::zero());
}

DriveWaveform build_waveform(const ProtocolSpec& spec, const OscillatorParams& params) {
  switch (spec.kind) {
    case ProtocolKind::LinearRamp: return build_linear(spec, params);
    case ProtocolKind::Counterdiabatic: return build_cd(spec, params);
    case ProtocolKind::UnitaryEquivalent: return build_ue(spec, params);
    case ProtocolKind::FourierN: return build_fourier(spec, params);
  }
  throw config_error("unknown protocol kind");
}

AmplitudeAudit amplitude_audit(const DriveWaveform& w, const OscillatorParams& params) {
  params.validate();
  if (!(w.duration() > 0.0)) throw std::invalid_argument("amplitude_audit: empty waveform");
  constexpr int kSamples = 4096;
  AmplitudeAudit audit;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = w.duration() * static_cast<double>(i) / kSamples;
    audit.peak_force = std::max(audit.peak_force, std::abs(w.f(t)));
    audit.peak_aux_force = std::max(audit.peak_aux_force, std::abs(w.f_aux(t)));
    audit.peak_momentum = std::max(audit.peak_momentum, std::abs(w.h(t)));
  }
  const double slack = 1.0 + 1e-9;
  audit.exceeds_budget = audit.peak_force > params.f_max() * slack ||
                         audit.peak_momentum > params.h_max() * slack;
  return audit;
}

}  // namespace sta
