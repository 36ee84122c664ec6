#include "sta/model.hpp"

#include <cmath>

namespace sta {

void OscillatorParams::validate() const {
  if (!(omega_nominal > 0.0)) throw config_error("oscillator.omega_nominal must be > 0");
  if (!(omega_sim > 0.0)) throw config_error("oscillator.omega_sim must be > 0");
  if (!(g_max > 0.0)) throw config_error("oscillator.g_max must be > 0");
  if (!(mass_scale > 0.0)) throw config_error("oscillator.mass_scale must be > 0");
}

double OscillatorParams::x0() const { return std::sqrt(1.0 / (2.0 * mass_scale * omega_nominal)); }

double OscillatorParams::p0() const { return 0.5 / x0(); }

double OscillatorParams::f_max() const { return g_max * omega_nominal / x0(); }

double OscillatorParams::h_max() const { return f_max() / (mass_scale * omega_nominal); }

OscillatorParams OscillatorParams::with_omega_sim(double omega) const {
  OscillatorParams p = *this;
  p.omega_sim = omega;
  return p;
}

OscillatorParams OscillatorParams::with_omega_ratio(double ratio) const {
  return with_omega_sim(ratio * omega_nominal);
}

std::complex<double> drive_coupling(double f_val, double h_val,
                                    const OscillatorParams& params) {
  return {f_val * params.x0(), h_val * params.p0()};
}

CoherentAmplitude equilibrium_displacement(double f_val, const OscillatorParams& params) {
  return {std::complex<double>(-f_val * params.x0() / params.omega_nominal, 0.0)};
}

double instantaneous_excitation(const CoherentAmplitude& state, double f_val,
                                const OscillatorParams& params) {
  return std::norm(state.alpha - equilibrium_displacement(f_val, params).alpha);
}

void PhysicalCalibration::validate() const {
  if (!(effective_trap_khz > 0.0)) throw config_error("calibration.effective_trap_khz must be > 0");
  if (!(period_us > 0.0)) throw config_error("calibration.period_us must be > 0");
  const double product = effective_trap_khz * period_us;  // kHz·µs; 1000 = consistent pair
  if (std::abs(product - 1000.0) > 1.0)
    throw config_error("calibration: effective_trap_khz and period_us disagree (f*T != 1)");
}

}  // namespace sta
