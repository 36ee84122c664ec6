#pragma once

#include <complex>
#include <numbers>
#include <optional>

#include "sta/errors.hpp"

/// Dimensionless model of a dragged quantum harmonic oscillator.
///
/// The engine works in the static frame with the Hamiltonian (hbar = 1)
///
///     H(t) = omega' a†a + f(t) x̂ + h(t) p̂,
///
/// where x̂ = x0 (a + a†), p̂ = i p0 (a† − a), x0 = sqrt(1/(2 m ω)),
/// p0 = 1/(2 x0), ω is the nominal (design) frequency and omega' the
/// frequency actually used during propagation. The quadrature scales x0, p0
/// are set by the nominal frequency and do not change when omega' drifts;
/// frequency drift only rescales the a†a term.
///
/// An interaction-picture quadrature drive
///     f(t) x0 (a e^{−i(ωt+φ)} + a† e^{i(ωt+φ)})
/// maps onto this static frame as: φ = 0 is the force channel f(t) x̂, and
/// φ = −π/2 is the momentum channel with h(t) = −f(t)/(mω). A drive budget
/// capped at f_max on the force channel therefore supports momentum-channel
/// amplitudes up to h_max = f_max/(mω). Global phase terms are dropped
/// throughout; no observable depends on them.
///
/// Internal unit convention: ω_nominal = 2π, so one trap period T0 = 1 and
/// times are measured in periods. Physical units (kHz, µs) enter only
/// through the optional PhysicalCalibration record and the IO layer.
namespace sta {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Dimensional backbone of a run. Immutable value; validate() after edits.
struct OscillatorParams {
  /// Design frequency ω (rad per time unit). Default: one period per time unit.
  double omega_nominal = two_pi;
  /// Frequency ω' used during propagation; robustness studies set ω' ≠ ω.
  double omega_sim = two_pi;
  /// Drive strength cap: max of f(t)·x0 in units of ω. The transport
  /// displacement reaches |α| = g_max.
  double g_max = 2.0;
  /// Effective mass m. Enters only via x0 and p0; the default makes
  /// m·ω_nominal = 1 so that x0 = p0 = 1/√2.
  double mass_scale = 1.0 / two_pi;

  /// Throws config_error if any scale is non-positive.
  void validate() const;

  double x0() const;     ///< sqrt(1/(2 m ω)), ground-state position width
  double p0() const;     ///< 1/(2 x0); x0·p0 = 1/2 exactly
  double f_max() const;  ///< force-channel cap, g_max·ω/x0
  double h_max() const;  ///< momentum-channel cap, f_max/(m·ω)

  /// Copy with a different simulation frequency (waveform design unchanged).
  OscillatorParams with_omega_sim(double omega) const;
  /// Copy with omega_sim = ratio · omega_nominal.
  OscillatorParams with_omega_ratio(double ratio) const;
};

/// Exact state descriptor of the forced oscillator: a coherent state with
/// complex phase-space displacement alpha (global phase dropped).
struct CoherentAmplitude {
  std::complex<double> alpha{0.0, 0.0};

  /// Mean phonon number |alpha|² of the coherent state.
  double phonon_number() const { return std::norm(alpha); }
};

/// Coefficient of a† when f x̂ + h p̂ is written as κ a† + κ* a:
/// κ = f·x0 + i·h·p0. The momentum channel is the imaginary part.
std::complex<double> drive_coupling(double f_val, double h_val,
                                    const OscillatorParams& params);

/// Coherent displacement of the instantaneous ground state of
/// H0 = ω a†a + f x̂: α_eq = −f·x0/ω, purely real. Linear in f.
CoherentAmplitude equilibrium_displacement(double f_val,
                                           const OscillatorParams& params);

/// Mean phonon number seen in the frame co-moving with the displaced
/// potential minimum (position-shift transformation): |α − α_eq(f)|².
/// Zero iff the state is the instantaneous displaced ground state.
double instantaneous_excitation(const CoherentAmplitude& state, double f_val,
                                const OscillatorParams& params);

/// Optional record tying the dimensionless convention to lab units.
/// Not used by the engine; kept so manifests can echo the calibration.
struct PhysicalCalibration {
  double effective_trap_khz = 20.0;  ///< ω/2π in kHz
  double period_us = 50.0;           ///< T0 = 2π/ω in µs
  std::optional<double> real_trap_mhz;  ///< physical mode frequency ν/2π
  std::optional<double> rabi_max_khz;   ///< drive strength behind f_max

  /// Throws config_error unless effective_trap_khz · period_us = 1000
  /// within 0.1% (i.e. the pair describes the same frequency).
  void validate() const;
};

}  // namespace sta
