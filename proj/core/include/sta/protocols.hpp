#pragma once

#include <string>

#include "sta/model.hpp"
#include "sta/waveform.hpp"

namespace sta {

enum class ProtocolKind { LinearRamp, Counterdiabatic, UnitaryEquivalent, FourierN };
enum class Direction { Forward, Backward };

/// Fully determines a drive waveform: which transport protocol, how fast
/// (shortcut ratio s, duration = s·T0), which way, and the force cap.
struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::LinearRamp;
  double s = 1.0;                           ///< duration in units of T0 = 2π/ω
  Direction direction = Direction::Backward;
  int fourier_order = 1;                    ///< N ≥ 1, FourierN only
  double f_max = 0.0;                       ///< force-channel cap; 0 = take from params

  void validate() const;
  /// Short label used in CSV output: "linear", "cd", "ue", "fourier<N>".
  std::string label() const;
};

/// Plain ramp between 0 and f_max over s·T0; no momentum channel.
DriveWaveform build_linear(const ProtocolSpec& spec, const OscillatorParams& params);

/// Linear ramp plus the momentum channel h(t) = −ḟ(t)/(m ω²) that cancels
/// diabatic transitions exactly. For the linear ramp h is constant with
/// |h| = h_max/(2πs).
DriveWaveform build_cd(const ProtocolSpec& spec, const OscillatorParams& params);

/// Local-potential equivalent of the counterdiabatic pair: the transport
/// profile is the smoothstep quintic P(σ) = 10σ³ − 15σ⁴ + 6σ⁵ (the unique
/// minimal polynomial with P(0)=0, P(1)=1 and vanishing first and second
/// derivatives at both ends), and the force channel carries the auxiliary
/// term f̈(t)/ω² on top of it. No momentum channel.
DriveWaveform build_ue(const ProtocolSpec& spec, const OscillatorParams& params);

/// Linear ramp plus a minimal sine series, with coefficients solving the
/// linear system that (i) flattens ḟ at both ends and (ii) gives the
/// residual-excitation spectrum an order-N zero at the design frequency.
/// N+1 modes make the system square. Throws numerical_error when the design
/// system is singular (e.g. a sine mode resonant with the design point,
/// which happens at integer s).
DriveWaveform build_fourier(const ProtocolSpec& spec, const OscillatorParams& params);

/// Dispatch on spec.kind.
DriveWaveform build_waveform(const ProtocolSpec& spec, const OscillatorParams& params);

struct AmplitudeAudit {
  double peak_force = 0.0;      ///< max |f(t)| over a dense grid
  double peak_aux_force = 0.0;  ///< max |auxiliary force component|
  double peak_momentum = 0.0;   ///< max |h(t)|
  bool exceeds_budget = false;  ///< peak_force > f_max or peak_momentum > h_max
};

/// Peak control-field demands of a waveform against the laser budget
/// (f_max on the force channel, h_max = f_max/(mω) on the momentum channel).
AmplitudeAudit amplitude_audit(const DriveWaveform& w, const OscillatorParams& params);

}  // namespace sta
