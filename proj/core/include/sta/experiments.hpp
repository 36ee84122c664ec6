#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sta/dynamics.hpp"
#include "sta/model.hpp"
#include "sta/protocols.hpp"

namespace sta {

enum class Engine { Auto, Oracle, Fock, Lindblad };

struct RunOptions {
  Engine engine = Engine::Auto;
  ToleranceSpec tolerance = ToleranceSpec::closed();
  int fock_dim = 0;  ///< 0 = size from an oracle pre-run (Poisson-tail rule)
};

struct EchoResult {
  ProtocolSpec protocol;
  double s = 0.0;
  double final_n = 0.0;
  std::vector<double> final_distribution;
};

/// Quench echo: adiabatic forward linear ramp (one period, at the nominal
/// frequency) followed by the protocol under test run backward at the
/// simulation frequency. Returns lab-frame phonon statistics at f = 0.
EchoResult run_echo(const ProtocolSpec& protocol, const OscillatorParams& params,
                    const NoiseModel& noise = {}, const RunOptions& options = {});

struct TracePoint {
  double t = 0.0;
  double n_inst = 0.0;
  double n_lab = 0.0;
};

struct TraceOptions {
  Engine engine = Engine::Auto;
  ToleranceSpec tolerance = ToleranceSpec::closed();
  int fock_dim = 0;
  /// Replay the measurement procedure — stop the waveform and return to the
  /// lab frame by a fast counterdiabatic ramp (s = 0.15) at the nominal
  /// frequency — instead of applying the frame transform directly.
  bool faithful = false;
};

/// Excitation along the protocol, reported in the instantaneous frame of the
/// current force-channel value and in the lab frame. The protocol starts
/// from the displaced ground state matching its initial force value.
std::vector<TracePoint> run_instantaneous_trace(const ProtocolSpec& protocol,
                                                const OscillatorParams& params,
                                                std::span<const double> stop_times,
                                                const TraceOptions& options = {});

/// What the sweep measures per grid point:
///  - Echo: the full quench-echo experiment (forward leg at the nominal
///    frequency, handover mismatch included) — the measured robustness curve.
///  - Transport: the protocol alone, started in the displaced ground state
///    of the drifted oscillator — the waveform's intrinsic spectral
///    response, used for flatness-exponent fits.
enum class SweepMode { Echo, Transport };

struct SweepResult {
  SweepMode mode = SweepMode::Echo;
  double s = 0.0;
  std::vector<ProtocolSpec> protocols;
  std::vector<double> omega_ratios;
  /// final_n[p][i] for protocols[p] at omega_ratios[i]; NaN when that point
  /// failed (see errors).
  std::vector<std::vector<double>> final_n;
  /// error annotation per point, empty string on success
  std::vector<std::vector<std::string>> errors;

  double value(std::size_t protocol_index, std::size_t ratio_index) const;
};

struct SweepOptions {
  Engine engine = Engine::Auto;
  ToleranceSpec tolerance = ToleranceSpec::closed();
  int fock_dim = 0;
  SweepMode mode = SweepMode::Echo;
  int threads = 0;  ///< 0 = hardware concurrency
};

/// Echo (or transport) final excitation over a grid of ω'/ω for several
/// protocols at a common shortcut ratio. Grid points are independent jobs;
/// failures annotate their point and the sweep continues.
SweepResult run_robustness_sweep(std::span<const ProtocolSpec> protocols, double s,
                                 std::span<const double> grid, const OscillatorParams& params,
                                 const NoiseModel& noise = {}, const SweepOptions& options = {});

/// Fig-3b style default grid: ω'/ω ∈ {0.90, 0.92, …, 1.10}.
std::vector<double> default_sweep_grid();
/// Log-spaced refinement |ω'/ω − 1| ∈ [delta_min, delta_max], both sides,
/// plus the design point itself.
std::vector<double> refined_sweep_grid(double delta_min = 1e-3, double delta_max = 1e-2,
                                       int points_per_side = 10);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

/// Ordinary least squares y = slope·x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct FlatnessWindow {
  double delta_min = 1e-3;  ///< lower edge of |ω'−ω|/ω
  double delta_max = 1e-2;
  double floor = 1e-24;     ///< excitations at or below this are floor-limited
};

/// Log-log slope of final excitation vs |ω'−ω| near the design point. For a
/// FourierN waveform the expected slope is 2N (the excitation is the squared
/// magnitude of a spectral amplitude with an order-N zero).
/// Throws numerical_error when fewer than 5 usable points remain in the
/// window (floor-limited or failed).
LineFit fit_flatness_exponent(const SweepResult& sweep, std::size_t protocol_index,
                              const FlatnessWindow& window = {});

struct AmplitudeScalingRow {
  double s = 0.0;
  double peak_force = 0.0;
  double peak_aux_force = 0.0;
  double peak_momentum = 0.0;
};

struct AmplitudeScalingResult {
  ProtocolKind kind;
  std::vector<AmplitudeScalingRow> rows;
  /// log-log slope of the kind's characteristic channel vs s:
  /// momentum for CD (−1), auxiliary force for UE (−2), force otherwise (0).
  LineFit exponent;
};

AmplitudeScalingResult run_amplitude_scaling(ProtocolKind kind, std::span<const double> s_grid,
                                             const OscillatorParams& params);

/// Time series for trajectory export: α (oracle or ⟨a⟩), lab- and
/// instantaneous-frame excitation, and final phonon statistics.
struct RunRecord {
  std::vector<double> times;
  std::vector<std::complex<double>> alpha;
  std::vector<double> n_lab;
  std::vector<double> n_inst;
  PhononStats final_stats;
};

/// Record of a single protocol leg started from its matching displaced
/// ground state, sampled at n_samples uniform times.
RunRecord run_protocol_record(const ProtocolSpec& protocol, const OscillatorParams& params,
                              int n_samples, const RunOptions& options = {});

struct ValidationItem {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured defect / residual
  double threshold = 0.0;  ///< what it was checked against
};

/// Fast engine-level invariant suite behind the `validate` subcommand.
std::vector<ValidationItem> run_validation_suite(const OscillatorParams& params);

}  // namespace sta
