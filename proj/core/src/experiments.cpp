#include "sta/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace sta {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  out.back() = hi;
  return out;
}

Engine resolve_engine(Engine requested, const NoiseModel& noise) {
  if (requested != Engine::Auto) return requested;
  return noise.is_closed() ? Engine::Fock : Engine::Lindblad;
}

ProtocolSpec forward_ramp_spec() {
  return {ProtocolKind::LinearRamp, 1.0, Direction::Forward, 1, 0.0};
}

// Oracle pre-run over one or two legs; returns the trajectory peak |α| used
// to size the truncated basis.
double oracle_alpha_peak(const DriveWaveform& w, const OscillatorParams& params,
                         CoherentAmplitude alpha0) {
  const auto times = linspace(w.duration() / 256.0, w.duration(), 256);
  ToleranceSpec loose;
  loose.quadrature_tol = 1e-9;  // sizing only
  return std::max(std::abs(alpha0.alpha),
                  propagate_coherent(w, params, alpha0, times, loose).max_abs_alpha());
}

int sized_fock_dim(double alpha_peak, const NoiseModel& noise, double total_duration,
                   int override_dim) {
  if (override_dim > 0) return override_dim;
  double margin = 0.0;
  if (!noise.is_closed()) {
    const double n_extra =
        noise.heating_rate * (noise.thermal_nbar + 1.0) * total_duration + noise.thermal_nbar;
    margin = std::sqrt(n_extra);
  }
  return recommended_fock_dim(alpha_peak + margin);
}

// Measurement return leg: linear ramp of the force channel from f_start to
// zero over 0.15·T0 with the matching counterdiabatic momentum channel, run
// at the nominal frequency. Maps the deviation from the displaced ground
// state isometrically into lab-frame phonons.
DriveWaveform make_cd_return(double f_start, const OscillatorParams& params) {
  const double t_ret = 0.15 * two_pi / params.omega_nominal;
  AnalyticSignal force = AnalyticSignal::polynomial({f_start, -f_start}, t_ret);
  const double f_dot = -f_start / t_ret;
  const double h_val = -f_dot / (params.mass_scale * params.omega_nominal * params.omega_nominal);
  AnalyticSignal momentum =
      h_val == 0.0 ? AnalyticSignal::zero() : AnalyticSignal::constant(h_val);
  return DriveWaveform(t_ret, std::move(force), std::move(momentum));
}

std::vector<double> monitor_times(double duration, int n = 33) {
  return linspace(duration / n, duration, n);
}

// Runs an index-parallel loop with a deterministic result layout.
void parallel_for_index(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(count));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

EchoResult run_echo(const ProtocolSpec& protocol, const OscillatorParams& params,
                    const NoiseModel& noise, const RunOptions& options) {
  protocol.validate();
  params.validate();
  noise.validate();

  ProtocolSpec back = protocol;
  back.direction = Direction::Backward;
  const OscillatorParams p_fwd = params.with_omega_sim(params.omega_nominal);
  const DriveWaveform w_fwd = build_linear(forward_ramp_spec(), p_fwd);
  const DriveWaveform w_back = build_waveform(back, params);

  const Engine engine = resolve_engine(options.engine, noise);
  if (engine == Engine::Oracle && !noise.is_closed())
    throw config_error("echo: the coherent oracle cannot represent noise channels");

  EchoResult result;
  result.protocol = back;
  result.s = back.s;

  // The oracle runs first in every engine: it is exact, cheap, and sizes the
  // truncated basis for the excursions actually reached.
  const auto fwd_end = std::vector<double>{w_fwd.duration()};
  const auto back_end = std::vector<double>{w_back.duration()};
  const double peak_fwd = oracle_alpha_peak(w_fwd, p_fwd, {});
  const CoherentAmplitude alpha_mid =
      propagate_coherent(w_fwd, p_fwd, {}, fwd_end, options.tolerance).final();
  const double peak_back = oracle_alpha_peak(w_back, params, alpha_mid);
  const double alpha_peak = std::max(peak_fwd, peak_back);
  const double total_duration = w_fwd.duration() + w_back.duration();
  const int dim = sized_fock_dim(alpha_peak, noise, total_duration, options.fock_dim);

  switch (engine) {
    case Engine::Oracle: {
      const CoherentAmplitude alpha_final =
          propagate_coherent(w_back, params, alpha_mid, back_end, options.tolerance).final();
      const auto stats = phonon_stats(alpha_final, dim);
      result.final_n = alpha_final.phonon_number();
      result.final_distribution = stats.distribution;
      break;
    }
    case Engine::Fock: {
      const FockState psi0 = FockState::vacuum(dim);
      const auto leg1 = propagate_fock(w_fwd, p_fwd, psi0, monitor_times(w_fwd.duration()),
                                       options.tolerance);
      const auto leg2 = propagate_fock(w_back, params, leg1.final(),
                                       monitor_times(w_back.duration()), options.tolerance);
      const auto stats = phonon_stats(leg2.final());
      result.final_n = stats.mean;
      result.final_distribution = stats.distribution;
      break;
    }
    case Engine::Lindblad: {
      const DensityState rho0 = DensityState::from_pure(FockState::vacuum(dim));
      const auto leg1 = propagate_lindblad(w_fwd, p_fwd, rho0, noise,
                                           monitor_times(w_fwd.duration()), options.tolerance);
      const auto leg2 = propagate_lindblad(w_back, params, leg1.final(), noise,
                                           monitor_times(w_back.duration()), options.tolerance);
      const auto stats = phonon_stats(leg2.final());
      result.final_n = stats.mean;
      result.final_distribution = stats.distribution;
      break;
    }
    case Engine::Auto: break;  // resolved above
  }
  return result;
}

std::vector<TracePoint> run_instantaneous_trace(const ProtocolSpec& protocol,
                                                const OscillatorParams& params,
                                                std::span<const double> stop_times,
                                                const TraceOptions& options) {
  protocol.validate();
  params.validate();
  const DriveWaveform w = build_waveform(protocol, params);
  if (stop_times.empty()) throw config_error("trace: stop_times must be non-empty");
  for (double t : stop_times)
    if (t < 0.0 || t > w.duration() * (1.0 + 1e-12))
      throw config_error("trace: stop time " + std::to_string(t) + " outside [0, " +
                         std::to_string(w.duration()) + "]");

  const CoherentAmplitude alpha0 = equilibrium_displacement(w.f(0.0), params);
  const Engine engine = resolve_engine(options.engine, {});
  const OscillatorParams p_nom = params.with_omega_sim(params.omega_nominal);

  std::vector<TracePoint> points(stop_times.size());

  if (engine == Engine::Oracle || engine == Engine::Auto) {
    // Auto is never left unresolved; keep the oracle branch first for clarity.
  }
  if (engine == Engine::Oracle) {
    const auto traj = propagate_coherent(w, params, alpha0, stop_times, options.tolerance);
    for (std::size_t i = 0; i < stop_times.size(); ++i) {
      const CoherentAmplitude a{traj.alpha[i]};
      points[i].t = stop_times[i];
      points[i].n_lab = a.phonon_number();
      if (options.faithful) {
        const DriveWaveform ret = make_cd_return(w.f(stop_times[i]), params);
        const std::vector<double> end{ret.duration()};
        points[i].n_inst =
            propagate_coherent(ret, p_nom, a, end, options.tolerance).final().phonon_number();
      } else {
        points[i].n_inst = instantaneous_excitation(a, w.f(stop_times[i]), params);
      }
    }
    return points;
  }

  const double alpha_peak = oracle_alpha_peak(w, params, alpha0);
  const int dim = sized_fock_dim(alpha_peak, {}, w.duration(), options.fock_dim);
  const FockState psi0 = FockState::coherent(alpha0.alpha, dim);
  const auto traj = propagate_fock(w, params, psi0, stop_times, options.tolerance);
  for (std::size_t i = 0; i < stop_times.size(); ++i) {
    points[i].t = stop_times[i];
    points[i].n_lab = traj.n_lab[i];
    if (options.faithful) {
      const DriveWaveform ret = make_cd_return(w.f(stop_times[i]), params);
      const std::vector<double> end{ret.duration()};
      points[i].n_inst =
          propagate_fock(ret, p_nom, traj.states[i], end, options.tolerance).final().mean_phonon();
    } else {
      points[i].n_inst = instantaneous_excitation(traj.states[i], w.f(stop_times[i]), params);
    }
  }
  return points;
}

double SweepResult::value(std::size_t protocol_index, std::size_t ratio_index) const {
  const double v = final_n.at(protocol_index).at(ratio_index);
  if (std::isnan(v))
    throw numerical_error("sweep point failed: " + errors.at(protocol_index).at(ratio_index));
  return v;
}

SweepResult run_robustness_sweep(std::span<const ProtocolSpec> protocols, double s,
                                 std::span<const double> grid, const OscillatorParams& params,
                                 const NoiseModel& noise, const SweepOptions& options) {
  params.validate();
  noise.validate();
  if (protocols.empty()) throw config_error("sweep: protocol list must be non-empty");
  if (grid.empty()) throw config_error("sweep: grid must be non-empty");

  SweepResult result;
  result.mode = options.mode;
  result.s = s;
  result.omega_ratios.assign(grid.begin(), grid.end());
  for (const auto& p : protocols) {
    ProtocolSpec spec = p;
    spec.s = s;
    spec.direction = Direction::Backward;
    spec.validate();
    result.protocols.push_back(spec);
  }
  const std::size_t n_p = result.protocols.size();
  const std::size_t n_r = result.omega_ratios.size();
  result.final_n.assign(n_p, std::vector<double>(n_r, std::numeric_limits<double>::quiet_NaN()));
  result.errors.assign(n_p, std::vector<std::string>(n_r));

  auto run_point = [&](std::size_t p_idx, std::size_t r_idx) -> double {
    const ProtocolSpec& spec = result.protocols[p_idx];
    const double ratio = result.omega_ratios[r_idx];
    const OscillatorParams p_run = params.with_omega_ratio(ratio);
    if (options.mode == SweepMode::Echo) {
      RunOptions ro;
      ro.engine = options.engine;
      ro.tolerance = options.tolerance;
      ro.fock_dim = options.fock_dim;
      return run_echo(spec, p_run, noise, ro).final_n;
    }
    // Transport response: start in the displaced ground state of the
    // oscillator as it actually runs, so only the waveform's spectral
    // property contributes to the final excitation.
    const DriveWaveform w = build_waveform(spec, p_run);
    const CoherentAmplitude alpha0{
        std::complex<double>(-w.f(0.0) * p_run.x0() / p_run.omega_sim, 0.0)};
    const CoherentAmplitude alpha_eq_end{
        std::complex<double>(-w.f(w.duration()) * p_run.x0() / p_run.omega_sim, 0.0)};
    const Engine engine = resolve_engine(options.engine, noise);
    const std::vector<double> end{w.duration()};
    if (engine == Engine::Oracle || engine == Engine::Fock) {
      if (!noise.is_closed())
        throw config_error("sweep: transport mode with noise requires the lindblad engine");
    }
    if (engine == Engine::Oracle) {
      const auto a = propagate_coherent(w, p_run, alpha0, end, options.tolerance).final();
      return std::norm(a.alpha - alpha_eq_end.alpha);
    }
    const double alpha_peak = oracle_alpha_peak(w, p_run, alpha0);
    const int dim = sized_fock_dim(alpha_peak, noise, w.duration(), options.fock_dim);
    if (engine == Engine::Fock) {
      const auto traj = propagate_fock(w, p_run, FockState::coherent(alpha0.alpha, dim), end,
                                       options.tolerance);
      const auto a = traj.final().expectation_a();
      return traj.final().mean_phonon() - std::norm(a) + std::norm(a - alpha_eq_end.alpha);
    }
    const auto traj = propagate_lindblad(
        w, p_run, DensityState::from_pure(FockState::coherent(alpha0.alpha, dim)), noise, end,
        options.tolerance);
    const auto a = traj.final().expectation_a();
    return traj.final().mean_phonon() - std::norm(a) + std::norm(a - alpha_eq_end.alpha);
  };

  parallel_for_index(n_p * n_r, options.threads, [&](std::size_t job) {
    const std::size_t p_idx = job / n_r;
    const std::size_t r_idx = job % n_r;
    try {
      result.final_n[p_idx][r_idx] = run_point(p_idx, r_idx);
    } catch (const std::exception& e) {
      result.errors[p_idx][r_idx] = e.what();
    }
  });
  return result;
}

std::vector<double> default_sweep_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.90 + 0.02 * i);
  return grid;
}

std::vector<double> refined_sweep_grid(double delta_min, double delta_max, int points_per_side) {
  if (!(delta_min > 0.0) || !(delta_max > delta_min) || points_per_side < 2)
    throw config_error("refined_sweep_grid: need 0 < delta_min < delta_max, >= 2 points");
  std::vector<double> grid{1.0};
  const double log_lo = std::log(delta_min);
  const double log_hi = std::log(delta_max);
  for (int i = 0; i < points_per_side; ++i) {
    const double d = std::exp(log_lo + (log_hi - log_lo) * i / (points_per_side - 1));
    grid.push_back(1.0 - d);
    grid.push_back(1.0 + d);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points and matching lengths");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(x.size());
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  return fit;
}

LineFit fit_flatness_exponent(const SweepResult& sweep, std::size_t protocol_index,
                              const FlatnessWindow& window) {
  if (protocol_index >= sweep.protocols.size())
    throw std::invalid_argument("fit_flatness_exponent: protocol index out of range");
  std::vector<double> log_delta, log_n;
  std::size_t floor_limited = 0;
  for (std::size_t i = 0; i < sweep.omega_ratios.size(); ++i) {
    const double delta = std::abs(sweep.omega_ratios[i] - 1.0);
    if (delta < window.delta_min || delta > window.delta_max) continue;
    const double v = sweep.final_n[protocol_index][i];
    if (std::isnan(v)) continue;
    if (v <= window.floor) {
      ++floor_limited;
      continue;
    }
    log_delta.push_back(std::log(delta));
    log_n.push_back(std::log(v));
  }
  if (log_delta.size() < 5)
    throw numerical_error("flatness fit: only " + std::to_string(log_delta.size()) +
                          " usable points in the window (" + std::to_string(floor_limited) +
                          " floor-limited); widen the window or refine the grid");
  return fit_line(log_delta, log_n);
}

AmplitudeScalingResult run_amplitudescaling_impl(ProtocolKind kind,
                                                 std::span<const double> s_grid,
                                                 const OscillatorParams& params) {
  AmplitudeScalingResult result;
  result.kind = kind;
  std::vector<double> log_s, log_peak;
  for (double s : s_grid) {
    if (!(s > 0.0)) throw config_error("scaling: s_grid entries must be > 0");
    ProtocolSpec spec{kind, s, Direction::Backward, 3, 0.0};
    const auto audit = amplitude_audit(build_waveform(spec, params), params);
    AmplitudeScalingRow row;
    row.s = s;
    row.peak_force = audit.peak_force;
    row.peak_aux_force = audit.peak_aux_force;
    row.peak_momentum = audit.peak_momentum;
    result.rows.push_back(row);
    double channel = 0.0;
    switch (kind) {
      case ProtocolKind::Counterdiabatic: channel = audit.peak_momentum; break;
      case ProtocolKind::UnitaryEquivalent: channel = audit.peak_aux_force; break;
      default: channel = audit.peak_force; break;
    }
    log_s.push_back(std::log(s));
    log_peak.push_back(std::log(channel));
  }
  result.exponent = fit_line(log_s, log_peak);
  return result;
}

AmplitudeScalingResult run_amplitude_scaling(ProtocolKind kind, std::span<const double> s_grid,
                                             const OscillatorParams& params) {
  params.validate();
  if (s_grid.size() < 2) throw config_error("scaling: s_grid needs at least 2 values");
  return run_amplitudescaling_impl(kind, s_grid, params);
}

RunRecord run_protocol_record(const ProtocolSpec& protocol, const OscillatorParams& params,
                              int n_samples, const RunOptions& options) {
  protocol.validate();
  params.validate();
  if (n_samples < 2) throw config_error("record: need at least 2 samples");
  const DriveWaveform w = build_waveform(protocol, params);
  const CoherentAmplitude alpha0 = equilibrium_displacement(w.f(0.0), params);
  const auto times = linspace(0.0, w.duration(), n_samples);
  const Engine engine = options.engine == Engine::Auto ? Engine::Fock : options.engine;

  RunRecord record;
  record.times = times;
  if (engine == Engine::Oracle) {
    const auto traj = propagate_coherent(w, params, alpha0, times, options.tolerance);
    record.alpha = traj.alpha;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const CoherentAmplitude a{traj.alpha[i]};
      record.n_lab.push_back(a.phonon_number());
      record.n_inst.push_back(instantaneous_excitation(a, w.f(times[i]), params));
    }
    record.final_stats = phonon_stats(traj.final(), recommended_fock_dim(traj.max_abs_alpha()));
    return record;
  }
  if (engine == Engine::Lindblad)
    throw config_error("record: trajectory records support oracle and fock engines");
  const double alpha_peak = oracle_alpha_peak(w, params, alpha0);
  const int dim = sized_fock_dim(alpha_peak, {}, w.duration(), options.fock_dim);
  const auto traj = propagate_fock(w, params, FockState::coherent(alpha0.alpha, dim), times,
                                   options.tolerance);
  for (std::size_t i = 0; i < times.size(); ++i) {
    record.alpha.push_back(traj.states[i].expectation_a());
    record.n_lab.push_back(traj.n_lab[i]);
    record.n_inst.push_back(instantaneous_excitation(traj.states[i], w.f(times[i]), params));
  }
  record.final_stats = phonon_stats(traj.final());
  return record;
}

std::vector<ValidationItem> run_validation_suite(const OscillatorParams& params) {
  params.validate();
  std::vector<ValidationItem> items;
  auto check = [&](const std::string& name, double value, double threshold) {
    items.push_back({name, value <= threshold, value, threshold});
  };

  check("quadrature scales: |x0*p0 - 1/2|", std::abs(params.x0() * params.p0() - 0.5), 0.0);

  const OscillatorParams p_nom = params.with_omega_sim(params.omega_nominal);
  const double t0 = two_pi / params.omega_nominal;

  {  // boundary conditions of every builder at s = 0.7
    double worst = 0.0;
    for (ProtocolKind kind : {ProtocolKind::LinearRamp, ProtocolKind::Counterdiabatic,
                              ProtocolKind::UnitaryEquivalent, ProtocolKind::FourierN}) {
      ProtocolSpec spec{kind, kind == ProtocolKind::FourierN ? 1.5 : 0.7, Direction::Backward, 2,
                        0.0};
      const DriveWaveform w = build_waveform(spec, p_nom);
      worst = std::max(worst, std::abs(w.f(0.0) - p_nom.f_max()));
      worst = std::max(worst, std::abs(w.f(w.duration())));
      if (kind != ProtocolKind::LinearRamp && kind != ProtocolKind::Counterdiabatic) {
        worst = std::max(worst, std::abs(w.f_dot(0.0)));
        worst = std::max(worst, std::abs(w.f_dot(w.duration())));
      }
    }
    check("builder boundary conditions", worst, 1e-12);
  }

  {  // counterdiabatic adiabatic following, oracle route
    ProtocolSpec cd{ProtocolKind::Counterdiabatic, 0.4, Direction::Backward, 1, 0.0};
    const DriveWaveform w = build_cd(cd, p_nom);
    const auto stops = linspace(w.duration() / 64.0, w.duration(), 64);
    const auto traj =
        propagate_coherent(w, p_nom, equilibrium_displacement(w.f(0.0), p_nom), stops);
    double sup = 0.0;
    for (std::size_t i = 0; i < stops.size(); ++i)
      sup = std::max(sup, instantaneous_excitation({traj.alpha[i]}, w.f(stops[i]), p_nom));
    check("cd adiabatic following sup n_inst", sup, 1e-10);
  }

  {  // unitarily-equivalent endpoint nullity and nonadiabatic interior
    ProtocolSpec ue{ProtocolKind::UnitaryEquivalent, 0.6, Direction::Backward, 1, 0.0};
    const DriveWaveform w = build_ue(ue, p_nom);
    const auto stops = linspace(w.duration() / 64.0, w.duration(), 64);
    const auto traj =
        propagate_coherent(w, p_nom, equilibrium_displacement(w.f(0.0), p_nom), stops);
    double interior = 0.0;
    for (std::size_t i = 0; i + 1 < stops.size(); ++i)
      interior = std::max(interior, instantaneous_excitation({traj.alpha[i]}, w.f(stops[i]), p_nom));
    check("ue final excitation", traj.final().phonon_number(), 1e-10);
    items.push_back({"ue nonadiabatic interior", interior > 1e-3, interior, 1e-3});
  }

  {  // fourier order-1 design nullity
    ProtocolSpec f1{ProtocolKind::FourierN, 1.5, Direction::Backward, 1, 0.0};
    const DriveWaveform w = build_fourier(f1, p_nom);
    const std::vector<double> end{w.duration()};
    const auto traj =
        propagate_coherent(w, p_nom, equilibrium_displacement(w.f(0.0), p_nom), end);
    check("fourier N=1 design-point excitation", traj.final().phonon_number(), 1e-10);
  }

  {  // full-period linear ramp is exact
    const DriveWaveform w = build_linear(forward_ramp_spec(), p_nom);
    const std::vector<double> end{w.duration()};
    const auto traj = propagate_coherent(w, p_nom, {}, end);
    check("full-period linear ramp residual",
          instantaneous_excitation(traj.final(), w.f(w.duration()), p_nom), 1e-10);
  }

  {  // oracle vs fock route on the cd pair
    ProtocolSpec cd{ProtocolKind::Counterdiabatic, 0.4, Direction::Backward, 1, 0.0};
    const DriveWaveform w = build_cd(cd, p_nom);
    const CoherentAmplitude a0 = equilibrium_displacement(w.f(0.0), p_nom);
    const auto stops = linspace(w.duration() / 8.0, w.duration(), 8);
    const auto oracle = propagate_coherent(w, p_nom, a0, stops);
    const int dim = recommended_fock_dim(oracle.max_abs_alpha());
    const auto fock = propagate_fock(w, p_nom, FockState::coherent(a0.alpha, dim), stops);
    double worst = 0.0;
    for (std::size_t i = 0; i < stops.size(); ++i)
      worst = std::max(worst, std::abs(fock.states[i].expectation_a() - oracle.alpha[i]));
    check("oracle vs fock |<a> - alpha|", worst, 1e-6);
  }

  {  // zero-rate lindblad equals closed dynamics
    ProtocolSpec lin{ProtocolKind::LinearRamp, 0.5, Direction::Backward, 1, 0.0};
    const DriveWaveform w = build_linear(lin, p_nom);
    const CoherentAmplitude a0 = equilibrium_displacement(w.f(0.0), p_nom);
    const std::vector<double> end{w.duration()};
    const int dim = recommended_fock_dim(oracle_alpha_peak(w, p_nom, a0));
    const FockState psi0 = FockState::coherent(a0.alpha, dim);
    const auto fock = propagate_fock(w, p_nom, psi0, end);
    const auto lind = propagate_lindblad(w, p_nom, DensityState::from_pure(psi0), {}, end);
    check("zero-rate lindblad vs fock |<n> diff|",
          std::abs(fock.final().mean_phonon() - lind.final().mean_phonon()), 1e-6);
  }

  {  // frame transform round trip
    const FockState psi = FockState::coherent({0.7, -0.3}, 48);
    const double f_val = 0.4 * p_nom.f_max();
    const FockState there = to_instantaneous_frame(psi, f_val, p_nom);
    const FockState back = to_instantaneous_frame(there, -f_val, p_nom);
    // D(-β)D(β) = 1 up to a global phase; compare populations and <a>
    double defect = std::abs(back.mean_phonon() - psi.mean_phonon());
    defect = std::max(defect, std::abs(back.expectation_a() - psi.expectation_a()));
    check("frame round-trip defect", defect, 1e-9);
  }

  {  // amplitude scaling exponents
    const std::vector<double> s_grid{0.2, 0.3, 0.45, 0.7, 1.0};
    const auto cd = run_amplitude_scaling(ProtocolKind::Counterdiabatic, s_grid, p_nom);
    const auto ue = run_amplitude_scaling(ProtocolKind::UnitaryEquivalent, s_grid, p_nom);
    check("cd momentum-channel exponent |slope+1|", std::abs(cd.exponent.slope + 1.0), 1e-6);
    check("ue auxiliary-force exponent |slope+2|", std::abs(ue.exponent.slope + 2.0), 1e-3);
  }

  return items;
}

}  // namespace sta
