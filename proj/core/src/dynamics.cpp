#include "sta/dynamics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

// boost's Eigen adapter leaves the inf-norm in the complex scalar type;
// error control needs a real norm.
namespace boost::numeric::odeint {
template <>
struct vector_space_norm_inf<Eigen::VectorXcd> {
  typedef double result_type;
  double operator()(const Eigen::VectorXcd& v) const { return v.cwiseAbs().maxCoeff(); }
};
}  // namespace boost::numeric::odeint

namespace sta {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_sample_times(std::span<const double> times, double duration) {
  if (times.empty()) throw std::invalid_argument("sample_times must be non-empty");
  const double slack = 1e-12 * std::max(1.0, duration);
  if (times.front() < -slack || times.back() > duration + slack)
    throw std::invalid_argument("sample_times must lie within [0, duration]");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("sample_times must be strictly increasing");
}

std::vector<double> sqrt_table(int dim) {
  std::vector<double> table(static_cast<std::size_t>(dim) + 1);
  for (int n = 0; n <= dim; ++n) table[n] = std::sqrt(static_cast<double>(n));
  return table;
}

// Drives a controlled dopri5 stepper through the sample times, invoking
// observe(state, index-into-times) at each one. A synthetic t=0 point is
// prepended when the caller's first sample is later than the start.
template <class Rhs, class Observer>
void integrate_sampled(Rhs&& rhs, Eigen::VectorXcd& state, std::span<const double> times,
                       double rel_tol, double abs_tol, Observer&& observe) {
  namespace ode = boost::numeric::odeint;
  using stepper_type =
      ode::runge_kutta_dopri5<Eigen::VectorXcd, double, Eigen::VectorXcd, double,
                              ode::vector_space_algebra>;

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  std::size_t skip = 0;
  if (times.front() > 0.0) {
    grid.push_back(0.0);
    skip = 1;
  }
  grid.insert(grid.end(), times.begin(), times.end());

  const double span = grid.back() - grid.front();
  const double dt0 = span > 0.0 ? span * 1e-4 : 1e-4;
  std::size_t count = 0;
  try {
    ode::integrate_times(ode::make_controlled(abs_tol, rel_tol, stepper_type()), rhs, state,
                         grid.begin(), grid.end(), dt0,
                         [&](const Eigen::VectorXcd& x, double) {
                           if (count >= skip) observe(x, count - skip);
                           ++count;
                         });
  } catch (const std::overflow_error&) {
    throw numerical_error("propagation: step size underflow (too many rejected steps)");
  }
}

double poisson_tail_dim(double alpha_max) {
  return std::ceil(alpha_max * alpha_max + 6.0 * alpha_max + 10.0);
}

}  // namespace

FockState FockState::vacuum(int dim) { return number(0, dim); }

FockState FockState::number(int level, int dim) {
  if (dim < 1 || level < 0 || level >= dim)
    throw std::invalid_argument("FockState::number: need 0 <= level < dim");
  FockState psi{Eigen::VectorXcd::Zero(dim)};
  psi.amplitudes(level) = 1.0;
  return psi;
}

FockState FockState::coherent(std::complex<double> alpha, int dim) {
  if (dim < 1) throw std::invalid_argument("FockState::coherent: dim must be >= 1");
  FockState psi{Eigen::VectorXcd::Zero(dim)};
  std::complex<double> c = std::exp(-0.5 * std::norm(alpha));
  psi.amplitudes(0) = c;
  for (int n = 1; n < dim; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    psi.amplitudes(n) = c;
  }
  return psi;
}

double FockState::mean_phonon() const {
  double sum = 0.0;
  for (int n = 0; n < dim(); ++n) sum += n * std::norm(amplitudes(n));
  return sum;
}

std::complex<double> FockState::expectation_a() const {
  std::complex<double> sum = 0.0;
  for (int n = 1; n < dim(); ++n)
    sum += std::conj(amplitudes(n - 1)) * std::sqrt(static_cast<double>(n)) * amplitudes(n);
  return sum;
}

double FockState::top_population() const { return std::norm(amplitudes(dim() - 1)); }

void FockState::validate() const {
  if (dim() < 1) throw std::invalid_argument("FockState: empty amplitude vector");
  if (std::abs(norm() - 1.0) > 1e-9)
    throw std::invalid_argument("FockState: not normalized (|norm-1| = " +
                                std::to_string(std::abs(norm() - 1.0)) + ")");
}

DensityState DensityState::from_pure(const FockState& psi) {
  return {psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityState::mean_phonon() const {
  double sum = 0.0;
  for (int n = 0; n < dim(); ++n) sum += n * rho(n, n).real();
  return sum;
}

std::complex<double> DensityState::expectation_a() const {
  // tr(ρ a) = Σ_n √(n+1) ρ_{n+1,n}
  std::complex<double> sum = 0.0;
  for (int n = 0; n + 1 < dim(); ++n)
    sum += std::sqrt(static_cast<double>(n + 1)) * rho(n + 1, n);
  return sum;
}

double DensityState::top_population() const { return rho(dim() - 1, dim() - 1).real(); }

double DensityState::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityState::validate() const {
  if (dim() < 1 || rho.rows() != rho.cols())
    throw std::invalid_argument("DensityState: matrix must be square and non-empty");
  if (hermiticity_defect() > 1e-10)
    throw std::invalid_argument("DensityState: not Hermitian");
  if (std::abs(trace_real() - 1.0) > 1e-8)
    throw std::invalid_argument("DensityState: trace differs from 1");
  if (min_eigenvalue() < -1e-8)
    throw std::invalid_argument("DensityState: negative eigenvalue");
}

bool NoiseModel::is_closed() const {
  return heating_rate == 0.0 && dephasing_rate == 0.0;
}

void NoiseModel::validate() const {
  if (heating_rate < 0.0) throw config_error("noise.heating_rate must be >= 0");
  if (thermal_nbar < 0.0) throw config_error("noise.thermal_nbar must be >= 0");
  if (dephasing_rate < 0.0) throw config_error("noise.dephasing_rate must be >= 0");
}

double CoherentTrajectory::max_abs_alpha() const {
  double peak = 0.0;
  for (const auto& a : alpha) peak = std::max(peak, std::abs(a));
  return peak;
}

CoherentTrajectory propagate_coherent(const DriveWaveform& w, const OscillatorParams& params,
                                      CoherentAmplitude alpha0,
                                      std::span<const double> sample_times,
                                      const ToleranceSpec& tol) {
  params.validate();
  check_sample_times(sample_times, w.duration());
  const double omega = params.omega_sim;

  auto integrand_re = [&](double t) {
    const std::complex<double> kappa = drive_coupling(w.f(t), w.h(t), params);
    return (std::exp(kI * omega * t) * kappa).real();
  };
  auto integrand_im = [&](double t) {
    const std::complex<double> kappa = drive_coupling(w.f(t), w.h(t), params);
    return (std::exp(kI * omega * t) * kappa).imag();
  };

  using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double panel_width = two_pi / omega;  // one oscillation per panel at most

  CoherentTrajectory traj;
  traj.times.assign(sample_times.begin(), sample_times.end());
  traj.alpha.reserve(sample_times.size());

  std::complex<double> integral = 0.0;
  double max_abs_integral = 0.0;
  double t_prev = 0.0;
  for (double t_k : sample_times) {
    const int n_panels = std::max(1, static_cast<int>(std::ceil((t_k - t_prev) / panel_width)));
    for (int p = 0; p < n_panels; ++p) {
      const double a = t_prev + (t_k - t_prev) * p / n_panels;
      const double b = t_prev + (t_k - t_prev) * (p + 1) / n_panels;
      if (!(b > a)) continue;
      double err_re = 0.0, err_im = 0.0;
      const double re = quad::integrate(integrand_re, a, b, 12, 1e-14, &err_re);
      const double im = quad::integrate(integrand_im, a, b, 12, 1e-14, &err_im);
      integral += std::complex<double>(re, im);
      traj.quadrature_error += err_re + err_im;
    }
    max_abs_integral = std::max(max_abs_integral, std::abs(integral));
    traj.alpha.push_back(std::exp(-kI * omega * t_k) * (alpha0.alpha - kI * integral));
    t_prev = t_k;
  }

  const double budget = tol.quadrature_tol * std::max(1.0, max_abs_integral);
  if (traj.quadrature_error > budget)
    throw numerical_error("coherent oracle: quadrature error " +
                          std::to_string(traj.quadrature_error) + " exceeds tolerance " +
                          std::to_string(budget));
  return traj;
}

FockTrajectory propagate_fock(const DriveWaveform& w, const OscillatorParams& params,
                              const FockState& psi0, std::span<const double> sample_times,
                              const ToleranceSpec& tol) {
  params.validate();
  psi0.validate();
  check_sample_times(sample_times, w.duration());
  const int dim = psi0.dim();
  const double omega = params.omega_sim;
  const auto sq = sqrt_table(dim);

  auto rhs = [&](const Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi, double t) {
    const std::complex<double> kappa = drive_coupling(w.f(t), w.h(t), params);
    const std::complex<double> kappa_c = std::conj(kappa);
    dpsi.resize(dim);
    for (int n = 0; n < dim; ++n) {
      std::complex<double> acc = omega * static_cast<double>(n) * psi(n);
      if (n > 0) acc += kappa * sq[n] * psi(n - 1);
      if (n + 1 < dim) acc += kappa_c * sq[n + 1] * psi(n + 1);
      dpsi(n) = -kI * acc;
    }
  };

  FockTrajectory traj;
  traj.times.assign(sample_times.begin(), sample_times.end());
  traj.states.reserve(sample_times.size());
  traj.n_lab.reserve(sample_times.size());

  Eigen::VectorXcd state = psi0.amplitudes;
  integrate_sampled(rhs, state, sample_times, tol.rel_tol, tol.abs_tol,
                    [&](const Eigen::VectorXcd& x, std::size_t) {
                      FockState snapshot{x};
                      const double top = snapshot.top_population();
                      if (top > tol.truncation_threshold)
                        throw numerical_error(
                            "fock propagation: top-level population " + std::to_string(top) +
                            " breached the truncation threshold; rerun with dim >= " +
                            std::to_string(2 * dim));
                      if (std::abs(snapshot.norm() - 1.0) > 1e-6)
                        throw numerical_error("fock propagation: norm drifted beyond 1e-6");
                      traj.n_lab.push_back(snapshot.mean_phonon());
                      traj.states.push_back(std::move(snapshot));
                    });
  return traj;
}

DensityTrajectory propagate_lindblad(const DriveWaveform& w, const OscillatorParams& params,
                                     const DensityState& rho0, const NoiseModel& noise,
                                     std::span<const double> sample_times,
                                     const ToleranceSpec& tol) {
  params.validate();
  noise.validate();
  rho0.validate();
  check_sample_times(sample_times, w.duration());
  const int dim = rho0.dim();
  const double omega = params.omega_sim;
  const auto sq = sqrt_table(dim);
  const double rate_down = noise.heating_rate * (noise.thermal_nbar + 1.0);
  const double rate_up = noise.heating_rate * noise.thermal_nbar;
  const double rate_phi = noise.dephasing_rate;

  auto rhs = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& dxdt, double t) {
    const std::complex<double> kappa = drive_coupling(w.f(t), w.h(t), params);
    const std::complex<double> kappa_c = std::conj(kappa);
    dxdt.resize(x.size());
    Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> out(dxdt.data(), dim, dim);
    for (int m = 0; m < dim; ++m) {
      for (int n = 0; n < dim; ++n) {
        // commutator −i(Hρ − ρH) with tridiagonal H
        std::complex<double> h_rho = omega * static_cast<double>(m) * rho(m, n);
        if (m > 0) h_rho += kappa * sq[m] * rho(m - 1, n);
        if (m + 1 < dim) h_rho += kappa_c * sq[m + 1] * rho(m + 1, n);
        std::complex<double> rho_h = omega * static_cast<double>(n) * rho(m, n);
        if (n + 1 < dim) rho_h += kappa * sq[n + 1] * rho(m, n + 1);
        if (n > 0) rho_h += kappa_c * sq[n] * rho(m, n - 1);
        std::complex<double> acc = -kI * (h_rho - rho_h);
        if (rate_down > 0.0) {
          std::complex<double> gain = 0.0;
          if (m + 1 < dim && n + 1 < dim) gain = sq[m + 1] * sq[n + 1] * rho(m + 1, n + 1);
          acc += rate_down * (gain - 0.5 * static_cast<double>(m + n) * rho(m, n));
        }
        if (rate_up > 0.0) {
          std::complex<double> gain = 0.0;
          if (m > 0 && n > 0) gain = sq[m] * sq[n] * rho(m - 1, n - 1);
          acc += rate_up * (gain - (0.5 * static_cast<double>(m + n) + 1.0) * rho(m, n));
        }
        if (rate_phi > 0.0) {
          const double mn = static_cast<double>(m) * n;
          const double sq2 = 0.5 * (static_cast<double>(m) * m + static_cast<double>(n) * n);
          acc += rate_phi * (mn - sq2) * rho(m, n);
        }
        out(m, n) = acc;
      }
    }
  };

  DensityTrajectory traj;
  traj.times.assign(sample_times.begin(), sample_times.end());
  traj.states.reserve(sample_times.size());
  traj.n_lab.reserve(sample_times.size());

  Eigen::VectorXcd state(dim * dim);
  Eigen::Map<Eigen::MatrixXcd>(state.data(), dim, dim) = rho0.rho;
  integrate_sampled(rhs, state, sample_times, tol.rel_tol, tol.abs_tol,
                    [&](const Eigen::VectorXcd& x, std::size_t) {
                      DensityState snapshot{Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim)};
                      if (std::abs(snapshot.trace_real() - 1.0) > 1e-6)
                        throw numerical_error("lindblad propagation: trace drifted beyond 1e-6");
                      if (snapshot.hermiticity_defect() > 1e-6)
                        throw numerical_error("lindblad propagation: hermiticity lost");
                      if (snapshot.min_eigenvalue() < -1e-6)
                        throw numerical_error(
                            "lindblad propagation: positivity lost (eigenvalue < -1e-6); "
                            "step too large or dimension too small");
                      if (snapshot.top_population() > tol.truncation_threshold)
                        throw numerical_error(
                            "lindblad propagation: truncation breach; rerun with dim >= " +
                            std::to_string(2 * dim));
                      traj.n_lab.push_back(snapshot.mean_phonon());
                      traj.states.push_back(std::move(snapshot));
                    });
  return traj;
}

PhononStats phonon_stats(const FockState& psi) {
  psi.validate();
  PhononStats stats;
  stats.distribution.resize(psi.dim());
  for (int n = 0; n < psi.dim(); ++n) {
    stats.distribution[n] = std::norm(psi.amplitudes(n));
    stats.mean += n * stats.distribution[n];
  }
  return stats;
}

PhononStats phonon_stats(const DensityState& rho) {
  rho.validate();
  PhononStats stats;
  stats.distribution.resize(rho.dim());
  for (int n = 0; n < rho.dim(); ++n) {
    stats.distribution[n] = rho.rho(n, n).real();
    stats.mean += n * stats.distribution[n];
  }
  return stats;
}

PhononStats phonon_stats(const CoherentAmplitude& alpha, int dim) {
  if (dim < 1) throw std::invalid_argument("phonon_stats: dim must be >= 1");
  PhononStats stats;
  stats.distribution.resize(dim);
  const double lambda = alpha.phonon_number();
  double p = std::exp(-lambda);
  for (int n = 0; n < dim; ++n) {
    stats.distribution[n] = p;
    stats.mean += n * p;
    p *= lambda / (n + 1);
  }
  return stats;
}

CoherentAmplitude to_instantaneous_frame(const CoherentAmplitude& state, double f_val,
                                         const OscillatorParams& params) {
  return {state.alpha - equilibrium_displacement(f_val, params).alpha};
}

FockState to_instantaneous_frame(const FockState& state, double f_val,
                                 const OscillatorParams& params, double defect_threshold) {
  const std::complex<double> beta = -equilibrium_displacement(f_val, params).alpha;
  if (beta == 0.0) return state;
  FockState out{displacement_operator(beta, state.dim()) * state.amplitudes};
  const double defect = std::max(state.top_population(), out.top_population());
  if (defect > defect_threshold)
    throw numerical_error("frame transform: truncation defect " + std::to_string(defect) +
                          " exceeds " + std::to_string(defect_threshold) +
                          "; increase Fock dimension");
  return out;
}

DensityState to_instantaneous_frame(const DensityState& state, double f_val,
                                    const OscillatorParams& params, double defect_threshold) {
  const std::complex<double> beta = -equilibrium_displacement(f_val, params).alpha;
  if (beta == 0.0) return state;
  const Eigen::MatrixXcd d = displacement_operator(beta, state.dim());
  DensityState out{d * state.rho * d.adjoint()};
  const double defect = std::max(state.top_population(), out.top_population());
  if (defect > defect_threshold)
    throw numerical_error("frame transform: truncation defect " + std::to_string(defect) +
                          " exceeds " + std::to_string(defect_threshold) +
                          "; increase Fock dimension");
  return out;
}

double instantaneous_excitation(const FockState& state, double f_val,
                                const OscillatorParams& params) {
  const double alpha_eq = equilibrium_displacement(f_val, params).alpha.real();
  return state.mean_phonon() - 2.0 * alpha_eq * state.expectation_a().real() +
         alpha_eq * alpha_eq;
}

double instantaneous_excitation(const DensityState& state, double f_val,
                                const OscillatorParams& params) {
  const double alpha_eq = equilibrium_displacement(f_val, params).alpha.real();
  return state.mean_phonon() - 2.0 * alpha_eq * state.expectation_a().real() +
         alpha_eq * alpha_eq;
}

Eigen::MatrixXcd displacement_operator(std::complex<double> beta, int dim) {
  if (dim < 1) throw std::invalid_argument("displacement_operator: dim must be >= 1");
  // exp(βa† − β*a) = exp(iM) with Hermitian M = −i(βa† − β*a)
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double root = std::sqrt(static_cast<double>(n + 1));
    m(n + 1, n) = -kI * beta * root;
    m(n, n + 1) = std::conj(m(n + 1, n));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  const Eigen::VectorXcd phases =
      (kI * solver.eigenvalues().cast<std::complex<double>>().array()).exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Eigen::MatrixXcd hamiltonian_matrix(double omega, std::complex<double> kappa, int dim) {
  if (dim < 1) throw std::invalid_argument("hamiltonian_matrix: dim must be >= 1");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    h(n, n) = omega * static_cast<double>(n);
    if (n + 1 < dim) {
      const double root = std::sqrt(static_cast<double>(n + 1));
      h(n + 1, n) = kappa * root;
      h(n, n + 1) = std::conj(kappa) * root;
    }
  }
  return h;
}

int recommended_fock_dim(double alpha_max) {
  if (alpha_max < 0.0) throw std::invalid_argument("recommended_fock_dim: alpha_max < 0");
  return static_cast<int>(poisson_tail_dim(alpha_max));
}

}  // namespace sta
