#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "sta/model.hpp"
#include "sta/waveform.hpp"

namespace sta {

/// Pure state in the truncated phonon-number basis |0⟩..|D−1⟩.
struct FockState {
  Eigen::VectorXcd amplitudes;

  static FockState vacuum(int dim);
  static FockState number(int level, int dim);
  static FockState coherent(std::complex<double> alpha, int dim);

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  double mean_phonon() const;
  std::complex<double> expectation_a() const;
  double top_population() const;  ///< |ψ_{D−1}|², the truncation monitor
  void validate() const;          ///< normalized within 1e-9
};

/// Mixed state as a density matrix in the truncated phonon basis.
struct DensityState {
  Eigen::MatrixXcd rho;

  static DensityState from_pure(const FockState& psi);

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace_real() const { return rho.trace().real(); }
  double mean_phonon() const;
  std::complex<double> expectation_a() const;
  double top_population() const;
  double hermiticity_defect() const;  ///< max |ρ − ρ†|
  double min_eigenvalue() const;
  void validate() const;  ///< Hermitian 1e-10, unit trace 1e-8, eigenvalues ≥ −1e-8
};

/// Open-system channels: thermal contact at rate heating_rate with bath
/// occupation thermal_nbar (jump operators √(Γ(n̄+1))·a and √(Γn̄)·a†), plus
/// pure dephasing √γ_φ·a†a. All rates default to zero: the paper's noise
/// rates are unpublished, so noise is always a user input.
struct NoiseModel {
  double heating_rate = 0.0;
  double thermal_nbar = 0.0;
  double dephasing_rate = 0.0;

  bool is_closed() const;
  void validate() const;  ///< all rates ≥ 0
};

/// Integrator contract. Any norm-controlled scheme may sit behind it; the
/// tolerance is the promise, not the method.
struct ToleranceSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double truncation_threshold = 1e-10;  ///< ceiling on top-level population
  double quadrature_tol = 1e-12;        ///< coherent-oracle integral budget

  static ToleranceSpec closed() { return {}; }
  static ToleranceSpec open() { return {1e-8, 1e-10, 1e-10, 1e-12}; }
};

struct CoherentTrajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> alpha;
  double quadrature_error = 0.0;  ///< accumulated absolute error bound

  CoherentAmplitude final() const { return {alpha.back()}; }
  double max_abs_alpha() const;
};

/// Exact solution of α̇ = −iω'α − iκ(t) by adaptive Gauss–Kronrod quadrature
/// of the closed-form integral. Sample times must be sorted and lie in
/// [0, w.duration()]. Throws numerical_error if the accumulated quadrature
/// error bound exceeds tol.quadrature_tol.
CoherentTrajectory propagate_coherent(const DriveWaveform& w, const OscillatorParams& params,
                                      CoherentAmplitude alpha0,
                                      std::span<const double> sample_times,
                                      const ToleranceSpec& tol = ToleranceSpec::closed());

struct FockTrajectory {
  std::vector<double> times;
  std::vector<FockState> states;
  std::vector<double> n_lab;

  const FockState& final() const { return states.back(); }
};

/// Schrödinger propagation of H(t) = ω' a†a + κ(t)a† + κ*(t)a in the
/// truncated basis with adaptive error control. Independent of the coherent
/// oracle — the two are cross-checked, never share a code path.
/// Throws numerical_error on truncation breach (with a dimension hint) or
/// step-size underflow.
FockTrajectory propagate_fock(const DriveWaveform& w, const OscillatorParams& params,
                              const FockState& psi0, std::span<const double> sample_times,
                              const ToleranceSpec& tol = ToleranceSpec::closed());

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<DensityState> states;
  std::vector<double> n_lab;

  const DensityState& final() const { return states.back(); }
};

/// Lindblad master equation ρ̇ = −i[H(t),ρ] + Γ(n̄+1)D[a]ρ + Γn̄D[a†]ρ
/// + γ_φ D[a†a]ρ. Aborts (numerical_error) if positivity drifts below
/// −1e−6 or the trace leaves 1 by more than 1e−6.
DensityTrajectory propagate_lindblad(const DriveWaveform& w, const OscillatorParams& params,
                                     const DensityState& rho0, const NoiseModel& noise,
                                     std::span<const double> sample_times,
                                     const ToleranceSpec& tol = ToleranceSpec::open());

struct PhononStats {
  double mean = 0.0;
  std::vector<double> distribution;  ///< P(n), sums to 1 within 1e-8
};

PhononStats phonon_stats(const FockState& psi);
PhononStats phonon_stats(const DensityState& rho);
/// Poisson statistics of a coherent state, the exact-oracle counterpart.
PhononStats phonon_stats(const CoherentAmplitude& alpha, int dim);

/// Position-shift into the frame co-moving with the displaced well minimum:
/// the displacement D(−α_eq(f_val)) applied to the state.
CoherentAmplitude to_instantaneous_frame(const CoherentAmplitude& state, double f_val,
                                         const OscillatorParams& params);
FockState to_instantaneous_frame(const FockState& state, double f_val,
                                 const OscillatorParams& params,
                                 double defect_threshold = 1e-8);
DensityState to_instantaneous_frame(const DensityState& state, double f_val,
                                    const OscillatorParams& params,
                                    double defect_threshold = 1e-8);

/// Instantaneous-frame mean phonon number via the exact quadratic form
/// ⟨n⟩ − 2 α_eq Re⟨a⟩ + α_eq² (no truncated displacement involved).
double instantaneous_excitation(const FockState& state, double f_val,
                                const OscillatorParams& params);
double instantaneous_excitation(const DensityState& state, double f_val,
                                const OscillatorParams& params);

/// Truncated displacement operator exp(βa† − β*a), exactly unitary by
/// construction (spectral exponential of the anti-Hermitian generator).
Eigen::MatrixXcd displacement_operator(std::complex<double> beta, int dim);

/// Dense H = ω a†a + κa† + κ*a, Hermitian by construction.
Eigen::MatrixXcd hamiltonian_matrix(double omega, std::complex<double> kappa, int dim);

/// Poisson-tail rule: smallest dimension keeping truncated population below
/// ~1e−10 for excursions up to |α| = alpha_max.
int recommended_fock_dim(double alpha_max);

}  // namespace sta
