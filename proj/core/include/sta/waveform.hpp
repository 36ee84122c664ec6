#pragma once

#include <vector>

#include "sta/errors.hpp"

namespace sta {

/// Closed-form scalar signal on [0, time_scale]:
///
///   g(t) = Σ_k poly[k]·σ^k + Σ_n ( sin_coef[n-1]·sin(2πnσ) + cos_coef[n-1]·cos(2πnσ) ),
///   σ = t / time_scale.
///
/// The family is closed under differentiation, so waveform derivatives are
/// exact coefficient transforms rather than finite differences.
class AnalyticSignal {
 public:
  AnalyticSignal() = default;
  AnalyticSignal(std::vector<double> poly, std::vector<double> sin_coef,
                 std::vector<double> cos_coef, double time_scale);

  static AnalyticSignal zero();
  static AnalyticSignal constant(double value);
  static AnalyticSignal polynomial(std::vector<double> coef_sigma, double time_scale);

  double operator()(double t) const;
  AnalyticSignal derivative() const;

  AnalyticSignal& operator+=(const AnalyticSignal& other);
  AnalyticSignal& operator*=(double scale);
  friend AnalyticSignal operator+(AnalyticSignal a, const AnalyticSignal& b) { return a += b; }
  friend AnalyticSignal operator*(AnalyticSignal a, double s) { return a *= s; }

  bool is_zero() const;
  double time_scale() const { return time_scale_; }

 private:
  std::vector<double> poly_;
  std::vector<double> sin_coef_;
  std::vector<double> cos_coef_;
  double time_scale_ = 1.0;
};

/// Time-dependent drive pair: force channel f(t)·x̂ and momentum channel
/// h(t)·p̂, with exact first and second force derivatives. For protocols
/// that add a local auxiliary force on top of a transport profile, `aux`
/// holds that extra component (f = transport + aux); it is zero otherwise.
///
/// Evaluation outside [0, duration] throws std::domain_error.
class DriveWaveform {
 public:
  DriveWaveform(double duration, AnalyticSignal force, AnalyticSignal momentum,
                AnalyticSignal aux_force = AnalyticSignal::zero());

  static DriveWaveform constant(double f_val, double h_val, double duration);

  double duration() const { return duration_; }
  double f(double t) const;
  double f_dot(double t) const;
  double f_ddot(double t) const;
  double h(double t) const;
  double f_aux(double t) const;

  bool has_momentum_channel() const { return !momentum_.is_zero(); }
  bool has_aux_force() const { return !aux_.is_zero(); }

 private:
  void check_time(double t) const;

  double duration_;
  AnalyticSignal force_, force_dot_, force_ddot_, momentum_, aux_;
};

}  // namespace sta
