#include "sta/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace sta {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AnalyticSignal::AnalyticSignal(std::vector<double> poly, std::vector<double> sin_coef,
                               std::vector<double> cos_coef, double time_scale)
    : poly_(std::move(poly)),
      sin_coef_(std::move(sin_coef)),
      cos_coef_(std::move(cos_coef)),
      time_scale_(time_scale) {
  if (!(time_scale_ > 0.0)) throw std::invalid_argument("AnalyticSignal: time_scale must be > 0");
}

AnalyticSignal AnalyticSignal::zero() { return AnalyticSignal({}, {}, {}, 1.0); }

AnalyticSignal AnalyticSignal::constant(double value) {
  return AnalyticSignal({value}, {}, {}, 1.0);
}

AnalyticSignal AnalyticSignal::polynomial(std::vector<double> coef_sigma, double time_scale) {
  return AnalyticSignal(std::move(coef_sigma), {}, {}, time_scale);
}

double AnalyticSignal::operator()(double t) const {
  const double sigma = t / time_scale_;
  double value = 0.0;
  // Horner on the polynomial part
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) value = value * sigma + *it;
  const std::size_t modes = std::max(sin_coef_.size(), cos_coef_.size());
  for (std::size_t i = 0; i < modes; ++i) {
    const double arg = kTwoPi * static_cast<double>(i + 1) * sigma;
    if (i < sin_coef_.size() && sin_coef_[i] != 0.0) value += sin_coef_[i] * std::sin(arg);
    if (i < cos_coef_.size() && cos_coef_[i] != 0.0) value += cos_coef_[i] * std::cos(arg);
  }
  return value;
}

AnalyticSignal AnalyticSignal::derivative() const {
  std::vector<double> dpoly;
  if (poly_.size() > 1) {
    dpoly.resize(poly_.size() - 1);
    for (std::size_t k = 1; k < poly_.size(); ++k)
      dpoly[k - 1] = poly_[k] * static_cast<double>(k) / time_scale_;
  }
  const std::size_t modes = std::max(sin_coef_.size(), cos_coef_.size());
  std::vector<double> dsin(modes, 0.0), dcos(modes, 0.0);
  for (std::size_t i = 0; i < modes; ++i) {
    const double rate = kTwoPi * static_cast<double>(i + 1) / time_scale_;
    if (i < sin_coef_.size()) dcos[i] += sin_coef_[i] * rate;
    if (i < cos_coef_.size()) dsin[i] -= cos_coef_[i] * rate;
  }
  return AnalyticSignal(std::move(dpoly), std::move(dsin), std::move(dcos), time_scale_);
}

AnalyticSignal& AnalyticSignal::operator+=(const AnalyticSignal& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) {
    *this = other;
    return *this;
  }
  if (time_scale_ != other.time_scale_)
    throw std::invalid_argument("AnalyticSignal: cannot add signals with different time scales");
  auto grow_add = [](std::vector<double>& a, const std::vector<double>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  };
  grow_add(poly_, other.poly_);
  grow_add(sin_coef_, other.sin_coef_);
  grow_add(cos_coef_, other.cos_coef_);
  return *this;
}

AnalyticSignal& AnalyticSignal::operator*=(double scale) {
  for (double& c : poly_) c *= scale;
  for (double& c : sin_coef_) c *= scale;
  for (double& c : cos_coef_) c *= scale;
  return *this;
}

bool AnalyticSignal::is_zero() const {
  auto all_zero = [](const std::vector<double>& v) {
    for (double c : v)
      if (c != 0.0) return false;
    return true;
  };
  return all_zero(poly_) && all_zero(sin_coef_) && all_zero(cos_coef_);
}

DriveWaveform::DriveWaveform(double duration, AnalyticSignal force, AnalyticSignal momentum,
                             AnalyticSignal aux_force)
    : duration_(duration),
      force_(std::move(force)),
      momentum_(std::move(momentum)),
      aux_(std::move(aux_force)) {
  if (!(duration_ > 0.0)) throw std::invalid_argument("DriveWaveform: duration must be > 0");
  force_dot_ = force_.derivative();
  force_ddot_ = force_dot_.derivative();
}

DriveWaveform DriveWaveform::constant(double f_val, double h_val, double duration) {
  return DriveWaveform(duration, AnalyticSignal::constant(f_val),
                       AnalyticSignal::constant(h_val));
}

void DriveWaveform::check_time(double t) const {
  // small slack for roundoff at panel boundaries
  const double slack = 1e-12 * duration_;
  if (t < -slack || t > duration_ + slack)
    throw std::domain_error("DriveWaveform: t = " + std::to_string(t) +
                            " outside [0, " + std::to_string(duration_) + "]");
}

double DriveWaveform::f(double t) const {
  check_time(t);
  return force_(t);
}

double DriveWaveform::f_dot(double t) const {
  check_time(t);
  return force_dot_(t);
}

double DriveWaveform::f_ddot(double t) const {
  check_time(t);
  return force_ddot_(t);
}

double DriveWaveform::h(double t) const {
  check_time(t);
  return momentum_(t);
}

double DriveWaveform::f_aux(double t) const {
  check_time(t);
  return aux_(t);
}

}  // namespace sta
