#include "qmelab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qmelab/errors.hpp"

namespace qmelab {

namespace {

using cplx = std::complex<double>;

cplx jc_d(double gamma0, double width, double detuning) {
  const cplx a(width, -detuning);
  cplx d = std::sqrt(a * a - 2.0 * gamma0 * width);
  if (d.real() < 0.0) d = -d;
  return d;
}

// d * coth(d t / 2), with Re d >= 0.
cplx d_coth(cplx d, double t) {
  const cplx z = 0.5 * d * t;
  if (std::abs(z) < 1e-6) return 2.0 / t + d * d * t / 6.0;
  const cplx e = std::exp(-2.0 * z);
  return d * (1.0 + e) / (1.0 - e);
}

bool strong_resonant(double gamma0, double width, double detuning) {
  return detuning == 0.0 && 2.0 * gamma0 * width > width * width;
}

struct Validator {
  void operator()(const rate::Constant& c) const {
    if (!std::isfinite(c.gamma)) raise(ErrorCode::InvalidArgument, "constant rate must be finite");
  }
  void operator()(const rate::Sinusoid& s) const {
    if (!std::isfinite(s.amplitude) || !std::isfinite(s.omega))
      raise(ErrorCode::InvalidArgument, "sinusoid parameters must be finite");
  }
  void operator()(const rate::OhmicDephasing& o) const {
    if (!(o.cutoff > 0.0) || !(o.ohmicity >= 0.0))
      raise(ErrorCode::InvalidArgument, "ohmic rate needs cutoff > 0 and s >= 0");
  }
  void operator()(const rate::JaynesCummings& j) const {
    if (!(j.gamma0 > 0.0) || !(j.width > 0.0) || !std::isfinite(j.detuning))
      raise(ErrorCode::InvalidArgument, "Jaynes-Cummings rate needs gamma0 > 0 and width > 0");
  }
  void operator()(const rate::EternalNMZ&) const {}
  void operator()(const rate::Linear& l) const {
    if (!std::isfinite(l.slope)) raise(ErrorCode::InvalidArgument, "linear slope must be finite");
  }
  void operator()(const rate::Tabulated& tab) const {
    if (tab.times.empty() || tab.times.size() != tab.values.size())
      raise(ErrorCode::InvalidArgument, "tabulated rate needs matching non-empty samples");
    for (std::size_t k = 1; k < tab.times.size(); ++k)
      if (!(tab.times[k] > tab.times[k - 1]))
        raise(ErrorCode::InvalidArgument, "tabulated times must increase strictly");
  }
};

}  // namespace

double ohmic_dephasing_rate(double cutoff, double s, double t) {
  const double x = cutoff * t;
  if (s == 0.0) return cutoff * std::atan(x);
  return cutoff * std::pow(1.0 + x * x, -0.5 * s) * std::tgamma(s) * std::sin(s * std::atan(x));
}

RateSample jc_damping_rate(double gamma0, double width, double detuning, double t) {
  if (t <= 0.0) return {0.0, false};
  const cplx d = jc_d(gamma0, width, detuning);
  const cplx den = cplx(width, -detuning) + d_coth(d, t);
  if (strong_resonant(gamma0, width, detuning)) {
    const double ad = std::abs(d);
    const double base = (2.0 / ad) * (std::numbers::pi - std::atan(ad / width));
    const double period = 2.0 * std::numbers::pi / ad;
    const double n = std::round((t - base) / period);
    if (n >= 0.0 && std::abs(t - (base + n * period)) <= 1e-12 * std::max(1.0, t))
      return {0.0, true};
  }
  if (std::abs(den) == 0.0) return {0.0, true};
  return {(2.0 * gamma0 * width / den).real(), false};
}

std::vector<double> jc_poles(double gamma0, double width, double detuning, double t0, double t1) {
  std::vector<double> out;
  if (!strong_resonant(gamma0, width, detuning)) return out;
  const double ad = std::sqrt(2.0 * gamma0 * width - width * width);
  // arccot(-width/|d|) taken in (0, pi).
  const double base = (2.0 / ad) * (std::numbers::pi - std::atan(ad / width));
  const double period = 2.0 * std::numbers::pi / ad;
  for (int n = 0;; ++n) {
    const double tn = base + n * period;
    if (tn > t1) break;
    if (tn > t0) out.push_back(tn);
  }
  return out;
}

RateFunction::RateFunction(Variant v) : v_(std::move(v)) { std::visit(Validator{}, v_); }

RateSample RateFunction::sample(double t) const {
  return std::visit(
      [t](const auto& r) -> RateSample {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, rate::Constant>) {
          return {r.gamma, false};
        } else if constexpr (std::is_same_v<T, rate::Sinusoid>) {
          return {r.amplitude * std::sin(r.omega * t), false};
        } else if constexpr (std::is_same_v<T, rate::OhmicDephasing>) {
          return {ohmic_dephasing_rate(r.cutoff, r.ohmicity, t), false};
        } else if constexpr (std::is_same_v<T, rate::JaynesCummings>) {
          return jc_damping_rate(r.gamma0, r.width, r.detuning, t);
        } else if constexpr (std::is_same_v<T, rate::EternalNMZ>) {
          return {-0.5 * std::tanh(t), false};
        } else if constexpr (std::is_same_v<T, rate::Linear>) {
          return {r.slope * t, false};
        } else {
          const auto& ts = r.times;
          if (t <= ts.front()) return {r.values.front(), false};
          if (t >= ts.back()) return {r.values.back(), false};
          const auto it = std::upper_bound(ts.begin(), ts.end(), t);
          const std::size_t k = static_cast<std::size_t>(it - ts.begin());
          const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
          return {(1.0 - w) * r.values[k - 1] + w * r.values[k], false};
        }
      },
      v_);
}

double RateFunction::operator()(double t) const {
  const RateSample s = sample(t);
  if (s.singular) raise(ErrorCode::SingularRate, name() + " rate has a pole at t=" + std::to_string(t));
  return s.value;
}

std::optional<double> RateFunction::first_pole(double t0, double t1) const {
  if (const auto* j = std::get_if<rate::JaynesCummings>(&v_)) {
    const auto poles = jc_poles(j->gamma0, j->width, j->detuning, t0, t1);
    if (!poles.empty()) return poles.front();
  }
  return std::nullopt;
}

std::string RateFunction::name() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, rate::Constant>) return "constant";
        else if constexpr (std::is_same_v<T, rate::Sinusoid>) return "sinusoid";
        else if constexpr (std::is_same_v<T, rate::OhmicDephasing>) return "ohmic";
        else if constexpr (std::is_same_v<T, rate::JaynesCummings>) return "jaynes-cummings";
        else if constexpr (std::is_same_v<T, rate::EternalNMZ>) return "eternal-nm-z";
        else if constexpr (std::is_same_v<T, rate::Linear>) return "linear";
        else return "tabulated";
      },
      v_);
}

}  // namespace qmelab
