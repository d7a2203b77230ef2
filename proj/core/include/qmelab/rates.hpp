#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qmelab {

namespace rate {

struct Constant {
  double gamma = 0.0;
};

// amplitude * sin(omega t)
struct Sinusoid {
  double amplitude = 1.0;
  double omega = 1.0;
};

struct OhmicDephasing {
  double cutoff = 1.0;
  double ohmicity = 1.0;
};

struct JaynesCummings {
  double gamma0 = 1.0;
  double width = 1.0;
  double detuning = 0.0;
};

// -tanh(t)/2
struct EternalNMZ {};

// slope * t
struct Linear {
  double slope = 0.0;
};

// Piecewise linear, held constant outside the sampled range.
struct Tabulated {
  std::vector<double> times;
  std::vector<double> values;
};

}  // namespace rate

struct RateSample {
  double value = 0.0;
  bool singular = false;
};

class RateFunction {
 public:
  using Variant = std::variant<rate::Constant, rate::Sinusoid, rate::OhmicDephasing,
                               rate::JaynesCummings, rate::EternalNMZ, rate::Linear,
                               rate::Tabulated>;

  RateFunction() : v_(rate::Constant{0.0}) {}
  RateFunction(Variant v);

  static RateFunction constant(double gamma) { return RateFunction(rate::Constant{gamma}); }

  RateSample sample(double t) const;
  // Throws SingularRate at a pole.
  double operator()(double t) const;
  // First pole in (t0, t1], if the rate has any.
  std::optional<double> first_pole(double t0, double t1) const;

  const Variant& variant() const { return v_; }
  std::string name() const;

 private:
  Variant v_;
};

double ohmic_dephasing_rate(double cutoff, double ohmicity, double t);
RateSample jc_damping_rate(double gamma0, double width, double detuning, double t);
// Poles of the on-resonance rate in (t0, t1]; empty off resonance or at weak coupling.
std::vector<double> jc_poles(double gamma0, double width, double detuning, double t0, double t1);

}  // namespace qmelab
