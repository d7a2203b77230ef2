#pragma once

#include <utility>
#include <vector>

#include "qmelab/dynamics.hpp"
#include "qmelab/generators.hpp"
#include "qmelab/superop.hpp"

namespace qmelab {

class MagnetDistribution {
 public:
  enum class Kind { Gaussian, Lorentzian };

  static MagnetDistribution gaussian(double sigma);
  static MagnetDistribution lorentzian(double width);

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  double density(double m) const;
  // log E[cos(g m t)]; both distributions are symmetric about zero.
  double log_characteristic(double g, double t) const;
  // Time derivative of log_characteristic for t >= 0, from the right at t = 0.
  double log_characteristic_rate(double g, double t) const;

 private:
  MagnetDistribution(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

struct SystemSpec {
  double omega = 0.0;
  Vec3 axis = Vec3::UnitX();
};

struct Magnet {
  double coupling = 1.0;
  Vec3 axis = Vec3::UnitZ();
  MagnetDistribution dist = MagnetDistribution::gaussian(1.0);
};

struct MagnetModel {
  SystemSpec system;
  std::vector<Magnet> magnets;

  void validate() const;
};

// ZX: first magnet along z, second along x, no system Hamiltonian.
// ZZ: all magnets along z, system Hamiltonian (if any) along x.
enum class Geometry { ZX, ZZ };

Geometry detect_geometry(const MagnetModel& model);

enum class Presence { First, Second, Both };

struct QuadratureSpec {
  int hermite_order = 80;
  int legendre_order = 200;
  double tolerance = 1e-7;
  bool verify = true;
  unsigned threads = 1;
};

struct RotationSample {
  Mat3 r = Mat3::Identity();
  Mat3 r_dot = Mat3::Zero();
};

// exp(t [a]_x) and its time derivative.
RotationSample precession(const Vec3& a, double t);

RotationSample conditional_rotation_zx(double m1, double m2, double g1, double g2, double t);
// Interaction-picture rotation for H = (omega sx + (g1 m1 + g2 m2) sz) / 2.
RotationSample conditional_rotation_ip_zz(double m1, double m2, double g1, double g2, double omega,
                                          double t);

struct AveragedAffine {
  Mat3 d = Mat3::Identity();
  Mat3 d_dot = Mat3::Zero();
  double convergence_delta = 0.0;
  std::size_t nodes = 0;
  // True when the average was taken through the characteristic function.
  bool exact = false;
};

// For omega > 0 the result is in the interaction picture.
AveragedAffine averaged_affine(const MagnetModel& model, Presence which, const QuadratureSpec& quad,
                               double t);

Mat3 generator_from_affine(const Mat3& d, const Mat3& d_dot);

enum class Picture { Schrodinger, Interaction };

struct AdditivityResult {
  Mat3 l12 = Mat3::Zero();
  Mat3 l1 = Mat3::Zero();
  Mat3 l2 = Mat3::Zero();
  double gap = 0.0;
};

AdditivityResult additivity_gap(const MagnetModel& model, const QuadratureSpec& quad, double t,
                                Picture picture);

struct ScalingResult {
  std::vector<std::pair<double, double>> points;
  double exponent = 0.0;
};

ScalingResult weak_coupling_scaling(const MagnetModel& model, const QuadratureSpec& quad, double t,
                                    const std::vector<double>& couplings);

// Decay rate of the transverse Bloch components, -L_xx, for the selected magnets.
double magnet_dephasing_rate(const MagnetModel& model, Presence which, const QuadratureSpec& quad,
                             double t);

MapTrajectory magnet_trajectory(const MagnetModel& model, Presence which,
                                const QuadratureSpec& quad, const std::vector<double>& grid);
GeneratorFamily magnet_generator_family(const MagnetModel& model, Presence which,
                                        const QuadratureSpec& quad);

// One z-coupled magnet of N spins with magnetisation sum of +-1; N <= 20.
AveragedAffine discrete_dephasing_affine(int spins, double g, double t);

}  // namespace qmelab
