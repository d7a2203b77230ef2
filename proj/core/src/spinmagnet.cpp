#include "qmelab/spinmagnet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qmelab/errors.hpp"
#include "qmelab/parallel.hpp"
#include "qmelab/quadrature.hpp"

namespace qmelab {

MagnetDistribution MagnetDistribution::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    raise(ErrorCode::InvalidArgument, "Gaussian width must be positive");
  return MagnetDistribution(Kind::Gaussian, sigma);
}

MagnetDistribution MagnetDistribution::lorentzian(double width) {
  if (!(width > 0.0) || !std::isfinite(width))
    raise(ErrorCode::InvalidArgument, "Lorentzian width must be positive");
  return MagnetDistribution(Kind::Lorentzian, width);
}

double MagnetDistribution::density(double m) const {
  if (kind_ == Kind::Gaussian)
    return std::exp(-0.5 * m * m / (param_ * param_)) / (param_ * std::sqrt(2.0 * std::numbers::pi));
  return param_ / (std::numbers::pi * (param_ * param_ + m * m));
}

double MagnetDistribution::log_characteristic(double g, double t) const {
  if (kind_ == Kind::Gaussian) return -0.5 * param_ * param_ * g * g * t * t;
  return -param_ * std::abs(g) * t;
}

double MagnetDistribution::log_characteristic_rate(double g, double t) const {
  if (kind_ == Kind::Gaussian) return -param_ * param_ * g * g * t;
  return -param_ * std::abs(g);
}

namespace {

bool same_axis(const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-12; }

void check_unit(const Vec3& a, const char* what) {
  if (std::abs(a.norm() - 1.0) > 1e-12) raise(ErrorCode::BadAxis, std::string(what) + " axis must have unit norm");
}

Mat3 skew(const Vec3& a) {
  Mat3 k;
  k << 0.0, -a(2), a(1), a(2), 0.0, -a(0), -a(1), a(0), 0.0;
  return k;
}

}  // namespace

void MagnetModel::validate() const {
  if (magnets.empty() || magnets.size() > 2)
    raise(ErrorCode::InvalidArgument, "a model has one or two magnets");
  if (!(system.omega >= 0.0) || !std::isfinite(system.omega))
    raise(ErrorCode::InvalidArgument, "system frequency must be finite and non-negative");
  check_unit(system.axis, "system");
  for (const auto& m : magnets) {
    if (!std::isfinite(m.coupling)) raise(ErrorCode::InvalidArgument, "coupling must be finite");
    check_unit(m.axis, "magnet");
  }
}

Geometry detect_geometry(const MagnetModel& model) {
  model.validate();
  const Vec3 x = Vec3::UnitX(), z = Vec3::UnitZ();
  if (!same_axis(model.magnets[0].axis, z))
    raise(ErrorCode::UnsupportedGeometry, "first magnet must couple along z");
  if (model.magnets.size() == 2 && same_axis(model.magnets[1].axis, x)) {
    if (model.system.omega != 0.0)
      raise(ErrorCode::UnsupportedGeometry, "z-x layout is supported only without a system Hamiltonian");
    return Geometry::ZX;
  }
  if (model.magnets.size() == 2 && !same_axis(model.magnets[1].axis, z))
    raise(ErrorCode::UnsupportedGeometry, "second magnet must couple along z or x");
  if (model.system.omega > 0.0 && !same_axis(model.system.axis, x))
    raise(ErrorCode::UnsupportedGeometry, "system Hamiltonian must point along x");
  return Geometry::ZZ;
}

RotationSample precession(const Vec3& a, double t) {
  const Mat3 k = skew(a);
  const double w = a.norm();
  const double th = w * t;
  double s1, s2;
  if (std::abs(th) < 1e-4) {
    const double th2 = th * th;
    s1 = t * (1.0 - th2 / 6.0 + th2 * th2 / 120.0);
    s2 = t * t * (0.5 - th2 / 24.0 + th2 * th2 / 720.0);
  } else {
    s1 = std::sin(th) / w;
    s2 = (1.0 - std::cos(th)) / (w * w);
  }
  RotationSample out;
  out.r = Mat3::Identity() + s1 * k + s2 * (k * k);
  out.r_dot = k * out.r;
  return out;
}

RotationSample conditional_rotation_zx(double m1, double m2, double g1, double g2, double t) {
  return precession(Vec3(g2 * m2, 0.0, g1 * m1), t);
}

RotationSample conditional_rotation_ip_zz(double m1, double m2, double g1, double g2, double omega,
                                          double t) {
  const double gamma = g1 * m1 + g2 * m2;
  const RotationSample full = precession(Vec3(omega, 0.0, gamma), t);
  const RotationSample free = precession(Vec3(omega, 0.0, 0.0), t);
  RotationSample out;
  out.r = free.r.transpose() * full.r;
  out.r_dot = free.r.transpose() * skew(Vec3(0.0, 0.0, gamma)) * full.r;
  return out;
}

namespace {

struct Nodes {
  std::vector<double> m;
  std::vector<double> w;
};

Nodes nodes_for(const MagnetDistribution& dist, const QuadratureSpec& q, int scale) {
  Nodes n;
  if (dist.kind() == MagnetDistribution::Kind::Gaussian) {
    const auto rule = gauss_hermite_probabilists(q.hermite_order * scale);
    n.w = rule.weights;
    for (double x : rule.nodes) n.m.push_back(dist.param() * x);
  } else {
    // m = width * tan(theta) turns the Cauchy weight into d(theta)/pi.
    const auto rule = gauss_legendre(q.legendre_order * scale);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      n.m.push_back(dist.param() * std::tan(0.5 * std::numbers::pi * rule.nodes[k]));
      n.w.push_back(0.5 * rule.weights[k]);
    }
  }
  return n;
}

struct Setup {
  Geometry geometry;
  double g1 = 0.0, g2 = 0.0, omega = 0.0;
  bool first = false, second = false;
};

Setup make_setup(const MagnetModel& model, Presence which) {
  Setup s;
  s.geometry = detect_geometry(model);
  s.omega = model.system.omega;
  s.first = which != Presence::Second;
  s.second = which != Presence::First;
  if (s.second && model.magnets.size() < 2)
    raise(ErrorCode::InvalidArgument, "model has no second magnet");
  s.g1 = s.first ? model.magnets[0].coupling : 0.0;
  s.g2 = s.second && model.magnets.size() > 1 ? model.magnets[1].coupling : 0.0;
  return s;
}

AveragedAffine average_numeric(const MagnetModel& model, const Setup& s, const QuadratureSpec& q,
                               double t, int scale) {
  const Nodes one{{0.0}, {1.0}};
  const Nodes n1 = s.first ? nodes_for(model.magnets[0].dist, q, scale) : one;
  const Nodes n2 = s.second ? nodes_for(model.magnets[1].dist, q, scale) : one;
  const std::size_t total = n1.m.size() * n2.m.size();
  std::array<std::vector<double>, 18> terms;
  for (auto& v : terms) v.resize(total);
  parallel_for(total, q.threads, [&](std::size_t idx) {
    const std::size_t i = idx / n2.m.size(), j = idx % n2.m.size();
    const double w = n1.w[i] * n2.w[j];
    const RotationSample r = s.geometry == Geometry::ZX
                                 ? conditional_rotation_zx(n1.m[i], n2.m[j], s.g1, s.g2, t)
                                 : conditional_rotation_ip_zz(n1.m[i], n2.m[j], s.g1, s.g2, s.omega, t);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        terms[3 * a + b][idx] = w * r.r(a, b);
        terms[9 + 3 * a + b][idx] = w * r.r_dot(a, b);
      }
    }
  });
  AveragedAffine out;
  out.nodes = total;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      out.d(a, b) = pairwise_sum(terms[3 * a + b]);
      out.d_dot(a, b) = pairwise_sum(terms[9 + 3 * a + b]);
    }
  }
  return out;
}

}  // namespace

AveragedAffine averaged_affine(const MagnetModel& model, Presence which, const QuadratureSpec& quad,
                               double t) {
  if (quad.hermite_order < 8 || quad.legendre_order < 8)
    raise(ErrorCode::InvalidArgument, "quadrature order must be at least 8");
  const Setup s = make_setup(model, which);

  // With a single precession axis and no system Hamiltonian the rotation angle is linear
  // in the magnetisations, so the average is a product of characteristic functions.
  bool lorentzian = false;
  if (s.first) lorentzian |= model.magnets[0].dist.kind() == MagnetDistribution::Kind::Lorentzian;
  if (s.second) lorentzian |= model.magnets[1].dist.kind() == MagnetDistribution::Kind::Lorentzian;
  const bool single_axis = s.omega == 0.0 && (s.geometry == Geometry::ZZ || !(s.first && s.second));
  if (lorentzian && single_axis) {
    const Vec3 n = s.first ? model.magnets[0].axis : model.magnets[1].axis;
    double logphi = 0.0, rate = 0.0;
    for (int i = 0; i < 2; ++i) {
      if ((i == 0 && !s.first) || (i == 1 && !s.second)) continue;
      const Magnet& m = model.magnets[i];
      logphi += m.dist.log_characteristic(m.coupling, t);
      rate += m.dist.log_characteristic_rate(m.coupling, t);
    }
    const double phi = std::exp(logphi);
    const Mat3 proj = n * n.transpose();
    const Mat3 perp = Mat3::Identity() - proj;
    AveragedAffine out;
    out.d = proj + phi * perp;
    out.d_dot = rate * phi * perp;
    out.exact = true;
    return out;
  }

  AveragedAffine out = average_numeric(model, s, quad, t, 1);
  if (quad.verify) {
    const AveragedAffine fine = average_numeric(model, s, quad, t, 2);
    out.convergence_delta = std::max((out.d - fine.d).cwiseAbs().maxCoeff(),
                                     (out.d_dot - fine.d_dot).cwiseAbs().maxCoeff());
    if (!(out.convergence_delta < quad.tolerance)) {
      std::ostringstream os;
      os << "order doubling changed the average by " << out.convergence_delta << " at t=" << t;
      raise(ErrorCode::QuadratureNotConverged, os.str());
    }
  }
  return out;
}

Mat3 generator_from_affine(const Mat3& d, const Mat3& d_dot) {
  Eigen::JacobiSVD<Mat3> svd(d);
  const Vec3 sv = svd.singularValues();
  const double cond = sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) raise(ErrorCode::SingularMap, "averaged Bloch matrix is singular");
  return d_dot * d.fullPivLu().inverse();
}

AdditivityResult additivity_gap(const MagnetModel& model, const QuadratureSpec& quad, double t,
                                Picture picture) {
  const Geometry g = detect_geometry(model);
  if (model.magnets.size() != 2) raise(ErrorCode::UnsupportedGeometry, "two magnets are required");
  if (picture == Picture::Schrodinger && model.system.omega != 0.0)
    raise(ErrorCode::UnsupportedGeometry, "Schrodinger-picture gap needs omega = 0");
  if (picture == Picture::Interaction && g != Geometry::ZZ)
    raise(ErrorCode::UnsupportedGeometry, "interaction-picture gap needs the z-z layout");
  auto gen = [&](Presence p) {
    const AveragedAffine a = averaged_affine(model, p, quad, t);
    return generator_from_affine(a.d, a.d_dot);
  };
  AdditivityResult r;
  r.l1 = gen(Presence::First);
  r.l2 = gen(Presence::Second);
  r.l12 = gen(Presence::Both);
  r.gap = (r.l12 - r.l1 - r.l2).norm();
  return r;
}

ScalingResult weak_coupling_scaling(const MagnetModel& model, const QuadratureSpec& quad, double t,
                                    const std::vector<double>& couplings) {
  const Geometry g = detect_geometry(model);
  if (model.magnets.size() != 2 || (g == Geometry::ZZ && model.system.omega == 0.0))
    raise(ErrorCode::UnsupportedGeometry, "scaling needs a non-commuting two-magnet layout");
  const Picture picture = g == Geometry::ZX ? Picture::Schrodinger : Picture::Interaction;
  ScalingResult out;
  std::vector<double> lx, ly;
  for (double c : couplings) {
    MagnetModel m = model;
    m.magnets[0].coupling = c;
    m.magnets[1].coupling = c;
    const double gap = additivity_gap(m, quad, t, picture).gap;
    out.points.emplace_back(c, gap);
    if (c > 0.0 && gap > 0.0) {
      lx.push_back(std::log(c));
      ly.push_back(std::log(gap));
    }
  }
  if (lx.size() < 2) {
    out.exponent = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

double magnet_dephasing_rate(const MagnetModel& model, Presence which, const QuadratureSpec& quad,
                             double t) {
  const AveragedAffine a = averaged_affine(model, which, quad, t);
  return -generator_from_affine(a.d, a.d_dot)(0, 0);
}

MapTrajectory magnet_trajectory(const MagnetModel& model, Presence which,
                                const QuadratureSpec& quad, const std::vector<double>& grid) {
  validate_grid(grid);
  MapTrajectory out;
  out.grid = grid;
  out.meta.method = "magnet-quadrature";
  out.meta.tolerance = quad.tolerance;
  for (double t : grid) {
    const AveragedAffine a = averaged_affine(model, which, quad, t);
    out.maps.push_back(from_bloch_affine({a.d, Vec3::Zero()}));
    out.derivatives.push_back(generator_from_bloch(a.d_dot));
  }
  return out;
}

GeneratorFamily magnet_generator_family(const MagnetModel& model, Presence which,
                                        const QuadratureSpec& quad) {
  make_setup(model, which);
  auto eval = [model, which, quad](double t) {
    const AveragedAffine a = averaged_affine(model, which, quad, t);
    return generator_from_bloch(generator_from_affine(a.d, a.d_dot));
  };
  return GeneratorFamily(eval, FamilyLabel::MagnetDerived);
}

AveragedAffine discrete_dephasing_affine(int spins, double g, double t) {
  if (spins < 1 || spins > 20) raise(ErrorCode::InvalidArgument, "spin count must lie in [1, 20]");
  AveragedAffine out;
  out.d = Mat3::Zero();
  double binom = 1.0;
  const double norm = std::ldexp(1.0, -spins);
  for (int k = 0; k <= spins; ++k) {
    const double m = 2.0 * k - spins;
    const RotationSample r = precession(Vec3(0.0, 0.0, g * m), t);
    out.d += binom * norm * r.r;
    out.d_dot += binom * norm * r.r_dot;
    binom = binom * (spins - k) / (k + 1);
  }
  out.nodes = static_cast<std::size_t>(spins + 1);
  out.exact = true;
  return out;
}

}  // namespace qmelab
