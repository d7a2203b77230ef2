#include "qmelab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmelab/errors.hpp"
#include "qmelab/parallel.hpp"
#include "qmelab/quadrature.hpp"

namespace qmelab {

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) raise(ErrorCode::GridError, "empty grid");
  if (grid.front() != 0.0) raise(ErrorCode::GridError, "grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) raise(ErrorCode::GridError, "grid must increase strictly");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> out(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = a + h * static_cast<double>(k);
  out.back() = b;
  return out;
}

namespace {

SuperOp eval_checked(const GeneratorFamily& f, double t) {
  try {
    return f(t);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularRate) raise(ErrorCode::PoleOnPath, e.what());
    throw;
  }
}

std::vector<SuperOp> rk4_run(const GeneratorFamily& f, const std::vector<double>& grid, double h) {
  std::vector<SuperOp> maps;
  maps.reserve(grid.size());
  Mat4 lam = Mat4::Identity();
  maps.emplace_back(lam);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double t0 = grid[k - 1];
    const double span = grid[k] - t0;
    const int n = std::max(1, static_cast<int>(std::ceil(span / h - 1e-9)));
    const double sub = span / n;
    for (int j = 0; j < n; ++j) {
      const double t = t0 + sub * j;
      const Mat4 l0 = eval_checked(f, t).matrix();
      const Mat4 lm = eval_checked(f, t + 0.5 * sub).matrix();
      const Mat4 l1 = eval_checked(f, j + 1 == n ? grid[k] : t + sub).matrix();
      const Mat4 k1 = l0 * lam;
      const Mat4 k2 = lm * (lam + 0.5 * sub * k1);
      const Mat4 k3 = lm * (lam + 0.5 * sub * k2);
      const Mat4 k4 = l1 * (lam + sub * k3);
      lam += (sub / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      double drift = std::abs(lam(0, 0) - 1.0);
      for (int c = 1; c < 4; ++c) drift = std::max(drift, std::abs(lam(0, c)));
      if (drift > 1e-12)
        raise(ErrorCode::NotAGenerator, "generator does not preserve the trace");
      lam.row(0) << 1.0, 0.0, 0.0, 0.0;
    }
    maps.emplace_back(lam);
  }
  return maps;
}

double frob(const SuperOp& a, const SuperOp& b) { return (a.matrix() - b.matrix()).norm(); }

}  // namespace

MapTrajectory integrate_qme(const GeneratorFamily& family, const std::vector<double>& grid,
                            const StepControl& control) {
  validate_grid(grid);
  if (const auto pole = family.first_pole(grid.front(), grid.back()))
    raise(ErrorCode::PoleOnPath, "rate pole at t=" + std::to_string(*pole));

  MapTrajectory out;
  out.grid = grid;
  out.meta.method = "rk4-fixed-substep";
  out.meta.tolerance = control.tolerance;
  if (grid.size() == 1) {
    out.maps = {SuperOp::identity()};
    return out;
  }
  double h = control.initial_substep;
  std::vector<SuperOp> coarse = rk4_run(family, grid, h);
  for (int r = 0;; ++r) {
    std::vector<SuperOp> fine = rk4_run(family, grid, 0.5 * h);
    const double delta = frob(coarse.back(), fine.back());
    h *= 0.5;
    if (delta < control.tolerance || r + 1 >= control.max_refinements) {
      out.maps = std::move(fine);
      out.meta.substep = h;
      out.meta.halving_delta = delta;
      out.meta.refinements = r + 1;
      break;
    }
    coarse = std::move(fine);
  }
  return out;
}

SuperOp dyson_partial_sum(const GeneratorFamily& family, double t, int order) {
  if (order < 0 || order > 20) raise(ErrorCode::InvalidArgument, "order must lie in [0, 20]");
  if (t < 0.0) raise(ErrorCode::InvalidArgument, "time must be non-negative");
  const auto probe = linspace(0.0, t, 21);
  const double gap = commutativity_gap(family, family, probe);
  if (gap >= 1e-10) raise(ErrorCode::NonCommutativeFamily, "self-commutator " + std::to_string(gap));
  const Mat4 integral = adaptive_simpson<Mat4>(
      [&](double s) -> Mat4 { return eval_checked(family, s).matrix(); }, 0.0, t, 1e-13,
      [](const Mat4& m) { return m.norm(); });
  Mat4 term = Mat4::Identity();
  Mat4 sum = Mat4::Identity();
  for (int i = 1; i <= order; ++i) {
    term = (term * integral / static_cast<double>(i)).eval();
    sum += term;
  }
  return SuperOp(sum);
}

std::vector<SuperOp> extract_generator_samples(const MapTrajectory& traj, DerivativeMode mode) {
  const auto& g = traj.grid;
  const std::size_t n = g.size();
  if (traj.maps.size() != n) raise(ErrorCode::GridError, "maps and grid differ in length");
  std::vector<Mat4> dot(n);
  if (mode == DerivativeMode::Analytic) {
    if (traj.derivatives.size() != n)
      raise(ErrorCode::InvalidArgument, "trajectory carries no analytic derivatives");
    for (std::size_t k = 0; k < n; ++k) dot[k] = traj.derivatives[k].matrix();
  } else {
    if (n < 3) raise(ErrorCode::GridError, "central differences need at least 3 grid points");
    auto m = [&](std::size_t k) -> const Mat4& { return traj.maps[k].matrix(); };
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h1 = g[k] - g[k - 1], h2 = g[k + 1] - g[k];
      dot[k] = (-h2 / (h1 * (h1 + h2))) * m(k - 1) + ((h2 - h1) / (h1 * h2)) * m(k) +
               (h1 / (h2 * (h1 + h2))) * m(k + 1);
    }
    {
      const double h1 = g[1] - g[0], h2 = g[2] - g[1];
      dot[0] = (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) * m(0) + ((h1 + h2) / (h1 * h2)) * m(1) -
               (h1 / (h2 * (h1 + h2))) * m(2);
    }
    {
      const std::size_t e = n - 1;
      const double h1 = g[e - 1] - g[e - 2], h2 = g[e] - g[e - 1];
      dot[e] = (h2 / (h1 * (h1 + h2))) * m(e - 2) - ((h1 + h2) / (h1 * h2)) * m(e - 1) +
               ((2.0 * h2 + h1) / (h2 * (h1 + h2))) * m(e);
    }
  }
  std::vector<SuperOp> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Inverse inv = invert(traj.maps[k]);
    out.emplace_back(dot[k] * inv.inverse.matrix());
  }
  return out;
}

GeneratorFamily extract_generator(const MapTrajectory& traj, DerivativeMode mode) {
  auto samples = extract_generator_samples(traj, mode);
  auto grid = traj.grid;
  auto eval = [grid, samples](double t) -> SuperOp {
    if (t <= grid.front()) return samples.front();
    if (t >= grid.back()) return samples.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - grid.begin());
    const double w = (t - grid[k - 1]) / (grid[k] - grid[k - 1]);
    return SuperOp((1.0 - w) * samples[k - 1].matrix() + w * samples[k].matrix());
  };
  return GeneratorFamily(eval, FamilyLabel::Extracted);
}

std::array<double, 4> diagonal_affine_cj_eigenvalues(double a1, double a2, double a3, double v) {
  const double rp = std::hypot(v, a1 + a2);
  const double rm = std::hypot(v, a1 - a2);
  std::array<double, 4> out{0.5 * (1.0 + a3 + rp), 0.5 * (1.0 + a3 - rp), 0.5 * (1.0 - a3 + rm),
                            0.5 * (1.0 - a3 - rm)};
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void check_case(double alpha, double beta, const AdditionParams& p, double t) {
  if (!(p.omega > 0.0) || !(p.gamma >= 0.0) || !(alpha >= 0.0) || !(beta >= 0.0) || !(t >= 0.0) ||
      !std::isfinite(p.omega) || !std::isfinite(p.gamma) || !std::isfinite(alpha) ||
      !std::isfinite(beta) || !std::isfinite(t))
    raise(ErrorCode::BadCaseParams, "need omega > 0 and non-negative gamma, alpha, beta, t");
}

}  // namespace

AdditionResult closed_form_addition_case(AdditionCase c, double alpha, double beta,
                                         const AdditionParams& p, double t) {
  check_case(alpha, beta, p, t);
  const double w = p.omega, g = p.gamma;
  const double cw = std::cos(w * t);
  double a1, a2, a3, v, integral;
  if (c == AdditionCase::A) {
    const double kappa = beta * g;
    integral = adaptive_simpson(
        [&](double s) { return std::exp(kappa * s - 2.0 * alpha * std::cos(w * s) / w); }, 0.0, t,
        1e-10);
    const double deph = 2.0 * alpha * (1.0 - cw) / w;
    a1 = std::exp(-0.5 * kappa * t);
    a2 = std::exp(-deph - 0.5 * kappa * t);
    a3 = std::exp(-deph - kappa * t);
    v = a3 * kappa * std::exp(2.0 * alpha / w) * integral;
  } else {
    const double deph = 2.0 * alpha * g;
    integral = adaptive_simpson(
        [&](double s) { return std::sin(w * s) * std::exp(deph * s - beta * std::cos(w * s) / w); },
        0.0, t, 1e-10);
    const double damp = beta * (1.0 - cw) / w;
    a1 = std::exp(-0.5 * damp);
    a2 = std::exp(-deph * t - 0.5 * damp);
    a3 = std::exp(-deph * t - damp);
    v = a3 * beta * std::exp(beta / w) * integral;
  }
  AdditionResult r;
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = a1;
  m(2, 2) = a2;
  m(3, 3) = a3;
  m(3, 0) = v;
  r.map = SuperOp(m);
  r.integral = integral;
  r.eigenvalues = diagonal_affine_cj_eigenvalues(a1, a2, a3, v);
  return r;
}

GeneratorFamily addition_case_family(AdditionCase c, double alpha, double beta,
                                     const AdditionParams& p) {
  check_case(alpha, beta, p, 0.0);
  const Vec3 x(1.0, 0.0, 0.0);
  const RateFunction sinus(rate::Sinusoid{1.0, p.omega});
  const RateFunction flat = RateFunction::constant(p.gamma);
  if (c == AdditionCase::A)
    return combine(alpha, dephasing_generator(x, sinus), beta, amplitude_damping_generator(flat));
  return combine(alpha, dephasing_generator(x, flat), beta, amplitude_damping_generator(sinus));
}

double jc_coherence_factor(double gamma0, double width, double t) {
  const double d2 = width * width - 2.0 * gamma0 * width;
  const double damp = std::exp(-0.5 * width * t);
  if (d2 < 0.0) {
    const double w = std::sqrt(-d2);
    return damp * (std::cos(0.5 * w * t) + (width / w) * std::sin(0.5 * w * t));
  }
  if (d2 > 0.0) {
    const double d = std::sqrt(d2);
    return damp * (std::cosh(0.5 * d * t) + (width / d) * std::sinh(0.5 * d * t));
  }
  return damp * (1.0 + 0.5 * width * t);
}

SuperOp jc_resonant_map(double gamma0, double width, double t) {
  const double g = jc_coherence_factor(gamma0, width, t);
  BlochAffine a;
  a.d = Vec3(g, g, g * g).asDiagonal();
  a.v = Vec3(0.0, 0.0, 1.0 - g * g);
  return from_bloch_affine(a);
}

double rescaled_jc_first_singularity() {
  return std::sqrt(2.0) * (std::numbers::pi - std::atan(std::sqrt(2.0)));
}

RescaledResult rescaled_jc_cj_eigenvalues(double alpha, double t) {
  if (!(alpha >= 0.0)) raise(ErrorCode::InvalidArgument, "alpha must be non-negative");
  const double r2 = std::sqrt(2.0);
  // base / sqrt(2), so that the t = 0 value is exactly 1.
  const double base = std::cos(t / r2) + std::sin(t / r2) / r2;
  const double mag = std::exp(-alpha * t) * std::pow(base * base, alpha);
  const bool negative = base < 0.0;
  const std::complex<double> p =
      negative ? std::polar(mag, std::numbers::pi * 2.0 * alpha) : std::complex<double>(mag, 0.0);
  const std::complex<double> lp = 1.0 + p, lm = 1.0 - p;
  const bool integral_alpha = std::abs(alpha - std::round(alpha)) < 1e-12;
  auto witness = [&](WitnessReason why) {
    return NonPhysicalWitness{t, alpha, lp, lm, why};
  };
  if (negative && !integral_alpha) return witness(WitnessReason::NonRealCoherence);
  if (std::abs(p.imag()) > 1e-12) return witness(WitnessReason::NonRealEigenvalue);
  if (lp.real() < -1e-12 || lm.real() < -1e-12) return witness(WitnessReason::NegativeEigenvalue);
  return RescaledEigenpair{lp.real(), lm.real()};
}

SuperOp free_evolution(const Mat2c& hs, double t) {
  if ((hs - hs.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    raise(ErrorCode::NotHermitian, "system Hamiltonian must be Hermitian");
  return matrix_exp(commutator_superop(hs), t);
}

GeneratorFamily picture_transform(const GeneratorFamily& family, const Mat2c& hs,
                                  PictureDirection dir) {
  free_evolution(hs, 0.0);
  const SuperOp k = commutator_superop(hs);
  const double sign = dir == PictureDirection::ToInteraction ? -1.0 : 1.0;
  auto eval = [family, k, sign](double t) {
    const SuperOp u = matrix_exp(k, sign * t);
    const SuperOp uinv = matrix_exp(k, -sign * t);
    return sign * k + u * family(t) * uinv;
  };
  return GeneratorFamily(eval, family.label(), family.rates(), family.axis());
}

MapTrajectory picture_transform(const MapTrajectory& traj, const Mat2c& hs, PictureDirection dir) {
  free_evolution(hs, 0.0);
  const SuperOp k = commutator_superop(hs);
  const bool to_ip = dir == PictureDirection::ToInteraction;
  MapTrajectory out = traj;
  for (std::size_t i = 0; i < traj.grid.size(); ++i) {
    const double t = traj.grid[i];
    const SuperOp u = matrix_exp(k, to_ip ? -t : t);
    out.maps[i] = u * traj.maps[i];
    if (!traj.derivatives.empty()) {
      const SuperOp& d = traj.derivatives[i];
      out.derivatives[i] = to_ip ? u * (d - k * traj.maps[i]) : u * (k * traj.maps[i] + d);
    }
  }
  return out;
}

SpectrumTrajectory cj_spectrum(const MapTrajectory& traj, unsigned threads) {
  SpectrumTrajectory s;
  s.grid = traj.grid;
  s.eigvals.resize(traj.maps.size());
  parallel_for(traj.maps.size(), threads,
               [&](std::size_t k) { s.eigvals[k] = cj_matrix(traj.maps[k]).eigenvalues(); });
  s.running_min.resize(s.eigvals.size());
  s.min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.eigvals.size(); ++k) {
    const double m = s.eigvals[k][0];
    if (m < s.min_eig) {
      s.min_eig = m;
      s.argmin = s.grid[k];
    }
    s.running_min[k] = s.min_eig;
    if (!s.first_violation && m < -kPsdTolerance) s.first_violation = s.grid[k];
  }
  return s;
}

}  // namespace qmelab
