#include "qmelab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmelab/dynamics.hpp"
#include "qmelab/errors.hpp"
#include "qmelab/parallel.hpp"

namespace qmelab {

std::string to_string(DynamicsClass c) {
  switch (c) {
    case DynamicsClass::Semigroup: return "Semigroup";
    case DynamicsClass::CPDivisible: return "CPDivisible";
    case DynamicsClass::SSC: return "SSC";
    case DynamicsClass::SemigroupSimulable: return "SemigroupSimulable";
    case DynamicsClass::PhysicalOnly: return "PhysicalOnly";
    case DynamicsClass::Unphysical: return "Unphysical";
    case DynamicsClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::Kossakowski: return "kossakowski";
    case WitnessKind::CumulativeKossakowski: return "cumulative-kossakowski";
    case WitnessKind::Choi: return "choi";
    case WitnessKind::Logarithm: return "logarithm";
  }
  return "unknown";
}

namespace {

double min_eig3(const Mat3c& d) {
  Eigen::SelfAdjointEigenSolver<Mat3c> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Returns the smallest Kossakowski eigenvalue of log(map), or throws.
double log_kossakowski_min(const SuperOp& map) {
  Mat4 z = matrix_log(map).matrix();
  z.row(0).setZero();
  return min_eig3(gksl_decompose(SuperOp(z)).d);
}

}  // namespace

ClassificationReport classify(const GeneratorFamily& family, const std::vector<double>& grid,
                              bool commutative_hint, const ClassifyOptions& options) {
  validate_grid(grid);
  const std::size_t n = grid.size();
  ClassificationReport rep;
  rep.commutative_hint = commutative_hint;
  rep.flags.resize(n);

  std::vector<Mat4> gens(n);
  std::vector<Mat3c> ds(n);
  parallel_for(n, options.threads, [&](std::size_t k) {
    gens[k] = family(grid[k]).matrix();
    ds[k] = gksl_decompose(SuperOp(gens[k])).d;
  });

  std::size_t counts[4] = {0, 0, 0, 0};
  auto add_witness = [&](double t, double e, WitnessKind kind) {
    auto& c = counts[static_cast<int>(kind)];
    if (c++ < options.max_witnesses) rep.witnesses.push_back({t, e, kind});
  };

  Mat3c gamma = Mat3c::Zero();
  bool all_gksl = true, all_gamma = true;
  double drift = 0.0;
  const double scale = std::max(1.0, gens[0].norm());
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) gamma += (0.5 * (grid[k] - grid[k - 1])) * (ds[k] + ds[k - 1]);
    TimeFlags& f = rep.flags[k];
    f.t = grid[k];
    f.min_d_eig = min_eig3(ds[k]);
    f.min_gamma_eig = min_eig3(0.5 * (gamma + gamma.adjoint()));
    f.gksl_at_t = f.min_d_eig >= -kPsdTolerance;
    f.gamma_psd_at_t = f.min_gamma_eig >= -kPsdTolerance;
    if (!f.gksl_at_t) add_witness(f.t, f.min_d_eig, WitnessKind::Kossakowski);
    if (!f.gamma_psd_at_t) add_witness(f.t, f.min_gamma_eig, WitnessKind::CumulativeKossakowski);
    all_gksl = all_gksl && f.gksl_at_t;
    all_gamma = all_gamma && f.gamma_psd_at_t;
    drift = std::max(drift, (gens[k] - gens[0]).norm());
  }
  rep.constant_generator = drift <= 1e-12 * scale;

  if (all_gksl) {
    rep.summary = rep.constant_generator ? DynamicsClass::Semigroup : DynamicsClass::CPDivisible;
    return rep;
  }

  const MapTrajectory traj = integrate_qme(family, grid);
  const SpectrumTrajectory spec = cj_spectrum(traj, options.threads);
  rep.min_cj_eig = spec.min_eig;
  for (std::size_t k = 0; k < n; ++k)
    if (spec.eigvals[k][0] < -kPsdTolerance)
      add_witness(grid[k], spec.eigvals[k][0], WitnessKind::Choi);
  if (spec.first_violation) {
    rep.summary = DynamicsClass::Unphysical;
    return rep;
  }

  if (commutative_hint) {
    rep.summary = all_gamma ? DynamicsClass::SSC : DynamicsClass::PhysicalOnly;
    return rep;
  }

  std::vector<double> log_min(n, 0.0);
  std::vector<char> log_ok(n, 1);
  parallel_for(n, options.threads, [&](std::size_t k) {
    if (k == 0) return;
    try {
      log_min[k] = log_kossakowski_min(traj.maps[k]);
      log_ok[k] = log_min[k] >= -kPsdTolerance;
    } catch (const Error&) {
      log_ok[k] = 0;
      log_min[k] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  bool certified = true;
  for (std::size_t k = 1; k < n; ++k) {
    if (!log_ok[k]) {
      certified = false;
      add_witness(grid[k], log_min[k], WitnessKind::Logarithm);
    }
  }
  rep.summary = certified ? DynamicsClass::SemigroupSimulable : DynamicsClass::Unknown;
  return rep;
}

bool ru_physicality(double gx, double gy, double gz) {
  const double mx = std::exp(-2.0 * (gy + gz));
  const double my = std::exp(-2.0 * (gx + gz));
  const double mz = std::exp(-2.0 * (gx + gy));
  const double tol = 1e-12;
  return mx + my <= 1.0 + mz + tol && my + mz <= 1.0 + mx + tol && mz + mx <= 1.0 + my + tol;
}

bool pc_physicality(const PcRateHistory& h, double t, TransitionNorm norm) {
  const auto& g = h.grid;
  const std::size_t n = g.size();
  if (n == 0 || h.plus.size() != n || h.minus.size() != n || h.z.size() != n)
    raise(ErrorCode::GridError, "rate histories must match the grid");
  if (g.front() != 0.0) raise(ErrorCode::GridError, "grid must start at 0");
  for (std::size_t k = 1; k < n; ++k)
    if (!(g[k] > g[k - 1])) raise(ErrorCode::GridError, "grid must increase strictly");
  if (t < 0.0 || t > g.back() * (1.0 + 1e-12)) raise(ErrorCode::GridError, "grid does not cover t");

  const double s = norm == TransitionNorm::Half ? 1.0 : 2.0;
  auto sum_rate = [&](std::size_t k) { return s * (h.plus[k] + h.minus[k]); };
  auto diff_rate = [&](std::size_t k) { return s * (h.plus[k] - h.minus[k]); };

  // Rates are averaged per interval; kappa then follows its linear ODE exactly.
  double delta = 0.0, gz = 0.0, kappa = 0.0;
  for (std::size_t k = 1; k < n && g[k - 1] < t; ++k) {
    const double a = g[k - 1];
    const double b = std::min(g[k], t);
    const double w = (b - a) / (g[k] - a);
    const double hstep = b - a;
    const double sr = 0.5 * (sum_rate(k - 1) + (1.0 - w) * sum_rate(k - 1) + w * sum_rate(k));
    const double dr = 0.5 * (diff_rate(k - 1) + (1.0 - w) * diff_rate(k - 1) + w * diff_rate(k));
    const double zr = 0.5 * (h.z[k - 1] + (1.0 - w) * h.z[k - 1] + w * h.z[k]);
    const double x = sr * hstep;
    const double phi = std::abs(x) < 1e-12 ? 1.0 : -std::expm1(-x) / x;
    kappa = std::exp(-x) * kappa + dr * hstep * phi;
    delta += x;
    gz += zr * hstep;
  }
  const double eta_par = std::exp(-delta);
  const double eta_perp = std::exp(-0.5 * (delta + 4.0 * gz));
  const double tol = 1e-12;
  return eta_par + kappa <= 1.0 + tol && eta_par - kappa <= 1.0 + tol &&
         (1.0 + eta_par) * (1.0 + eta_par) + tol >= 4.0 * eta_perp * eta_perp + kappa * kappa;
}

}  // namespace qmelab
