#include "qmelab/generators.hpp"

#include <algorithm>
#include <cmath>

#include "qmelab/errors.hpp"

namespace qmelab {

std::string to_string(FamilyLabel label) {
  switch (label) {
    case FamilyLabel::RU: return "RU";
    case FamilyLabel::PC: return "PC";
    case FamilyLabel::Dephasing: return "Dephasing";
    case FamilyLabel::AmplitudeDamping: return "AmplitudeDamping";
    case FamilyLabel::Combined: return "Combined";
    case FamilyLabel::MagnetDerived: return "MagnetDerived";
    case FamilyLabel::Extracted: return "Extracted";
  }
  return "Unknown";
}

GeneratorFamily::GeneratorFamily(Eval eval, FamilyLabel label, std::vector<RateFunction> rates,
                                 std::optional<Vec3> axis)
    : eval_(std::move(eval)), label_(label), rates_(std::move(rates)), axis_(std::move(axis)) {}

std::optional<double> GeneratorFamily::first_pole(double t0, double t1) const {
  std::optional<double> best;
  for (const auto& r : rates_) {
    const auto p = r.first_pole(t0, t1);
    if (p && (!best || *p < *best)) best = p;
  }
  return best;
}

GeneratorFamily ru_generator(RateFunction gx, RateFunction gy, RateFunction gz) {
  auto eval = [gx, gy, gz](double t) {
    const double x = gx(t), y = gy(t), z = gz(t);
    return SuperOp::diagonal(0.0, -2.0 * (y + z), -2.0 * (x + z), -2.0 * (x + y));
  };
  return GeneratorFamily(eval, FamilyLabel::RU, {gx, gy, gz});
}

namespace {

SuperOp pc_matrix(double gp, double gm, double gz) {
  Mat4 m = Mat4::Zero();
  m(1, 1) = m(2, 2) = -0.5 * (gp + gm) - 2.0 * gz;
  m(3, 3) = -(gp + gm);
  m(3, 0) = gm - gp;
  return SuperOp(m);
}

}  // namespace

GeneratorFamily pc_generator(RateFunction gplus, RateFunction gminus, RateFunction gz,
                             TransitionNorm norm) {
  const double k = norm == TransitionNorm::Half ? 1.0 : 2.0;
  auto eval = [gplus, gminus, gz, k](double t) {
    return pc_matrix(k * gplus(t), k * gminus(t), gz(t));
  };
  return GeneratorFamily(eval, FamilyLabel::PC, {gplus, gminus, gz});
}

GeneratorFamily dephasing_generator(const Vec3& axis, RateFunction gamma) {
  if (std::abs(axis.norm() - 1.0) > 1e-12) raise(ErrorCode::BadAxis, "axis must have unit norm");
  const Mat3 perp = Mat3::Identity() - axis * axis.transpose();
  auto eval = [gamma, perp](double t) { return generator_from_bloch(-2.0 * gamma(t) * perp); };
  return GeneratorFamily(eval, FamilyLabel::Dephasing, {gamma}, axis);
}

GeneratorFamily amplitude_damping_generator(RateFunction gamma) {
  auto eval = [gamma](double t) { return pc_matrix(0.0, gamma(t), 0.0); };
  return GeneratorFamily(eval, FamilyLabel::AmplitudeDamping, {gamma});
}

GeneratorFamily combine(double alpha, const GeneratorFamily& f1, double beta,
                        const GeneratorFamily& f2) {
  if (alpha < 0.0 || beta < 0.0) raise(ErrorCode::NegativeWeight, "weights must be non-negative");
  auto eval = [alpha, beta, f1, f2](double t) {
    SuperOp out = SuperOp::zero();
    if (alpha != 0.0) out += alpha * f1(t);
    if (beta != 0.0) out += beta * f2(t);
    return out;
  };
  std::vector<RateFunction> rates = f1.rates();
  rates.insert(rates.end(), f2.rates().begin(), f2.rates().end());
  return GeneratorFamily(eval, FamilyLabel::Combined, std::move(rates));
}

double commutativity_gap(const GeneratorFamily& f1, const GeneratorFamily& f2,
                         const std::vector<double>& grid) {
  std::vector<Mat4> a, b;
  a.reserve(grid.size());
  b.reserve(grid.size());
  for (double t : grid) {
    a.push_back(f1(t).matrix());
    b.push_back(f2(t).matrix());
  }
  double gap = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) gap = std::max(gap, (x * y - y * x).norm());
  return gap;
}

GKSLDecomposition gksl_decompose(const SuperOp& g) {
  if (!g.is_tp_generator(1e-10)) raise(ErrorCode::NotAGenerator, "row 0 must vanish");
  const Mat4c omega = choi_unchecked(g);
  const auto& mu = pauli_basis();
  std::array<Eigen::Vector4cd, 4> vec;
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) vec[k](2 * a + b) = mu[k](a, b);

  Mat4c c;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) c(k, l) = vec[k].dot(omega * vec[l]);

  GKSLDecomposition out;
  out.d = c.block<3, 3>(1, 1);
  out.d = 0.5 * (out.d + out.d.adjoint()).eval();
  Mat2c f = Mat2c::Zero();
  for (int i = 1; i < 4; ++i) f += c(i, 0) * mu[i];
  f /= std::sqrt(2.0);
  const cplx im(0.0, 1.0);
  out.h = 0.5 * im * (f - f.adjoint());
  return out;
}

SuperOp gksl_rebuild(const GKSLDecomposition& dec) {
  const auto& mu = pauli_basis();
  const cplx im(0.0, 1.0);
  return superop_from_action([&](const Mat2c& rho) -> Mat2c {
    Mat2c out = -im * (dec.h * rho - rho * dec.h);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const cplx dij = dec.d(i, j);
        if (dij == cplx(0.0)) continue;
        const Mat2c& fi = mu[i + 1];
        const Mat2c& fj = mu[j + 1];
        const Mat2c fjfi = fj.adjoint() * fi;
        out += dij * (fi * rho * fj.adjoint() - 0.5 * (fjfi * rho + rho * fjfi));
      }
    }
    return out;
  });
}

}  // namespace qmelab
