#include "qmelab/superop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qmelab/errors.hpp"

namespace qmelab {

namespace {

std::array<Mat2c, 4> make_paulis() {
  std::array<Mat2c, 4> p;
  const cplx i(0.0, 1.0);
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, -i, i, 0;
  p[3] << 1, 0, 0, -1;
  return p;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

const std::array<Mat2c, 4>& pauli_matrices() {
  static const std::array<Mat2c, 4> p = make_paulis();
  return p;
}

const std::array<Mat2c, 4>& pauli_basis() {
  static const std::array<Mat2c, 4> mu = [] {
    auto p = make_paulis();
    for (auto& m : p) m /= std::sqrt(2.0);
    return p;
  }();
  return mu;
}

QubitState QubitState::from_density(const Mat2c& rho) {
  const auto& s = pauli_matrices();
  QubitState q;
  for (int k = 0; k < 3; ++k) q.bloch(k) = (rho * s[k + 1]).trace().real();
  return q;
}

Mat2c QubitState::density() const {
  const auto& s = pauli_matrices();
  Mat2c rho = s[0];
  for (int k = 0; k < 3; ++k) rho += bloch(k) * s[k + 1];
  return 0.5 * rho;
}

SuperOp SuperOp::diagonal(double d0, double d1, double d2, double d3) {
  return SuperOp(Vec4(d0, d1, d2, d3).asDiagonal().toDenseMatrix());
}

bool SuperOp::is_tp_map(double tol) const {
  if (std::abs(m_(0, 0) - 1.0) > tol) return false;
  for (int j = 1; j < 4; ++j)
    if (std::abs(m_(0, j)) > tol) return false;
  return true;
}

bool SuperOp::is_tp_generator(double tol) const {
  for (int j = 0; j < 4; ++j)
    if (std::abs(m_(0, j)) > tol) return false;
  return true;
}

Mat2c SuperOp::apply(const Mat2c& rho) const {
  const auto& mu = pauli_basis();
  Eigen::Vector4cd x;
  for (int j = 0; j < 4; ++j) x(j) = (mu[j] * rho).trace();
  Eigen::Vector4cd y = m_.cast<cplx>() * x;
  Mat2c out = Mat2c::Zero();
  for (int i = 0; i < 4; ++i) out += y(i) * mu[i];
  return out;
}

QubitState SuperOp::apply(const QubitState& s) const {
  QubitState out;
  out.bloch = m_.block<3, 3>(1, 1) * s.bloch + m_.block<3, 1>(1, 0);
  return out;
}

SuperOp superop_from_action(const Action& action) {
  const auto& mu = pauli_basis();
  Mat4 m;
  double residue = 0.0;
  for (int j = 0; j < 4; ++j) {
    const Mat2c out = action(mu[j]);
    for (int i = 0; i < 4; ++i) {
      const cplx v = (mu[i] * out).trace();
      m(i, j) = v.real();
      residue = std::max(residue, std::abs(v.imag()));
    }
  }
  if (residue > 1e-10)
    raise(ErrorCode::NonHermiticityPreserving, "imaginary residue " + fmt(residue));
  return SuperOp(m);
}

SuperOp compose(const SuperOp& a, const SuperOp& b) { return a * b; }

Inverse invert(const SuperOp& a, double cond_limit) {
  Eigen::JacobiSVD<Mat4> svd(a.matrix());
  const auto& s = svd.singularValues();
  const double cond =
      s(3) > 0.0 ? s(0) / s(3) : std::numeric_limits<double>::infinity();
  if (!(cond <= cond_limit))
    raise(ErrorCode::SingularMap, "condition number " + fmt(cond));
  return {SuperOp(a.matrix().fullPivLu().inverse()), cond};
}

Mat4c choi_unchecked(const SuperOp& op) {
  Mat4c omega = Mat4c::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat2c e = Mat2c::Zero();
      e(i, j) = 1.0;
      const Mat2c out = op.apply(e);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) omega(2 * a + i, 2 * b + j) = out(a, b);
    }
  }
  return omega;
}

CJMatrix cj_matrix(const SuperOp& map) {
  if (!map.is_tp_map(1e-10)) raise(ErrorCode::NotTracePreserving, "row 0 is not (1,0,0,0)");
  return CJMatrix(choi_unchecked(map));
}

Mat2c CJMatrix::partial_trace_output() const {
  Mat2c r = Mat2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a) r(i, j) += omega_(2 * a + i, 2 * a + j);
  return r;
}

std::array<double, 4> CJMatrix::eigenvalues() const { return hermitian_eigenvalues(omega_); }

std::array<double, 4> hermitian_eigenvalues(const Mat4c& h) {
  const double residue = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (residue > 1e-10) raise(ErrorCode::NotHermitian, "residue " + fmt(residue));
  const Mat4c sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(sym, Eigen::EigenvaluesOnly);
  std::array<double, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = es.eigenvalues()(k);
  std::sort(out.begin(), out.end());
  return out;
}

SuperOp matrix_exp(const SuperOp& g, double t) {
  const Mat4 a = t * g.matrix();
  return SuperOp(a.exp());
}

SuperOp matrix_log(const SuperOp& map) {
  Eigen::EigenSolver<Mat4> es(map.matrix());
  if (es.info() != Eigen::Success) raise(ErrorCode::Defective, "eigendecomposition failed");
  const Eigen::Vector4cd lam = es.eigenvalues();
  for (int k = 0; k < 4; ++k) {
    const double dist = lam(k).real() <= 0.0 ? std::abs(lam(k).imag()) : std::abs(lam(k));
    if (dist < 1e-10)
      raise(ErrorCode::BranchAmbiguity, "eigenvalue near the closed negative real axis");
  }
  const Mat4c v = es.eigenvectors();
  Eigen::JacobiSVD<Mat4c> svd(v);
  const auto& s = svd.singularValues();
  const double cond = s(3) > 0.0 ? s(0) / s(3) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e10)) raise(ErrorCode::Defective, "eigenvector condition " + fmt(cond));
  Eigen::Vector4cd loglam;
  for (int k = 0; k < 4; ++k) loglam(k) = std::log(lam(k));
  const Mat4c z = v * loglam.asDiagonal() * v.inverse();
  return SuperOp(z.real());
}

BlochAffine to_bloch_affine(const SuperOp& map) {
  if (!map.is_tp_map(1e-10)) raise(ErrorCode::NotTracePreserving, "row 0 is not (1,0,0,0)");
  return {map.matrix().block<3, 3>(1, 1), map.matrix().block<3, 1>(1, 0)};
}

SuperOp from_bloch_affine(const BlochAffine& a) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0;
  m.block<3, 3>(1, 1) = a.d;
  m.block<3, 1>(1, 0) = a.v;
  return SuperOp(m);
}

SuperOp generator_from_bloch(const Mat3& d, const Vec3& v) {
  Mat4 m = Mat4::Zero();
  m.block<3, 3>(1, 1) = d;
  m.block<3, 1>(1, 0) = v;
  return SuperOp(m);
}

SuperOp commutator_superop(const Mat2c& h) {
  const cplx i(0.0, 1.0);
  return superop_from_action([&](const Mat2c& rho) -> Mat2c { return -i * (h * rho - rho * h); });
}

Mat3 rotation_matrix(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace qmelab
