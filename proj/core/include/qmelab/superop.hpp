#pragma once

#include <array>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace qmelab {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

// Identity, sigma_x, sigma_y, sigma_z.
const std::array<Mat2c, 4>& pauli_matrices();
// Orthonormal basis mu_i = sigma_i / sqrt(2).
const std::array<Mat2c, 4>& pauli_basis();

struct QubitState {
  Vec3 bloch = Vec3::Zero();

  static QubitState from_density(const Mat2c& rho);
  Mat2c density() const;
  bool is_physical(double tol = 1e-12) const { return bloch.norm() <= 1.0 + tol; }
};

// Real 4x4 matrix M_ij = tr[mu_i O(mu_j)] of a Hermiticity-preserving superoperator.
class SuperOp {
 public:
  SuperOp() : m_(Mat4::Zero()) {}
  explicit SuperOp(const Mat4& m) : m_(m) {}

  static SuperOp identity() { return SuperOp(Mat4::Identity()); }
  static SuperOp zero() { return SuperOp(); }
  static SuperOp diagonal(double d0, double d1, double d2, double d3);

  const Mat4& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  bool is_tp_map(double tol = 1e-10) const;
  bool is_tp_generator(double tol = 1e-10) const;

  Mat2c apply(const Mat2c& rho) const;
  QubitState apply(const QubitState& s) const;

  SuperOp operator+(const SuperOp& o) const { return SuperOp(m_ + o.m_); }
  SuperOp operator-(const SuperOp& o) const { return SuperOp(m_ - o.m_); }
  SuperOp operator*(const SuperOp& o) const { return SuperOp(m_ * o.m_); }
  SuperOp operator*(double s) const { return SuperOp(m_ * s); }
  SuperOp& operator+=(const SuperOp& o) {
    m_ += o.m_;
    return *this;
  }

 private:
  Mat4 m_;
};

inline SuperOp operator*(double s, const SuperOp& a) { return a * s; }

using Action = std::function<Mat2c(const Mat2c&)>;

SuperOp superop_from_action(const Action& action);

SuperOp compose(const SuperOp& a, const SuperOp& b);

struct Inverse {
  SuperOp inverse;
  double condition = 1.0;
};

Inverse invert(const SuperOp& a, double cond_limit = 1e12);

class CJMatrix {
 public:
  explicit CJMatrix(const Mat4c& omega) : omega_(omega) {}
  const Mat4c& matrix() const { return omega_; }
  // Trace over the output factor.
  Mat2c partial_trace_output() const;
  std::array<double, 4> eigenvalues() const;

 private:
  Mat4c omega_;
};

// Requires a trace-preserving map.
CJMatrix cj_matrix(const SuperOp& map);
// Same construction without the trace-preservation check, used for generators.
Mat4c choi_unchecked(const SuperOp& op);

std::array<double, 4> hermitian_eigenvalues(const Mat4c& h);

SuperOp matrix_exp(const SuperOp& g, double t = 1.0);
SuperOp matrix_log(const SuperOp& map);

struct BlochAffine {
  Mat3 d = Mat3::Identity();
  Vec3 v = Vec3::Zero();
};

BlochAffine to_bloch_affine(const SuperOp& map);
SuperOp from_bloch_affine(const BlochAffine& a);
// Generator counterpart: row 0 zero, lower-right block d, column 0 v.
SuperOp generator_from_bloch(const Mat3& d, const Vec3& v = Vec3::Zero());

// Superoperator of rho -> -i[h, rho].
SuperOp commutator_superop(const Mat2c& h);

Mat3 rotation_matrix(const Vec3& axis, double angle);

}  // namespace qmelab
