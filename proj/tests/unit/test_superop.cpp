#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qmelab/dynamics.hpp"
#include "qmelab/errors.hpp"
#include "qmelab/generators.hpp"
#include "qmelab/superop.hpp"
#include "random_support.hpp"
#include "support.hpp"

using namespace qmelab;
using namespace qmelab::proptest;

namespace {

const cplx I(0.0, 1.0);

SuperOp dephasing_z_map(double eta) { return SuperOp::diagonal(1.0, eta, eta, 1.0); }

SuperOp rotation_z_map(double angle) {
  return from_bloch_affine({rotation_matrix(Vec3::UnitZ(), angle), Vec3::Zero()});
}

}  // namespace

TEST(PauliBasis, Orthonormal) {
  const auto& mu = pauli_basis();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(std::abs((mu[i] * mu[j]).trace() - (i == j ? 1.0 : 0.0)), 0.0, 1e-14);
  EXPECT_GT(std::abs(mu[0].trace()), 0.5);
  for (int i = 1; i < 4; ++i) EXPECT_LT(std::abs(mu[i].trace()), 1e-15);
}

TEST(QubitState, DensityRoundTrip) {
  QubitState s{Vec3(0.3, -0.2, 0.5)};
  const QubitState back = QubitState::from_density(s.density());
  EXPECT_LT((back.bloch - s.bloch).norm(), 1e-15);
  EXPECT_TRUE(s.is_physical());
  EXPECT_FALSE(QubitState{Vec3(1.0, 0.1, 0.0)}.is_physical());
}

TEST(SuperopFromAction, Identity) {
  const SuperOp m = superop_from_action([](const Mat2c& r) { return r; });
  EXPECT_LT(maxdiff(m.matrix(), Mat4::Identity()), 1e-15);
}

TEST(SuperopFromAction, ZDephasingDissipator) {
  const Mat2c& sz = pauli_matrices()[3];
  const SuperOp m = superop_from_action([&](const Mat2c& r) -> Mat2c { return sz * r * sz - r; });
  EXPECT_LT(maxdiff(m.matrix(), SuperOp::diagonal(0, -2, -2, 0).matrix()), 1e-15);
}

TEST(SuperopFromAction, RotationGeneratorAboutX) {
  const Mat2c h = 0.5 * pauli_matrices()[1];
  const SuperOp m = superop_from_action([&](const Mat2c& r) -> Mat2c { return -I * (h * r - r * h); });
  Mat4 expect = Mat4::Zero();
  expect(3, 2) = 1.0;
  expect(2, 3) = -1.0;
  EXPECT_LT(maxdiff(m.matrix(), expect), 1e-15);
}

TEST(SuperopFromAction, RejectsNonHermiticityPreserving) {
  expect_code(ErrorCode::NonHermiticityPreserving,
              [] { superop_from_action([](const Mat2c& r) -> Mat2c { return I * r; }); });
}

TEST(SuperOp, ApplyMatchesAction) {
  Draw draw(11);
  for (int k = 0; k < 20; ++k) {
    const SuperOp ch = draw.channel(3);
    const Mat2c rho = draw.density();
    const Mat2c out = ch.apply(rho);
    const QubitState s = ch.apply(QubitState::from_density(rho));
    EXPECT_LT((s.density() - out).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-13);
  }
}

TEST(Compose, IdentityIsNeutral) {
  Draw draw(3);
  const SuperOp x = draw.channel();
  EXPECT_LT(maxdiff(compose(SuperOp::identity(), x).matrix(), x.matrix()), 1e-15);
  EXPECT_LT(maxdiff(compose(x, SuperOp::identity()).matrix(), x.matrix()), 1e-15);
}

TEST(Compose, DephasingSemigroup) {
  const double gamma = 0.7, t = 0.9;
  const SuperOp l = SuperOp::diagonal(0, -2 * gamma, -2 * gamma, 0);
  const SuperOp once = matrix_exp(l, t);
  EXPECT_LT(maxdiff(compose(once, once).matrix(), matrix_exp(l, 2 * t).matrix()), 1e-13);
}

TEST(Compose, RotationGroupLaw) {
  const SuperOp ab = compose(rotation_z_map(0.4), rotation_z_map(1.1));
  EXPECT_LT(maxdiff(ab.matrix(), rotation_z_map(1.5).matrix()), 1e-14);
}

TEST(Invert, IdentityAndDiagonal) {
  EXPECT_LT(maxdiff(invert(SuperOp::identity()).inverse.matrix(), Mat4::Identity()), 1e-15);
  const double e = std::numbers::e;
  const Inverse inv = invert(SuperOp::diagonal(1, 1 / e, 1 / e, 1 / (e * e)));
  EXPECT_LT(maxdiff(inv.inverse.matrix(), SuperOp::diagonal(1, e, e, e * e).matrix()), 1e-13);
  EXPECT_NEAR(inv.condition, e * e, 1e-12);
}

TEST(Invert, ResonantDampingMapAtFirstZero) {
  const double tz = rescaled_jc_first_singularity();
  EXPECT_LT(std::abs(jc_coherence_factor(1.5, 1.0, tz)), 1e-15);
  expect_code(ErrorCode::SingularMap, [&] { invert(jc_resonant_map(1.5, 1.0, tz)); });
  EXPECT_NO_THROW(invert(jc_resonant_map(1.5, 1.0, 0.5 * tz)));
}

TEST(CJMatrix, IdentityMap) {
  const CJMatrix cj = cj_matrix(SuperOp::identity());
  const auto ev = cj.eigenvalues();
  EXPECT_NEAR(ev[0], 0.0, 1e-14);
  EXPECT_NEAR(ev[1], 0.0, 1e-14);
  EXPECT_NEAR(ev[2], 0.0, 1e-14);
  EXPECT_NEAR(ev[3], 2.0, 1e-14);
}

TEST(CJMatrix, DephasingMatchesKrausOracle) {
  for (double eta : {0.0, 0.3, 0.8, 1.0}) {
    const Mat2c& sz = pauli_matrices()[3];
    const double p0 = (1 + eta) / 2, p1 = (1 - eta) / 2;
    const SuperOp kraus = superop_from_action([&](const Mat2c& r) -> Mat2c { return p0 * r + p1 * sz * r * sz; });
    EXPECT_LT(maxdiff(kraus.matrix(), dephasing_z_map(eta).matrix()), 1e-15);
    const auto ev = cj_matrix(dephasing_z_map(eta)).eigenvalues();
    std::array<double, 4> expect{0.0, 0.0, 1 - eta, 1 + eta};
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(ev[k], expect[k], 1e-14);
  }
}

TEST(CJMatrix, FullyDepolarizing) {
  const auto ev = cj_matrix(SuperOp::diagonal(1, 0, 0, 0)).eigenvalues();
  for (double e : ev) EXPECT_NEAR(e, 0.5, 1e-15);
}

TEST(CJMatrix, TensorOrderIsOutputThenAncilla) {
  // Amplitude damping fully relaxed: every input goes to |0><0|, so the output factor is pinned.
  BlochAffine a;
  a.d = Mat3::Zero();
  a.v = Vec3(0, 0, 1);
  const Mat4c omega = cj_matrix(from_bloch_affine(a)).matrix();
  Mat4c expect = Mat4c::Zero();
  expect(0, 0) = expect(1, 1) = 1.0;
  EXPECT_LT((omega - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CJMatrix, RejectsNonTracePreserving) {
  expect_code(ErrorCode::NotTracePreserving, [] { cj_matrix(SuperOp::diagonal(0.9, 1, 1, 1)); });
}

TEST(HermitianEigenvalues, KnownSpectra) {
  Mat4c d = Mat4c::Zero();
  d(0, 0) = 2.0;
  const auto a = hermitian_eigenvalues(d);
  EXPECT_EQ(a[3], 2.0);
  EXPECT_NEAR(a[0], 0.0, 1e-15);

  const Mat2c& sx = pauli_matrices()[1];
  Mat4c xx;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) xx(2 * i + k, 2 * j + l) = sx(i, j) * sx(k, l);
  const auto b = hermitian_eigenvalues(xx);
  EXPECT_NEAR(b[0], -1.0, 1e-14);
  EXPECT_NEAR(b[1], -1.0, 1e-14);
  EXPECT_NEAR(b[2], 1.0, 1e-14);
  EXPECT_NEAR(b[3], 1.0, 1e-14);
}

TEST(HermitianEigenvalues, CharacteristicPolynomialResidue) {
  Draw draw(5);
  for (int k = 0; k < 25; ++k) {
    const Mat4c h = cj_matrix(draw.channel(2)).matrix();
    const double scale = std::pow(h.norm(), 4);
    for (double lam : hermitian_eigenvalues(h)) {
      const cplx det = (h - lam * Mat4c::Identity()).determinant();
      EXPECT_LT(std::abs(det), 1e-12 * scale);
    }
  }
}

TEST(HermitianEigenvalues, RejectsNonHermitian) {
  Mat4c h = Mat4c::Zero();
  h(0, 1) = 1.0;
  expect_code(ErrorCode::NotHermitian, [&] { hermitian_eigenvalues(h); });
}

TEST(MatrixExp, ZeroDephasingRotation) {
  EXPECT_LT(maxdiff(matrix_exp(SuperOp::zero(), 3.0).matrix(), Mat4::Identity()), 1e-15);
  const double g = 0.4, t = 1.7;
  const BlochAffine a = to_bloch_affine(matrix_exp(SuperOp::diagonal(0, -2 * g, -2 * g, 0), t));
  const double e = std::exp(-2 * g * t);
  EXPECT_LT((a.d - Vec3(e, e, 1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-14);

  const Mat2c h = 0.5 * pauli_matrices()[3];
  const SuperOp rot = matrix_exp(commutator_superop(h), t);
  EXPECT_LT(maxdiff(rot.matrix(), rotation_z_map(t).matrix()), 1e-14);
}

TEST(MatrixLog, IdentityAndDephasing) {
  EXPECT_LT(matrix_log(SuperOp::identity()).matrix().cwiseAbs().maxCoeff(), 1e-15);
  const double e1 = std::exp(-1.0);
  const SuperOp z = matrix_log(SuperOp::diagonal(1, e1, e1, 1));
  EXPECT_LT(maxdiff(z.matrix(), SuperOp::diagonal(0, -1, -1, 0).matrix()), 1e-14);
}

TEST(MatrixLog, NegativeSpectrumIsBranchAmbiguous) {
  const SuperOp m = compose(rotation_z_map(std::numbers::pi), dephasing_z_map(0.5));
  expect_code(ErrorCode::BranchAmbiguity, [&] { matrix_log(m); });
}

TEST(MatrixLog, JordanBlockIsDefective) {
  Mat4 m = Mat4::Identity();
  m(1, 1) = m(2, 2) = 0.5;
  m(1, 2) = 1.0;
  expect_code(ErrorCode::Defective, [&] { matrix_log(SuperOp(m)); });
}

TEST(MatrixLog, RotationWithDamping) {
  const SuperOp l(SuperOp::diagonal(0, -0.3, -0.3, -0.1).matrix() +
                  commutator_superop(0.8 * pauli_matrices()[3]).matrix());
  const SuperOp m = matrix_exp(l, 1.0);
  EXPECT_LT(maxdiff(matrix_log(m).matrix(), l.matrix()), 1e-12);
}

TEST(BlochAffine, IdentityAndRoundTrip) {
  const BlochAffine a = to_bloch_affine(SuperOp::identity());
  EXPECT_LT((a.d - Mat3::Identity()).norm(), 1e-15);
  EXPECT_LT(a.v.norm(), 1e-15);
  Draw draw(8);
  for (int k = 0; k < 20; ++k) {
    const SuperOp ch = draw.channel();
    EXPECT_LT(maxdiff(from_bloch_affine(to_bloch_affine(ch)).matrix(), ch.matrix()), 1e-15);
  }
  expect_code(ErrorCode::NotTracePreserving, [] { to_bloch_affine(SuperOp::zero()); });
}

TEST(BlochAffine, AmplitudeDampingSemigroup) {
  const double g = 0.6, t = 1.3;
  const GeneratorFamily ad = amplitude_damping_generator(RateFunction::constant(g));
  const BlochAffine a = to_bloch_affine(matrix_exp(ad(0.0), t));
  const double e = std::exp(-g * t);
  EXPECT_LT((a.d - Vec3(std::sqrt(e), std::sqrt(e), e).asDiagonal().toDenseMatrix()).norm(), 1e-14);
  EXPECT_LT((a.v - Vec3(0, 0, 1 - e)).norm(), 1e-14);
}

TEST(Properties, ChoiTraceAndPartialTraceOfRandomChannels) {
  Draw draw(21);
  for (int k = 0; k < 200; ++k) {
    const CJMatrix cj = cj_matrix(draw.channel(draw.integer(1, 4)));
    EXPECT_NEAR(cj.matrix().trace().real(), 2.0, 1e-10);
    EXPECT_LT((cj.matrix() - cj.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((cj.partial_trace_output() - Mat2c::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(cj.eigenvalues()[0], -1e-10);
  }
}

TEST(Properties, ExpLogRoundTrip) {
  Draw draw(22);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const SuperOp m = matrix_exp(draw.gksl_generator(0.5), draw.uniform(0.05, 1.5));
    SuperOp z;
    try {
      z = matrix_log(m);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    EXPECT_LT((matrix_exp(z).matrix() - m.matrix()).norm(), 1e-8);
  }
  EXPECT_GT(checked, 150);
}

TEST(Properties, RotationsAreOrthogonal) {
  Draw draw(23);
  for (int k = 0; k < 500; ++k) {
    const Mat3 r = rotation_matrix(draw.unit_vector(), draw.uniform(-10, 10));
    EXPECT_LT((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(Properties, RotationMixturesContract) {
  Draw draw(24);
  for (int k = 0; k < 200; ++k) {
    Mat3 d = Mat3::Zero();
    double total = 0.0;
    const int n = draw.integer(1, 6);
    for (int i = 0; i < n; ++i) {
      const double w = draw.uniform(0, 1);
      total += w;
      d += w * rotation_matrix(draw.unit_vector(), draw.uniform(-4, 4));
    }
    d /= total;
    Eigen::JacobiSVD<Mat3> svd(d);
    EXPECT_LE(svd.singularValues()(0), 1.0 + 1e-10);
    EXPECT_GE(svd.singularValues()(2), 0.0);
  }
}

TEST(Properties, CompositionOfChannelsStaysPositive) {
  Draw draw(25);
  for (int k = 0; k < 200; ++k) {
    const SuperOp a = draw.channel(draw.integer(1, 4));
    const SuperOp b = draw.channel(draw.integer(1, 4));
    EXPECT_GE(cj_matrix(compose(a, b)).eigenvalues()[0], -1e-10);
  }
}
