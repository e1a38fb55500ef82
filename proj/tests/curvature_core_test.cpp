#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"

namespace oc = orthocoord;
using oc::Matrix;
using oc::Vector;

namespace {

Vector unit(int n, int i) { return Vector::Unit(n, i); }

std::vector<oc::CurvatureOracle> all_oracles() {
  return {oc::constant_curvature_oracle(5, 0.0), oc::constant_curvature_oracle(4, 1.0),
          oc::constant_curvature_oracle(3, -2.5), oc::fubini_study_oracle(1),
          oc::fubini_study_oracle(2),          oc::fubini_study_oracle(3),
          oc::quaternionic_oracle(1),          oc::quaternionic_oracle(2)};
}

// R_{X,Y}Z as a vector, with forms J_a: kappa(<X,Z>Y - <Y,Z>X) + sum w(X,Z)J Y - w(Y,Z) J X + 2 w(X,Y) J Z
Vector curvature_operator(const oc::CurvatureOracle& o, const Vector& X, const Vector& Y, const Vector& Z) {
  Vector out = o.kappa() * (X.dot(Z) * Y - Y.dot(Z) * X);
  for (const auto& J : o.forms()) {
    const Matrix& M = J.matrix();
    out += (M * X).dot(Z) * (M * Y) - (M * Y).dot(Z) * (M * X) + 2.0 * (M * X).dot(Y) * (M * Z);
  }
  return out;
}

}  // namespace

TEST(StandardComplexStructure, SmallestCaseSendsE1ToE2) {
  const auto J = oc::standard_complex_structure(1);
  Matrix expect(2, 2);
  expect << 0, -1, 1, 0;
  EXPECT_EQ(J.matrix(), expect);
  EXPECT_EQ(J.apply(unit(2, 0)), unit(2, 1));
}

TEST(StandardComplexStructure, BlockDiagonalAndSquaresToMinusIdentityExactly) {
  const auto J2 = oc::standard_complex_structure(2).matrix();
  const auto J1 = oc::standard_complex_structure(1).matrix();
  EXPECT_EQ(J2.block(0, 0, 2, 2), J1);
  EXPECT_EQ(J2.block(2, 2, 2, 2), J1);
  EXPECT_EQ(J2.block(0, 2, 2, 2), Matrix::Zero(2, 2));
  for (int m = 1; m <= 6; ++m) {
    const auto J = oc::standard_complex_structure(m).matrix();
    EXPECT_EQ(J * J, -Matrix::Identity(2 * m, 2 * m));
    EXPECT_EQ(J.transpose(), -J);
  }
}

TEST(StandardComplexStructure, RejectsNonPositiveM) {
  try {
    oc::standard_complex_structure(0);
    FAIL();
  } catch (const oc::Error& e) {
    EXPECT_EQ(e.kind(), oc::ErrorKind::InvalidDimension);
  }
}

TEST(ComplexStructure, RejectsMatricesThatAreNotComplexStructures) {
  Matrix sym = Matrix::Identity(4, 4);
  EXPECT_THROW(oc::ComplexStructure{sym}, oc::Error);
  Matrix odd = Matrix::Zero(3, 3);
  try {
    oc::ComplexStructure{odd};
    FAIL();
  } catch (const oc::Error& e) {
    EXPECT_EQ(e.kind(), oc::ErrorKind::InvalidDimension);
  }
  Matrix scaled = 2.0 * oc::standard_complex_structure(2).matrix();
  EXPECT_THROW(oc::ComplexStructure{scaled}, oc::Error);
}

TEST(QuaternionTriple, ProductIsMinusIdentityAndJ1J2IsJ3) {
  for (int q = 1; q <= 3; ++q) {
    const auto t = oc::standard_quaternion_triple(q);
    const int n = 4 * q;
    const Matrix I = Matrix::Identity(n, n);
    EXPECT_EQ(t.J1.matrix() * t.J2.matrix() * t.J3.matrix(), -I);
    EXPECT_EQ(t.J1.matrix() * t.J2.matrix(), t.J3.matrix());
    for (int a = 0; a < 3; ++a) {
      const Matrix& J = t[a].matrix();
      EXPECT_EQ(J * J, -I);
      EXPECT_EQ(J.transpose(), -J);
      EXPECT_EQ(J.transpose() * J, I);
    }
  }
}

TEST(QuaternionTriple, SecondOrderIsBlockDiagonalCopy) {
  const auto t1 = oc::standard_quaternion_triple(1);
  const auto t2 = oc::standard_quaternion_triple(2);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(t2[a].matrix().block(0, 0, 4, 4), t1[a].matrix());
    EXPECT_EQ(t2[a].matrix().block(4, 4, 4, 4), t1[a].matrix());
    EXPECT_EQ(t2[a].matrix().block(0, 4, 4, 4), Matrix::Zero(4, 4));
  }
  EXPECT_EQ(t1.J1.matrix(), oc::standard_complex_structure(2).matrix());
}

TEST(QuaternionTriple, RejectsNonPositiveQ) {
  EXPECT_THROW(oc::standard_quaternion_triple(0), oc::Error);
}

// The oracles follow R_{X,Y}Z = nabla_[X,Y] Z - nabla_X nabla_Y Z + nabla_Y nabla_X Z,
// under which the sectional curvature of span(X, Y) is R(X,Y,X,Y) and
// R(X,Y,Y,X) carries the opposite sign.
TEST(FubiniStudy, HolomorphicSectionalCurvatureIsFour) {
  const auto R = oc::fubini_study_oracle(2);
  const auto J = oc::standard_complex_structure(2);
  const Vector X = unit(4, 0), JX = J.apply(X);
  EXPECT_NEAR(R(X, JX, X, JX), 4.0, 1e-12);
  EXPECT_NEAR(R(X, JX, JX, X), -4.0, 1e-12);
  EXPECT_NEAR(R.sectional(X, JX), 4.0, 1e-12);

  oc::Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Vector v = oc::standard_normal_vector(4, rng).normalized();
    EXPECT_NEAR(R.sectional(v, J.apply(v)), 4.0, 1e-10);
  }
}

TEST(FubiniStudy, AdaptedFrameComponent) {
  const auto R = oc::fubini_study_oracle(2);
  EXPECT_NEAR(R(unit(4, 0), unit(4, 1), unit(4, 2), unit(4, 3)), 2.0, 1e-12);
}

TEST(FubiniStudy, TotallyRealPlaneHasCurvatureOne) {
  const auto R = oc::fubini_study_oracle(2);
  const Vector e1 = unit(4, 0), e3 = unit(4, 2);
  EXPECT_NEAR(R(e1, e3, e1, e3), 1.0, 1e-12);
  EXPECT_NEAR(R(e1, e3, e3, e1), -1.0, 1e-12);
}

TEST(FubiniStudy, JInvariance) {
  oc::Rng rng(11);
  for (int m = 1; m <= 3; ++m) {
    const auto R = oc::fubini_study_oracle(m);
    const auto J = oc::standard_complex_structure(m);
    for (int t = 0; t < 200; ++t) {
      const auto [X, Y, Z, W] = support::random_quadruple(2 * m, rng);
      EXPECT_NEAR(R(J.apply(X), J.apply(Y), Z, W), R(X, Y, Z, W), 1e-10);
      EXPECT_NEAR(R(X, Y, J.apply(Z), J.apply(W)), R(X, Y, Z, W), 1e-10);
    }
  }
}

TEST(FubiniStudy, RejectsWrongDimension) {
  const auto R = oc::fubini_study_oracle(2);
  const Vector v = Vector::Ones(3);
  try {
    R(v, v, v, v);
    FAIL();
  } catch (const oc::Error& e) {
    EXPECT_EQ(e.kind(), oc::ErrorKind::DimensionMismatch);
  }
}

TEST(Quaternionic, QuaternionicPlaneHasCurvatureFour) {
  const auto R = oc::quaternionic_oracle(2);
  const auto t = oc::standard_quaternion_triple(2);
  const Vector X = unit(8, 0);
  for (int a = 0; a < 3; ++a) {
    const Vector Y = t[a].apply(X);
    EXPECT_NEAR(R(X, Y, X, Y), 4.0, 1e-12);
    EXPECT_NEAR(R(X, Y, Y, X), -4.0, 1e-12);
  }
}

TEST(Quaternionic, PlaneOrthogonalToQuaternionicLineHasCurvatureOne) {
  const auto R = oc::quaternionic_oracle(2);
  const Vector X = unit(8, 0), Y = unit(8, 5);
  EXPECT_NEAR(R(X, Y, X, Y), 1.0, 1e-12);
  EXPECT_NEAR(R(X, Y, Y, X), -1.0, 1e-12);
}

TEST(Quaternionic, RandomQuaternionicAndTotallyRealPlanes) {
  const auto t = oc::standard_quaternion_triple(2);
  const auto R = oc::quaternionic_oracle(2);
  oc::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector X = oc::standard_normal_vector(8, rng).normalized();
    Matrix H(8, 4);
    H << X, t.J1.apply(X), t.J2.apply(X), t.J3.apply(X);
    Vector Y = oc::standard_normal_vector(8, rng);
    Y -= H * (H.transpose() * Y);
    Y.normalize();
    EXPECT_NEAR(R.sectional(X, Y), 1.0, 1e-10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector c(3);
    c << u(rng), u(rng), u(rng);
    c.normalize();
    const Vector Q = c[0] * t.J1.apply(X) + c[1] * t.J2.apply(X) + c[2] * t.J3.apply(X);
    EXPECT_NEAR(R.sectional(X, Q), 4.0, 1e-10);
  }
}

TEST(Quaternionic, FirstOrderMatchesSphereValuesOnListedPlanes) {
  // HP^1 only agrees with a round sphere on the quaternionic planes here.
  const auto R = oc::quaternionic_oracle(1);
  const Vector X = unit(4, 0);
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(R.sectional(X, oc::standard_quaternion_triple(1)[a].apply(X)), 4.0, 1e-12);
  }
}

TEST(ConstantCurvature, Values) {
  const auto flat = oc::constant_curvature_oracle(4, 0.0);
  const auto sph = oc::constant_curvature_oracle(4, 1.0);
  oc::Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto [X, Y, Z, W] = support::random_quadruple(4, rng);
    EXPECT_EQ(flat(X, Y, Z, W), 0.0);
  }
  EXPECT_NEAR(sph(unit(4, 0), unit(4, 1), unit(4, 0), unit(4, 1)), 1.0, 1e-15);
  EXPECT_NEAR(sph(unit(4, 0), unit(4, 1), unit(4, 1), unit(4, 0)), -1.0, 1e-15);
  const Matrix Q = oc::haar_orthogonal(4, rng);
  EXPECT_NEAR(sph(Q.row(0).transpose(), Q.row(1).transpose(), Q.row(2).transpose(), Q.row(3).transpose()), 0.0,
              1e-12);
  EXPECT_THROW(oc::constant_curvature_oracle(1, 1.0), oc::Error);
}

TEST(OracleInvariants, SymmetriesOnRandomQuadruples) {
  oc::Rng rng(2024);
  for (const auto& R : all_oracles()) {
    const int n = R.dim();
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto [X, Y, Z, W] = support::random_quadruple(n, rng);
      const double r = R(X, Y, Z, W);
      worst = std::max(worst, std::abs(r + R(Y, X, Z, W)));
      worst = std::max(worst, std::abs(r + R(X, Y, W, Z)));
      worst = std::max(worst, std::abs(r - R(Z, W, X, Y)));
      worst = std::max(worst, std::abs(r + R(Y, Z, X, W) + R(Z, X, Y, W)));
      EXPECT_EQ(R(X, X, Z, W), 0.0);
    }
    EXPECT_LE(worst, 1e-10) << R.label();
  }
}

TEST(OracleInvariants, Multilinearity) {
  oc::Rng rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& R : all_oracles()) {
    const int n = R.dim();
    for (int t = 0; t < 100; ++t) {
      const auto [X, Y, Z, W] = support::random_quadruple(n, rng);
      const Vector X2 = oc::standard_normal_vector(n, rng);
      const double a = u(rng), b = u(rng);
      EXPECT_NEAR(R(a * X + b * X2, Y, Z, W), a * R(X, Y, Z, W) + b * R(X2, Y, Z, W), 1e-10);
      EXPECT_NEAR(R(Y, Z, a * X + b * X2, W), a * R(Y, Z, X, W) + b * R(Y, Z, X2, W), 1e-10);
    }
  }
}

TEST(OracleInvariants, AgreesWithCurvatureOperatorForm) {
  oc::Rng rng(8);
  for (const auto& R : all_oracles()) {
    for (int t = 0; t < 100; ++t) {
      const auto [X, Y, Z, W] = support::random_quadruple(R.dim(), rng);
      EXPECT_NEAR(R(X, Y, Z, W), curvature_operator(R, X, Y, Z).dot(W), 1e-10);
    }
  }
}

TEST(OracleInvariants, ComponentsMatchPointwiseEvaluation) {
  oc::Rng rng(9);
  for (const auto& R : all_oracles()) {
    const int n = R.dim();
    const Matrix F = oc::haar_orthogonal(n, rng);
    const auto T = R.components(F);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double direct =
                R(F.row(i).transpose(), F.row(j).transpose(), F.row(k).transpose(), F.row(l).transpose());
            ASSERT_NEAR(T(i, j, k, l), direct, 1e-12);
          }
  }
}

TEST(ModelSpace, ParseAndDispatch) {
  EXPECT_EQ(oc::label(oc::parse_model_space("cp:2")), "cp:2");
  EXPECT_EQ(oc::dimension(oc::parse_model_space("hp:3")), 12);
  EXPECT_EQ(oc::dimension(oc::parse_model_space("sphere:5")), 5);

  const auto flat = oc::oracle_for(oc::Flat{5});
  oc::Rng rng(4);
  const auto [X, Y, Z, W] = support::random_quadruple(5, rng);
  EXPECT_EQ(flat(X, Y, Z, W), 0.0);

  const auto cp = oc::oracle_for(oc::ComplexProjective{2});
  const auto fs = oc::fubini_study_oracle(2);
  const auto [A, B, C, D] = support::random_quadruple(4, rng);
  EXPECT_EQ(cp(A, B, C, D), fs(A, B, C, D));

  const auto hp = oc::oracle_for(oc::QuaternionicProjective{2});
  const auto qo = oc::quaternionic_oracle(2);
  const auto [P, Q, S, T] = support::random_quadruple(8, rng);
  EXPECT_EQ(hp(P, Q, S, T), qo(P, Q, S, T));

  const auto sph = oc::oracle_for(oc::Sphere{3});
  EXPECT_NEAR(sph.sectional(unit(3, 0), unit(3, 2)), 1.0, 1e-15);
}

TEST(ModelSpace, RejectsMalformedSpecs) {
  for (const char* bad : {"cp:two", "cp", "cp:", "torus:3", "flat:-1", "cp:2x", ":3"}) {
    try {
      oc::parse_model_space(bad);
      ADD_FAILURE() << bad;
    } catch (const oc::Error& e) {
      EXPECT_EQ(e.kind(), oc::ErrorKind::ParseError) << bad;
    }
  }
  for (const char* bad : {"flat:1", "sphere:0", "cp:0", "hp:0"}) {
    try {
      oc::parse_model_space(bad);
      ADD_FAILURE() << bad;
    } catch (const oc::Error& e) {
      EXPECT_EQ(e.kind(), oc::ErrorKind::InvalidDimension) << bad;
    }
  }
}

TEST(Frame, OrthonormalityChecks) {
  oc::Rng rng(6);
  const auto F = oc::Frame::orthonormal(oc::haar_orthogonal(6, rng));
  EXPECT_LE(F.orthonormality_defect(), 1e-12);
  EXPECT_NEAR(std::abs(F.determinant()), 1.0, 1e-12);
  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 1) = 1e-3;
  try {
    oc::Frame::orthonormal(bad);
    FAIL();
  } catch (const oc::Error& e) {
    EXPECT_EQ(e.kind(), oc::ErrorKind::FrameError);
  }
  EXPECT_THROW(oc::Frame(Matrix::Zero(2, 3)), oc::Error);
}
