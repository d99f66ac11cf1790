#include <cmath>

#include <gtest/gtest.h>

#include "cooplift/error.hpp"
#include "cooplift/geom.hpp"
#include "test_support.hpp"

using namespace cooplift;
using namespace cooplift::geom;

using cooplift::testing::code_of;

TEST(Hat, MatchesCrossProduct) {
  const Vec3 v(0.3, -1.2, 2.5);
  const Vec3 y(-0.7, 0.4, 1.1);
  EXPECT_LT((hat(v) * y - v.cross(y)).norm(), 1e-15);
  EXPECT_LT((hat(v) + hat(v).transpose()).norm(), 1e-15);
}

TEST(Vee, InvertsHat) {
  const Vec3 v(1.0, 2.0, 3.0);
  EXPECT_EQ(vee(hat(v)), v);
}

TEST(Vee, RejectsNonSkew) {
  Mat3 S = hat(Vec3(1.0, 2.0, 3.0));
  S(0, 0) = 1e-3;
  EXPECT_EQ(code_of([&] { vee(S); }), ErrorCode::NotSkew);
}

TEST(ExpSo3, MatchesAngleAxis) {
  const Vec3 axis = Vec3(1.0, -2.0, 0.5).normalized();
  for (double angle : {1e-9, 1e-5, 0.3, 1.7, 3.1}) {
    const Mat3 expected = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    EXPECT_LT((exp_so3(angle * axis) - expected).norm(), 1e-14) << angle;
  }
}

TEST(LogSo3, InvertsExp) {
  const Vec3 axis = Vec3(-0.2, 0.9, 0.4).normalized();
  for (double angle : {0.0, 1e-12, 1e-6, 0.5, 2.0, 3.0}) {
    const Vec3 v = angle * axis;
    EXPECT_LT((log_so3(exp_so3(v)) - v).norm(), 1e-12) << angle;
  }
}

TEST(Rotation, IsRotationAndUnitChecks) {
  const Mat3 R = rotation(Vec3(1.0, 1.0, 0.0), 0.8);
  EXPECT_TRUE(is_rotation(R));
  EXPECT_FALSE(is_rotation(2.0 * R));
  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  EXPECT_FALSE(is_rotation(reflect));
  EXPECT_TRUE(is_unit(Vec3(0.6, 0.8, 0.0)));
  EXPECT_FALSE(is_unit(Vec3(0.6, 0.8, 1e-3)));
}

TEST(AttitudeErrors, PsiIsOneMinusCosine) {
  const double angle = 0.7;
  const Mat3 R = rotation(kE2, angle);
  const auto err = attitude_errors(R, Mat3::Identity(), Vec3::Zero(), Vec3::Zero());
  EXPECT_NEAR(err.psi, 1.0 - std::cos(angle), 1e-15);
  // e_R = sin(angle) * axis for a rotation about a single axis.
  EXPECT_LT((err.e_R - std::sin(angle) * kE2).norm(), 1e-15);
}

TEST(AttitudeErrors, AngularVelocityErrorTransportsDesiredRate) {
  const Mat3 R = rotation(kE3, 0.4);
  const Mat3 R_d = rotation(kE1, -0.2);
  const Vec3 Omega(0.1, 0.2, 0.3);
  const Vec3 Omega_d(-0.5, 0.0, 0.7);
  const auto err = attitude_errors(R, R_d, Omega, Omega_d);
  EXPECT_LT((err.e_Omega - (Omega - R.transpose() * R_d * Omega_d)).norm(), 1e-15);
  // Zero error when R follows R_d exactly.
  const auto same = attitude_errors(R_d, R_d, Omega_d, Omega_d);
  EXPECT_LT(same.e_R.norm(), 1e-15);
  EXPECT_LT(same.e_Omega.norm(), 1e-15);
  EXPECT_NEAR(same.psi, 0.0, 1e-15);
}

TEST(TransportMatrix, GivesErrorDerivative) {
  const Mat3 R_c = rotation(Vec3(0.3, -0.5, 1.0), 0.9);
  const Mat3 R = rotation(Vec3(1.0, 0.2, 0.1), 0.6);
  const Vec3 Omega(0.4, -1.1, 0.7);
  const double h = 1e-6;
  const auto e = [&](double t) {
    return attitude_errors(R * exp_so3(t * Omega), R_c, Vec3::Zero(), Vec3::Zero()).e_R;
  };
  const Vec3 numeric = (e(h) - e(-h)) / (2.0 * h);
  // With Omega_c = 0, e_Omega = Omega.
  EXPECT_LT((numeric - transport_matrix(R, R_c) * Omega).norm(), 1e-9);
}

TEST(LinkErrors, Values) {
  const Vec3 q = kE3;
  const Vec3 q_d = Vec3(std::sin(0.3), 0.0, std::cos(0.3));
  const Vec3 omega(0.2, -0.1, 0.0);
  const Vec3 omega_d(0.0, 0.5, 0.0);
  const auto err = link_errors(q, q_d, omega, omega_d);
  EXPECT_LT((err.e_q - q_d.cross(q)).norm(), 1e-15);
  EXPECT_NEAR(err.psi, 1.0 - std::cos(0.3), 1e-15);
  // e_omega = omega - (projection of omega_d onto the tangent plane of q).
  const Vec3 tangent = omega_d - omega_d.dot(q) * q;
  EXPECT_LT((err.e_omega - (omega - tangent)).norm(), 1e-15);
}

TEST(LinkErrors, RejectsNonTangentRate) {
  EXPECT_EQ(code_of([] { link_errors(kE3, kE3, Vec3(0.0, 0.0, 1e-6), Vec3::Zero()); }),
            ErrorCode::ConstraintViolation);
}

TEST(SignedPower, ComponentWise) {
  const Vec3 y(-8.0, 0.0, 0.25);
  const Vec3 out = signed_power(0.5, y);
  EXPECT_NEAR(out.x(), -std::sqrt(8.0), 1e-15);
  EXPECT_EQ(out.y(), 0.0);
  EXPECT_NEAR(out.z(), 0.5, 1e-15);
}

TEST(SignedPower, RejectsExponentOutsideUnitInterval) {
  for (double r : {0.0, 1.0, -0.5, 1.5}) {
    EXPECT_EQ(code_of([&] { signed_power(r, Vec3::Ones()); }), ErrorCode::BadExponent);
    EXPECT_EQ(code_of([&] { signed_power_gain(r, Vec3::Ones()); }),
              ErrorCode::BadExponent);
  }
}

TEST(SignedPowerGain, IsDerivativeAwayFromZero) {
  const double r = 0.6;
  const Vec3 y(0.3, -1.2, 0.05);
  const Vec3 dy(0.7, 0.2, -0.4);
  const double h = 1e-7;
  const Vec3 numeric =
      (signed_power(r, y + h * dy) - signed_power(r, y - h * dy)) / (2.0 * h);
  EXPECT_LT((numeric - r * signed_power_gain(r, y) * dy).norm(), 1e-7);
}

TEST(SignedPowerGain, ClampedAtFloor) {
  const Mat3 D = signed_power_gain(0.5, Vec3(0.0, 1e-20, 4.0), 1e-4);
  EXPECT_NEAR(D(0, 0), 100.0, 1e-9);
  EXPECT_NEAR(D(1, 1), 100.0, 1e-9);
  EXPECT_NEAR(D(2, 2), 0.5, 1e-15);
}

TEST(Orthonormalize, MatchesSvdPolarFactor) {
  Mat3 M = rotation(Vec3(0.2, 0.5, -0.3), 1.1);
  M(0, 1) += 1e-3;
  M(2, 0) -= 2e-3;
  M *= 1.001;
  const Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 expected = svd.matrixU() * svd.matrixV().transpose();
  const Mat3 R = orthonormalize(M);
  EXPECT_LT((R - expected).norm(), 1e-12);
  EXPECT_TRUE(is_rotation(R, 1e-14));
}

TEST(Orthonormalize, RejectsSingularAndReflections) {
  Mat3 singular = Mat3::Identity();
  singular(2, 2) = 0.0;
  EXPECT_EQ(code_of([&] { orthonormalize(singular); }), ErrorCode::Degenerate);
  EXPECT_EQ(code_of([] { orthonormalize(-Mat3::Identity()); }), ErrorCode::Degenerate);
}

TEST(NormalProjector, AnnihilatesDirection) {
  const Vec3 q = Vec3(1.0, 2.0, 2.0) / 3.0;
  const Mat3 P = normal_projector(q);
  EXPECT_LT((P * q).norm(), 1e-15);
  EXPECT_LT((P * P - P).norm(), 1e-15);
}
