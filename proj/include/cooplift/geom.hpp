#pragma once

#include <Eigen/Dense>

namespace cooplift {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline const Vec3 kE1 = Vec3::UnitX();
inline const Vec3 kE2 = Vec3::UnitY();
inline const Vec3 kE3 = Vec3::UnitZ();

namespace geom {

inline constexpr double kSkewTolerance = 1e-9;
inline constexpr double kRotationTolerance = 1e-9;
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kLinkConstraintTolerance = 1e-9;
// Floor on |y_j| inside |y_j|^(r-1) so the terminal-sliding derivative stays
// finite at the origin.
inline constexpr double kSignedPowerFloor = 1e-12;

/// Skew-symmetric matrix with hat(v) * y == v.cross(y).
Mat3 hat(const Vec3& v);

/// Inverse of hat. Throws NotSkew when ||S + S^T|| >= kSkewTolerance.
Vec3 vee(const Mat3& S);

bool is_rotation(const Mat3& R, double tol = kRotationTolerance);
bool is_unit(const Vec3& q, double tol = kUnitTolerance);

/// Rodrigues formula, exp(hat(v)).
Mat3 exp_so3(const Vec3& v);

/// Principal logarithm, valid for rotation angles below pi.
Vec3 log_so3(const Mat3& R);

/// Rotation by `angle` about the unit `axis`.
Mat3 rotation(const Vec3& axis, double angle);

struct AttitudeErrors {
  Vec3 e_R;
  Vec3 e_Omega;
  double psi = 0.0;  // 0.5 tr(I - R_d^T R)
};

AttitudeErrors attitude_errors(const Mat3& R, const Mat3& R_d,
                               const Vec3& Omega, const Vec3& Omega_d);

struct LinkErrors {
  Vec3 e_q;
  Vec3 e_omega;
  double psi = 0.0;  // 1 - q . q_d
};

/// Errors on S^2. Throws ConstraintViolation when |q . omega| exceeds
/// kLinkConstraintTolerance.
LinkErrors link_errors(const Vec3& q, const Vec3& q_d, const Vec3& omega,
                       const Vec3& omega_d);

/// Component-wise |y_j|^r sgn(y_j) for 0 < r < 1; BadExponent otherwise.
Vec3 signed_power(double r, const Vec3& y);

/// diag_j(max(|y_j|, floor)^(r-1)); the clamped derivative factor of
/// signed_power.
Mat3 signed_power_gain(double r, const Vec3& y,
                       double floor = kSignedPowerFloor);

/// E(R, R_c) = 0.5 (tr(R^T R_c) I - R^T R_c), so that d/dt e_R = E e_Omega.
Mat3 transport_matrix(const Mat3& R, const Mat3& R_c);

/// Nearest rotation in Frobenius norm (polar factor). Throws Degenerate if M
/// is singular or has non-positive determinant.
Mat3 orthonormalize(const Mat3& M);

/// I - q q^T.
Mat3 normal_projector(const Vec3& q);

}  // namespace geom
}  // namespace cooplift
