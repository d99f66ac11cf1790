#include "cooplift/geom.hpp"

#include <cmath>
#include <sstream>

#include "cooplift/error.hpp"

namespace cooplift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::SingularMass: return "SingularMass";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateTension: return "DegenerateTension";
    case ErrorCode::OutOfBall: return "OutOfBall";
    case ErrorCode::DegenerateThrust: return "DegenerateThrust";
    case ErrorCode::HeadingCollinear: return "HeadingCollinear";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace geom {

Mat3 hat(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return S;
}

Vec3 vee(const Mat3& S) {
  const double asym = (S + S.transpose()).norm();
  if (!(asym < kSkewTolerance)) {
    std::ostringstream os;
    os << "||S + S^T|| = " << asym;
    throw Error(ErrorCode::NotSkew, os.str());
  }
  return Vec3(0.5 * (S(2, 1) - S(1, 2)), 0.5 * (S(0, 2) - S(2, 0)),
              0.5 * (S(1, 0) - S(0, 1)));
}

bool is_rotation(const Mat3& R, double tol) {
  return (R.transpose() * R - Mat3::Identity()).norm() < tol &&
         std::abs(R.determinant() - 1.0) < tol;
}

bool is_unit(const Vec3& q, double tol) {
  return std::abs(q.norm() - 1.0) < tol;
}

Mat3 exp_so3(const Vec3& v) {
  const double theta2 = v.squaredNorm();
  const Mat3 K = hat(v);
  double a, b;
  if (theta2 < 1e-8) {
    // Taylor expansions of sin(t)/t and (1 - cos(t))/t^2.
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    const double theta = std::sqrt(theta2);
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + a * K + b * K * K;
}

Vec3 log_so3(const Mat3& R) {
  const Vec3 w(0.5 * (R(2, 1) - R(1, 2)), 0.5 * (R(0, 2) - R(2, 0)),
               0.5 * (R(1, 0) - R(0, 1)));
  const double s = w.norm();
  const double c = 0.5 * (R.trace() - 1.0);
  const double theta = std::atan2(s, c);
  if (s < 1e-10) {
    return (1.0 + theta * theta / 6.0) * w;
  }
  return (theta / s) * w;
}

Mat3 rotation(const Vec3& axis, double angle) {
  return exp_so3(angle * axis.normalized());
}

AttitudeErrors attitude_errors(const Mat3& R, const Mat3& R_d,
                               const Vec3& Omega, const Vec3& Omega_d) {
  const Mat3 RdtR = R_d.transpose() * R;
  AttitudeErrors out;
  out.e_R = vee(0.5 * (RdtR - RdtR.transpose()));
  out.e_Omega = Omega - R.transpose() * R_d * Omega_d;
  out.psi = 0.5 * (3.0 - RdtR.trace());
  return out;
}

LinkErrors link_errors(const Vec3& q, const Vec3& q_d, const Vec3& omega,
                       const Vec3& omega_d) {
  const double c = q.dot(omega);
  if (std::abs(c) > kLinkConstraintTolerance) {
    std::ostringstream os;
    os << "q . omega = " << c;
    throw Error(ErrorCode::ConstraintViolation, os.str());
  }
  const Mat3 qh = hat(q);
  LinkErrors out;
  out.e_q = q_d.cross(q);
  out.e_omega = omega + qh * qh * omega_d;
  out.psi = 1.0 - q.dot(q_d);
  return out;
}

namespace {
void check_exponent(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "exponent r = " << r << " outside (0, 1)";
    throw Error(ErrorCode::BadExponent, os.str());
  }
}
}  // namespace

Vec3 signed_power(double r, const Vec3& y) {
  check_exponent(r);
  Vec3 out;
  for (int j = 0; j < 3; ++j) {
    const double a = std::abs(y[j]);
    out[j] = a == 0.0 ? 0.0 : std::copysign(std::pow(a, r), y[j]);
  }
  return out;
}

Mat3 signed_power_gain(double r, const Vec3& y, double floor) {
  check_exponent(r);
  Mat3 D = Mat3::Zero();
  for (int j = 0; j < 3; ++j) {
    D(j, j) = std::pow(std::max(std::abs(y[j]), floor), r - 1.0);
  }
  return D;
}

Mat3 transport_matrix(const Mat3& R, const Mat3& R_c) {
  const Mat3 RtRc = R.transpose() * R_c;
  return 0.5 * (RtRc.trace() * Mat3::Identity() - RtRc);
}

Mat3 orthonormalize(const Mat3& M) {
  const double det = M.determinant();
  const double scale = M.norm();
  if (!(scale > 0.0) || !(det > 1e-12 * scale * scale * scale)) {
    std::ostringstream os;
    os << "det(M) = " << det;
    throw Error(ErrorCode::Degenerate, os.str());
  }
  // Scaled Newton iteration for the polar factor (Higham).
  Mat3 X = M;
  for (int it = 0; it < 100; ++it) {
    const Mat3 Xinv = X.inverse();
    const double zeta = std::sqrt(Xinv.norm() / X.norm());
    const Mat3 next = 0.5 * (zeta * X + Xinv.transpose() / zeta);
    const double delta = (next - X).norm();
    X = next;
    if (delta < 1e-15) break;
  }
  // One unscaled step removes the residual left by the scaling heuristic.
  X = 0.5 * (X + X.inverse().transpose());
  return X;
}

Mat3 normal_projector(const Vec3& q) {
  return Mat3::Identity() - q * q.transpose();
}

}  // namespace geom
}  // namespace cooplift
