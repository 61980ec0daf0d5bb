// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#include "se3.hpp"

#include <cmath>

namespace gearmotion {

namespace {
constexpr double kTaylorKnee = 1e-4;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

Eigen::Matrix3d hat_so3(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  // clang-format off
  s <<     0, -w.z(),  w.y(),
       w.z(),      0, -w.x(),
      -w.y(),  w.x(),      0;
  // clang-format on
  return s;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const Eigen::Matrix3d W = hat_so3(omega);
  double a, b;  // R = I + a*W + b*W^2
  if (theta < kTaylorKnee) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * W + b * W * W;
}

double rotation_angle(const Eigen::Matrix3d& R) {
  // atan2 form is well conditioned at both ends of [0, pi].
  const Eigen::Vector3d u(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0),
                          R(1, 0) - R(0, 1));
  const double s = 0.5 * u.norm();
  const double c = 0.5 * (R.trace() - 1.0);
  return std::atan2(s, c);
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
  const Eigen::Vector3d u(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0),
                          R(1, 0) - R(0, 1));
  const double theta = rotation_angle(R);
  if (theta >= kPi - 1e-6) {
    throw Error(Fault::AngleNearPi,
                "log_so3: rotation angle within 1e-6 of pi; reduce the frame "
                "step before taking logs");
  }
  if (theta < kTaylorKnee) {
    // u = 2 sin(theta) * axis; theta/sin(theta) ~ 1 + theta^2/6
    const double t2 = theta * theta;
    return 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * u;
  }
  return (theta / (2.0 * std::sin(theta))) * u;
}

Eigen::Matrix3d left_jacobian_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const Eigen::Matrix3d W = hat_so3(omega);
  double a, b;  // V = I + a*W + b*W^2
  if (theta < kTaylorKnee) {
    const double t2 = theta * theta;
    a = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    b = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    a = (1.0 - std::cos(theta)) / (theta * theta);
    b = (theta - std::sin(theta)) / (theta * theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * W + b * W * W;
}

Eigen::Matrix3d left_jacobian_inv_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const Eigen::Matrix3d W = hat_so3(omega);
  double c;  // V^-1 = I - W/2 + c*W^2
  if (theta < kTaylorKnee) {
    const double t2 = theta * theta;
    c = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const double half = 0.5 * theta;
    c = (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() - 0.5 * W + c * W * W;
}

RigidTransform exp_se3(const Twist& xi) {
  RigidTransform T;
  T.R = exp_so3(xi.omega);
  T.t = left_jacobian_so3(xi.omega) * xi.v;
  return T;
}

Twist log_se3(const RigidTransform& T) {
  Twist xi;
  xi.omega = log_so3(T.R);
  xi.v = left_jacobian_inv_so3(xi.omega) * T.t;
  return xi;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform{a.R * b.R, a.R * b.t + a.t};
}

RigidTransform inverse(const RigidTransform& T) {
  RigidTransform inv;
  inv.R = T.R.transpose();
  inv.t = -(inv.R * T.t);
  return inv;
}

Eigen::Vector3d apply(const RigidTransform& T, const Eigen::Vector3d& p) {
  return T.R * p + T.t;
}

PointCloud apply(const RigidTransform& T, const PointCloud& points) {
  PointCloud out = points * T.R.transpose();
  out.rowwise() += T.t.transpose();
  return out;
}

RigidTransform rotation_about_axis(const Eigen::Vector3d& center,
                                   const Eigen::Vector3d& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-6) {
    throw Error(Fault::DegenerateAxis,
                "rotation_about_axis: axis norm deviates from 1 by more than "
                "1e-6");
  }
  RigidTransform T;
  T.R = exp_so3(axis * angle);
  T.t = center - T.R * center;
  return T;
}

double geodesic_angle_deg(const Eigen::Matrix3d& r1, const Eigen::Matrix3d& r2) {
  const double c = ((r1.transpose() * r2).trace() - 1.0) / 2.0;
  const double clamped = std::min(1.0, std::max(-1.0, c));
  return std::acos(clamped) * (180.0 / kPi);
}

bool is_rotation(const Eigen::Matrix3d& R, double tol) {
  const double ortho =
      (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

}  // namespace gearmotion
