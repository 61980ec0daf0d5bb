// gearmotion - gear assembly motion synthesis and prediction toolkit
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "common.hpp"

namespace gearmotion {

// Motion increment in se(3): angular part in radians per frame, linear part
// in normalized scene units per frame. Stored as [omega, v].
struct Twist {
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> x;
    x << omega, v;
    return x;
  }
  static Twist from_vector(const Eigen::Matrix<double, 6, 1>& x) {
    return Twist{x.head<3>(), x.tail<3>()};
  }
};

// Element of SE(3).
struct RigidTransform {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return RigidTransform{}; }
};

// skew(w) * x == w x x
Eigen::Matrix3d hat_so3(const Eigen::Vector3d& omega);

// Rodrigues formula with a Taylor branch below |omega| = 1e-4.
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega);

// Inverse of exp_so3. Throws Fault::AngleNearPi for rotation angles within
// 1e-6 of pi; frame steps in this toolkit are small, so that signals a
// caller error rather than a branch to pick.
Eigen::Vector3d log_so3(const Eigen::Matrix3d& R);

// Left Jacobian V(omega) of SO(3) and its inverse, closed form with Taylor
// fallback below |omega| = 1e-4.
Eigen::Matrix3d left_jacobian_so3(const Eigen::Vector3d& omega);
Eigen::Matrix3d left_jacobian_inv_so3(const Eigen::Vector3d& omega);

RigidTransform exp_se3(const Twist& xi);
Twist log_se3(const RigidTransform& T);

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& T);

Eigen::Vector3d apply(const RigidTransform& T, const Eigen::Vector3d& p);
PointCloud apply(const RigidTransform& T, const PointCloud& points);

// Rotation by `angle` about the line {center + s * axis}. `axis` must be
// unit length within 1e-6 (Fault::DegenerateAxis otherwise).
RigidTransform rotation_about_axis(const Eigen::Vector3d& center,
                                   const Eigen::Vector3d& axis, double angle);

// Geodesic distance between two rotations, in degrees, in [0, 180].
double geodesic_angle_deg(const Eigen::Matrix3d& r1, const Eigen::Matrix3d& r2);

// Rotation angle of a single rotation matrix, radians in [0, pi].
double rotation_angle(const Eigen::Matrix3d& R);

// max-norm checks used by tests and input validation
bool is_rotation(const Eigen::Matrix3d& R, double tol = 1e-9);

}  // namespace gearmotion
