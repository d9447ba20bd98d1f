#pragma once

#include "sego/types.h"

#include <Eigen/Dense>
#include <utility>

namespace sego {

// Rotation matrix of a (not necessarily unit) quaternion; the result is
// orthonormal for any nonzero input.
Eigen::Matrix3d quat_to_rotation(const Quaternion &q);

// Canonical quaternion of a rotation matrix (Shepperd's branch selection).
Quaternion rotation_to_quat(const Eigen::Matrix3d &R);

Eigen::Matrix3d skew(const Eigen::Vector3d &v);

// Midpoint triangulation from the two views of one rig. x1/x2 are the
// homogeneous observations in view 1 and view 2.
Eigen::Vector3d triangulate_point(const Eigen::Vector3d &x1, const Eigen::Vector3d &x2,
                                  const StereoRig &rig = {});

// A 3D line from its projections onto the two views of one rig, returned as
// a point on the line and the second point at unit distance along it.
std::pair<Eigen::Vector3d, Eigen::Vector3d> triangulate_line(const Eigen::Vector3d &l1,
                                                             const Eigen::Vector3d &l2,
                                                             const StereoRig &rig = {});

// Projection of a world point (first-rig frame) into one of the four views.
// Throws a cheirality error when the point is not strictly in front.
Eigen::Vector3d project_point(const Pose &pose, const ViewId &view, const Eigen::Vector3d &X,
                              const StereoRig &rig = {});

struct PoseError {
    double rotation_deg = 0.0;
    double translation_rel = 0.0;
    bool translation_is_absolute = false; // set when ||t_gt|| == 0
};

PoseError pose_errors(const Pose &est, const Pose &gt);

double rotation_angle_deg(const Eigen::Matrix3d &R);

} // namespace sego
