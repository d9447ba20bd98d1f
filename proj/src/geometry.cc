#include "sego/geometry.h"

#include <Eigen/Dense>

namespace sego {

Eigen::Matrix3d quat_to_rotation(const Quaternion &q) {
    double n2 = q.squared_norm();
    if (n2 == 0.0 || !std::isfinite(n2))
        throw_invalid_input("quat_to_rotation: zero or non-finite quaternion");
    const double a = q.w, b = q.x, c = q.y, d = q.z;
    Eigen::Matrix3d R;
    R << a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c), //
        2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b),  //
        2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d;
    return R / n2;
}

Quaternion rotation_to_quat(const Eigen::Matrix3d &R) {
    double t = R.trace();
    Quaternion q;
    if (t > 0.0) {
        double s = std::sqrt(t + 1.0) * 2.0;
        q.w = 0.25 * s;
        q.x = (R(2, 1) - R(1, 2)) / s;
        q.y = (R(0, 2) - R(2, 0)) / s;
        q.z = (R(1, 0) - R(0, 1)) / s;
    } else if (R(0, 0) > R(1, 1) && R(0, 0) > R(2, 2)) {
        double s = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2)) * 2.0;
        q.w = (R(2, 1) - R(1, 2)) / s;
        q.x = 0.25 * s;
        q.y = (R(0, 1) + R(1, 0)) / s;
        q.z = (R(0, 2) + R(2, 0)) / s;
    } else if (R(1, 1) > R(2, 2)) {
        double s = std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2)) * 2.0;
        q.w = (R(0, 2) - R(2, 0)) / s;
        q.x = (R(0, 1) + R(1, 0)) / s;
        q.y = 0.25 * s;
        q.z = (R(1, 2) + R(2, 1)) / s;
    } else {
        double s = std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1)) * 2.0;
        q.w = (R(1, 0) - R(0, 1)) / s;
        q.x = (R(0, 2) + R(2, 0)) / s;
        q.y = (R(1, 2) + R(2, 1)) / s;
        q.z = 0.25 * s;
    }
    return q.canonical();
}

Eigen::Matrix3d skew(const Eigen::Vector3d &v) {
    Eigen::Matrix3d M;
    M << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return M;
}

Eigen::Vector3d triangulate_point(const Eigen::Vector3d &x1, const Eigen::Vector3d &x2,
                                  const StereoRig &rig) {
    // Rays: X = s * x1 (view 1) and X = t * x2 - b (view 2).
    const Eigen::Vector3d &b = rig.baseline;
    double a11 = x1.dot(x1);
    double a12 = x1.dot(x2);
    double a22 = x2.dot(x2);
    double det = a11 * a22 - a12 * a12; // = ||x1 x x2||^2
    if (det < 1e-18 * a11 * a22)
        throw_degenerate_triangulation("triangulate_point: rays are parallel");
    double r1 = -x1.dot(b);
    double r2 = x2.dot(b);
    // min ||s x1 - t x2 + b||
    double s = (a22 * r1 + a12 * r2) / det;
    double t = (a12 * r1 + a11 * r2) / det;
    return 0.5 * (s * x1 + (t * x2 - b));
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> triangulate_line(const Eigen::Vector3d &l1,
                                                             const Eigen::Vector3d &l2,
                                                             const StereoRig &rig) {
    // Back-projected planes: l1 . X = 0 and l2 . (X + b) = 0.
    const Eigen::Vector3d &b = rig.baseline;
    Eigen::Vector3d dir = l1.cross(l2);
    double nd = dir.norm();
    if (nd < 1e-9 * std::max(1.0, l1.norm() * l2.norm()))
        throw_degenerate_triangulation("triangulate_line: back-projected planes are parallel");
    dir /= nd;
    // Point on the line closest to the origin.
    Eigen::Matrix3d A;
    A.row(0) = l1.transpose();
    A.row(1) = l2.transpose();
    A.row(2) = dir.transpose();
    Eigen::Vector3d rhs(0.0, -l2.dot(b), 0.0);
    Eigen::Vector3d X1 = A.partialPivLu().solve(rhs);
    return {X1, X1 + dir};
}

Eigen::Vector3d project_point(const Pose &pose, const ViewId &view, const Eigen::Vector3d &X,
                              const StereoRig &rig) {
    Eigen::Vector3d Y = (view.camera == 1) ? X : (pose.R * X + pose.t).eval();
    if (view.view == 2)
        Y += rig.baseline;
    if (Y.z() <= 0.0)
        throw_cheirality("project_point: point at or behind the camera plane");
    return Eigen::Vector3d(Y.x() / Y.z(), Y.y() / Y.z(), 1.0);
}

double rotation_angle_deg(const Eigen::Matrix3d &R) {
    double c = 0.5 * (R.trace() - 1.0);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * 180.0 / M_PI;
}

PoseError pose_errors(const Pose &est, const Pose &gt) {
    PoseError e;
    e.rotation_deg = rotation_angle_deg(est.R * gt.R.transpose());
    double gt_norm = gt.t.norm();
    if (gt_norm == 0.0) {
        e.translation_rel = (est.t - gt.t).norm();
        e.translation_is_absolute = true;
    } else {
        e.translation_rel = (est.t - gt.t).norm() / gt_norm;
    }
    return e;
}

} // namespace sego
