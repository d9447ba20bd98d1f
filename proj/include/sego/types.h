#pragma once

#include "sego/errors.h"

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <vector>

namespace sego {

// Scalar-first unit quaternion. Canonical form has w >= 0 (ties broken on
// the first nonzero vector component).
struct Quaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    double squared_norm() const { return w * w + x * x + y * y + z * z; }

    Quaternion normalized() const {
        double n = std::sqrt(squared_norm());
        if (n == 0.0)
            throw_invalid_input("zero quaternion");
        return {w / n, x / n, y / n, z / n};
    }

    Quaternion canonical() const {
        Quaternion q = normalized();
        double lead = q.w;
        if (lead == 0.0)
            lead = (q.x != 0.0) ? q.x : (q.y != 0.0 ? q.y : q.z);
        if (lead < 0.0)
            return {-q.w, -q.x, -q.y, -q.z};
        return q;
    }
};

// Rigid transform of the second stereo rig w.r.t. the first: X2 = R * X1 + t.
struct Pose {
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    Pose() = default;
    Pose(const Eigen::Matrix3d &R_, const Eigen::Vector3d &t_) : R(R_), t(t_) {}

    Pose inverse() const { return Pose(R.transpose(), -R.transpose() * t); }
};

// Both rigs share one known baseline; canonical coordinates scale it to
// unit length along x. View 2 of a rig projects X + baseline.
struct StereoRig {
    Eigen::Vector3d baseline = Eigen::Vector3d(1, 0, 0);
};

struct ViewId {
    int camera = 1; // 1 or 2
    int view = 1;   // 1 or 2; view 2 is offset by the baseline

    bool operator==(const ViewId &o) const = default;
};

// One projection of a feature: a homogeneous image point for point features
// or 2D line coefficients (||(l1,l2)|| = 1) for line features.
struct Observation {
    Eigen::Vector3d v = Eigen::Vector3d(0, 0, 1);
    ViewId view;
};

using PointObservation = Observation;
using LineObservation = Observation;

enum class FeatureKind { Point, Line };

// A 3D point or line seen in exactly three of the four views. Exactly one
// camera sees it in both of its views; that camera is the feature's main
// camera.
struct FeatureTriplet {
    FeatureKind kind = FeatureKind::Point;
    std::array<Observation, 3> obs;

    bool is_point() const { return kind == FeatureKind::Point; }

    void validate() const {
        for (const auto &o : obs) {
            if (o.view.camera < 1 || o.view.camera > 2 || o.view.view < 1 || o.view.view > 2)
                throw_invalid_input("observation view ids must be in {1,2}");
            if (!o.v.allFinite() || o.v.isZero())
                throw_invalid_input("observation vector must be finite and nonzero");
            if (kind == FeatureKind::Line && o.v.head<2>().isZero())
                throw_invalid_input("line coefficients need a nonzero normal part");
        }
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (obs[i].view == obs[j].view)
                    throw_invalid_input("duplicate view in feature triplet");
    }

    // The camera observing the feature in both of its views.
    int main_camera() const {
        int count[2] = {0, 0};
        for (const auto &o : obs)
            count[o.view.camera - 1]++;
        if (count[0] == 2)
            return 1;
        if (count[1] == 2)
            return 2;
        throw_invalid_input("triplet does not have a main camera");
    }

    // Observation in the given view; throws if absent.
    const Observation &at(int camera, int view) const {
        for (const auto &o : obs)
            if (o.view.camera == camera && o.view.view == view)
                return o;
        throw_invalid_input("requested view not observed");
    }

    bool sees(int camera, int view) const {
        for (const auto &o : obs)
            if (o.view.camera == camera && o.view.view == view)
                return true;
        return false;
    }

    // View (on the non-main camera) holding the single extra observation.
    ViewId third_view() const {
        int main = main_camera();
        for (const auto &o : obs)
            if (o.view.camera != main)
                return o.view;
        throw_invalid_input("triplet has no third view");
    }
};

} // namespace sego
