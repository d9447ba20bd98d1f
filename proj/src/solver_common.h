#pragma once

#include "sego/classifier.h"
#include "sego/geometry.h"
#include "sego/poly.h"
#include "sego/types.h"

#include <Eigen/Core>
#include <array>

namespace sego::detail {

using Vec9 = Eigen::Matrix<double, 9, 1>;

// Entries of the quaternion rotation matrix as homogeneous quadratics over
// slots (a, b, c, d), row-major.
const std::array<MultiPoly, 9> &rotation_polys_quat();

// Entries of R / a^2 over slots (b~, c~, d~), row-major.
const std::array<MultiPoly, 9> &rotation_polys_tilde();

// sum_k w[k] * R_poly[k], row-major vec(R) convention.
MultiPoly rotation_combination(const Vec9 &w, bool tilde);

inline Vec9 vec9(const Eigen::Matrix3d &M) {
    Vec9 v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            v[3 * i + j] = M(i, j);
    return v;
}

inline Quaternion quat_from_tilde(const Eigen::Vector3d &bcd) {
    double a = 1.0 / std::sqrt(1.0 + bcd.squaredNorm());
    return Quaternion{a, a * bcd.x(), a * bcd.y(), a * bcd.z()};
}

// Canonical feature with its main-camera triangulation.
struct TriFeature {
    CanonicalFeature f;
    Eigen::Vector3d X = Eigen::Vector3d::Zero(); // point position
    Eigen::Vector3d P = Eigen::Vector3d::Zero(); // line point
    Eigen::Vector3d V = Eigen::Vector3d::Zero(); // line unit direction
};

// Triangulates in the feature's main camera; `baseline` is that camera's
// view-2 offset (it differs from [1,0,0] after a preprocessing rotation).
TriFeature triangulate_feature(const CanonicalFeature &f, const Eigen::Vector3d &baseline);

struct Anchor {
    Eigen::Vector3d S;  // anchor point in camera-1 frame
    Eigen::Vector3d u;  // its projection onto the second camera
    int third_view = 1; // which view of camera 2
    Eigen::Vector3d c0; // view offset consumed by the translation elimination
};

Anchor make_anchor(const TriFeature &anchor_point, const Eigen::Vector3d &cam2_baseline);

// Candidate ordering: positive anchor depth first, then algebraic residual.
struct Candidate {
    Pose pose;
    double alpha = 0.0;
    double residual = 0.0;
};

std::vector<Pose> order_candidates(std::vector<Candidate> cands);

// Per-case visibility pattern: each feature's kind, main camera, and the
// view of the other camera holding its third observation.
struct FeatureSpec {
    FeatureKind kind;
    int main_cam;
    int third_view;
};

std::array<FeatureSpec, 3> case_pattern(CaseId id);

// Deterministic noise-free instance of one case, used to pin down template
// row selections on generic data. Returns the features and the planted pose.
struct CannedInstance {
    std::array<FeatureTriplet, 3> features;
    Pose gt;
};

CannedInstance canned_instance(CaseId id, uint64_t seed);

} // namespace sego::detail
