#pragma once

#include "sego/classifier.h"
#include "sego/types.h"

#include <Eigen/Core>
#include <array>
#include <vector>

namespace sego {

// One projection constraint row over the preprocessed rotation R'. The
// alpha coefficient is either a constant (features whose main camera is the
// first) or a combination of rotation entries (main camera two).
struct ProjRow {
    Eigen::Matrix<double, 9, 1> w = Eigen::Matrix<double, 9, 1>::Zero(); // rotation part
    bool alpha_quadratic = false;
    Eigen::Matrix<double, 9, 1> walpha = Eigen::Matrix<double, 9, 1>::Zero();
    double kalpha = 0.0;
    double e = 0.0; // constant term

    double eval(const Eigen::Matrix3d &Rp, double alpha) const;
};

struct ProjConstraintSystem {
    std::array<ProjRow, 4> rows; // two per non-anchor feature
    Eigen::Matrix3d pre = Eigen::Matrix3d::Identity(); // preprocessing rotation
    Eigen::Vector3d S = Eigen::Vector3d::Zero();       // anchor, camera-1 frame
    Eigen::Vector3d b2 = Eigen::Vector3d::Zero();      // rotated camera-2 baseline
    int anchor_third_view = 1;
    Eigen::Vector3d c0 = Eigen::Vector3d::Zero();
    std::array<bool, 2> feature_is_line = {false, false}; // the non-anchor features
};

// Minimal rotation taking u_raw to the optical axis [0,0,1].
Eigen::Matrix3d preprocess_rotation(const Eigen::Vector3d &u_raw);

// Constraint system for a canonicalized hard-case instance. Observations on
// the second camera are rotated by the preprocessing rotation internally.
ProjConstraintSystem build_proj_system(const std::array<CanonicalFeature, 3> &feats);

// Rows for one preprocessed non-anchor feature; X is its triangulated point
// (or the two rows use P and P+V for lines).
std::array<ProjRow, 2> point_projection_rows(const CanonicalFeature &f_pre,
                                             const Eigen::Vector3d &X,
                                             const ProjConstraintSystem &sys);
std::array<ProjRow, 2> line_projection_rows(const CanonicalFeature &f_pre,
                                            const Eigen::Vector3d &P, const Eigen::Vector3d &V,
                                            const ProjConstraintSystem &sys);

struct PPSEgoOptions {
    double imag_tol = 5e-2;
    double consistency_tol = 1e-4;
};

// Up to 16 relative poses for a hard-case minimal instance (8 after the
// quaternion sign is fixed).
std::vector<Pose> solve_ppsego(const std::array<FeatureTriplet, 3> &features,
                               const CaseLabel &label, const PPSEgoOptions &opts = {});

} // namespace sego
