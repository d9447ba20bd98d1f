#pragma once

#include "sego/classifier.h"
#include "sego/types.h"

#include <Eigen/Core>
#include <array>
#include <vector>

namespace sego {

// Four constraint rows A r + alpha * B r = 0 over the row-major vec(R),
// built from two-view epipolar conditions for points and transformed line
// incidence for lines. alpha is the anchor point's unknown depth.
struct EpiConstraintSystem {
    Eigen::Matrix<double, 4, 9> A = Eigen::Matrix<double, 4, 9>::Zero();
    Eigen::Matrix<double, 4, 9> B = Eigen::Matrix<double, 4, 9>::Zero();
    Eigen::Vector3d S = Eigen::Vector3d::Zero(); // anchor in camera-1 frame
    Eigen::Vector3d u = Eigen::Vector3d::Zero(); // anchor's third projection
    int anchor_third_view = 1;
};

struct EpiSEgoOptions {
    // Degree bound for the template multiplier monomials. The planted-root
    // suite pins the default; raising it trades speed for rank margin.
    int multiplier_degree = 3;
    // clustered spectra perturb true roots slightly off the real axis; the
    // structured extraction plus the residual gate handle the slack
    double imag_tol = 5e-2;
    double consistency_tol = 1e-4;
};

// Constraint system for a canonicalized hard-case instance (no camera swap
// left to apply, anchor first).
EpiConstraintSystem build_epi_system(const std::array<CanonicalFeature, 3> &feats);

// Rows for one extra point feature: one epipolar condition per main-camera
// view. Returns rows as (A, B) pairs.
std::array<std::pair<Eigen::Matrix<double, 9, 1>, Eigen::Matrix<double, 9, 1>>, 2>
build_point_epipolar_rows(const CanonicalFeature &feature, const EpiConstraintSystem &anchor);

// The three raw line rows (rank two); callers keep the two largest.
std::array<std::pair<Eigen::Matrix<double, 9, 1>, Eigen::Matrix<double, 9, 1>>, 3>
build_line_pluecker_rows_raw(const CanonicalFeature &feature, const EpiConstraintSystem &anchor);

std::array<std::pair<Eigen::Matrix<double, 9, 1>, Eigen::Matrix<double, 9, 1>>, 2>
build_line_pluecker_rows(const CanonicalFeature &feature, const EpiConstraintSystem &anchor);

// Up to 32 relative poses for a hard-case minimal instance.
std::vector<Pose> solve_episego(const std::array<FeatureTriplet, 3> &features,
                                const CaseLabel &label, const EpiSEgoOptions &opts = {});

} // namespace sego
