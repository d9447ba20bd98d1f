#pragma once

#include "sego/solve.h"
#include "sego/types.h"

#include <cstdint>
#include <vector>

namespace sego {

// Pixel scale of the evaluation protocol: 1000 px image side at 90 degrees
// field of view.
constexpr double kDefaultFocalPx = 500.0;

// A scored feature track: three observations (a triplet) or four (seen in
// every view; scored by cross-pair reprojection, sampled via its triplet).
struct Correspondence {
    FeatureKind kind = FeatureKind::Point;
    std::vector<Observation> obs;

    bool is_quad() const { return obs.size() == 4; }
    FeatureTriplet triplet() const;
    void validate() const;
};

Correspondence make_correspondence(const FeatureTriplet &t);

// Reprojection residual in pixels: triangulate in the main camera, project
// onto the remaining view(s), compare. Infinite for cheirality or
// triangulation failures.
double reprojection_residual(const Correspondence &corr, const Pose &pose,
                             double focal_px = kDefaultFocalPx);

struct RansacConfig {
    double threshold_px = 5.0;
    double confidence = 0.999;
    double initial_outlier_ratio = 0.5;
    int max_iterations = 1000;
    uint64_t seed = 0;
    HardSolver solver = HardSolver::Auto;
    bool condition_check = true;
    bool refine = true; // final pose-only refinement over the inlier set
    double focal_px = kDefaultFocalPx;
};

struct Hypothesis {
    Pose pose;
    std::vector<int> inliers;
    int score = 0;
    double mean_inlier_residual = 0.0;
};

Hypothesis ransac_estimate(const std::vector<Correspondence> &correspondences,
                           const RansacConfig &cfg);

enum class RefineMode { PoseOnly, FullBA };

struct RefineResult {
    Pose pose;
    bool diverged = false;
    int iterations = 0;
    double initial_cost = 0.0;
    double final_cost = 0.0;
};

// Levenberg-Marquardt minimization of the squared reprojection residuals.
// FullBA optimizes the feature structure jointly (the reference oracle used
// for accuracy comparisons); PoseOnly keeps main-camera structure fixed.
RefineResult refine_pose(const std::vector<Correspondence> &correspondences, const Pose &initial,
                         const std::vector<int> &inliers, RefineMode mode = RefineMode::FullBA,
                         double focal_px = kDefaultFocalPx);

} // namespace sego
