#pragma once

#include "sego/types.h"

#include <array>
#include <string>

namespace sego {

// The ten canonical feature/correspondence combinations. Mirror-image
// configurations reduce to these by swapping the cameras.
enum class CaseId {
    S3P,
    S2P1L,
    S1P2L,
    S3L,
    S2L1L,
    S2P_1L,
    S1P1L_1P,
    S1P_2L,
    S1P1L_1L,
    S2P_1P,
};

constexpr int kNumCases = 10;

std::string case_name(CaseId id);
CaseId case_from_name(const std::string &name); // throws on unknown names

enum class Route { EasyLines, EasyGp3p, Hard };

struct CaseLabel {
    CaseId id = CaseId::S3P;
    bool swap_cameras = false;
    std::array<int, 3> feature_order = {0, 1, 2};
};

// Canonical label for three feature triplets. After applying swap_cameras
// and feature_order, camera 1 is main for the first listed point when points
// exist, and in the non-easy cases the first feature is the point anchoring
// the translation elimination.
CaseLabel classify(const std::array<FeatureTriplet, 3> &features);

Route solver_route(CaseId id);

bool is_hard(CaseId id);

// One feature after camera swap and reordering, with its observations laid
// out the way the solvers consume them.
struct CanonicalFeature {
    bool is_point = true;
    int main_cam = 1;                   // 1 or 2
    int third_view = 1;                 // view index on the other camera
    std::array<Eigen::Vector3d, 2> main_obs; // main-camera views 1 and 2
    Eigen::Vector3d third_obs = Eigen::Vector3d(0, 0, 1);
};

std::array<CanonicalFeature, 3> canonical_features(const std::array<FeatureTriplet, 3> &features,
                                                   const CaseLabel &label);

} // namespace sego
