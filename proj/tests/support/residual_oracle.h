#pragma once

#include "sego/types.h"

#include <array>

namespace sego::testing {

// Constraint formulation the oracle evaluates. The oracle re-derives each
// constraint from the raw observations and a candidate pose; it never calls
// into the solvers' elimination machinery.
enum class OracleForm {
    Epipolar,      // two-view epipolar for points, transformed line incidence
    Projection,    // projection-difference rows for points and lines
    TripleProduct, // line-only rotation constraints plus line incidence
};

// Largest scaled constraint violation over all features and observations.
double oracle_residual(const std::array<FeatureTriplet, 3> &features, const Pose &pose,
                       OracleForm form);

// True when some feature sits behind a camera at this pose (used to qualify
// "confident" wrong poses in the degeneracy tests).
bool cheirality_ok(const std::array<FeatureTriplet, 3> &features, const Pose &pose);

} // namespace sego::testing
