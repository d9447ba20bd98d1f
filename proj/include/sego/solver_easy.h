#pragma once

#include "sego/classifier.h"
#include "sego/quadrics.h"
#include "sego/types.h"

#include <vector>

namespace sego {

// Three-line configurations (S3L, S2L-1L): each line contributes one
// triple-product constraint on the rotation; the three quadrics are solved
// by the hidden-variable method and the translation follows linearly from
// the plane-incidence conditions. At most 8 poses.
std::vector<Pose> solve_three_lines(const std::array<FeatureTriplet, 3> &features,
                                    const CaseLabel &label, const QuadricSolveOptions &qopts = {});

// Single-main-camera mixed sets (S3P, S2P1L, S1P2L): generalized absolute
// pose via depth elimination, reduced to the same three-quadric problem.
// At most 8 poses.
std::vector<Pose> solve_gp3p_mixed(const std::array<FeatureTriplet, 3> &features,
                                   const CaseLabel &label, const QuadricSolveOptions &qopts = {});

} // namespace sego
