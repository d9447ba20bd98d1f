#pragma once

#include "sego/classifier.h"
#include "sego/quadrics.h"
#include "sego/solver_episego.h"
#include "sego/solver_ppsego.h"
#include "sego/types.h"

#include <vector>

namespace sego {

enum class HardSolver { EpiSEgo, PPSEgo, Auto };

struct SolveOptions {
    HardSolver hard = HardSolver::Auto; // Auto resolves to EpiSEgo
    bool condition_check = true;        // hidden-variable pivot selection
    EpiSEgoOptions episego;
    PPSEgoOptions ppsego;
};

struct SolveResult {
    CaseLabel label;
    std::vector<Pose> poses;
};

// Classifies, routes to the configured solver (easy cases always take the
// quadric-intersection route) and returns all candidate poses.
SolveResult solve_minimal(const std::array<FeatureTriplet, 3> &features,
                          const SolveOptions &opts = {});

} // namespace sego
