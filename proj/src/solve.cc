#include "sego/solve.h"

#include "sego/solver_easy.h"

namespace sego {

SolveResult solve_minimal(const std::array<FeatureTriplet, 3> &features, const SolveOptions &opts) {
    SolveResult result;
    result.label = classify(features);
    QuadricSolveOptions qopts;
    qopts.condition_check = opts.condition_check;
    switch (solver_route(result.label.id)) {
    case Route::EasyLines:
        result.poses = solve_three_lines(features, result.label, qopts);
        break;
    case Route::EasyGp3p:
        result.poses = solve_gp3p_mixed(features, result.label, qopts);
        break;
    case Route::Hard:
        if (opts.hard == HardSolver::PPSEgo)
            result.poses = solve_ppsego(features, result.label, opts.ppsego);
        else
            result.poses = solve_episego(features, result.label, opts.episego);
        break;
    }
    return result;
}

} // namespace sego
