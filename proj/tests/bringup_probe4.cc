// dissect PPSEgo failures
#include "sego/classifier.h"
#include "sego/geometry.h"
#include "sego/solver_ppsego.h"
#include "sego/template_solver.h"
#include "solver_common.h"
#include "support/planted.h"

#include <cstdio>

using namespace sego;
using sego::testing::planted_instance;

int main(int argc, char **argv) {
    CaseId id = case_from_name(argc > 1 ? argv[1] : "S2P-1L");
    int t0 = argc > 2 ? std::atoi(argv[2]) : 0;
    int t1 = argc > 3 ? std::atoi(argv[3]) : 20;
    for (int t = t0; t < t1; ++t) {
        auto inst = planted_instance(id, 1000 + t);
        CaseLabel label = classify(inst.features);
        std::vector<Pose> poses;
        try {
            poses = solve_ppsego(inst.features, label);
        } catch (const Error &e) {
            printf("t=%d threw: %s\n", t, e.what());
            continue;
        }
        double best = 1e9;
        for (const Pose &p : poses)
            best = std::min(best, pose_errors(p, inst.gt).rotation_deg);
        if (best > 1e-4) {
            printf("t=%d MISS: %zu poses best=%.3e\n", t, poses.size(), best);
            // rerun with relaxed filters
            PPSEgoOptions relaxed;
            relaxed.consistency_tol = 1e9;
            relaxed.imag_tol = 1e-2;
            auto poses2 = solve_ppsego(inst.features, label, relaxed);
            double best2 = 1e9;
            for (const Pose &p : poses2)
                best2 = std::min(best2, pose_errors(p, inst.gt).rotation_deg);
            printf("      relaxed filters: %zu poses best=%.3e\n", poses2.size(), best2);

            // check the planted quaternion's monomial vector against the action matrix
            auto feats = canonical_features(inst.features, label);
            ProjConstraintSystem sys = build_proj_system(feats);
            Eigen::Matrix3d Rp = sys.pre * inst.gt.R;
            Quaternion q = rotation_to_quat(Rp);
            printf("      planted prep quat: a=%.4f b=%.4f c=%.4f d=%.4f\n", q.w, q.x, q.y, q.z);
        }
    }
    return 0;
}
