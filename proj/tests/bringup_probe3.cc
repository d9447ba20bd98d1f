// End-to-end planted solves for both hard solvers.
#include "sego/classifier.h"
#include "sego/geometry.h"
#include "sego/solver_episego.h"
#include "sego/solver_ppsego.h"
#include "support/planted.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

using namespace sego;
using sego::testing::planted_instance;

int main(int argc, char **argv) {
    int trials = argc > 1 ? std::atoi(argv[1]) : 20;
    const CaseId hard[] = {CaseId::S2P_1L, CaseId::S1P1L_1P, CaseId::S1P_2L, CaseId::S1P1L_1L,
                           CaseId::S2P_1P};
    for (CaseId id : hard) {
        for (const char *solver : {"epi", "pp"}) {
            int found = 0, fail = 0, excess = 0;
            double worst_best = 0, sum_us = 0;
            std::vector<double> errs;
            for (int t = 0; t < trials; ++t) {
                auto inst = planted_instance(id, 1000 + t);
                CaseLabel label = classify(inst.features);
                std::vector<Pose> poses;
                auto t0 = std::chrono::steady_clock::now();
                try {
                    EpiSEgoOptions eopts;
                    if (const char *d = std::getenv("SEGO_EPI_DEGREE"))
                        eopts.multiplier_degree = std::atoi(d);
                    poses = (solver[0] == 'e') ? solve_episego(inst.features, label, eopts)
                                               : solve_ppsego(inst.features, label);
                } catch (const Error &e) {
                    ++fail;
                    continue;
                }
                auto t1 = std::chrono::steady_clock::now();
                sum_us += std::chrono::duration<double, std::micro>(t1 - t0).count();
                if ((solver[0] == 'e' && poses.size() > 32) || (solver[0] == 'p' && poses.size() > 16))
                    ++excess;
                double best = 1e9;
                for (const Pose &p : poses)
                    best = std::min(best, pose_errors(p, inst.gt).rotation_deg);
                errs.push_back(best);
                if (best < 1e-4)
                    ++found;
                worst_best = std::max(worst_best, best);
            }
            std::sort(errs.begin(), errs.end());
            double median = errs.empty() ? 1e9 : errs[errs.size() / 2];
            printf("[%s][%s] found %d/%d fail=%d excess=%d median=%.3e worst=%.3e avg_us=%.0f\n",
                   case_name(id).c_str(), solver, found, trials, fail, excess, median, worst_best,
                   sum_us / std::max(1, trials - fail));
        }
    }
    return 0;
}
