#include "sego/classifier.h"
#include "sego/geometry.h"
#include "sego/solver_episego.h"
#include "support/planted.h"
#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>

using namespace sego;
using sego::testing::planted_instance;

int main(int argc, char **argv) {
    CaseId id = case_from_name(argc > 1 ? argv[1] : "S2P-1L");
    for (int t : {2, 25, 48}) {
        auto inst = planted_instance(id, 1000 + t);
        CaseLabel label = classify(inst.features);
        auto feats = canonical_features(inst.features, label);
        EpiConstraintSystem sys = build_epi_system(feats);
        for (int i = 1; i < 3; ++i) {
            if (feats[i].is_point)
                continue;
            auto raw = build_line_pluecker_rows_raw(feats[i], sys);
            Eigen::Matrix<double, 3, 18> M;
            for (int r = 0; r < 3; ++r) {
                M.block<1, 9>(r, 0) = raw[r].first.transpose();
                M.block<1, 9>(r, 9) = raw[r].second.transpose();
            }
            Eigen::JacobiSVD<Eigen::Matrix<double, 3, 18>> svd(M);
            printf("t=%d feat %d line: raw sv = %.3e %.3e %.3e | pair sv2:", t, i,
                   svd.singularValues()(0), svd.singularValues()(1), svd.singularValues()(2));
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    Eigen::Matrix<double, 2, 18> P;
                    P.row(0) = M.row(a);
                    P.row(1) = M.row(b);
                    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 18>> s2(P);
                    printf(" (%d%d)=%.2e", a, b, s2.singularValues()(1));
                }
            // which pair does pick-two keep? largest norms
            double n0 = M.row(0).squaredNorm(), n1 = M.row(1).squaredNorm(),
                   n2 = M.row(2).squaredNorm();
            int drop = (n0 <= n1 && n0 <= n2) ? 0 : (n1 <= n2 ? 1 : 2);
            printf("  dropped=%d\n", drop);
        }
    }
    return 0;
}
