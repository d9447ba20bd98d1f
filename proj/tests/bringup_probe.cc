// Exploratory diagnostics for the elimination templates: row residuals at
// the planted pose, quotient-basis discovery, and end-to-end planted solves.
#include "sego/classifier.h"
#include "sego/geometry.h"
#include "sego/poly.h"
#include "sego/solve.h"
#include "sego/solver_episego.h"
#include "sego/solver_ppsego.h"
#include "sego/template_solver.h"
#include "solver_common.h"
#include "support/planted.h"

#include <cstdio>

using namespace sego;
using sego::testing::planted_instance;

namespace {

const CaseId kHard[] = {CaseId::S2P_1L, CaseId::S1P1L_1P, CaseId::S1P_2L, CaseId::S1P1L_1L,
                        CaseId::S2P_1P};

std::string mono_str(const Monomial &m, int n_vars) {
    static const char *names4 = "abcd";
    static const char *names3 = "BCD";
    std::string s;
    for (int i = 0; i < n_vars; ++i)
        for (int k = 0; k < m.e[i]; ++k)
            s += (n_vars == 4 ? names4[i] : names3[i]);
    return s.empty() ? "1" : s;
}

void probe_episego(CaseId id, int mult_degree) {
    auto inst = planted_instance(id, 42);
    CaseLabel label = classify(inst.features);
    auto feats = canonical_features(inst.features, label);
    EpiConstraintSystem sys = build_epi_system(feats);

    Eigen::Vector3d c0 =
        (sys.anchor_third_view == 2) ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d::Zero();
    Eigen::Vector3d au = inst.gt.t + inst.gt.R * sys.S + c0;
    double alpha = au.dot(sys.u) / sys.u.squaredNorm();
    printf("[%s] anchor alpha=%.4f  t-elim residual=%.3e\n", case_name(id).c_str(), alpha,
           (alpha * sys.u - au).norm());

    detail::Vec9 r = detail::vec9(inst.gt.R);
    Eigen::Vector4d res = sys.A * r + alpha * (sys.B * r);
    printf("  row residuals at gt: %.3e %.3e %.3e %.3e\n", res(0), res(1), res(2), res(3));

    Quaternion q = rotation_to_quat(inst.gt.R);
    std::array<double, 4> tilde = {q.x / q.w, q.y / q.w, q.z / q.w, 0.0};
    std::vector<MultiPoly> minors;
    {
        std::array<MultiPoly, 4> P, Q;
        for (int i = 0; i < 4; ++i) {
            P[i] = detail::rotation_combination(sys.A.row(i), true);
            Q[i] = detail::rotation_combination(sys.B.row(i), true);
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                minors.push_back(P[i] * Q[j] - P[j] * Q[i]);
    }
    double worst = 0.0;
    for (const auto &m : minors)
        worst = std::max(worst, std::abs(m.eval(tilde)) / std::max(1.0, m.max_abs_coeff()));
    printf("  worst scaled minor value at gt: %.3e\n", worst);

    auto rows = expand_and_multiply(minors, monomials_up_to_degree(3, mult_degree));
    auto standard = discover_standard_monomials(rows);
    printf("  multiplier degree %d: %zu rows, %zu standard monomials:\n   ", mult_degree,
           rows.size(), standard.size());
    for (const auto &m : standard)
        printf(" %s", mono_str(m, 3).c_str());
    printf("\n");
}

MultiPoly pp_col1(const ProjRow &r) {
    MultiPoly p = detail::rotation_combination(r.w, false);
    if (r.e != 0.0) {
        p.add_term(Monomial(0, 0, 0, 0), r.e);
        p.normalize();
    }
    return p;
}

MultiPoly pp_col2(const ProjRow &r) {
    if (r.alpha_quadratic)
        return detail::rotation_combination(r.walpha, false);
    MultiPoly p;
    if (r.kalpha != 0.0)
        p.add_term(Monomial(0, 0, 0, 0), r.kalpha);
    p.normalize();
    return p;
}

void probe_ppsego(CaseId id, uint64_t seed, bool discover) {
    auto inst = planted_instance(id, seed);
    CaseLabel label = classify(inst.features);
    auto feats = canonical_features(inst.features, label);
    ProjConstraintSystem sys = build_proj_system(feats);

    Eigen::Matrix3d Rp = sys.pre * inst.gt.R;
    Eigen::Vector3d tp = sys.pre * inst.gt.t;
    Eigen::Vector3d au = tp + Rp * sys.S + sys.c0;
    double alpha = au.z();
    printf("[%s] pp alpha=%.4f  elim residual=%.3e  rows:", case_name(id).c_str(), alpha,
           (alpha * Eigen::Vector3d::Unit(2) - au).norm());
    for (int i = 0; i < 4; ++i)
        printf(" %.3e", sys.rows[i].eval(Rp, alpha));
    printf("\n");
    if (!discover)
        return;

    // alpha-free equations by the structural pair rule
    std::vector<int> pairs;
    for (int i = 0; i < 2; ++i)
        if (!sys.rows[2 * i].alpha_quadratic)
            pairs.push_back(i);
    if (pairs.empty())
        pairs = {0, 1};
    if (id != CaseId::S1P_2L)
        pairs.resize(1);

    std::array<MultiPoly, 4> col1, col2;
    for (int i = 0; i < 4; ++i) {
        col1[i] = pp_col1(sys.rows[i]);
        col2[i] = pp_col2(sys.rows[i]);
    }
    std::vector<MultiPoly> gens;
    for (int i : pairs) {
        const ProjRow &r0 = sys.rows[2 * i], &r1 = sys.rows[2 * i + 1];
        MultiPoly f;
        if (r0.alpha_quadratic) {
            ProjRow d;
            d.w = r0.w - r1.w;
            d.e = r0.e - r1.e;
            f = pp_col1(d);
        } else {
            double s = r0.kalpha / r1.kalpha;
            ProjRow d;
            d.w = r0.w - s * r1.w;
            d.e = r0.e - s * r1.e;
            f = pp_col1(d);
        }
        gens.push_back(f);
        col1[2 * i + 1] = f;
        col2[2 * i + 1] = MultiPoly{};
    }
    MultiPoly f2;
    f2.add_term(Monomial(2, 0, 0, 0), 1);
    f2.add_term(Monomial(0, 2, 0, 0), 1);
    f2.add_term(Monomial(0, 0, 2, 0), 1);
    f2.add_term(Monomial(0, 0, 0, 2), 1);
    f2.add_term(Monomial(0, 0, 0, 0), -1);
    f2.normalize();
    gens.push_back(f2);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (col2[i].terms.empty() && col2[j].terms.empty())
                continue;
            gens.push_back(col1[i] * col2[j] - col1[j] * col2[i]);
        }

    // sanity: generators vanish at the planted quaternion
    Quaternion q = rotation_to_quat(Rp);
    std::array<double, 4> at = {q.w, q.x, q.y, q.z};
    double worst = 0.0;
    for (const auto &g : gens)
        worst = std::max(worst, std::abs(g.eval(at)) / std::max(1.0, g.max_abs_coeff()));
    printf("  %zu generators, worst scaled value at gt: %.3e\n", gens.size(), worst);

    // full multiplier cascade expansion
    std::vector<MultiPoly> rows;
    std::vector<MultiPoly> F;
    const Monomial a2(2, 0, 0, 0);
    const Monomial f2m[] = {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0},
                            {0, 2, 0, 0}, {0, 1, 1, 0}, {0, 0, 2, 0}};
    int n_af = static_cast<int>(pairs.size());
    for (int i = 0; i < n_af; ++i)
        F.push_back(gens[i] * a2);
    for (const Monomial &m : f2m) {
        if (n_af == 2 && m == a2)
            continue;
        F.push_back(f2 * m);
    }
    for (int i = 0; i < n_af; ++i)
        F.push_back(gens[i]);
    F.push_back(f2);
    for (size_t g = n_af + 1; g < gens.size(); ++g)
        F.push_back(gens[g]);
    printf("  |F| = %zu\n", F.size());

    const Monomial va(1, 0, 0, 0), vb(0, 1, 0, 0), vc(0, 0, 1, 0), vd(0, 0, 0, 1);
    std::vector<std::vector<Monomial>> steps = {{va, vb, vc, vd}, {va, vb, vc}, {va, vb}, {va}};
    rows = F;
    std::vector<MultiPoly> layer = F;
    for (const auto &st : steps) {
        std::vector<MultiPoly> next = expand_and_multiply(layer, st);
        rows.insert(rows.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    printf("  |G| raw = %zu\n", rows.size());

    auto standard = discover_standard_monomials(rows);
    printf("  %zu standard monomials:\n   ", standard.size());
    for (const auto &m : standard)
        printf(" %s", mono_str(m, 4).c_str());
    printf("\n");
}

} // namespace

int main(int argc, char **argv) {
    int deg = argc > 1 ? std::atoi(argv[1]) : 3;
    printf("==== EpiSEgo ====\n");
    for (CaseId id : kHard)
        probe_episego(id, deg);
    printf("==== PPSEgo ====\n");
    for (CaseId id : kHard)
        probe_ppsego(id, 99, true);
    return 0;
}
