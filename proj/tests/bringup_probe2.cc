// Expressibility check: can the cascade template express a*basis over the
// declared quotient basis? Tests raw vs homogenized generators.
#include "sego/classifier.h"
#include "sego/geometry.h"
#include "sego/poly.h"
#include "sego/solver_ppsego.h"
#include "sego/template_solver.h"
#include "solver_common.h"
#include "support/planted.h"

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

using namespace sego;
using sego::testing::planted_instance;

namespace {

const CaseId kHard[] = {CaseId::S2P_1L, CaseId::S1P1L_1P, CaseId::S1P_2L, CaseId::S1P1L_1L,
                        CaseId::S2P_1P};

int g_pair_mode = -1; // -1 structural, 0 first feature, 1 second, 2 both
int g_basis = -1;     // -1 per case table, 0 = A, 1 = B

std::string mono_str(const Monomial &m) {
    static const char *names = "abcd";
    std::string s;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < m.e[i]; ++k)
            s += names[i];
    return s.empty() ? "1" : s;
}

MultiPoly pp_col1(const ProjRow &r, bool homog) {
    MultiPoly p = detail::rotation_combination(r.w, false);
    if (r.e != 0.0) {
        if (homog) {
            p.add_term(Monomial(2, 0, 0, 0), r.e);
            p.add_term(Monomial(0, 2, 0, 0), r.e);
            p.add_term(Monomial(0, 0, 2, 0), r.e);
            p.add_term(Monomial(0, 0, 0, 2), r.e);
        } else {
            p.add_term(Monomial(0, 0, 0, 0), r.e);
        }
        p.normalize();
    }
    return p;
}

MultiPoly pp_col2(const ProjRow &r, bool homog) {
    MultiPoly p;
    if (r.alpha_quadratic)
        return detail::rotation_combination(r.walpha, false);
    if (r.kalpha != 0.0) {
        if (homog) {
            p.add_term(Monomial(2, 0, 0, 0), r.kalpha);
            p.add_term(Monomial(0, 2, 0, 0), r.kalpha);
            p.add_term(Monomial(0, 0, 2, 0), r.kalpha);
            p.add_term(Monomial(0, 0, 0, 2), r.kalpha);
        } else {
            p.add_term(Monomial(0, 0, 0, 0), r.kalpha);
        }
        p.normalize();
    }
    return p;
}

std::vector<Monomial> basis_for(CaseId id) {
    std::vector<Monomial> basis_a = {
        {0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}, {0, 1, 0, 0}, {0, 2, 0, 0},
        {1, 1, 0, 0}, {2, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {2, 0, 1, 0}, {0, 1, 1, 0},
        {0, 0, 0, 1}, {1, 0, 0, 1}, {2, 0, 0, 1}, {0, 1, 0, 1}};
    std::vector<Monomial> basis_b = {
        {0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}, {4, 0, 0, 0}, {0, 1, 0, 0},
        {0, 2, 0, 0}, {1, 1, 0, 0}, {2, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {2, 0, 1, 0},
        {0, 1, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 1}, {2, 0, 0, 1}};
    if (g_basis == 0) return basis_a;
    if (g_basis == 1) return basis_b;
    if (id == CaseId::S1P1L_1P || id == CaseId::S1P1L_1L)
        return basis_a;
    return basis_b;
}

void probe(CaseId id, bool homog) {
    auto inst = planted_instance(id, 7);
    CaseLabel label = classify(inst.features);
    auto feats = canonical_features(inst.features, label);
    ProjConstraintSystem sys = build_proj_system(feats);

    std::vector<int> pairs;
    if (g_pair_mode == 0) pairs = {0};
    else if (g_pair_mode == 1) pairs = {1};
    else if (g_pair_mode == 2) pairs = {0, 1};
    else {
        for (int i = 0; i < 2; ++i)
            if (!sys.rows[2 * i].alpha_quadratic)
                pairs.push_back(i);
        if (pairs.empty())
            pairs = {0, 1};
        if (id != CaseId::S1P_2L)
            pairs.resize(1);
    }

    std::array<MultiPoly, 4> col1, col2;
    for (int i = 0; i < 4; ++i) {
        col1[i] = pp_col1(sys.rows[i], homog);
        col2[i] = pp_col2(sys.rows[i], homog);
    }
    std::vector<MultiPoly> gens;
    for (int i : pairs) {
        const ProjRow &r0 = sys.rows[2 * i], &r1 = sys.rows[2 * i + 1];
        ProjRow d;
        if (r0.alpha_quadratic) {
            d.w = r0.w - r1.w;
            d.e = r0.e - r1.e;
        } else {
            double s = r0.kalpha / r1.kalpha;
            d.w = r0.w - s * r1.w;
            d.e = r0.e - s * r1.e;
        }
        gens.push_back(pp_col1(d, homog));
        col1[2 * i + 1] = gens.back();
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

    int n_af = (int)pairs.size();
    std::vector<MultiPoly> F;
    const Monomial a2(2, 0, 0, 0);
    const Monomial f2m[] = {{2,0,0,0},{1,1,0,0},{1,0,1,0},{0,2,0,0},{0,1,1,0},{0,0,2,0}};
    for (int i = 0; i < n_af; ++i) F.push_back(gens[i] * a2);
    for (const Monomial &m : f2m) { if (n_af == 2 && m == a2) continue; F.push_back(f2 * m); }
    for (int i = 0; i < n_af; ++i) F.push_back(gens[i]);
    F.push_back(f2);
    for (size_t g = n_af + 1; g < gens.size(); ++g) F.push_back(gens[g]);

    const Monomial va(1,0,0,0), vb(0,1,0,0), vc(0,0,1,0), vd(0,0,0,1);
    std::vector<std::vector<Monomial>> steps = {{va,vb,vc,vd},{va,vb,vc},{va,vb},{va}};
    std::vector<MultiPoly> rows = F;
    std::vector<MultiPoly> layer = F;
    for (const auto &st : steps) {
        std::vector<MultiPoly> next = expand_and_multiply(layer, st);
        rows.insert(rows.end(), next.begin(), next.end());
        layer = std::move(next);
    }

    // column set
    std::vector<Monomial> cols;
    {
        std::set<uint32_t> seen;
        for (const auto &p : rows)
            for (const auto &[m, c] : p.terms)
                if (seen.insert(m.key()).second)
                    cols.push_back(m);
    }
    std::sort(cols.begin(), cols.end(), grevlex_greater);
    std::map<uint32_t,int> idx;
    for (int i = 0; i < (int)cols.size(); ++i) idx[cols[i].key()] = i;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        for (const auto &[m, c] : rows[r].terms)
            T(r, idx[m.key()]) += c;
        double mx = T.row(r).cwiseAbs().maxCoeff();
        if (mx > 0) T.row(r) /= mx;
    }

    // W + span(basis): expressibility of each needed monomial
    std::vector<Monomial> basis = basis_for(id);
    Eigen::MatrixXd units = Eigen::MatrixXd::Zero(basis.size(), cols.size());
    for (size_t i = 0; i < basis.size(); ++i) {
        auto it = idx.find(basis[i].key());
        if (it == idx.end()) { printf("  basis monomial %s missing!\n", mono_str(basis[i]).c_str()); return; }
        units(i, it->second) = 1.0;
    }
    Eigen::MatrixXd M(rows.size() + basis.size(), cols.size());
    M << T, units;
    // orthonormal basis of the row space via thin SVD-free approach: use QR of M^T? do SVD
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-9 * smax) ++rank;
    printf("[%s]%s rank(W+B) = %d of %zu cols; ", case_name(id).c_str(),
           homog ? " homog" : " raw  ", rank, cols.size());

    Eigen::MatrixXd Vr = svd.matrixV().leftCols(rank); // row space basis (as column space of V)
    auto expressible = [&](const Monomial &m) {
        auto it = idx.find(m.key());
        if (it == idx.end()) return false;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(cols.size());
        e[it->second] = 1.0;
        double out_of_plane = (e - Vr * (Vr.transpose() * e)).norm();
        return out_of_plane < 1e-7;
    };
    printf("needed:");
    bool all = true;
    for (const Monomial &b : basis) {
        Monomial m = b * va;
        bool in_basis = false;
        for (const Monomial &bb : basis)
            if (bb == m) in_basis = true;
        if (in_basis) continue;
        bool ok = expressible(m);
        all = all && ok;
        printf(" %s:%s", mono_str(m).c_str(), ok ? "Y" : "N");
    }
    printf("  => %s\n", all ? "OK" : "INSUFFICIENT");
}

} // namespace

int main(int argc, char **argv) {
    if (argc > 1) g_pair_mode = std::atoi(argv[1]);
    if (argc > 2) g_basis = std::atoi(argv[2]);
    if (argc > 3) {
        probe(case_from_name(argv[3]), true);
        return 0;
    }
    for (CaseId id : kHard) {
        probe(id, false);
        probe(id, true);
    }
    return 0;
}
