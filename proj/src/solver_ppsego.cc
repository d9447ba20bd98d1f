#include "sego/solver_ppsego.h"

#include "sego/errors.h"
#include "sego/geometry.h"
#include "sego/template_solver.h"
#include "solver_common.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <map>
#include <memory>
#include <mutex>
#include <cstdlib>
#include <set>

namespace sego {

using detail::Candidate;
using detail::TriFeature;
using detail::Vec9;

namespace {

const Eigen::Vector3d kBaseline(1, 0, 0);

double parity(const Monomial &m) { return m.degree() % 2; }

// ---- bases -----------------------------------------------------------

// Quotient bases over (a, b, c, d); one for the cases with a camera-1 line
// in the non-anchor set, another for the remaining hard cases.
const std::vector<Monomial> &ppsego_basis(CaseId id) {
    static const std::vector<Monomial> basis_a = {
        {0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}, {0, 1, 0, 0}, {0, 2, 0, 0},
        {1, 1, 0, 0}, {2, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {2, 0, 1, 0}, {0, 1, 1, 0},
        {0, 0, 0, 1}, {1, 0, 0, 1}, {2, 0, 0, 1}, {0, 1, 0, 1}};
    static const std::vector<Monomial> basis_b = {
        {0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}, {4, 0, 0, 0}, {0, 1, 0, 0},
        {0, 2, 0, 0}, {1, 1, 0, 0}, {2, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {2, 0, 1, 0},
        {0, 1, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 1}, {2, 0, 0, 1}};
    switch (id) {
    case CaseId::S1P1L_1P:
    case CaseId::S1P1L_1L:
        return basis_a;
    default:
        return basis_b;
    }
}

// ---- generator structure ----------------------------------------------

std::vector<Monomial> even_monomials_up_to(int deg) {
    std::vector<Monomial> out;
    for (const Monomial &m : monomials_up_to_degree(4, deg))
        if (m.degree() % 2 == 0)
            out.push_back(m);
    return out;
}

std::vector<Monomial> monomials_of_degree(int deg) {
    std::vector<Monomial> out;
    for (const Monomial &m : monomials_up_to_degree(4, deg))
        if (m.degree() == deg)
            out.push_back(m);
    return out;
}

int alpha_free_count(CaseId id) { return id == CaseId::S1P_2L ? 2 : 1; }
int det_count(CaseId id) { return id == CaseId::S1P_2L ? 5 : 6; }

// generators: [alpha-free...] [f2] [dets...]
int generator_count(CaseId id) { return alpha_free_count(id) + 1 + det_count(id); }

struct TemplatePair {
    std::unique_ptr<EliminationTemplate> even, odd;
    std::vector<int> even_to_full, odd_to_full; // sub-basis index -> basis index
};

std::vector<std::pair<int, Monomial>> cascade_rows(CaseId id) {
    const int n_af = alpha_free_count(id);
    const int f2 = n_af;
    const int det0 = n_af + 1;

    // the seed set F
    std::vector<std::pair<int, Monomial>> F;
    const Monomial one(0, 0, 0, 0), a2(2, 0, 0, 0);
    const Monomial f2_mults[] = {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0},
                                 {0, 2, 0, 0}, {0, 1, 1, 0}, {0, 0, 2, 0}};
    for (int i = 0; i < n_af; ++i)
        F.emplace_back(i, a2);
    for (const Monomial &m : f2_mults) {
        if (n_af == 2 && m == a2)
            continue; // two depth-free seeds take its slot
        F.emplace_back(f2, m);
    }
    for (int i = 0; i < n_af; ++i)
        F.emplace_back(i, one);
    F.emplace_back(f2, one);
    for (int g = 0; g < det_count(id); ++g)
        F.emplace_back(det0 + g, one);
    if (F.size() != 15)
        throw_numeric_failure("ppsego: seed equation set must have 15 members");

    // multiply by a,b,c,d, then a,b,c, then a,b, then a; 15 * 65 = 975 raw
    const Monomial a(1, 0, 0, 0), b(0, 1, 0, 0), c(0, 0, 1, 0), d(0, 0, 0, 1);
    std::vector<std::vector<Monomial>> steps = {{a, b, c, d}, {a, b, c}, {a, b}, {a}};
    std::vector<std::pair<int, Monomial>> rows = F;
    std::vector<std::pair<int, Monomial>> layer = F;
    size_t raw = F.size();
    for (const auto &step : steps) {
        std::vector<std::pair<int, Monomial>> next;
        next.reserve(layer.size() * step.size());
        for (const auto &[g, m] : layer)
            for (const Monomial &s : step)
                next.emplace_back(g, m * s);
        raw += next.size();
        rows.insert(rows.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    if (raw != 975)
        throw_numeric_failure("ppsego: multiplier cascade must produce 975 equations");

    std::set<std::pair<int, uint32_t>> seen;
    std::vector<std::pair<int, Monomial>> unique;
    for (const auto &[g, m] : rows)
        if (seen.insert({g, m.key()}).second)
            unique.emplace_back(g, m);
    return unique;
}

std::vector<std::vector<Monomial>> generator_supports(CaseId id) {
    std::vector<std::vector<Monomial>> supports;
    const std::vector<Monomial> quad = monomials_of_degree(2);
    const std::vector<Monomial> quartic = monomials_of_degree(4);
    for (int i = 0; i < alpha_free_count(id); ++i)
        supports.push_back(quad);
    supports.push_back(even_monomials_up_to(2)); // f2 keeps its constant
    for (int g = 0; g < det_count(id); ++g)
        supports.push_back(quartic);
    return supports;
}

// ---- constraint rows ----------------------------------------------------

std::array<ProjRow, 2> build_rows(const TriFeature &tf, const ProjConstraintSystem &sys) {
    const CanonicalFeature &f = tf.f;
    std::array<ProjRow, 2> rows;
    if (f.main_cam == 1) {
        double beta2 = (f.third_view == 2) ? 1.0 : 0.0;
        Eigen::Vector3d off = beta2 * sys.b2 - sys.c0;
        if (f.is_point) {
            const Eigen::Vector3d &x = f.third_obs;
            Eigen::Vector3d XS = tf.X - sys.S;
            for (int k = 0; k < 2; ++k) {
                Eigen::Vector3d g = x(2) * Eigen::Vector3d::Unit(k) - x(k) * Eigen::Vector3d::Unit(2);
                rows[k].w = detail::vec9(g * XS.transpose());
                rows[k].kalpha = g(2); // u' = e3
                rows[k].e = g.dot(off);
            }
        } else {
            const Eigen::Vector3d &l = f.third_obs;
            for (int j = 0; j < 2; ++j) {
                Eigen::Vector3d Xj = (j == 0) ? tf.P : (tf.P + tf.V).eval();
                rows[j].w = detail::vec9(l * (Xj - sys.S).transpose());
                rows[j].kalpha = l(2); // l . e3
                rows[j].e = l.dot(off);
            }
        }
    } else {
        double beta2 = (f.third_view == 2) ? 1.0 : 0.0;
        Eigen::Vector3d off = sys.S + beta2 * kBaseline;
        if (f.is_point) {
            const Eigen::Vector3d &x = f.third_obs;
            Eigen::Vector3d Xc = tf.X + sys.c0;
            for (int k = 0; k < 2; ++k) {
                Eigen::Vector3d g = x(2) * Eigen::Vector3d::Unit(k) - x(k) * Eigen::Vector3d::Unit(2);
                rows[k].w = detail::vec9(Xc * g.transpose());
                rows[k].alpha_quadratic = true;
                rows[k].walpha = detail::vec9(-Eigen::Vector3d::Unit(2) * g.transpose());
                rows[k].e = g.dot(off);
            }
        } else {
            const Eigen::Vector3d &l = f.third_obs;
            for (int j = 0; j < 2; ++j) {
                Eigen::Vector3d Xj = (j == 0) ? tf.P : (tf.P + tf.V).eval();
                rows[j].w = detail::vec9((Xj + sys.c0) * l.transpose());
                rows[j].alpha_quadratic = true;
                rows[j].walpha = detail::vec9(-Eigen::Vector3d::Unit(2) * l.transpose());
                rows[j].e = l.dot(off);
            }
        }
    }
    return rows;
}

// depth-free combination of one row pair
struct AlphaFree {
    Vec9 w = Vec9::Zero();
    double e = 0.0;
};

AlphaFree alpha_free_from_pair(const ProjRow &r0, const ProjRow &r1) {
    AlphaFree f;
    if (r0.alpha_quadratic) {
        // shared quadratic coefficient: plain difference
        f.w = r0.w - r1.w;
        f.e = r0.e - r1.e;
        return f;
    }
    double k0 = r0.kalpha, k1 = r1.kalpha;
    if (std::abs(k1) >= std::abs(k0)) {
        double s = (k1 == 0.0) ? 0.0 : k0 / k1;
        f.w = r0.w - s * r1.w;
        f.e = r0.e - s * r1.e;
    } else {
        double s = k1 / k0;
        f.w = r1.w - s * r0.w;
        f.e = r1.e - s * r0.e;
    }
    return f;
}

// constants are spread over the unit-norm quadric so every generator except
// the norm constraint itself is homogeneous
void add_homogenized_constant(MultiPoly *p, double e) {
    if (e == 0.0)
        return;
    p->add_term(Monomial(2, 0, 0, 0), e);
    p->add_term(Monomial(0, 2, 0, 0), e);
    p->add_term(Monomial(0, 0, 2, 0), e);
    p->add_term(Monomial(0, 0, 0, 2), e);
    p->normalize();
}

MultiPoly row_col1(const ProjRow &r) {
    MultiPoly p = detail::rotation_combination(r.w, /*tilde=*/false);
    add_homogenized_constant(&p, r.e);
    return p;
}

MultiPoly row_col2(const ProjRow &r) {
    if (r.alpha_quadratic)
        return detail::rotation_combination(r.walpha, /*tilde=*/false);
    MultiPoly p;
    add_homogenized_constant(&p, r.kalpha);
    return p;
}

MultiPoly alpha_free_poly(const AlphaFree &f) {
    MultiPoly p = detail::rotation_combination(f.w, /*tilde=*/false);
    add_homogenized_constant(&p, f.e);
    return p;
}

// generator polynomials in the fixed order [alpha-free...] [f2] [dets...]
std::vector<MultiPoly> generator_polys(const ProjConstraintSystem &sys, CaseId id) {
    // Structural pair rule: the difference of a line feature's two rows is
    // the best-behaved depth-free equation (its alpha coefficients agree
    // exactly); point pairs are the fallback when no line is present.
    std::vector<int> pair_features;
    for (int i = 0; i < 2; ++i)
        if (sys.feature_is_line[i])
            pair_features.push_back(i);
    if (pair_features.empty())
        for (int i = 0; i < 2; ++i)
            if (!sys.rows[2 * i].alpha_quadratic)
                pair_features.push_back(i);
    if (id == CaseId::S1P_2L && pair_features.size() != 2)
        throw_numeric_failure("ppsego: S1P-2L must contribute two depth-free equations");
    if (id != CaseId::S1P_2L)
        pair_features.resize(1);

    std::vector<MultiPoly> gens;
    // D' columns with the second row of each pair replaced by the difference
    std::array<MultiPoly, 4> col1, col2;
    for (int r = 0; r < 4; ++r) {
        col1[r] = row_col1(sys.rows[r]);
        col2[r] = row_col2(sys.rows[r]);
    }
    for (int i : pair_features) {
        AlphaFree f = alpha_free_from_pair(sys.rows[2 * i], sys.rows[2 * i + 1]);
        gens.push_back(alpha_free_poly(f));
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

    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (col2[i].terms.empty() && col2[j].terms.empty())
                continue; // identically zero determinant
            gens.push_back(col1[i] * col2[j] - col1[j] * col2[i]);
        }
    }
    if (static_cast<int>(gens.size()) != generator_count(id))
        throw_numeric_failure("ppsego: generator count mismatch");
    return gens;
}

std::vector<Eigen::VectorXd> align_generators(const std::vector<MultiPoly> &gens, CaseId id) {
    auto supports = generator_supports(id);
    std::vector<Eigen::VectorXd> coeffs(gens.size());
    for (size_t g = 0; g < gens.size(); ++g) {
        const auto &support = supports[g];
        Eigen::VectorXd c = Eigen::VectorXd::Zero(support.size());
        size_t k = 0;
        for (const auto &[m, v] : gens[g].terms) {
            while (k < support.size() && !(support[k] == m))
                ++k;
            if (k == support.size())
                throw_numeric_failure("ppsego: generator support mismatch");
            c[k] = v;
        }
        coeffs[g] = c;
    }
    return coeffs;
}

ProjConstraintSystem system_for(const std::array<FeatureTriplet, 3> &features,
                                const CaseLabel &label) {
    return build_proj_system(canonical_features(features, label));
}

const TemplatePair &get_templates(CaseId id) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<TemplatePair>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(static_cast<int>(id));
    if (it != cache.end())
        return *it->second;

    auto supports = generator_supports(id);
    auto all_rows = cascade_rows(id);
    const std::vector<Monomial> &basis = ppsego_basis(id);

    auto tp = std::make_unique<TemplatePair>();
    for (int par = 0; par < 2; ++par) {
        std::vector<std::pair<int, Monomial>> rows;
        for (const auto &[g, m] : all_rows)
            if (parity(m) == par)
                rows.emplace_back(g, m);
        std::vector<Monomial> sub_basis;
        std::vector<int> to_full;
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
            if (parity(basis[i]) == par) {
                sub_basis.push_back(basis[i]);
                to_full.push_back(i);
            }
        }
        std::vector<Monomial> targets;
        for (const Monomial &b : basis) {
            Monomial m = b * Monomial(1, 0, 0, 0);
            if (parity(m) == par)
                targets.push_back(m);
        }
        auto T = std::make_unique<EliminationTemplate>(supports, std::move(rows),
                                                       std::move(sub_basis), targets);
        if (par == 0) {
            tp->even = std::move(T);
            tp->even_to_full = std::move(to_full);
        } else {
            tp->odd = std::move(T);
            tp->odd_to_full = std::move(to_full);
        }
    }

    for (uint64_t seed = 1; seed <= 5; ++seed) {
        try {
            detail::CannedInstance inst = detail::canned_instance(id, seed);
            CaseLabel label = classify(inst.features);
            auto coeffs =
                align_generators(generator_polys(system_for(inst.features, label), id), id);
            tp->even->accumulate_selection(coeffs);
            tp->odd->accumulate_selection(coeffs);
        } catch (const Error &) {
        }
    }

    const auto &ref = *tp;
    cache.emplace(static_cast<int>(id), std::move(tp));
    return ref;
}

Eigen::MatrixXd assemble_action(const TemplatePair &tp, const std::vector<Monomial> &basis,
                                const Eigen::MatrixXd &Xe, const Eigen::MatrixXd &Xo,
                                const std::vector<bool> &exp_e, const std::vector<bool> &exp_o) {
    const int n = static_cast<int>(basis.size());
    const Monomial a(1, 0, 0, 0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        Monomial m = basis[i] * a;
        bool odd = parity(m) == 1;
        const EliminationTemplate &T = odd ? *tp.odd : *tp.even;
        const Eigen::MatrixXd &X = odd ? Xo : Xe;
        const std::vector<bool> &expressed = odd ? exp_o : exp_e;
        const std::vector<int> &to_full = odd ? tp.odd_to_full : tp.even_to_full;
        int col = T.column_of(m);
        if (col < 0)
            throw_numeric_failure("ppsego: action monomial missing from the template");
        if (col >= T.num_nonbasis()) {
            A(i, to_full[col - T.num_nonbasis()]) = 1.0;
        } else {
            if (!expressed[col])
                throw_degenerate_instance("ppsego: action monomial lost in the reduction");
            for (int k = 0; k < static_cast<int>(to_full.size()); ++k)
                A(i, to_full[k]) = X(col, k);
        }
    }
    return A;
}

} // namespace

double ProjRow::eval(const Eigen::Matrix3d &Rp, double alpha) const {
    Vec9 r = detail::vec9(Rp);
    double v = w.dot(r) + e;
    v += alpha * (alpha_quadratic ? walpha.dot(r) : kalpha);
    return v;
}

Eigen::Matrix3d preprocess_rotation(const Eigen::Vector3d &u_raw) {
    double n = u_raw.norm();
    if (n == 0.0 || !u_raw.allFinite())
        throw_invalid_input("preprocess_rotation: zero direction");
    Eigen::Vector3d u = u_raw / n;
    Eigen::Vector3d e3(0, 0, 1);
    double c = u.dot(e3);
    if (c < -1.0 + 1e-12) {
        Eigen::Matrix3d R;
        R << 1, 0, 0, 0, -1, 0, 0, 0, -1; // half-turn about x
        return R;
    }
    Eigen::Vector3d v = u.cross(e3);
    Eigen::Matrix3d K = skew(v);
    return Eigen::Matrix3d::Identity() + K + K * K / (1.0 + c);
}

ProjConstraintSystem build_proj_system(const std::array<CanonicalFeature, 3> &feats) {
    if (!feats[0].is_point || feats[0].main_cam != 1)
        throw_invalid_input("build_proj_system: anchor must be a camera-1 point");

    ProjConstraintSystem sys;
    sys.pre = preprocess_rotation(feats[0].third_obs);
    sys.b2 = sys.pre * kBaseline;
    sys.anchor_third_view = feats[0].third_view;
    sys.c0 = (sys.anchor_third_view == 2) ? sys.b2 : Eigen::Vector3d::Zero().eval();

    // rotate every observation living on the second camera
    std::array<CanonicalFeature, 3> pre = feats;
    for (auto &f : pre) {
        if (f.main_cam == 2) {
            for (auto &o : f.main_obs) {
                o = sys.pre * o;
                if (!f.is_point)
                    o /= o.head<2>().norm();
            }
        } else {
            f.third_obs = sys.pre * f.third_obs;
            if (!f.is_point)
                f.third_obs /= f.third_obs.head<2>().norm();
        }
    }
    pre[0].third_obs = Eigen::Vector3d(0, 0, 1);

    TriFeature anchor_tf = detail::triangulate_feature(pre[0], kBaseline);
    sys.S = anchor_tf.X;

    int r = 0;
    for (int i = 1; i < 3; ++i) {
        Eigen::Vector3d main_baseline = (pre[i].main_cam == 1) ? kBaseline : sys.b2;
        sys.feature_is_line[i - 1] = !pre[i].is_point;
        TriFeature tf = detail::triangulate_feature(pre[i], main_baseline);
        for (ProjRow &row : build_rows(tf, sys))
            sys.rows[r++] = row;
    }
    return sys;
}

std::array<ProjRow, 2> point_projection_rows(const CanonicalFeature &f_pre,
                                             const Eigen::Vector3d &X,
                                             const ProjConstraintSystem &sys) {
    TriFeature tf;
    tf.f = f_pre;
    tf.X = X;
    return build_rows(tf, sys);
}

std::array<ProjRow, 2> line_projection_rows(const CanonicalFeature &f_pre,
                                            const Eigen::Vector3d &P, const Eigen::Vector3d &V,
                                            const ProjConstraintSystem &sys) {
    TriFeature tf;
    tf.f = f_pre;
    tf.P = P;
    tf.V = V;
    return build_rows(tf, sys);
}

std::vector<Pose> solve_ppsego(const std::array<FeatureTriplet, 3> &features,
                               const CaseLabel &label, const PPSEgoOptions &opts) {
    if (!is_hard(label.id))
        throw_invalid_input("solve_ppsego: label does not route to the hard solvers");
    ProjConstraintSystem sys = system_for(features, label);

    std::vector<Eigen::VectorXd> coeffs =
        align_generators(generator_polys(sys, label.id), label.id);
    const TemplatePair &tp = get_templates(label.id);

    std::vector<bool> exp_e, exp_o;
    Eigen::MatrixXd Xe = tp.even->reduce(coeffs, &exp_e);
    Eigen::MatrixXd Xo = tp.odd->reduce(coeffs, &exp_o);
    const std::vector<Monomial> &basis = ppsego_basis(label.id);
    Eigen::MatrixXd A = assemble_action(tp, basis, Xe, Xo, exp_e, exp_o);

    std::vector<std::array<double, 4>> sols =
        eigen_solutions_action(A, basis, 4, /*action_var=*/0,
                               {opts.imag_tol, opts.consistency_tol});

    std::vector<Candidate> cands;
    std::vector<Eigen::Vector4d> seen;
    for (const auto &s : sols) {
        Eigen::Vector4d q(s[0], s[1], s[2], s[3]);
        double n = q.norm();
        if (n < 1e-12)
            continue;
        q /= n;
        if (q(0) < 0.0)
            q = -q; // the sign pair maps to one rotation
        bool dup = false;
        for (const auto &p : seen)
            if ((p - q).norm() < 1e-9)
                dup = true;
        if (dup)
            continue;
        seen.push_back(q);

        Eigen::Matrix3d Rp = quat_to_rotation(Quaternion{q(0), q(1), q(2), q(3)});
        Vec9 r = detail::vec9(Rp);

        double num = 0.0, den = 0.0;
        for (const ProjRow &row : sys.rows) {
            double c1 = row.w.dot(r) + row.e;
            double c2 = row.alpha_quadratic ? row.walpha.dot(r) : row.kalpha;
            num += c1 * c2;
            den += c2 * c2;
        }
        if (den < 1e-300)
            continue;
        double alpha = -num / den;

        double residual = 0.0;
        for (const ProjRow &row : sys.rows) {
            double c1 = row.w.dot(r) + row.e;
            double c2 = row.alpha_quadratic ? row.walpha.dot(r) : row.kalpha;
            double scale = std::max({std::abs(c1), std::abs(alpha * c2), 1e-12});
            residual = std::max(residual, std::abs(c1 + alpha * c2) / scale);
        }
        if (residual > 1e-6)
            continue;

        Eigen::Vector3d tp_vec = alpha * Eigen::Vector3d::Unit(2) - Rp * sys.S - sys.c0;
        Candidate c;
        c.pose = Pose(sys.pre.transpose() * Rp, sys.pre.transpose() * tp_vec);
        c.alpha = alpha;
        c.residual = residual;
        cands.push_back(c);
    }

    std::vector<Pose> poses = detail::order_candidates(std::move(cands));
    if (label.swap_cameras)
        for (auto &p : poses)
            p = p.inverse();
    return poses;
}

} // namespace sego
