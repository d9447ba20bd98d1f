#include "sego/solver_episego.h"

#include "sego/errors.h"
#include "sego/geometry.h"
#include "sego/template_solver.h"
#include "solver_common.h"

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>

namespace sego {

using detail::Anchor;
using detail::Candidate;
using detail::TriFeature;
using detail::Vec9;
using RowPair = std::pair<Vec9, Vec9>;

namespace {

const Eigen::Vector3d kBaseline(1, 0, 0);

Anchor anchor_of(const EpiConstraintSystem &sys) {
    Anchor a;
    a.S = sys.S;
    a.u = sys.u;
    a.third_view = sys.anchor_third_view;
    a.c0 = (sys.anchor_third_view == 2) ? kBaseline : Eigen::Vector3d::Zero().eval();
    return a;
}

RowPair point_row(const CanonicalFeature &f, const Anchor &anchor, int beta) {
    double gamma2 = (f.third_view == 2) ? 1.0 : 0.0;
    Eigen::Vector3d db = (beta == 2) ? kBaseline : Eigen::Vector3d::Zero().eval();
    RowPair r;
    if (f.main_cam == 1) {
        const Eigen::Vector3d &x = f.main_obs[beta - 1];
        const Eigen::Vector3d &z = f.third_obs;
        Eigen::Vector3d w = gamma2 * kBaseline - anchor.c0;
        r.first =
            detail::vec9(z.cross(w) * x.transpose() - z * ((anchor.S + db).cross(x)).transpose());
        r.second = detail::vec9(z.cross(anchor.u) * x.transpose());
    } else {
        const Eigen::Vector3d &y = f.main_obs[beta - 1];
        const Eigen::Vector3d &z = f.third_obs;
        Eigen::Vector3d m0 = gamma2 * kBaseline + anchor.S;
        Eigen::Vector3d w = db - anchor.c0;
        r.first = detail::vec9(y * z.cross(m0).transpose() - w.cross(y) * z.transpose());
        r.second = detail::vec9(-(anchor.u.cross(y)) * z.transpose());
    }
    return r;
}

std::array<RowPair, 3> line_rows_raw(const TriFeature &tf, const Anchor &anchor) {
    const CanonicalFeature &f = tf.f;
    const Eigen::Vector3d &l = f.third_obs;
    double beta2 = (f.third_view == 2) ? 1.0 : 0.0;
    Eigen::Matrix3d L = skew(l);
    std::array<RowPair, 3> rows;
    if (f.main_cam == 1) {
        Eigen::Vector3d w = beta2 * kBaseline - anchor.c0;
        Eigen::Matrix3d LW = L * skew(w);
        Eigen::Matrix3d LU = L * skew(anchor.u);
        Eigen::Vector3d pv = (tf.P - anchor.S).cross(tf.V);
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d ei = Eigen::Vector3d::Unit(i);
            rows[i].first = detail::vec9(ei.cross(l) * pv.transpose() +
                                         LW.row(i).transpose() * tf.V.transpose());
            rows[i].second = detail::vec9(LU.row(i).transpose() * tf.V.transpose());
        }
    } else {
        Eigen::Vector3d pc = (tf.P + anchor.c0).cross(tf.V);
        Eigen::Vector3d uv = anchor.u.cross(tf.V);
        Eigen::Matrix3d LSB = L * (skew(anchor.S) + beta2 * skew(kBaseline));
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d ei = Eigen::Vector3d::Unit(i);
            rows[i].first = detail::vec9(pc * ei.cross(l).transpose() + tf.V * LSB.row(i));
            rows[i].second = detail::vec9(-uv * ei.cross(l).transpose());
        }
    }
    return rows;
}

std::array<RowPair, 2> pick_two(const std::array<RowPair, 3> &raw) {
    std::array<double, 3> norms;
    for (int i = 0; i < 3; ++i)
        norms[i] = raw[i].first.squaredNorm() + raw[i].second.squaredNorm();
    int drop = 0;
    for (int i = 1; i < 3; ++i)
        if (norms[i] < norms[drop])
            drop = i;
    std::array<RowPair, 2> out;
    int k = 0;
    for (int i = 0; i < 3; ++i)
        if (i != drop)
            out[k++] = raw[i];
    return out;
}

// 32-dimensional quotient basis over (b~, c~, d~); shared by all hard cases.
const std::vector<Monomial> &episego_basis() {
    static const std::vector<Monomial> basis = {
        {0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {0, 1, 0}, {0, 2, 0}, {0, 3, 0}, {1, 1, 0},
        {1, 2, 0}, {2, 1, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3}, {0, 0, 4}, {0, 0, 5}, {1, 0, 1},
        {1, 0, 2}, {1, 0, 3}, {1, 0, 4}, {2, 0, 1}, {2, 0, 2}, {0, 1, 1}, {0, 1, 2}, {0, 1, 3},
        {0, 1, 4}, {0, 2, 1}, {0, 2, 2}, {0, 3, 1}, {1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}};
    return basis;
}

const std::vector<Monomial> &generator_support() {
    static const std::vector<Monomial> s = monomials_up_to_degree(3, 4);
    return s;
}

std::vector<Eigen::VectorXd> minor_coeffs(const EpiConstraintSystem &sys) {
    std::array<MultiPoly, 4> P, Q;
    for (int i = 0; i < 4; ++i) {
        P[i] = detail::rotation_combination(sys.A.row(i), /*tilde=*/true);
        Q[i] = detail::rotation_combination(sys.B.row(i), /*tilde=*/true);
    }
    const auto &support = generator_support();
    std::vector<Eigen::VectorXd> coeffs;
    coeffs.reserve(6);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            MultiPoly det = P[i] * Q[j] - P[j] * Q[i];
            Eigen::VectorXd c = Eigen::VectorXd::Zero(support.size());
            size_t k = 0;
            for (const auto &[m, v] : det.terms) {
                while (k < support.size() && !(support[k] == m))
                    ++k;
                if (k == support.size())
                    throw_numeric_failure("episego: determinant support mismatch");
                c[k] = v;
            }
            coeffs.push_back(std::move(c));
        }
    }
    return coeffs;
}

EpiConstraintSystem system_for(const std::array<FeatureTriplet, 3> &features,
                               const CaseLabel &label) {
    return build_epi_system(canonical_features(features, label));
}

// One selected template per (multiplier degree, case); immutable once built.
const EliminationTemplate &get_template(int multiplier_degree, CaseId id) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<EliminationTemplate>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(multiplier_degree, static_cast<int>(id));
    auto it = cache.find(key);
    if (it != cache.end())
        return *it->second;

    std::vector<std::vector<Monomial>> supports(6, generator_support());
    std::vector<std::pair<int, Monomial>> rows;
    for (int g = 0; g < 6; ++g)
        for (const Monomial &m : monomials_up_to_degree(3, multiplier_degree))
            rows.emplace_back(g, m);
    std::vector<Monomial> targets;
    for (const Monomial &b : episego_basis())
        targets.push_back(b * Monomial(0, 0, 1));
    auto T = std::make_unique<EliminationTemplate>(std::move(supports), std::move(rows),
                                                   episego_basis(), targets);
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        try {
            detail::CannedInstance inst = detail::canned_instance(id, seed);
            CaseLabel label = classify(inst.features);
            T->accumulate_selection(minor_coeffs(system_for(inst.features, label)));
        } catch (const Error &) {
            // fall back to the un-selected template
        }
    }
    const auto &ref = *T;
    cache.emplace(key, std::move(T));
    return ref;
}

} // namespace

std::array<RowPair, 2> build_point_epipolar_rows(const CanonicalFeature &feature,
                                                 const EpiConstraintSystem &sys) {
    Anchor a = anchor_of(sys);
    return {point_row(feature, a, 1), point_row(feature, a, 2)};
}

std::array<RowPair, 3> build_line_pluecker_rows_raw(const CanonicalFeature &feature,
                                                    const EpiConstraintSystem &sys) {
    TriFeature tf = detail::triangulate_feature(feature, kBaseline);
    return line_rows_raw(tf, anchor_of(sys));
}

std::array<RowPair, 2> build_line_pluecker_rows(const CanonicalFeature &feature,
                                                const EpiConstraintSystem &sys) {
    return pick_two(build_line_pluecker_rows_raw(feature, sys));
}

EpiConstraintSystem build_epi_system(const std::array<CanonicalFeature, 3> &feats) {
    if (!feats[0].is_point || feats[0].main_cam != 1)
        throw_invalid_input("build_epi_system: anchor must be a camera-1 point");
    EpiConstraintSystem sys;
    TriFeature anchor_tf = detail::triangulate_feature(feats[0], kBaseline);
    sys.S = anchor_tf.X;
    sys.u = feats[0].third_obs;
    sys.anchor_third_view = feats[0].third_view;

    int r = 0;
    for (int i = 1; i < 3; ++i) {
        std::array<RowPair, 2> rows = feats[i].is_point
                                          ? build_point_epipolar_rows(feats[i], sys)
                                          : build_line_pluecker_rows(feats[i], sys);
        for (const auto &[a, b] : rows) {
            sys.A.row(r) = a.transpose();
            sys.B.row(r) = b.transpose();
            ++r;
        }
    }
    return sys;
}

std::vector<Pose> solve_episego(const std::array<FeatureTriplet, 3> &features,
                                const CaseLabel &label, const EpiSEgoOptions &opts) {
    if (!is_hard(label.id))
        throw_invalid_input("solve_episego: label does not route to the hard solvers");
    EpiConstraintSystem sys = system_for(features, label);
    Anchor anchor = anchor_of(sys);

    std::vector<Eigen::VectorXd> coeffs = minor_coeffs(sys);
    const EliminationTemplate &T = get_template(opts.multiplier_degree, label.id);

    std::vector<bool> expressed;
    Eigen::MatrixXd X = T.reduce(coeffs, &expressed);
    Eigen::MatrixXd A = action_matrix_from_reduction(T, X, expressed, /*action_var=*/2);
    std::vector<std::array<double, 4>> sols =
        eigen_solutions_action(A, episego_basis(), 3, /*action_var=*/2,
                               {opts.imag_tol, opts.consistency_tol});

    std::vector<Candidate> cands;
    std::vector<Eigen::Vector3d> seen;
    for (const auto &s : sols) {
        Eigen::Vector3d bcd(s[0], s[1], s[2]);
        bool dup = false;
        for (const auto &p : seen)
            if ((p - bcd).norm() < 1e-9 * (1.0 + bcd.norm()))
                dup = true;
        if (dup)
            continue;
        seen.push_back(bcd);
        Quaternion q = detail::quat_from_tilde(bcd);
        Eigen::Matrix3d R = quat_to_rotation(q);
        Vec9 r = detail::vec9(R);

        Eigen::Vector4d p = sys.A * r, qv = sys.B * r;
        double denom = qv.squaredNorm();
        if (denom < 1e-300)
            continue;
        double alpha = -p.dot(qv) / denom;

        double residual = 0.0;
        for (int i = 0; i < 4; ++i) {
            double scale = std::max({std::abs(p(i)), std::abs(alpha * qv(i)), 1e-12});
            residual = std::max(residual, std::abs(p(i) + alpha * qv(i)) / scale);
        }
        if (residual > 1e-6)
            continue;

        Candidate c;
        c.pose = Pose(R, alpha * anchor.u - R * anchor.S - anchor.c0);
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
