#include "sego/solver_easy.h"

#include "sego/errors.h"
#include "sego/geometry.h"
#include "solver_common.h"

#include <Eigen/Dense>

namespace sego {

using detail::Candidate;
using detail::TriFeature;
using detail::Vec9;

namespace {

const Eigen::Vector3d kBaseline(1, 0, 0);

MultiPoly tilde_quadric_from_rotation(const Vec9 &w, double constant) {
    // w . vec(R) + constant = 0, homogenized with the unit-norm constraint
    // and divided by a^2.
    MultiPoly p = detail::rotation_combination(w, /*tilde=*/true);
    if (constant != 0.0) {
        p.add_term(Monomial(), constant);
        p.add_term(Monomial(2, 0, 0), constant);
        p.add_term(Monomial(0, 2, 0), constant);
        p.add_term(Monomial(0, 0, 2), constant);
        p.normalize();
    }
    return p;
}

double scaled_row_residual(std::initializer_list<double> terms) {
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return std::abs(sum) / std::max(scale, 1e-12);
}

std::vector<Pose> maybe_unswap(std::vector<Pose> poses, const CaseLabel &label) {
    if (label.swap_cameras)
        for (auto &p : poses)
            p = p.inverse();
    return poses;
}

} // namespace

std::vector<Pose> solve_three_lines(const std::array<FeatureTriplet, 3> &features,
                                    const CaseLabel &label, const QuadricSolveOptions &qopts) {
    if (label.id != CaseId::S3L && label.id != CaseId::S2L1L)
        throw_invalid_input("solve_three_lines: label is not a line-only case");
    auto feats = canonical_features(features, label);

    std::array<TriFeature, 3> tf;
    std::array<Eigen::Vector3d, 3> normal; // direction normal l1 x l2 in main frame
    std::array<MultiPoly, 3> quadrics;
    for (int i = 0; i < 3; ++i) {
        tf[i] = detail::triangulate_feature(feats[i], kBaseline);
        normal[i] = feats[i].main_obs[0].cross(feats[i].main_obs[1]);
        // third-view normal is perpendicular to the transformed direction
        Eigen::Matrix3d M = feats[i].third_obs * normal[i].transpose();
        Vec9 w;
        if (feats[i].main_cam == 1) {
            w = detail::vec9(M); // l3' R (l1 x l2)
        } else {
            w = detail::vec9(M.transpose()); // l3' R' (l1 x l2)
        }
        quadrics[i] = tilde_quadric_from_rotation(w, 0.0);
    }

    std::vector<Eigen::Vector3d> roots =
        solve_three_quadrics(quadrics[0], quadrics[1], quadrics[2], qopts);

    std::vector<Candidate> cands;
    for (const auto &r : roots) {
        Quaternion q = detail::quat_from_tilde(r);
        Eigen::Matrix3d R = quat_to_rotation(q);

        Eigen::Matrix3d A;
        Eigen::Vector3d rhs;
        double rot_residual = 0.0;
        for (int i = 0; i < 3; ++i) {
            const auto &f = feats[i];
            double beta2 = (f.third_view == 2) ? 1.0 : 0.0;
            if (f.main_cam == 1) {
                A.row(i) = f.third_obs.transpose();
                rhs(i) = -f.third_obs.dot(R * tf[i].P + beta2 * kBaseline);
                rot_residual = std::max(
                    rot_residual, std::abs(f.third_obs.dot(R * normal[i])) /
                                      std::max(1e-12, f.third_obs.norm() * normal[i].norm()));
            } else {
                Eigen::Vector3d Rl = R * f.third_obs;
                A.row(i) = Rl.transpose();
                rhs(i) = Rl.dot(tf[i].P) + beta2 * f.third_obs.dot(kBaseline);
                rot_residual = std::max(
                    rot_residual, std::abs(f.third_obs.dot(R.transpose() * normal[i])) /
                                      std::max(1e-12, f.third_obs.norm() * normal[i].norm()));
            }
        }
        if (rot_residual > 1e-6)
            continue;
        Eigen::ColPivHouseholderQR<Eigen::Matrix3d> qr(A);
        qr.setThreshold(1e-9);
        if (qr.rank() < 3)
            throw_degenerate_instance("solve_three_lines: translation system is rank-deficient");
        Candidate c;
        c.pose = Pose(R, qr.solve(rhs));
        c.alpha = 1.0; // no anchor depth in the line-only route
        c.residual = rot_residual;
        cands.push_back(c);
    }
    return maybe_unswap(detail::order_candidates(std::move(cands)), label);
}

std::vector<Pose> solve_gp3p_mixed(const std::array<FeatureTriplet, 3> &features,
                                   const CaseLabel &label, const QuadricSolveOptions &qopts) {
    if (solver_route(label.id) != Route::EasyGp3p)
        throw_invalid_input("solve_gp3p_mixed: label is not a single-main-camera case");
    auto feats = canonical_features(features, label);

    std::array<TriFeature, 3> tf;
    for (int i = 0; i < 3; ++i)
        tf[i] = detail::triangulate_feature(feats[i], kBaseline);

    detail::Anchor anchor = detail::make_anchor(tf[0], kBaseline);

    // Rows q_i(R) + kappa_i * alpha + e_i = 0 from the third projections of
    // the two non-anchor features.
    struct Row {
        Vec9 w;
        double kappa;
        double e;
    };
    std::vector<Row> rows;
    for (int i = 1; i < 3; ++i) {
        const auto &f = feats[i];
        double beta2 = (f.third_view == 2) ? 1.0 : 0.0;
        Eigen::Vector3d off = beta2 * kBaseline - anchor.c0;
        if (f.is_point) {
            const Eigen::Vector3d &x = f.third_obs;
            Eigen::Vector3d XS = tf[i].X - anchor.S;
            for (int k = 0; k < 2; ++k) {
                Eigen::Vector3d g = x(2) * Eigen::Vector3d::Unit(k) - x(k) * Eigen::Vector3d::Unit(2);
                Row r;
                r.w = detail::vec9(g * XS.transpose());
                r.kappa = g.dot(anchor.u);
                r.e = g.dot(off);
                rows.push_back(r);
            }
        } else {
            const Eigen::Vector3d &l = f.third_obs;
            for (int j = 0; j < 2; ++j) {
                Eigen::Vector3d Xj = (j == 0) ? tf[i].P : (tf[i].P + tf[i].V).eval();
                Row r;
                r.w = detail::vec9(l * (Xj - anchor.S).transpose());
                r.kappa = l.dot(anchor.u);
                r.e = l.dot(off);
                rows.push_back(r);
            }
        }
    }

    // Eliminate the anchor depth through the best-conditioned row.
    int piv = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(rows[i].kappa) > std::abs(rows[piv].kappa))
            piv = i;
    if (std::abs(rows[piv].kappa) < 1e-12)
        throw_degenerate_instance("solve_gp3p_mixed: depth does not enter the constraints");

    std::array<MultiPoly, 3> quadrics;
    int qi = 0;
    for (int i = 0; i < 4; ++i) {
        if (i == piv)
            continue;
        double s = rows[i].kappa / rows[piv].kappa;
        Vec9 w = rows[i].w - s * rows[piv].w;
        double e = rows[i].e - s * rows[piv].e;
        quadrics[qi++] = tilde_quadric_from_rotation(w, e);
    }

    std::vector<Eigen::Vector3d> roots =
        solve_three_quadrics(quadrics[0], quadrics[1], quadrics[2], qopts);

    std::vector<Candidate> cands;
    for (const auto &rt : roots) {
        Quaternion q = detail::quat_from_tilde(rt);
        Eigen::Matrix3d R = quat_to_rotation(q);
        Vec9 vr = detail::vec9(R);
        double alpha = -(rows[piv].w.dot(vr) + rows[piv].e) / rows[piv].kappa;

        double residual = 0.0;
        for (const Row &r : rows)
            residual = std::max(residual,
                                scaled_row_residual({r.w.dot(vr), r.kappa * alpha, r.e}));
        if (residual > 1e-6)
            continue;

        Candidate c;
        c.pose = Pose(R, alpha * anchor.u - R * anchor.S - anchor.c0);
        c.alpha = alpha;
        c.residual = residual;
        cands.push_back(c);
    }
    return maybe_unswap(detail::order_candidates(std::move(cands)), label);
}

} // namespace sego
