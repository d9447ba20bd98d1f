#include "sego/estimator.h"

#include "sego/geometry.h"
#include "sego/rng.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sego {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Eigen::Vector3d kBaseline(1, 0, 0);

Eigen::Vector3d view_transform(const Pose &pose, int camera, int view, const Eigen::Vector3d &X) {
    Eigen::Vector3d Y = (camera == 1) ? X : (pose.R * X + pose.t).eval();
    if (view == 2)
        Y += kBaseline;
    return Y;
}

// main-camera structure, pose independent
struct MainStructure {
    int main_cam = 1;
    Eigen::Vector3d X;      // points
    Eigen::Vector3d P1, P2; // line endpoints (unit separation)
};

MainStructure triangulate_main(const Correspondence &corr) {
    FeatureTriplet t = corr.triplet();
    MainStructure s;
    s.main_cam = t.main_camera();
    const Eigen::Vector3d &o1 = t.at(s.main_cam, 1).v;
    const Eigen::Vector3d &o2 = t.at(s.main_cam, 2).v;
    if (corr.kind == FeatureKind::Point) {
        s.X = triangulate_point(o1, o2);
    } else {
        auto [P1, P2] = triangulate_line(o1, o2);
        s.P1 = P1;
        s.P2 = P2;
    }
    return s;
}

// structure in main-camera frame -> residual on one target view, in pixels
double view_residual(const Correspondence &corr, const MainStructure &s, const Pose &pose,
                     const Observation &target, double focal_px) {
    // map main-camera coordinates to world (camera 1), then into the view
    auto to_world = [&](const Eigen::Vector3d &X) {
        return (s.main_cam == 1) ? X : (pose.R.transpose() * (X - pose.t)).eval();
    };
    auto project = [&](const Eigen::Vector3d &Xw) -> Eigen::Vector3d {
        Eigen::Vector3d Y = view_transform(pose, target.view.camera, target.view.view, Xw);
        if (Y.z() <= 1e-12)
            throw_cheirality("behind camera");
        return Y / Y.z();
    };
    if (corr.kind == FeatureKind::Point) {
        Eigen::Vector3d p = project(to_world(s.X));
        Eigen::Vector3d z = target.v / target.v.z();
        return focal_px * (p - z).head<2>().norm();
    }
    Eigen::Vector3d l = target.v / target.v.head<2>().norm();
    double d1 = std::abs(l.dot(project(to_world(s.P1))));
    double d2 = std::abs(l.dot(project(to_world(s.P2))));
    return focal_px * std::max(d1, d2);
}

} // namespace

FeatureTriplet Correspondence::triplet() const {
    FeatureTriplet t;
    t.kind = kind;
    if (obs.size() == 3) {
        std::copy(obs.begin(), obs.end(), t.obs.begin());
        return t;
    }
    // quads sample through the first camera pair plus view (2,1)
    int k = 0;
    for (const auto &o : obs)
        if (!(o.view.camera == 2 && o.view.view == 2))
            t.obs[k++] = o;
    return t;
}

void Correspondence::validate() const {
    if (obs.size() != 3 && obs.size() != 4)
        throw_invalid_input("correspondence needs three or four observations");
    triplet().validate();
}

Correspondence make_correspondence(const FeatureTriplet &t) {
    Correspondence c;
    c.kind = t.kind;
    c.obs.assign(t.obs.begin(), t.obs.end());
    return c;
}

double reprojection_residual(const Correspondence &corr, const Pose &pose, double focal_px) {
    try {
        if (!corr.is_quad()) {
            FeatureTriplet t = corr.triplet();
            MainStructure s = triangulate_main(corr);
            int main = s.main_cam;
            for (const auto &o : corr.obs)
                if (o.view.camera != main)
                    return view_residual(corr, s, pose, o, focal_px);
            throw_invalid_input("triplet without a third view");
        }
        // four views: triangulate in the first camera, test both views of
        // the second, take the worst
        const Observation *first[2] = {nullptr, nullptr};
        for (const auto &o : corr.obs)
            if (o.view.camera == 1)
                first[o.view.view - 1] = &o;
        if (!first[0] || !first[1])
            throw_invalid_input("quad correspondence must cover both first-camera views");
        MainStructure s;
        s.main_cam = 1;
        if (corr.kind == FeatureKind::Point) {
            s.X = triangulate_point(first[0]->v, first[1]->v);
        } else {
            auto [P1, P2] = triangulate_line(first[0]->v, first[1]->v);
            s.P1 = P1;
            s.P2 = P2;
        }
        double worst = 0.0;
        for (const auto &o : corr.obs)
            if (o.view.camera == 2)
                worst = std::max(worst, view_residual(corr, s, pose, o, focal_px));
        return worst;
    } catch (const Error &) {
        return kInf;
    }
}

namespace {

struct Scored {
    std::vector<int> inliers;
    double mean_residual = 0.0;
};

Scored score_pose(const std::vector<Correspondence> &corrs,
                  const std::vector<MainStructure> &structs, const std::vector<bool> &usable,
                  const Pose &pose, double tau, double focal_px) {
    Scored s;
    double sum = 0.0;
    for (size_t i = 0; i < corrs.size(); ++i) {
        if (!usable[i])
            continue;
        double r;
        if (corrs[i].is_quad()) {
            r = reprojection_residual(corrs[i], pose, focal_px);
        } else {
            try {
                const Correspondence &c = corrs[i];
                int main = structs[i].main_cam;
                r = kInf;
                for (const auto &o : c.obs)
                    if (o.view.camera != main) {
                        r = view_residual(c, structs[i], pose, o, focal_px);
                        break;
                    }
            } catch (const Error &) {
                r = kInf;
            }
        }
        if (r <= tau) {
            s.inliers.push_back(static_cast<int>(i));
            sum += r;
        }
    }
    s.mean_residual = s.inliers.empty() ? kInf : sum / s.inliers.size();
    return s;
}

} // namespace

Hypothesis ransac_estimate(const std::vector<Correspondence> &correspondences,
                           const RansacConfig &cfg) {
    const int n = static_cast<int>(correspondences.size());
    if (n < 3)
        throw_estimation_failed("ransac_estimate: need at least three correspondences");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0) || !(cfg.threshold_px > 0.0))
        throw_invalid_input("ransac_estimate: bad configuration");

    // pose-independent main-camera structures, shared across hypotheses
    std::vector<MainStructure> structs(n);
    std::vector<bool> usable(n, true);
    for (int i = 0; i < n; ++i) {
        try {
            correspondences[i].validate();
            structs[i] = triangulate_main(correspondences[i]);
        } catch (const Error &) {
            usable[i] = false;
        }
    }

    SolveOptions sopts;
    sopts.hard = cfg.solver;
    sopts.condition_check = cfg.condition_check;

    Rng rng(derive_seed(cfg.seed, {0xa45ac}));
    Hypothesis best;
    best.score = -1;

    double w0 = std::clamp(1.0 - cfg.initial_outlier_ratio, 1e-3, 1.0 - 1e-12);
    auto bound = [&](double w) {
        double denom = std::log1p(-std::min(w * w * w, 1.0 - 1e-12));
        return std::log(1.0 - cfg.confidence) / denom;
    };
    double needed = bound(w0);

    int iter = 0;
    while (iter < cfg.max_iterations && static_cast<double>(iter) < needed) {
        ++iter;
        int i0 = rng.uniform_int(n), i1, i2;
        do
            i1 = rng.uniform_int(n);
        while (i1 == i0);
        do
            i2 = rng.uniform_int(n);
        while (i2 == i0 || i2 == i1);
        if (!usable[i0] || !usable[i1] || !usable[i2])
            continue;

        std::array<FeatureTriplet, 3> sample = {correspondences[i0].triplet(),
                                                correspondences[i1].triplet(),
                                                correspondences[i2].triplet()};
        std::vector<Pose> poses;
        try {
            poses = solve_minimal(sample, sopts).poses;
        } catch (const Error &) {
            continue; // degenerate sample consumes the iteration
        }

        for (const Pose &pose : poses) {
            Scored s = score_pose(correspondences, structs, usable, pose, cfg.threshold_px, cfg.focal_px);
            int score = static_cast<int>(s.inliers.size());
            if (score > best.score ||
                (score == best.score && s.mean_residual < best.mean_inlier_residual)) {
                best.pose = pose;
                best.inliers = std::move(s.inliers);
                best.score = score;
                best.mean_inlier_residual = s.mean_residual;
                needed = bound(std::max(w0, static_cast<double>(score) / n));
            }
        }
    }

    if (best.score < 3)
        throw_estimation_failed("ransac_estimate: no hypothesis reached three inliers");

    if (cfg.refine) {
        RefineResult r = refine_pose(correspondences, best.pose, best.inliers,
                                     RefineMode::PoseOnly, cfg.focal_px);
        if (!r.diverged) {
            Scored s = score_pose(correspondences, structs, usable, r.pose, cfg.threshold_px, cfg.focal_px);
            int score = static_cast<int>(s.inliers.size());
            if (score > best.score ||
                (score == best.score && s.mean_residual <= best.mean_inlier_residual)) {
                best.pose = r.pose;
                best.inliers = std::move(s.inliers);
                best.score = score;
                best.mean_inlier_residual = s.mean_residual;
            }
        }
    }
    return best;
}

// ---- Levenberg-Marquardt refinement ---------------------------------------

namespace {

struct ResidualBlock {
    int corr = 0;
    Observation target;
    bool endpoint2 = false; // which line endpoint
};

struct LmProblem {
    const std::vector<Correspondence> &corrs;
    std::vector<int> active;
    RefineMode mode;
    double focal;

    std::vector<MainStructure> structs;   // per active corr
    std::vector<Eigen::Vector3d> world;   // structure parameters (FullBA)
    std::vector<int> world_offset;        // per active corr -> index into world
    std::vector<ResidualBlock> blocks;
    int n_params = 0;
};

Eigen::Vector3d world_point(const LmProblem &p, const Pose &pose, int ai, int which) {
    const MainStructure &s = p.structs[ai];
    Eigen::Vector3d X = (p.corrs[p.active[ai]].kind == FeatureKind::Point)
                            ? s.X
                            : (which == 0 ? s.P1 : s.P2);
    if (s.main_cam == 2)
        return pose.R.transpose() * (X - pose.t);
    return X;
}

} // namespace

RefineResult refine_pose(const std::vector<Correspondence> &correspondences, const Pose &initial,
                         const std::vector<int> &inliers, RefineMode mode, double focal_px) {
    if (inliers.size() < 3)
        throw_invalid_input("refine_pose: need at least three inliers");

    LmProblem prob{correspondences, inliers, mode, focal_px, {}, {}, {}, {}, 0};
    for (int idx : inliers)
        prob.structs.push_back(triangulate_main(correspondences[idx]));

    const bool ba = (mode == RefineMode::FullBA);
    prob.n_params = 6;
    for (size_t ai = 0; ai < prob.active.size(); ++ai) {
        const Correspondence &c = correspondences[prob.active[ai]];
        prob.world_offset.push_back(static_cast<int>(prob.world.size()));
        if (ba) {
            // structure parameterized in the world frame at the initial pose
            prob.world.push_back(world_point(prob, initial, static_cast<int>(ai), 0));
            if (c.kind == FeatureKind::Line)
                prob.world.push_back(world_point(prob, initial, static_cast<int>(ai), 1));
        }
        int main = prob.structs[ai].main_cam;
        for (const auto &o : c.obs) {
            if (!ba && o.view.camera == main)
                continue; // pose-only mode scores the extra view(s) only
            if (c.kind == FeatureKind::Point) {
                prob.blocks.push_back({static_cast<int>(ai), o, false});
            } else {
                prob.blocks.push_back({static_cast<int>(ai), o, false});
                prob.blocks.push_back({static_cast<int>(ai), o, true});
            }
        }
    }
    if (ba)
        prob.n_params += 3 * static_cast<int>(prob.world.size());

    auto structure_point = [&](const Pose &pose, int ai, int which) -> Eigen::Vector3d {
        if (ba) {
            int off = prob.world_offset[ai] + which;
            return prob.world[off];
        }
        return world_point(prob, pose, ai, which);
    };

    // residuals: points give two rows per block, lines one row per endpoint
    auto evaluate = [&](const Pose &pose, Eigen::VectorXd *r, Eigen::MatrixXd *J) -> bool {
        int n_res = 0;
        for (const auto &b : prob.blocks)
            n_res += (prob.corrs[prob.active[b.corr]].kind == FeatureKind::Point) ? 2 : 1;
        r->resize(n_res);
        if (J)
            J->setZero(n_res, prob.n_params);

        int row = 0;
        for (const auto &b : prob.blocks) {
            const Correspondence &c = prob.corrs[prob.active[b.corr]];
            bool is_point = (c.kind == FeatureKind::Point);
            int which = b.endpoint2 ? 1 : 0;
            Eigen::Vector3d Xw = structure_point(pose, b.corr, which);
            int cam = b.target.view.camera, view = b.target.view.view;
            Eigen::Vector3d Y = view_transform(pose, cam, view, Xw);
            if (Y.z() <= 1e-9)
                return false;

            double inv_z = 1.0 / Y.z();
            Eigen::Vector3d h = Y * inv_z;

            Eigen::Matrix<double, 2, 3> dh;
            dh << inv_z, 0, -h.x() * inv_z, 0, inv_z, -h.y() * inv_z;

            int rows_here = is_point ? 2 : 1;
            if (is_point) {
                Eigen::Vector3d z = b.target.v / b.target.v.z();
                (*r)(row) = prob.focal * (h.x() - z.x());
                (*r)(row + 1) = prob.focal * (h.y() - z.y());
            } else {
                Eigen::Vector3d l = b.target.v / b.target.v.head<2>().norm();
                (*r)(row) = prob.focal * l.dot(h);
            }

            if (J) {
                // d residual / d Y
                Eigen::MatrixXd dres_dY;
                if (is_point) {
                    dres_dY = prob.focal * dh;
                } else {
                    Eigen::Vector3d l = b.target.v / b.target.v.head<2>().norm();
                    Eigen::RowVector3d g;
                    g << l.x() * inv_z, l.y() * inv_z,
                        -(l.x() * Y.x() + l.y() * Y.y()) * inv_z * inv_z;
                    dres_dY = prob.focal * g;
                }

                Eigen::Matrix3d dY_dw, dY_dt, dY_dX;
                bool main2_structure = !ba && prob.structs[b.corr].main_cam == 2;
                if (cam == 2) {
                    dY_dw = -pose.R * skew(Xw);
                    dY_dt = Eigen::Matrix3d::Identity();
                    dY_dX = pose.R;
                } else if (main2_structure) {
                    // Y = R'(X - t) with structure fixed in camera 2
                    Eigen::Vector3d v = pose.R.transpose() *
                                        (((which == 0 || is_point)
                                              ? (is_point ? prob.structs[b.corr].X
                                                          : prob.structs[b.corr].P1)
                                              : prob.structs[b.corr].P2) -
                                         pose.t);
                    dY_dw = skew(v);
                    dY_dt = -pose.R.transpose();
                    dY_dX = pose.R.transpose();
                } else {
                    dY_dw.setZero();
                    dY_dt.setZero();
                    dY_dX = Eigen::Matrix3d::Identity();
                }

                J->block(row, 0, rows_here, 3) = dres_dY * dY_dw;
                J->block(row, 3, rows_here, 3) = dres_dY * dY_dt;
                if (ba) {
                    int off = 6 + 3 * (prob.world_offset[b.corr] + which);
                    J->block(row, off, rows_here, 3) = dres_dY * dY_dX;
                }
            }
            row += rows_here;
        }
        return true;
    };

    RefineResult result;
    result.pose = initial;
    Pose pose = initial;
    std::vector<Eigen::Vector3d> world_backup;

    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    if (!evaluate(pose, &r, nullptr)) {
        result.diverged = true;
        return result;
    }
    double cost = 0.5 * r.squaredNorm();
    result.initial_cost = cost;

    double lambda = 1e-6;
    int consecutive_fail = 0;
    int it = 0;
    for (; it < 100; ++it) {
        if (!evaluate(pose, &r, &J)) {
            result.diverged = true;
            result.pose = initial;
            return result;
        }
        Eigen::MatrixXd H = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, cost))
            break;

        bool accepted = false;
        for (int tries = 0; tries < 10; ++tries) {
            Eigen::MatrixXd Hd = H;
            Hd.diagonal().array() += lambda * (H.diagonal().array() + 1e-12);
            Eigen::VectorXd step = Hd.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 4.0;
                continue;
            }

            Pose new_pose = pose;
            Eigen::Vector3d w = step.head<3>();
            double ang = w.norm();
            Eigen::Matrix3d dR = Eigen::Matrix3d::Identity();
            if (ang > 0) {
                Eigen::Matrix3d K = skew(w / ang);
                dR += std::sin(ang) * K + (1 - std::cos(ang)) * K * K;
            }
            new_pose.R = pose.R * dR;
            new_pose.t = pose.t + step.segment<3>(3);

            world_backup = prob.world;
            for (size_t k = 0; k < prob.world.size(); ++k)
                prob.world[k] += step.segment<3>(6 + 3 * k);

            Eigen::VectorXd r_new;
            bool ok = evaluate(new_pose, &r_new, nullptr);
            double new_cost = ok ? 0.5 * r_new.squaredNorm() : kInf;
            if (ok && new_cost < cost) {
                double rel = (cost - new_cost) / std::max(cost, 1e-300);
                pose = new_pose;
                cost = new_cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                consecutive_fail = 0;
                if (rel < 1e-12)
                    it = 100; // converged
                break;
            }
            prob.world = world_backup;
            lambda *= 4.0;
        }
        if (!accepted) {
            if (++consecutive_fail >= 1) {
                // damping exhausted at this iterate
                break;
            }
        }
    }

    result.pose = pose;
    result.iterations = std::min(it, 100);
    result.final_cost = cost;
    result.diverged = false;
    if (cost > result.initial_cost) {
        result.pose = initial;
        result.diverged = true;
    }
    return result;
}

} // namespace sego
