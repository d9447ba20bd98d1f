#include "residual_oracle.h"

#include "sego/geometry.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace sego::testing {

namespace {

const Eigen::Vector3d kB(1, 0, 0);

double off2(const ViewId &v) { return v.view == 2 ? 1.0 : 0.0; }

// line direction and support point in the main camera frame
struct LineGeom {
    Eigen::Vector3d P, V;
};

LineGeom main_line(const FeatureTriplet &f, int main) {
    auto [P1, P2] = triangulate_line(f.at(main, 1).v, f.at(main, 2).v);
    return {P1, P2 - P1};
}

double epipolar_point(const FeatureTriplet &f, const Pose &pose, int main) {
    const Observation &third = *[&] {
        for (const auto &o : f.obs)
            if (o.view.camera != main)
                return &o;
        return &f.obs[0];
    }();
    const Eigen::Vector3d &z = third.v;
    double worst = 0.0;
    for (int beta = 1; beta <= 2; ++beta) {
        const Eigen::Vector3d &x = f.at(main, beta).v;
        Eigen::Vector3d t_rel;
        Eigen::Matrix3d Rrel;
        if (main == 1) {
            Rrel = pose.R;
            t_rel = pose.t + off2(third.view) * kB - pose.R * (off2({1, beta}) * kB);
        } else {
            Rrel = pose.R.transpose();
            t_rel = off2(third.view) * kB -
                    pose.R.transpose() * (pose.t + off2({2, beta}) * kB);
        }
        double num = std::abs(z.dot(t_rel.cross(Rrel * x)));
        double den = std::max(1e-12, z.norm() * t_rel.norm() * x.norm());
        worst = std::max(worst, num / den);
    }
    return worst;
}

double line_incidence(const FeatureTriplet &f, const Pose &pose, int main) {
    LineGeom g = main_line(f, main);
    const Observation &third = *[&] {
        for (const auto &o : f.obs)
            if (o.view.camera != main)
                return &o;
        return &f.obs[0];
    }();
    const Eigen::Vector3d &l = third.v;
    Eigen::Vector3d p, q;
    if (main == 1) {
        p = pose.R * g.P + pose.t + off2(third.view) * kB;
        q = pose.R * g.V;
    } else {
        p = pose.R.transpose() * (g.P - pose.t) + off2(third.view) * kB;
        q = pose.R.transpose() * g.V;
    }
    Eigen::Vector3d w = p.cross(q);
    return l.cross(w).norm() / std::max(1e-12, l.norm() * w.norm());
}

double projection_rows(const FeatureTriplet &f, const Pose &pose, int main) {
    const Observation &third = *[&] {
        for (const auto &o : f.obs)
            if (o.view.camera != main)
                return &o;
        return &f.obs[0];
    }();
    auto pi = [&](const Eigen::Vector3d &X) {
        if (main == 1)
            return (pose.R * X + pose.t + off2(third.view) * kB).eval();
        return (pose.R.transpose() * (X - pose.t) + off2(third.view) * kB).eval();
    };
    double worst = 0.0;
    if (f.is_point()) {
        Eigen::Vector3d X = triangulate_point(f.at(main, 1).v, f.at(main, 2).v);
        Eigen::Vector3d p = pi(X);
        const Eigen::Vector3d &x = third.v;
        for (int k = 0; k < 2; ++k) {
            double num = std::abs(x(2) * p(k) - x(k) * p(2));
            double den = std::max({1e-12, std::abs(x(2) * p(k)), std::abs(x(k) * p(2)),
                                   x.norm() * p.norm() * 1e-3});
            worst = std::max(worst, num / den);
        }
    } else {
        LineGeom g = main_line(f, main);
        const Eigen::Vector3d &l = third.v;
        for (int j = 0; j < 2; ++j) {
            Eigen::Vector3d p = pi(j == 0 ? g.P : (g.P + g.V).eval());
            worst = std::max(worst, std::abs(l.dot(p)) / std::max(1e-12, l.norm() * p.norm()));
        }
    }
    return worst;
}

double triple_product(const FeatureTriplet &f, const Pose &pose, int main) {
    Eigen::Vector3d n = f.at(main, 1).v.cross(f.at(main, 2).v);
    const Observation &third = *[&] {
        for (const auto &o : f.obs)
            if (o.view.camera != main)
                return &o;
        return &f.obs[0];
    }();
    Eigen::Vector3d dir = (main == 1) ? (pose.R * n).eval() : (pose.R.transpose() * n).eval();
    return std::abs(third.v.dot(dir)) / std::max(1e-12, third.v.norm() * dir.norm());
}

} // namespace

double oracle_residual(const std::array<FeatureTriplet, 3> &features, const Pose &pose,
                       OracleForm form) {
    double worst = 0.0;
    for (const auto &f : features) {
        int main = f.main_camera();
        double r = 0.0;
        switch (form) {
        case OracleForm::Epipolar:
            r = f.is_point() ? epipolar_point(f, pose, main) : line_incidence(f, pose, main);
            break;
        case OracleForm::Projection:
            r = projection_rows(f, pose, main);
            break;
        case OracleForm::TripleProduct:
            r = std::max(triple_product(f, pose, main), line_incidence(f, pose, main));
            break;
        }
        worst = std::max(worst, r);
    }
    return worst;
}

bool cheirality_ok(const std::array<FeatureTriplet, 3> &features, const Pose &pose) {
    for (const auto &f : features) {
        int main = f.main_camera();
        Eigen::Vector3d X;
        if (f.is_point()) {
            try {
                X = triangulate_point(f.at(main, 1).v, f.at(main, 2).v);
            } catch (const Error &) {
                return false;
            }
        } else {
            continue;
        }
        if (X.z() <= 0)
            return false;
        Eigen::Vector3d other = (main == 1) ? (pose.R * X + pose.t).eval()
                                            : (pose.R.transpose() * (X - pose.t)).eval();
        if (other.z() <= 0)
            return false;
    }
    return true;
}

} // namespace sego::testing
