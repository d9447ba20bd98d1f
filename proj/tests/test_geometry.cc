#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sego/geometry.h"
#include "sego/rng.h"

#include <cmath>

using namespace sego;

namespace {

Quaternion random_unit_quat(Rng &rng) {
    Quaternion q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    return q.normalized();
}

} // namespace

TEST_CASE("quat_to_rotation identity") {
    Eigen::Matrix3d R = quat_to_rotation({1, 0, 0, 0});
    CHECK((R - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("quat_to_rotation 90 degrees about x") {
    double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
    Eigen::Matrix3d R = quat_to_rotation({c, s, 0, 0});
    CHECK(R(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(R(1, 2) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("quat_to_rotation orthogonality for random unit quaternions") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Quaternion q = random_unit_quat(rng);
        Eigen::Matrix3d R = quat_to_rotation(q);
        CHECK((R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("quat_to_rotation rejects the zero quaternion") {
    CHECK_THROWS_AS(quat_to_rotation({0, 0, 0, 0}), Error);
}

TEST_CASE("quaternion round trip is canonical") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        Quaternion q = random_unit_quat(rng).canonical();
        Quaternion back = rotation_to_quat(quat_to_rotation(q));
        CHECK(std::abs(back.w - q.w) < 1e-12);
        CHECK(std::abs(back.x - q.x) < 1e-12);
        CHECK(std::abs(back.y - q.y) < 1e-12);
        CHECK(std::abs(back.z - q.z) < 1e-12);
    }
}

TEST_CASE("triangulate_point recovers depth from disparity") {
    // view-2 projection of (0,0,10) is ((0,0,10)+b)/10
    Eigen::Vector3d S = triangulate_point({0, 0, 1}, {0.1, 0, 1});
    CHECK((S - Eigen::Vector3d(0, 0, 10)).norm() < 1e-12);
}

TEST_CASE("triangulate_point rejects identical rays") {
    CHECK_THROWS_AS(triangulate_point({0.2, 0.1, 1}, {0.2, 0.1, 1}), Error);
}

TEST_CASE("triangulate_point round trips through projection") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        Eigen::Vector3d X(rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2.5), rng.uniform(12, 16));
        Pose id;
        Eigen::Vector3d x1 = project_point(id, {1, 1}, X);
        Eigen::Vector3d x2 = project_point(id, {1, 2}, X);
        CHECK((triangulate_point(x1, x2) - X).norm() < 1e-10);
    }
}

TEST_CASE("triangulate_line round trips") {
    Rng rng(5);
    Pose id;
    for (int i = 0; i < 100; ++i) {
        Eigen::Vector3d E1(rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2.5), rng.uniform(12, 16));
        Eigen::Vector3d E2 = E1 + rng.unit_vector();
        Eigen::Vector3d l1 = project_point(id, {1, 1}, E1).cross(project_point(id, {1, 1}, E2));
        Eigen::Vector3d l2 = project_point(id, {1, 2}, E1).cross(project_point(id, {1, 2}, E2));
        l1 /= l1.head<2>().norm();
        l2 /= l2.head<2>().norm();
        auto [P1, P2] = triangulate_line(l1, l2);
        CHECK(std::abs((P2 - P1).norm() - 1.0) < 1e-12);
        // both returned points satisfy both plane equations
        CHECK(std::abs(l1.dot(P1)) < 1e-10);
        CHECK(std::abs(l1.dot(P2)) < 1e-10);
        CHECK(std::abs(l2.dot(P1 + Eigen::Vector3d(1, 0, 0))) < 1e-10);
        CHECK(std::abs(l2.dot(P2 + Eigen::Vector3d(1, 0, 0))) < 1e-10);
        // returned points lie on the original infinite line
        Eigen::Vector3d dir = (E2 - E1).normalized();
        auto point_line_dist = [&](const Eigen::Vector3d &P) {
            return ((P - E1) - (P - E1).dot(dir) * dir).norm();
        };
        CHECK(point_line_dist(P1) < 1e-9);
        CHECK(point_line_dist(P2) < 1e-9);
    }
}

TEST_CASE("triangulate_line rejects epipolar-plane lines") {
    // a line whose back-projected planes coincide: both views see the same
    // plane through the baseline
    Eigen::Vector3d l(0, 1, 0); // plane y = 0 contains the baseline
    CHECK_THROWS_AS(triangulate_line(l, l), Error);
}

TEST_CASE("project_point basics") {
    Pose id;
    CHECK((project_point(id, {1, 1}, {0, 0, 5}) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
    CHECK((project_point(id, {1, 2}, {0, 0, 5}) - Eigen::Vector3d(0.2, 0, 1)).norm() < 1e-15);
    CHECK_THROWS_AS(project_point(id, {1, 1}, {0.5, 0.5, 0.0}), Error);
}

TEST_CASE("project then triangulate is exact across all four views") {
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        Eigen::Vector3d axis = rng.unit_vector();
        double ang = rng.uniform(0, 0.6);
        Quaternion q{std::cos(ang / 2), std::sin(ang / 2) * axis.x(), std::sin(ang / 2) * axis.y(),
                     std::sin(ang / 2) * axis.z()};
        Pose pose(quat_to_rotation(q), 3.0 * rng.unit_vector());
        Eigen::Vector3d X(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(12, 16));
        Eigen::Vector3d x1 = project_point(pose, {1, 1}, X);
        Eigen::Vector3d x2 = project_point(pose, {1, 2}, X);
        Eigen::Vector3d S = triangulate_point(x1, x2);
        CHECK((S - X).norm() < 1e-10);
        Eigen::Vector3d y1 = project_point(pose, {2, 1}, X);
        Eigen::Vector3d y2 = project_point(pose, {2, 2}, X);
        Eigen::Vector3d S2 = triangulate_point(y1, y2);
        CHECK((S2 - (pose.R * X + pose.t)).norm() < 1e-10);
    }
}

TEST_CASE("pose_errors") {
    Pose gt;
    gt.t = Eigen::Vector3d(1, 2, 3);
    SUBCASE("exact") {
        PoseError e = pose_errors(gt, gt);
        CHECK(e.rotation_deg == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(e.translation_rel == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("one degree about a random axis") {
        Rng rng(17);
        for (int i = 0; i < 20; ++i) {
            double half = 0.5 * M_PI / 180.0;
            Eigen::Vector3d a = rng.unit_vector();
            Quaternion q{std::cos(half), std::sin(half) * a.x(), std::sin(half) * a.y(),
                         std::sin(half) * a.z()};
            Pose est(quat_to_rotation(q) * gt.R, gt.t);
            CHECK(pose_errors(est, gt).rotation_deg == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("ten percent translation") {
        Pose est(gt.R, 1.1 * gt.t);
        CHECK(pose_errors(est, gt).translation_rel == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("zero ground-truth translation flags absolute") {
        Pose zero;
        Pose est(zero.R, Eigen::Vector3d(0.5, 0, 0));
        PoseError e = pose_errors(est, zero);
        CHECK(e.translation_is_absolute);
        CHECK(e.translation_rel == doctest::Approx(0.5));
    }
    SUBCASE("rotation error is symmetric") {
        Rng rng(23);
        for (int i = 0; i < 20; ++i) {
            Eigen::Vector3d a = rng.unit_vector(), b = rng.unit_vector();
            double s = rng.uniform(0, 1.5), t = rng.uniform(0, 1.5);
            Quaternion qa{std::cos(s), std::sin(s) * a.x(), std::sin(s) * a.y(), std::sin(s) * a.z()};
            Quaternion qb{std::cos(t), std::sin(t) * b.x(), std::sin(t) * b.y(), std::sin(t) * b.z()};
            Pose pa(quat_to_rotation(qa), {});
            Pose pb(quat_to_rotation(qb), {});
            CHECK(pose_errors(pa, pb).rotation_deg ==
                  doctest::Approx(pose_errors(pb, pa).rotation_deg).epsilon(1e-10));
        }
    }
}
