#include "sego/classifier.h"
#include "sego/estimator.h"
#include "sego/geometry.h"
#include "sego/solve.h"
#include "sego/synth.h"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sego;

namespace {

FeatureTriplet make_triplet(const std::string &kind,
                            const std::vector<std::tuple<int, int, Eigen::Vector3d>> &obs) {
    if (obs.size() != 3)
        throw_invalid_input("a feature triplet needs exactly three observations");
    FeatureTriplet f;
    f.kind = (kind == "line") ? FeatureKind::Line : FeatureKind::Point;
    for (int i = 0; i < 3; ++i) {
        auto [camera, view, v] = obs[i];
        f.obs[i] = {v, ViewId{camera, view}};
    }
    f.validate();
    return f;
}

std::array<FeatureTriplet, 3> as_minimal_set(const std::vector<FeatureTriplet> &features) {
    if (features.size() != 3)
        throw_invalid_input("a minimal set has exactly three features");
    return {features[0], features[1], features[2]};
}

HardSolver solver_from_name(const std::string &name) {
    if (name == "ppsego")
        return HardSolver::PPSEgo;
    if (name == "episego")
        return HardSolver::EpiSEgo;
    return HardSolver::Auto;
}

} // namespace

PYBIND11_MODULE(pysego, m) {
    m.doc() = "stereo relative pose from three-view point/line feature triplets";

    py::register_exception<Error>(m, "SegoError");

    py::class_<Pose>(m, "Pose")
        .def(py::init<>())
        .def(py::init<const Eigen::Matrix3d &, const Eigen::Vector3d &>())
        .def_readwrite("R", &Pose::R)
        .def_readwrite("t", &Pose::t)
        .def("inverse", &Pose::inverse);

    py::class_<FeatureTriplet>(m, "FeatureTriplet")
        .def(py::init(&make_triplet), py::arg("kind"), py::arg("observations"))
        .def_property_readonly("main_camera", &FeatureTriplet::main_camera);

    m.def("quat_to_rotation", [](double w, double x, double y, double z) {
        return quat_to_rotation(Quaternion{w, x, y, z});
    });
    m.def("rotation_to_quat", [](const Eigen::Matrix3d &R) {
        Quaternion q = rotation_to_quat(R);
        return py::make_tuple(q.w, q.x, q.y, q.z);
    });
    m.def("triangulate_point",
          [](const Eigen::Vector3d &x1, const Eigen::Vector3d &x2) {
              return triangulate_point(x1, x2);
          });
    m.def("pose_errors", [](const Pose &est, const Pose &gt) {
        PoseError e = pose_errors(est, gt);
        return py::make_tuple(e.rotation_deg, e.translation_rel);
    });

    m.def("classify", [](const std::vector<FeatureTriplet> &features) {
        CaseLabel label = classify(as_minimal_set(features));
        return py::make_tuple(case_name(label.id), label.swap_cameras, label.feature_order);
    });

    m.def(
        "solve",
        [](const std::vector<FeatureTriplet> &features, const std::string &solver) {
            SolveOptions opts;
            opts.hard = solver_from_name(solver);
            SolveResult r = solve_minimal(as_minimal_set(features), opts);
            py::list poses;
            for (const Pose &p : r.poses)
                poses.append(p);
            return py::make_tuple(case_name(r.label.id), poses);
        },
        py::arg("features"), py::arg("solver") = "auto");

    m.def(
        "ransac",
        [](const std::vector<FeatureTriplet> &features, double threshold_px, double confidence,
           int max_iterations, uint64_t seed, const std::string &solver) {
            std::vector<Correspondence> corrs;
            corrs.reserve(features.size());
            for (const auto &f : features)
                corrs.push_back(make_correspondence(f));
            RansacConfig cfg;
            cfg.threshold_px = threshold_px;
            cfg.confidence = confidence;
            cfg.max_iterations = max_iterations;
            cfg.seed = seed;
            cfg.solver = solver_from_name(solver);
            Hypothesis h = ransac_estimate(corrs, cfg);
            return py::make_tuple(h.pose, h.inliers, h.mean_inlier_residual);
        },
        py::arg("features"), py::arg("threshold_px") = 5.0, py::arg("confidence") = 0.999,
        py::arg("max_iterations") = 1000, py::arg("seed") = 0, py::arg("solver") = "auto");

    m.def(
        "generate_scene",
        [](const std::string &case_label, double noise_sigma_px, uint64_t seed, bool planar) {
            ScenarioConfig cfg;
            cfg.noise_sigma_px = noise_sigma_px;
            cfg.planar = planar;
            cfg.seed = seed;
            Rng rng(derive_seed(seed, {0x5ce7e}));
            Scene s = generate_scene(cfg, case_from_name(case_label), rng);
            py::list feats;
            for (const auto &f : s.features)
                feats.append(f);
            return py::make_tuple(s.gt, feats);
        },
        py::arg("case_label"), py::arg("noise_sigma_px") = 0.0, py::arg("seed") = 0,
        py::arg("planar") = false);

    m.def("case_names", [] {
        std::vector<std::string> names;
        for (int i = 0; i < kNumCases; ++i)
            names.push_back(case_name(static_cast<CaseId>(i)));
        return names;
    });
}
