#pragma once

#include "sego/classifier.h"
#include "sego/rng.h"
#include "sego/solve.h"
#include "sego/types.h"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sego {

struct ScenarioConfig {
    Eigen::Vector3d box_min = Eigen::Vector3d(-1.5, -1.5, 12.0);
    Eigen::Vector3d box_max = Eigen::Vector3d(2.5, 2.5, 16.0);
    double image_side_px = 1000.0;
    double fov_deg = 90.0;
    double noise_sigma_px = 0.0;
    double rotation_max_deg = 45.0;
    bool rotation_fixed = false; // use rotation_max_deg exactly
    double translation_min = 1.0;
    double translation_max = 10.0;
    bool translation_fixed = false; // use translation_max exactly
    double line_length_min = 0.5;
    double line_length_max = 1.5;
    bool line_length_fixed = false;
    bool planar = false;
    int trials = 1000;
    uint64_t seed = 0;

    double focal_px() const {
        return 0.5 * image_side_px / std::tan(0.5 * fov_deg * M_PI / 180.0);
    }
    void validate() const;
};

struct Scene {
    Pose gt;
    std::array<FeatureTriplet, 3> features;
};

// A random instance of one case: pose resampled until enough box vertices
// are visible, features projected into the case's three views, Gaussian
// pixel noise on point projections and line segment endpoints.
Scene generate_scene(const ScenarioConfig &cfg, CaseId id, Rng &rng);

struct TrialRecord {
    CaseId case_id = CaseId::S3P;
    std::string solver;
    double rotation_err_deg = 0.0;
    double translation_rel_err = 0.0;
    int n_candidates = 0;
    bool degenerate = false;
    double wall_time_us = 0.0;
};

// One seeded trial: generate, solve, report the candidate closest to the
// planted rotation.
TrialRecord run_single_trial(const ScenarioConfig &cfg, CaseId id, const std::string &solver,
                             uint64_t stream_tag, int trial_index, bool timing);

enum class SweepKind { Noise, Rotation, Translation, LineLength, PlanarNoise };

SweepKind sweep_from_name(const std::string &name);
std::string sweep_name(SweepKind kind);
std::vector<double> default_sweep_values(SweepKind kind);

struct SweepOptions {
    SweepKind kind = SweepKind::Noise;
    std::vector<double> values;     // empty = defaults
    std::vector<CaseId> cases;      // empty = all ten
    std::vector<std::string> solvers = {"episego", "ppsego", "easy"};
    ScenarioConfig base;
    bool condition_check = true;
    bool timing = true; // false writes zeros for byte-stable output
};

// Runs the sweep and writes one aggregate CSV row per (value, case, solver);
// optionally one per-trial row each.
void run_sweep(const SweepOptions &opts, std::ostream &out, std::ostream *per_trial = nullptr);

std::vector<std::string> applicable_solvers(CaseId id, const std::vector<std::string> &requested);

double median_ignoring_nan(std::vector<double> values); // NaN when all NaN

} // namespace sego
