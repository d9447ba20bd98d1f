#include "sego/errors.h"
#include "sego/geometry.h"
#include "sego/json_io.h"
#include "sego/solve.h"
#include "sego/synth.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<sego::CaseId> parse_cases(const std::string &arg) {
    std::vector<sego::CaseId> out;
    if (arg == "all")
        return out; // empty = all
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(sego::case_from_name(tok));
    return out;
}

std::vector<std::string> parse_solvers(const std::string &arg) {
    if (arg == "all")
        return {"episego", "ppsego", "easy"};
    if (arg != "episego" && arg != "ppsego" && arg != "easy")
        throw sego::Error(sego::ErrorKind::InvalidInput, "unknown solver: " + arg);
    return {arg};
}

std::string trials_path(const std::string &out_path) {
    auto dot = out_path.rfind('.');
    if (dot == std::string::npos)
        return out_path + ".trials.csv";
    return out_path.substr(0, dot) + ".trials" + out_path.substr(dot);
}

int run_bench(const std::string &sweep, const std::string &solver, const std::string &cases,
              int trials, uint64_t seed, const std::string &out_path, bool per_trial,
              bool condition_check, bool timing) {
    sego::SweepOptions opts;
    opts.kind = sego::sweep_from_name(sweep);
    opts.solvers = parse_solvers(solver);
    opts.cases = parse_cases(cases);
    opts.base.trials = trials;
    opts.base.seed = seed;
    opts.base.noise_sigma_px = 0.5; // overridden by noise sweeps
    opts.condition_check = condition_check;
    opts.timing = timing;

    std::ofstream out(out_path);
    if (!out)
        throw sego::Error(sego::ErrorKind::InvalidInput, "cannot open " + out_path);
    std::ofstream trials_out;
    if (per_trial) {
        trials_out.open(trials_path(out_path));
        if (!trials_out)
            throw sego::Error(sego::ErrorKind::InvalidInput, "cannot open per-trial output");
    }
    sego::run_sweep(opts, out, per_trial ? &trials_out : nullptr);
    return 0;
}

int run_solve(const std::string &input_path, const std::string &solver,
              const std::string &out_path) {
    std::ifstream in(input_path);
    if (!in)
        throw sego::Error(sego::ErrorKind::InvalidInput, "cannot open " + input_path);
    std::stringstream buf;
    buf << in.rdbuf();

    std::vector<sego::Correspondence> corrs = sego::correspondences_from_json(buf.str());
    if (corrs.size() != 3)
        throw sego::Error(sego::ErrorKind::InvalidInput,
                          "solve expects exactly three features (a minimal set)");

    std::array<sego::FeatureTriplet, 3> features = {corrs[0].triplet(), corrs[1].triplet(),
                                                    corrs[2].triplet()};
    sego::SolveOptions opts;
    if (solver == "ppsego")
        opts.hard = sego::HardSolver::PPSEgo;
    else if (solver == "episego" || solver == "auto" || solver == "easy")
        opts.hard = sego::HardSolver::EpiSEgo;
    else
        throw sego::Error(sego::ErrorKind::InvalidInput, "unknown solver: " + solver);

    sego::SolveResult result = sego::solve_minimal(features, opts);

    sego::SolveOutput out;
    out.label = sego::case_name(result.label.id);
    out.swap_cameras = result.label.swap_cameras;
    for (const sego::Pose &p : result.poses)
        out.candidates.push_back(sego::SolveOutput::Candidate{sego::rotation_to_quat(p.R), p.t});

    std::string text = sego::solve_output_to_json(out);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f)
            throw sego::Error(sego::ErrorKind::InvalidInput, "cannot open " + out_path);
        f << text;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"stereo relative pose from three-view point/line triplets"};
    app.require_subcommand(1);

    auto *bench = app.add_subcommand("bench", "synthetic accuracy sweeps (CSV output)");
    std::string sweep = "noise", solver = "all", cases = "all", out_path = "bench.csv";
    int trials = 1000;
    uint64_t seed = 0;
    bool per_trial = false;
    std::string condition_check = "on", timing = "on";
    bench->add_option("--sweep", sweep, "noise|rotation|translation|line-length|planar")
        ->capture_default_str();
    bench->add_option("--solver", solver, "episego|ppsego|easy|all")->capture_default_str();
    bench->add_option("--cases", cases, "all or comma-separated case names")
        ->capture_default_str();
    bench->add_option("--trials", trials, "trials per sweep cell")->capture_default_str();
    bench->add_option("--seed", seed, "base RNG seed")->capture_default_str();
    bench->add_option("--out", out_path, "output CSV path")->capture_default_str();
    bench->add_flag("--per-trial", per_trial, "also write a per-trial CSV");
    bench->add_option("--condition-check", condition_check,
                      "hidden-variable pivot selection (on|off)")
        ->capture_default_str();
    bench->add_option("--timing", timing,
                      "measure wall time (on) or write zeros for byte-stable output (off)")
        ->capture_default_str();

    auto *solve = app.add_subcommand("solve", "solve one minimal set from JSON");
    std::string input_path, solve_solver = "auto", solve_out = "-";
    solve->add_option("--input", input_path, "input JSON file")->required();
    solve->add_option("--solver", solve_solver, "episego|ppsego|auto")->capture_default_str();
    solve->add_option("--out", solve_out, "output JSON path ('-' for stdout)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bench->parsed())
            return run_bench(sweep, solver, cases, trials, seed, out_path, per_trial,
                             condition_check != "off", timing != "off");
        return run_solve(input_path, solve_solver, solve_out);
    } catch (const sego::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.kind() == sego::ErrorKind::ConfigurationInfeasible)
            return 3;
        if (e.kind() == sego::ErrorKind::InvalidInput)
            return 2;
        return 1;
    }
}
