#pragma once

#include "sego/estimator.h"
#include "sego/types.h"

#include <string>
#include <vector>

namespace sego {

// {"features": [{"kind": "point"|"line",
//                "observations": [{"camera": 1, "view": 2, "x": [u,v(,w)]} |
//                                 {"camera": 2, "view": 1, "l": [a,b,c]}]}]}
std::vector<Correspondence> correspondences_from_json(const std::string &text);

struct SolveOutput {
    std::string label;
    bool swap_cameras = false;
    struct Candidate {
        Quaternion q;
        Eigen::Vector3d t;
    };
    std::vector<Candidate> candidates;
};

std::string solve_output_to_json(const SolveOutput &out);

} // namespace sego
