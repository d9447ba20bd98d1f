#pragma once

#include "sego/classifier.h"
#include "sego/synth.h"
#include "sego/types.h"

#include <cstdint>

namespace sego::testing {

struct PlantedInstance {
    Pose gt;
    std::array<FeatureTriplet, 3> features;
};

// Seeded random instance of one case using the default scene protocol.
PlantedInstance planted_instance(CaseId id, uint64_t seed, double noise_sigma_px = 0.0);

// Degenerate constructions for the detection tests.
PlantedInstance collinear_points_instance(CaseId id, uint64_t seed);  // point-only cases
PlantedInstance parallel_lines_instance(uint64_t seed);               // S3L

} // namespace sego::testing
