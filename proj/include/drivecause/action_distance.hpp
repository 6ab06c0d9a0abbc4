#pragma once

#include "drivecause/types.hpp"

namespace drivecause {

struct ActionDistanceConfig {
    double alpha_a = 0.1;   // overall scale
    double alpha_vl = 10.0; // weight on differing lane targets
    double lambda_a = 0.0;  // causal-necessity threshold
};

/// Scaled distance between two actions: relative speed-target difference,
/// speed/lane target-time differences, and a fixed penalty when the lane
/// targets differ. Zero speed-target sums contribute nothing (logged).
double action_distance(const Action& a, const Action& other, const ActionDistanceConfig& cfg);

}  // namespace drivecause
