#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "drivecause/action_distance.hpp"
#include "drivecause/world.hpp"

namespace drivecause {

/// Controller output, clamped to the vehicle limits.
struct ControlOutput {
    double motor_torque = 0.0;  // N m
    double steer = 0.0;         // rad
};

struct PlannerConfig {
    double horizon = 5.0;  // s, simulation horizon tau
    std::vector<double> speed_deltas{-10.0, -5.0, 0.0, 5.0, 10.0};  // m/s
    double goal_lead_time = 4.0;  // s ahead for candidate goal target times
    ControlGains gains;
    bool include_observed_action = true;  // add the observed action to the
                                          // hypothetical set when learning
};

/// Proportional-derivative tracking of an action's goals: motor torque from
/// the speed error (mapped through mass and wheel radius), steering from the
/// lateral offset and offset rate towards the target lane centreline. Goals
/// are held beyond their target times.
ControlOutput control(const Action& a, const RigidBodyState& s, const VehicleParams& p,
                      const LaneMap& lanes, double t, const ControlGains& gains);

/// Candidate grid: (current speed + delta, floored at 0) x (stay and any
/// adjacent lanes), goals due `goal_lead_time` after `t`. The maintain action
/// (delta 0, stay) is always present and always first.
std::vector<Action> generate_candidates(const RigidBodyState& s, LaneId lane, double t,
                                        const PlannerConfig& cfg);

struct PlanResult {
    Action best;
    std::vector<std::pair<Action, Outcome>> outcomes;  // in candidate order
    std::vector<double> scores;                        // aligned with outcomes
    int best_index = 0;
};

/// Simulates every candidate by intervening on the agent's controller input
/// from `t` for `cfg.horizon` seconds, scores outcomes with the profile, and
/// returns the argmax. Ties break towards the maintain action (smallest
/// action distance), then candidate order. Candidates whose rollout diverges
/// are dropped; if none survive, AllCandidatesDivergedError.
PlanResult plan(const SceneWorld& world, const AgentId& agent, const RewardProfile& profile,
                double t, const PlannerConfig& cfg, const RewardConfig& reward_cfg,
                std::uint64_t seed, const ActionDistanceConfig& tie_cfg = {});

}  // namespace drivecause
