#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "drivecause/dynamics.hpp"
#include "drivecause/reward.hpp"
#include "drivecause/scm.hpp"
#include "drivecause/track.hpp"

namespace drivecause {

/// Proportional-derivative gains shared by the longitudinal and lateral
/// controller loops.
struct ControlGains {
    double speed_kp = 0.8;    // m/s^2 per m/s of speed error
    double speed_kd = 0.1;
    double lateral_kp = 0.35;  // rad per m of lateral offset
    double lateral_kd = 0.9;   // rad s per m
};

/// An action becoming active at time `t` and holding until the next entry.
struct ScheduledAction {
    double t = 0.0;
    Action action;

    bool operator==(const ScheduledAction&) const = default;
};

/// Piecewise-constant action schedule for one agent, time-sorted.
struct AgentTimeline {
    AgentId agent;
    std::vector<ScheduledAction> actions;

    const Action& action_at(double t) const;
    /// The action that held immediately before the entry active at `t`.
    /// For the very first entry this is the entry itself.
    const Action& action_before(double t) const;
};

struct WorldConfig {
    double time_step = 0.04;          // s, one SCM slice (dataset frame rate)
    int physics_substeps = 4;         // self-dynamics refinement per slice
    double collision_stiffness = 1e5; // N/m
    double goal_speed_tolerance = 1.0;  // m/s for the goals-accomplished flag
    ControlGains gains;
};

struct AgentSetup {
    AgentId id;
    VehicleParams params;
    RigidBodyState initial_state;
    AgentTimeline timeline;
};

/// A scene compiled to a structural causal model. Per agent the graph holds
///   action  <- schedule (the intervention point for planning/counterfactuals)
///   control <- action, own state          (PD controller, zero-order hold)
///   state   <- own state, control, every other state, one slice back
///   drive   <- control, own state         (drivetrain/tyre wrench)
///   env     <- own state, other states    (drag + contact wrench)
/// Copies are cheap and share the underlying model.
class SceneWorld {
public:
    /// Compiles a scene with the given per-agent action schedules. The scene
    /// must start at time 0 and every track must span the full window.
    static SceneWorld from_scene(const SceneModel& scene,
                                 const std::vector<AgentTimeline>& timelines,
                                 const WorldConfig& cfg);

    /// Assembles a world directly from parts (used by scenario synthesis).
    static SceneWorld from_parts(LaneMap lane_map, std::vector<AgentSetup> agents,
                                 double duration, const WorldConfig& cfg);

    const scm::CausalModel& model() const { return model_; }
    const LaneMap& lane_map() const { return lane_map_; }
    const std::vector<AgentId>& agents() const { return agent_ids_; }
    const AgentTimeline& timeline(const AgentId& id) const;
    const VehicleParams& vehicle_params(const AgentId& id) const;
    double time_step() const { return cfg_.time_step; }
    double duration() const { return duration_; }
    const WorldConfig& config() const { return cfg_; }

    /// Pattern addressing an agent's controller input from `from_time` on.
    scm::VariablePattern action_pattern(const AgentId& id, double from_time) const;

    /// New world sharing this one's metadata with one more intervention.
    SceneWorld with_intervention(const scm::Intervention& iv) const;

    scm::Rollout rollout(double horizon, std::uint64_t seed) const;

    RigidBodyState body_state(const scm::Rollout& r, const AgentId& id, int slice) const;

    /// Reads the per-action outcome tuple off a rollout window [t_begin,
    /// t_end]: net lane transitions, final speed, final headway to the
    /// nearest same-lane leader, peak environment force, and whether the
    /// goals of `action` were met by their target times.
    Outcome extract_outcome(const scm::Rollout& r, const AgentId& id, double t_begin,
                            double t_end, const Action& action) const;

private:
    scm::CausalModel model_;
    std::shared_ptr<const LaneMap> lane_map_;  // shared with the equations
    std::vector<AgentId> agent_ids_;
    std::map<AgentId, AgentTimeline> timelines_;
    std::map<AgentId, VehicleParams> params_;
    WorldConfig cfg_;
    double duration_ = 0.0;
};

/// Derives a timeline initial state from the first frame of a track:
/// heading from the velocity (or the lane direction at standstill), inertia
/// defaults from the footprint.
RigidBodyState body_state_from_frame(const TrackFrame& frame, double length, double width,
                                     const LaneMap& lanes);

}  // namespace drivecause
