#include "drivecause/world.hpp"

#include <algorithm>
#include <cmath>

#include "drivecause/agent.hpp"
#include "drivecause/errors.hpp"

namespace drivecause {

const Action& AgentTimeline::action_at(double t) const {
    if (actions.empty()) throw Error("empty timeline for agent " + agent);
    const Action* current = &actions.front().action;
    for (const ScheduledAction& sa : actions) {
        if (sa.t <= t + 1e-9) current = &sa.action;
    }
    return *current;
}

const Action& AgentTimeline::action_before(double t) const {
    if (actions.empty()) throw Error("empty timeline for agent " + agent);
    const Action* previous = &actions.front().action;
    const Action* current = previous;
    for (const ScheduledAction& sa : actions) {
        if (sa.t <= t + 1e-9) {
            previous = current;
            current = &sa.action;
        }
    }
    return *previous;
}

RigidBodyState body_state_from_frame(const TrackFrame& frame, double length, double width,
                                     const LaneMap& lanes) {
    RigidBodyState s = default_vehicle_body(length, width);
    s.position = frame.position;
    s.velocity = frame.velocity;
    s.acceleration = frame.acceleration;
    if (frame.velocity.norm() > 0.5) {
        s.rotation = std::atan2(frame.velocity.y, frame.velocity.x);
    } else if (auto lane = lanes.nearest_lane(frame.position)) {
        s.rotation = lanes.project(*lane, frame.position).heading;
    }
    return s;
}

namespace {

/// One integration slice of an agent's own dynamics. Control inputs are held
/// for the whole slice; tyre, drag, and contact forces are refreshed each
/// substep against the other agents' slice-boundary states.
RigidBodyState integrate_agent_slice(RigidBodyState s, const ControlOutput& u,
                                     const VehicleParams& p,
                                     const std::vector<RigidBodyState>& others, double dt,
                                     int substeps, double collision_stiffness) {
    const int n = std::max(1, substeps);
    const double h = dt / n;
    for (int i = 0; i < n; ++i) {
        const Wrench drive = vehicle_forces(s, p, u.motor_torque, u.steer);
        const EnvForce env = environment_forces(s, p, others, collision_stiffness);
        s = step_rigid_body(s, drive.force + env.force, drive.torque + env.torque, h);
    }
    return s;
}

}  // namespace

SceneWorld SceneWorld::from_scene(const SceneModel& scene,
                                  const std::vector<AgentTimeline>& timelines,
                                  const WorldConfig& cfg) {
    if (std::abs(scene.time_begin) > 1e-9) {
        throw Error("scene must be rebased to start at time 0: " + scene.name);
    }
    std::vector<AgentSetup> setups;
    setups.reserve(scene.tracks.size());
    for (const AgentTrack& track : scene.tracks) {
        if (track.frames.empty()) throw Error("track without frames: " + track.agent);
        if (track.start_time > 1e-6 || track.end_time() < scene.time_end - 1e-6) {
            throw Error("track does not span the scene window: " + track.agent);
        }
        AgentSetup setup;
        setup.id = track.agent;
        setup.params = default_vehicle_params(track.length);
        setup.initial_state =
            body_state_from_frame(track.frames.front(), track.length, track.width,
                                  scene.lane_map);
        auto it = std::find_if(timelines.begin(), timelines.end(),
                               [&](const AgentTimeline& tl) { return tl.agent == track.agent; });
        if (it == timelines.end()) throw Error("no timeline for agent " + track.agent);
        setup.timeline = *it;
        setups.push_back(std::move(setup));
    }
    return from_parts(scene.lane_map, std::move(setups), scene.time_end, cfg);
}

SceneWorld SceneWorld::from_parts(LaneMap lane_map, std::vector<AgentSetup> agents,
                                  double duration, const WorldConfig& cfg) {
    SceneWorld world;
    world.lane_map_ = std::move(lane_map);
    world.cfg_ = cfg;
    world.duration_ = duration;

    std::vector<scm::StructuralEquation> equations;
    for (const AgentSetup& agent : agents) {
        world.agent_ids_.push_back(agent.id);
        world.timelines_.emplace(agent.id, agent.timeline);
        world.params_.emplace(agent.id, agent.params);
    }

    const LaneMap& lanes = world.lane_map_;
    for (const AgentSetup& agent : agents) {
        const AgentId& id = agent.id;
        const VehicleParams params = agent.params;
        const AgentTimeline timeline = agent.timeline;
        const ControlGains gains = cfg.gains;

        equations.push_back(scm::StructuralEquation{
            id,
            "action",
            {},
            [timeline](const scm::EvalContext& ctx, std::span<const scm::Value>) -> scm::Value {
                return timeline.action_at(ctx.time);
            },
            std::nullopt});

        equations.push_back(scm::StructuralEquation{
            id,
            "control",
            {{id, "action", scm::Lag::same}, {id, "state", scm::Lag::same}},
            [params, &lanes, gains](const scm::EvalContext& ctx,
                                    std::span<const scm::Value> in) -> scm::Value {
                const auto& a = std::get<Action>(in[0]);
                const auto& s = std::get<RigidBodyState>(in[1]);
                const ControlOutput u = control(a, s, params, lanes, ctx.time, gains);
                return Vec2{u.motor_torque, u.steer};
            },
            std::nullopt});

        // The state advances from the previous slice: own state and control,
        // plus every other body for contact forces.
        std::vector<scm::ParentRef> state_parents = {{id, "state", scm::Lag::previous},
                                                     {id, "control", scm::Lag::previous}};
        for (const AgentSetup& other : agents) {
            if (other.id != id) {
                state_parents.push_back({other.id, "state", scm::Lag::previous});
            }
        }
        const int substeps = cfg.physics_substeps;
        const double stiffness = cfg.collision_stiffness;
        equations.push_back(scm::StructuralEquation{
            id,
            "state",
            std::move(state_parents),
            [params, substeps, stiffness](const scm::EvalContext& ctx,
                                          std::span<const scm::Value> in) -> scm::Value {
                const auto& s = std::get<RigidBodyState>(in[0]);
                const auto& u_raw = std::get<Vec2>(in[1]);
                std::vector<RigidBodyState> others;
                others.reserve(in.size() - 2);
                for (std::size_t i = 2; i < in.size(); ++i) {
                    others.push_back(std::get<RigidBodyState>(in[i]));
                }
                return integrate_agent_slice(s, ControlOutput{u_raw.x, u_raw.y}, params,
                                             others, ctx.dt, substeps, stiffness);
            },
            agent.initial_state});

        equations.push_back(scm::StructuralEquation{
            id,
            "drive",
            {{id, "control", scm::Lag::same}, {id, "state", scm::Lag::same}},
            [params](const scm::EvalContext&, std::span<const scm::Value> in) -> scm::Value {
                const auto& u = std::get<Vec2>(in[0]);
                const auto& s = std::get<RigidBodyState>(in[1]);
                return vehicle_forces(s, params, u.x, u.y);
            },
            std::nullopt});

        std::vector<scm::ParentRef> env_parents = {{id, "state", scm::Lag::same}};
        for (const AgentSetup& other : agents) {
            if (other.id != id) env_parents.push_back({other.id, "state", scm::Lag::same});
        }
        equations.push_back(scm::StructuralEquation{
            id,
            "env",
            std::move(env_parents),
            [params, stiffness](const scm::EvalContext&,
                                std::span<const scm::Value> in) -> scm::Value {
                const auto& s = std::get<RigidBodyState>(in[0]);
                std::vector<RigidBodyState> others;
                others.reserve(in.size() - 1);
                for (std::size_t i = 1; i < in.size(); ++i) {
                    others.push_back(std::get<RigidBodyState>(in[i]));
                }
                const EnvForce env = environment_forces(s, params, others, stiffness);
                return Wrench{env.force, env.torque};
            },
            std::nullopt});
    }

    world.model_ = scm::CausalModel::build(std::move(equations), {});
    return world;
}

const AgentTimeline& SceneWorld::timeline(const AgentId& id) const {
    auto it = timelines_.find(id);
    if (it == timelines_.end()) throw Error("unknown agent: " + id);
    return it->second;
}

const VehicleParams& SceneWorld::vehicle_params(const AgentId& id) const {
    auto it = params_.find(id);
    if (it == params_.end()) throw Error("unknown agent: " + id);
    return it->second;
}

scm::VariablePattern SceneWorld::action_pattern(const AgentId& id, double from_time) const {
    return scm::VariablePattern{id, "action", from_time, std::nullopt};
}

SceneWorld SceneWorld::with_intervention(const scm::Intervention& iv) const {
    SceneWorld out = *this;
    out.model_ = model_.intervene(iv);
    return out;
}

scm::Rollout SceneWorld::rollout(double horizon, std::uint64_t seed) const {
    return model_.simulate(cfg_.time_step, horizon, seed);
}

RigidBodyState SceneWorld::body_state(const scm::Rollout& r, const AgentId& id,
                                      int slice) const {
    return std::get<RigidBodyState>(r.at(id, "state", slice));
}

Outcome SceneWorld::extract_outcome(const scm::Rollout& r, const AgentId& id, double t_begin,
                                    double t_end, const Action& action) const {
    const int first = r.slice_of(t_begin);
    const int last = r.slice_of(t_end);
    const RigidBodyState begin_state = body_state(r, id, first);
    const RigidBodyState end_state = body_state(r, id, last);

    Outcome o;
    const auto lane_begin = lane_map_.nearest_lane(begin_state.position);
    const auto lane_end = lane_map_.nearest_lane(end_state.position);
    if (lane_begin && lane_end) {
        o.lane_transitions = lane_map_.lateral_steps(*lane_begin, *lane_end);
    }

    o.final_speed = end_state.speed();

    o.distance_headway = kNoLeaderHeadway;
    if (lane_end) {
        for (const AgentId& other : agent_ids_) {
            if (other == id) continue;
            const RigidBodyState other_state = body_state(r, other, last);
            if (auto dh = headway(end_state, other_state, *lane_end, lane_map_)) {
                o.distance_headway = std::min(o.distance_headway, *dh);
            }
        }
    }

    for (int s = first; s <= last; ++s) {
        const auto& env = std::get<Wrench>(r.at(id, "env", s));
        o.max_env_force = std::max(o.max_env_force, env.force.norm());
    }

    // Goals are judged at their own target times, clamped into the window.
    const int speed_slice = r.slice_of(std::min(action.speed_goal.target_time, t_end));
    const double speed_then = body_state(r, id, speed_slice).speed();
    const bool speed_ok =
        std::abs(speed_then - action.speed_goal.target_value) <= cfg_.goal_speed_tolerance;
    const int lane_slice = r.slice_of(std::min(action.lane_goal.target_time, t_end));
    const auto lane_then = lane_map_.nearest_lane(body_state(r, id, lane_slice).position);
    const bool lane_ok = lane_then && *lane_then == action.lane_target();
    o.accomplished = speed_ok && lane_ok;

    return o;
}

}  // namespace drivecause
