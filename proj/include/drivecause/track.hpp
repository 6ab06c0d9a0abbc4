#pragma once

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "drivecause/geometry.hpp"
#include "drivecause/lane_map.hpp"
#include "drivecause/types.hpp"

namespace drivecause {

enum class VehicleClass { car, truck };

/// One recorded sample of an agent.
struct TrackFrame {
    Vec2 position;
    Vec2 velocity;
    Vec2 acceleration;
    LaneId lane_id = kNoLane;

    bool operator==(const TrackFrame&) const = default;
};

/// A recorded trajectory: uniformly spaced frames starting at `start_time`.
struct AgentTrack {
    AgentId agent;
    double frame_rate = 25.0;  // Hz
    double start_time = 0.0;   // scene seconds of frames.front()
    std::vector<TrackFrame> frames;
    double length = 4.5;  // m
    double width = 2.0;   // m
    VehicleClass vehicle_class = VehicleClass::car;

    double dt() const { return 1.0 / frame_rate; }
    double end_time() const {
        return frames.empty() ? start_time
                              : start_time + (static_cast<double>(frames.size()) - 1.0) / frame_rate;
    }
    double time_of(std::size_t frame) const {
        return start_time + static_cast<double>(frame) / frame_rate;
    }

    bool operator==(const AgentTrack&) const = default;
};

/// Unordered agent pair, normalised so first <= second.
struct AgentPair {
    AgentId first;
    AgentId second;

    AgentPair() = default;
    AgentPair(AgentId a, AgentId b) {
        if (b < a) std::swap(a, b);
        first = std::move(a);
        second = std::move(b);
    }
    bool operator==(const AgentPair&) const = default;
    bool operator<(const AgentPair& o) const {
        return std::tie(first, second) < std::tie(o.first, o.second);
    }
};

using AgentAdjacency = std::set<AgentPair>;

/// One analysable scene: map, trajectories, time window, and (for labelled
/// evaluation data) the ground-truth agent adjacency.
struct SceneModel {
    std::string name;
    LaneMap lane_map;
    std::vector<AgentTrack> tracks;
    double time_begin = 0.0;
    double time_end = 0.0;
    std::optional<AgentAdjacency> labels;

    const AgentTrack* find_track(const AgentId& id) const {
        for (const auto& t : tracks) {
            if (t.agent == id) return &t;
        }
        return nullptr;
    }

    bool operator==(const SceneModel&) const = default;
};

}  // namespace drivecause
