#pragma once

#include <string>

namespace drivecause {

using AgentId = std::string;

/// Lane identifiers index into LaneMap::lanes. Maps are built so that ids
/// increase from left to right relative to the driving direction, which lets
/// id comparisons stand in for lateral direction.
using LaneId = int;

constexpr LaneId kNoLane = -1;

/// A target value to be reached by a target time (absolute scene seconds).
/// The value is a speed in m/s for speed goals and a LaneId for lane goals.
struct Goal {
    double target_value = 0.0;
    double target_time = 0.0;

    constexpr bool operator==(const Goal&) const = default;
};

/// One agent decision: hold a speed and a lane, each with its own deadline.
struct Action {
    Goal speed_goal;
    Goal lane_goal;  // target_value holds a LaneId

    LaneId lane_target() const { return static_cast<LaneId>(lane_goal.target_value); }

    constexpr bool operator==(const Action&) const = default;
};

}  // namespace drivecause
