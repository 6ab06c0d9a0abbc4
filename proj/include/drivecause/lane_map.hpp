#pragma once

#include <optional>
#include <vector>

#include "drivecause/geometry.hpp"
#include "drivecause/types.hpp"

namespace drivecause {

/// One lane: a polyline centreline traversed in the driving direction, a
/// constant width, and lateral neighbours. `successors` records downstream
/// branch continuations where a lane forks; highway maps leave it empty.
struct Lane {
    LaneId id = 0;
    std::vector<Vec2> centreline;  // >= 2 points, ordered along travel
    double width = 3.5;            // m
    std::optional<LaneId> left;    // neighbour to the left of travel
    std::optional<LaneId> right;
    std::vector<LaneId> successors;

    bool operator==(const Lane&) const = default;
};

/// Projection of a point onto a lane centreline.
struct LaneProjection {
    double arc_length = 0.0;      // m along the centreline (may extend past ends)
    double lateral_offset = 0.0;  // m, positive to the left of travel
    double heading = 0.0;         // rad, centreline direction at the projection
    Vec2 point;                   // closest centreline point
};

/// Ordered collection of lanes. Lanes are listed (and ids assigned) from left
/// to right relative to the driving direction, so lane-index differences give
/// signed lateral transitions.
class LaneMap {
public:
    LaneMap() = default;
    explicit LaneMap(std::vector<Lane> lanes);

    const std::vector<Lane>& lanes() const { return lanes_; }
    bool empty() const { return lanes_.empty(); }
    bool has_lane(LaneId id) const;
    const Lane& lane(LaneId id) const;  // throws NoSuchVariableError-free OffMapError

    /// Projects onto the given lane. The first and last segments extend
    /// infinitely so vehicles slightly past the mapped extent still project.
    LaneProjection project(LaneId id, const Vec2& position) const;

    /// Nearest lane by absolute lateral offset, or nullopt for an empty map.
    std::optional<LaneId> nearest_lane(const Vec2& position) const;

    /// Nearest lane whose half-width (plus `margin`) contains the position.
    std::optional<LaneId> lane_of(const Vec2& position, double margin = 0.25) const;

    /// Signed index difference `to` - `from` in the left-to-right lane order.
    int lateral_steps(LaneId from, LaneId to) const;

    bool operator==(const LaneMap&) const = default;

private:
    std::vector<Lane> lanes_;
};

/// Builds a straight multi-lane map: parallel lanes of the given width whose
/// centrelines run from `start` along `direction`. Lanes are ordered left to
/// right; adjacency is filled in.
LaneMap make_straight_lane_map(int lane_count, double lane_width, double length,
                               const Vec2& start = {0.0, 0.0},
                               const Vec2& direction = {1.0, 0.0});

}  // namespace drivecause
