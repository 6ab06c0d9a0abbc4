#include "drivecause/lane_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drivecause/errors.hpp"

namespace drivecause {

LaneMap::LaneMap(std::vector<Lane> lanes) : lanes_(std::move(lanes)) {
    for (const Lane& lane : lanes_) {
        if (lane.centreline.size() < 2) {
            throw Error("lane " + std::to_string(lane.id) + " needs >= 2 centreline points");
        }
        if (lane.width <= 0.0) {
            throw Error("lane " + std::to_string(lane.id) + " needs a positive width");
        }
    }
}

bool LaneMap::has_lane(LaneId id) const {
    return std::any_of(lanes_.begin(), lanes_.end(),
                       [id](const Lane& l) { return l.id == id; });
}

const Lane& LaneMap::lane(LaneId id) const {
    for (const Lane& l : lanes_) {
        if (l.id == id) return l;
    }
    throw OffMapError("no lane with id " + std::to_string(id));
}

LaneProjection LaneMap::project(LaneId id, const Vec2& position) const {
    const Lane& l = lane(id);
    const auto& pts = l.centreline;

    LaneProjection best;
    double best_dist = std::numeric_limits<double>::infinity();
    double arc_before = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2 a = pts[i];
        const Vec2 b = pts[i + 1];
        const Vec2 ab = b - a;
        const double len2 = ab.squared_norm();
        if (len2 <= 0.0) continue;
        double t = (position - a).dot(ab) / len2;
        // End segments extend past the polyline so vehicles slightly beyond
        // the mapped stretch still project onto the lane.
        const bool first = (i == 0);
        const bool last = (i + 2 == pts.size());
        const double t_clamped = std::clamp(t, first ? -1e9 : 0.0, last ? 1e9 : 1.0);
        const Vec2 proj = a + ab * t_clamped;
        const double dist = (position - proj).norm();
        if (dist < best_dist) {
            best_dist = dist;
            const Vec2 dir = ab.normalized();
            best.arc_length = arc_before + t_clamped * std::sqrt(len2);
            best.heading = std::atan2(dir.y, dir.x);
            best.point = proj;
            best.lateral_offset = dir.cross(position - proj) >= 0.0 ? dist : -dist;
        }
        arc_before += std::sqrt(len2);
    }
    return best;
}

std::optional<LaneId> LaneMap::nearest_lane(const Vec2& position) const {
    std::optional<LaneId> best;
    double best_offset = std::numeric_limits<double>::infinity();
    for (const Lane& l : lanes_) {
        const double off = std::abs(project(l.id, position).lateral_offset);
        if (off < best_offset) {
            best_offset = off;
            best = l.id;
        }
    }
    return best;
}

std::optional<LaneId> LaneMap::lane_of(const Vec2& position, double margin) const {
    auto id = nearest_lane(position);
    if (!id) return std::nullopt;
    const double off = std::abs(project(*id, position).lateral_offset);
    if (off > lane(*id).width / 2.0 + margin) return std::nullopt;
    return id;
}

int LaneMap::lateral_steps(LaneId from, LaneId to) const {
    auto index_of = [&](LaneId id) {
        for (std::size_t i = 0; i < lanes_.size(); ++i) {
            if (lanes_[i].id == id) return static_cast<int>(i);
        }
        throw OffMapError("no lane with id " + std::to_string(id));
    };
    return index_of(to) - index_of(from);
}

LaneMap make_straight_lane_map(int lane_count, double lane_width, double length,
                               const Vec2& start, const Vec2& direction) {
    const Vec2 dir = direction.normalized();
    const Vec2 left = dir.perp();  // left of travel
    std::vector<Lane> lanes;
    lanes.reserve(static_cast<std::size_t>(lane_count));
    for (int i = 0; i < lane_count; ++i) {
        // Lane 0 is the leftmost; ids grow to the right.
        const Vec2 offset = left * (-static_cast<double>(i) * lane_width);
        Lane lane;
        lane.id = i;
        lane.width = lane_width;
        lane.centreline = {start + offset, start + offset + dir * length};
        if (i > 0) lane.left = i - 1;
        if (i + 1 < lane_count) lane.right = i + 1;
        lanes.push_back(std::move(lane));
    }
    return LaneMap(std::move(lanes));
}

}  // namespace drivecause
