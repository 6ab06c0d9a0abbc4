#include "drivecause/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

namespace drivecause {

VehicleParams default_vehicle_params(double length) {
    VehicleParams p;
    p.wheelbase = 0.6 * length;
    p.front_axle_offset = p.wheelbase / 2.0;
    return p;
}

RigidBodyState default_vehicle_body(double length, double width, double mass) {
    RigidBodyState s;
    s.mass = mass;
    s.moment_of_inertia = mass * (length * length + width * width) / 12.0;
    s.half_extents = {length / 2.0, width / 2.0};
    return s;
}

PointMassState step_point_mass(const PointMassState& s, const Vec2& net_force, double dt) {
    PointMassState out = s;
    out.acceleration = net_force / s.mass;
    out.velocity = s.velocity + out.acceleration * dt;
    out.position = s.position + out.velocity * dt;
    return out;
}

RigidBodyState step_rigid_body(const RigidBodyState& s, const Vec2& net_force,
                               double net_torque, double dt) {
    RigidBodyState out = s;
    out.acceleration = net_force / s.mass;
    out.velocity = s.velocity + out.acceleration * dt;
    out.position = s.position + out.velocity * dt;
    out.angular_acceleration = net_torque / s.moment_of_inertia;
    out.angular_velocity = s.angular_velocity + out.angular_acceleration * dt;
    out.rotation = wrap_angle(s.rotation + out.angular_velocity * dt);
    return out;
}

Wrench vehicle_forces(const RigidBodyState& s, const VehicleParams& p, double motor_torque,
                      double steer) {
    motor_torque = std::clamp(motor_torque, -p.max_motor_torque, p.max_motor_torque);
    steer = std::clamp(steer, -p.max_steer, p.max_steer);

    // Body-frame velocities.
    const Vec2 fwd = s.heading();
    const Vec2 left = fwd.perp();
    const double vx = s.velocity.dot(fwd);
    const double vy = s.velocity.dot(left);
    const double wz = s.angular_velocity;
    const double a = p.front_axle_offset;          // CoM to front axle
    const double b = p.wheelbase - a;              // CoM to rear axle

    // Linear-tyre slip angles; ill-defined near standstill, so taper off.
    double slip_front = 0.0;
    double slip_rear = 0.0;
    if (std::abs(vx) > 0.5) {
        slip_front = std::atan2(vy + a * wz, vx) - steer;
        slip_rear = std::atan2(vy - b * wz, vx);
    }
    const double lat_front = -p.cornering_stiffness_front * slip_front;
    const double lat_rear = -p.cornering_stiffness_rear * slip_rear;
    const double drive = motor_torque / p.wheel_radius;  // along the steered front wheel

    // Resolve wheel forces into the body frame.
    const double fx = drive * std::cos(steer) - lat_front * std::sin(steer);
    const double fy = drive * std::sin(steer) + lat_front * std::cos(steer) + lat_rear;
    const double torque =
        a * (drive * std::sin(steer) + lat_front * std::cos(steer)) - b * lat_rear;

    return {fwd * fx + left * fy, torque};
}

namespace {

std::array<Vec2, 4> rectangle_corners(const RigidBodyState& s) {
    const Vec2 fwd = s.heading();
    const Vec2 left = fwd.perp();
    const Vec2 ex = fwd * s.half_extents.x;
    const Vec2 ey = left * s.half_extents.y;
    return {s.position + ex + ey, s.position + ex - ey, s.position - ex - ey,
            s.position - ex + ey};
}

struct AxisOverlap {
    bool separated = false;
    double depth = 0.0;  // smallest penetration over all axes
    Vec2 axis;           // unit axis of smallest penetration
};

/// Separating-axis test over both rectangles' edge normals. On overlap,
/// returns the minimum-translation axis in a canonical orientation.
AxisOverlap oriented_rectangle_overlap(const RigidBodyState& a, const RigidBodyState& b) {
    const auto ca = rectangle_corners(a);
    const auto cb = rectangle_corners(b);
    const std::array<Vec2, 4> axes = {a.heading(), a.heading().perp(), b.heading(),
                                      b.heading().perp()};

    AxisOverlap result;
    result.depth = std::numeric_limits<double>::infinity();
    for (Vec2 axis : axes) {
        // Canonical sign so the chosen axis does not depend on argument order.
        if (axis.x < 0.0 || (axis.x == 0.0 && axis.y < 0.0)) axis = -axis;
        double lo_a = std::numeric_limits<double>::infinity(), hi_a = -lo_a;
        double lo_b = lo_a, hi_b = -lo_a;
        for (const Vec2& c : ca) {
            const double d = c.dot(axis);
            lo_a = std::min(lo_a, d);
            hi_a = std::max(hi_a, d);
        }
        for (const Vec2& c : cb) {
            const double d = c.dot(axis);
            lo_b = std::min(lo_b, d);
            hi_b = std::max(hi_b, d);
        }
        const double overlap = std::min(hi_a, hi_b) - std::max(lo_a, lo_b);
        if (overlap <= 0.0) {
            result.separated = true;
            return result;
        }
        if (overlap < result.depth) {
            result.depth = overlap;
            result.axis = axis;
        }
    }
    return result;
}

bool state_precedes(const RigidBodyState& a, const RigidBodyState& b) {
    return std::tie(a.position.x, a.position.y, a.rotation, a.half_extents.x,
                    a.half_extents.y) < std::tie(b.position.x, b.position.y, b.rotation,
                                                 b.half_extents.x, b.half_extents.y);
}

}  // namespace

Vec2 collision_force(const RigidBodyState& a, const RigidBodyState& b, double stiffness) {
    // Evaluate in a canonical argument order so the pair is exactly
    // antisymmetric even when ties occur in the axis selection.
    if (state_precedes(b, a)) return -collision_force(b, a, stiffness);

    const AxisOverlap overlap = oriented_rectangle_overlap(a, b);
    if (overlap.separated) return {0.0, 0.0};
    const double toward_a = overlap.axis.dot(a.position - b.position);
    const double sign = toward_a < 0.0 ? -1.0 : 1.0;
    return overlap.axis * (sign * stiffness * overlap.depth);
}

EnvForce environment_forces(const RigidBodyState& body, const VehicleParams& p,
                            const std::vector<RigidBodyState>& others,
                            double collision_stiffness) {
    EnvForce env;
    env.force = body.velocity * (-p.drag_area_coefficient * body.velocity.norm());
    for (const RigidBodyState& other : others) {
        const Vec2 contact = collision_force(body, other, collision_stiffness);
        env.force += contact;
        // Approximate contact point midway between the centres; drag itself
        // acts through the centre of mass and adds no torque.
        const Vec2 arm = (other.position - body.position) * 0.5;
        env.torque += arm.cross(contact);
    }
    env.magnitude = env.force.norm();
    return env;
}

std::optional<double> headway(const RigidBodyState& a, const RigidBodyState& b,
                              LaneId lane_of_a, const LaneMap& lanes) {
    if (!lanes.has_lane(lane_of_a)) return std::nullopt;
    const auto lane_b = lanes.nearest_lane(b.position);
    if (!lane_b || *lane_b != lane_of_a) return std::nullopt;
    const double s_a = lanes.project(lane_of_a, a.position).arc_length;
    const double s_b = lanes.project(lane_of_a, b.position).arc_length;
    if (s_b <= s_a) return std::nullopt;
    const double gap = (s_b - b.half_extents.x) - (s_a + a.half_extents.x);
    return std::max(0.0, gap);
}

}  // namespace drivecause
