#pragma once

#include <optional>

#include "drivecause/geometry.hpp"
#include "drivecause/lane_map.hpp"
#include "drivecause/types.hpp"

namespace drivecause {

/// Translational state of a 2D point mass.
struct PointMassState {
    Vec2 position;       // m
    Vec2 velocity;       // m/s
    Vec2 acceleration;   // m/s^2
    double mass = 1.0;   // kg

    constexpr bool operator==(const PointMassState&) const = default;
};

/// Point mass extended with planar rotation and a rectangular footprint.
struct RigidBodyState {
    Vec2 position;
    Vec2 velocity;
    Vec2 acceleration;
    double mass = 1.0;
    double rotation = 0.0;              // rad, CCW, wrapped to (-pi, pi]
    double angular_velocity = 0.0;      // rad/s
    double angular_acceleration = 0.0;  // rad/s^2
    double moment_of_inertia = 1.0;     // kg m^2
    Vec2 half_extents{1.0, 0.5};        // m; x along heading, y across

    double speed() const { return velocity.norm(); }
    Vec2 heading() const { return heading_vector(rotation); }
    /// Speed component along the body heading (signed).
    double longitudinal_speed() const { return velocity.dot(heading()); }

    constexpr bool operator==(const RigidBodyState&) const = default;
};

/// Front-wheel-drive vehicle parameters for the dynamic bicycle model.
struct VehicleParams {
    double wheelbase = 2.8;                   // m, front to rear axle
    double front_axle_offset = 1.4;           // m, centre of mass to front axle
    double cornering_stiffness_front = 8e4;   // N/rad
    double cornering_stiffness_rear = 8e4;    // N/rad
    double wheel_radius = 0.3;                // m
    double max_motor_torque = 2000.0;         // N m
    double max_steer = 0.6;                   // rad
    double drag_area_coefficient = 0.4;       // kg/m, 1/2 rho Cd A folded

    constexpr bool operator==(const VehicleParams&) const = default;
};

/// Default parameter fill-in when a dataset only gives the body length:
/// wheelbase 0.6 * length with the centre of mass midway between the axles.
VehicleParams default_vehicle_params(double length);

/// Mass/inertia/footprint defaults for a vehicle known only by its outline:
/// mass 1500 kg, I = m (L^2 + W^2) / 12. Kinematic fields are zeroed.
RigidBodyState default_vehicle_body(double length, double width, double mass = 1500.0);

/// Aggregate external forcing on a body from the shared environment
/// (air resistance plus contact with other bodies).
struct EnvForce {
    Vec2 force;             // N
    double torque = 0.0;    // N m
    double magnitude = 0.0; // N, Euclidean norm of force

    constexpr bool operator==(const EnvForce&) const = default;
};

constexpr double kDefaultCollisionStiffness = 1e5;  // N/m of penetration

/// Semi-implicit Euler step: a' = F/m, v' = v + a' dt, x' = x + v' dt.
PointMassState step_point_mass(const PointMassState& s, const Vec2& net_force, double dt);

/// Linear part as step_point_mass; angular part uses alpha = tau / I and
/// wraps the resulting rotation to (-pi, pi].
RigidBodyState step_rigid_body(const RigidBodyState& s, const Vec2& net_force,
                               double net_torque, double dt);

/// Forces and yaw torque produced by the drivetrain and tyres for given motor
/// torque and steering inputs. Inputs are clamped to the parameter limits.
Wrench vehicle_forces(const RigidBodyState& s, const VehicleParams& p,
                      double motor_torque, double steer);

/// Penalty contact force exerted on `a` by `b`: zero when the oriented
/// rectangles are disjoint, otherwise proportional to the penetration depth
/// along the minimum-translation axis. Exactly antisymmetric in (a, b).
Vec2 collision_force(const RigidBodyState& a, const RigidBodyState& b,
                     double stiffness = kDefaultCollisionStiffness);

/// Quadratic air drag plus the sum of contact forces from `others`.
EnvForce environment_forces(const RigidBodyState& body, const VehicleParams& p,
                            const std::vector<RigidBodyState>& others,
                            double collision_stiffness = kDefaultCollisionStiffness);

/// Bumper-to-bumper along-lane distance from `a` to `b`, defined when `b`
/// occupies the same lane and is ahead of `a`. Clamped to be non-negative.
std::optional<double> headway(const RigidBodyState& a, const RigidBodyState& b,
                              LaneId lane_of_a, const LaneMap& lanes);

}  // namespace drivecause
