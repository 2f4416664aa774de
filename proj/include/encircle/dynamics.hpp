#pragma once
/**
 * @file   dynamics.hpp
 * @brief  Unicycle agent kinematics and ground-target motion models.
 */

#include "encircle/geometry.hpp"
#include "encircle/regression.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace encircle
{
    struct Pose2D
    {
        Vec2 position{};
        double psi{0.0}; ///< heading, rad, wrapped

        friend bool operator== (const Pose2D &, const Pose2D &) = default;
    };

    struct AgentState
    {
        Pose2D pose{};
        double speed{0.0}; ///< commanded constant linear speed V_A, m/s

        friend bool operator== (const AgentState &, const AgentState &) = default;
    };

    /// Constant velocity disturbance added to the agent's planar velocity.
    struct Wind
    {
        double speed{0.0};
        double heading{0.0};

        [[nodiscard]] Vec2 velocity () const noexcept
        {
            return {speed * std::cos (heading), speed * std::sin (heading)};
        }

        friend bool operator== (const Wind &, const Wind &) = default;
    };

    /**
     * @brief One RK4 step of x' = V cos psi + w_x, y' = V sin psi + w_y, psi' = omega.
     *
     * omega is held over the step; heading is wrapped only after the step.
     * Throws std::invalid_argument for dt <= 0.
     */
    [[nodiscard]] AgentState step_unicycle (const AgentState &state, double omega, const Wind &wind, double dt);

    /// (A cos phi, B sin 2 phi)
    [[nodiscard]] Vec2 lissajous_position (double phi, double A, double B) noexcept;

    /// d/dt of lissajous_position for phi' = phi_rate.
    [[nodiscard]] Vec2 lissajous_velocity (double phi, double A, double B, double phi_rate) noexcept;

    /// Targets on x = A cos phi, y = B sin 2 phi with phi_i(t) = phi0[i] + phi_rate t.
    struct LissajousConvoy
    {
        double A{0.0};
        double B{0.0};
        double phi_rate{0.0};
        std::vector<double> phi0;

        /// sqrt(A^2 + 4 B^2) |phi_rate|, an upper bound on every target's speed.
        [[nodiscard]] double speed_bound () const noexcept;

        friend bool operator== (const LissajousConvoy &, const LissajousConvoy &) = default;
    };

    struct LinearTarget
    {
        Vec2 origin{};
        double heading{0.0};
        double speed{0.0};

        friend bool operator== (const LinearTarget &, const LinearTarget &) = default;
    };

    struct LinearConvoy
    {
        std::vector<LinearTarget> members;

        friend bool operator== (const LinearConvoy &, const LinearConvoy &) = default;
    };

    struct WaypointMember
    {
        double offset{0.0}; ///< initial arc length along the polyline, m
        double speed{0.0};

        friend bool operator== (const WaypointMember &, const WaypointMember &) = default;
    };

    /// Targets moving along a shared polyline; they stop at its ends.
    struct WaypointConvoy
    {
        std::vector<Vec2> polyline;
        std::vector<WaypointMember> members;

        friend bool operator== (const WaypointConvoy &, const WaypointConvoy &) = default;
    };

    using TargetModel = std::variant<LissajousConvoy, LinearConvoy, WaypointConvoy>;

    [[nodiscard]] std::size_t target_count (const TargetModel &model) noexcept;

    /// Largest speed any target can reach under @p model.
    [[nodiscard]] double max_target_speed (const TargetModel &model) noexcept;

    /// Point at arc length @p s along @p polyline, clamped to its ends.
    [[nodiscard]] Vec2 point_along (const std::vector<Vec2> &polyline, double s);

    /// Target positions at time t, ordered 1..N with the leader last.
    [[nodiscard]] ConvoySnapshot advance_targets (const TargetModel &model, double t);

} // namespace encircle
