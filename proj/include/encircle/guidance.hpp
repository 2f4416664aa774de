#pragma once
/**
 * @file   guidance.hpp
 * @brief  Vector-field guidance onto an ellipse expressed in its own frame.
 *
 * Inputs are in the ellipse-centred frame F (origin at the ellipse center,
 * x axis along the major axis).  The desired heading is the tangent of the
 * concentric ellipse through the agent, rotated toward the target ellipse by
 * an offset that vanishes on it.
 */

#include "encircle/geometry.hpp"

namespace encircle
{
    enum class OrbitDirection
    {
        kCounterClockwise,
        kClockwise,
    };

    struct GuidanceGains
    {
        double k_gamma{1.0}; ///< offset gain, dimensionless
        double k_psi{1.0};   ///< heading loop gain, 1/s

        friend bool operator== (const GuidanceGains &, const GuidanceGains &) = default;
    };

    struct HeadingCommand
    {
        double psi_T{0.0};
        double psi_O{0.0};
        double psi_D{0.0};
        double gamma{0.0};
        double omega{0.0};
    };

    /// Tangent of the concentric ellipse through @p p_local in the orbit direction; 0 at the origin.
    [[nodiscard]] double tangent_heading (Vec2 p_local, double a, double b, OrbitDirection dir) noexcept;

    /// arctan(k_gamma (gamma - 1)): negative inside, zero on, positive outside the ellipse.
    [[nodiscard]] double offset_heading (double gamma, double k_gamma) noexcept;

    /// psi_D = psi_T + psi_O (CCW) or psi_T - psi_O (CW). omega is left at zero.
    [[nodiscard]] HeadingCommand desired_heading (Vec2 agent_local, double a, double b, OrbitDirection dir,
                                                  const GuidanceGains &gains) noexcept;

    /// Unsaturated proportional rate k_psi * wrap(psi_D - psi_E).
    [[nodiscard]] double heading_rate_demand (double psi_D, double psi_E, double k_psi) noexcept;

    /// heading_rate_demand clamped into [-omega_max, omega_max].
    [[nodiscard]] double angular_velocity_command (double psi_D, double psi_E, double k_psi,
                                                   double omega_max) noexcept;

} // namespace encircle
