#include "encircle/guidance.hpp"

#include <algorithm>

namespace encircle
{
    double tangent_heading (Vec2 p_local, double a, double b, OrbitDirection dir) noexcept
    {
        const double bx = b * b * p_local.x;
        const double ay = a * a * p_local.y;
        return dir == OrbitDirection::kCounterClockwise ? atan2_or_zero (bx, -ay) : atan2_or_zero (-bx, ay);
    }

    double offset_heading (double gamma, double k_gamma) noexcept { return std::atan (k_gamma * (gamma - 1.0)); }

    HeadingCommand desired_heading (Vec2 agent_local, double a, double b, OrbitDirection dir,
                                    const GuidanceGains &gains) noexcept
    {
        HeadingCommand cmd;
        cmd.gamma = ellipse_level_local (agent_local, a, b);
        cmd.psi_T = tangent_heading (agent_local, a, b, dir);
        cmd.psi_O = offset_heading (cmd.gamma, gains.k_gamma);
        cmd.psi_D = dir == OrbitDirection::kCounterClockwise ? wrap_angle (cmd.psi_T + cmd.psi_O)
                                                             : wrap_angle (cmd.psi_T - cmd.psi_O);
        return cmd;
    }

    double heading_rate_demand (double psi_D, double psi_E, double k_psi) noexcept
    {
        return k_psi * wrap_angle (psi_D - psi_E);
    }

    double angular_velocity_command (double psi_D, double psi_E, double k_psi, double omega_max) noexcept
    {
        return std::clamp (heading_rate_demand (psi_D, psi_E, k_psi), -omega_max, omega_max);
    }

} // namespace encircle
