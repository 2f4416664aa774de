#pragma once
/**
 * @file   simulation.hpp
 * @brief  Fixed-step surveillance loop: targets -> regression -> ellipse
 *         sizing -> guidance -> unicycle step, with per-tick monitors.
 */

#include "encircle/dynamics.hpp"
#include "encircle/geometry.hpp"
#include "encircle/guidance.hpp"
#include "encircle/regression.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace encircle
{
    /// A SimConfig that breaks a physical or structural invariant. invariant() names it.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError (std::string invariant, const std::string &detail)
            : std::runtime_error ("invariant violated: " + invariant + " (" + detail + ")"),
              invariant_ (std::move (invariant))
        {
        }
        [[nodiscard]] const std::string &invariant () const noexcept { return invariant_; }

    private:
        std::string invariant_;
    };

    struct AgentLimits
    {
        double v_a_min{0.0};
        double v_a_max{0.0};
        double v_t_max{0.0};
        double omega_max{0.0};
        double standoff{0.0}; ///< d_s, m

        /// V_R_max = V_A_max + V_T_max
        [[nodiscard]] double max_relative_speed () const noexcept { return v_a_max + v_t_max; }
        /// V_R_max / omega_max, the smallest radius of curvature the orbit may have.
        [[nodiscard]] double turn_radius_floor () const noexcept { return max_relative_speed () / omega_max; }

        friend bool operator== (const AgentLimits &, const AgentLimits &) = default;
    };

    /// Either a fixed ellipse to track or a convoy whose ellipse is recomputed every tick.
    using OrbitSource = std::variant<EllipseSpec, TargetModel>;

    inline constexpr double kDefaultDt = 0.05;

    struct SimConfig
    {
        std::string name;
        std::string description;
        AgentLimits limits{};
        GuidanceGains gains{};
        OrbitDirection direction{OrbitDirection::kCounterClockwise};
        AgentState agent{};
        OrbitSource orbit{};
        Wind wind{};
        double dt{kDefaultDt};
        double duration{0.0};
        int regression_interval{1}; ///< regression every M ticks, frame held in between

        [[nodiscard]] bool has_targets () const noexcept { return std::holds_alternative<TargetModel> (orbit); }
        [[nodiscard]] std::size_t target_count () const noexcept;
        /// Index of the last tick: round(duration / dt).
        [[nodiscard]] long long last_tick () const noexcept;

        friend bool operator== (const SimConfig &, const SimConfig &) = default;
    };

    /// Throws ConfigError naming the first violated invariant.
    void validate (const SimConfig &cfg);

    /// One row of the trace. Heading angles psi_T/psi_O/psi_D are in the ellipse frame.
    struct TickRecord
    {
        double t{0.0};
        double x_A{0.0};
        double y_A{0.0};
        double psi_A{0.0};
        double x_o{0.0};
        double y_o{0.0};
        double a{0.0};
        double b{0.0};
        double theta_E{0.0};
        double gamma{0.0};
        double psi_T{0.0};
        double psi_O{0.0};
        double psi_D{0.0};
        double omega_raw{0.0};
        double omega{0.0};
        double V{0.0};
        double V_tilde{0.0};
        double Gamma{0.0};
        std::vector<double> gamma_T;

        friend bool operator== (const TickRecord &, const TickRecord &) = default;
    };

    struct SimTrace
    {
        SimConfig config;
        std::vector<TickRecord> ticks;
        std::optional<std::string> abort_reason; ///< set when a non-finite state stopped the run

        [[nodiscard]] bool aborted () const noexcept { return abort_reason.has_value (); }

        friend bool operator== (const SimTrace &, const SimTrace &) = default;
    };

    /**
     * @brief Orbit semi-axes for a regression frame.
     *
     * The rectangle is inflated by 2 d_s per side, the minimum-area
     * circumscribing axes are taken, and both are floored so the orbit's
     * minimum radius of curvature b^2/a is at least V_R_max / omega_max.
     * If the rectangle is wider than long, a is raised to b (a circle), which
     * still contains the rectangle and keeps a >= b.
     */
    [[nodiscard]] SemiAxes select_axes (const RegressionFrame &frame, const AgentLimits &limits);

    struct MonitorRecord
    {
        double V{0.0};       ///< (gamma - 1)^2 against the reference ellipse
        double V_tilde{0.0}; ///< zeta^2 against the current ellipse
        double zeta{0.0};
        double Gamma{0.0};   ///< |<grad E_A, (cos psi_D, sin psi_D)>|
        std::vector<double> gamma_T;
    };

    /**
     * @param agent     agent position, global frame
     * @param current   ellipse tracked at this tick
     * @param reference ellipse the Lyapunov function V is evaluated against
     *                  (the fixed orbit, or the previous tick's ellipse)
     * @param psi_D     desired heading in the frame of @p current
     * @param targets   target positions, global frame
     */
    [[nodiscard]] MonitorRecord compute_monitors (Vec2 agent, const EllipseSpec &current,
                                                  const EllipseSpec &reference, double psi_D,
                                                  std::span<const Vec2> targets);

    /// Validates @p cfg and runs it to completion or to the first non-finite state.
    [[nodiscard]] SimTrace run_simulation (const SimConfig &cfg);

    inline constexpr double kAlignTime = 30.0;
    inline constexpr double kSettleBand = 0.05;

    /**
     * Initial phase excluded from steady-state checks.  It ends at the later
     * of @p align_time and the first tick with |gamma - 1| < @p band; when the
     * agent never enters the band it ends at @p align_time and settle_time is
     * empty.
     */
    struct TransientWindow
    {
        std::optional<double> settle_time;
        double end{0.0};

        [[nodiscard]] bool settled () const noexcept { return settle_time.has_value (); }
    };

    [[nodiscard]] TransientWindow transient_window (std::span<const TickRecord> ticks,
                                                    double align_time = kAlignTime, double band = kSettleBand);

} // namespace encircle
