#pragma once
/**
 * @file   summary.hpp
 * @brief  Scalar digest of a trace, a pure function of the trace contents.
 */

#include "encircle/simulation.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace encircle::io
{
    inline constexpr double kPeakThreshold = 0.15; ///< rad/s

    struct Summary
    {
        std::string scenario;
        std::size_t ticks{0};
        bool aborted{false};
        std::optional<double> settle_time;
        double transient_end{0.0};
        std::optional<double> max_abs_omega_raw;       ///< post-transient, before saturation
        std::optional<double> max_abs_omega;           ///< post-transient, commanded
        std::optional<double> mean_abs_gamma_error;    ///< post-transient
        std::optional<double> max_abs_gamma_error;     ///< post-transient
        std::optional<double> max_gamma_T;             ///< whole run, absent without targets
        std::optional<double> min_agent_target_distance;
        int omega_peaks{0};                            ///< post-transient
        std::vector<std::string> flags;                ///< "did_not_settle", "empty_post_transient_window", "aborted"
    };

    /// Local maxima of |omega| strictly above @p threshold (a plateau counts once).
    [[nodiscard]] int count_omega_peaks (std::span<const TickRecord> ticks, double threshold = kPeakThreshold);

    /// Ticks with t strictly after the transient window.
    [[nodiscard]] std::span<const TickRecord> post_transient (std::span<const TickRecord> ticks,
                                                              const TransientWindow &window);

    [[nodiscard]] Summary summarize (const SimTrace &trace);

    [[nodiscard]] nlohmann::ordered_json to_json (const Summary &summary);

} // namespace encircle::io
