#pragma once
/**
 * @file   plots.hpp
 * @brief  Static SVG figures of a trace. Presentation only.
 */

#include "encircle/simulation.hpp"

#include <filesystem>
#include <vector>

namespace encircle::io
{
    struct PlotOptions
    {
        /// Times at which the ellipse and target positions are drawn on the
        /// trajectory figure; empty selects five evenly spaced instants.
        std::vector<double> snapshot_times;
    };

    /**
     * Writes into @p out_dir (created if needed):
     *  - trajectory.svg      agent path, target paths, ellipse snapshots
     *  - lyapunov_omega.svg  V and omega vs t with the +-omega_max band
     *  - gamma_omega_speed.svg  gamma, omega and V_A vs t
     *  - gamma_targets.svg   gamma_Ti vs t (convoy scenarios only)
     * Returns the paths written.  A trace that never settles is still
     * plotted, with a warning line on each figure.
     */
    std::vector<std::filesystem::path> render_plots (const SimTrace &trace, const std::filesystem::path &out_dir,
                                                     const PlotOptions &options = {});

} // namespace encircle::io
