#pragma once
/**
 * @file   regression.hpp
 * @brief  Convoy-centric line regression and the bounding rectangle it induces.
 *
 * Each tick the convoy is summarised by a line through its mean, a tilt
 * theta_E pointing toward the leader, and an l1 x l2 rectangle (l1 along the
 * line, l2 = twice the largest normal residual) centred at (x_o, y_o).
 * After the first tick the line is refitted in a frame tilted by the previous
 * theta_E, so the slope being estimated is a small correction and the fit
 * never degenerates when the convoy runs parallel to the global y axis.
 */

#include "encircle/geometry.hpp"

#include <span>
#include <vector>

namespace encircle
{
    /// Target positions at one instant; index N-1 is the convoy leader.
    struct ConvoySnapshot
    {
        std::vector<Vec2> positions;
    };

    struct RegressionFrame
    {
        double theta_E{0.0};
        double l1{0.0};
        double l2{0.0};
        Vec2 center{}; ///< rectangle center (x_o, y_o)
        Vec2 mean{};   ///< target mean (x_bar, y_bar)

        friend bool operator== (const RegressionFrame &, const RegressionFrame &) = default;
    };

    [[nodiscard]] Vec2 centroid (std::span<const Vec2> points);

    /**
     * @brief Projects every target onto the line through @p mean with tilt
     *        @p theta_E and returns the bounding rectangle.
     *
     * The returned theta_E is re-aimed along the ray from the mean to the
     * leader's projection, so it flips by pi when the leader projects behind
     * the mean and is 0 when the leader projects onto the mean.
     */
    [[nodiscard]] RegressionFrame project_extent (std::span<const Vec2> positions, Vec2 mean, double theta_E);

    /// First-tick regression in the global frame, with the vertical-stack and l1 < l2 rules.
    [[nodiscard]] RegressionFrame init_regression (const ConvoySnapshot &snapshot);

    /// Subsequent ticks: through-origin refit in the frame tilted by @p prev_theta_E.
    [[nodiscard]] RegressionFrame update_regression (double prev_theta_E, const ConvoySnapshot &snapshot);

} // namespace encircle
