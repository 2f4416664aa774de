#include "encircle/regression.hpp"

#include <algorithm>
#include <stdexcept>

namespace encircle
{
    namespace
    {
        // A sum of squares this small relative to the total scatter is treated as
        // an exact zero; the mean of equal coordinates is not always exact.
        constexpr double kDegenerateRatio = 1e-24;

        bool negligible (double part, double total) noexcept { return part <= kDegenerateRatio * total; }

        void check_snapshot (const ConvoySnapshot &snapshot)
        {
            if (snapshot.positions.empty ())
                throw std::invalid_argument ("convoy snapshot is empty");
            for (const Vec2 &p : snapshot.positions)
                if (!is_finite (p))
                    throw std::invalid_argument ("convoy snapshot contains a non-finite position");
        }

        RegressionFrame single_target (const ConvoySnapshot &snapshot, double theta_E)
        {
            const Vec2 p = snapshot.positions.front ();
            return {wrap_angle (theta_E), 0.0, 0.0, p, p};
        }
    } // namespace

    Vec2 centroid (std::span<const Vec2> points)
    {
        Vec2 sum{};
        for (const Vec2 &p : points)
            sum = sum + p;
        return (1.0 / static_cast<double> (points.size ())) * sum;
    }

    RegressionFrame project_extent (std::span<const Vec2> positions, Vec2 mean, double theta_E)
    {
        const FrameTilt frame (mean, theta_E);
        double x_min = 0.0;
        double x_max = 0.0;
        double d_max = 0.0;
        double x_leader = 0.0;
        for (std::size_t i = 0; i < positions.size (); ++i)
        {
            const Vec2 r = to_frame (positions[i], frame);
            if (i == 0)
            {
                x_min = r.x;
                x_max = r.x;
            }
            x_min = std::min (x_min, r.x);
            x_max = std::max (x_max, r.x);
            d_max = std::max (d_max, std::abs (r.y));
            x_leader = r.x;
        }

        RegressionFrame out;
        out.mean = mean;
        out.l1 = x_max - x_min;
        out.l2 = 2.0 * d_max;
        out.center = from_frame ({0.5 * (x_min + x_max), 0.0}, frame);
        // Ray from the mean to the leader's projection, R^-1 (x_N, 0).
        out.theta_E = atan2_or_zero (std::sin (frame.theta) * x_leader, std::cos (frame.theta) * x_leader);
        return out;
    }

    RegressionFrame init_regression (const ConvoySnapshot &snapshot)
    {
        check_snapshot (snapshot);
        if (snapshot.positions.size () == 1)
            return single_target (snapshot, 0.0);

        const std::span<const Vec2> pts (snapshot.positions);
        const Vec2 mean = centroid (pts);
        double m_n = 0.0;
        double m_d = 0.0;
        double s_yy = 0.0;
        for (const Vec2 &p : pts)
        {
            const Vec2 d = p - mean;
            m_n += d.x * d.y;
            m_d += d.x * d.x;
            s_yy += d.y * d.y;
        }

        // m_d ~ 0 forces m_n ~ 0 (Cauchy-Schwarz): targets stacked vertically.
        const double theta = negligible (m_d, m_d + s_yy) ? kPi / 2.0 : std::atan (m_n / m_d);

        RegressionFrame frame = project_extent (pts, mean, theta);
        if (frame.l1 < frame.l2)
            frame = project_extent (pts, mean, kPi / 2.0 - frame.theta_E);
        return frame;
    }

    RegressionFrame update_regression (double prev_theta_E, const ConvoySnapshot &snapshot)
    {
        check_snapshot (snapshot);
        if (snapshot.positions.size () == 1)
            return single_target (snapshot, prev_theta_E);

        const std::span<const Vec2> pts (snapshot.positions);
        const Vec2 mean = centroid (pts);
        const FrameTilt body (mean, prev_theta_E);
        double s_xy = 0.0;
        double s_xx = 0.0;
        double s_yy = 0.0;
        for (const Vec2 &p : pts)
        {
            const Vec2 b = to_frame (p, body);
            s_xy += b.x * b.y;
            s_xx += b.x * b.x;
            s_yy += b.y * b.y;
        }

        // All targets on the local y axis: quarter turn, as in the first-tick vertical rule.
        const double delta = negligible (s_xx, s_xx + s_yy) ? kPi / 2.0 : std::atan (s_xy / s_xx);
        return project_extent (pts, mean, body.theta + delta);
    }

} // namespace encircle
