#include "encircle/geometry.hpp"

#include <stdexcept>
#include <string>

namespace encircle
{
    double wrap_angle (double angle) noexcept
    {
        double r = std::remainder (angle, 2.0 * kPi);
        if (r <= -kPi)
            r += 2.0 * kPi;
        return r;
    }

    double atan2_or_zero (double y, double x) noexcept
    {
        if (y == 0.0 && x == 0.0)
            return 0.0;
        return wrap_angle (std::atan2 (y, x));
    }

    Vec2 to_frame (Vec2 p, const FrameTilt &frame) noexcept
    {
        const double c = std::cos (frame.theta);
        const double s = std::sin (frame.theta);
        const Vec2 d = p - frame.origin;
        return {c * d.x + s * d.y, -s * d.x + c * d.y};
    }

    Vec2 from_frame (Vec2 p_local, const FrameTilt &frame) noexcept
    {
        const double c = std::cos (frame.theta);
        const double s = std::sin (frame.theta);
        return Vec2{c * p_local.x - s * p_local.y, s * p_local.x + c * p_local.y} + frame.origin;
    }

    EllipseSpec::EllipseSpec (Vec2 center, double a, double b, double theta)
        : frame_ (center, theta), a_ (a), b_ (b)
    {
        if (!is_finite (center) || !std::isfinite (a) || !std::isfinite (b) || !std::isfinite (theta))
            throw std::invalid_argument ("EllipseSpec: non-finite parameter");
        if (!(b > 0.0))
            throw std::invalid_argument ("EllipseSpec: requires b > 0, got b = " + std::to_string (b));
        if (a < b)
            throw std::invalid_argument ("EllipseSpec: requires a >= b, got a = " + std::to_string (a) +
                                         ", b = " + std::to_string (b));
    }

    double ellipse_level (Vec2 p, const EllipseSpec &ellipse) noexcept
    {
        return ellipse_level_local (to_frame (p, ellipse.frame ()), ellipse.a (), ellipse.b ());
    }

    SemiAxes min_area_circumscribing_axes (double l1, double l2)
    {
        if (!(l1 > 0.0) || !(l2 >= 0.0))
            throw std::invalid_argument ("min_area_circumscribing_axes: requires l1 > 0 and l2 >= 0");
        if (l1 < l2)
            throw std::invalid_argument ("min_area_circumscribing_axes: requires l1 >= l2 (orient the rectangle first)");
        return {l1 / std::numbers::sqrt2, l2 / std::numbers::sqrt2};
    }

    double radius_of_curvature (double a, double b, double s) noexcept
    {
        const double sn = std::sin (s);
        const double cs = std::cos (s);
        const double q = a * a * sn * sn + b * b * cs * cs;
        return q * std::sqrt (q) / (a * b);
    }

} // namespace encircle
