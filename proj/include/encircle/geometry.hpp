#pragma once
/**
 * @file   geometry.hpp
 * @brief  Planar frame transforms, ellipse level sets and the closed-form
 *         ellipse results used to size the encircling orbit.
 */

#include <cmath>
#include <numbers>

namespace encircle
{
    inline constexpr double kPi = std::numbers::pi;

    /// Wraps an angle into (-pi, pi]. Every angle in the library passes through here.
    [[nodiscard]] double wrap_angle (double angle) noexcept;

    /// atan2 wrapped into (-pi, pi], with atan2(0, 0) = 0 for either sign of zero.
    [[nodiscard]] double atan2_or_zero (double y, double x) noexcept;

    struct Vec2
    {
        double x{0.0};
        double y{0.0};

        friend constexpr Vec2 operator+ (Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
        friend constexpr Vec2 operator- (Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
        friend constexpr Vec2 operator* (double s, Vec2 v) noexcept { return {s * v.x, s * v.y}; }
        friend constexpr bool operator== (Vec2, Vec2) = default;
    };

    [[nodiscard]] inline double dot (Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
    [[nodiscard]] inline double norm (Vec2 v) noexcept { return std::hypot (v.x, v.y); }
    [[nodiscard]] inline bool is_finite (Vec2 v) noexcept { return std::isfinite (v.x) && std::isfinite (v.y); }

    /// Tilted frame: origin in global coordinates and tilt of its x axis.
    struct FrameTilt
    {
        Vec2 origin{};
        double theta{0.0};

        FrameTilt () = default;
        FrameTilt (Vec2 origin_, double theta_) noexcept : origin (origin_), theta (wrap_angle (theta_)) {}

        friend bool operator== (const FrameTilt &, const FrameTilt &) = default;
    };

    /// Global -> local: R_theta * (p - origin), R_theta = [[c, s], [-s, c]].
    [[nodiscard]] Vec2 to_frame (Vec2 p, const FrameTilt &frame) noexcept;

    /// Local -> global: R_theta^T * p_local + origin.
    [[nodiscard]] Vec2 from_frame (Vec2 p_local, const FrameTilt &frame) noexcept;

    /**
     * @brief Tilted ellipse x_E^2/a^2 + y_E^2/b^2 = 1 in the frame (center, theta).
     *
     * The constructor rejects a < b, b <= 0 and non-finite input; the major
     * axis always lies along theta.  A default-constructed EllipseSpec is the unit
     * circle at the origin.
     */
    class EllipseSpec
    {
    public:
        EllipseSpec () = default;
        EllipseSpec (Vec2 center, double a, double b, double theta);

        [[nodiscard]] Vec2 center () const noexcept { return frame_.origin; }
        [[nodiscard]] double a () const noexcept { return a_; }
        [[nodiscard]] double b () const noexcept { return b_; }
        [[nodiscard]] double theta () const noexcept { return frame_.theta; }
        [[nodiscard]] const FrameTilt &frame () const noexcept { return frame_; }

        friend bool operator== (const EllipseSpec &, const EllipseSpec &) = default;

    private:
        FrameTilt frame_{};
        double a_{1.0};
        double b_{1.0};
    };

    /// x^2/a^2 + y^2/b^2 for a point already in the ellipse frame.
    [[nodiscard]] inline double ellipse_level_local (Vec2 p_local, double a, double b) noexcept
    {
        return (p_local.x * p_local.x) / (a * a) + (p_local.y * p_local.y) / (b * b);
    }

    /// Level-set value gamma of a global point: 0 at the center, 1 on the ellipse.
    [[nodiscard]] double ellipse_level (Vec2 p, const EllipseSpec &ellipse) noexcept;

    struct SemiAxes
    {
        double a{0.0};
        double b{0.0};
        friend bool operator== (SemiAxes, SemiAxes) = default;
    };

    /**
     * @brief Semi-axes of the minimum-area ellipse through the four corners of
     *        an l1 x l2 rectangle: a = l1/sqrt(2), b = l2/sqrt(2).
     *
     * Requires l1 >= l2 >= 0 and l1 > 0; throws std::invalid_argument otherwise.
     * l2 = 0 is accepted (collinear convoy) even though b = 0 cannot become an
     * EllipseSpec on its own.
     */
    [[nodiscard]] SemiAxes min_area_circumscribing_axes (double l1, double l2);

    /// Smallest radius of curvature of an ellipse with a >= b > 0, reached at the major-axis vertices.
    [[nodiscard]] inline double min_radius_of_curvature (double a, double b) noexcept { return b * b / a; }

    /// Radius of curvature at parameter s of (a cos s, b sin s).
    [[nodiscard]] double radius_of_curvature (double a, double b, double s) noexcept;

} // namespace encircle
