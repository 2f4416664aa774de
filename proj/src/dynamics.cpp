#include "encircle/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace encircle
{
    namespace
    {
        struct Rates
        {
            double dx;
            double dy;
        };

        Rates planar_rates (double speed, double psi, Vec2 wind) noexcept
        {
            return {speed * std::cos (psi) + wind.x, speed * std::sin (psi) + wind.y};
        }

        template <class... Fs> struct Overloaded : Fs...
        {
            using Fs::operator()...;
        };
        template <class... Fs> Overloaded (Fs...) -> Overloaded<Fs...>;
    } // namespace

    AgentState step_unicycle (const AgentState &state, double omega, const Wind &wind, double dt)
    {
        if (!(dt > 0.0))
            throw std::invalid_argument ("step_unicycle: dt must be positive");

        const Vec2 w = wind.velocity ();
        const double v = state.speed;
        const double psi0 = state.pose.psi;

        // psi' does not depend on the state, so the heading stages are exact.
        const Rates k1 = planar_rates (v, psi0, w);
        const Rates k2 = planar_rates (v, psi0 + 0.5 * dt * omega, w);
        const Rates k3 = k2;
        const Rates k4 = planar_rates (v, psi0 + dt * omega, w);

        AgentState next = state;
        next.pose.position.x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        next.pose.position.y += dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
        next.pose.psi = wrap_angle (psi0 + dt * omega);
        return next;
    }

    Vec2 lissajous_position (double phi, double A, double B) noexcept
    {
        return {A * std::cos (phi), B * std::sin (2.0 * phi)};
    }

    Vec2 lissajous_velocity (double phi, double A, double B, double phi_rate) noexcept
    {
        return {-A * std::sin (phi) * phi_rate, 2.0 * B * std::cos (2.0 * phi) * phi_rate};
    }

    double LissajousConvoy::speed_bound () const noexcept
    {
        return std::sqrt (A * A + 4.0 * B * B) * std::abs (phi_rate);
    }

    std::size_t target_count (const TargetModel &model) noexcept
    {
        return std::visit (Overloaded{
                               [] (const LissajousConvoy &m) { return m.phi0.size (); },
                               [] (const LinearConvoy &m) { return m.members.size (); },
                               [] (const WaypointConvoy &m) { return m.members.size (); },
                           },
                           model);
    }

    double max_target_speed (const TargetModel &model) noexcept
    {
        return std::visit (Overloaded{
                               [] (const LissajousConvoy &m) { return m.speed_bound (); },
                               [] (const LinearConvoy &m) {
                                   double v = 0.0;
                                   for (const auto &t : m.members)
                                       v = std::max (v, std::abs (t.speed));
                                   return v;
                               },
                               [] (const WaypointConvoy &m) {
                                   double v = 0.0;
                                   for (const auto &t : m.members)
                                       v = std::max (v, std::abs (t.speed));
                                   return v;
                               },
                           },
                           model);
    }

    Vec2 point_along (const std::vector<Vec2> &polyline, double s)
    {
        if (polyline.empty ())
            throw std::invalid_argument ("point_along: empty polyline");
        if (s <= 0.0 || polyline.size () == 1)
            return polyline.front ();
        for (std::size_t i = 0; i + 1 < polyline.size (); ++i)
        {
            const Vec2 seg = polyline[i + 1] - polyline[i];
            const double len = norm (seg);
            if (s <= len)
                return len > 0.0 ? polyline[i] + (s / len) * seg : polyline[i];
            s -= len;
        }
        return polyline.back ();
    }

    ConvoySnapshot advance_targets (const TargetModel &model, double t)
    {
        ConvoySnapshot snap;
        snap.positions.reserve (target_count (model));
        std::visit (Overloaded{
                        [&] (const LissajousConvoy &m) {
                            for (double phi0 : m.phi0)
                                snap.positions.push_back (lissajous_position (phi0 + m.phi_rate * t, m.A, m.B));
                        },
                        [&] (const LinearConvoy &m) {
                            for (const auto &tgt : m.members)
                                snap.positions.push_back (
                                    tgt.origin +
                                    (tgt.speed * t) * Vec2{std::cos (tgt.heading), std::sin (tgt.heading)});
                        },
                        [&] (const WaypointConvoy &m) {
                            for (const auto &tgt : m.members)
                                snap.positions.push_back (point_along (m.polyline, tgt.offset + tgt.speed * t));
                        },
                    },
                    model);
        return snap;
    }

} // namespace encircle
