#include "encircle/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace encircle
{
    namespace
    {
        void require (bool ok, const char *invariant, const std::string &detail)
        {
            if (!ok)
                throw ConfigError (invariant, detail);
        }

        std::string num (double v)
        {
            std::ostringstream os;
            os << v;
            return os.str ();
        }

        bool finite_record (const TickRecord &r)
        {
            for (double v : {r.x_A, r.y_A, r.psi_A, r.x_o, r.y_o, r.a, r.b, r.theta_E, r.gamma, r.psi_D, r.omega})
                if (!std::isfinite (v))
                    return false;
            return true;
        }
    } // namespace

    std::size_t SimConfig::target_count () const noexcept
    {
        const auto *model = std::get_if<TargetModel> (&orbit);
        return model ? encircle::target_count (*model) : 0;
    }

    long long SimConfig::last_tick () const noexcept { return std::llround (duration / dt); }

    void validate (const SimConfig &cfg)
    {
        const AgentLimits &l = cfg.limits;
        require (std::isfinite (cfg.dt) && cfg.dt > 0.0, "dt > 0", "dt = " + num (cfg.dt));
        require (std::isfinite (cfg.duration) && cfg.duration > 0.0, "duration > 0",
                 "duration = " + num (cfg.duration));
        require (cfg.regression_interval >= 1, "regression_interval >= 1",
                 "regression_interval = " + std::to_string (cfg.regression_interval));
        require (l.omega_max > 0.0 && std::isfinite (l.omega_max), "omega_max > 0",
                 "omega_max = " + num (l.omega_max));
        require (l.v_a_min > 0.0, "V_A_min > 0", "V_A_min = " + num (l.v_a_min));
        require (l.v_a_min <= l.v_a_max && std::isfinite (l.v_a_max), "V_A_min <= V_A_max",
                 num (l.v_a_min) + " > " + num (l.v_a_max));
        require (l.v_t_max >= 0.0, "V_T_max >= 0", "V_T_max = " + num (l.v_t_max));
        require (l.v_t_max < l.v_a_min, "V_T_max < V_A_min",
                 "V_T_max = " + num (l.v_t_max) + ", V_A_min = " + num (l.v_a_min));
        require (l.standoff >= 0.0 && std::isfinite (l.standoff), "d_s >= 0", "d_s = " + num (l.standoff));
        require (cfg.gains.k_gamma > 0.0 && std::isfinite (cfg.gains.k_gamma), "k_gamma > 0",
                 "k_gamma = " + num (cfg.gains.k_gamma));
        require (cfg.gains.k_psi > 0.0 && std::isfinite (cfg.gains.k_psi), "k_psi > 0",
                 "k_psi = " + num (cfg.gains.k_psi));

        const double v = cfg.agent.speed;
        require (v >= l.v_a_min && v <= l.v_a_max, "V_A_min <= V_A <= V_A_max", "V_A = " + num (v));
        require (is_finite (cfg.agent.pose.position) && std::isfinite (cfg.agent.pose.psi), "finite agent pose",
                 "non-finite initial pose");
        require (std::isfinite (cfg.wind.speed) && cfg.wind.speed >= 0.0 && std::isfinite (cfg.wind.heading),
                 "V_w >= 0", "wind speed = " + num (cfg.wind.speed));

        if (const auto *model = std::get_if<TargetModel> (&cfg.orbit))
        {
            require (target_count (*model) >= 1, "N >= 1", "convoy has no targets");
            const double vmax = max_target_speed (*model);
            // The Lissajous bound sqrt(A^2 + 4B^2) phi' is evaluated in floating point.
            require (vmax <= l.v_t_max * (1.0 + 1e-12), "target speed <= V_T_max",
                     "max target speed " + num (vmax) + " exceeds V_T_max = " + num (l.v_t_max));
            if (const auto *wp = std::get_if<WaypointConvoy> (model))
                require (!wp->polyline.empty (), "non-empty polyline", "waypoint convoy has no vertices");
            const ConvoySnapshot snap = advance_targets (*model, 0.0);
            for (const Vec2 &p : snap.positions)
                require (is_finite (p), "finite target positions", "non-finite target position at t = 0");
        }
    }

    SemiAxes select_axes (const RegressionFrame &frame, const AgentLimits &limits)
    {
        const double l1 = frame.l1 + 2.0 * limits.standoff;
        const double l2 = frame.l2 + 2.0 * limits.standoff;
        const double floor = limits.turn_radius_floor ();
        double a = std::max (l1 / std::numbers::sqrt2, floor);
        const double b = std::max (l2 / std::numbers::sqrt2, std::sqrt (a * floor));
        a = std::max (a, b);
        return {a, b};
    }

    MonitorRecord compute_monitors (Vec2 agent, const EllipseSpec &current, const EllipseSpec &reference,
                                    double psi_D, std::span<const Vec2> targets)
    {
        MonitorRecord m;
        const Vec2 local = to_frame (agent, current.frame ());
        const double a2 = current.a () * current.a ();
        const double b2 = current.b () * current.b ();

        m.zeta = ellipse_level_local (local, current.a (), current.b ()) - 1.0;
        m.V_tilde = m.zeta * m.zeta;
        const double ref = ellipse_level (agent, reference) - 1.0;
        m.V = ref * ref;

        const Vec2 grad{2.0 * local.x / a2, 2.0 * local.y / b2};
        m.Gamma = std::abs (dot (grad, {std::cos (psi_D), std::sin (psi_D)}));

        m.gamma_T.reserve (targets.size ());
        for (const Vec2 &p : targets)
            m.gamma_T.push_back (ellipse_level (p, current));
        return m;
    }

    SimTrace run_simulation (const SimConfig &cfg)
    {
        validate (cfg);

        SimTrace trace;
        trace.config = cfg;
        const long long last = cfg.last_tick ();
        trace.ticks.reserve (static_cast<std::size_t> (last + 1));

        const auto *model = std::get_if<TargetModel> (&cfg.orbit);
        AgentState agent = cfg.agent;
        RegressionFrame frame;
        std::optional<EllipseSpec> previous;

        for (long long k = 0; k <= last; ++k)
        {
            const double t = static_cast<double> (k) * cfg.dt;

            ConvoySnapshot snap;
            EllipseSpec ellipse;
            if (model)
            {
                snap = advance_targets (*model, t);
                if (k == 0)
                    frame = init_regression (snap);
                else if (k % cfg.regression_interval == 0)
                    frame = update_regression (frame.theta_E, snap);
                const SemiAxes axes = select_axes (frame, cfg.limits);
                ellipse = EllipseSpec (frame.center, axes.a, axes.b, frame.theta_E);
            }
            else
            {
                ellipse = std::get<EllipseSpec> (cfg.orbit);
            }
            const EllipseSpec &reference = previous ? *previous : ellipse;

            const Vec2 local = to_frame (agent.pose.position, ellipse.frame ());
            const double psi_E = wrap_angle (agent.pose.psi - ellipse.theta ());
            HeadingCommand cmd = desired_heading (local, ellipse.a (), ellipse.b (), cfg.direction, cfg.gains);
            const double omega_raw = heading_rate_demand (cmd.psi_D, psi_E, cfg.gains.k_psi);
            cmd.omega = std::clamp (omega_raw, -cfg.limits.omega_max, cfg.limits.omega_max);

            MonitorRecord mon = compute_monitors (agent.pose.position, ellipse, reference, cmd.psi_D, snap.positions);

            TickRecord rec;
            rec.t = t;
            rec.x_A = agent.pose.position.x;
            rec.y_A = agent.pose.position.y;
            rec.psi_A = agent.pose.psi;
            rec.x_o = ellipse.center ().x;
            rec.y_o = ellipse.center ().y;
            rec.a = ellipse.a ();
            rec.b = ellipse.b ();
            rec.theta_E = ellipse.theta ();
            rec.gamma = cmd.gamma;
            rec.psi_T = cmd.psi_T;
            rec.psi_O = cmd.psi_O;
            rec.psi_D = cmd.psi_D;
            rec.omega_raw = omega_raw;
            rec.omega = cmd.omega;
            rec.V = mon.V;
            rec.V_tilde = mon.V_tilde;
            rec.Gamma = mon.Gamma;
            rec.gamma_T = std::move (mon.gamma_T);
            const bool ok = finite_record (rec);
            trace.ticks.push_back (std::move (rec));
            if (!ok)
            {
                std::ostringstream os;
                os << "non-finite state at tick " << k << " (t = " << t << ")";
                trace.abort_reason = os.str ();
                break;
            }

            if (k == last)
                break;
            agent = step_unicycle (agent, cmd.omega, cfg.wind, cfg.dt);
            previous = ellipse;
        }
        return trace;
    }

    TransientWindow transient_window (std::span<const TickRecord> ticks, double align_time, double band)
    {
        TransientWindow w;
        w.end = align_time;
        for (const TickRecord &r : ticks)
        {
            if (std::abs (r.gamma - 1.0) < band)
            {
                w.settle_time = r.t;
                w.end = std::max (align_time, r.t);
                break;
            }
        }
        return w;
    }

} // namespace encircle
