#include "encircle/io/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace encircle::io
{
    int count_omega_peaks (std::span<const TickRecord> ticks, double threshold)
    {
        int peaks = 0;
        for (std::size_t i = 1; i + 1 < ticks.size (); ++i)
        {
            const double prev = std::abs (ticks[i - 1].omega);
            const double cur = std::abs (ticks[i].omega);
            const double next = std::abs (ticks[i + 1].omega);
            if (cur > threshold && cur > prev && cur >= next)
                ++peaks;
        }
        return peaks;
    }

    std::span<const TickRecord> post_transient (std::span<const TickRecord> ticks, const TransientWindow &window)
    {
        const auto it = std::find_if (ticks.begin (), ticks.end (),
                                      [&] (const TickRecord &r) { return r.t > window.end; });
        return ticks.subspan (static_cast<std::size_t> (it - ticks.begin ()));
    }

    Summary summarize (const SimTrace &trace)
    {
        Summary s;
        s.scenario = trace.config.name;
        s.ticks = trace.ticks.size ();
        s.aborted = trace.aborted ();
        if (s.aborted)
            s.flags.push_back ("aborted");

        const TransientWindow window = transient_window (trace.ticks);
        s.settle_time = window.settle_time;
        s.transient_end = window.end;
        if (!window.settled ())
            s.flags.push_back ("did_not_settle");

        const auto post = post_transient (trace.ticks, window);
        if (post.empty ())
        {
            s.flags.push_back ("empty_post_transient_window");
        }
        else
        {
            double sum = 0.0;
            double max_err = 0.0;
            double max_raw = 0.0;
            double max_cmd = 0.0;
            for (const TickRecord &r : post)
            {
                const double err = std::abs (r.gamma - 1.0);
                sum += err;
                max_err = std::max (max_err, err);
                max_raw = std::max (max_raw, std::abs (r.omega_raw));
                max_cmd = std::max (max_cmd, std::abs (r.omega));
            }
            s.mean_abs_gamma_error = sum / static_cast<double> (post.size ());
            s.max_abs_gamma_error = max_err;
            s.max_abs_omega_raw = max_raw;
            s.max_abs_omega = max_cmd;
            s.omega_peaks = count_omega_peaks (post);
        }

        if (const auto *model = std::get_if<TargetModel> (&trace.config.orbit))
        {
            double max_g = -std::numeric_limits<double>::infinity ();
            double min_d = std::numeric_limits<double>::infinity ();
            for (const TickRecord &r : trace.ticks)
            {
                for (double g : r.gamma_T)
                    max_g = std::max (max_g, g);
                const ConvoySnapshot snap = advance_targets (*model, r.t);
                for (const Vec2 &p : snap.positions)
                    min_d = std::min (min_d, norm (Vec2{r.x_A, r.y_A} - p));
            }
            if (!trace.ticks.empty ())
            {
                s.max_gamma_T = max_g;
                s.min_agent_target_distance = min_d;
            }
        }
        return s;
    }

    nlohmann::ordered_json to_json (const Summary &s)
    {
        const auto opt = [] (const std::optional<double> &v) {
            return v ? nlohmann::ordered_json (*v) : nlohmann::ordered_json (nullptr);
        };
        nlohmann::ordered_json j;
        j["scenario"] = s.scenario;
        j["ticks"] = s.ticks;
        j["aborted"] = s.aborted;
        j["settled"] = s.settle_time.has_value ();
        j["settle_time"] = opt (s.settle_time);
        j["transient_end"] = s.transient_end;
        j["max_abs_omega_post_transient"] = opt (s.max_abs_omega);
        j["max_abs_omega_raw_post_transient"] = opt (s.max_abs_omega_raw);
        j["mean_abs_gamma_error_post_transient"] = opt (s.mean_abs_gamma_error);
        j["max_abs_gamma_error_post_transient"] = opt (s.max_abs_gamma_error);
        j["max_gamma_T"] = opt (s.max_gamma_T);
        j["min_agent_target_distance"] = opt (s.min_agent_target_distance);
        j["omega_peaks_post_transient"] = s.omega_peaks;
        j["flags"] = s.flags;
        return j;
    }

} // namespace encircle::io
