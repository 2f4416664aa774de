#include "encircle/io/plots.hpp"

#include "numbers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace encircle::io
{
    namespace
    {
        constexpr std::array<const char *, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};
        constexpr std::size_t kMaxPoints = 4000;

        struct Series
        {
            std::string label;
            std::vector<Vec2> points;
            std::string color;
            bool dashed{false};
            bool closed{false};
        };

        struct Marker
        {
            Vec2 at;
            std::string color;
        };

        struct Panel
        {
            Panel () = default;
            Panel (std::string y, std::string x, std::vector<Series> s)
                : ylabel (std::move (y)), xlabel (std::move (x)), series (std::move (s))
            {
            }

            std::string ylabel;
            std::string xlabel;
            std::vector<Series> series;
            std::vector<Marker> markers;
            bool equal_aspect{false};
        };

        std::string fmt (double v)
        {
            std::ostringstream os;
            os.precision (6);
            os << v;
            return os.str ();
        }

        std::string escape (const std::string &s)
        {
            std::string out;
            for (char c : s)
            {
                switch (c)
                {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                default: out += c;
                }
            }
            return out;
        }

        /// Keeps the first, min, max and last point of each bucket so peaks survive.
        std::vector<Vec2> decimate (const std::vector<Vec2> &pts)
        {
            if (pts.size () <= kMaxPoints)
                return pts;
            const std::size_t buckets = kMaxPoints / 4;
            const std::size_t per = (pts.size () + buckets - 1) / buckets;
            std::vector<Vec2> out;
            for (std::size_t start = 0; start < pts.size (); start += per)
            {
                const std::size_t end = std::min (pts.size (), start + per);
                std::size_t lo = start, hi = start;
                for (std::size_t i = start; i < end; ++i)
                {
                    if (pts[i].y < pts[lo].y)
                        lo = i;
                    if (pts[i].y > pts[hi].y)
                        hi = i;
                }
                out.push_back (pts[start]);
                out.push_back (pts[std::min (lo, hi)]);
                out.push_back (pts[std::max (lo, hi)]);
                out.push_back (pts[end - 1]);
            }
            return out;
        }

        double nice_step (double span)
        {
            if (!(span > 0.0))
                return 1.0;
            const double raw = span / 5.0;
            const double mag = std::pow (10.0, std::floor (std::log10 (raw)));
            const double f = raw / mag;
            return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
        }

        struct Range
        {
            double lo{std::numeric_limits<double>::infinity ()};
            double hi{-std::numeric_limits<double>::infinity ()};

            void add (double v)
            {
                if (std::isfinite (v))
                {
                    lo = std::min (lo, v);
                    hi = std::max (hi, v);
                }
            }
            void pad ()
            {
                if (!std::isfinite (lo))
                {
                    lo = 0.0;
                    hi = 1.0;
                }
                if (hi - lo < 1e-12)
                {
                    lo -= 0.5;
                    hi += 0.5;
                }
                const double m = 0.04 * (hi - lo);
                lo -= m;
                hi += m;
            }
        };

        void render_panel (std::ostringstream &svg, const Panel &panel, double x0, double y0, double w, double h)
        {
            Range xr, yr;
            for (const auto &s : panel.series)
                for (const Vec2 &p : s.points)
                {
                    xr.add (p.x);
                    yr.add (p.y);
                }
            for (const auto &m : panel.markers)
            {
                xr.add (m.at.x);
                yr.add (m.at.y);
            }
            xr.pad ();
            yr.pad ();
            if (panel.equal_aspect)
            {
                const double scale = std::max ((xr.hi - xr.lo) / w, (yr.hi - yr.lo) / h);
                const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
                xr = {cx - 0.5 * scale * w, cx + 0.5 * scale * w};
                yr = {cy - 0.5 * scale * h, cy + 0.5 * scale * h};
            }
            const auto px = [&] (double x) { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; };
            const auto py = [&] (double y) { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; };

            svg << "<rect x=\"" << fmt (x0) << "\" y=\"" << fmt (y0) << "\" width=\"" << fmt (w) << "\" height=\""
                << fmt (h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

            const double xs = nice_step (xr.hi - xr.lo);
            for (double v = std::ceil (xr.lo / xs) * xs; v <= xr.hi; v += xs)
            {
                svg << "<line x1=\"" << fmt (px (v)) << "\" y1=\"" << fmt (y0) << "\" x2=\"" << fmt (px (v))
                    << "\" y2=\"" << fmt (y0 + h) << "\" stroke=\"#eee\"/>\n";
                svg << "<text x=\"" << fmt (px (v)) << "\" y=\"" << fmt (y0 + h + 14)
                    << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt (std::abs (v) < 1e-12 * xs ? 0.0 : v)
                    << "</text>\n";
            }
            const double ys = nice_step (yr.hi - yr.lo);
            for (double v = std::ceil (yr.lo / ys) * ys; v <= yr.hi; v += ys)
            {
                svg << "<line x1=\"" << fmt (x0) << "\" y1=\"" << fmt (py (v)) << "\" x2=\"" << fmt (x0 + w)
                    << "\" y2=\"" << fmt (py (v)) << "\" stroke=\"#eee\"/>\n";
                svg << "<text x=\"" << fmt (x0 - 4) << "\" y=\"" << fmt (py (v) + 3)
                    << "\" font-size=\"10\" text-anchor=\"end\">" << fmt (std::abs (v) < 1e-12 * ys ? 0.0 : v)
                    << "</text>\n";
            }
            svg << "<text x=\"" << fmt (x0 + w / 2) << "\" y=\"" << fmt (y0 + h + 30)
                << "\" font-size=\"12\" text-anchor=\"middle\">" << escape (panel.xlabel) << "</text>\n";
            svg << "<text x=\"" << fmt (x0 - 48) << "\" y=\"" << fmt (y0 + h / 2)
                << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " << fmt (x0 - 48) << " "
                << fmt (y0 + h / 2) << ")\">" << escape (panel.ylabel) << "</text>\n";

            svg << "<g clip-path=\"url(#clip" << fmt (y0) << ")\">\n";
            for (const auto &s : panel.series)
            {
                if (s.points.empty ())
                    continue;
                svg << "<" << (s.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
                for (const Vec2 &p : decimate (s.points))
                    if (is_finite (p))
                        svg << fmt (px (p.x)) << "," << fmt (py (p.y)) << " ";
                svg << "\"/>\n";
            }
            for (const auto &m : panel.markers)
                svg << "<circle cx=\"" << fmt (px (m.at.x)) << "\" cy=\"" << fmt (py (m.at.y))
                    << "\" r=\"3\" fill=\"" << m.color << "\"/>\n";
            svg << "</g>\n";

            double ly = y0 + 14;
            const auto labelled = std::count_if (panel.series.begin (), panel.series.end (),
                                                 [] (const Series &s) { return !s.label.empty (); });
            if (labelled > 0)
                svg << "<rect x=\"" << fmt (x0 + w - 156) << "\" y=\"" << fmt (y0 + 3) << "\" width=\"152\" height=\""
                    << fmt (14.0 * labelled + 4) << "\" fill=\"white\" fill-opacity=\"0.85\"/>\n";
            for (const auto &s : panel.series)
            {
                if (s.label.empty ())
                    continue;
                svg << "<line x1=\"" << fmt (x0 + w - 150) << "\" y1=\"" << fmt (ly - 4) << "\" x2=\""
                    << fmt (x0 + w - 130) << "\" y2=\"" << fmt (ly - 4) << "\" stroke=\"" << s.color << "\""
                    << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
                svg << "<text x=\"" << fmt (x0 + w - 125) << "\" y=\"" << fmt (ly) << "\" font-size=\"11\">"
                    << escape (s.label) << "</text>\n";
                ly += 14;
            }
        }

        void write_figure (const std::filesystem::path &path, const std::string &title,
                           const std::vector<Panel> &panels, const std::optional<std::string> &warning,
                           double panel_height = 220.0)
        {
            const double width = 860.0, left = 80.0, right = 20.0, top = warning ? 56.0 : 40.0, gap = 50.0;
            const double height = top + panels.size () * (panel_height + gap) + 10.0;
            std::ostringstream svg;
            svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt (width) << "\" height=\""
                << fmt (height) << "\" viewBox=\"0 0 " << fmt (width) << " " << fmt (height)
                << "\" font-family=\"sans-serif\">\n";
            svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<defs>\n";
            for (std::size_t i = 0; i < panels.size (); ++i)
            {
                const double y0 = top + i * (panel_height + gap);
                svg << "<clipPath id=\"clip" << fmt (y0) << "\"><rect x=\"" << fmt (left) << "\" y=\"" << fmt (y0)
                    << "\" width=\"" << fmt (width - left - right) << "\" height=\"" << fmt (panel_height)
                    << "\"/></clipPath>\n";
            }
            svg << "</defs>\n";
            svg << "<text x=\"" << fmt (width / 2) << "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">"
                << escape (title) << "</text>\n";
            if (warning)
                svg << "<text x=\"" << fmt (width / 2) << "\" y=\"40\" font-size=\"12\" fill=\"#c00\" "
                    << "text-anchor=\"middle\">warning: " << escape (*warning) << "</text>\n";
            for (std::size_t i = 0; i < panels.size (); ++i)
                render_panel (svg, panels[i], left, top + i * (panel_height + gap), width - left - right,
                              panel_height);
            svg << "</svg>\n";

            std::ofstream out (path);
            if (!out)
                throw std::runtime_error ("cannot write " + path.string ());
            out << svg.str ();
        }

        std::vector<Vec2> ellipse_outline (const EllipseSpec &e)
        {
            std::vector<Vec2> pts;
            constexpr int kSegments = 180;
            for (int i = 0; i < kSegments; ++i)
            {
                const double s = 2.0 * kPi * i / kSegments;
                pts.push_back (from_frame ({e.a () * std::cos (s), e.b () * std::sin (s)}, e.frame ()));
            }
            return pts;
        }

        Series time_series (const SimTrace &trace, double TickRecord::*field, std::string label, std::string color)
        {
            Series s{std::move (label), {}, std::move (color)};
            s.points.reserve (trace.ticks.size ());
            for (const auto &r : trace.ticks)
                s.points.push_back ({r.t, r.*field});
            return s;
        }

        Series constant (const SimTrace &trace, double value, std::string label, std::string color)
        {
            const double t0 = trace.ticks.front ().t, t1 = trace.ticks.back ().t;
            return {std::move (label), {{t0, value}, {t1, value}}, std::move (color), true};
        }
    } // namespace

    std::vector<std::filesystem::path> render_plots (const SimTrace &trace, const std::filesystem::path &out_dir,
                                                     const PlotOptions &options)
    {
        if (trace.ticks.empty ())
            throw std::invalid_argument ("render_plots: empty trace");
        std::filesystem::create_directories (out_dir);

        const SimConfig &cfg = trace.config;
        const TransientWindow window = transient_window (trace.ticks);
        std::optional<std::string> warning;
        if (!window.settled ())
            warning = "agent never entered |gamma - 1| < 0.05; no post-transient window";
        if (trace.aborted ())
            warning = "simulation aborted: " + *trace.abort_reason;

        const std::string name = cfg.name.empty () ? std::string ("trace") : cfg.name;
        const double t_end = trace.ticks.back ().t;
        std::vector<std::filesystem::path> written;

        // Trajectory with ellipse snapshots.
        {
            std::vector<double> times = options.snapshot_times;
            if (times.empty ())
                for (int i = 0; i <= 4; ++i)
                    times.push_back (t_end * i / 4.0);

            Panel panel;
            panel.xlabel = "x [m]";
            panel.ylabel = "y [m]";
            panel.equal_aspect = true;
            Series agent{"agent", {}, kPalette[0]};
            for (const auto &r : trace.ticks)
                agent.points.push_back ({r.x_A, r.y_A});
            panel.series.push_back (std::move (agent));

            const auto *model = std::get_if<TargetModel> (&cfg.orbit);
            if (model)
            {
                const std::size_t n = target_count (*model);
                std::vector<Series> paths (n);
                const std::size_t stride = std::max<std::size_t> (1, trace.ticks.size () / 2000);
                for (std::size_t k = 0; k < trace.ticks.size (); k += stride)
                {
                    const auto snap = advance_targets (*model, trace.ticks[k].t);
                    for (std::size_t i = 0; i < n; ++i)
                        paths[i].points.push_back (snap.positions[i]);
                }
                for (std::size_t i = 0; i < n; ++i)
                {
                    paths[i].color = "#999";
                    paths[i].label = i == 0 ? "target paths" : "";
                    panel.series.push_back (std::move (paths[i]));
                }
            }

            bool first = true;
            for (double ts : times)
            {
                const auto it = std::min_element (trace.ticks.begin (), trace.ticks.end (),
                                                  [&] (const TickRecord &l, const TickRecord &r) {
                                                      return std::abs (l.t - ts) < std::abs (r.t - ts);
                                                  });
                try
                {
                    const EllipseSpec e ({it->x_o, it->y_o}, it->a, it->b, it->theta_E);
                    panel.series.push_back ({first ? "ellipse snapshots" : "", ellipse_outline (e), kPalette[1],
                                             true, true});
                }
                catch (const std::invalid_argument &)
                {
                    continue;
                }
                first = false;
                panel.markers.push_back ({{it->x_A, it->y_A}, kPalette[0]});
                if (model)
                    for (const Vec2 &p : advance_targets (*model, it->t).positions)
                        panel.markers.push_back ({p, kPalette[1]});
            }
            const auto path = out_dir / "trajectory.svg";
            write_figure (path, name + ": trajectory", {panel}, warning, 620.0);
            written.push_back (path);
        }

        const double wmax = cfg.limits.omega_max;
        // Lyapunov function and angular velocity.
        {
            Panel v{"V", "t [s]", {time_series (trace, &TickRecord::V, "V", kPalette[0]),
                                   time_series (trace, &TickRecord::V_tilde, "V_tilde", kPalette[2])}};
            v.series.back ().dashed = true;
            Panel w{"omega [rad/s]", "t [s]",
                    {time_series (trace, &TickRecord::omega, "omega", kPalette[0]),
                     constant (trace, wmax, "+omega_max", kPalette[1]),
                     constant (trace, -wmax, "-omega_max", kPalette[1])}};
            const auto path = out_dir / "lyapunov_omega.svg";
            write_figure (path, name + ": Lyapunov function and angular velocity", {v, w}, warning);
            written.push_back (path);
        }

        // gamma, omega and V_A.
        {
            Panel g{"gamma", "t [s]",
                    {time_series (trace, &TickRecord::gamma, "gamma", kPalette[0]),
                     constant (trace, 1.0, "gamma = 1", kPalette[1])}};
            Panel w{"omega [rad/s]", "t [s]",
                    {time_series (trace, &TickRecord::omega, "omega", kPalette[0]),
                     time_series (trace, &TickRecord::omega_raw, "omega before clamp", kPalette[3])}};
            w.series.back ().dashed = true;
            Panel speed{"V_A [m/s]", "t [s]",
                        {constant (trace, cfg.agent.speed, "V_A", kPalette[0]),
                         constant (trace, cfg.limits.v_a_min, "V_A_min", kPalette[1]),
                         constant (trace, cfg.limits.v_a_max, "V_A_max", kPalette[1])}};
            speed.series.front ().dashed = false;
            const auto path = out_dir / "gamma_omega_speed.svg";
            write_figure (path, name + ": gamma, omega and V_A", {g, w, speed}, warning, 180.0);
            written.push_back (path);
        }

        if (cfg.has_targets ())
        {
            const std::size_t n = cfg.target_count ();
            std::vector<Panel> panels;
            for (std::size_t i = 0; i < n; ++i)
            {
                Series s{"gamma_T" + std::to_string (i + 1), {}, kPalette[i % kPalette.size ()]};
                for (const auto &r : trace.ticks)
                    if (i < r.gamma_T.size ())
                        s.points.push_back ({r.t, r.gamma_T[i]});
                panels.push_back (Panel{"gamma_T" + std::to_string (i + 1), "t [s]",
                                        {std::move (s), constant (trace, 1.0, "", kPalette[1])}});
            }
            const auto path = out_dir / "gamma_targets.svg";
            write_figure (path, name + ": target level sets", panels, warning, 120.0);
            written.push_back (path);
        }
        return written;
    }

} // namespace encircle::io
