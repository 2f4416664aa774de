#include "encircle/io/scenario.hpp"

#include "numbers.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace encircle::io
{
    ScenarioError::ScenarioError (const std::string &source, std::string key, int line, std::string expected)
        : std::runtime_error (source + ":" + std::to_string (line) + ": key '" + key + "': expected " + expected),
          key_ (std::move (key)), line_ (line), expected_ (std::move (expected))
    {
    }

    namespace
    {
        using detail::format_double;
        using detail::parse_double;

        constexpr double kDefaultDuration = 600.0;

        int line_of (const YAML::Node &node) { return node.Mark ().line + 1; }

        std::string join (const std::string &path, const std::string &key)
        {
            return path.empty () ? key : path + "." + key;
        }

        class Reader
        {
        public:
            explicit Reader (std::string source) : source_ (std::move (source)) {}

            [[noreturn]] void fail (const std::string &key, int line, const std::string &expected) const
            {
                throw ScenarioError (source_, key, line, expected);
            }

            void require_map (const YAML::Node &node, const std::string &path) const
            {
                if (!node.IsMap ())
                    fail (path.empty () ? "<document>" : path, line_of (node), "a mapping");
            }

            void only_keys (const YAML::Node &map, const std::string &path,
                            std::initializer_list<std::string_view> allowed) const
            {
                for (auto it = map.begin (); it != map.end (); ++it)
                {
                    const std::string key = it->first.as<std::string> ();
                    bool known = false;
                    for (std::string_view a : allowed)
                        known = known || key == a;
                    if (!known)
                    {
                        std::string list;
                        for (std::string_view a : allowed)
                            list += (list.empty () ? "" : ", ") + std::string (a);
                        fail (join (path, key), line_of (it->first), "one of the known keys {" + list + "}");
                    }
                }
            }

            YAML::Node child (const YAML::Node &map, const std::string &path, const std::string &key,
                              const std::string &expected) const
            {
                const YAML::Node n = map[key];
                if (!n)
                    fail (join (path, key), line_of (map), expected + " (missing)");
                return n;
            }

            double number (const YAML::Node &node, const std::string &key) const
            {
                if (!node.IsScalar ())
                    fail (key, line_of (node), "a number");
                const auto v = parse_double (node.Scalar ());
                if (!v)
                    fail (key, line_of (node), "a number, got '" + node.Scalar () + "'");
                return *v;
            }

            double number (const YAML::Node &map, const std::string &path, const std::string &key) const
            {
                return number (child (map, path, key, "a number"), join (path, key));
            }

            std::string text (const YAML::Node &node, const std::string &key) const
            {
                if (!node.IsScalar ())
                    fail (key, line_of (node), "a string");
                return node.Scalar ();
            }

            Vec2 point (const YAML::Node &node, const std::string &key) const
            {
                if (!node.IsSequence () || node.size () != 2)
                    fail (key, line_of (node), "a point [x, y]");
                return {number (node[0], key), number (node[1], key)};
            }

            void sequence (const YAML::Node &node, const std::string &key) const
            {
                if (!node.IsSequence ())
                    fail (key, line_of (node), "a sequence");
            }

        private:
            std::string source_;
        };

        TargetModel read_targets (const Reader &r, const YAML::Node &node, double &default_duration)
        {
            const std::string path = "targets";
            r.require_map (node, path);
            const std::string model = r.text (r.child (node, path, "model", "a model name"), "targets.model");

            if (model == "lissajous")
            {
                r.only_keys (node, path, {"model", "A", "B", "phi_rate", "phi0"});
                LissajousConvoy m;
                m.A = r.number (node, path, "A");
                m.B = r.number (node, path, "B");
                m.phi_rate = r.number (node, path, "phi_rate");
                const YAML::Node phi0 = r.child (node, path, "phi0", "a sequence of numbers");
                r.sequence (phi0, "targets.phi0");
                for (const auto &v : phi0)
                    m.phi0.push_back (r.number (v, "targets.phi0"));
                if (m.phi_rate != 0.0)
                    default_duration = 2.0 * std::numbers::pi / std::abs (m.phi_rate);
                return m;
            }
            if (model == "linear")
            {
                r.only_keys (node, path, {"model", "members"});
                LinearConvoy m;
                const YAML::Node members = r.child (node, path, "members", "a sequence of targets");
                r.sequence (members, "targets.members");
                for (const auto &item : members)
                {
                    const std::string ip = "targets.members[]";
                    r.require_map (item, ip);
                    r.only_keys (item, ip, {"origin", "heading", "speed"});
                    LinearTarget t;
                    t.origin = r.point (r.child (item, ip, "origin", "a point [x, y]"), ip + ".origin");
                    t.heading = r.number (item, ip, "heading");
                    t.speed = r.number (item, ip, "speed");
                    m.members.push_back (t);
                }
                return m;
            }
            if (model == "waypoint")
            {
                r.only_keys (node, path, {"model", "polyline", "members"});
                WaypointConvoy m;
                const YAML::Node poly = r.child (node, path, "polyline", "a sequence of points");
                r.sequence (poly, "targets.polyline");
                for (const auto &p : poly)
                    m.polyline.push_back (r.point (p, "targets.polyline"));
                const YAML::Node members = r.child (node, path, "members", "a sequence of targets");
                r.sequence (members, "targets.members");
                for (const auto &item : members)
                {
                    const std::string ip = "targets.members[]";
                    r.require_map (item, ip);
                    r.only_keys (item, ip, {"offset", "speed"});
                    m.members.push_back ({r.number (item, ip, "offset"), r.number (item, ip, "speed")});
                }
                return m;
            }
            r.fail ("targets.model", line_of (node["model"]), "one of lissajous, linear, waypoint");
        }

        SimConfig read_config (const YAML::Node &doc, const Reader &r)
        {
            r.require_map (doc, "");
            r.only_keys (doc, "",
                         {"name", "description", "dt", "duration", "direction", "regression_interval", "limits",
                          "gains", "agent", "wind", "orbit", "targets"});

            SimConfig cfg;
            cfg.name = r.text (r.child (doc, "", "name", "a string"), "name");
            if (doc["description"])
                cfg.description = r.text (doc["description"], "description");

            const std::string dir = r.text (r.child (doc, "", "direction", "ccw or cw"), "direction");
            if (dir == "ccw")
                cfg.direction = OrbitDirection::kCounterClockwise;
            else if (dir == "cw")
                cfg.direction = OrbitDirection::kClockwise;
            else
                r.fail ("direction", line_of (doc["direction"]), "ccw or cw");

            const YAML::Node limits = r.child (doc, "", "limits", "a mapping");
            r.require_map (limits, "limits");
            r.only_keys (limits, "limits", {"v_a_min", "v_a_max", "v_t_max", "omega_max", "standoff"});
            cfg.limits.v_a_min = r.number (limits, "limits", "v_a_min");
            cfg.limits.v_a_max = r.number (limits, "limits", "v_a_max");
            cfg.limits.v_t_max = r.number (limits, "limits", "v_t_max");
            cfg.limits.omega_max = r.number (limits, "limits", "omega_max");
            cfg.limits.standoff = r.number (limits, "limits", "standoff");

            const YAML::Node gains = r.child (doc, "", "gains", "a mapping");
            r.require_map (gains, "gains");
            r.only_keys (gains, "gains", {"k_gamma", "k_psi"});
            cfg.gains.k_gamma = r.number (gains, "gains", "k_gamma");
            cfg.gains.k_psi = r.number (gains, "gains", "k_psi");

            const YAML::Node agent = r.child (doc, "", "agent", "a mapping");
            r.require_map (agent, "agent");
            r.only_keys (agent, "agent", {"x", "y", "psi", "speed"});
            cfg.agent.pose.position = {r.number (agent, "agent", "x"), r.number (agent, "agent", "y")};
            cfg.agent.pose.psi = wrap_angle (r.number (agent, "agent", "psi"));
            cfg.agent.speed = r.number (agent, "agent", "speed");

            const YAML::Node wind = r.child (doc, "", "wind", "a mapping");
            r.require_map (wind, "wind");
            r.only_keys (wind, "wind", {"speed", "heading"});
            cfg.wind.speed = r.number (wind, "wind", "speed");
            cfg.wind.heading = r.number (wind, "wind", "heading");

            double default_duration = kDefaultDuration;
            const bool has_orbit = static_cast<bool> (doc["orbit"]);
            const bool has_targets = static_cast<bool> (doc["targets"]);
            if (has_orbit == has_targets)
                r.fail ("orbit|targets", line_of (doc), "exactly one of 'orbit' or 'targets'");
            if (has_orbit)
            {
                const YAML::Node orbit = doc["orbit"];
                r.require_map (orbit, "orbit");
                r.only_keys (orbit, "orbit", {"center", "a", "b", "theta"});
                const Vec2 c = r.point (r.child (orbit, "orbit", "center", "a point [x, y]"), "orbit.center");
                const double a = r.number (orbit, "orbit", "a");
                const double b = r.number (orbit, "orbit", "b");
                const double th = r.number (orbit, "orbit", "theta");
                try
                {
                    cfg.orbit = EllipseSpec (c, a, b, th);
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError ("a >= b > 0", e.what ());
                }
            }
            else
            {
                cfg.orbit = read_targets (r, doc["targets"], default_duration);
            }

            cfg.dt = doc["dt"] ? r.number (doc["dt"], "dt") : kDefaultDt;
            cfg.duration = doc["duration"] ? r.number (doc["duration"], "duration") : default_duration;
            if (doc["regression_interval"])
            {
                const YAML::Node n = doc["regression_interval"];
                const double v = r.number (n, "regression_interval");
                if (v != std::floor (v) || std::abs (v) > 1e9)
                    r.fail ("regression_interval", line_of (n), "an integer");
                cfg.regression_interval = static_cast<int> (v);
            }
            return cfg;
        }

        void emit_number (YAML::Emitter &out, double v) { out << format_double (v); }

        void emit_point (YAML::Emitter &out, Vec2 p)
        {
            out << YAML::Flow << YAML::BeginSeq;
            emit_number (out, p.x);
            emit_number (out, p.y);
            out << YAML::EndSeq;
        }

        void emit_targets (YAML::Emitter &out, const TargetModel &model)
        {
            out << YAML::Key << "targets" << YAML::Value << YAML::BeginMap;
            if (const auto *m = std::get_if<LissajousConvoy> (&model))
            {
                out << YAML::Key << "model" << YAML::Value << "lissajous";
                out << YAML::Key << "A" << YAML::Value;
                emit_number (out, m->A);
                out << YAML::Key << "B" << YAML::Value;
                emit_number (out, m->B);
                out << YAML::Key << "phi_rate" << YAML::Value;
                emit_number (out, m->phi_rate);
                out << YAML::Key << "phi0" << YAML::Value << YAML::Flow << YAML::BeginSeq;
                for (double v : m->phi0)
                    emit_number (out, v);
                out << YAML::EndSeq;
            }
            else if (const auto *lin = std::get_if<LinearConvoy> (&model))
            {
                out << YAML::Key << "model" << YAML::Value << "linear";
                out << YAML::Key << "members" << YAML::Value << YAML::BeginSeq;
                for (const auto &t : lin->members)
                {
                    out << YAML::Flow << YAML::BeginMap;
                    out << YAML::Key << "origin" << YAML::Value;
                    emit_point (out, t.origin);
                    out << YAML::Key << "heading" << YAML::Value;
                    emit_number (out, t.heading);
                    out << YAML::Key << "speed" << YAML::Value;
                    emit_number (out, t.speed);
                    out << YAML::EndMap;
                }
                out << YAML::EndSeq;
            }
            else
            {
                const auto &wp = std::get<WaypointConvoy> (model);
                out << YAML::Key << "model" << YAML::Value << "waypoint";
                out << YAML::Key << "polyline" << YAML::Value << YAML::BeginSeq;
                for (Vec2 p : wp.polyline)
                    emit_point (out, p);
                out << YAML::EndSeq;
                out << YAML::Key << "members" << YAML::Value << YAML::BeginSeq;
                for (const auto &t : wp.members)
                {
                    out << YAML::Flow << YAML::BeginMap;
                    out << YAML::Key << "offset" << YAML::Value;
                    emit_number (out, t.offset);
                    out << YAML::Key << "speed" << YAML::Value;
                    emit_number (out, t.speed);
                    out << YAML::EndMap;
                }
                out << YAML::EndSeq;
            }
            out << YAML::EndMap;
        }

        template <class Fields> void emit_block (YAML::Emitter &out, const char *name, const Fields &fields)
        {
            out << YAML::Key << name << YAML::Value << YAML::BeginMap;
            for (const auto &[key, value] : fields)
            {
                out << YAML::Key << key << YAML::Value;
                emit_number (out, value);
            }
            out << YAML::EndMap;
        }
    } // namespace

    SimConfig parse_scenario_text (std::string_view text, std::string_view source)
    {
        const Reader reader{std::string (source)};
        YAML::Node doc;
        try
        {
            doc = YAML::Load (std::string (text));
        }
        catch (const YAML::ParserException &e)
        {
            throw ScenarioError (std::string (source), "<document>", e.mark.line + 1, "well-formed YAML: " + e.msg);
        }
        SimConfig cfg = read_config (doc, reader);
        validate (cfg);
        return cfg;
    }

    SimConfig parse_scenario (const std::filesystem::path &path)
    {
        std::ifstream in (path);
        if (!in)
            throw std::runtime_error ("cannot open scenario file " + path.string ());
        std::ostringstream ss;
        ss << in.rdbuf ();
        return parse_scenario_text (ss.str (), path.string ());
    }

    std::string emit_scenario (const SimConfig &cfg)
    {
        using Field = std::pair<const char *, double>;
        YAML::Emitter out;
        out << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << cfg.name;
        if (!cfg.description.empty ())
            out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << cfg.description;
        out << YAML::Key << "dt" << YAML::Value;
        emit_number (out, cfg.dt);
        out << YAML::Key << "duration" << YAML::Value;
        emit_number (out, cfg.duration);
        out << YAML::Key << "direction" << YAML::Value
            << (cfg.direction == OrbitDirection::kCounterClockwise ? "ccw" : "cw");
        out << YAML::Key << "regression_interval" << YAML::Value << cfg.regression_interval;

        const AgentLimits &l = cfg.limits;
        emit_block (out, "limits",
                    std::initializer_list<Field>{{"v_a_min", l.v_a_min},
                                                 {"v_a_max", l.v_a_max},
                                                 {"v_t_max", l.v_t_max},
                                                 {"omega_max", l.omega_max},
                                                 {"standoff", l.standoff}});
        emit_block (out, "gains",
                    std::initializer_list<Field>{{"k_gamma", cfg.gains.k_gamma}, {"k_psi", cfg.gains.k_psi}});
        emit_block (out, "agent",
                    std::initializer_list<Field>{{"x", cfg.agent.pose.position.x},
                                                 {"y", cfg.agent.pose.position.y},
                                                 {"psi", cfg.agent.pose.psi},
                                                 {"speed", cfg.agent.speed}});
        emit_block (out, "wind",
                    std::initializer_list<Field>{{"speed", cfg.wind.speed}, {"heading", cfg.wind.heading}});

        if (const auto *e = std::get_if<EllipseSpec> (&cfg.orbit))
        {
            out << YAML::Key << "orbit" << YAML::Value << YAML::BeginMap;
            out << YAML::Key << "center" << YAML::Value;
            emit_point (out, e->center ());
            out << YAML::Key << "a" << YAML::Value;
            emit_number (out, e->a ());
            out << YAML::Key << "b" << YAML::Value;
            emit_number (out, e->b ());
            out << YAML::Key << "theta" << YAML::Value;
            emit_number (out, e->theta ());
            out << YAML::EndMap;
        }
        else
        {
            emit_targets (out, std::get<TargetModel> (cfg.orbit));
        }
        out << YAML::EndMap;
        return std::string (out.c_str ()) + "\n";
    }

    void write_scenario (const SimConfig &cfg, const std::filesystem::path &path)
    {
        std::ofstream out (path);
        if (!out)
            throw std::runtime_error ("cannot write scenario file " + path.string ());
        out << emit_scenario (cfg);
        if (!out)
            throw std::runtime_error ("write failed for " + path.string ());
    }

} // namespace encircle::io
