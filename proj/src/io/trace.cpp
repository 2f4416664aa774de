#include "encircle/io/trace.hpp"

#include "encircle/io/scenario.hpp"
#include "numbers.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace encircle::io
{
    namespace
    {
        using detail::format_double;
        using detail::parse_double;
        using ordered_json = nlohmann::ordered_json;

        constexpr std::string_view kMagic = "encircle trace";
        constexpr std::string_view kUnits =
            "angles rad, lengths m, times s; psi_T psi_O psi_D are relative to the ellipse frame";

        constexpr std::size_t kFixedColumns = 18;

        std::array<double TickRecord::*, kFixedColumns> fixed_fields ()
        {
            return {&TickRecord::t,     &TickRecord::x_A,     &TickRecord::y_A,   &TickRecord::psi_A,
                    &TickRecord::x_o,   &TickRecord::y_o,     &TickRecord::a,     &TickRecord::b,
                    &TickRecord::theta_E, &TickRecord::gamma, &TickRecord::psi_T, &TickRecord::psi_O,
                    &TickRecord::psi_D, &TickRecord::omega_raw, &TickRecord::omega, &TickRecord::V,
                    &TickRecord::V_tilde, &TickRecord::Gamma};
        }

        std::vector<std::string> split_lines (const std::string &text)
        {
            std::vector<std::string> lines;
            std::istringstream in (text);
            for (std::string line; std::getline (in, line);)
                lines.push_back (line);
            return lines;
        }

        std::vector<std::string_view> split_csv (std::string_view line)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (true)
            {
                const std::size_t comma = line.find (',', start);
                out.push_back (line.substr (start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
                if (comma == std::string_view::npos)
                    break;
                start = comma + 1;
            }
            return out;
        }

        std::string status_text (const SimTrace &trace)
        {
            return trace.aborted () ? "aborted: " + *trace.abort_reason : "ok";
        }

        void write_csv (const SimTrace &trace, std::ostream &out)
        {
            const std::size_t n = trace.config.target_count ();
            out << "# " << kMagic << "\n";
            out << "# tool_version: " << tool_version () << "\n";
            out << "# units: " << kUnits << "\n";
            out << "# dt: " << format_double (trace.config.dt) << "\n";
            out << "# targets: " << n << "\n";
            out << "# status: " << status_text (trace) << "\n";
            out << "# scenario:\n";
            for (const std::string &line : split_lines (emit_scenario (trace.config)))
                out << "#   " << line << "\n";
            out << "# end-scenario\n";

            const auto cols = trace_columns (n);
            for (std::size_t i = 0; i < cols.size (); ++i)
                out << (i ? "," : "") << cols[i];
            out << "\n";

            const auto fields = fixed_fields ();
            std::string row;
            for (const TickRecord &r : trace.ticks)
            {
                row.clear ();
                for (std::size_t i = 0; i < fields.size (); ++i)
                {
                    if (i)
                        row += ',';
                    row += format_double (r.*fields[i]);
                }
                for (double g : r.gamma_T)
                {
                    row += ',';
                    row += format_double (g);
                }
                out << row << "\n";
            }
        }

        ordered_json number_json (double v)
        {
            return std::isfinite (v) ? ordered_json (v) : ordered_json (nullptr);
        }

        double json_number (const ordered_json &j)
        {
            return j.is_null () ? std::numeric_limits<double>::quiet_NaN () : j.get<double> ();
        }

        void write_jsonl (const SimTrace &trace, std::ostream &out)
        {
            const std::size_t n = trace.config.target_count ();
            ordered_json header;
            header["format"] = kMagic;
            header["tool_version"] = tool_version ();
            header["units"] = kUnits;
            header["dt"] = trace.config.dt;
            header["targets"] = n;
            header["status"] = status_text (trace);
            header["scenario"] = emit_scenario (trace.config);
            out << header.dump () << "\n";

            const auto cols = trace_columns (n);
            const auto fields = fixed_fields ();
            for (const TickRecord &r : trace.ticks)
            {
                ordered_json row;
                for (std::size_t i = 0; i < fields.size (); ++i)
                    row[cols[i]] = number_json (r.*fields[i]);
                for (std::size_t i = 0; i < r.gamma_T.size (); ++i)
                    row[cols[kFixedColumns + i]] = number_json (r.gamma_T[i]);
                out << row.dump () << "\n";
            }
        }

        void apply_status (SimTrace &trace, const std::string &status)
        {
            constexpr std::string_view prefix = "aborted: ";
            if (status.rfind (prefix, 0) == 0)
                trace.abort_reason = status.substr (prefix.size ());
            else if (status != "ok")
                throw std::runtime_error ("trace: unknown status '" + status + "'");
        }

        SimTrace read_csv (std::istream &in)
        {
            SimTrace trace;
            std::string line;
            std::string scenario;
            std::string status = "ok";
            bool in_scenario = false;
            bool have_columns = false;
            std::size_t n_targets = 0;
            std::size_t line_no = 0;
            const auto fields = fixed_fields ();

            while (std::getline (in, line))
            {
                ++line_no;
                if (!line.empty () && line.front () == '#')
                {
                    const std::string body = line.size () > 2 ? line.substr (2) : "";
                    if (in_scenario)
                    {
                        if (body == "end-scenario")
                            in_scenario = false;
                        else
                            scenario += (body.size () >= 2 ? body.substr (2) : "") + "\n";
                    }
                    else if (body == "scenario:")
                        in_scenario = true;
                    else if (body.rfind ("status: ", 0) == 0)
                        status = body.substr (8);
                    continue;
                }
                if (!have_columns)
                {
                    trace.config = parse_scenario_text (scenario, "trace header");
                    n_targets = trace.config.target_count ();
                    const auto expected = trace_columns (n_targets);
                    const auto got = split_csv (line);
                    if (got.size () != expected.size ())
                        throw std::runtime_error ("trace: header row has " + std::to_string (got.size ()) +
                                                  " columns, expected " + std::to_string (expected.size ()));
                    for (std::size_t i = 0; i < got.size (); ++i)
                        if (got[i] != expected[i])
                            throw std::runtime_error ("trace: unexpected column '" + std::string (got[i]) + "'");
                    have_columns = true;
                    continue;
                }
                if (line.empty ())
                    continue;
                const auto cells = split_csv (line);
                if (cells.size () != kFixedColumns + n_targets)
                    throw std::runtime_error ("trace: line " + std::to_string (line_no) + " has " +
                                              std::to_string (cells.size ()) + " cells");
                TickRecord r;
                for (std::size_t i = 0; i < cells.size (); ++i)
                {
                    const auto v = parse_double (cells[i]);
                    if (!v)
                        throw std::runtime_error ("trace: line " + std::to_string (line_no) + ": bad number '" +
                                                  std::string (cells[i]) + "'");
                    if (i < kFixedColumns)
                        r.*fields[i] = *v;
                    else
                        r.gamma_T.push_back (*v);
                }
                trace.ticks.push_back (std::move (r));
            }
            if (!have_columns)
                throw std::runtime_error ("trace: missing column header row");
            apply_status (trace, status);
            return trace;
        }

        SimTrace read_jsonl (std::istream &in)
        {
            SimTrace trace;
            std::string line;
            if (!std::getline (in, line))
                throw std::runtime_error ("trace: empty file");
            const ordered_json header = ordered_json::parse (line);
            if (header.value ("format", "") != kMagic)
                throw std::runtime_error ("trace: not an encircle trace");
            trace.config = parse_scenario_text (header.at ("scenario").get<std::string> (), "trace header");
            apply_status (trace, header.at ("status").get<std::string> ());

            const std::size_t n = trace.config.target_count ();
            const auto cols = trace_columns (n);
            const auto fields = fixed_fields ();
            while (std::getline (in, line))
            {
                if (line.empty ())
                    continue;
                const ordered_json row = ordered_json::parse (line);
                TickRecord r;
                for (std::size_t i = 0; i < fields.size (); ++i)
                    r.*fields[i] = json_number (row.at (cols[i]));
                for (std::size_t i = 0; i < n; ++i)
                    r.gamma_T.push_back (json_number (row.at (cols[kFixedColumns + i])));
                trace.ticks.push_back (std::move (r));
            }
            return trace;
        }
    } // namespace

    std::string_view tool_version () noexcept { return ENCIRCLE_VERSION; }

    TraceFormat parse_trace_format (std::string_view name)
    {
        if (name == "csv")
            return TraceFormat::kCsv;
        if (name == "jsonl")
            return TraceFormat::kJsonLines;
        throw std::invalid_argument ("unknown trace format '" + std::string (name) + "' (csv or jsonl)");
    }

    std::string_view file_extension (TraceFormat format) noexcept
    {
        return format == TraceFormat::kCsv ? ".csv" : ".jsonl";
    }

    std::vector<std::string> trace_columns (std::size_t n_targets)
    {
        std::vector<std::string> cols{"t",     "x_A",   "y_A",   "psi_A",     "x_o",   "y_o",
                                      "a",     "b",     "theta_E", "gamma",   "psi_T", "psi_O",
                                      "psi_D", "omega_raw", "omega", "V",     "V_tilde", "Gamma"};
        for (std::size_t i = 1; i <= n_targets; ++i)
            cols.push_back ("gamma_T" + std::to_string (i));
        return cols;
    }

    void write_trace (const SimTrace &trace, std::ostream &out, TraceFormat format)
    {
        if (format == TraceFormat::kCsv)
            write_csv (trace, out);
        else
            write_jsonl (trace, out);
    }

    void write_trace (const SimTrace &trace, const std::filesystem::path &path, TraceFormat format)
    {
        std::ofstream out (path, std::ios::binary);
        if (!out)
            throw std::runtime_error ("cannot open " + path.string () + " for writing");
        write_trace (trace, out, format);
        out.flush ();
        if (!out)
            throw std::runtime_error ("write failed for " + path.string ());
    }

    SimTrace read_trace (std::istream &in)
    {
        const int first = in.peek ();
        if (first == '#')
            return read_csv (in);
        if (first == '{')
            return read_jsonl (in);
        throw std::runtime_error ("trace: unrecognised format");
    }

    SimTrace read_trace (const std::filesystem::path &path)
    {
        std::ifstream in (path, std::ios::binary);
        if (!in)
            throw std::runtime_error ("cannot open trace " + path.string ());
        try
        {
            return read_trace (in);
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error (path.string () + ": " + e.what ());
        }
    }

} // namespace encircle::io
