// encircle: run, validate and summarize ellipse-encirclement scenarios.
//
// Exit codes: 0 success, 1 I/O or usage error, 2 invalid scenario, 3 run aborted on a non-finite state.

#include "encircle/io/plots.hpp"
#include "encircle/io/scenario.hpp"
#include "encircle/io/summary.hpp"
#include "encircle/io/trace.hpp"
#include "encircle/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace encircle;

namespace
{
    constexpr int kOk = 0;
    constexpr int kError = 1;
    constexpr int kInvalid = 2;
    constexpr int kAborted = 3;

    struct RunOptions
    {
        fs::path out_dir{"out"};
        std::string format{"csv"};
        bool plots{false};
        std::vector<double> snapshots;
    };

    struct RunResult
    {
        int code{kOk};
        std::string summary_json;
        std::string message;
    };

    /// Runs one scenario into @p out_dir.  Never throws; errors become exit codes.
    RunResult run_scenario (const fs::path &scenario, const RunOptions &opts)
    {
        RunResult result;
        try
        {
            const SimConfig cfg = io::parse_scenario (scenario);
            const io::TraceFormat format = io::parse_trace_format (opts.format);
            const SimTrace trace = run_simulation (cfg);

            fs::create_directories (opts.out_dir);
            io::write_trace (trace, opts.out_dir / ("trace" + std::string (io::file_extension (format))), format);
            const std::string json = io::to_json (io::summarize (trace)).dump (2);
            {
                std::ofstream out (opts.out_dir / "summary.json");
                out << json << '\n';
            }
            if (opts.plots)
                (void)io::render_plots (trace, opts.out_dir / "plots", io::PlotOptions{opts.snapshots});

            result.summary_json = json;
            if (trace.aborted ())
            {
                result.code = kAborted;
                result.message = scenario.string () + ": aborted: " + *trace.abort_reason;
            }
        }
        catch (const io::ScenarioError &e)
        {
            result = {kInvalid, {}, e.what ()};
        }
        catch (const ConfigError &e)
        {
            result = {kInvalid, {}, scenario.string () + ": " + e.what ()};
        }
        catch (const std::exception &e)
        {
            result = {kError, {}, scenario.string () + ": " + e.what ()};
        }
        return result;
    }

    int cmd_validate (const fs::path &scenario)
    {
        try
        {
            const SimConfig cfg = io::parse_scenario (scenario);
            std::cout << scenario.string () << ": ok (" << cfg.name << ", " << cfg.last_tick () + 1 << " ticks)\n";
            return kOk;
        }
        catch (const io::ScenarioError &e)
        {
            std::cerr << e.what () << '\n';
        }
        catch (const ConfigError &e)
        {
            std::cerr << scenario.string () << ": " << e.what () << '\n';
        }
        catch (const std::exception &e)
        {
            std::cerr << scenario.string () << ": " << e.what () << '\n';
            return kError;
        }
        return kInvalid;
    }

    int cmd_summarize (const fs::path &trace_path)
    {
        try
        {
            std::cout << io::to_json (io::summarize (io::read_trace (trace_path))).dump (2) << '\n';
            return kOk;
        }
        catch (const std::exception &e)
        {
            std::cerr << trace_path.string () << ": " << e.what () << '\n';
            return kError;
        }
    }

    int cmd_batch (const fs::path &dir, const RunOptions &base, unsigned jobs)
    {
        std::vector<fs::path> scenarios;
        std::error_code ec;
        for (const auto &entry : fs::directory_iterator (dir, ec))
        {
            const auto ext = entry.path ().extension ();
            if (entry.is_regular_file () && (ext == ".yaml" || ext == ".yml"))
                scenarios.push_back (entry.path ());
        }
        if (ec)
        {
            std::cerr << dir.string () << ": " << ec.message () << '\n';
            return kError;
        }
        std::sort (scenarios.begin (), scenarios.end ());

        std::vector<RunResult> results (scenarios.size ());
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (std::size_t i = next++; i < scenarios.size (); i = next++)
            {
                RunOptions opts = base;
                opts.out_dir = base.out_dir / scenarios[i].stem ();
                results[i] = run_scenario (scenarios[i], opts);
            }
        };
        if (jobs == 0)
            jobs = std::max (1u, std::thread::hardware_concurrency ());
        jobs = std::min<unsigned> (jobs, std::max<std::size_t> (1, scenarios.size ()));
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back (worker);
        pool.clear ();

        int worst = kOk;
        for (std::size_t i = 0; i < scenarios.size (); ++i)
        {
            const auto &r = results[i];
            std::cout << scenarios[i].stem ().string () << ": "
                      << (r.code == kOk ? "ok" : r.code == kAborted ? "aborted" : r.code == kInvalid ? "invalid" : "error")
                      << '\n';
            if (!r.message.empty ())
                std::cerr << r.message << '\n';
            worst = std::max (worst, r.code);
        }
        return worst;
    }
} // namespace

int main (int argc, char **argv)
{
    CLI::App app{"Ellipse encirclement of a moving convoy: scenario runner"};
    app.set_version_flag ("--version", std::string (io::tool_version ()));
    app.require_subcommand (1);

    RunOptions opts;
    fs::path scenario, trace_path, batch_dir;
    unsigned jobs = 0;

    const auto add_run_flags = [&] (CLI::App *cmd) {
        cmd->add_option ("--out", opts.out_dir, "output directory")->capture_default_str ();
        cmd->add_option ("--format", opts.format, "trace format")
            ->check (CLI::IsMember ({"csv", "jsonl"}))
            ->capture_default_str ();
        cmd->add_flag ("--plots", opts.plots, "write SVG figures to <out>/plots");
        cmd->add_option ("--snapshots", opts.snapshots, "times [s] of the ellipse snapshots on the trajectory plot")
            ->delimiter (',');
    };

    auto *run = app.add_subcommand ("run", "run one scenario, print its summary");
    run->add_option ("scenario", scenario, "scenario YAML file")->required ();
    add_run_flags (run);

    auto *val = app.add_subcommand ("validate", "check a scenario file");
    val->add_option ("scenario", scenario, "scenario YAML file")->required ();

    auto *sum = app.add_subcommand ("summarize", "print the summary of a trace file");
    sum->add_option ("trace", trace_path, "trace file (csv or jsonl)")->required ();

    auto *batch = app.add_subcommand ("batch", "run every scenario in a directory, one output subdirectory each");
    batch->add_option ("dir", batch_dir, "directory of scenario YAML files")->required ();
    add_run_flags (batch);
    batch->add_option ("-j,--jobs", jobs, "worker threads (0 = hardware concurrency)");

    try
    {
        app.parse (argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit (e) == 0 ? kOk : kError;
    }

    if (*run)
    {
        const RunResult r = run_scenario (scenario, opts);
        if (!r.summary_json.empty ())
            std::cout << r.summary_json << '\n';
        if (!r.message.empty ())
            std::cerr << r.message << '\n';
        return r.code;
    }
    if (*val)
        return cmd_validate (scenario);
    if (*sum)
        return cmd_summarize (trace_path);
    if (*batch)
        return cmd_batch (batch_dir, opts, jobs);
    return kError;
}
