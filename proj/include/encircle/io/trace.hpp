#pragma once
/**
 * @file   trace.hpp
 * @brief  Trace files: a header echoing the scenario, then one row per tick.
 *
 * Numbers are written in shortest round-trip form, so reading a trace back
 * reproduces the in-memory values exactly.  Columns:
 * t,x_A,y_A,psi_A,x_o,y_o,a,b,theta_E,gamma,psi_T,psi_O,psi_D,omega_raw,omega,V,V_tilde,Gamma,gamma_T1..gamma_TN
 */

#include "encircle/simulation.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace encircle::io
{
    enum class TraceFormat
    {
        kCsv,
        kJsonLines,
    };

    [[nodiscard]] std::string_view tool_version () noexcept;

    /// Parses "csv" / "jsonl"; throws std::invalid_argument otherwise.
    [[nodiscard]] TraceFormat parse_trace_format (std::string_view name);
    [[nodiscard]] std::string_view file_extension (TraceFormat format) noexcept;

    [[nodiscard]] std::vector<std::string> trace_columns (std::size_t n_targets);

    void write_trace (const SimTrace &trace, std::ostream &out, TraceFormat format);
    void write_trace (const SimTrace &trace, const std::filesystem::path &path, TraceFormat format);

    /// Reads either format (detected from the first byte).
    [[nodiscard]] SimTrace read_trace (std::istream &in);
    [[nodiscard]] SimTrace read_trace (const std::filesystem::path &path);

} // namespace encircle::io
