#pragma once
// Shortest round-trip decimal formatting shared by the scenario and trace writers.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace encircle::io::detail
{
    inline std::string format_double (double v)
    {
        char buf[64];
        const auto res = std::to_chars (buf, buf + sizeof buf, v);
        return std::string (buf, res.ptr);
    }

    inline std::optional<double> parse_double (std::string_view s)
    {
        if (!s.empty () && s.front () == '+')
            s.remove_prefix (1);
        double v = 0.0;
        const auto res = std::from_chars (s.data (), s.data () + s.size (), v);
        if (res.ec != std::errc{} || res.ptr != s.data () + s.size ())
            return std::nullopt;
        return v;
    }
} // namespace encircle::io::detail
