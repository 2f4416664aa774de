#pragma once
/**
 * @file   scenario.hpp
 * @brief  YAML scenario files <-> SimConfig. The schema is in docs/scenario_schema.md.
 */

#include "encircle/simulation.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace encircle::io
{
    /// Schema violation: offending key, 1-based line and what was expected there.
    class ScenarioError : public std::runtime_error
    {
    public:
        ScenarioError (const std::string &source, std::string key, int line, std::string expected);

        [[nodiscard]] const std::string &key () const noexcept { return key_; }
        [[nodiscard]] int line () const noexcept { return line_; }
        [[nodiscard]] const std::string &expected () const noexcept { return expected_; }

    private:
        std::string key_;
        int line_;
        std::string expected_;
    };

    /// Parses and validates. Throws ScenarioError (schema) or ConfigError (physics).
    [[nodiscard]] SimConfig parse_scenario (const std::filesystem::path &path);
    [[nodiscard]] SimConfig parse_scenario_text (std::string_view text, std::string_view source = "<scenario>");

    /// Emits a scenario document that parses back to an equal SimConfig.
    [[nodiscard]] std::string emit_scenario (const SimConfig &cfg);
    void write_scenario (const SimConfig &cfg, const std::filesystem::path &path);

} // namespace encircle::io
