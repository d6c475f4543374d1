#pragma once

// Scenario files: flat `section.key = value` text, one key per line, `#` comments.
// See docs/scenario.md for the schema.

#include "arcmem/analysis.hpp"
#include "arcmem/integrator.hpp"
#include "arcmem/model.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arcmem {

struct SweepSpec {
    SweepAxis axis = SweepAxis::f;
    std::vector<double> values;
};

struct OutputSpec {
    std::string directory = "arcmem_out";
    bool csv = true;
    bool summary = true;
};

struct Scenario {
    std::string name = "custom";
    ArcParameters arc;
    CircuitParameters circuit;
    IntegratorConfig integrator;
    SettleOptions settle;
    ArcState initial{0.0, 1.0};
    std::optional<SweepSpec> sweep;
    OutputSpec output;

    /// Throws Error(validation_error) naming the violated invariant.
    void validate() const;

    [[nodiscard]] AnalysisOptions analysis_options(std::size_t jobs = 0) const;
};

std::span<const std::string_view> preset_names() noexcept;

/// Built-in parameter sets of the published figures. Throws
/// Error(invalid_argument) for an unknown name.
Scenario preset(std::string_view name);

/// Assigns one key. Throws Error(parse_error) for unknown keys or malformed values.
void set_scenario_value(Scenario& scenario, std::string_view key, std::string_view value);

/// Parses scenario text; `origin` prefixes error messages ("origin:line: ...").
/// The result is validated.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<scenario>");

Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(format_scenario(s)) reproduces s.
std::string format_scenario(const Scenario& scenario);

}  // namespace arcmem
