// Command-line front end. Talks to the simulator only through the C API.
#include "arcmem/arcmem.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ScenarioDeleter {
    void operator()(arcmem_scenario* s) const noexcept { arcmem_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<arcmem_scenario, ScenarioDeleter>;

// Exit code used for bad arguments, unreadable scenarios and validation errors.
constexpr int exit_validation = 1;
constexpr int exit_numeric = 2;

int report(arcmem_status st) {
    std::fprintf(stderr, "arcmem: %s: %s\n", arcmem_status_name(st), arcmem_last_error());
    return st == ARCMEM_ERR_INVALID_ARGUMENT || st == ARCMEM_ERR_PARSE ||
                   st == ARCMEM_ERR_VALIDATION || st == ARCMEM_ERR_IO
               ? exit_validation
               : exit_numeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid arc model simulator and memristive fingerprint checker", "arcmem"};
    app.set_version_flag("--version", std::string(arcmem_version()));
    app.require_subcommand(1);

    std::string scenario_path;
    std::string preset_name;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool assert_fp = false;
    unsigned jobs = 0;
    bool raw_steps = false;
    bool quiet = false;
    bool print_scenario = false;

    std::string preset_help = "built-in scenario:";
    for (size_t k = 0; k < arcmem_preset_count(); ++k) {
        preset_help += " ";
        preset_help += arcmem_preset_name(k);
    }

    const char* commands[][2] = {
        {"simulate", "settle one operating point and write its waveform"},
        {"fingerprints", "check the three memristor fingerprints"},
        {"sweep", "sweep one parameter and write loop metrics"},
        {"table1", "compare mean conductance with the high-frequency estimate"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto* scen = sub->add_option("--scenario", scenario_path, "scenario file")
                         ->check(CLI::ExistingFile);
        auto* pre = sub->add_option("--preset", preset_name, preset_help);
        scen->excludes(pre);
        sub->add_option("--set", overrides, "override a scenario key (key=value), repeatable");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
        sub->add_flag("--quiet", quiet, "do not print the summary");
        sub->add_flag("--print-scenario", print_scenario, "print the resolved scenario and exit");
        if (std::string(name) == "fingerprints") {
            sub->add_flag("--assert", assert_fp, "exit with code 3 if a fingerprint fails");
        }
        if (std::string(name) == "simulate") {
            sub->add_flag("--raw-steps", raw_steps, "also write every accepted integrator step");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_validation;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    arcmem_scenario* raw = nullptr;
    arcmem_status st = ARCMEM_OK;
    if (!scenario_path.empty()) {
        st = arcmem_scenario_load(scenario_path.c_str(), &raw);
    } else {
        st = arcmem_scenario_preset(preset_name.empty() ? "fig1" : preset_name.c_str(), &raw);
    }
    if (st != ARCMEM_OK) return report(st);
    ScenarioPtr scenario(raw);

    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "arcmem: --set expects key=value, got '%s'\n", kv.c_str());
            return exit_validation;
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        st = arcmem_scenario_set(scenario.get(), key.c_str(), value.c_str());
        if (st != ARCMEM_OK) return report(st);
    }

    if (print_scenario) {
        size_t needed = 0;
        arcmem_scenario_format(scenario.get(), nullptr, 0, &needed);
        std::string text(needed, '\0');
        st = arcmem_scenario_format(scenario.get(), text.data(), text.size(), &needed);
        if (st != ARCMEM_OK) return report(st);
        std::fputs(text.c_str(), stdout);
        return 0;
    }

    arcmem_run_options opts{};
    opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    opts.assert_fingerprints = assert_fp ? 1 : 0;
    opts.jobs = jobs;
    opts.raw_steps = raw_steps ? 1 : 0;

    int exit_code = 0;
    st = arcmem_run(scenario.get(), command.c_str(), &opts, quiet ? 1 : 0, &exit_code);
    if (st != ARCMEM_OK) return report(st);
    return exit_code;
}
