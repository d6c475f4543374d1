#include "arcmem/arcmem.h"

#include "arcmem/analysis.hpp"
#include "arcmem/error.hpp"
#include "arcmem/runner.hpp"
#include "arcmem/scenario.hpp"

#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

struct arcmem_scenario {
    arcmem::Scenario scenario;
};

struct arcmem_period {
    arcmem::CircuitParameters circuit;
    arcmem::SettleResult settled;
};

namespace {

thread_local std::string last_error;

arcmem_status fail(arcmem_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

arcmem_status to_status(arcmem::ErrorCode code) { return static_cast<arcmem_status>(code); }

/// Runs `fn`, translating exceptions into status codes.
template <class Fn>
arcmem_status guarded(Fn&& fn) noexcept {
    try {
        last_error.clear();
        return fn();
    } catch (const arcmem::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(ARCMEM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ARCMEM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ARCMEM_ERR_INTERNAL, "unknown exception");
    }
}

arcmem_status null_argument(const char* name) {
    return fail(ARCMEM_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

arcmem_status make_scenario(arcmem::Scenario s, arcmem_scenario** out) {
    *out = new arcmem_scenario{std::move(s)};
    return ARCMEM_OK;
}

}  // namespace

extern "C" {

const char* arcmem_version(void) { return "1.0.0"; }

const char* arcmem_status_name(arcmem_status status) {
    if (status == ARCMEM_OK) return "Ok";
    static thread_local std::string name;
    name = std::string(arcmem::to_string(static_cast<arcmem::ErrorCode>(status)));
    return name.c_str();
}

const char* arcmem_last_error(void) { return last_error.c_str(); }

size_t arcmem_preset_count(void) { return arcmem::preset_names().size(); }

const char* arcmem_preset_name(size_t index) {
    const auto names = arcmem::preset_names();
    // preset names are string literals, hence NUL-terminated
    return index < names.size() ? names[index].data() : nullptr;
}

arcmem_status arcmem_scenario_preset(const char* name, arcmem_scenario** out) {
    if (name == nullptr) return null_argument("name");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] { return make_scenario(arcmem::preset(name), out); });
}

arcmem_status arcmem_scenario_load(const char* path, arcmem_scenario** out) {
    if (path == nullptr) return null_argument("path");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] { return make_scenario(arcmem::load_scenario(path), out); });
}

arcmem_status arcmem_scenario_parse(const char* text, arcmem_scenario** out) {
    if (text == nullptr) return null_argument("text");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] { return make_scenario(arcmem::parse_scenario(text), out); });
}

void arcmem_scenario_free(arcmem_scenario* scenario) { delete scenario; }

arcmem_status arcmem_scenario_set(arcmem_scenario* scenario, const char* key, const char* value) {
    if (scenario == nullptr) return null_argument("scenario");
    if (key == nullptr) return null_argument("key");
    if (value == nullptr) return null_argument("value");
    return guarded([&] {
        arcmem::Scenario copy = scenario->scenario;
        arcmem::set_scenario_value(copy, key, value);
        copy.validate();
        scenario->scenario = std::move(copy);
        return ARCMEM_OK;
    });
}

arcmem_status arcmem_scenario_get(const arcmem_scenario* scenario, const char* key, double* value) {
    if (scenario == nullptr) return null_argument("scenario");
    if (key == nullptr) return null_argument("key");
    if (value == nullptr) return null_argument("value");
    return guarded([&] {
        // The canonical text form is the single source of key names.
        const std::string text = arcmem::format_scenario(scenario->scenario);
        std::istringstream in(text);
        std::string line;
        const std::string prefix = std::string(key) + " = ";
        while (std::getline(in, line)) {
            if (line.rfind(prefix, 0) != 0) continue;
            const std::string rest = line.substr(prefix.size());
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str() || *end != '\0') {
                return fail(ARCMEM_ERR_INVALID_ARGUMENT, std::string(key) + " is not numeric");
            }
            *value = v;
            return ARCMEM_OK;
        }
        return fail(ARCMEM_ERR_INVALID_ARGUMENT,
                    "key '" + std::string(key) + "' is not set in this scenario");
    });
}

arcmem_status arcmem_scenario_format(const arcmem_scenario* scenario, char* buffer,
                                     size_t capacity, size_t* needed) {
    if (scenario == nullptr) return null_argument("scenario");
    return guarded([&] {
        const std::string text = arcmem::format_scenario(scenario->scenario);
        if (needed != nullptr) *needed = text.size() + 1;
        if (buffer == nullptr || capacity < text.size() + 1) {
            if (buffer != nullptr && capacity > 0) buffer[0] = '\0';
            return fail(ARCMEM_ERR_BUFFER_TOO_SMALL, "buffer too small for scenario text");
        }
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        return ARCMEM_OK;
    });
}

arcmem_status arcmem_run(const arcmem_scenario* scenario, const char* command,
                         const arcmem_run_options* options, int quiet, int* exit_code) {
    if (scenario == nullptr) return null_argument("scenario");
    if (command == nullptr) return null_argument("command");
    if (exit_code == nullptr) return null_argument("exit_code");
    return guarded([&] {
        const auto cmd = arcmem::parse_command(command);
        if (!cmd) {
            *exit_code = static_cast<int>(arcmem::ExitCode::validation);
            return fail(ARCMEM_ERR_INVALID_ARGUMENT, "unknown command '" + std::string(command) + "'");
        }
        arcmem::RunOptions ro;
        if (options != nullptr) {
            if (options->out_dir != nullptr) ro.out_dir = options->out_dir;
            ro.assert_fingerprints = options->assert_fingerprints != 0;
            ro.jobs = options->jobs;
            ro.raw_steps = options->raw_steps != 0;
        }
        std::ostringstream sink;
        std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : std::cerr;
        *exit_code = static_cast<int>(arcmem::run_command(*cmd, scenario->scenario, ro, log));
        if (quiet) {
            // quiet drops the summaries but keeps diagnostics
            std::istringstream lines(sink.str());
            std::string line;
            while (std::getline(lines, line)) {
                if (line.rfind("error: ", 0) == 0) std::cerr << line << '\n';
            }
        }
        return ARCMEM_OK;
    });
}

arcmem_status arcmem_settle(const arcmem_scenario* scenario, arcmem_period** out) {
    if (scenario == nullptr) return null_argument("scenario");
    if (out == nullptr) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        const auto& s = scenario->scenario;
        auto settled = arcmem::settle_to_periodic(s.arc, s.circuit, s.initial, s.integrator, s.settle);
        const bool converged = settled.report.converged;
        *out = new arcmem_period{s.circuit, std::move(settled)};
        if (!converged) {
            return fail(ARCMEM_ERR_NOT_CONVERGED, "periodic steady state not reached");
        }
        return ARCMEM_OK;
    });
}

void arcmem_period_free(arcmem_period* period) { delete period; }

arcmem_status arcmem_period_info(const arcmem_period* period, arcmem_settle_info* info) {
    if (period == nullptr) return null_argument("period");
    if (info == nullptr) return null_argument("info");
    const auto& r = period->settled.report;
    info->periods_integrated = r.periods_integrated;
    info->converged = r.converged ? 1 : 0;
    info->period_map_residual = r.period_map_residual;
    info->period = period->circuit.period();
    info->accepted_steps = period->settled.period.stats().accepted;
    return ARCMEM_OK;
}

arcmem_status arcmem_period_state(const arcmem_period* period, double t, double* i, double* g) {
    if (period == nullptr) return null_argument("period");
    if (i == nullptr || g == nullptr) return null_argument("i/g");
    const auto& traj = period->settled.period;
    if (!(t >= traj.t_begin() && t <= traj.t_end())) {
        return fail(ARCMEM_ERR_INVALID_ARGUMENT, "t outside the settled period");
    }
    const auto s = traj.state_at(t);
    *i = s.i;
    *g = s.g;
    return ARCMEM_OK;
}

arcmem_status arcmem_period_pinch_points(const arcmem_period* period, arcmem_pinch_point* buffer,
                                         size_t capacity, size_t* count) {
    if (period == nullptr) return null_argument("period");
    if (count == nullptr) return null_argument("count");
    return guarded([&] {
        const auto pins = arcmem::pinch_points(period->settled.period);
        *count = pins.size();
        const size_t n = std::min(capacity, pins.size());
        if (n > 0 && buffer == nullptr) return null_argument("buffer");
        for (size_t j = 0; j < n; ++j) {
            buffer[j] = {pins[j].t_star,   pins[j].g_at,     pins[j].slope,
                         pins[j].concavity_sign, pins[j].di_dt_at, pins[j].dg_dt_at};
        }
        if (capacity < pins.size()) {
            return fail(ARCMEM_ERR_BUFFER_TOO_SMALL, "pinch point buffer too small");
        }
        return ARCMEM_OK;
    });
}

arcmem_status arcmem_period_loop_metrics(const arcmem_period* period, arcmem_loop_metrics* metrics) {
    if (period == nullptr) return null_argument("period");
    if (metrics == nullptr) return null_argument("metrics");
    return guarded([&] {
        const auto m = arcmem::loop_metrics(period->settled.period);
        *metrics = {m.lobe_area, m.loop_width_metric, m.i_peak,
                    m.g_mean,    m.g_min_observed,    m.g_max_observed};
        return ARCMEM_OK;
    });
}

arcmem_status arcmem_period_fourier_area(const arcmem_period* period, size_t k_max, double* area) {
    if (period == nullptr) return null_argument("period");
    if (area == nullptr) return null_argument("area");
    if (k_max == 0) return fail(ARCMEM_ERR_INVALID_ARGUMENT, "k_max must be positive");
    return guarded([&] {
        const auto spec = arcmem::fourier_coefficients(period->settled.period, k_max);
        *area = arcmem::area_from_fourier(spec, period->circuit);
        return ARCMEM_OK;
    });
}

arcmem_status arcmem_table1(const arcmem_scenario* scenario, unsigned jobs, arcmem_table1_row* rows,
                            size_t capacity, size_t* count) {
    if (scenario == nullptr) return null_argument("scenario");
    if (count == nullptr) return null_argument("count");
    return guarded([&] {
        const auto& s = scenario->scenario;
        std::vector<double> freqs(std::begin(arcmem::table1_frequencies),
                                  std::end(arcmem::table1_frequencies));
        if (s.sweep && s.sweep->axis == arcmem::SweepAxis::f) freqs = s.sweep->values;
        *count = freqs.size();
        if (capacity < freqs.size() || rows == nullptr) {
            return fail(ARCMEM_ERR_BUFFER_TOO_SMALL, "table1 row buffer too small");
        }
        const auto out = arcmem::table1_reproduction(s.arc, s.circuit, s.analysis_options(jobs), freqs);
        for (size_t j = 0; j < out.size(); ++j) {
            rows[j] = {out[j].f,      out[j].ok ? 1 : 0,  out[j].i_m,
                       out[j].g_mean, out[j].hf_estimate, out[j].rel_error};
        }
        return ARCMEM_OK;
    });
}

}  // extern "C"
