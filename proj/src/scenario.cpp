#include "arcmem/scenario.hpp"

#include "arcmem/csv.hpp"
#include "arcmem/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace arcmem {

namespace {

constexpr std::array<std::string_view, 7> kPresets = {"fig1",  "fig2a", "fig3", "fig4a",
                                                      "fig4b", "fig4c", "table1"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
    throw Error(ErrorCode::parse_error, "invalid value '" + std::string(value) + "' for " +
                                            std::string(key) + " (expected " + std::string(want) +
                                            ")");
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double x = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, x);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) bad_value(key, text, "a number");
    return x;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
    text = trim(text);
    std::size_t x = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, x);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
        bad_value(key, text, "a non-negative integer");
    }
    return x;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

ConstantTheta& constant_theta(Scenario& s, std::string_view key) {
    auto* c = std::get_if<ConstantTheta>(&s.arc.theta_law);
    if (c == nullptr) {
        throw Error(ErrorCode::parse_error,
                    std::string(key) + " requires arc.theta_law = constant");
    }
    return *c;
}

CurrentDependentTheta& dependent_theta(Scenario& s, std::string_view key) {
    auto* c = std::get_if<CurrentDependentTheta>(&s.arc.theta_law);
    if (c == nullptr) {
        throw Error(ErrorCode::parse_error,
                    std::string(key) + " requires arc.theta_law = current_dependent");
    }
    return *c;
}

template <class Law>
Law& sigma_as(Scenario& s, std::string_view key) {
    auto* law = std::get_if<Law>(&s.arc.sigma_law);
    if (law == nullptr) {
        throw Error(ErrorCode::parse_error,
                    std::string(key) + " does not apply to the selected arc.sigma_law");
    }
    return *law;
}

SweepSpec& sweep_of(Scenario& s) {
    if (!s.sweep) s.sweep = SweepSpec{};
    return *s.sweep;
}

Scenario figure1() {
    Scenario s;
    s.name = "fig1";
    s.arc.g_min = 1e-8;
    s.arc.i0 = 4.8;
    s.arc.k = 0.1;
    s.arc.u_c = 30.0;
    s.arc.p_m = 20.0;
    s.arc.theta_law = ConstantTheta{4e-4};
    s.arc.sigma_law = GaussianSigma{};
    s.circuit = {0.2, 1e-3, 75.0, 50.0};
    s.sweep = SweepSpec{SweepAxis::f, {50.0, 400.0, 3000.0, 5000.0, 7000.0, 9000.0}};
    return s;
}

Scenario figure3() {
    Scenario s = figure1();
    s.name = "fig3";
    s.arc.theta_law = ConstantTheta{2e-4};
    s.arc.k = 0.5;
    s.circuit.f = 400.0;
    s.sweep = SweepSpec{SweepAxis::f, {400.0, 3000.0, 5000.0, 7000.0, 9000.0, 11000.0}};
    return s;
}

}  // namespace

void Scenario::validate() const {
    arc.validate();
    circuit.validate();
    integrator.validate();
    settle.validate();
    if (!(initial.g > 0.0)) {
        throw Error(ErrorCode::validation_error, "invariant violated: initial.g > 0");
    }
    if (sweep) {
        if (sweep->values.empty()) {
            throw Error(ErrorCode::validation_error, "invariant violated: sweep.values not empty");
        }
        for (double v : sweep->values) {
            ArcParameters a = arc;
            CircuitParameters c = circuit;
            apply_axis(sweep->axis, v, a, c);
            a.validate();
            c.validate();
        }
    }
}

AnalysisOptions Scenario::analysis_options(std::size_t jobs) const {
    AnalysisOptions o;
    o.integrator = integrator;
    o.settle = settle;
    o.initial = initial;
    o.jobs = jobs;
    return o;
}

std::span<const std::string_view> preset_names() noexcept { return kPresets; }

Scenario preset(std::string_view name) {
    if (name == "fig1") return figure1();
    if (name == "fig2a") {
        Scenario s = figure1();
        s.name = "fig2a";
        s.sweep = SweepSpec{SweepAxis::i0, {1.2, 2.4, 4.8, 9.6, 16.8}};
        return s;
    }
    if (name == "fig3") return figure3();
    if (name == "fig4a") {
        Scenario s = figure1();
        s.name = "fig4a";
        s.sweep = SweepSpec{SweepAxis::k, {0.0, 0.3, 1.0, 2.0, 5.0}};
        return s;
    }
    if (name == "fig4b") {
        // The printed list has 5*10^4 H as its third entry; 5*10^-4 H is used.
        Scenario s = figure1();
        s.name = "fig4b";
        s.sweep = SweepSpec{SweepAxis::l, {5e-5, 1e-4, 5e-4, 1e-3, 5e-3}};
        return s;
    }
    if (name == "fig4c") {
        Scenario s = figure1();
        s.name = "fig4c";
        s.sweep = SweepSpec{SweepAxis::u_c, {1.0, 5.0, 10.0, 25.0, 50.0}};
        return s;
    }
    if (name == "table1") {
        Scenario s = figure3();
        s.name = "table1";
        s.circuit.f = 3000.0;
        s.sweep = SweepSpec{SweepAxis::f, {3000.0, 5000.0, 7000.0, 9000.0, 11000.0}};
        return s;
    }
    throw Error(ErrorCode::invalid_argument, "unknown preset '" + std::string(name) + "'");
}

void set_scenario_value(Scenario& s, std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    auto num = [&] { return parse_double(key, value); };

    if (key == "scenario.base") {
        try {
            s = preset(value);
        } catch (const Error& e) {
            throw Error(ErrorCode::parse_error, e.what());
        }
    } else if (key == "scenario.name") {
        s.name = std::string(value);
    } else if (key == "arc.g_min") {
        s.arc.g_min = num();
    } else if (key == "arc.i0") {
        s.arc.i0 = num();
    } else if (key == "arc.k") {
        s.arc.k = num();
    } else if (key == "arc.u_c") {
        s.arc.u_c = num();
    } else if (key == "arc.p_m") {
        s.arc.p_m = num();
    } else if (key == "arc.theta_law") {
        if (value == "constant") {
            if (!std::holds_alternative<ConstantTheta>(s.arc.theta_law)) s.arc.theta_law = ConstantTheta{};
        } else if (value == "current_dependent") {
            if (!std::holds_alternative<CurrentDependentTheta>(s.arc.theta_law)) {
                s.arc.theta_law = CurrentDependentTheta{};
            }
        } else {
            bad_value(key, value, "constant | current_dependent");
        }
    } else if (key == "arc.theta") {
        constant_theta(s, key).theta = num();
    } else if (key == "arc.theta0") {
        dependent_theta(s, key).theta0 = num();
    } else if (key == "arc.theta1") {
        dependent_theta(s, key).theta1 = num();
    } else if (key == "arc.alpha") {
        dependent_theta(s, key).alpha = num();
    } else if (key == "arc.sigma_law") {
        if (value == "gaussian") {
            s.arc.sigma_law = GaussianSigma{};
        } else if (value == "power_exp") {
            if (!std::holds_alternative<PowerExpSigma>(s.arc.sigma_law)) s.arc.sigma_law = PowerExpSigma{};
        } else if (value == "shielded_exp") {
            if (!std::holds_alternative<ShieldedExpSigma>(s.arc.sigma_law)) {
                s.arc.sigma_law = ShieldedExpSigma{};
            }
        } else if (value == "logistic") {
            if (!std::holds_alternative<LogisticSigma>(s.arc.sigma_law)) s.arc.sigma_law = LogisticSigma{};
        } else {
            bad_value(key, value, "gaussian | power_exp | shielded_exp | logistic");
        }
    } else if (key == "arc.sigma_a") {
        if (auto* p = std::get_if<PowerExpSigma>(&s.arc.sigma_law)) {
            p->a = num();
        } else {
            sigma_as<ShieldedExpSigma>(s, key).a = num();
        }
    } else if (key == "arc.sigma_delta") {
        sigma_as<ShieldedExpSigma>(s, key).delta = num();
    } else if (key == "arc.sigma_beta") {
        sigma_as<LogisticSigma>(s, key).beta = num();
    } else if (key == "circuit.r") {
        s.circuit.r = num();
    } else if (key == "circuit.l") {
        s.circuit.l = num();
    } else if (key == "circuit.e_m") {
        s.circuit.e_m = num();
    } else if (key == "circuit.f") {
        s.circuit.f = num();
    } else if (key == "integrator.abs_tol") {
        s.integrator.abs_tol = num();
    } else if (key == "integrator.rel_tol") {
        s.integrator.rel_tol = num();
    } else if (key == "integrator.max_step") {
        s.integrator.max_step = num();
    } else if (key == "integrator.initial_step") {
        s.integrator.initial_step = num();
    } else if (key == "integrator.max_steps") {
        s.integrator.max_steps = parse_count(key, value);
    } else if (key == "settle.tol") {
        s.settle.tol = num();
    } else if (key == "settle.min_periods") {
        s.settle.min_periods = parse_count(key, value);
    } else if (key == "settle.max_periods") {
        s.settle.max_periods = parse_count(key, value);
    } else if (key == "initial.i") {
        s.initial.i = num();
    } else if (key == "initial.g") {
        s.initial.g = num();
    } else if (key == "sweep.axis") {
        if (value == "none") {
            s.sweep.reset();
            return;
        }
        const auto axis = parse_sweep_axis(value);
        if (!axis) bad_value(key, value, "f | K | L | U_C | I0 | none");
        sweep_of(s).axis = *axis;
    } else if (key == "sweep.values") {
        std::vector<double> vals;
        for (auto item : split_list(value)) vals.push_back(parse_double(key, item));
        sweep_of(s).values = std::move(vals);
    } else if (key == "output.directory") {
        if (value.empty()) bad_value(key, value, "a directory path");
        s.output.directory = std::string(value);
    } else if (key == "output.formats") {
        OutputSpec o = s.output;
        o.csv = false;
        o.summary = false;
        for (auto item : split_list(value)) {
            if (item == "csv") {
                o.csv = true;
            } else if (item == "summary") {
                o.summary = true;
            } else if (item != "none") {
                bad_value(key, item, "csv | summary");
            }
        }
        s.output = o;
    } else {
        throw Error(ErrorCode::parse_error, "unknown key '" + std::string(key) + "'");
    }
}

Scenario parse_scenario(std::string_view text, std::string_view origin) {
    Scenario s = preset("fig1");
    s.name = "custom";
    s.sweep.reset();
    std::size_t line_no = 0;
    bool seen_key = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        auto fail = [&](const std::string& msg) -> Error {
            return Error(ErrorCode::parse_error,
                         std::string(origin) + ":" + std::to_string(line_no) + ": " + msg);
        };
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw fail("expected 'section.key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.find('.') == std::string_view::npos) throw fail("key must be 'section.key'");
        if (key == "scenario.base" && seen_key) {
            throw fail("scenario.base must be the first key");
        }
        seen_key = true;
        try {
            set_scenario_value(s, key, value);
        } catch (const Error& e) {
            throw fail(e.what());
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string format_scenario(const Scenario& s) {
    using csv::format_double;
    std::ostringstream os;
    auto kv = [&](std::string_view key, const std::string& value) {
        os << key << " = " << value << '\n';
    };
    kv("scenario.name", s.name);
    kv("arc.g_min", format_double(s.arc.g_min));
    kv("arc.i0", format_double(s.arc.i0));
    kv("arc.k", format_double(s.arc.k));
    kv("arc.u_c", format_double(s.arc.u_c));
    kv("arc.p_m", format_double(s.arc.p_m));
    if (const auto* c = std::get_if<ConstantTheta>(&s.arc.theta_law)) {
        kv("arc.theta_law", "constant");
        kv("arc.theta", format_double(c->theta));
    } else {
        const auto& d = std::get<CurrentDependentTheta>(s.arc.theta_law);
        kv("arc.theta_law", "current_dependent");
        kv("arc.theta0", format_double(d.theta0));
        kv("arc.theta1", format_double(d.theta1));
        kv("arc.alpha", format_double(d.alpha));
    }
    if (std::holds_alternative<GaussianSigma>(s.arc.sigma_law)) {
        kv("arc.sigma_law", "gaussian");
    } else if (const auto* p = std::get_if<PowerExpSigma>(&s.arc.sigma_law)) {
        kv("arc.sigma_law", "power_exp");
        kv("arc.sigma_a", format_double(p->a));
    } else if (const auto* q = std::get_if<ShieldedExpSigma>(&s.arc.sigma_law)) {
        kv("arc.sigma_law", "shielded_exp");
        kv("arc.sigma_a", format_double(q->a));
        kv("arc.sigma_delta", format_double(q->delta));
    } else {
        kv("arc.sigma_law", "logistic");
        kv("arc.sigma_beta", format_double(std::get<LogisticSigma>(s.arc.sigma_law).beta));
    }
    kv("circuit.r", format_double(s.circuit.r));
    kv("circuit.l", format_double(s.circuit.l));
    kv("circuit.e_m", format_double(s.circuit.e_m));
    kv("circuit.f", format_double(s.circuit.f));
    kv("integrator.abs_tol", format_double(s.integrator.abs_tol));
    kv("integrator.rel_tol", format_double(s.integrator.rel_tol));
    kv("integrator.max_step", format_double(s.integrator.max_step));
    kv("integrator.initial_step", format_double(s.integrator.initial_step));
    kv("integrator.max_steps", std::to_string(s.integrator.max_steps));
    kv("settle.tol", format_double(s.settle.tol));
    kv("settle.min_periods", std::to_string(s.settle.min_periods));
    kv("settle.max_periods", std::to_string(s.settle.max_periods));
    kv("initial.i", format_double(s.initial.i));
    kv("initial.g", format_double(s.initial.g));
    if (s.sweep) {
        kv("sweep.axis", std::string(to_string(s.sweep->axis)));
        std::string vals;
        for (std::size_t j = 0; j < s.sweep->values.size(); ++j) {
            if (j > 0) vals += ", ";
            vals += format_double(s.sweep->values[j]);
        }
        kv("sweep.values", vals);
    } else {
        kv("sweep.axis", "none");
    }
    kv("output.directory", s.output.directory);
    std::string formats;
    if (s.output.csv) formats = "csv";
    if (s.output.summary) formats += formats.empty() ? "summary" : ",summary";
    if (formats.empty()) formats = "none";
    kv("output.formats", formats);
    return os.str();
}

}  // namespace arcmem
