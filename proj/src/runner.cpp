#include "arcmem/runner.hpp"

#include "arcmem/analysis.hpp"
#include "arcmem/csv.hpp"
#include "arcmem/error.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace arcmem {

namespace {

using csv::format_double;

struct Outputs {
    std::filesystem::path dir;
    bool csv = true;
    bool summary = true;

    void table(const std::string& name, const csv::Table& t) const {
        if (csv) t.write(dir / name);
    }

    void text(const std::string& name, const std::string& body) const {
        if (!summary) return;
        std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
        if (!os) throw Error(ErrorCode::io_error, "cannot open " + (dir / name).string());
        os << body;
        if (!os) throw Error(ErrorCode::io_error, "write failed for " + (dir / name).string());
    }
};

csv::Table waveform_table(const std::vector<WaveSample>& samples) {
    csv::Table t({"t", "i", "g", "u", "E"});
    for (const auto& s : samples) {
        t.add_row({format_double(s.t), format_double(s.i), format_double(s.g), format_double(s.u),
                   format_double(s.e)});
    }
    return t;
}

std::string status_of(bool ok) { return ok ? "ok" : "failed"; }

ExitCode simulate(const Scenario& sc, const RunOptions& ro, const Outputs& out, std::ostream& log) {
    auto settled = settle_to_periodic(sc.arc, sc.circuit, sc.initial, sc.integrator, sc.settle);
    const auto& rep = settled.report;
    const auto& stats = settled.period.stats();

    out.table("waveform.csv", waveform_table(sample_waveform(settled.period, sc.circuit)));
    if (ro.raw_steps) out.table("steps.csv", waveform_table(node_samples(settled.period, sc.circuit)));

    csv::Table report({"periods_integrated", "converged", "period_map_residual", "accepted_steps",
                       "rejected_steps", "rhs_evaluations"});
    report.add_row({std::to_string(rep.periods_integrated), rep.converged ? "true" : "false",
                    format_double(rep.period_map_residual), std::to_string(stats.accepted),
                    std::to_string(stats.rejected), std::to_string(stats.rhs_evaluations)});
    out.table("settle_report.csv", report);

    std::ostringstream s;
    s << std::setprecision(6);
    s << "scenario: " << sc.name << "\n"
      << "frequency: " << sc.circuit.f << " Hz\n"
      << "periods integrated: " << rep.periods_integrated << "\n"
      << "converged: " << (rep.converged ? "yes" : "no") << "\n"
      << "period-map residual: " << rep.period_map_residual << "\n";
    if (rep.converged) {
        const LoopMetrics m = loop_metrics(settled.period);
        s << "peak current: " << m.i_peak << " A\n"
          << "mean conductance: " << m.g_mean << " S\n"
          << "conductance range: [" << m.g_min_observed << ", " << m.g_max_observed << "] S\n"
          << "lobe area: " << m.lobe_area << " V*A\n"
          << "single-valuedness metric: " << m.loop_width_metric << "\n";
    }
    out.text("simulate_summary.txt", s.str());
    log << s.str();
    return rep.converged ? ExitCode::success : ExitCode::numeric;
}

ExitCode fingerprints(const Scenario& sc, const RunOptions& ro, const Outputs& out,
                      std::ostream& log) {
    std::vector<double> freqs{sc.circuit.f};
    if (sc.sweep && sc.sweep->axis == SweepAxis::f) {
        freqs.insert(freqs.end(), sc.sweep->values.begin(), sc.sweep->values.end());
    }
    const auto rep =
        fingerprint_report(sc.arc, sc.circuit, freqs, FingerprintTolerances{}, sc.analysis_options(ro.jobs));

    csv::Table verdicts({"fingerprint", "verdict", "metric", "value"});
    verdicts.add_row({"1", rep.fp1_pass ? "pass" : "fail", "slope_spread",
                      format_double(rep.fp1_slope_spread)});
    verdicts.add_row({"2", rep.fp2_pass ? "pass" : "fail", "max_voltage_ratio",
                      format_double(rep.fp2_max_voltage_ratio)});
    verdicts.add_row({"2", rep.fp2_pass ? "pass" : "fail", "min_g_at_crossing",
                      format_double(rep.fp2_min_g_at_crossing)});
    verdicts.add_row({"2", rep.fp2_pass ? "pass" : "fail", "max_crossing_offset",
                      format_double(rep.fp2_max_crossing_offset)});
    verdicts.add_row({"3", std::string(to_string(rep.fp3)), "sweep_points",
                      std::to_string(rep.fp3_evidence.size())});
    out.table("fingerprints.csv", verdicts);

    csv::Table pins({"t_star", "g_at", "slope", "concavity_sign", "di_dt_at", "dg_dt_at"});
    for (const auto& p : rep.pinch_points) {
        pins.add_row({format_double(p.t_star), format_double(p.g_at), format_double(p.slope),
                      std::to_string(p.concavity_sign), format_double(p.di_dt_at),
                      format_double(p.dg_dt_at)});
    }
    out.table("pinch_points.csv", pins);

    csv::Table sweep({"f", "status", "lobe_area", "loop_width_metric", "g_mean", "i_peak", "error"});
    for (const auto& e : rep.fp3_evidence) {
        sweep.add_row({format_double(e.f), status_of(e.ok), format_double(e.lobe_area),
                       format_double(e.loop_width_metric), format_double(e.g_mean),
                       format_double(e.i_peak), e.error});
    }
    out.table("fingerprint_sweep.csv", sweep);

    std::ostringstream s;
    s << std::setprecision(6);
    s << "scenario: " << sc.name << "\n";
    if (!rep.error.empty()) s << "operating point failed: " << rep.error << "\n";
    s << "fingerprint 1 (pinched hysteresis): " << (rep.fp1_pass ? "pass" : "fail") << " ("
      << rep.pinch_points.size() << " pinch points, slope spread " << rep.fp1_slope_spread << ")\n";
    for (const auto& p : rep.pinch_points) {
        s << "  t* = " << p.t_star << " s  g = " << p.g_at << " S  slope = " << p.slope
          << " Ohm  concavity " << (p.concavity_sign > 0 ? "+" : (p.concavity_sign < 0 ? "-" : "0"))
          << "\n";
    }
    s << "fingerprint 2 (coincident zeros): " << (rep.fp2_pass ? "pass" : "fail")
      << " (max |u(t*)|/max|u| = " << rep.fp2_max_voltage_ratio
      << ", min g(t*) = " << rep.fp2_min_g_at_crossing << " S)\n";
    s << "fingerprint 3 (loop collapse with f): " << to_string(rep.fp3) << "\n";
    for (const auto& e : rep.fp3_evidence) {
        s << "  f = " << e.f << " Hz  ";
        if (e.ok) {
            s << "lobe area = " << e.lobe_area << "  metric = " << e.loop_width_metric
              << "  mean g = " << e.g_mean << "\n";
        } else {
            s << "failed: " << e.error << "\n";
        }
    }
    out.text("fingerprints_summary.txt", s.str());
    log << s.str();

    if (!rep.error.empty()) return ExitCode::numeric;
    if (ro.assert_fingerprints && (!rep.fp1_pass || !rep.fp2_pass || rep.fp3 == Verdict::fail)) {
        return ExitCode::fingerprint;
    }
    return ExitCode::success;
}

ExitCode sweep(const Scenario& sc, const RunOptions& ro, const Outputs& out, std::ostream& log) {
    if (!sc.sweep) {
        throw Error(ErrorCode::validation_error, "the sweep command needs sweep.axis and sweep.values");
    }
    const auto points = parameter_sweep(sc.arc, sc.circuit, sc.sweep->axis, sc.sweep->values,
                                        sc.analysis_options(ro.jobs));
    const std::string axis(to_string(sc.sweep->axis));

    csv::Table metrics({"axis", "value", "status", "lobe_area", "loop_width_metric", "i_peak",
                        "g_mean", "g_min_observed", "g_max_observed", "periods_integrated",
                        "period_map_residual", "waveform_file", "error"});
    std::size_t failures = 0;
    std::ostringstream s;
    s << std::setprecision(6) << "scenario: " << sc.name << "\nsweep over " << axis << "\n";
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto& sp = points[j];
        const auto& m = sp.point.metrics;
        std::string file;
        if (sp.point.ok) {
            file = "sweep_" + std::to_string(j) + "_waveform.csv";
            out.table(file, waveform_table(sp.waveform));
        } else {
            ++failures;
        }
        metrics.add_row({axis, format_double(sp.value), status_of(sp.point.ok),
                         format_double(m.lobe_area), format_double(m.loop_width_metric),
                         format_double(m.i_peak), format_double(m.g_mean),
                         format_double(m.g_min_observed), format_double(m.g_max_observed),
                         std::to_string(sp.point.settle.periods_integrated),
                         format_double(sp.point.settle.period_map_residual), file, sp.point.error});
        s << "  " << axis << " = " << sp.value << ": ";
        if (sp.point.ok) {
            s << "lobe area = " << m.lobe_area << "  metric = " << m.loop_width_metric
              << "  i_peak = " << m.i_peak << "\n";
        } else {
            s << "failed: " << sp.point.error << "\n";
        }
    }
    out.table("sweep_metrics.csv", metrics);
    out.text("sweep_summary.txt", s.str());
    log << s.str();
    return failures == points.size() ? ExitCode::numeric : ExitCode::success;
}

ExitCode table1(const Scenario& sc, const RunOptions& ro, const Outputs& out, std::ostream& log) {
    std::vector<double> freqs(std::begin(table1_frequencies), std::end(table1_frequencies));
    if (sc.sweep && sc.sweep->axis == SweepAxis::f) freqs = sc.sweep->values;
    const auto rows = table1_reproduction(sc.arc, sc.circuit, sc.analysis_options(ro.jobs), freqs);

    csv::Table t({"f_kHz", "I_m", "g_mean", "hf_estimate", "rel_error", "status", "error"});
    std::ostringstream s;
    s << "scenario: " << sc.name << "\n"
      << std::setw(8) << "f [kHz]" << std::setw(12) << "I_m [A]" << std::setw(14) << "g_mean [S]"
      << std::setw(14) << "estimate [S]" << std::setw(12) << "rel. error" << "\n";
    std::size_t failures = 0;
    for (const auto& r : rows) {
        t.add_row({format_double(r.f / 1000.0), format_double(r.i_m), format_double(r.g_mean),
                   format_double(r.hf_estimate), format_double(r.rel_error), status_of(r.ok),
                   r.error});
        if (!r.ok) {
            ++failures;
            s << std::setw(8) << r.f / 1000.0 << "  failed: " << r.error << "\n";
            continue;
        }
        s << std::fixed << std::setprecision(3) << std::setw(8) << r.f / 1000.0
          << std::setprecision(4) << std::setw(12) << r.i_m << std::setw(14) << r.g_mean
          << std::setw(14) << r.hf_estimate << std::setw(12) << r.rel_error << "\n";
        s.unsetf(std::ios::fixed);
    }
    out.table("table1.csv", t);
    out.text("table1_summary.txt", s.str());
    log << s.str();
    return failures == rows.size() ? ExitCode::numeric : ExitCode::success;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) noexcept {
    if (name == "simulate") return Command::simulate;
    if (name == "fingerprints") return Command::fingerprints;
    if (name == "sweep") return Command::sweep;
    if (name == "table1") return Command::table1;
    return std::nullopt;
}

ExitCode run_command(Command command, const Scenario& scenario, const RunOptions& options,
                     std::ostream& log) {
    try {
        scenario.validate();
        Outputs out;
        out.dir = options.out_dir.empty() ? std::filesystem::path(scenario.output.directory)
                                          : options.out_dir;
        out.csv = scenario.output.csv;
        out.summary = scenario.output.summary;
        std::error_code ec;
        std::filesystem::create_directories(out.dir, ec);
        if (ec) throw Error(ErrorCode::io_error, "cannot create " + out.dir.string() + ": " + ec.message());
        {
            std::ofstream os(out.dir / "scenario.txt", std::ios::binary | std::ios::trunc);
            os << format_scenario(scenario);
        }

        switch (command) {
            case Command::simulate: return simulate(scenario, options, out, log);
            case Command::fingerprints: return fingerprints(scenario, options, out, log);
            case Command::sweep: return sweep(scenario, options, out, log);
            case Command::table1: return table1(scenario, options, out, log);
        }
        return ExitCode::validation;
    } catch (const Error& e) {
        log << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return is_numeric_failure(e.code()) ? ExitCode::numeric : ExitCode::validation;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return ExitCode::numeric;
    }
}

}  // namespace arcmem
