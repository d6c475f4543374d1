// Acceptance checks. Usage: arcmem_acceptance [AC1 ... AC8]
// Prints one PASS/FAIL line per criterion; exit status 1 if any selected
// criterion fails.

#include "arcmem/analysis.hpp"
#include "arcmem/csv.hpp"
#include "arcmem/runner.hpp"
#include "arcmem/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace arcmem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string summary;
};

// Collects detail lines and the overall verdict of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            failures_.push_back(what);
        }
    }
    void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }
    [[nodiscard]] Outcome done(const std::string& summary) const {
        std::string s = summary;
        for (const auto& f : failures_) s += "; FAILED: " + f;
        return {pass_, s};
    }

private:
    bool pass_ = true;
    std::vector<std::string> failures_;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

AnalysisOptions options_of(const Scenario& s) { return s.analysis_options(1); }

Trajectory settle(const Scenario& s, const CircuitParameters& c) {
    auto r = settle_to_periodic(s.arc, c, s.initial, s.integrator, s.settle);
    r.require_converged();
    return std::move(r.period);
}

double max_abs_voltage(const Trajectory& p) {
    double m = 0.0;
    for (int k = 0; k < 20000; ++k) m = std::max(m, std::abs(p.voltage_at(p.span() * k / 20000.0)));
    for (double t : p.node_times()) m = std::max(m, std::abs(p.voltage_at(t)));
    return m;
}

// --- criteria ---------------------------------------------------------------

Outcome ac1() {
    Check ck;
    const auto sc = preset("table1");
    const double paper_im[] = {3.821, 2.264, 1.568, 1.152, 0.790};
    const auto start = std::chrono::steady_clock::now();
    const auto rows = table1_reproduction(sc.arc, sc.circuit, options_of(sc), sc.sweep->values);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto& r = rows[j];
        const double tol = r.f == 3000.0 ? 0.10 : 0.05;
        const double im_err = std::abs(r.i_m - paper_im[j]) / paper_im[j];
        ck.note(fmt("f=%5.0f Hz  I_m=%.4f (ref %.3f, err %.2f%%)  g_mean=%.4f  estimate=%.4f  "
                    "err %.2f%%  limit %.0f%%",
                    r.f, r.i_m, paper_im[j], 100 * im_err, r.g_mean, r.hf_estimate,
                    100 * r.rel_error, 100 * tol));
        ck.expect(r.ok, fmt("%.0f Hz did not settle: %s", r.f, r.error.c_str()));
        ck.expect(im_err <= tol, fmt("I_m at %.0f Hz off by %.2f%%", r.f, 100 * im_err));
        ck.expect(r.rel_error <= tol,
                  fmt("g_mean at %.0f Hz off the estimate by %.2f%%", r.f, 100 * r.rel_error));
    }
    ck.expect(rows.size() == 5, "expected 5 rows");
    ck.expect(secs < 30.0, fmt("runtime %.1f s", secs));
    return ck.done(fmt("Table 1 reproduction, %zu rows in %.2f s", rows.size(), secs));
}

Outcome ac2() {
    Check ck;
    const auto sc = preset("fig1");
    const auto period = settle(sc, sc.circuit);
    const auto pins = pinch_points(period);
    ck.expect(pins.size() == 2, fmt("%zu pinch points", pins.size()));
    if (pins.size() == 2) {
        const double spread = std::abs(pins[0].slope - pins[1].slope) /
                              std::min(pins[0].slope, pins[1].slope);
        ck.note(fmt("slopes %.9g and %.9g Ohm, spread %.3g", pins[0].slope, pins[1].slope, spread));
        ck.note(fmt("concavity signs %+d %+d", pins[0].concavity_sign, pins[1].concavity_sign));
        ck.expect(spread <= 0.01, "slopes differ by more than 1%");
        for (const auto& p : pins) {
            ck.expect(std::abs(p.slope * p.g_at - 1.0) <= 4 * std::numeric_limits<double>::epsilon(),
                      "slope is not 1/g(t*)");
        }
        ck.expect(pins[0].concavity_sign != 0 && pins[0].concavity_sign == -pins[1].concavity_sign,
                  "concavity signs are not opposite");
    }
    return ck.done("fingerprint 1 at fig1 (50 Hz)");
}

Outcome ac3() {
    Check ck;
    std::size_t points = 0;
    double worst_ratio = 0.0;
    for (const char* name : {"fig1", "table1"}) {
        const auto sc = preset(name);
        std::vector<double> freqs = sc.sweep->values;
        if (std::find(freqs.begin(), freqs.end(), sc.circuit.f) == freqs.end())
            freqs.push_back(sc.circuit.f);
        for (double f : freqs) {
            CircuitParameters c = sc.circuit;
            c.f = f;
            const auto period = settle(sc, c);
            const double umax = max_abs_voltage(period);
            for (const auto& p : pinch_points(period)) {
                const double ratio = std::abs(period.voltage_at(p.t_star)) / umax;
                worst_ratio = std::max(worst_ratio, ratio);
                ck.expect(ratio <= 1e-3, fmt("%s %.0f Hz: |u(t*)|/max|u| = %.3g", name, f, ratio));
                ck.expect(p.g_at >= sc.arc.g_min, fmt("%s %.0f Hz: g(t*) below G_min", name, f));
            }
            ++points;
        }
    }
    return ck.done(fmt("fingerprint 2 on %zu operating points, worst |u(t*)|/max|u| = %.3g", points,
                       worst_ratio));
}

Outcome ac4() {
    Check ck;
    const auto sc = preset("fig3");
    const double freqs[] = {400.0, 3000.0, 5000.0, 7000.0, 9000.0, 11000.0};
    const auto pts = parameter_sweep(sc.arc, sc.circuit, SweepAxis::f, freqs, options_of(sc), 0);
    std::vector<double> area;
    std::vector<double> metric;
    for (const auto& p : pts) {
        ck.expect(p.point.ok, fmt("%.0f Hz failed: %s", p.value, p.point.error.c_str()));
        area.push_back(std::abs(p.point.metrics.lobe_area));
        metric.push_back(p.point.metrics.loop_width_metric);
        ck.note(fmt("f=%5.0f Hz  |A|=%.6g  metric=%.6g", p.value, area.back(), metric.back()));
    }
    for (std::size_t j = 1; j < area.size(); ++j) {
        ck.expect(area[j] < area[j - 1], fmt("lobe area not decreasing at %.0f Hz", freqs[j]));
        ck.expect(metric[j] < metric[j - 1], fmt("metric not decreasing at %.0f Hz", freqs[j]));
    }
    ck.expect(area.size() == 6 && area[5] < 0.1 * area[0], "A(11 kHz) >= 0.1 A(0.4 kHz)");
    return ck.done(fmt("fingerprint 3 over 0.4-11 kHz, A(11k)/A(0.4k) = %.4f",
                       area.size() == 6 ? area[5] / area[0] : NAN));
}

Outcome ac5() {
    Check ck;
    double worst = 0.0;
    auto one = [&](const Scenario& sc, const CircuitParameters& c, const char* label) {
        const auto period = settle(sc, c);
        const auto pins = pinch_points(period);
        const double a_time = lobe_area(period, pins.front().t_star);
        const double a_fourier = area_from_fourier(fourier_coefficients(period, 50), c);
        const double rel = std::abs(a_time - a_fourier) / std::abs(a_time);
        worst = std::max(worst, rel);
        ck.note(fmt("%s f=%.0f Hz  time-domain %.9g  Fourier %.9g  rel %.2e", label, c.f, a_time,
                    a_fourier, rel));
        ck.expect(rel <= 1e-3, fmt("%s %.0f Hz disagree by %.2e", label, c.f, rel));
    };
    const auto fig1 = preset("fig1");
    one(fig1, fig1.circuit, "fig1");
    const auto t1 = preset("table1");
    for (double f : t1.sweep->values) {
        CircuitParameters c = t1.circuit;
        c.f = f;
        one(t1, c, "table1");
    }
    return ck.done(fmt("area oracle equivalence, worst relative gap %.2e", worst));
}

Outcome ac6() {
    Check ck;
    IntegratorConfig cfg;  // 1e-10 / 1e-10

    // (a) constant conductance closing the RL circuit
    {
        const CircuitParameters c;
        const double g0 = 0.5;
        const System sys = [&](double t, const ArcState& s) {
            return ArcDerivative{(c.source_voltage(t) - c.r * s.i - s.i / g0) / c.l, 0.0};
        };
        const auto s = settle_to_periodic(sys, c.period(), {0.0, g0}, cfg, {});
        const double w = 2.0 * pi * c.f;
        const double z = c.r + 1.0 / g0;
        const double amp = c.e_m / std::sqrt(z * z + w * w * c.l * c.l);
        const double phi = std::atan2(w * c.l, z);
        double err = 0.0;
        for (int k = 0; k <= 4000; ++k) {
            const double t = c.period() * k / 4000.0;
            err = std::max(err, std::abs(s.period.state_at(t).i - amp * std::sin(w * t - phi)));
        }
        ck.note(fmt("(a) linear steady state: max |i - analytic| / amplitude = %.3g", err / amp));
        ck.expect(s.report.converged && err / amp <= 1e-8, "(a) linear steady state");
    }
    // (b) Mayr decay at zero current
    {
        const ArcParameters arc;
        const double th = 4e-4;
        const System sys = [&](double, const ArcState& s) {
            return ArcDerivative{0.0, mayr_rhs(arc, 0.0, s.g)};
        };
        const auto traj = integrate(sys, {0.0, arc.g_min + 1.0}, 0.0, 6.0 * th, cfg);
        double err = 0.0;
        for (int k = 0; k <= 3000; ++k) {
            const double t = 6.0 * th * k / 3000.0;
            const double g = arc.g_min + std::exp(-t / th);
            err = std::max(err, std::abs(traj.state_at(t).g - g) / g);
        }
        ck.note(fmt("(b) Mayr decay: max relative error %.3g", err));
        ck.expect(err <= 1e-8, "(b) Mayr decay");
    }
    // (c) closed-form Mayr conductance under a sinusoidal current
    {
        ArcParameters arc;
        arc.theta_law = ConstantTheta{2e-4};
        const double im = 3.821;
        const double f = 3000.0;
        const double period = 1.0 / f;
        const System sys = [&](double t, const ArcState& s) {
            return ArcDerivative{0.0, mayr_rhs(arc, im * std::sin(2.0 * pi * f * t), s.g)};
        };
        IntegratorConfig c2 = cfg;
        c2.max_step = period / 200.0;
        const int n = 25;
        const auto traj = integrate(sys, {0.0, 1.0}, 0.0, n * period, c2);
        double err = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double t = (n - 1) * period + period * k / 2000.0;
            const double g = traj.state_at(t).g;
            err = std::max(err, std::abs(mayr_sinusoidal_g(arc, im, f, t) - g) / g);
        }
        ck.note(fmt("(c) Mayr closed form vs integration over the last period: max relative error %.3g",
                    err));
        ck.expect(err <= 1e-4, "(c) Mayr closed form");
    }
    return ck.done("integrator correctness (a)-(c)");
}

Outcome ac7() {
    Check ck;
    const auto sc = preset("fig1");
    const auto period = settle(sc, sc.circuit);
    const double T = sc.circuit.period();
    double imax = 0.0;
    double gmax = 0.0;
    double di = 0.0;
    double dg = 0.0;
    for (int k = 0; k <= 4000; ++k) {
        const double t = 0.5 * T * k / 4000.0;
        const auto a = period.state_at(t);
        const auto b = period.state_at(t + 0.5 * T);
        imax = std::max({imax, std::abs(a.i), std::abs(b.i)});
        gmax = std::max({gmax, a.g, b.g});
        di = std::max(di, std::abs(a.i + b.i));
        dg = std::max(dg, std::abs(a.g - b.g));
    }
    ck.note(fmt("max|i(t+T/2)+i(t)|/max|i| = %.3g, max|g(t+T/2)-g(t)|/max g = %.3g", di / imax,
                dg / gmax));
    ck.expect(di / imax <= 1e-6, "current half-wave symmetry");
    ck.expect(dg / gmax <= 1e-6, "conductance half-wave symmetry");

    const auto sp = fourier_coefficients(period, 20);
    const double fund = std::hypot(sp.c[0], sp.d[0]);
    double worst_even = 0.0;
    for (std::size_t k = 2; k <= 20; k += 2)
        worst_even = std::max(worst_even, std::hypot(sp.c[k - 1], sp.d[k - 1]) / fund);
    ck.note(fmt("largest even current harmonic / fundamental = %.3g", worst_even));
    ck.expect(worst_even <= 1e-4, "even harmonics");

    const auto pins = pinch_points(period);
    if (pins.size() == 2) {
        const double a0 = lobe_area(period, pins[0].t_star);
        const double a1 = lobe_area(period, pins[1].t_star);
        const double rel = std::abs(std::abs(a0) - std::abs(a1)) / std::abs(a0);
        ck.note(fmt("half-period lobes %.10g and %.10g, relative gap %.3g", a0, a1, rel));
        ck.expect(rel <= 1e-6, "half-period lobe magnitudes");
    } else {
        ck.expect(false, "expected 2 pinch points");
    }
    return ck.done("half-wave symmetry at fig1");
}

Outcome ac8() {
    Check ck;
    const auto root = std::filesystem::temp_directory_path() / "arcmem_acceptance_ac8";
    std::filesystem::remove_all(root);
    std::size_t files = 0;
    for (const char* name : {"fig2a", "fig4a", "fig4b", "fig4c"}) {
        const auto sc = preset(name);
        RunOptions ro;
        ro.out_dir = root / name;
        ro.jobs = 1;
        std::ostringstream log;
        const auto code = run_command(Command::sweep, sc, ro, log);
        ck.expect(code == ExitCode::success, fmt("%s exit code %d", name, static_cast<int>(code)));

        std::ifstream metrics(ro.out_dir / "sweep_metrics.csv");
        std::string line;
        std::getline(metrics, line);
        const auto header = csv::split_record(line);
        std::size_t rows = 0;
        while (std::getline(metrics, line)) {
            const auto fields = csv::split_record(line);
            ck.expect(fields.size() == header.size(), fmt("%s malformed metrics row", name));
            ck.expect(fields.size() > 2 && fields[2] == "ok", fmt("%s point %zu not ok", name, rows));
            ++rows;
        }
        ck.expect(rows == sc.sweep->values.size(), fmt("%s has %zu metric rows", name, rows));

        for (std::size_t j = 0; j < sc.sweep->values.size(); ++j) {
            const auto path = ro.out_dir / ("sweep_" + std::to_string(j) + "_waveform.csv");
            std::ifstream wf(path);
            std::getline(wf, line);
            ck.expect(line == "t,i,g,u,E", fmt("%s bad waveform header", path.filename().c_str()));
            std::vector<double> ui;
            double imax = 0.0;
            double umax = 0.0;
            std::size_t samples = 0;
            while (std::getline(wf, line)) {
                const auto f = csv::split_record(line);
                if (f.size() != 5) {
                    ck.expect(false, fmt("%s malformed row", path.filename().c_str()));
                    break;
                }
                const double i = std::stod(f[1]);
                const double u = std::stod(f[3]);
                imax = std::max(imax, std::abs(i));
                umax = std::max(umax, std::abs(u));
                ui.push_back(u * i);
                ++samples;
            }
            const double eps = 1e-12 * imax * umax;
            std::size_t bad = 0;
            for (double p : ui) bad += p < -eps ? 1 : 0;
            ck.expect(samples == 2000, fmt("%s has %zu samples", path.filename().c_str(), samples));
            ck.expect(bad == 0, fmt("%s %zu samples outside quadrants I/III", name, bad));
            ++files;
        }
        ck.note(fmt("%s: %zu points", name, rows));
    }
    return ck.done(fmt("parameter sweep smoke, %zu waveform files checked", files));
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1", {"Table 1 reproduction", ac1}},
        {"AC2", {"Fingerprint 1", ac2}},
        {"AC3", {"Fingerprint 2", ac3}},
        {"AC4", {"Fingerprint 3", ac4}},
        {"AC5", {"Oracle equivalence", ac5}},
        {"AC6", {"Integrator correctness", ac6}},
        {"AC7", {"Symmetry suite", ac7}},
        {"AC8", {"Parameter-sweep smoke", ac8}},
    };
    std::vector<std::string> selected(argv + 1, argv + argc);
    if (selected.empty())
        for (const auto& [k, v] : criteria) selected.push_back(k);

    int failed = 0;
    for (const auto& id : selected) {
        const auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::printf("%s FAIL unknown criterion\n", id.c_str());
            ++failed;
            continue;
        }
        Outcome out;
        try {
            out = it->second.second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s %s: %s\n", id.c_str(), out.pass ? "PASS" : "FAIL",
                    it->second.first.c_str(), out.summary.c_str());
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
