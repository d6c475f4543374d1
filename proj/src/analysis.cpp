#include "arcmem/analysis.hpp"

#include "parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace arcmem {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 10>;

/// Full 10-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::array<double, 10> x{};
    std::array<double, 10> w{};

    GaussRule() {
        const auto& ab = Gauss::abscissa();
        const auto& wt = Gauss::weights();
        std::size_t n = 0;
        for (std::size_t j = 0; j < ab.size(); ++j) {
            x[n] = ab[j];
            w[n++] = wt[j];
            x[n] = -ab[j];
            w[n++] = wt[j];
        }
    }
};

const GaussRule& gauss_rule() {
    static const GaussRule rule;
    return rule;
}

template <class F>
double gauss_integrate(F&& f, double a, double b) {
    const auto& r = gauss_rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.x.size(); ++j) acc += r.w[j] * f(mid + half * r.x[j]);
    return acc * half;
}

/// Maps t onto the stored period [t_begin, t_end).
double wrap_time(const Trajectory& traj, double t) {
    const double t0 = traj.t_begin();
    const double T = traj.span();
    double shifted = std::fmod(t - t0, T);
    if (shifted < 0.0) shifted += T;
    return t0 + shifted;
}

/// Pieces of [ta, tb] that never straddle a step boundary of the periodic extension.
std::vector<double> periodic_breakpoints(const Trajectory& traj, double ta, double tb) {
    const double T = traj.span();
    const auto nodes = traj.node_times();
    std::vector<double> out{ta, tb};
    const double first = std::floor((ta - traj.t_begin()) / T) - 1.0;
    const double last = std::ceil((tb - traj.t_begin()) / T) + 1.0;
    for (double m = first; m <= last; m += 1.0) {
        for (double n : nodes) {
            const double t = n + m * T;
            if (t > ta && t < tb) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class F>
double periodic_integral(const Trajectory& traj, double ta, double tb, F&& f) {
    const auto bp = periodic_breakpoints(traj, ta, tb);
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
        acc += gauss_integrate([&](double t) { return f(wrap_time(traj, t)); }, bp[j], bp[j + 1]);
    }
    return acc;
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

double parity_cos(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

// -----------------------------------------------------------------------------
// Pinch geometry
// -----------------------------------------------------------------------------

std::vector<PinchPoint> pinch_points(const Trajectory& steady) {
    const double T = steady.span();
    const auto crossings =
        find_zero_crossings(steady, Signal::current, steady.t_begin(), steady.t_end());
    if (crossings.empty()) {
        throw Error(ErrorCode::no_crossings, "the current never changes sign over the period");
    }
    std::vector<PinchPoint> out;
    out.reserve(crossings.size());
    for (double t : crossings) {
        const ArcState s = steady.state_at(t);
        const ArcDerivative d = steady.derivative_at(t);
        PinchPoint p;
        p.t_star = t;
        p.g_at = s.g;
        p.slope = 1.0 / s.g;
        p.di_dt_at = d.di_dt;
        p.dg_dt_at = d.dg_dt;
        // d2u/di2 = -(dg/dt) / (g^2 di/dt) at i = 0
        const bool degenerate = std::abs(d.dg_dt) * T <= memoryless_threshold * s.g;
        p.concavity_sign = degenerate ? 0 : sign_of(-d.dg_dt / d.di_dt);
        out.push_back(p);
    }
    return out;
}

// -----------------------------------------------------------------------------
// Loop areas
// -----------------------------------------------------------------------------

double line_integral(const std::function<double(double)>& u,
                     const std::function<double(double)>& di_dt,
                     std::span<const double> breakpoints) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
        acc += gauss_integrate([&](double t) { return u(t) * di_dt(t); }, breakpoints[j],
                               breakpoints[j + 1]);
    }
    return acc;
}

double lobe_area(const Trajectory& steady, double t_star) {
    const double half = 0.5 * steady.span();
    return periodic_integral(steady, t_star, t_star + half, [&](double t) {
        return steady.state_at(t).voltage() * steady.derivative_at(t).di_dt;
    });
}

FourierSpectrum fourier_coefficients(const Trajectory& steady, std::size_t k_max) {
    const double T = steady.span();
    const double omega = 2.0 * std::numbers::pi / T;
    FourierSpectrum spec;
    spec.f = 1.0 / T;
    spec.k_max = k_max;
    spec.a.assign(k_max, 0.0);
    spec.b.assign(k_max, 0.0);
    spec.c.assign(k_max, 0.0);
    spec.d.assign(k_max, 0.0);

    const auto& rule = gauss_rule();
    for (const auto& step : steady.steps()) {
        const double half = 0.5 * step.h;
        const double mid = step.t0 + half;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double t = mid + half * rule.x[j];
            const double w = rule.w[j] * half;
            const ArcState s = steady.state_at(t);
            const double u = s.voltage();
            spec.dc_u += w * u;
            spec.dc_i += w * s.i;
            for (std::size_t k = 1; k <= k_max; ++k) {
                const double ph = omega * static_cast<double>(k) * t;
                const double cs = std::cos(ph);
                const double sn = std::sin(ph);
                spec.a[k - 1] += w * u * cs;
                spec.b[k - 1] += w * u * sn;
                spec.c[k - 1] += w * s.i * cs;
                spec.d[k - 1] += w * s.i * sn;
            }
        }
    }
    for (std::size_t k = 0; k < k_max; ++k) {
        spec.a[k] *= 2.0 / T;
        spec.b[k] *= 2.0 / T;
        spec.c[k] *= 2.0 / T;
        spec.d[k] *= 2.0 / T;
    }
    spec.dc_u /= T;
    spec.dc_i /= T;

    constexpr std::size_t n = 2000;
    double err_u = 0.0, err_i = 0.0, sum_u = 0.0, sum_i = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = steady.t_begin() + T * static_cast<double>(j) / n;
        const ArcState s = steady.state_at(t);
        double ru = 0.0, ri = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            const double ph = omega * static_cast<double>(k) * t;
            ru += spec.a[k - 1] * std::cos(ph) + spec.b[k - 1] * std::sin(ph);
            ri += spec.c[k - 1] * std::cos(ph) + spec.d[k - 1] * std::sin(ph);
        }
        const double u = s.voltage();
        err_u += (u - ru) * (u - ru);
        err_i += (s.i - ri) * (s.i - ri);
        sum_u += u * u;
        sum_i += s.i * s.i;
    }
    spec.residual_u = sum_u > 0.0 ? std::sqrt(err_u / sum_u) : 0.0;
    spec.residual_i = sum_i > 0.0 ? std::sqrt(err_i / sum_i) : 0.0;
    return spec;
}

double half_period_product_integral(double p, int k, double q, int l, double f, ProductKind kind) {
    if (k < 1 || l < 1) throw Error(ErrorCode::invalid_argument, "harmonic indices start at 1");
    if (!(f > 0.0)) throw Error(ErrorCode::invalid_argument, "frequency must be positive");
    switch (kind) {
        case ProductKind::sin_sin:
        case ProductKind::cos_cos:
            return k == l ? p * q / (4.0 * f) : 0.0;
        case ProductKind::cos_sin: {
            if (k == l) return 0.0;
            const double kk = k, ll = l;
            return p * q * ll * (1.0 - parity_cos(k) * parity_cos(l)) /
                   (2.0 * std::numbers::pi * f * (ll * ll - kk * kk));
        }
    }
    return 0.0;
}

double area_from_fourier(const FourierSpectrum& spectrum, const CircuitParameters& circuit) {
    const auto& a = spectrum.a;
    const auto& b = spectrum.b;
    const auto& c = spectrum.c;
    const auto& d = spectrum.d;
    const double f = spectrum.f;
    const int n = static_cast<int>(spectrum.k_max);
    using enum ProductKind;

    // u * E, with E = E_m sin(1 * omega t)
    double source = 0.0;
    for (int k = 1; k <= n; ++k) {
        source += half_period_product_integral(a[k - 1], k, circuit.e_m, 1, f, cos_sin);
        source += half_period_product_integral(b[k - 1], k, circuit.e_m, 1, f, sin_sin);
    }

    double uu = 0.0;
    double ui = 0.0;
    for (int k = 1; k <= n; ++k) {
        for (int l = 1; l <= n; ++l) {
            uu += half_period_product_integral(a[k - 1], k, a[l - 1], l, f, cos_cos);
            uu += half_period_product_integral(a[k - 1], k, b[l - 1], l, f, cos_sin);
            uu += half_period_product_integral(a[l - 1], l, b[k - 1], k, f, cos_sin);
            uu += half_period_product_integral(b[k - 1], k, b[l - 1], l, f, sin_sin);

            ui += half_period_product_integral(a[k - 1], k, c[l - 1], l, f, cos_cos);
            ui += half_period_product_integral(a[k - 1], k, d[l - 1], l, f, cos_sin);
            ui += half_period_product_integral(c[l - 1], l, b[k - 1], k, f, cos_sin);
            ui += half_period_product_integral(b[k - 1], k, d[l - 1], l, f, sin_sin);
        }
    }
    return (source - uu - circuit.r * ui) / circuit.l;
}

// -----------------------------------------------------------------------------
// Loop shape
// -----------------------------------------------------------------------------

double single_valuedness_metric(const Trajectory& steady, std::size_t levels, std::size_t samples) {
    if (levels == 0 || samples < 2) {
        throw Error(ErrorCode::invalid_argument, "need at least one level and two samples");
    }
    const double T = steady.span();
    std::vector<double> is(samples + 1), us(samples + 1);
    for (std::size_t j = 0; j < samples; ++j) {
        const ArcState s = steady.state_at(steady.t_begin() + T * static_cast<double>(j) / samples);
        is[j] = s.i;
        us[j] = s.voltage();
    }
    // close the loop
    is[samples] = is[0];
    us[samples] = us[0];

    const auto [i_lo, i_hi] = std::minmax_element(is.begin(), is.end());
    const auto [u_lo, u_hi] = std::minmax_element(us.begin(), us.end());
    const double i_min = *i_lo;
    const double i_range = *i_hi - *i_lo;
    const double u_range = *u_hi - *u_lo;
    if (!(i_range > 1e-12)) {
        throw Error(ErrorCode::degenerate_range, "current range is below the numeric floor");
    }
    if (!(u_range > 0.0)) return 0.0;

    const double di = i_range / static_cast<double>(levels);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lo(levels, inf), hi(levels, -inf);
    for (std::size_t j = 0; j < samples; ++j) {
        const double ia = is[j], ib = is[j + 1];
        if (ia == ib) continue;
        const double seg_lo = std::min(ia, ib), seg_hi = std::max(ia, ib);
        // levels sit at i_min + (m + 1/2) di
        const double m_first = std::ceil((seg_lo - i_min) / di - 0.5);
        const double m_last = std::floor((seg_hi - i_min) / di - 0.5);
        for (double mf = std::max(m_first, 0.0);
             mf <= std::min(m_last, static_cast<double>(levels - 1)); mf += 1.0) {
            const auto m = static_cast<std::size_t>(mf);
            const double level = i_min + (mf + 0.5) * di;
            const double u = us[j] + (level - ia) / (ib - ia) * (us[j + 1] - us[j]);
            lo[m] = std::min(lo[m], u);
            hi[m] = std::max(hi[m], u);
        }
    }
    double worst = 0.0;
    for (std::size_t m = 0; m < levels; ++m) {
        if (hi[m] >= lo[m]) worst = std::max(worst, hi[m] - lo[m]);
    }
    return worst / u_range;
}

double peak_abs_current(const Trajectory& steady) {
    constexpr int sub = 8;
    double best_t = steady.t_begin();
    double best = std::abs(steady.state_at(best_t).i);
    double spacing = 0.0;
    for (const auto& s : steady.steps()) {
        for (int j = 1; j <= sub; ++j) {
            const double t = j == sub ? s.t1() : s.t0 + s.h * j / sub;
            const double v = std::abs(steady.state_at(t).i);
            if (v > best) {
                best = v;
                best_t = t;
                spacing = s.h / sub;
            }
        }
    }
    if (spacing > 0.0) {
        const double a = std::max(steady.t_begin(), best_t - spacing);
        const double b = std::min(steady.t_end(), best_t + spacing);
        const auto r = boost::math::tools::brent_find_minima(
            [&](double t) { return -std::abs(steady.state_at(t).i); }, a, b,
            std::numeric_limits<double>::digits / 2);
        best = std::max(best, -r.second);
    }
    return best;
}

double mean_conductance(const Trajectory& steady) {
    const double integral = periodic_integral(steady, steady.t_begin(), steady.t_end(),
                                              [&](double t) { return steady.state_at(t).g; });
    return integral / steady.span();
}

LoopMetrics loop_metrics(const Trajectory& steady) {
    LoopMetrics m;
    const auto pins = pinch_points(steady);
    const auto rising = std::find_if(pins.begin(), pins.end(),
                                     [](const PinchPoint& p) { return p.di_dt_at > 0.0; });
    m.lobe_area = lobe_area(steady, rising != pins.end() ? rising->t_star : pins.front().t_star);
    try {
        m.loop_width_metric = single_valuedness_metric(steady);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_range) throw;
        m.loop_width_metric = 0.0;
    }
    m.i_peak = peak_abs_current(steady);
    m.g_mean = mean_conductance(steady);

    m.g_min_observed = std::numeric_limits<double>::infinity();
    m.g_max_observed = -std::numeric_limits<double>::infinity();
    auto observe = [&](double g) {
        m.g_min_observed = std::min(m.g_min_observed, g);
        m.g_max_observed = std::max(m.g_max_observed, g);
    };
    for (const auto& s : steady.steps()) {
        observe(s.y0.g);
        for (int j = 1; j < 4; ++j) observe(steady.state_at(s.t0 + s.h * j / 4).g);
    }
    observe(steady.final_state().g);
    // quadrature mean and sampled extrema can disagree in the last bits for constant g
    m.g_mean = std::clamp(m.g_mean, m.g_min_observed, m.g_max_observed);
    return m;
}

HalfWaveSymmetry half_wave_symmetry(const Trajectory& steady, std::size_t samples) {
    const double T = steady.span();
    double di = 0.0, dg = 0.0, i_max = 0.0, g_max = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = steady.t_begin() + 0.5 * T * static_cast<double>(j) / samples;
        const ArcState a = steady.state_at(t);
        const ArcState b = steady.state_at(wrap_time(steady, t + 0.5 * T));
        di = std::max(di, std::abs(a.i + b.i));
        dg = std::max(dg, std::abs(b.g - a.g));
        i_max = std::max({i_max, std::abs(a.i), std::abs(b.i)});
        g_max = std::max({g_max, a.g, b.g});
    }
    return {i_max > 0.0 ? di / i_max : 0.0, g_max > 0.0 ? dg / g_max : 0.0};
}

double current_derivative_mismatch(const Trajectory& steady, const CircuitParameters& circuit,
                                   std::size_t samples) {
    double err = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = steady.t_begin() + steady.span() * (j + 0.5) / samples;
        const ArcState s = steady.state_at(t);
        const double rhs = (circuit.source_voltage(t) - circuit.r * s.i - s.voltage()) / circuit.l;
        const double interp = steady.derivative_at(t).di_dt;
        err += (interp - rhs) * (interp - rhs);
        ref += rhs * rhs;
    }
    return ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
}

std::vector<WaveSample> sample_waveform(const Trajectory& steady, const CircuitParameters& circuit,
                                        std::size_t n) {
    std::vector<WaveSample> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = steady.t_begin() + steady.span() * static_cast<double>(j) / n;
        const ArcState s = steady.state_at(t);
        out.push_back({t, s.i, s.g, s.voltage(), circuit.source_voltage(t)});
    }
    return out;
}

std::vector<WaveSample> node_samples(const Trajectory& steady, const CircuitParameters& circuit) {
    std::vector<WaveSample> out;
    for (double t : steady.node_times()) {
        const ArcState s = steady.state_at(t);
        out.push_back({t, s.i, s.g, s.voltage(), circuit.source_voltage(t)});
    }
    return out;
}

// -----------------------------------------------------------------------------
// Pipelines
// -----------------------------------------------------------------------------

SystemFactory arc_system_factory(const ArcParameters& arc) {
    return [arc](const CircuitParameters& circuit) { return make_arc_system(arc, circuit); };
}

OperatingPoint analyze_operating_point(const SystemFactory& factory,
                                       const CircuitParameters& circuit,
                                       const AnalysisOptions& opts) {
    OperatingPoint op;
    op.circuit = circuit;
    try {
        circuit.validate();
        auto settled = settle_to_periodic(factory(circuit), circuit.period(), opts.initial,
                                          opts.integrator, opts.settle);
        op.settle = settled.report;
        settled.require_converged();
        op.period = std::move(settled.period);
        op.metrics = loop_metrics(op.period);
        op.ok = true;
    } catch (const Error& e) {
        op.error_code = e.code();
        op.error = e.what();
    } catch (const std::exception& e) {
        op.error_code = ErrorCode::internal;
        op.error = e.what();
    }
    return op;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::vacuous: return "vacuous";
    }
    return "fail";
}

FingerprintReport fingerprint_report(const SystemFactory& factory, double g_min,
                                     const CircuitParameters& circuit,
                                     std::span<const double> sweep_freqs,
                                     const FingerprintTolerances& tol,
                                     const AnalysisOptions& opts) {
    circuit.validate();
    std::vector<double> freqs(sweep_freqs.begin(), sweep_freqs.end());
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
    const auto main_it = std::find(freqs.begin(), freqs.end(), circuit.f);
    if (freqs.empty() || main_it == freqs.end()) {
        throw Error(ErrorCode::invalid_argument,
                    "the fingerprint sweep must include the circuit frequency");
    }
    for (double f : freqs) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw Error(ErrorCode::validation_error, "sweep frequencies must be positive");
        }
    }

    std::vector<OperatingPoint> points(freqs.size());
    detail::parallel_for(freqs.size(), opts.jobs, [&](std::size_t j) {
        CircuitParameters c = circuit;
        c.f = freqs[j];
        points[j] = analyze_operating_point(factory, c, opts);
    });

    FingerprintReport rep;
    rep.f = circuit.f;
    const OperatingPoint& main = points[static_cast<std::size_t>(main_it - freqs.begin())];
    rep.settle = main.settle;

    if (!main.ok) {
        rep.error = main.error;
    } else {
        const Trajectory& period = main.period;
        const double T = period.span();
        rep.pinch_points = pinch_points(period);
        const auto& pins = rep.pinch_points;

        // Fingerprint 1: one slope, alternating concavity.
        double s_lo = std::numeric_limits<double>::infinity(), s_hi = 0.0;
        bool alternating = true;
        for (std::size_t j = 0; j < pins.size(); ++j) {
            s_lo = std::min(s_lo, pins[j].slope);
            s_hi = std::max(s_hi, pins[j].slope);
            if (pins[j].concavity_sign == 0) alternating = false;
            if (j > 0 && pins[j].concavity_sign != -pins[j - 1].concavity_sign) alternating = false;
        }
        rep.fp1_slope_spread = (s_hi - s_lo) / s_lo;
        rep.fp1_pass = pins.size() >= 2 && pins.size() % 2 == 0 && alternating &&
                       rep.fp1_slope_spread <= tol.slope_rel;

        // Fingerprint 2: u vanishes where i does.
        double u_max = 0.0;
        for (const auto& s : period.steps()) {
            for (int j = 0; j < 4; ++j) {
                u_max = std::max(u_max, std::abs(period.voltage_at(s.t0 + s.h * j / 4)));
            }
        }
        u_max = std::max(u_max, std::abs(period.final_state().voltage()));
        double u_at = 0.0;
        double g_low = std::numeric_limits<double>::infinity();
        for (const auto& p : pins) {
            u_at = std::max(u_at, std::abs(period.voltage_at(p.t_star)));
            g_low = std::min(g_low, p.g_at);
        }
        rep.fp2_max_voltage_ratio = u_max > 0.0 ? u_at / u_max : 0.0;
        rep.fp2_min_g_at_crossing = g_low;
        const auto v_cross =
            find_zero_crossings(period, Signal::voltage, period.t_begin(), period.t_end());
        bool times_match = v_cross.size() == pins.size();
        double offset = 0.0;
        for (std::size_t j = 0; times_match && j < pins.size(); ++j) {
            offset = std::max(offset, std::abs(v_cross[j] - pins[j].t_star) / T);
        }
        rep.fp2_max_crossing_offset = times_match ? offset : std::numeric_limits<double>::infinity();
        rep.fp2_pass = times_match && offset <= tol.crossing_time_rel &&
                       rep.fp2_max_voltage_ratio <= tol.crossing_voltage_rel && g_low >= g_min;
    }

    // Fingerprint 3: loops thin out as f grows.
    bool all_ok = true;
    bool all_memoryless = true;
    for (std::size_t j = 0; j < freqs.size(); ++j) {
        const auto& p = points[j];
        SweepEvidence ev;
        ev.f = freqs[j];
        ev.ok = p.ok;
        ev.error = p.error;
        if (p.ok) {
            ev.lobe_area = p.metrics.lobe_area;
            ev.loop_width_metric = p.metrics.loop_width_metric;
            ev.g_mean = p.metrics.g_mean;
            ev.i_peak = p.metrics.i_peak;
            if (ev.loop_width_metric >= memoryless_threshold) all_memoryless = false;
        }
        all_ok = all_ok && p.ok;
        rep.fp3_evidence.push_back(ev);
    }
    if (!all_ok) {
        rep.fp3 = Verdict::fail;
    } else if (freqs.size() < 2 || all_memoryless) {
        rep.fp3 = Verdict::vacuous;
    } else {
        bool decreasing = true;
        for (std::size_t j = 1; j < rep.fp3_evidence.size(); ++j) {
            const auto& a = rep.fp3_evidence[j - 1];
            const auto& b = rep.fp3_evidence[j];
            if (!(std::abs(b.lobe_area) < std::abs(a.lobe_area))) decreasing = false;
            if (!(b.loop_width_metric < a.loop_width_metric)) decreasing = false;
        }
        rep.fp3 = decreasing ? Verdict::pass : Verdict::fail;
    }
    return rep;
}

FingerprintReport fingerprint_report(const ArcParameters& arc, const CircuitParameters& circuit,
                                     std::span<const double> sweep_freqs,
                                     const FingerprintTolerances& tol,
                                     const AnalysisOptions& opts) {
    arc.validate();
    return fingerprint_report(arc_system_factory(arc), arc.g_min, circuit, sweep_freqs, tol, opts);
}

std::vector<Table1Row> table1_reproduction(const ArcParameters& arc,
                                           const CircuitParameters& circuit_base,
                                           const AnalysisOptions& opts,
                                           std::span<const double> freqs) {
    arc.validate();
    circuit_base.validate();
    const auto factory = arc_system_factory(arc);
    std::vector<Table1Row> rows(freqs.size());
    detail::parallel_for(freqs.size(), opts.jobs, [&](std::size_t j) {
        CircuitParameters c = circuit_base;
        c.f = freqs[j];
        const OperatingPoint p = analyze_operating_point(factory, c, opts);
        Table1Row& row = rows[j];
        row.f = freqs[j];
        row.ok = p.ok;
        row.error = p.error;
        if (p.ok) {
            row.i_m = p.metrics.i_peak;
            row.g_mean = p.metrics.g_mean;
            row.hf_estimate = hf_limit_conductance(arc, row.i_m);
            row.rel_error = std::abs(row.g_mean - row.hf_estimate) / row.hf_estimate;
        }
    });
    return rows;
}

std::string_view to_string(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::k: return "K";
        case SweepAxis::l: return "L";
        case SweepAxis::u_c: return "U_C";
        case SweepAxis::i0: return "I0";
        case SweepAxis::f: return "f";
    }
    return "f";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) noexcept {
    if (name == "K" || name == "k") return SweepAxis::k;
    if (name == "L" || name == "l") return SweepAxis::l;
    if (name == "U_C" || name == "u_c") return SweepAxis::u_c;
    if (name == "I0" || name == "i0") return SweepAxis::i0;
    if (name == "f") return SweepAxis::f;
    return std::nullopt;
}

void apply_axis(SweepAxis axis, double value, ArcParameters& arc, CircuitParameters& circuit) {
    switch (axis) {
        case SweepAxis::k: arc.k = value; break;
        case SweepAxis::l: circuit.l = value; break;
        case SweepAxis::u_c: arc.u_c = value; break;
        case SweepAxis::i0: arc.i0 = value; break;
        case SweepAxis::f: circuit.f = value; break;
    }
}

std::vector<SweepPoint> parameter_sweep(const ArcParameters& arc_base,
                                        const CircuitParameters& circuit_base, SweepAxis axis,
                                        std::span<const double> values,
                                        const AnalysisOptions& opts,
                                        std::size_t waveform_samples) {
    if (values.empty()) throw Error(ErrorCode::invalid_argument, "sweep needs at least one value");
    std::vector<SweepPoint> out(values.size());
    detail::parallel_for(values.size(), opts.jobs, [&](std::size_t j) {
        SweepPoint& sp = out[j];
        sp.value = values[j];
        ArcParameters arc = arc_base;
        CircuitParameters circuit = circuit_base;
        apply_axis(axis, values[j], arc, circuit);
        try {
            arc.validate();
        } catch (const Error& e) {
            sp.point.circuit = circuit;
            sp.point.error_code = e.code();
            sp.point.error = e.what();
            return;
        }
        sp.point = analyze_operating_point(arc_system_factory(arc), circuit, opts);
        if (sp.point.ok) sp.waveform = sample_waveform(sp.point.period, circuit, waveform_samples);
    });
    return out;
}

}  // namespace arcmem
