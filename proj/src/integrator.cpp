#include "arcmem/integrator.hpp"

#include "arcmem/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

namespace arcmem {

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner), with the dense
// output coefficients of the continuous extension.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Step-size controller (PI, Lund stabilisation).
constexpr double safety = 0.9;
constexpr double fac_min = 0.2;   // hnew/h >= fac_min
constexpr double fac_max = 10.0;  // hnew/h <= fac_max
constexpr double beta = 0.04;
constexpr double expo1 = 0.2 - beta * 0.75;

using Vec = std::array<double, 2>;

Vec as_vec(const ArcState& s) { return {s.i, s.g}; }
Vec as_vec(const ArcDerivative& d) { return {d.di_dt, d.dg_dt}; }
ArcState as_state(const Vec& v) { return {v[0], v[1]}; }

Vec combine(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec out = y;
    for (std::size_t c = 0; c < 2; ++c) {
        double acc = 0.0;
        for (const auto& [w, k] : terms) acc += w * (*k)[c];
        out[c] += h * acc;
    }
    return out;
}

}  // namespace

void IntegratorConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::validation_error, std::string("invariant violated: ") + what);
    };
    require(std::isfinite(abs_tol) && abs_tol > 0.0, "integrator.abs_tol > 0");
    require(std::isfinite(rel_tol) && rel_tol > 0.0, "integrator.rel_tol > 0");
    require(std::isfinite(initial_step) && initial_step > 0.0, "integrator.initial_step > 0");
    require(max_step >= initial_step, "integrator.initial_step <= integrator.max_step");
    require(max_steps > 0, "integrator.max_steps > 0");
}

void SettleOptions::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::validation_error, std::string("invariant violated: ") + what);
    };
    require(std::isfinite(tol) && tol > 0.0, "settle.tol > 0");
    require(min_periods >= 1, "settle.min_periods >= 1");
    require(max_periods >= min_periods, "settle.max_periods >= settle.min_periods");
}

// -----------------------------------------------------------------------------
// Trajectory
// -----------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<StepRecord> steps, IntegratorStats stats)
    : steps_(std::move(steps)), stats_(stats) {}

double Trajectory::t_begin() const {
    if (steps_.empty()) throw Error(ErrorCode::internal, "empty trajectory");
    return steps_.front().t0;
}

double Trajectory::t_end() const {
    if (steps_.empty()) throw Error(ErrorCode::internal, "empty trajectory");
    return steps_.back().t1();
}

const ArcState& Trajectory::final_state() const {
    if (steps_.empty()) throw Error(ErrorCode::internal, "empty trajectory");
    return steps_.back().y1;
}

std::vector<double> Trajectory::node_times() const {
    std::vector<double> out;
    out.reserve(steps_.size() + 1);
    for (const auto& s : steps_) out.push_back(s.t0);
    if (!steps_.empty()) out.push_back(t_end());
    return out;
}

std::size_t Trajectory::locate(double t) const {
    // First step whose end is >= t.
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [](const StepRecord& s, double x) { return s.t1() < x; });
    if (it == steps_.end()) return steps_.size() - 1;
    return static_cast<std::size_t>(it - steps_.begin());
}

ArcState Trajectory::state_at(double t) const {
    if (steps_.empty()) throw Error(ErrorCode::internal, "empty trajectory");
    if (t <= steps_.front().t0) return steps_.front().y0;
    if (t >= t_end()) return steps_.back().y1;
    const StepRecord& s = steps_[locate(t)];
    if (t == s.t0) return s.y0;
    if (t == s.t1()) return s.y1;
    const double th = (t - s.t0) / s.h;
    const double th1 = 1.0 - th;
    Vec y{};
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& r = s.rcont;
        y[c] = r[0][c] + th * (r[1][c] + th1 * (r[2][c] + th * (r[3][c] + th1 * r[4][c])));
    }
    return as_state(y);
}

ArcDerivative Trajectory::derivative_at(double t) const {
    if (steps_.empty()) throw Error(ErrorCode::internal, "empty trajectory");
    t = std::clamp(t, t_begin(), t_end());
    const StepRecord& s = steps_[locate(t)];
    const double th = (t - s.t0) / s.h;
    const double th1 = 1.0 - th;
    Vec d{};
    for (std::size_t c = 0; c < 2; ++c) {
        const auto& r = s.rcont;
        // y = r0 + th*Q, Q = r1 + th1*R, R = r2 + th*S, S = r3 + th1*r4
        const double S = r[3][c] + th1 * r[4][c];
        const double dS = -r[4][c];
        const double R = r[2][c] + th * S;
        const double dR = S + th * dS;
        const double Q = r[1][c] + th1 * R;
        const double dQ = -R + th1 * dR;
        d[c] = (Q + th * dQ) / s.h;
    }
    return {d[0], d[1]};
}

// -----------------------------------------------------------------------------
// Dormand-Prince driver
// -----------------------------------------------------------------------------

Trajectory integrate(const System& system, const ArcState& s0, double t0, double t1,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(t1 > t0)) throw Error(ErrorCode::invalid_argument, "integration span must have t1 > t0");
    if (!(s0.g > 0.0)) {
        throw Error(ErrorCode::non_positive_conductance, "initial conductance must be positive");
    }

    IntegratorStats stats;
    std::vector<StepRecord> steps;

    double t = t0;
    Vec y = as_vec(s0);
    Vec k1 = as_vec(system(t, s0));
    stats.rhs_evaluations = 1;

    double h = std::min({cfg.initial_step, cfg.max_step, t1 - t0});
    double fac_old = 1e-4;
    bool last_rejected = false;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    while (true) {
        if (stats.accepted + stats.rejected >= cfg.max_steps) {
            throw Error(ErrorCode::max_steps_exceeded,
                        "step budget of " + std::to_string(cfg.max_steps) + " exhausted at t = " +
                            std::to_string(t));
        }
        if (h < 16.0 * eps * std::max(std::abs(t), std::abs(t1 - t0))) {
            throw Error(ErrorCode::step_underflow,
                        "step size underflow at t = " + std::to_string(t));
        }
        bool last = false;
        if (t + 1.01 * h >= t1) {
            h = t1 - t;
            last = true;
        }

        auto eval = [&](double tt, const Vec& yy) { return as_vec(system(tt, as_state(yy))); };
        const Vec y2 = combine(y, h, {{a21, &k1}});
        const Vec k2 = eval(t + c2 * h, y2);
        const Vec y3 = combine(y, h, {{a31, &k1}, {a32, &k2}});
        const Vec k3 = eval(t + c3 * h, y3);
        const Vec y4 = combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        const Vec k4 = eval(t + c4 * h, y4);
        const Vec y5 = combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        const Vec k5 = eval(t + c5 * h, y5);
        const Vec y6 = combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        const double t_new = last ? t1 : t + h;
        const Vec k6 = eval(t_new, y6);
        const Vec y_new =
            combine(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const Vec k7 = eval(t_new, y_new);
        stats.rhs_evaluations += 6;

        double err = 0.0;
        for (std::size_t c = 0; c < 2; ++c) {
            const double e = h * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] +
                                  e7 * k7[c]);
            const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[c]), std::abs(y_new[c]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err)) err = 1e10;

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            StepRecord rec;
            rec.t0 = t;
            rec.h = t_new - t;
            rec.y0 = as_state(y);
            rec.y1 = as_state(y_new);
            rec.f0 = {k1[0], k1[1]};
            rec.f1 = {k7[0], k7[1]};
            for (std::size_t c = 0; c < 2; ++c) {
                const double ydiff = y_new[c] - y[c];
                const double bspl = h * k1[c] - ydiff;
                rec.rcont[0][c] = y[c];
                rec.rcont[1][c] = ydiff;
                rec.rcont[2][c] = bspl;
                rec.rcont[3][c] = ydiff - h * k7[c] - bspl;
                rec.rcont[4][c] = h * (d1 * k1[c] + d3 * k3[c] + d4 * k4[c] + d5 * k5[c] +
                                       d6 * k6[c] + d7 * k7[c]);
            }
            steps.push_back(rec);
            stats.accepted += 1;
            stats.max_error_ratio = std::max(stats.max_error_ratio, err);

            double fac = fac11 / std::pow(fac_old, beta);
            fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            fac_old = std::max(err, 1e-4);
            last_rejected = false;

            t = t_new;
            y = y_new;
            k1 = k7;
            if (last) break;
            h = std::min(h_new, cfg.max_step);
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h = h / std::min(1.0 / fac_min, fac11 / safety);
        }
    }
    return Trajectory(std::move(steps), stats);
}

// -----------------------------------------------------------------------------
// Zero crossings
// -----------------------------------------------------------------------------

std::vector<double> find_zero_crossings(const Trajectory& traj, Signal signal, double ta,
                                        double tb) {
    std::vector<double> out;
    if (traj.empty() || !(tb > ta)) return out;
    ta = std::max(ta, traj.t_begin());
    tb = std::min(tb, traj.t_end());
    if (!(tb > ta)) return out;

    auto value = [&](double t) {
        const ArcState s = traj.state_at(t);
        return signal == Signal::current ? s.i : s.voltage();
    };

    // Sample every step at a few interior points; the interpolant is a quartic
    // per step so four sub-intervals resolve any sign change that is not tangential.
    constexpr int sub = 4;
    std::vector<double> grid;
    grid.push_back(ta);
    for (const auto& s : traj.steps()) {
        if (s.t1() <= ta || s.t0 >= tb) continue;
        for (int j = 1; j <= sub; ++j) {
            const double t = j == sub ? s.t1() : s.t0 + s.h * j / sub;
            if (t > ta && t < tb) grid.push_back(t);
        }
    }
    grid.push_back(tb);

    double t_prev = 0.0;
    double v_prev = 0.0;
    bool have_prev = false;
    for (double t : grid) {
        const double v = value(t);
        if (v == 0.0) continue;
        if (have_prev && std::signbit(v) != std::signbit(v_prev)) {
            auto f = [&](double x) { return value(x); };
            std::uintmax_t iters = 200;
            const auto bracket = boost::math::tools::toms748_solve(
                f, t_prev, t, v_prev, v,
                boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits),
                iters);
            const double fa = std::abs(f(bracket.first));
            const double fb = std::abs(f(bracket.second));
            const double root = fa <= fb ? bracket.first : bracket.second;
            if (root >= ta && root < tb) out.push_back(root);
        }
        t_prev = t;
        v_prev = v;
        have_prev = true;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// -----------------------------------------------------------------------------
// Periodic steady state
// -----------------------------------------------------------------------------

const SettleResult& SettleResult::require_converged() const {
    if (!report.converged) {
        throw Error(ErrorCode::not_converged,
                    "periodic steady state not reached after " +
                        std::to_string(report.periods_integrated) + " periods (residual " +
                        std::to_string(report.period_map_residual) + ")");
    }
    return *this;
}

SettleResult settle_to_periodic(const System& system, double period, const ArcState& s0,
                                const IntegratorConfig& cfg, const SettleOptions& opts) {
    opts.validate();
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw Error(ErrorCode::invalid_argument, "period must be positive");
    }
    IntegratorConfig per = cfg;
    per.max_step = std::min(cfg.max_step, period / 200.0);
    per.initial_step = std::min(cfg.initial_step, per.max_step);

    auto residual = [](const ArcState& a, const ArcState& b) {
        return std::max(std::abs(b.i - a.i) / (1.0 + std::abs(b.i)),
                        std::abs(b.g - a.g) / (1.0 + std::abs(b.g)));
    };

    SettleResult result;
    ArcState state = s0;
    for (std::size_t n = 1; n <= opts.max_periods; ++n) {
        const Trajectory traj = integrate(system, state, 0.0, period, per);
        const ArcState next = traj.final_state();
        result.report.period_map_residual = residual(state, next);
        result.report.periods_integrated = n;
        state = next;
        if (n >= opts.min_periods && result.report.period_map_residual <= opts.tol) {
            result.report.converged = true;
            break;
        }
    }
    result.period = integrate(system, state, 0.0, period, per);
    result.report.periods_integrated += 1;
    return result;
}

System make_arc_system(const ArcParameters& arc, const CircuitParameters& circuit) {
    return [arc, circuit](double t, const ArcState& s) { return arc_rhs(arc, circuit, t, s); };
}

SettleResult settle_to_periodic(const ArcParameters& arc, const CircuitParameters& circuit,
                                const ArcState& s0, const IntegratorConfig& cfg,
                                const SettleOptions& opts) {
    arc.validate();
    circuit.validate();
    return settle_to_periodic(make_arc_system(arc, circuit), circuit.period(), s0, cfg, opts);
}

}  // namespace arcmem
