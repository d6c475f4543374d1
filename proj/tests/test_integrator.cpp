#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcmem/error.hpp"
#include "arcmem/integrator.hpp"
#include "arcmem/model.hpp"

#include <cmath>
#include <numbers>

using namespace arcmem;

namespace {

constexpr double pi = std::numbers::pi;

// Series R-L circuit closed by a fixed conductance g0.
struct LinearCircuit {
    CircuitParameters c;
    double g0 = 0.5;

    [[nodiscard]] System system() const {
        return [*this](double t, const ArcState& s) {
            return ArcDerivative{(c.source_voltage(t) - c.r * s.i - s.i / g0) / c.l, 0.0};
        };
    }
    [[nodiscard]] double resistance() const { return c.r + 1.0 / g0; }
    [[nodiscard]] double omega() const { return 2.0 * pi * c.f; }
    [[nodiscard]] double amplitude() const {
        return c.e_m / std::hypot(resistance(), omega() * c.l);
    }
    [[nodiscard]] double phase() const { return std::atan2(omega() * c.l, resistance()); }
    // Steady-state current.
    [[nodiscard]] double steady(double t) const { return amplitude() * std::sin(omega() * t - phase()); }
    // Full solution with i(0) = 0.
    [[nodiscard]] double exact(double t) const {
        const double tau = c.l / resistance();
        return steady(t) + amplitude() * std::sin(phase()) * std::exp(-t / tau);
    }
};

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::internal;
}

}  // namespace

TEST_CASE("linear circuit reaches the analytic steady state") {
    const LinearCircuit lc;
    IntegratorConfig cfg;  // 1e-10 / 1e-10
    const auto settled = settle_to_periodic(lc.system(), lc.c.period(), {0.0, lc.g0}, cfg, {});
    REQUIRE(settled.report.converged);
    const auto& p = settled.period;
    double max_err = 0.0;
    double peak = 0.0;
    for (int k = 0; k <= 4000; ++k) {
        const double t = p.t_begin() + p.span() * k / 4000.0;
        max_err = std::max(max_err, std::abs(p.state_at(t).i - lc.steady(t)));
        peak = std::max(peak, std::abs(p.state_at(t).i));
    }
    CHECK(max_err / lc.amplitude() <= 1e-8);
    CHECK(std::abs(peak - lc.amplitude()) / lc.amplitude() <= 1e-6);
}

TEST_CASE("Mayr zero-current decay") {
    const ArcParameters arc;
    const double th = 4e-4;
    const System sys = [&](double, const ArcState& s) {
        return ArcDerivative{0.0, mayr_rhs(arc, 0.0, s.g)};
    };
    const auto traj = integrate(sys, {0.0, arc.g_min + 1.0}, 0.0, 6.0 * th, {});
    for (double t : traj.node_times()) {
        const double expect = arc.g_min + std::exp(-t / th);
        CHECK(std::abs(traj.state_at(t).g - expect) <= 1e-8 * expect);
    }
    for (int k = 0; k <= 997; ++k) {
        const double t = 6.0 * th * k / 997.0;
        const double expect = arc.g_min + std::exp(-t / th);
        CHECK(std::abs(traj.state_at(t).g - expect) <= 1e-8 * expect);
    }
}

TEST_CASE("global error shrinks with the tolerance") {
    const LinearCircuit lc;
    const double t1 = 1.3 * lc.c.period();
    double prev = 1e300;
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        IntegratorConfig cfg;
        cfg.abs_tol = tol;
        cfg.rel_tol = tol;
        const auto traj = integrate(lc.system(), {0.0, lc.g0}, 0.0, t1, cfg);
        const double err = std::abs(traj.final_state().i - lc.exact(t1)) / lc.amplitude();
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("integration is deterministic") {
    const ArcParameters arc;
    const CircuitParameters c;
    const auto a = integrate(make_arc_system(arc, c), {0.0, 1.0}, 0.0, 0.03, {});
    const auto b = integrate(make_arc_system(arc, c), {0.0, 1.0}, 0.0, 0.03, {});
    REQUIRE(a.steps().size() == b.steps().size());
    for (std::size_t k = 0; k < a.steps().size(); ++k) {
        CHECK(a.steps()[k].t0 == b.steps()[k].t0);
        CHECK(a.steps()[k].y1.i == b.steps()[k].y1.i);
        CHECK(a.steps()[k].y1.g == b.steps()[k].y1.g);
    }
}

TEST_CASE("trajectory invariants") {
    const ArcParameters arc;
    const CircuitParameters c;
    const auto traj = integrate(make_arc_system(arc, c), {0.0, 1.0}, 0.0, 0.04, {});
    const auto steps = traj.steps();
    REQUIRE(!steps.empty());
    CHECK(traj.t_begin() == 0.0);
    CHECK(traj.t_end() == 0.04);
    CHECK(traj.stats().max_error_ratio <= 1.0);
    CHECK(traj.stats().accepted == steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
        CHECK(steps[k].h > 0.0);
        CHECK(steps[k].y1.g > 0.0);
        // interpolant hits the stored nodes exactly
        CHECK(traj.state_at(steps[k].t0).i == steps[k].y0.i);
        CHECK(traj.state_at(steps[k].t0).g == steps[k].y0.g);
        CHECK(traj.state_at(steps[k].t1()).i == steps[k].y1.i);
        CHECK(traj.state_at(steps[k].t1()).g == steps[k].y1.g);
        if (k > 0) CHECK(steps[k].t0 == steps[k - 1].t1());
    }
    // interpolant derivative against the vector field at a mid-step point
    const auto& s = steps[steps.size() / 2];
    const double tm = s.t0 + 0.37 * s.h;
    const auto d = traj.derivative_at(tm);
    const auto f = arc_rhs(arc, c, tm, traj.state_at(tm));
    CHECK(d.di_dt == doctest::Approx(f.di_dt).epsilon(1e-5));
}

TEST_CASE("zero crossings of a pure sine") {
    const double f = 50.0;
    const System sys = [&](double t, const ArcState&) {
        return ArcDerivative{2.0 * pi * f * std::cos(2.0 * pi * f * t), 0.0};
    };
    IntegratorConfig cfg;
    cfg.max_step = 1.0 / (200.0 * f);
    const auto traj = integrate(sys, {0.0, 1.0}, 0.0, 3.0 / f, cfg);
    const auto z = find_zero_crossings(traj, Signal::current, 0.1 / f, 2.9 / f);
    REQUIRE(z.size() == 5);
    for (std::size_t k = 0; k < z.size(); ++k) {
        CHECK(std::abs(z[k] - (k + 1) / (2.0 * f)) <= 1e-9 / f);
    }
    // voltage = i / g with g = 1 crosses at the same instants
    const auto zu = find_zero_crossings(traj, Signal::voltage, 0.1 / f, 2.9 / f);
    REQUIRE(zu.size() == z.size());
    for (std::size_t k = 0; k < z.size(); ++k) CHECK(std::abs(zu[k] - z[k]) <= 1e-12 / f);
}

TEST_CASE("tangential zeros are not crossings") {
    const double f = 50.0;
    // i = sin^2 touches zero without changing sign
    const System sys = [&](double t, const ArcState&) {
        return ArcDerivative{2.0 * pi * f * std::sin(4.0 * pi * f * t), 0.0};
    };
    IntegratorConfig cfg;
    cfg.max_step = 1.0 / (200.0 * f);
    const auto traj = integrate(sys, {0.0, 1.0}, 0.0, 2.0 / f, cfg);
    CHECK(find_zero_crossings(traj, Signal::current, 0.1 / f, 1.9 / f).empty());
}

TEST_CASE("settling at the reference operating point") {
    const ArcParameters arc;
    const CircuitParameters c;
    const SettleOptions opts;  // tol 1e-8
    const auto s = settle_to_periodic(arc, c, {0.0, 1.0}, {}, opts);
    CHECK(s.report.converged);
    CHECK(s.report.periods_integrated <= 50);
    CHECK(s.report.period_map_residual <= opts.tol);
    CHECK(s.period.t_begin() == 0.0);
    CHECK(s.period.t_end() == doctest::Approx(c.period()).epsilon(1e-15));
    CHECK_NOTHROW(s.require_converged());

    const auto z = find_zero_crossings(s.period, Signal::current, 0.0, c.period());
    CHECK(z.size() == 2);
    const auto zu = find_zero_crossings(s.period, Signal::voltage, 0.0, c.period());
    REQUIRE(zu.size() == z.size());
    for (std::size_t k = 0; k < z.size(); ++k) CHECK(std::abs(zu[k] - z[k]) <= 1e-9 * c.period());
}

TEST_CASE("settling at ten times the frequency") {
    const ArcParameters arc;
    CircuitParameters c;
    c.f = 500.0;
    const auto s = settle_to_periodic(arc, c, {0.0, 1.0}, {}, {});
    CHECK(s.report.converged);
    CHECK(s.report.period_map_residual <= 1e-8);
    // max_step is capped at T/200
    for (const auto& st : s.period.steps()) CHECK(st.h <= c.period() / 200.0 * (1.0 + 1e-12));
}

TEST_CASE("non-convergence is reported, not thrown") {
    const ArcParameters arc;
    CircuitParameters c;
    c.f = 11000.0;
    SettleOptions opts;
    opts.min_periods = 1;
    opts.max_periods = 3;
    SettleResult s;
    CHECK_NOTHROW(s = settle_to_periodic(arc, c, {0.0, 1.0}, {}, opts));
    CHECK_FALSE(s.report.converged);
    CHECK(s.report.period_map_residual > opts.tol);
    CHECK(s.report.periods_integrated >= opts.max_periods);
    CHECK(code_of([&] { s.require_converged(); }) == ErrorCode::not_converged);
}

TEST_CASE("error paths") {
    const LinearCircuit lc;

    SUBCASE("invalid configuration") {
        IntegratorConfig cfg;
        cfg.abs_tol = 0.0;
        CHECK(code_of([&] { integrate(lc.system(), {0.0, 1.0}, 0.0, 1.0, cfg); }) ==
              ErrorCode::validation_error);
        IntegratorConfig big_first;
        big_first.initial_step = 2.0;
        CHECK(code_of([&] { big_first.validate(); }) == ErrorCode::validation_error);
        CHECK(code_of([&] { integrate(lc.system(), {0.0, 1.0}, 1.0, 1.0, {}); }) ==
              ErrorCode::invalid_argument);
        CHECK(code_of([&] { integrate(lc.system(), {0.0, 0.0}, 0.0, 1.0, {}); }) ==
              ErrorCode::non_positive_conductance);
        SettleOptions so;
        so.min_periods = 0;
        CHECK(code_of([&] { so.validate(); }) == ErrorCode::validation_error);
    }

    SUBCASE("step budget") {
        IntegratorConfig cfg;
        cfg.max_steps = 10;
        CHECK(code_of([&] { integrate(lc.system(), {0.0, 1.0}, 0.0, 0.02, cfg); }) ==
              ErrorCode::max_steps_exceeded);
    }

    SUBCASE("finite-time blow-up underflows the step") {
        const System blow = [](double, const ArcState& s) { return ArcDerivative{s.i * s.i, 0.0}; };
        CHECK(code_of([&] { integrate(blow, {1.0, 1.0}, 0.0, 2.0, {}); }) == ErrorCode::step_underflow);
    }

    SUBCASE("conductance collapse propagates from the vector field") {
        const ArcParameters arc;
        const CircuitParameters c;
        // zero current keeps the field non-stiff while g is driven through 0
        const System collapse = [&](double t, const ArcState& s) {
            auto d = arc_rhs(arc, c, t, {0.0, s.g});
            return ArcDerivative{0.0, d.dg_dt - 1.0};
        };
        CHECK(code_of([&] { integrate(collapse, {0.0, 0.5}, 0.0, 1.0, {}); }) ==
              ErrorCode::non_positive_conductance);
    }
}

TEST_CASE("Mayr closed form against direct integration") {
    ArcParameters arc;
    arc.theta_law = ConstantTheta{2e-4};
    const double im = 3.821;
    const double f = 3000.0;
    const double period = 1.0 / f;
    const System drive = [&](double t, const ArcState& s) {
        const double i = im * std::sin(2.0 * pi * f * t);
        return ArcDerivative{0.0, mayr_rhs(arc, i, s.g)};
    };
    IntegratorConfig cfg;
    cfg.max_step = period / 200.0;
    const int periods = 25;
    const auto traj = integrate(drive, {0.0, 1.0}, 0.0, periods * period, cfg);

    double worst = 0.0;
    double worst_flipped = 0.0;
    const double mean = hf_limit_conductance(arc, im);
    for (int k = 0; k <= 2000; ++k) {
        const double t = (periods - 1) * period + period * k / 2000.0;
        const double g_ode = traj.state_at(t).g;
        const double g_cf = mayr_sinusoidal_g(arc, im, f, t);
        worst = std::max(worst, std::abs(g_cf - g_ode) / g_ode);
        // the opposite sign of the oscillating term
        const double g_plus = 2.0 * mean - g_cf;
        worst_flipped = std::max(worst_flipped, std::abs(g_plus - g_ode) / g_ode);
    }
    CHECK(worst <= 1e-4);
    CHECK(worst_flipped > 1e-2);
}
