#pragma once

// Adaptive Dormand-Prince 5(4) integration of the two-state arc system with
// continuous (dense) output, zero-crossing location and periodic settling.

#include "arcmem/model.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace arcmem {

using System = std::function<ArcDerivative(double t, const ArcState& s)>;

struct IntegratorConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = 1.0;      // s
    double initial_step = 1e-6; // s
    std::size_t max_steps = 10'000'000;

    void validate() const;
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
    /// Largest error-to-tolerance ratio among accepted steps (always <= 1).
    double max_error_ratio = 0.0;
};

/// One accepted step together with its dense-output coefficients.
struct StepRecord {
    double t0 = 0.0;
    double h = 0.0;
    ArcState y0;
    ArcState y1;
    ArcDerivative f0;
    ArcDerivative f1;
    // rcont[j] = {i-coefficient, g-coefficient} of the 4th-order interpolant.
    std::array<std::array<double, 2>, 5> rcont{};

    [[nodiscard]] double t1() const noexcept { return t0 + h; }
};

/// Immutable record of an integration: accepted steps with a continuous
/// interpolant over [t_begin, t_end].
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<StepRecord> steps, IntegratorStats stats);

    [[nodiscard]] bool empty() const noexcept { return steps_.empty(); }
    [[nodiscard]] double t_begin() const;
    [[nodiscard]] double t_end() const;
    [[nodiscard]] double span() const { return t_end() - t_begin(); }

    /// Interpolated state. Node times return the stored node values exactly.
    /// t is clamped into [t_begin, t_end].
    [[nodiscard]] ArcState state_at(double t) const;

    /// Time derivative of the interpolant.
    [[nodiscard]] ArcDerivative derivative_at(double t) const;

    [[nodiscard]] double voltage_at(double t) const { return state_at(t).voltage(); }

    [[nodiscard]] std::span<const StepRecord> steps() const noexcept { return steps_; }
    [[nodiscard]] const IntegratorStats& stats() const noexcept { return stats_; }

    /// Step boundaries t_0 < t_1 < ... < t_n.
    [[nodiscard]] std::vector<double> node_times() const;

    [[nodiscard]] const ArcState& final_state() const;

private:
    [[nodiscard]] std::size_t locate(double t) const;

    std::vector<StepRecord> steps_;
    IntegratorStats stats_;
};

/// Integrates `system` from s0 over [t0, t1].
///
/// Local error is controlled per component in the max norm against
/// abs_tol + rel_tol * max(|x_old|, |x_new|). Throws Error with
/// step_underflow, max_steps_exceeded or whatever the system throws
/// (typically non_positive_conductance).
Trajectory integrate(const System& system, const ArcState& s0, double t0, double t1,
                     const IntegratorConfig& cfg);

// -----------------------------------------------------------------------------
// Zero crossings
// -----------------------------------------------------------------------------

enum class Signal { current, voltage };

/// Times in [ta, tb) where the chosen signal changes sign, located on the
/// interpolant. Tangential zeros are not reported.
std::vector<double> find_zero_crossings(const Trajectory& traj, Signal signal, double ta,
                                        double tb);

// -----------------------------------------------------------------------------
// Periodic steady state
// -----------------------------------------------------------------------------

struct SettleOptions {
    double tol = 1e-8;
    std::size_t min_periods = 5;
    std::size_t max_periods = 20000;

    void validate() const;
};

struct SettleReport {
    std::size_t periods_integrated = 0;
    bool converged = false;
    /// max over (i, g) of |x_n - x_{n-1}| / (1 + |x_n|) at the last two period boundaries.
    double period_map_residual = 0.0;
};

struct SettleResult {
    /// One full period on [0, T] starting from the settled boundary state.
    Trajectory period;
    SettleReport report;

    /// Throws Error(not_converged) unless report.converged.
    const SettleResult& require_converged() const;
};

/// Integrates a T-periodic system one period at a time until successive
/// period-boundary states agree to `opts.tol`, then integrates one more period.
///
/// `system` must be T-periodic in t; every period is integrated on [0, T]
/// so the returned trajectory is phase-referenced to the drive. max_step is
/// capped at T/200. Does not throw on non-convergence; see SettleResult.
SettleResult settle_to_periodic(const System& system, double period, const ArcState& s0,
                                const IntegratorConfig& cfg, const SettleOptions& opts);

SettleResult settle_to_periodic(const ArcParameters& arc, const CircuitParameters& circuit,
                                const ArcState& s0, const IntegratorConfig& cfg,
                                const SettleOptions& opts);

/// The arc/circuit vector field as a System.
System make_arc_system(const ArcParameters& arc, const CircuitParameters& circuit);

}  // namespace arcmem
