#pragma once

// Hybrid Cassie-Mayr arc in a series R-L circuit driven by E(t) = E_m sin(2 pi f t).
//
// State is (i, g). The arc voltage is always derived as u = i / g and never
// carried as an independent variable. All quantities are SI.

#include <variant>

namespace arcmem {

// -----------------------------------------------------------------------------
// Time-constant laws
// -----------------------------------------------------------------------------

struct ConstantTheta {
    double theta = 4e-4;  // s
};

/// theta(i) = theta0 + theta1 * exp(-alpha |i|), theta0 < theta1.
struct CurrentDependentTheta {
    double theta0 = 0.0;  // s
    double theta1 = 0.0;  // s
    double alpha = 0.0;   // 1/A
};

using ThetaLaw = std::variant<ConstantTheta, CurrentDependentTheta>;

// -----------------------------------------------------------------------------
// Cassie/Mayr weighting laws. sigma -> 1 selects Mayr, sigma -> 0 selects Cassie.
// -----------------------------------------------------------------------------

/// exp(-i^2 / I0^2)
struct GaussianSigma {};

/// exp(-(|i| / I0)^a)
struct PowerExpSigma {
    double a = 2.0;
};

/// exp(-(|i| / I0)^(a / (delta + |i|)))
struct ShieldedExpSigma {
    double a = 1.0;
    double delta = 1.0;
};

/// 1 / (1 + exp(beta (|i| - I0)))
struct LogisticSigma {
    double beta = 1.0;
};

using SigmaLaw = std::variant<GaussianSigma, PowerExpSigma, ShieldedExpSigma, LogisticSigma>;

// -----------------------------------------------------------------------------
// Parameter sets
// -----------------------------------------------------------------------------

struct ArcParameters {
    double g_min = 1e-8;  // S
    double i0 = 4.8;      // A, Cassie/Mayr transition current
    double k = 0.1;       // Ohm, radiation loss K i^2
    double u_c = 30.0;    // V, Cassie voltage
    double p_m = 20.0;    // W, Mayr cooling power
    ThetaLaw theta_law = ConstantTheta{};
    SigmaLaw sigma_law = GaussianSigma{};

    /// Throws Error(validation_error) naming the first violated constraint.
    void validate() const;
};

struct CircuitParameters {
    double r = 0.2;    // Ohm
    double l = 1e-3;   // H
    double e_m = 75.0; // V
    double f = 50.0;   // Hz

    void validate() const;

    [[nodiscard]] double period() const noexcept { return 1.0 / f; }
    [[nodiscard]] double angular_frequency() const noexcept;
    [[nodiscard]] double source_voltage(double t) const noexcept;
};

struct ArcState {
    double i = 0.0;  // A
    double g = 1.0;  // S

    [[nodiscard]] double voltage() const noexcept { return i / g; }
};

struct ArcDerivative {
    double di_dt = 0.0;
    double dg_dt = 0.0;
};

// -----------------------------------------------------------------------------
// Right-hand sides and closed forms
// -----------------------------------------------------------------------------

double sigma(const SigmaLaw& law, double i0, double i);

double theta(const ThetaLaw& law, double i);

/// Conductance the arc relaxes towards:
/// G_min + (1 - sigma) (u i - K i^2) / U_C^2 + sigma i^2 / P_M.
double target_conductance(const ArcParameters& arc, double i, double u);

/// Coupled derivative of the arc and drive circuit.
/// Throws Error(non_positive_conductance) when s.g <= 0.
ArcDerivative arc_rhs(const ArcParameters& arc, const CircuitParameters& circuit, double t,
                      const ArcState& s);

/// Pure Mayr dynamics: dg/dt = (G_min + i^2/P_M - g) / theta(i).
double mayr_rhs(const ArcParameters& arc, double i, double g);

/// Pure Cassie dynamics: dg/dt = (G_min + (u i - K i^2)/U_C^2 - g) / theta(i).
double cassie_rhs(const ArcParameters& arc, double i, double u, double g);

/// Periodic steady-state Mayr conductance under the current drive
/// i(t) = i_m sin(2 pi f t):
///
///   g(t) = G_min + i_m^2/(2 P_M) * (1 - cos(4 pi f t - phi) / sqrt(1 + (4 pi f theta)^2)),
///   phi  = atan(4 pi f theta).
///
/// Requires a constant theta law (throws Error(unsupported_theta_law) otherwise).
double mayr_sinusoidal_g(const ArcParameters& arc, double i_m, double f, double t);

/// G_min + i_m^2 / (2 P_M): the f -> infinity limit of mayr_sinusoidal_g.
double hf_limit_conductance(const ArcParameters& arc, double i_m);

}  // namespace arcmem
