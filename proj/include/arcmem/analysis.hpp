#pragma once

// Memristive-fingerprint evidence extracted from settled trajectories.
//
// Every function taking a "steady" trajectory expects exactly one drive period
// on [0, T] as produced by settle_to_periodic; times beyond the end wrap
// around periodically.

#include "arcmem/error.hpp"
#include "arcmem/integrator.hpp"
#include "arcmem/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arcmem {

// -----------------------------------------------------------------------------
// Pinch geometry
// -----------------------------------------------------------------------------

struct PinchPoint {
    double t_star = 0.0;
    double g_at = 0.0;        // S
    double slope = 0.0;       // du/di = 1/g_at, Ohm
    int concavity_sign = 0;   // sign of d2u/di2; 0 when degenerate (memoryless)
    double di_dt_at = 0.0;    // A/s
    double dg_dt_at = 0.0;    // S/s
};

/// One pinch point per sign-changing current zero in [0, T).
/// Throws Error(no_crossings) when the current never changes sign.
std::vector<PinchPoint> pinch_points(const Trajectory& steady);

// -----------------------------------------------------------------------------
// Loop areas
// -----------------------------------------------------------------------------

/// Gauss-Legendre quadrature of u(t) * di/dt(t) over consecutive breakpoints.
double line_integral(const std::function<double(double)>& u,
                     const std::function<double(double)>& di_dt,
                     std::span<const double> breakpoints);

/// Signed area int u di over [t_star, t_star + T/2], with di/dt taken from the interpolant.
double lobe_area(const Trajectory& steady, double t_star);

struct FourierSpectrum {
    double f = 0.0;
    std::size_t k_max = 0;
    // Index k-1 holds harmonic k.
    std::vector<double> a;  // u cosine, V
    std::vector<double> b;  // u sine, V
    std::vector<double> c;  // i cosine, A
    std::vector<double> d;  // i sine, A
    double dc_u = 0.0;
    double dc_i = 0.0;
    /// RMS reconstruction error relative to the RMS of the signal.
    double residual_u = 0.0;
    double residual_i = 0.0;
};

/// Projects u and i of the steady period onto cos/sin(2 pi f k t), t = 0 at
/// the start of the period (in phase with the source).
FourierSpectrum fourier_coefficients(const Trajectory& steady, std::size_t k_max);

enum class ProductKind { sin_sin, cos_cos, cos_sin };

/// Closed-form integral over half a period [0, T/2] of
///   p * trig(2 pi f k t) * q * trig(2 pi f l t)
/// where for cos_sin the cosine carries index k and the sine index l.
double half_period_product_integral(double p, int k, double q, int l, double f, ProductKind kind);

/// Half-period lobe area assembled from the Fourier coefficients through
/// A = (1/L) int u (E - u - R i) dt using half_period_product_integral.
double area_from_fourier(const FourierSpectrum& spectrum, const CircuitParameters& circuit);

// -----------------------------------------------------------------------------
// Loop shape
// -----------------------------------------------------------------------------

/// 0 for a single-valued u(i) graph. For each of `levels` uniformly spaced
/// current levels, the spread of u over all passes of the loop through that
/// level; the worst spread is divided by the global voltage range.
/// Throws Error(degenerate_range) when the current range is numerically zero.
double single_valuedness_metric(const Trajectory& steady, std::size_t levels = 64,
                                std::size_t samples = 4000);

inline constexpr double memoryless_threshold = 1e-9;

/// Max |i| over the period, refined between samples.
double peak_abs_current(const Trajectory& steady);

/// Period average of g.
double mean_conductance(const Trajectory& steady);

struct LoopMetrics {
    double lobe_area = 0.0;         // first-quadrant lobe, V*A
    double loop_width_metric = 0.0; // single_valuedness_metric
    double i_peak = 0.0;
    double g_mean = 0.0;
    double g_min_observed = 0.0;
    double g_max_observed = 0.0;
};

/// Lobe area starts at the rising current crossing; the metric is 0 for
/// memoryless loops whose current range is degenerate.
LoopMetrics loop_metrics(const Trajectory& steady);

struct HalfWaveSymmetry {
    double current = 0.0;     // max |i(t+T/2) + i(t)| / max|i|
    double conductance = 0.0; // max |g(t+T/2) - g(t)| / max g
};

HalfWaveSymmetry half_wave_symmetry(const Trajectory& steady, std::size_t samples = 2000);

/// Relative RMS mismatch between di/dt of the interpolant and (E - u - R i)/L.
double current_derivative_mismatch(const Trajectory& steady, const CircuitParameters& circuit,
                                   std::size_t samples = 2000);

struct WaveSample {
    double t = 0.0;
    double i = 0.0;
    double g = 0.0;
    double u = 0.0;
    double e = 0.0;
};

/// `n` uniform samples on [0, T) of the steady period.
std::vector<WaveSample> sample_waveform(const Trajectory& steady, const CircuitParameters& circuit,
                                        std::size_t n = 2000);

/// Samples at the accepted step boundaries.
std::vector<WaveSample> node_samples(const Trajectory& steady, const CircuitParameters& circuit);

// -----------------------------------------------------------------------------
// Pipelines
// -----------------------------------------------------------------------------

struct AnalysisOptions {
    IntegratorConfig integrator;
    SettleOptions settle;
    ArcState initial{0.0, 1.0};
    std::size_t jobs = 0;  // 0: one worker per hardware thread
};

/// Builds the vector field for a drive circuit; lets the pipelines run
/// models other than the arc (e.g. a constant-conductance control).
using SystemFactory = std::function<System(const CircuitParameters&)>;

SystemFactory arc_system_factory(const ArcParameters& arc);

/// Settle + metrics for one operating point. Failures are captured, not thrown.
struct OperatingPoint {
    CircuitParameters circuit;
    bool ok = false;
    std::optional<ErrorCode> error_code;
    std::string error;
    SettleReport settle;
    Trajectory period;
    LoopMetrics metrics;
};

OperatingPoint analyze_operating_point(const SystemFactory& factory, const CircuitParameters& circuit,
                                       const AnalysisOptions& opts);

struct FingerprintTolerances {
    double slope_rel = 0.01;
    double crossing_voltage_rel = 1e-3;
    double crossing_time_rel = 1e-9;  // fraction of T
};

enum class Verdict { pass, fail, vacuous };

std::string_view to_string(Verdict v) noexcept;

struct SweepEvidence {
    double f = 0.0;
    bool ok = false;
    std::string error;
    double lobe_area = 0.0;
    double loop_width_metric = 0.0;
    double g_mean = 0.0;
    double i_peak = 0.0;
};

struct FingerprintReport {
    double f = 0.0;
    std::string error;  // non-empty if the operating point at f failed
    SettleReport settle;
    std::vector<PinchPoint> pinch_points;

    bool fp1_pass = false;
    double fp1_slope_spread = 0.0;  // (max slope - min slope) / min slope

    bool fp2_pass = false;
    double fp2_max_voltage_ratio = 0.0;  // max |u(t*)| / max |u|
    double fp2_min_g_at_crossing = 0.0;
    double fp2_max_crossing_offset = 0.0;  // max |t_u - t_i| / T

    Verdict fp3 = Verdict::fail;
    std::vector<SweepEvidence> fp3_evidence;  // ascending f
};

FingerprintReport fingerprint_report(const SystemFactory& factory, double g_min,
                                     const CircuitParameters& circuit,
                                     std::span<const double> sweep_freqs,
                                     const FingerprintTolerances& tol, const AnalysisOptions& opts);

FingerprintReport fingerprint_report(const ArcParameters& arc, const CircuitParameters& circuit,
                                     std::span<const double> sweep_freqs,
                                     const FingerprintTolerances& tol, const AnalysisOptions& opts);

struct Table1Row {
    double f = 0.0;
    bool ok = false;
    std::string error;
    double i_m = 0.0;
    double g_mean = 0.0;
    double hf_estimate = 0.0;
    double rel_error = 0.0;
};

inline constexpr double table1_frequencies[] = {3e3, 5e3, 7e3, 9e3, 11e3};

std::vector<Table1Row> table1_reproduction(const ArcParameters& arc,
                                           const CircuitParameters& circuit_base,
                                           const AnalysisOptions& opts,
                                           std::span<const double> freqs = table1_frequencies);

enum class SweepAxis { k, l, u_c, i0, f };

std::string_view to_string(SweepAxis axis) noexcept;
std::optional<SweepAxis> parse_sweep_axis(std::string_view name) noexcept;

/// Writes `value` into the field named by `axis`.
void apply_axis(SweepAxis axis, double value, ArcParameters& arc, CircuitParameters& circuit);

struct SweepPoint {
    double value = 0.0;
    OperatingPoint point;
    std::vector<WaveSample> waveform;
};

std::vector<SweepPoint> parameter_sweep(const ArcParameters& arc_base,
                                        const CircuitParameters& circuit_base, SweepAxis axis,
                                        std::span<const double> values,
                                        const AnalysisOptions& opts,
                                        std::size_t waveform_samples = 2000);

}  // namespace arcmem
