#include "arcmem/model.hpp"

#include "arcmem/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace arcmem {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw Error(ErrorCode::validation_error, std::string("invariant violated: ") + what);
    }
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

struct ThetaValidator {
    void operator()(const ConstantTheta& c) const {
        require(finite_positive(c.theta), "arc.theta > 0");
    }
    void operator()(const CurrentDependentTheta& c) const {
        require(finite_positive(c.theta0), "arc.theta0 > 0");
        require(finite_positive(c.theta1), "arc.theta1 > 0");
        require(finite_positive(c.alpha), "arc.alpha > 0");
        require(c.theta0 < c.theta1, "arc.theta0 < arc.theta1");
    }
};

struct SigmaValidator {
    void operator()(const GaussianSigma&) const {}
    void operator()(const PowerExpSigma& s) const { require(finite_positive(s.a), "arc.sigma_a > 0"); }
    void operator()(const ShieldedExpSigma& s) const {
        require(finite_positive(s.a), "arc.sigma_a > 0");
        require(finite_positive(s.delta), "arc.sigma_delta > 0");
    }
    void operator()(const LogisticSigma& s) const {
        require(finite_positive(s.beta), "arc.sigma_beta > 0");
    }
};

}  // namespace

void ArcParameters::validate() const {
    require(finite_positive(g_min), "arc.g_min > 0");
    require(finite_positive(i0), "arc.i0 > 0");
    require(std::isfinite(k) && k >= 0.0, "arc.k >= 0");
    require(finite_positive(u_c), "arc.u_c > 0");
    require(finite_positive(p_m), "arc.p_m > 0");
    std::visit(ThetaValidator{}, theta_law);
    std::visit(SigmaValidator{}, sigma_law);
}

void CircuitParameters::validate() const {
    require(finite_positive(r), "circuit.r > 0");
    require(finite_positive(l), "circuit.l > 0");
    require(finite_positive(e_m), "circuit.e_m > 0");
    require(finite_positive(f), "circuit.f > 0");
}

double CircuitParameters::angular_frequency() const noexcept {
    return 2.0 * std::numbers::pi * f;
}

double CircuitParameters::source_voltage(double t) const noexcept {
    return e_m * std::sin(angular_frequency() * t);
}

double sigma(const SigmaLaw& law, double i0, double i) {
    const double x = std::abs(i) / i0;
    struct Eval {
        double x;
        double abs_i;
        double i0;
        double operator()(const GaussianSigma&) const { return std::exp(-x * x); }
        double operator()(const PowerExpSigma& s) const { return std::exp(-std::pow(x, s.a)); }
        double operator()(const ShieldedExpSigma& s) const {
            return std::exp(-std::pow(x, s.a / (s.delta + abs_i)));
        }
        double operator()(const LogisticSigma& s) const {
            return 1.0 / (1.0 + std::exp(s.beta * (abs_i - i0)));
        }
    };
    return std::visit(Eval{x, std::abs(i), i0}, law);
}

double theta(const ThetaLaw& law, double i) {
    struct Eval {
        double abs_i;
        double operator()(const ConstantTheta& c) const { return c.theta; }
        double operator()(const CurrentDependentTheta& c) const {
            return c.theta0 + c.theta1 * std::exp(-c.alpha * abs_i);
        }
    };
    return std::visit(Eval{std::abs(i)}, law);
}

double target_conductance(const ArcParameters& arc, double i, double u) {
    const double w = sigma(arc.sigma_law, arc.i0, i);
    const double i2 = i * i;
    const double cassie = (u * i - arc.k * i2) / (arc.u_c * arc.u_c);
    const double mayr = i2 / arc.p_m;
    return arc.g_min + (1.0 - w) * cassie + w * mayr;
}

ArcDerivative arc_rhs(const ArcParameters& arc, const CircuitParameters& circuit, double t,
                      const ArcState& s) {
    if (!(s.g > 0.0)) {
        throw Error(ErrorCode::non_positive_conductance,
                    "arc conductance left the positive range (g = " + std::to_string(s.g) +
                        " at t = " + std::to_string(t) + ")");
    }
    const double u = s.i / s.g;
    ArcDerivative d;
    d.di_dt = (circuit.source_voltage(t) - circuit.r * s.i - u) / circuit.l;
    d.dg_dt = (target_conductance(arc, s.i, u) - s.g) / theta(arc.theta_law, s.i);
    return d;
}

double mayr_rhs(const ArcParameters& arc, double i, double g) {
    return (arc.g_min + i * i / arc.p_m - g) / theta(arc.theta_law, i);
}

double cassie_rhs(const ArcParameters& arc, double i, double u, double g) {
    const double target = arc.g_min + (u * i - arc.k * i * i) / (arc.u_c * arc.u_c);
    return (target - g) / theta(arc.theta_law, i);
}

double mayr_sinusoidal_g(const ArcParameters& arc, double i_m, double f, double t) {
    const auto* c = std::get_if<ConstantTheta>(&arc.theta_law);
    if (c == nullptr) {
        throw Error(ErrorCode::unsupported_theta_law,
                    "the sinusoidal Mayr closed form needs a constant time constant");
    }
    const double x = 4.0 * std::numbers::pi * f * c->theta;
    const double phi = std::atan(x);
    const double envelope = 1.0 / std::sqrt(1.0 + x * x);
    const double swing = i_m * i_m / (2.0 * arc.p_m);
    return arc.g_min + swing * (1.0 - envelope * std::cos(4.0 * std::numbers::pi * f * t - phi));
}

double hf_limit_conductance(const ArcParameters& arc, double i_m) {
    return arc.g_min + i_m * i_m / (2.0 * arc.p_m);
}

}  // namespace arcmem
