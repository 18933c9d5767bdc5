#include "hbm/radial_distribution.hpp"

#include "hbm/hyperbolic_calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLogSqrt2Pi = 0.5 * kLog2Pi;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

// Gaussian probability P(a <= Z <= b), a <= b, without subtracting numbers near 1.
double normal_interval(double a, double b) {
    if (a >= 0.0) return normal_tail(a) - normal_tail(b);
    if (b <= 0.0) return normal_tail(-b) - normal_tail(-a);
    return 1.0 - normal_tail(-a) - normal_tail(b);
}

// Edge values of x: -inf gives the whole mass, +inf none of it.
bool infinite_x(double x, TailMethod method, TailEstimate& out) {
    if (std::isinf(x)) {
        out = {x < 0.0 ? 1.0 : 0.0, 0.0, method};
        return true;
    }
    return false;
}

TailEstimate finish(LogValue total, double abs_error, TailMethod method) {
    double v = total.value();
    abs_error += 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(v);
    v = std::clamp(v, 0.0, 1.0);
    return {v, abs_error, method};
}

struct LogIntegral {
    LogValue value;
    double abs_error = 0.0;
};

LogIntegral log_integral(const LogIntegrand& f, double a, double b, const QuadratureSpec& spec) {
    const LogQuadratureResult r = integrate_log(f, a, b, spec);
    const LogValue v = r.as_log_value();
    return {v, std::fabs(v.value()) * r.relative_error};
}

}  // namespace

std::string_view to_string(TailMethod m) {
    switch (m) {
        case TailMethod::closed_form_d3: return "closed_form_d3";
        case TailMethod::odd_reduction: return "odd_reduction";
        case TailMethod::even_decomposition: return "even_decomposition";
        case TailMethod::direct_kernel_quadrature: return "direct_kernel_quadrature";
        case TailMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

void FluctuationPoint::validate() const {
    if (!(t >= kMinFluctuationTime) || !std::isfinite(t)) {
        throw std::invalid_argument("time t must be finite and >= 1e-3");
    }
    if (std::isnan(x)) throw std::invalid_argument("x must not be NaN");
}

double FluctuationPoint::threshold() const { return std::max(x * std::sqrt(t) + d.drift() * t, 0.0); }

double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double log_normal_tail(double x) {
    if (x < -1.0) return std::log1p(-normal_tail(-x));
    if (x <= 37.0) return std::log(normal_tail(x));
    // Mills ratio series; erfc is subnormal beyond x ~ 37.5.
    const double z = 1.0 / (x * x);
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2 * k - 1) * z;
        series += term;
    }
    return -0.5 * x * x - kLogSqrt2Pi - std::log(x) + std::log(series);
}

LogValue radial_density_log(Dimension d, EvaluationPoint p, const QuadratureSpec& spec) {
    p.validate();
    if (p.r == 0.0) return {};
    return LogValue::from_log(log_surface_area(d) + (d.value() - 1) * log_sinh(p.r)) * heat_kernel(d, p, spec);
}

double radial_density(Dimension d, EvaluationPoint p, const QuadratureSpec& spec) {
    return radial_density_log(d, p, spec).value();
}

// ---------------------------------------------------------------------------
// d = 3

TailEstimate tail_d3(double t, double x, const QuadratureSpec& spec) {
    FluctuationPoint{Dimension(3), t, x}.validate();
    spec.validate();
    TailEstimate out;
    if (infinite_x(x, TailMethod::closed_form_d3, out)) return out;

    // sqrt(2 pi) P = I_1 + I_2 with v0 = max(x, -sqrt t):
    //   I_1 = int_{v0}^inf e^{-v^2/2} (1 - e^{-2(t + v sqrt t)}) dv
    //   I_2 = t^{-1/2} int_{v0}^inf v e^{-v^2/2} (1 - e^{-2(t + v sqrt t)}) dv
    // Completing the square in e^{-v^2/2 - 2 v sqrt t - 2t} = e^{-(v + 2 sqrt t)^2/2}
    // leaves only normal tails and exponentials.
    const double st = std::sqrt(t);
    const double v0 = std::max(x, -st);
    const double v1 = v0 + 2.0 * st;
    const double i1 = kSqrt2Pi * normal_interval(v0, v1);
    const double gauss_gap = -std::exp(-0.5 * v0 * v0) * std::expm1(-2.0 * st * (v0 + st));
    const double i2 = (gauss_gap + 2.0 * st * kSqrt2Pi * normal_tail(v1)) / st;
    const double value = (i1 + i2) / kSqrt2Pi;
    return finish(LogValue::from_double(value), 0.0, TailMethod::closed_form_d3);
}

// ---------------------------------------------------------------------------
// odd d = 2n + 1

TailEstimate tail_odd(Dimension d, double t, double x, const QuadratureSpec& spec) {
    if (!d.is_odd()) throw std::invalid_argument("tail_odd needs odd d");
    FluctuationPoint{d, t, x}.validate();
    if (d.value() == 3) return tail_d3(t, x, spec);
    TailEstimate out;
    if (infinite_x(x, TailMethod::odd_reduction, out)) return out;

    const int n = d.half();
    const double T = FluctuationPoint{d, t, x}.threshold();
    const double log_omega = log_surface_area(d);
    LogValue boundary;
    for (int m = 1; m <= n - 1; ++m) {
        const LogValue expansion = sinh_power_derivative(2 * n - 1, m - 1).evaluate_log(T);
        if (expansion.is_zero()) continue;
        const LogValue kernel = q_odd(Dimension(2 * n + 1 - 2 * m), {t, T});
        const double log_weight = log_omega - 0.5 * (2 * n - m) * m * t - m * kLog2Pi;
        boundary += LogValue::from_log(log_weight) * kernel * expansion;
    }
    const TailEstimate reduced = tail_d3(static_cast<double>(n) * n * t, x, spec);
    return finish(boundary + LogValue::from_double(reduced.value), reduced.error_estimate,
                  TailMethod::odd_reduction);
}

// ---------------------------------------------------------------------------
// even d = 2n

double even_stabilized_integrand(Dimension d, double t, double x, double u) {
    if (!d.is_even()) throw std::invalid_argument("even_stabilized_integrand needs even d");
    const double c = d.half() - 0.5;
    const double st = std::sqrt(t);
    if (x < -c * st) throw std::domain_error("even_stabilized_integrand: x below the T = 0 boundary");
    if (u <= x) return 0.0;
    const double T = x * st + c * t;
    const double y = u * st + c * t;
    // 1 - cosh T / cosh y = 2 sinh((y + T)/2) sinh((y - T)/2) / cosh y
    const double log_gap =
        std::numbers::ln2 + log_sinh(0.5 * (y + T)) + log_sinh(0.5 * (u - x) * st) - log_cosh(y);
    const double log_f = std::log(y / (c * t)) - 0.5 * u * u + c * std::log1p(std::exp(-2.0 * y)) + c * log_gap;
    return std::exp(log_f);
}

EvenTailParts even_tail_parts(Dimension d, double t, double x, const QuadratureSpec& spec) {
    if (!d.is_even()) throw std::invalid_argument("even_tail_parts needs even d");
    FluctuationPoint{d, t, x}.validate();
    spec.validate();
    if (std::isinf(x)) throw std::domain_error("even_tail_parts needs finite x");

    const int n = d.half();
    const double c = n - 0.5;
    const double st = std::sqrt(t);
    const double m_sigma = spec.tail_sigma_multiplier;
    const bool zero_threshold = x <= -c * st;
    const double T = zero_threshold ? 0.0 : x * st + c * t;
    const double log_omega = log_surface_area(d);

    EvenTailParts parts;
    parts.zero_threshold = zero_threshold;
    double abs_error = 0.0;

    // J_1: boundary terms from n - 1 integrations by parts.
    for (int m = 1; m <= n - 1; ++m) {
        const LogValue expansion = sinh_power_derivative(2 * n - 2, m - 1).evaluate_log(T);
        if (expansion.is_zero()) continue;
        const LogValue kernel = q_even(Dimension(2 * n - 2 * m), {t, T}, spec);
        const double log_weight = log_omega - m * (n - 0.5 * (m + 1)) * t - m * kLog2Pi;
        parts.boundary += LogValue::from_log(log_weight) * kernel * expansion;
    }

    // a_n K_1: sum_k 2^k/(2k-1)!! [D^{n-2+k} sinh^{2n-2}](T) C_2(t) int_T^inf s e^{-s^2/2t} (cosh s - cosh T)^{k-1/2} ds
    const double log_an = log_omega - 0.5 * n * (n - 1) * t - (n - 1) * kLog2Pi;
    const double log_c2 = 0.5 * std::numbers::ln2 - t / 8.0 - 1.5 * (kLog2Pi + std::log(t));
    for (int k = 1; k <= n - 1; ++k) {
        const LogValue expansion = sinh_power_derivative(2 * n - 2, n - 2 + k).evaluate_log(T);
        if (expansion.is_zero()) continue;
        const double power = k - 0.5;
        auto log_f = [&](double w) {
            if (w <= 0.0) return kNegInf;
            const double h = w * w;
            const double s = T + h;
            const double log_gap = std::numbers::ln2 + log_sinh(T + 0.5 * h) + log_sinh(0.5 * h);
            return std::log(2.0 * w) + std::log(s) - s * s / (2.0 * t) + power * log_gap;
        };
        const double s_max = std::max(T, power * t) + m_sigma * st + 1.0;
        const LogIntegral integral = log_integral(log_f, 0.0, std::sqrt(s_max - T), spec);
        const double log_coef = k * std::numbers::ln2 - log_abs(double_factorial(2 * k - 1));
        const LogValue term = LogValue::from_log(log_an + log_c2 + log_coef) * expansion * integral.value;
        parts.singular_free += term;
        if (!integral.value.is_zero()) {
            abs_error += term.value() * integral.abs_error / std::fabs(integral.value.value());
        }
    }

    if (!zero_threshold) {
        // Stabilized Gaussian integral over u in [x, inf), with u = x + w^2.
        auto log_f = [&](double w) {
            if (w <= 0.0) return kNegInf;
            const double u = x + w * w;
            const double y = u * st + c * t;
            const double log_gap =
                std::numbers::ln2 + log_sinh(0.5 * (y + T)) + log_sinh(0.5 * w * w * st) - log_cosh(y);
            return std::log(2.0 * w) + std::log(y / (c * t)) - 0.5 * u * u +
                   c * std::log1p(std::exp(-2.0 * y)) + c * log_gap;
        };
        const double u_max = std::max(x, 0.0) + m_sigma;
        const LogIntegral integral = log_integral(log_f, 0.0, std::sqrt(u_max - x), spec);
        parts.gaussian = integral.value * LogValue::from_log(-kLogSqrt2Pi);
        abs_error += integral.abs_error / kSqrt2Pi;
    } else {
        // N_1 + N_2: Gaussian mass shifted by (n - 1/2) sqrt t and (n - 3/2) sqrt t.
        const int power = 2 * n - 2;
        auto shifted = [&](double shift, double log_scale) {
            const double lower = -shift * st;
            auto log_f = [&](double v) {
                const double u = lower + v;
                const double base = -0.5 * u * u;
                if (power == 0) return base;
                if (v <= 0.0) return kNegInf;
                return base + power * log1mexp(v * st);
            };
            const double upper = std::max(lower, 0.0) + m_sigma;
            LogIntegral r = log_integral(log_f, 0.0, upper - lower, spec);
            r.value = r.value * LogValue::from_log(log_scale - kLogSqrt2Pi);
            r.abs_error *= std::exp(log_scale - kLogSqrt2Pi);
            return r;
        };
        const LogIntegral n1 = shifted(c, 0.0);
        const LogIntegral n2 = shifted(c - 1.0, -(n - 1) * t);
        parts.gaussian = n1.value + n2.value;
        abs_error += n1.abs_error + n2.abs_error;
    }

    const double total = (parts.boundary + parts.singular_free + parts.gaussian).value();
    parts.relative_error = total > 0.0 ? abs_error / total : abs_error;
    return parts;
}

TailEstimate tail_even(Dimension d, double t, double x, const QuadratureSpec& spec) {
    if (!d.is_even()) throw std::invalid_argument("tail_even needs even d");
    FluctuationPoint{d, t, x}.validate();
    TailEstimate out;
    if (infinite_x(x, TailMethod::even_decomposition, out)) return out;
    const EvenTailParts parts = even_tail_parts(d, t, x, spec);
    const LogValue total = parts.boundary + parts.singular_free + parts.gaussian;
    return finish(total, parts.relative_error * total.value(), TailMethod::even_decomposition);
}

TailEstimate tail(Dimension d, double t, double x, const QuadratureSpec& spec) {
    if (d.value() == 3) return tail_d3(t, x, spec);
    return d.is_odd() ? tail_odd(d, t, x, spec) : tail_even(d, t, x, spec);
}

// ---------------------------------------------------------------------------

TailEstimate direct_kernel_quadrature(Dimension d, double t, double x, const QuadratureSpec& spec) {
    if (d.value() > 7) throw std::invalid_argument("direct_kernel_quadrature supports d <= 7");
    if (t > 50.0) throw std::invalid_argument("direct_kernel_quadrature supports t <= 50");
    const FluctuationPoint fp{d, t, x};
    fp.validate();
    spec.validate();
    TailEstimate out;
    if (infinite_x(x, TailMethod::direct_kernel_quadrature, out)) return out;

    const double T = fp.threshold();
    const double upper = std::max(T, d.drift() * t) + spec.tail_sigma_multiplier * std::sqrt(t) + 1.0;
    auto log_f = [&](double r) {
        const LogValue v = radial_density_log(d, {t, r}, spec);
        return v.sign() > 0 ? v.log_magnitude() : kNegInf;
    };
    const LogIntegral integral = log_integral(log_f, T, upper, spec);
    return finish(integral.value, integral.abs_error, TailMethod::direct_kernel_quadrature);
}

}  // namespace hbm
