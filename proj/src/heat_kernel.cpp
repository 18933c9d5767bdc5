#include "hbm/heat_kernel.hpp"

#include "hbm/hyperbolic_calculus.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hbm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2 pi)

using HighPrecision = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>>;

// Below this radius the odd kernels are summed in extended precision
// straight away; their terms cancel like r^{-2(m-1)}.
constexpr double kOddDirectRadius = 0.05;
// Cancellation ratio (sum|t_i| / |sum t_i|) tolerated in the double path.
constexpr double kOddMaxCancellation = 1e3;
// Even analytic kernels are flat to O(r^2) below this radius.
constexpr double kOddFloorRadius = 1e-6;

double log_abs_rational(const ExactRational& q) {
    return log_abs(boost::multiprecision::numerator(q)) - log_abs(boost::multiprecision::denominator(q));
}

}  // namespace

void EvaluationPoint::validate() const {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("time t must be finite and > 0");
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("radius r must be finite and >= 0");
}

// ---------------------------------------------------------------------------
// d = 3 and d = 2

LogValue q3(EvaluationPoint p) {
    p.validate();
    const double log_q = -0.5 * p.t - 1.5 * (kLog2Pi + std::log(p.t)) + log_x_over_sinh(p.r) -
                         p.r * p.r / (2.0 * p.t);
    return LogValue::from_log(log_q);
}

LogValue q2(EvaluationPoint p, const QuadratureSpec& spec) {
    p.validate();
    const double t = p.t;
    const double r = p.r;
    // Past r the integrand falls at least like exp(-(r/t + 1/2)(s - r) - (s - r)^2/(2t)).
    const double rate = r / t + 0.5;
    const double m = spec.tail_sigma_multiplier;
    const double span = std::min(m * std::sqrt(t), 0.5 * m * m / rate);
    auto log_g = [t](double s) { return std::log(s) - s * s / (2.0 * t); };
    const LogQuadratureResult integral = integrate_sqrt_singularity_log(log_g, r, r + span, spec);
    const double log_pref = 0.5 * std::numbers::ln2 - t / 8.0 - 1.5 * (kLog2Pi + std::log(t));
    return LogValue::from_log(log_pref + integral.log_value);
}

// ---------------------------------------------------------------------------
// Odd dimensions: symbolic Millson recursion

OddKernelExpression OddKernelExpression::three_dimensional() {
    return OddKernelExpression(Dimension(3), {OddKernelTerm{1, 0, 1, 0, 1}});
}

OddKernelExpression::OddKernelExpression(Dimension d, std::vector<OddKernelTerm> terms)
    : dimension_(d) {
    if (!d.is_odd() || d.value() < 3) throw std::invalid_argument("OddKernelExpression needs odd d >= 3");
    std::map<std::array<int, 4>, ExactRational> merged;
    for (const auto& t : terms) {
        merged[{t.t_inverse_power, t.r_power, t.cosh_power, t.sinh_inverse_power}] += t.coefficient;
    }
    for (const auto& [k, c] : merged) {
        if (c != 0) terms_.push_back({c, k[0], k[1], k[2], k[3]});
    }
}

double OddKernelExpression::log_prefactor(double t) const {
    const int m = dimension_.half();
    return -0.5 * m * m * t - 1.5 * (kLog2Pi + std::log(t)) - (m - 1) * kLog2Pi;
}

OddKernelExpression OddKernelExpression::apply_millson() const {
    // -1/sinh r * d/dr of t^{-a} r^p cosh^b sinh^{-c} exp(-r^2/2t); the factor
    // exp(-d t/2) / (2 pi) is absorbed by the prefactor of dimension d + 2.
    std::vector<OddKernelTerm> out;
    out.reserve(4 * terms_.size());
    for (const auto& s : terms_) {
        const int a = s.t_inverse_power;
        const int p = s.r_power;
        const int b = s.cosh_power;
        const int c = s.sinh_inverse_power;
        if (p != 0) out.push_back({-s.coefficient * p, a, p - 1, b, c + 1});
        if (b != 0) out.push_back({-s.coefficient * b, a, p, b - 1, c});
        if (c != 0) out.push_back({s.coefficient * c, a, p, b + 1, c + 2});
        out.push_back({s.coefficient, a + 1, p + 1, b, c + 1});
    }
    return OddKernelExpression(Dimension(dimension_.value() + 2), std::move(out));
}

LogValue OddKernelExpression::evaluate(EvaluationPoint p) const {
    p.validate();
    const double log_outer = log_prefactor(p.t) - p.r * p.r / (2.0 * p.t);

    if (p.r >= kOddDirectRadius) {
        const double lt = std::log(p.t);
        const double lr = std::log(p.r);
        const double lc = log_cosh(p.r);
        const double ls = log_sinh(p.r);
        std::vector<double> logs;
        std::vector<int> signs;
        logs.reserve(terms_.size());
        signs.reserve(terms_.size());
        for (const auto& s : terms_) {
            logs.push_back(log_abs_rational(s.coefficient) - s.t_inverse_power * lt + s.r_power * lr +
                           s.cosh_power * lc - s.sinh_inverse_power * ls);
            signs.push_back(s.coefficient.sign());
        }
        double cancellation = 1.0;
        const LogValue sum = signed_log_sum(logs, signs, &cancellation);
        if (cancellation <= kOddMaxCancellation) return sum * LogValue::from_log(log_outer);
    }

    const HighPrecision r = std::max(p.r, kOddFloorRadius);
    const HighPrecision t = p.t;
    const HighPrecision ch = cosh(r);
    const HighPrecision sh = sinh(r);
    HighPrecision sum = 0;
    for (const auto& s : terms_) {
        HighPrecision term = HighPrecision(boost::multiprecision::numerator(s.coefficient)) /
                             HighPrecision(boost::multiprecision::denominator(s.coefficient));
        term *= pow(r, s.r_power) * pow(ch, s.cosh_power);
        term /= pow(t, s.t_inverse_power) * pow(sh, s.sinh_inverse_power);
        sum += term;
    }
    if (sum == 0) return {};
    const double log_sum = static_cast<double>(log(abs(sum)));
    return LogValue::from_log(log_outer + log_sum, sum > 0 ? 1 : -1);
}

OddKernelExpression build_odd_kernel(Dimension d) {
    if (!d.is_odd()) throw std::invalid_argument("build_odd_kernel needs odd d");
    static std::mutex mutex;
    static std::map<int, OddKernelExpression> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(d.value()); it != cache.end()) return it->second;
    OddKernelExpression e = OddKernelExpression::three_dimensional();
    while (e.dimension().value() < d.value()) {
        const int next = e.dimension().value() + 2;
        if (auto it = cache.find(next); it != cache.end()) {
            e = it->second;
        } else {
            e = e.apply_millson();
            cache.emplace(next, e);
        }
    }
    cache.emplace(d.value(), e);
    return e;
}

LogValue q_odd(Dimension d, EvaluationPoint p) {
    if (!d.is_odd()) throw std::invalid_argument("q_odd needs odd d");
    if (d.value() == 3) return q3(p);
    thread_local std::map<int, OddKernelExpression> local;
    auto it = local.find(d.value());
    if (it == local.end()) it = local.emplace(d.value(), build_odd_kernel(d)).first;
    return it->second.evaluate(p);
}

// ---------------------------------------------------------------------------
// Even dimensions: numerical Millson recursion

LogValue millson_step_numeric(const RadialKernel& q_lower, Dimension d, EvaluationPoint p, DifferenceStep step) {
    p.validate();
    if (d.value() < 4) throw std::invalid_argument("millson_step_numeric needs d >= 4");
    if (p.r < step.min_radius) {
        throw std::domain_error("millson_step_numeric: r below the finite-difference threshold");
    }
    const double t = p.t;
    const double r = p.r;
    const double scale_length = std::min({1.0, std::sqrt(t), t / r});
    const double h = std::min(step.scale * scale_length, 0.25 * r);

    const std::array<double, 4> offsets{-2.0 * h, -h, h, 2.0 * h};
    std::array<LogValue, 4> f;
    for (std::size_t i = 0; i < 4; ++i) f[i] = q_lower(r + offsets[i]);
    // Difference the ratios f(r + k h) / f(r - h) so nothing under/overflows.
    const double ref = f[1].log_magnitude();
    std::array<double, 4> rho{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (f[i].is_zero()) throw std::domain_error("millson_step_numeric: lower kernel vanished");
        rho[i] = f[i].sign() * std::exp(f[i].log_magnitude() - ref);
    }
    const double d1 = (rho[2] - rho[1]) / (2.0 * h);
    const double d2 = (rho[3] - rho[0]) / (4.0 * h);
    const double derivative = (4.0 * d1 - d2) / 3.0;  // in units of f(r - h)

    const double log_factor = -0.5 * (d.value() - 2) * t - kLog2Pi - log_sinh(r) + ref;
    return LogValue::from_log(log_factor) * LogValue::from_double(-derivative * f[1].sign());
}

double even_kernel_min_radius(Dimension d) {
    if (!d.is_even()) throw std::invalid_argument("even_kernel_min_radius needs even d");
    const int levels = (d.value() - 2) / 2;
    if (levels == 0) return 0.0;
    if (levels == 1) return 1e-3;
    return 0.05 * (levels - 1);
}

namespace {

LogValue q_even_impl(Dimension d, EvaluationPoint p, const QuadratureSpec& base) {
    if (d.value() == 2) return q2(p, base);
    const Dimension lower(d.value() - 2);
    const double r_min = even_kernel_min_radius(d);
    auto lower_kernel = [&](double r) { return q_even_impl(lower, {p.t, r}, base); };
    if (p.r >= r_min) return millson_step_numeric(lower_kernel, d, p);

    // The kernel is an even analytic function of r: fit log q as a quadratic
    // in r^2 through r_min, 2 r_min, 3 r_min.
    std::array<double, 3> x{};
    std::array<double, 3> y{};
    for (int i = 0; i < 3; ++i) {
        const double r = (i + 1) * r_min;
        x[i] = r * r;
        const LogValue v = millson_step_numeric(lower_kernel, d, {p.t, r});
        if (v.sign() <= 0) throw std::domain_error("q_even: non-positive kernel near the origin");
        y[i] = v.log_magnitude();
    }
    const double x0 = p.r * p.r;
    double y0 = 0.0;
    for (int i = 0; i < 3; ++i) {
        double li = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) li *= (x0 - x[j]) / (x[i] - x[j]);
        }
        y0 += li * y[i];
    }
    return LogValue::from_log(y0);
}

}  // namespace

LogValue q_even(Dimension d, EvaluationPoint p, const QuadratureSpec& spec) {
    if (!d.is_even()) throw std::invalid_argument("q_even needs even d");
    p.validate();
    const int levels = (d.value() - 2) / 2;
    return q_even_impl(d, p, spec.tightened(std::pow(100.0, levels)));
}

LogValue heat_kernel(Dimension d, EvaluationPoint p, const QuadratureSpec& spec) {
    return d.is_odd() ? q_odd(d, p) : q_even(d, p, spec);
}

LogValue davies_envelope(Dimension d, EvaluationPoint p) {
    p.validate();
    const double k = d.value() - 1.0;
    const double t = p.t;
    const double r = p.r;
    const double log_env = -0.5 * d.value() * std::log(t) - k * k * t / 8.0 - 0.5 * k * r - r * r / (2.0 * t) +
                           0.5 * (d.value() - 3) * std::log1p(r + t) + std::log1p(r);
    return LogValue::from_log(log_env);
}

}  // namespace hbm
