#include "hbm/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace hbm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

// 21-point Kronrod extension of the 10-point Gauss rule; node tables from Boost.
Panel kronrod21(const Integrand& f, double a, double b, long& evaluations) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fc = f(mid);
    double kronrod = fc * wk[0];
    double gauss = 0.0;
    double l1 = std::fabs(fc) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(mid + half * x[i]);
        const double fm = f(mid - half * x[i]);
        kronrod += (fp + fm) * wk[i];
        l1 += (std::fabs(fp) + std::fabs(fm)) * wk[i];
        if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
    }
    evaluations += 21;

    Panel p{a, b, kronrod * half, 0.0, l1 * std::fabs(half)};
    p.error = std::max(std::fabs((kronrod - gauss) * half), 50.0 * kEps * p.l1);
    if (!std::isfinite(p.value)) p.error = std::numeric_limits<double>::infinity();
    return p;
}

QuadratureResult adaptive(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                          int max_subdivisions) {
    QuadratureResult res;
    if (a == b) return res;
    const double sign = b < a ? -1.0 : 1.0;
    if (b < a) std::swap(a, b);

    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    Panel first = kronrod21(f, a, b, res.evaluations);
    double value = first.value;
    double error = first.error;
    double l1 = first.l1;
    heap.push(first);

    int panels = 1;
    while (error > std::max(abs_tol, rel_tol * std::fabs(value))) {
        if (panels >= max_subdivisions) {
            // Accept results whose remaining error is pure rounding.
            if (error <= 200.0 * kEps * l1) break;
            res.value = sign * value;
            res.error_estimate = error;
            throw QuadratureError("adaptive quadrature did not converge", res);
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval can no longer be bisected; keep its estimate as final.
            if (error <= 200.0 * kEps * l1) break;
            res.value = sign * value;
            res.error_estimate = error;
            throw QuadratureError("adaptive quadrature: interval underflow", res);
        }
        Panel left = kronrod21(f, worst.a, mid, res.evaluations);
        Panel right = kronrod21(f, mid, worst.b, res.evaluations);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum from the panels to shed accumulated update drift.
    double v = 0.0;
    double e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    res.value = sign * v;
    res.error_estimate = e;
    return res;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0 && abs_tol <= 1e-2)) throw std::invalid_argument("abs_tol must lie in (0, 1e-2]");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw std::invalid_argument("rel_tol must lie in (0, 1e-2]");
    if (max_subdivisions < 16) throw std::invalid_argument("max_subdivisions must be >= 16");
    if (!(tail_sigma_multiplier >= 8.0)) throw std::invalid_argument("tail_sigma_multiplier must be >= 8");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
    QuadratureSpec s = *this;
    s.abs_tol = std::max(abs_tol / factor, 1e-300);
    s.rel_tol = std::max(rel_tol / factor, 20.0 * kEps);
    s.max_subdivisions = max_subdivisions * 2;
    return s;
}

double effective_upper(double a, double b, const QuadratureSpec& spec, std::optional<GaussianTail> tail) {
    if (std::isfinite(b)) return b;
    if (!tail) throw std::invalid_argument("semi-infinite integral needs a GaussianTail window");
    return std::max(a, tail->center) + spec.tail_sigma_multiplier * tail->scale;
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                                    std::optional<GaussianTail> tail) {
    spec.validate();
    const double upper = effective_upper(a, b, spec, tail);
    return adaptive(f, a, upper, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
}

double log_sqrt_singularity_weight(double r, double w) {
    // cosh(r + w^2) - cosh r = 2 sinh(r + w^2/2) sinh(w^2/2)
    const double u = 0.5 * w * w;
    return std::numbers::ln2 + 0.5 * log_x_over_sinh(u) - 0.5 * log_sinh(r + u);
}

QuadratureResult integrate_sqrt_singularity(const Integrand& g, double r, double upper,
                                            const QuadratureSpec& spec, std::optional<GaussianTail> tail) {
    if (r < 0.0) throw std::invalid_argument("integrate_sqrt_singularity: r must be >= 0");
    const double s_max = effective_upper(r, upper, spec, tail);
    if (s_max <= r) return {};
    const double w_max = std::sqrt(s_max - r);
    auto h = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double gv = g(r + w * w);
        if (gv == 0.0) return 0.0;
        return std::exp(log_sqrt_singularity_weight(r, w)) * gv;
    };
    spec.validate();
    return adaptive(h, 0.0, w_max, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
}

LogQuadratureResult integrate_log(const LogIntegrand& log_f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    LogQuadratureResult out;
    if (!(b > a)) return out;

    constexpr int kSamples = 129;
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSamples; ++i) {
        const double x = a + (b - a) * (i + 0.5) / kSamples;
        const double v = log_f(x);
        if (std::isfinite(v)) shift = std::max(shift, v);
    }
    out.evaluations = kSamples;
    if (!std::isfinite(shift)) return out;

    auto scaled = [&](double x) {
        const double v = log_f(x);
        return v == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(v - shift);
    };
    const QuadratureResult r = adaptive(scaled, a, b, 1e-300, spec.rel_tol, spec.max_subdivisions);
    out.evaluations += r.evaluations;
    if (r.value <= 0.0) return out;
    out.log_value = shift + std::log(r.value);
    out.relative_error = r.error_estimate / r.value;
    return out;
}

LogQuadratureResult integrate_sqrt_singularity_log(const LogIntegrand& log_g, double r, double upper,
                                                   const QuadratureSpec& spec) {
    if (r < 0.0) throw std::invalid_argument("integrate_sqrt_singularity_log: r must be >= 0");
    if (!(upper > r)) return {};
    auto h = [&](double w) {
        if (w <= 0.0) return -std::numeric_limits<double>::infinity();
        return log_sqrt_singularity_weight(r, w) + log_g(r + w * w);
    };
    return integrate_log(h, 0.0, std::sqrt(upper - r), spec);
}

}  // namespace hbm
