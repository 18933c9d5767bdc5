#include "hbm/berry_esseen.hpp"

#include "hbm/log_value.hpp"
#include "hbm/parallel.hpp"
#include "hbm/radial_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hbm {

void DiscrepancySearch::validate() const {
    if (!(lower < upper)) throw std::invalid_argument("search window needs lower < upper");
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be > 0");
    if (!(resolution > 0.0 && resolution < grid_step)) {
        throw std::invalid_argument("resolution must lie in (0, grid_step)");
    }
    spec.validate();
}

DiscrepancyRecord sup_discrepancy(Dimension d, double t, const DiscrepancySearch& search) {
    if (!(t >= 1.0)) throw std::invalid_argument("sup_discrepancy needs t >= 1");
    search.validate();

    auto gap = [&](double x) { return std::fabs(tail(d, t, x, search.spec).value - normal_tail(x)); };

    const auto points = static_cast<std::size_t>(std::floor((search.upper - search.lower) / search.grid_step + 1e-9)) + 1;
    std::vector<double> values(points);
    parallel_for(points, [&](std::size_t i) { values[i] = gap(search.lower + i * search.grid_step); });

    // max_element keeps the first maximum, i.e. the smallest x.
    const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    DiscrepancyRecord rec{t, values[best], search.lower + best * search.grid_step, static_cast<long>(points)};

    // Golden-section maximization on the bracketing grid cells.
    constexpr double kInvPhi = 0.6180339887498948482;
    double a = std::max(search.lower, rec.argmax_x - search.grid_step);
    double b = std::min(search.upper, rec.argmax_x + search.grid_step);
    double c = b - kInvPhi * (b - a);
    double e = a + kInvPhi * (b - a);
    double fc = gap(c);
    double fe = gap(e);
    rec.evaluations += 2;
    while (b - a > search.resolution) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - kInvPhi * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + kInvPhi * (b - a);
            fe = gap(e);
        }
        ++rec.evaluations;
    }
    const double x_star = fc >= fe ? c : e;
    const double f_star = std::max(fc, fe);

    // Sanity check: the refined point must beat its neighbours and the grid
    // maximum, otherwise the local unimodality assumption failed.
    const double left = gap(x_star - search.resolution);
    const double right = gap(x_star + search.resolution);
    rec.evaluations += 2;
    if (f_star >= rec.delta && f_star >= left && f_star >= right) {
        rec.delta = f_star;
        rec.argmax_x = x_star;
    }
    return rec;
}

void DiscrepancyCurve::add(const DiscrepancyRecord& r) {
    if (!records_.empty() && !(r.t > records_.back().t)) {
        throw std::invalid_argument("DiscrepancyCurve: t must increase strictly");
    }
    if (!(r.delta >= 0.0)) throw std::invalid_argument("DiscrepancyCurve: delta must be >= 0");
    records_.push_back(r);
}

DiscrepancyCurve discrepancy_curve(Dimension d, std::span<const double> times, const DiscrepancySearch& search) {
    std::vector<DiscrepancyRecord> records(times.size());
    // The inner grid is parallel as well; running times one after another keeps
    // the worker count bounded.
    for (std::size_t i = 0; i < times.size(); ++i) records[i] = sup_discrepancy(d, times[i], search);
    DiscrepancyCurve curve(d);
    for (const auto& r : records) curve.add(r);
    return curve;
}

RateFit rate_fit(const DiscrepancyCurve& curve) {
    const auto& recs = curve.records();
    if (recs.size() < 4) throw std::invalid_argument("rate_fit needs at least 4 records");
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& r : recs) {
        if (!(r.delta > 0.0)) throw std::domain_error("rate_fit: delta must be > 0");
        sx += std::log(r.t);
        sy += std::log(r.delta);
    }
    const double n = static_cast<double>(recs.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& r : recs) {
        const double dx = std::log(r.t) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(r.delta) - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (const auto& r : recs) {
        const double res = std::log(r.delta) - (fit.intercept + fit.slope * std::log(r.t));
        ss += res * res;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

double sharpness_at_zero(Dimension d, double t, const QuadratureSpec& spec) {
    if (!(t >= 1.0)) throw std::invalid_argument("sharpness_at_zero needs t >= 1");
    return std::sqrt(t) * (tail(d, t, 0.0, spec).value - 0.5);
}

double sharp1_representation(double t, const QuadratureSpec& spec) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("sharp1_representation needs t > 0");
    spec.validate();
    const double st = std::sqrt(t);
    // u = w^2 absorbs the (1 - cosh(t/2)/cosh y)^{-1/2} ~ u^{-1/2} singularity at 0.
    auto f = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double u = w * w;
        const double y = u * st + 0.5 * t;
        // 1 - cosh(t/2)/cosh y = 2 sinh((u sqrt t + t)/2) sinh(u sqrt t / 2) / cosh y
        const double log_a = std::numbers::ln2 + log_sinh(0.5 * (u * st + t)) + log_sinh(0.5 * u * st) - log_cosh(y);
        const double log_b = log1mexp(2.0 * y);
        const double log_c = std::log1p(std::exp(-2.0 * y));
        const double ft = std::expm1(-0.5 * log_a + log_b - 0.5 * log_c);
        return 2.0 * w * std::exp(-0.5 * u * u) * ft;
    };
    const double w_max = std::sqrt(spec.tail_sigma_multiplier);
    QuadratureSpec tight = spec;
    tight.abs_tol = std::min(spec.abs_tol, 1e-13);
    const QuadratureResult r = integrate_adaptive(f, 0.0, w_max, tight);
    return r.value / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace hbm
