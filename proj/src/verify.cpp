#include "hbm/verify.hpp"

#include "hbm/heat_kernel.hpp"
#include "hbm/hyperbolic_calculus.hpp"
#include "hbm/parallel.hpp"
#include "hbm/radial_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace hbm {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string point(int d, double t) { return "d=" + std::to_string(d) + " t=" + sci(t); }

std::vector<int> or_default(const std::vector<int>& v, std::vector<int> fallback) { return v.empty() ? fallback : v; }
std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
    return v.empty() ? fallback : v;
}

std::vector<CheckResult> identities() {
    std::vector<CheckResult> out;
    for (int l = 1; l <= 8; ++l) {
        const SinhPowerExpansion e = sinh_power_derivative(2 * l + 1, l);
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double r = 0.25 * i;
            const double expected = millson_identity_value(l, r);
            const double got = evaluate_expansion(e, r);
            const double err = expected == 0.0 ? std::fabs(got) : std::fabs(got / expected - 1.0);
            worst = std::max(worst, err);
        }
        out.push_back({"D^" + std::to_string(l) + " sinh^" + std::to_string(2 * l + 1), worst <= 1e-10,
                       "max relative error " + sci(worst)});
    }
    // Closed coefficient formulas against term-by-term application of D.
    for (int n = 2; n <= 12; ++n) {
        SinhPowerExpansion iterated(n, 0, {{1, 0, n}});
        bool same = true;
        for (int k = 1; k <= n; ++k) {
            iterated = iterated.apply_operator();
            same = same && iterated.terms() == sinh_power_derivative(n, k).terms();
        }
        out.push_back({"closed forms n=" + std::to_string(n), same, same ? "exact match for k <= n" : "mismatch"});
    }
    return out;
}

std::vector<CheckResult> normalization(const VerifyOptions& o) {
    const auto dims = or_default(o.dimensions, {2, 3, 4, 5, 6, 7});
    const auto times = or_default(o.times, {0.5, 1.0, 5.0, 20.0});
    std::vector<CheckResult> out;
    for (int d : dims) {
        const double tol = (d % 2 == 0 && d >= 4) ? 1e-5 : 1e-6;
        for (double t : times) {
            const double x = -0.5 * (d - 1) * std::sqrt(t) - 1.0;  // T = 0: the whole mass
            const double mass = direct_kernel_quadrature(Dimension(d), t, x, o.spec).value;
            const double err = std::fabs(mass - 1.0);
            out.push_back({"mass " + point(d, t), err <= tol, "|mass - 1| = " + sci(err)});
        }
    }
    return out;
}

std::vector<CheckResult> millson(const VerifyOptions& o) {
    auto dims = or_default(o.dimensions, {5, 7});
    const auto times = or_default(o.times, {0.5, 1.0, 2.0, 5.0, 10.0});
    std::vector<CheckResult> out;
    for (int d : dims) {
        if (d % 2 == 0 || d < 5) continue;
        double worst = 0.0;
        for (double t : times) {
            for (double r : {0.2, 0.5, 1.0, 2.0, 5.0}) {
                auto lower = [&](double s) { return q_odd(Dimension(d - 2), {t, s}); };
                const LogValue numeric = millson_step_numeric(lower, Dimension(d), {t, r});
                const LogValue exact = q_odd(Dimension(d), {t, r});
                worst = std::max(worst, std::fabs(std::expm1(numeric.log_magnitude() - exact.log_magnitude())));
            }
        }
        out.push_back({"symbolic vs numeric d=" + std::to_string(d), worst <= 1e-6, "max relative error " + sci(worst)});
    }
    return out;
}

std::vector<CheckResult> davies(const VerifyOptions& o) {
    const auto dims = or_default(o.dimensions, {2, 3, 4, 5, 6});
    std::vector<CheckResult> out;
    for (int d : dims) {
        const EnvelopeRange coarse = davies_log_ratio_range(d, 12, 41, o.spec);
        const EnvelopeRange fine = davies_log_ratio_range(d, 23, 81, o.spec);
        const bool finite = std::isfinite(coarse.width()) && std::isfinite(fine.width());
        const double change = std::fabs(fine.width() / coarse.width() - 1.0);
        out.push_back({"envelope d=" + std::to_string(d), finite && change < 0.05,
                       "log ratio in [" + sci(fine.min_log_ratio) + ", " + sci(fine.max_log_ratio) +
                           "], width change " + sci(change)});
    }
    return out;
}

std::vector<CheckResult> cross_oracle(const VerifyOptions& o) {
    const auto dims = or_default(o.dimensions, {2, 3, 4, 5, 6});
    const auto times = or_default(o.times, {1.0, 5.0, 20.0});
    std::vector<CheckResult> out;
    for (int d : dims) {
        const double tol = (d % 2 == 0 && d >= 4) ? 1e-4 : 1e-5;
        for (double t : times) {
            double worst = 0.0;
            for (double x : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
                const double a = tail(Dimension(d), t, x, o.spec).value;
                const double b = direct_kernel_quadrature(Dimension(d), t, x, o.spec).value;
                worst = std::max(worst, std::fabs(a - b));
            }
            out.push_back({"reduction vs quadrature " + point(d, t), worst <= tol, "max |difference| " + sci(worst)});
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"identities", "normalization", "millson", "davies", "cross-oracle"};
    return names;
}

bool is_suite(std::string_view name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<CheckResult> run_suite(std::string_view name, const VerifyOptions& options) {
    if (name == "identities") return identities();
    if (name == "normalization") return normalization(options);
    if (name == "millson") return millson(options);
    if (name == "davies") return davies(options);
    if (name == "cross-oracle") return cross_oracle(options);
    throw std::invalid_argument("unknown suite: " + std::string(name));
}

EnvelopeRange davies_log_ratio_range(int d, int nt, int nr, const QuadratureSpec& spec) {
    if (nt < 2 || nr < 2) throw std::invalid_argument("davies_log_ratio_range needs at least 2 points per axis");
    const Dimension dim(d);
    const double lo = std::log(0.1);
    const double hi = std::log(50.0);
    std::vector<double> ratios(static_cast<std::size_t>(nt) * nr);
    parallel_for(ratios.size(), [&](std::size_t k) {
        const double t = std::exp(lo + (hi - lo) * static_cast<double>(k / nr) / (nt - 1));
        const double r = 40.0 * static_cast<double>(k % nr) / (nr - 1);
        ratios[k] = heat_kernel(dim, {t, r}, spec).log_magnitude() - davies_envelope(dim, {t, r}).log_magnitude();
    });
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    return {*mn, *mx};
}

}  // namespace hbm
