#include "hbm/hyperbolic_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hbm {

ExactInteger double_factorial(int m) {
    if (m < -1) throw std::invalid_argument("double_factorial: m must be >= -1");
    ExactInteger r = 1;
    for (int i = m; i > 1; i -= 2) r *= i;
    return r;
}

ExactInteger factorial(int m) {
    if (m < 0) throw std::invalid_argument("factorial: m must be >= 0");
    ExactInteger r = 1;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
}

double log_abs(const ExactInteger& v) {
    if (v == 0) return -std::numeric_limits<double>::infinity();
    ExactInteger a = boost::multiprecision::abs(v);
    const auto bits = boost::multiprecision::msb(a);
    if (bits < 900) return std::log(a.convert_to<double>());
    const auto shift = bits - 60;
    ExactInteger top = a >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

double surface_area(Dimension d) {
    const double h = 0.5 * d.value();
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double log_surface_area(Dimension d) {
    const double h = 0.5 * d.value();
    return std::numbers::ln2 + h * std::log(std::numbers::pi) - std::lgamma(h);
}

SinhPowerExpansion::SinhPowerExpansion(int base_power, int operator_applications,
                                       std::vector<SinhPowerTerm> terms)
    : base_power_(base_power), applications_(operator_applications) {
    std::map<std::pair<int, int>, ExactInteger> merged;
    for (auto& t : terms) merged[{t.cosh_exponent, t.sinh_exponent}] += t.coefficient;
    for (auto& [key, c] : merged) {
        if (c != 0) terms_.push_back({c, key.first, key.second});
    }
}

SinhPowerExpansion SinhPowerExpansion::apply_operator() const {
    // D(cosh^a sinh^b) = a cosh^{a-1} sinh^b + b cosh^{a+1} sinh^{b-2}
    std::vector<SinhPowerTerm> out;
    out.reserve(2 * terms_.size());
    for (const auto& t : terms_) {
        if (t.cosh_exponent != 0) {
            out.push_back({t.coefficient * t.cosh_exponent, t.cosh_exponent - 1, t.sinh_exponent});
        }
        if (t.sinh_exponent != 0) {
            out.push_back({t.coefficient * t.sinh_exponent, t.cosh_exponent + 1, t.sinh_exponent - 2});
        }
    }
    return {base_power_, applications_ + 1, std::move(out)};
}

LogValue SinhPowerExpansion::evaluate_log(double r) const {
    if (r < 0.0) throw std::domain_error("evaluate_expansion: r must be >= 0");
    std::vector<double> logs;
    std::vector<int> signs;
    logs.reserve(terms_.size());
    signs.reserve(terms_.size());
    const double lc = r > 0.0 ? log_cosh(r) : 0.0;
    const double ls = r > 0.0 ? log_sinh(r) : 0.0;
    for (const auto& t : terms_) {
        if (r == 0.0) {
            if (t.sinh_exponent < 0) {
                throw std::domain_error("evaluate_expansion: negative sinh exponent at r = 0");
            }
            if (t.sinh_exponent > 0) continue;
            logs.push_back(log_abs(t.coefficient));
        } else {
            logs.push_back(log_abs(t.coefficient) + t.cosh_exponent * lc + t.sinh_exponent * ls);
        }
        signs.push_back(t.coefficient.sign());
    }
    return signed_log_sum(logs, signs);
}

namespace {

// Coefficients of D^{2k} sinh^n:
//   (2k)! / (2^{k-l} (k-l)! (2l)!) * prod_{m=0}^{k+l-1} (n - 2m)  on cosh^{2l} sinh^{n-2k-2l}
std::vector<SinhPowerTerm> even_terms(int n, int k) {
    std::vector<SinhPowerTerm> terms;
    const ExactInteger top = factorial(2 * k);
    for (int l = 0; l <= k; ++l) {
        ExactInteger c = top / (ExactInteger(1) << (k - l)) / factorial(k - l) / factorial(2 * l);
        for (int m = 0; m <= k + l - 1; ++m) c *= (n - 2 * m);
        terms.push_back({c, 2 * l, n - 2 * k - 2 * l});
    }
    return terms;
}

// Coefficients of D^{2k+1} sinh^n:
//   (2k+1)! / (2^{k+1-l} (k+1-l)! (2l-1)!) * prod_{m=0}^{k+l-1} (n - 2m)  on cosh^{2l-1} sinh^{n-2k-2l}
std::vector<SinhPowerTerm> odd_terms(int n, int k) {
    std::vector<SinhPowerTerm> terms;
    const ExactInteger top = factorial(2 * k + 1);
    for (int l = 1; l <= k + 1; ++l) {
        ExactInteger c = top / (ExactInteger(1) << (k + 1 - l)) / factorial(k + 1 - l) / factorial(2 * l - 1);
        for (int m = 0; m <= k + l - 1; ++m) c *= (n - 2 * m);
        terms.push_back({c, 2 * l - 1, n - 2 * k - 2 * l});
    }
    return terms;
}

}  // namespace

SinhPowerExpansion sinh_power_derivative(int n, int k) {
    if (n < 1) throw std::invalid_argument("sinh_power_derivative: n must be >= 1");
    if (k < 0) throw std::invalid_argument("sinh_power_derivative: k must be >= 0");
    const int closed = std::min(k, n);
    std::vector<SinhPowerTerm> terms;
    if (closed == 0) {
        terms.push_back({1, 0, n});
    } else if (closed % 2 == 0) {
        terms = even_terms(n, closed / 2);
    } else {
        terms = odd_terms(n, closed / 2);
    }
    SinhPowerExpansion e(n, closed, std::move(terms));
    for (int i = closed; i < k; ++i) e = e.apply_operator();
    return e;
}

double evaluate_expansion(const SinhPowerExpansion& e, double r) { return e.evaluate_log(r).value(); }

double millson_identity_value(int l, double r) {
    if (l < 1) throw std::invalid_argument("millson_identity_value: l must be >= 1");
    const double c = double_factorial(2 * l + 1).convert_to<double>() / (l + 1);
    return c * std::sinh((l + 1) * r);
}

}  // namespace hbm
