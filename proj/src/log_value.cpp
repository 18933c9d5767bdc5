#include "hbm/log_value.hpp"

#include <algorithm>
#include <numbers>
#include <vector>

namespace hbm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LogValue LogValue::from_log(double log_magnitude, int sign) {
    LogValue v;
    if (sign == 0 || log_magnitude == kNegInf) return v;
    v.sign_ = sign > 0 ? 1 : -1;
    v.log_magnitude_ = log_magnitude;
    return v;
}

LogValue LogValue::from_double(double x) {
    if (x == 0.0) return {};
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogValue::value() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_magnitude_);
}

LogValue operator*(const LogValue& a, const LogValue& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    return LogValue::from_log(a.log_magnitude_ + b.log_magnitude_, a.sign_ * b.sign_);
}

LogValue operator/(const LogValue& a, const LogValue& b) {
    if (b.sign_ == 0) {
        return LogValue::from_log(std::numeric_limits<double>::infinity(), a.sign_ == 0 ? 1 : a.sign_);
    }
    if (a.sign_ == 0) return {};
    return LogValue::from_log(a.log_magnitude_ - b.log_magnitude_, a.sign_ * b.sign_);
}

LogValue LogValue::operator-() const {
    LogValue v = *this;
    v.sign_ = -v.sign_;
    return v;
}

LogValue operator+(const LogValue& a, const LogValue& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogValue& hi = a.log_magnitude_ >= b.log_magnitude_ ? a : b;
    const LogValue& lo = a.log_magnitude_ >= b.log_magnitude_ ? b : a;
    const double delta = lo.log_magnitude_ - hi.log_magnitude_;
    if (hi.sign_ == lo.sign_) {
        return LogValue::from_log(hi.log_magnitude_ + std::log1p(std::exp(delta)), hi.sign_);
    }
    if (delta == 0.0) return {};
    return LogValue::from_log(hi.log_magnitude_ + log1mexp(-delta), hi.sign_);
}

LogValue operator-(const LogValue& a, const LogValue& b) { return a + (-b); }

double log_sinh(double x) {
    if (x < 1e-4) return std::log(x) + x * x / 6.0;
    if (x < 20.0) return std::log(std::sinh(x));
    return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
}

double log_cosh(double x) {
    x = std::fabs(x);
    if (x < 20.0) return std::log(std::cosh(x));
    return x - std::numbers::ln2 + std::log1p(std::exp(-2.0 * x));
}

double log_x_over_sinh(double x) {
    x = std::fabs(x);
    if (x < 1e-4) return -x * x / 6.0;
    return std::log(x) - log_sinh(x);
}

double log1mexp(double a) {
    // Maechler's switch point keeps full relative accuracy on both sides.
    if (a <= std::numbers::ln2) return std::log(-std::expm1(-a));
    return std::log1p(-std::exp(-a));
}

double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return kNegInf;
    const double hi = *std::max_element(v.begin(), v.end());
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

LogValue signed_log_sum(std::span<const double> logs, std::span<const int> signs,
                        double* cancellation) {
    double hi = kNegInf;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (signs[i] != 0) hi = std::max(hi, logs[i]);
    }
    if (hi == kNegInf) {
        if (cancellation) *cancellation = 1.0;
        return {};
    }
    long double s = 0.0L;
    long double abs_sum = 0.0L;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (signs[i] == 0) continue;
        const long double term = std::exp(static_cast<long double>(logs[i] - hi));
        s += signs[i] > 0 ? term : -term;
        abs_sum += term;
    }
    if (cancellation) {
        *cancellation = s == 0.0L ? std::numeric_limits<double>::infinity()
                                  : static_cast<double>(abs_sum / std::fabs(s));
    }
    if (s == 0.0L) return {};
    return LogValue::from_log(hi + static_cast<double>(std::log(std::fabs(s))), s > 0 ? 1 : -1);
}

}  // namespace hbm
