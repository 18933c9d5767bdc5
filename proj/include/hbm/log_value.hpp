// Sign / log-magnitude arithmetic and the elementary log-space primitives the
// kernels are built from.  Quantities like exp(-n(n-1)t/2) or cosh^a(r) for
// r ~ 10^3 leave double range long before their products do, so everything
// that can overflow is carried as (sign, log|x|).
#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace hbm {

class LogValue {
public:
    constexpr LogValue() = default;

    static LogValue zero() { return {}; }
    static LogValue from_log(double log_magnitude, int sign = 1);
    static LogValue from_double(double v);

    [[nodiscard]] int sign() const { return sign_; }
    [[nodiscard]] double log_magnitude() const { return log_magnitude_; }
    [[nodiscard]] bool is_zero() const { return sign_ == 0; }

    /// exp back to double; underflows to 0 / overflows to inf like std::exp.
    [[nodiscard]] double value() const;

    friend LogValue operator*(const LogValue& a, const LogValue& b);
    friend LogValue operator/(const LogValue& a, const LogValue& b);
    friend LogValue operator+(const LogValue& a, const LogValue& b);
    friend LogValue operator-(const LogValue& a, const LogValue& b);
    LogValue operator-() const;

    LogValue& operator*=(const LogValue& o) { return *this = *this * o; }
    LogValue& operator+=(const LogValue& o) { return *this = *this + o; }

private:
    int sign_ = 0;
    double log_magnitude_ = -std::numeric_limits<double>::infinity();
};

/// log(sinh x) for x > 0, accurate for tiny and huge x.
double log_sinh(double x);
/// log(cosh x), any real x.
double log_cosh(double x);
/// log(x / sinh x), continuous at 0.
double log_x_over_sinh(double x);
/// log(1 - exp(-a)) for a > 0.
double log1mexp(double a);
/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);
/// log(sum exp(v_i)); -inf for an empty span.
double log_sum_exp(std::span<const double> v);

/// Signed sum of exp-scaled terms: sum_i signs[i] * exp(logs[i]).
/// `cancellation` receives sum|term| / |sum| (1 when all signs agree).
LogValue signed_log_sum(std::span<const double> logs, std::span<const int> signs,
                        double* cancellation = nullptr);

}  // namespace hbm
