// Globally adaptive Gauss-Kronrod quadrature on [a, b] or [a, inf), plus the
// s = r + w^2 transform for integrands with an (s - r)^{-1/2} endpoint
// singularity and a log-scaled variant for integrands that live far outside
// double range.
#pragma once

#include "hbm/log_value.hpp"

#include <functional>
#include <optional>
#include <stdexcept>

namespace hbm {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 2048;
    /// Gaussian standard deviations kept when truncating a semi-infinite range.
    double tail_sigma_multiplier = 12.0;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
    /// Both tolerances divided by `factor` (floored near machine precision).
    [[nodiscard]] QuadratureSpec tightened(double factor) const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// Result of a log-scaled integration: value = exp(log_value), with a
/// relative error estimate.
struct LogQuadratureResult {
    double log_value = -std::numeric_limits<double>::infinity();
    double relative_error = 0.0;
    long evaluations = 0;

    [[nodiscard]] LogValue as_log_value() const { return LogValue::from_log(log_value); }
};

/// Raised when the subdivision budget runs out; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    [[nodiscard]] const QuadratureResult& best() const { return best_; }

private:
    QuadratureResult best_;
};

/// Decay window for b = +inf: the integrand is treated as Gaussian with the
/// given centre and scale, and truncated at
/// max(a, center) + tail_sigma_multiplier * scale.
struct GaussianTail {
    double center = 0.0;
    double scale = 1.0;
};

using Integrand = std::function<double(double)>;
using LogIntegrand = std::function<double(double)>;

/// Upper limit actually integrated to for a (possibly infinite) b.
double effective_upper(double a, double b, const QuadratureSpec& spec, std::optional<GaussianTail> tail);

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                                    std::optional<GaussianTail> tail = std::nullopt);

/// Integral over (r, upper) of g(s) / (cosh s - cosh r)^{1/2}, via s = r + w^2.
QuadratureResult integrate_sqrt_singularity(const Integrand& g, double r, double upper,
                                            const QuadratureSpec& spec,
                                            std::optional<GaussianTail> tail = std::nullopt);

/// Integral of exp(log_f) over [a, b] (b finite), shifting by the largest
/// sampled log value so that neither the integrand nor the result overflows.
LogQuadratureResult integrate_log(const LogIntegrand& log_f, double a, double b, const QuadratureSpec& spec);

/// Log-scaled counterpart of integrate_sqrt_singularity: log_g is log g(s).
LogQuadratureResult integrate_sqrt_singularity_log(const LogIntegrand& log_g, double r, double upper,
                                                   const QuadratureSpec& spec);

/// log of the weight 2w / (cosh(r + w^2) - cosh r)^{1/2} used by the transform,
/// computed without cancellation for small w.
double log_sqrt_singularity_weight(double r, double w);

}  // namespace hbm
