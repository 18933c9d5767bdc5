// Radial heat kernels q_d(t, r) of Brownian motion (generator Delta/2) on
// d-dimensional hyperbolic space.
//
//   d = 3        closed form
//   d = 2        one singular integral
//   odd d >= 5   exact symbolic Millson recursion from d = 3
//   even d >= 4  numerical Millson recursion from d = 2
//
// All kernels are returned as LogValue; at t ~ 10^3 the exponential
// prefactors alone are far below the smallest double.
#pragma once

#include "hbm/dimension.hpp"
#include "hbm/log_value.hpp"
#include "hbm/quadrature.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <vector>

namespace hbm {

struct EvaluationPoint {
    double t = 1.0;  ///< process time, > 0
    double r = 0.0;  ///< hyperbolic distance from the pole, >= 0

    void validate() const;
};

using ExactRational = boost::multiprecision::cpp_rational;

/// coefficient * t^{-a} * r^p * cosh^b(r) / sinh^c(r), times exp(-r^2/(2t)).
struct OddKernelTerm {
    ExactRational coefficient;
    int t_inverse_power = 0;
    int r_power = 0;
    int cosh_power = 0;
    int sinh_inverse_power = 1;

    friend bool operator==(const OddKernelTerm&, const OddKernelTerm&) = default;
};

/// Symbolic q_{2m+1}(t, r) = exp(log_prefactor(t)) * exp(-r^2/(2t)) * sum(terms),
/// log_prefactor(t) = -m^2 t/2 - (3/2) log(2 pi t) - (m-1) log(2 pi).
class OddKernelExpression {
public:
    /// The d = 3 kernel: a single r / sinh r term.
    static OddKernelExpression three_dimensional();

    OddKernelExpression(Dimension d, std::vector<OddKernelTerm> terms);

    [[nodiscard]] Dimension dimension() const { return dimension_; }
    [[nodiscard]] const std::vector<OddKernelTerm>& terms() const { return terms_; }
    [[nodiscard]] double log_prefactor(double t) const;

    /// -exp(-d t/2) / (2 pi sinh r) * d/dr, giving the kernel two dimensions up.
    [[nodiscard]] OddKernelExpression apply_millson() const;

    [[nodiscard]] LogValue evaluate(EvaluationPoint p) const;

private:
    Dimension dimension_;
    std::vector<OddKernelTerm> terms_;
};

LogValue q3(EvaluationPoint p);
LogValue q2(EvaluationPoint p, const QuadratureSpec& spec = {});

/// Symbolic kernel for odd d >= 3 (d - 3)/2 Millson steps above d = 3.
OddKernelExpression build_odd_kernel(Dimension d);
LogValue q_odd(Dimension d, EvaluationPoint p);

/// Finite-difference step control for millson_step_numeric.  The step is
/// h = min(scale * l, r / 4) where l = min(1, sqrt t, t / r) is the length
/// on which the kernel varies; radii below min_radius are refused.
struct DifferenceStep {
    double scale = 2e-3;
    double min_radius = 1e-4;
};

using RadialKernel = std::function<LogValue(double r)>;

/// q_d(t, r) = -exp(-(d-2)t/2) / (2 pi sinh r) * dq_{d-2}/dr, with the
/// derivative from central differences at h and 2h plus one Richardson step.
/// Throws std::domain_error when r < step.min_radius.
LogValue millson_step_numeric(const RadialKernel& q_lower, Dimension d, EvaluationPoint p,
                              DifferenceStep step = {});

/// Radius below which q_even(d) switches to extrapolation.
double even_kernel_min_radius(Dimension d);
LogValue q_even(Dimension d, EvaluationPoint p, const QuadratureSpec& spec = {});

/// q_d for any d >= 2.
LogValue heat_kernel(Dimension d, EvaluationPoint p, const QuadratureSpec& spec = {});

/// t^{-d/2} exp(-(d-1)^2 t/8 - (d-1) r/2 - r^2/(2t)) (1+r+t)^{(d-3)/2} (1+r).
LogValue davies_envelope(Dimension d, EvaluationPoint p);

}  // namespace hbm
