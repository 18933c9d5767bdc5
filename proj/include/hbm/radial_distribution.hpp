// Radial density and the tail of the normalized fluctuation
//
//   P((R_t - (d-1)t/2) / sqrt(t) >= x)
//
// for every d >= 2.  Odd d reduce to d = 3 at time n^2 t plus finitely many
// boundary terms; even d split into boundary terms, a singular-free integral
// family and one Gaussian-weighted integral that stays bounded for large t.
// direct_kernel_quadrature integrates the density itself and is kept as an
// independent check of both reductions for moderate t.
#pragma once

#include "hbm/dimension.hpp"
#include "hbm/heat_kernel.hpp"
#include "hbm/log_value.hpp"
#include "hbm/quadrature.hpp"

#include <string_view>

namespace hbm {

enum class TailMethod { closed_form_d3, odd_reduction, even_decomposition, direct_kernel_quadrature, monte_carlo };

std::string_view to_string(TailMethod m);

struct TailEstimate {
    double value = 0.0;
    double error_estimate = 0.0;
    TailMethod method = TailMethod::closed_form_d3;
};

inline constexpr double kMinFluctuationTime = 1e-3;

struct FluctuationPoint {
    Dimension d{3};
    double t = 1.0;
    double x = 0.0;

    /// Throws std::invalid_argument for t < kMinFluctuationTime or non-finite t / NaN x.
    void validate() const;
    /// T = max(x sqrt(t) + (d-1)t/2, 0), the radius the fluctuation x maps to.
    [[nodiscard]] double threshold() const;
};

/// Upper standard normal tail P(Z >= x).
double normal_tail(double x);
/// log P(Z >= x), finite for every finite x.
double log_normal_tail(double x);

/// omega_d q_d(t, r) sinh^{d-1} r.
LogValue radial_density_log(Dimension d, EvaluationPoint p, const QuadratureSpec& spec = {});
double radial_density(Dimension d, EvaluationPoint p, const QuadratureSpec& spec = {});

TailEstimate tail_d3(double t, double x, const QuadratureSpec& spec = {});
TailEstimate tail_odd(Dimension d, double t, double x, const QuadratureSpec& spec = {});
TailEstimate tail_even(Dimension d, double t, double x, const QuadratureSpec& spec = {});
TailEstimate tail(Dimension d, double t, double x, const QuadratureSpec& spec = {});

/// Pieces of the even-dimensional tail.  On the T > 0 branch `gaussian` is
/// the stabilized integral; on the T = 0 branch it is N_1 + N_2.
struct EvenTailParts {
    LogValue boundary;  ///< J_1
    LogValue singular_free;  ///< a_n K_1
    LogValue gaussian;
    double relative_error = 0.0;
    bool zero_threshold = false;
};

EvenTailParts even_tail_parts(Dimension d, double t, double x, const QuadratureSpec& spec = {});

/// Integrand of the stabilized even-d integral at u >= x (without the
/// 1/sqrt(2 pi) factor); requires x >= -(n - 1/2) sqrt(t).
double even_stabilized_integrand(Dimension d, double t, double x, double u);

/// Tail by integrating the radial density over [T, inf).  Limited to
/// d <= 7 and t <= 50.
TailEstimate direct_kernel_quadrature(Dimension d, double t, double x, const QuadratureSpec& spec = {});

}  // namespace hbm
