// Numerical side of the Berry-Esseen bound for the radial fluctuation:
// the sup-distance between its tail and the normal tail, the decay rate of
// that distance in t, and the scaled excess at x = 0.
#pragma once

#include "hbm/dimension.hpp"
#include "hbm/quadrature.hpp"

#include <span>
#include <vector>

namespace hbm {

/// Coarse grid plus golden-section refinement.  Both the tail and Phi are
/// within 1e-20 of their limits outside [-10, 10].
struct DiscrepancySearch {
    double lower = -10.0;
    double upper = 10.0;
    double grid_step = 0.05;
    double resolution = 1e-4;
    QuadratureSpec spec{};

    void validate() const;
};

struct DiscrepancyRecord {
    double t = 0.0;
    double delta = 0.0;
    double argmax_x = 0.0;
    long evaluations = 0;
};

/// sup_x |tail(d, t, x) - Phi(x)| and where it is attained (smallest x on ties).
/// Requires t >= 1.
DiscrepancyRecord sup_discrepancy(Dimension d, double t, const DiscrepancySearch& search = {});

class DiscrepancyCurve {
public:
    explicit DiscrepancyCurve(Dimension d) : d_(d) {}

    /// Throws std::invalid_argument unless t increases strictly and delta >= 0.
    void add(const DiscrepancyRecord& r);

    [[nodiscard]] Dimension dimension() const { return d_; }
    [[nodiscard]] const std::vector<DiscrepancyRecord>& records() const { return records_; }

private:
    Dimension d_;
    std::vector<DiscrepancyRecord> records_;
};

/// One record per time (times must increase strictly), evaluated in parallel.
DiscrepancyCurve discrepancy_curve(Dimension d, std::span<const double> times, const DiscrepancySearch& search = {});

/// log delta = intercept + slope * log t by least squares; residual is the
/// RMS misfit in log space.
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

/// Needs at least 4 records and every delta > 0.
RateFit rate_fit(const DiscrepancyCurve& curve);

/// sqrt(t) * (tail(d, t, 0) - 1/2); requires t >= 1.
double sharpness_at_zero(Dimension d, double t, const QuadratureSpec& spec = {});

/// tail(2, t, 0) - 1/2 computed as (2 pi)^{-1/2} int_0^inf e^{-u^2/2} F_t(u) du,
/// F_t = (1 - cosh(t/2)/cosh y)^{-1/2} (1 - e^{-2y}) (1 + e^{-2y})^{-1/2} - 1,
/// y = u sqrt(t) + t/2.  Positive for t >= log 6.
double sharp1_representation(double t, const QuadratureSpec& spec = {});

}  // namespace hbm
