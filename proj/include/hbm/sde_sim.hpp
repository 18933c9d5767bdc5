// Euler-Maruyama simulation of the radial process
//
//   dR = dB + (d-1)/2 coth(R) dt,
//
// used as a Monte Carlo check on the analytic tails.  Every path owns a
// generator seeded from (seed, path index), so results do not depend on the
// number of threads.
#pragma once

#include "hbm/dimension.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hbm {

/// radial:         R += sqrt(h) xi + (d-1)/2 coth(R) h, then R = max(R, floor).
/// squared_radius: Z = R^2, Z += 2 R sqrt(h) xi + ((d-1) R coth R + 1) h, then
///                 Z = max(Z, floor^2).  Same diffusion, but the drift stays
///                 bounded at the pole, so a start at r0 ~ 1e-3 is not thrown
///                 outward by a huge first step.
enum class Scheme { radial, squared_radius };

inline constexpr double kReflectionFloor = 1e-6;

struct SimulationConfig {
    Dimension d{3};
    double t = 1.0;
    double step = 1e-3;
    long paths = 1000;
    std::uint64_t seed = 1;
    double r0 = 1e-3;
    Scheme scheme = Scheme::squared_radius;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
    /// round(t / step); the step actually used is t / steps().
    [[nodiscard]] long steps() const;
};

struct SimulationResult {
    std::vector<double> samples;  ///< R_t, one per path, in path order
    long floor_hits_after_one = 0;  ///< steps past time 1 that hit the reflection floor
    long steps_after_one = 0;
};

SimulationResult simulate_radial(const SimulationConfig& cfg);

/// The same paths at cfg.step (coarse) and cfg.step / 2 (fine), driven by one
/// Brownian path: each coarse increment is the sum of two fine ones.
struct CoupledSamples {
    std::vector<double> coarse;
    std::vector<double> fine;
};

CoupledSamples simulate_coupled(const SimulationConfig& cfg);

struct EmpiricalTail {
    double x = 0.0;
    double estimate = 0.0;
    double standard_error = 0.0;
    long paths = 0;
};

/// Fraction of samples with (R - (d-1)t/2)/sqrt(t) >= x and its binomial
/// standard error.  Throws std::invalid_argument for empty samples.
EmpiricalTail empirical_tail(std::span<const double> samples, Dimension d, double t, double x);

/// Kolmogorov-Smirnov distance between the normalized samples and N(0, 1).
double ks_distance_to_normal(std::span<const double> samples, Dimension d, double t);

struct SampleMoments {
    double mean = 0.0;
    double standard_deviation = 0.0;
    double standard_error = 0.0;
};

/// Mean and spread with pairwise summation.
SampleMoments sample_moments(std::span<const double> samples);

}  // namespace hbm
