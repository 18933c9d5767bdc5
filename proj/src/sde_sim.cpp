#include "hbm/sde_sim.hpp"

#include "hbm/parallel.hpp"
#include "hbm/radial_distribution.hpp"

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hbm {

namespace {

constexpr std::size_t kBlock = 256;

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    return std::mt19937_64(seq);
}

// r coth r, smooth through r = 0.
inline double r_coth_r(double r) {
    if (r > 19.0) return r;
    if (r < 1e-4) return 1.0 + r * r / 3.0;
    const double e = std::exp(-2.0 * r);
    return r * (1.0 + e) / (1.0 - e);
}

struct Stepper {
    Scheme scheme;
    double k;  // d - 1
    double h;
    double sqrt_h;

    // Advances r by one step driven by the standard normal xi; returns true
    // when the floor was hit.
    bool operator()(double& r, double xi) const {
        if (scheme == Scheme::radial) {
            r += sqrt_h * xi + 0.5 * k * (r_coth_r(r) / r) * h;
            if (r < kReflectionFloor) {
                r = kReflectionFloor;
                return true;
            }
            return false;
        }
        double z = r * r + 2.0 * r * sqrt_h * xi + (k * r_coth_r(r) + 1.0) * h;
        bool hit = false;
        if (z < kReflectionFloor * kReflectionFloor) {
            z = kReflectionFloor * kReflectionFloor;
            hit = true;
        }
        r = std::sqrt(z);
        return hit;
    }
};

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> fluctuations(std::span<const double> samples, Dimension d, double t) {
    std::vector<double> z(samples.size());
    const double st = std::sqrt(t);
    std::transform(samples.begin(), samples.end(), z.begin(), [&](double r) { return (r - d.drift() * t) / st; });
    return z;
}

}  // namespace

void SimulationConfig::validate() const {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("horizon t must be finite and > 0");
    if (!(step > 0.0 && step <= t)) throw std::invalid_argument("step must lie in (0, t]");
    if (paths < 1 || paths > 100'000'000) throw std::invalid_argument("paths must lie in [1, 1e8]");
    if (!(r0 > 0.0 && r0 <= 1.0)) throw std::invalid_argument("r0 must lie in (0, 1]");
}

long SimulationConfig::steps() const { return std::max(1L, std::lround(t / step)); }

SimulationResult simulate_radial(const SimulationConfig& cfg) {
    cfg.validate();
    const long n = cfg.steps();
    const double h = cfg.t / n;
    const Stepper stepper{cfg.scheme, cfg.d.value() - 1.0, h, std::sqrt(h)};
    // First step index whose end time lies past t = 1.
    const long after_one = std::clamp(static_cast<long>(std::ceil(1.0 / h - 1e-9)), 0L, n);

    SimulationResult out;
    out.samples.resize(static_cast<std::size_t>(cfg.paths));
    const std::size_t blocks = (out.samples.size() + kBlock - 1) / kBlock;
    std::vector<long> hits(blocks, 0);
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(out.samples.size(), (b + 1) * kBlock);
        boost::random::normal_distribution<double> normal;
        for (std::size_t p = b * kBlock; p < end; ++p) {
            auto engine = path_engine(cfg.seed, p);
            double r = cfg.r0;
            long i = 0;
            for (; i < after_one; ++i) stepper(r, normal(engine));
            for (; i < n; ++i) hits[b] += stepper(r, normal(engine)) ? 1 : 0;
            out.samples[p] = r;
        }
    });
    for (long v : hits) out.floor_hits_after_one += v;
    out.steps_after_one = (n - after_one) * cfg.paths;
    return out;
}

CoupledSamples simulate_coupled(const SimulationConfig& cfg) {
    cfg.validate();
    const long n = cfg.steps();
    const double h = cfg.t / n;
    const Stepper coarse_step{cfg.scheme, cfg.d.value() - 1.0, h, std::sqrt(h)};
    const Stepper fine_step{cfg.scheme, cfg.d.value() - 1.0, 0.5 * h, std::sqrt(0.5 * h)};

    CoupledSamples out;
    out.coarse.resize(static_cast<std::size_t>(cfg.paths));
    out.fine.resize(static_cast<std::size_t>(cfg.paths));
    const std::size_t blocks = (out.coarse.size() + kBlock - 1) / kBlock;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(out.coarse.size(), (b + 1) * kBlock);
        boost::random::normal_distribution<double> normal;
        for (std::size_t p = b * kBlock; p < end; ++p) {
            auto engine = path_engine(cfg.seed, p);
            double rc = cfg.r0;
            double rf = cfg.r0;
            for (long i = 0; i < n; ++i) {
                const double xi1 = normal(engine);
                const double xi2 = normal(engine);
                fine_step(rf, xi1);
                fine_step(rf, xi2);
                coarse_step(rc, (xi1 + xi2) * std::numbers::sqrt2 * 0.5);
            }
            out.coarse[p] = rc;
            out.fine[p] = rf;
        }
    });
    return out;
}

EmpiricalTail empirical_tail(std::span<const double> samples, Dimension d, double t, double x) {
    if (samples.empty()) throw std::invalid_argument("empirical_tail needs samples");
    if (!(t > 0.0)) throw std::invalid_argument("empirical_tail needs t > 0");
    if (std::isnan(x)) throw std::invalid_argument("x must not be NaN");
    long count = 0;
    const double st = std::sqrt(t);
    for (double r : samples) {
        if ((r - d.drift() * t) / st >= x) ++count;
    }
    const auto n = static_cast<long>(samples.size());
    const double p = static_cast<double>(count) / static_cast<double>(n);
    return {x, p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

double ks_distance_to_normal(std::span<const double> samples, Dimension d, double t) {
    if (samples.empty()) throw std::invalid_argument("ks_distance_to_normal needs samples");
    std::vector<double> z = fluctuations(samples, d, t);
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double cdf = normal_tail(-z[i]);
        dist = std::max({dist, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
    }
    return std::clamp(dist, 0.0, 1.0);
}

SampleMoments sample_moments(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("sample_moments needs samples");
    const double n = static_cast<double>(samples.size());
    SampleMoments m;
    m.mean = pairwise_sum(samples) / n;
    std::vector<double> sq(samples.size());
    std::transform(samples.begin(), samples.end(), sq.begin(), [&](double v) { return (v - m.mean) * (v - m.mean); });
    m.standard_deviation = samples.size() > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1.0)) : 0.0;
    m.standard_error = m.standard_deviation / std::sqrt(n);
    return m;
}

}  // namespace hbm
