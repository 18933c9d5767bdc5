#pragma once

#include <stdexcept>
#include <string>

namespace hbm {

/// Dimension d >= 2 of the hyperbolic space, with its parity split
/// d = 2n + 1 (odd) or d = 2n (even).
class Dimension {
public:
    explicit Dimension(int d) : d_(d) {
        if (d < 2) throw std::invalid_argument("dimension must be >= 2, got " + std::to_string(d));
    }

    [[nodiscard]] int value() const { return d_; }
    [[nodiscard]] bool is_odd() const { return d_ % 2 == 1; }
    [[nodiscard]] bool is_even() const { return !is_odd(); }
    /// n with d = 2n + 1 or d = 2n; always >= 1.
    [[nodiscard]] int half() const { return d_ / 2; }
    /// (d - 1) / 2, the asymptotic speed of the radial process.
    [[nodiscard]] double drift() const { return 0.5 * (d_ - 1); }

    friend bool operator==(Dimension, Dimension) = default;

private:
    int d_;
};

}  // namespace hbm
