// Self-check suites run by `hbm verify <suite>`.
#pragma once

#include "hbm/quadrature.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hbm {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Empty lists select each suite's default grid.
struct VerifyOptions {
    std::vector<int> dimensions;
    std::vector<double> times;
    QuadratureSpec spec{};
};

/// identities, normalization, millson, davies, cross-oracle
const std::vector<std::string>& suite_names();
bool is_suite(std::string_view name);

/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(std::string_view name, const VerifyOptions& options);

/// Width max - min of log(q_d / davies_envelope) over nt log-spaced times in
/// [0.1, 50] and nr equally spaced radii in [0, 40].
struct EnvelopeRange {
    double min_log_ratio = 0.0;
    double max_log_ratio = 0.0;
    [[nodiscard]] double width() const { return max_log_ratio - min_log_ratio; }
};

EnvelopeRange davies_log_ratio_range(int d, int nt, int nr, const QuadratureSpec& spec = {});

}  // namespace hbm
