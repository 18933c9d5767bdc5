// Command-line front end: kernel, density, tail, sweep, simulate, verify.
//
// Exit codes: 0 success, 1 numerical failure, 2 invalid arguments.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hbm::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "3", "2,3,5" or "2..7".
std::vector<int> parse_dimensions(std::string_view text);
/// "lo:hi:count", count points spaced evenly in log t, endpoints included.
std::vector<double> parse_log_range(std::string_view text);
/// "lo:hi:step", lo, lo + step, ... up to hi (inclusive within 1e-9 step).
std::vector<double> parse_linear_range(std::string_view text);

/// Shortest decimal that round-trips, independent of locale.
std::string format_number(double v);

}  // namespace hbm::cli
