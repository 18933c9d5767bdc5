// Exact expansions of D^k sinh^n r, where D = (1/sinh r) d/dr.
//
// Every D^k sinh^n r is a finite integer combination of cosh^a r sinh^b r.
// Coefficients are kept as arbitrary-precision integers (they contain
// factorials that overflow 64 bits around n = 20) and only turned into
// floating point, term by term in log space, when the expansion is evaluated.
#pragma once

#include "hbm/dimension.hpp"
#include "hbm/log_value.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace hbm {

using ExactInteger = boost::multiprecision::cpp_int;

/// m!! with 0!! = (-1)!! = 1.
ExactInteger double_factorial(int m);
ExactInteger factorial(int m);

/// log|v| for an exact integer of any size; -inf for zero.
double log_abs(const ExactInteger& v);

/// Surface area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
double surface_area(Dimension d);
double log_surface_area(Dimension d);

struct SinhPowerTerm {
    ExactInteger coefficient;
    int cosh_exponent = 0;
    int sinh_exponent = 0;

    friend bool operator==(const SinhPowerTerm&, const SinhPowerTerm&) = default;
};

/// Sum of coefficient * cosh^a(r) * sinh^b(r) representing D^k sinh^n r.
/// Terms are canonical: zero coefficients dropped, equal (a, b) merged,
/// sorted by ascending cosh exponent.
class SinhPowerExpansion {
public:
    SinhPowerExpansion(int base_power, int operator_applications, std::vector<SinhPowerTerm> terms);

    [[nodiscard]] int base_power() const { return base_power_; }
    [[nodiscard]] int operator_applications() const { return applications_; }
    [[nodiscard]] const std::vector<SinhPowerTerm>& terms() const { return terms_; }

    /// True when k > n; negative sinh exponents may appear there.
    [[nodiscard]] bool beyond_base_power() const { return applications_ > base_power_; }

    /// D applied once more, term by term.
    [[nodiscard]] SinhPowerExpansion apply_operator() const;

    /// Value at r in sign / log-magnitude form.  Throws std::domain_error at
    /// r = 0 when a negative sinh exponent is present.
    [[nodiscard]] LogValue evaluate_log(double r) const;

private:
    int base_power_;
    int applications_;
    std::vector<SinhPowerTerm> terms_;
};

/// D^k sinh^n r.  Uses the closed even/odd coefficient formulas for k <= n
/// and continues with term-wise application of D beyond that.
SinhPowerExpansion sinh_power_derivative(int n, int k);

/// Sum of the expansion at r >= 0.
double evaluate_expansion(const SinhPowerExpansion& e, double r);

/// (2l+1)!!/(l+1) * sinh((l+1) r), the closed form of D^l sinh^{2l+1} r.
double millson_identity_value(int l, double r);

}  // namespace hbm
