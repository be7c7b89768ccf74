#include "zetamoment/divisor.hpp"

#include <cmath>

namespace zm {

DivisorTable::DivisorTable(std::uint64_t limit) : limit_(limit) {
    if (limit < 1) throw domain_error("divisor table limit must be at least 1");
    if (limit > kMaxEntries)
        throw resource_error("divisor table request exceeds the 2^27-entry cap");
    values_.assign(limit, 0u);
    for (std::uint64_t j = 1; j <= limit; ++j)
        for (std::uint64_t i = j; i <= limit; i += j) ++values_[i - 1];
    prefix_.resize(limit);
    std::uint64_t acc = 0;
    for (std::uint64_t n = 0; n < limit; ++n) {
        acc += values_[n];
        prefix_[n] = acc;
    }
}

double divisor_sum_halved(double x, const DivisorTable& table) {
    if (!(x > 0)) throw domain_error("divisor sum needs positive x");
    if (x > static_cast<double>(table.limit()))
        throw range_error("divisor sum argument beyond table limit");
    auto n = static_cast<std::uint64_t>(std::floor(x));
    if (n == 0) return 0.0;
    double s = static_cast<double>(table.prefix(n));
    if (std::floor(x) == x) s -= 0.5 * table.d(n);
    return s;
}

Real delta(double x, const DivisorTable& table) {
    if (!(x >= 1)) throw domain_error("delta needs x >= 1");
    const int digits = 38;
    double s = divisor_sum_halved(x, table);
    Real xr(x, digits + 2);
    Real smooth = xr * (log(xr) + (euler_gamma(digits + 2) * 2.0 - 1.0));
    Real r = Real(s, digits + 2) - smooth - 0.25;
    return r;
}

}  // namespace zm
