#pragma once

#include <cstdint>
#include <vector>

#include "zetamoment/errors.hpp"
#include "zetamoment/mp.hpp"

namespace zm {

// d(n) values and their prefix sums for 1 <= n <= limit. Immutable after
// construction; concurrent reads are safe.
class DivisorTable {
public:
    // Requests beyond this many entries are refused, not truncated.
    static constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 27;

    explicit DivisorTable(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }

    std::uint32_t d(std::uint64_t n) const {
        if (n < 1 || n > limit_) throw range_error("divisor table index out of range");
        return values_[n - 1];
    }

    // Sum of d(m) for m <= n; prefix(0) = 0.
    std::uint64_t prefix(std::uint64_t n) const {
        if (n > limit_) throw range_error("divisor prefix index beyond table limit");
        return n == 0 ? 0 : prefix_[n - 1];
    }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> values_;
    std::vector<std::uint64_t> prefix_;
};

// Sum' of d(n) over n <= x: the full prefix sum, except that the n = x term
// counts half when x is an integer.
double divisor_sum_halved(double x, const DivisorTable& table);

// Divisor-problem error term: sum'_{n<=x} d(n) - x(log x + 2*gamma - 1) - 1/4,
// carried at 38 significant digits (the sum and the smooth part cancel to
// roughly x^{1/3}, so plain doubles would shed most of their digits here).
Real delta(double x, const DivisorTable& table);

}  // namespace zm
