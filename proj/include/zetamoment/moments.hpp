#pragma once

#include <cstdint>
#include <vector>

#include "zetamoment/divisor.hpp"
#include "zetamoment/mp.hpp"

namespace zm {

// How the per-n summand |zeta(1/2+in)|^2 is produced: Euler-Maclaurin
// reference evaluation, or the functional-equation finite sum plus the
// divisor-fluctuation residual (much cheaper for large n).
enum class MomentMode { reference, afe };

// Cost ceilings; beyond them the call refuses rather than running for hours.
inline constexpr double kDiscreteReferenceCapT = 1.0e4;
inline constexpr double kDiscreteAfeCapT = 1.0e5;
inline constexpr double kContinuousCapT = 1.0e4;

// Smooth next-order tail of the functional-equation summand: the divisor
// residual leaves a non-oscillating remainder ~ (c0 + c1 log x)/sqrt(x),
// x = t/2pi, which would otherwise accumulate across the n-sum. The
// defaults are a least-squares fit over integer t in [7, 3300] against the
// reference evaluator; the calibration file carries the same values.
struct AfeTail {
    double c0;
    double c1;
};
inline constexpr AfeTail kAfeTailDefault{0.27341948071338523, 0.036116376562017445};

// sum_{1 <= n <= T} |zeta(1/2+in)|^2.  include_zero adds the n=0 term
// |zeta(1/2)|^2 (the sum is defined over positive n by default).
// Deterministic: identical output for any thread count.
double discrete_second_moment(double T, MomentMode mode, const DivisorTable& table,
                              int threads = 1, bool include_zero = false,
                              const AfeTail& tail = kAfeTailDefault);

// integral_0^T |zeta(1/2+it)|^2 dt by adaptive quadrature on unit-t panels
// (the integrand oscillates on scale ~2pi/log t, so one panel spans roughly
// one oscillation). Absolute error target 1e-4 * max(T,1). The t=0 endpoint
// is an ordinary evaluation: the integrand extends continuously to
// |zeta(1/2)|^2.
double continuous_second_moment(double T, int threads = 1);

// T * log T * exp(-C * loglog T / logloglog T). Needs T >= 16 so the
// triple logarithm is positive; C >= 0.
double error_envelope(double T, double C);

// (1/N) sum_{0 <= n < N} zeta(s0 + i n delta), the Cesaro average along a
// vertical arithmetic progression. Re(s0) must lie in (0,1).
Complex first_discrete_moment(const Complex& s0, double delta, long N, int threads = 1);

struct FourthMomentResult {
    double empirical = 0.0;   // sum_{0 <= n < T} |zeta(sigma + i n d)|^4
    double predicted = 0.0;   // T * sum_{m <= M} d(m)^2 m^{-2 sigma}
    long m_terms = 0;         // M actually used (0 when closed form used)
    bool tail_met = false;    // tail < 1e-6 * predicted achieved at m_terms
};

// Mean-value prediction for the fourth power along sigma + i n d.  The
// Dirichlet tail is controlled against the closed form zeta(2s)^4/zeta(4s);
// sigma <= 0.55 is refused because the tail is then too slow to certify.
FourthMomentResult fourth_moment_check(double sigma, double d, long T,
                                       const DivisorTable& table, int threads = 1);

struct MomentRow {
    double T = 0.0;
    double discrete = 0.0;
    double continuous = 0.0;  // NaN when skipped for cost (T > continuous limit)
    double main1 = 0.0;       // T log(T/2pi)
    double main2 = 0.0;       // (2 gamma - 1) T
    double envelope = 0.0;    // NaN when T below the envelope domain floor
    double residual_discrete = 0.0;    // discrete - main1
    double residual_continuous = 0.0;  // continuous - main1 - main2
};

struct MomentReport {
    std::vector<MomentRow> rows;
    double c_fit = 0.0;
    // Re-assembly of the largest-T discrete sum from dyadic blocks
    // (T/2^{j+1}, T/2^j]; must agree with the direct prefix sum.
    double dyadic_total = 0.0;
    double dyadic_direct = 0.0;
    double dyadic_rel_err = 0.0;
};

// Populate one row per grid value (grid strictly ascending). The discrete
// column uses the afe mode; the continuous column is only computed for
// T <= continuous_max_T since its cost grows quadratically.
MomentReport build_report(const std::vector<double>& grid, double c_fit,
                          const DivisorTable& table, int threads = 1,
                          double continuous_max_T = 1000.0,
                          const AfeTail& tail = kAfeTailDefault);

}  // namespace zm
