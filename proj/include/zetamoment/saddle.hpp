#pragma once

#include <utility>
#include <vector>

#include "zetamoment/divisor.hpp"
#include "zetamoment/mp.hpp"

namespace zm {

// Oscillator with phase g_k(x) = f(x) - k*x built on
// f(x) = (x/2pi) * log(x / (2*pi*e*m)); f is strictly convex on x > 0 and
// g_k has its stationary point at x0 = 2*pi*m*e^{2*pi*k}.
struct OscillatorSpec {
    long m;              // frequency index, >= 1
    long k;              // integer phase shift, >= 0
    double a;            // integration endpoints, a <= b (a == b degenerates to 0)
    double b;
    double theta = 0.05;  // window half-width used by the exchange step
};

// (f(x), g_k(x)) at 30 digits; x > 0.
std::pair<Real, Real> phase_eval(const OscillatorSpec& spec, double x);

// Stationary point 2*pi*m*e^{2*pi*k} of g_k.
double saddle_abscissa(long m, long k);

// integral_a^b e(g_k(x)) dx, e(u) = exp(2*pi*i*u), by adaptive 16-point
// Gauss-Legendre panels: panels split until the local phase span is below
// an eighth of a turn (>= 128 nodes per unit phase) and a two-half
// Richardson comparison meets the shared absolute error target.
Complex oscillatory_integral(const OscillatorSpec& spec, double abs_err = 1e-8);

// Closed-form main term of integral_T^{2T} e(g_k) dx when the stationary
// point lies inside (T, 2T): e^{i pi/4} e(-m e^{2 pi k}) 2 pi e^{pi k} sqrt(m)
// for k >= 1. For k = 0 the stationary point 2*pi*m sits at the lower
// endpoint of the companion integral over [2*pi*m, 2T], which halves the
// contribution: e^{i pi/4} pi sqrt(m).
Complex saddle_point_value(long m, long k);

struct DerivativeBounds {
    double first_bound;     // 4/lambda, lambda = min |g_k'| over [T,2T]; valid
    bool first_applicable;  // only when g_k' keeps one sign there
    double second_bound;    // 16 sqrt(pi T); g_k'' = 1/(2 pi x) > 0 always
    double actual;          // |integral_T^{2T} e(g_k)| by quadrature
};

DerivativeBounds derivative_test_bounds(const OscillatorSpec& spec, double T);

// | sum_{T<n<=2T} e(f(n))  -  sum_k integral_T^{2T} e(g_k) dx |, with k
// running over the integers in ((1/2pi)log(T/2pim) - theta,
// (1/2pi)log(T/pim) + theta). The exchange is exact up to O(1); this
// returns the observed constant.
double truncated_poisson_defect(long m, double T, double theta);

// The five m-ranges, indexed off A = (T/2pi)e^{-2pik} (stationary point at
// T) and B = 2A (stationary point at 2T).
enum class RangeCase { left_tail = 0, left_edge, interior, right_edge, right_tail };

const char* range_case_name(RangeCase c);

struct DecompositionRow {
    RangeCase label;
    long k;
    double m_lo, m_hi;      // real interval endpoints before integer rounding
    long m_count;           // integers that actually contributed
    double re, im;          // sum of d(m) m^{-1/2} * (integral | closed form)
    double bound;           // summed derivative-test bound; NaN if inapplicable
    bool bound_applicable;
    double actual;          // |(re, im)|
};

struct S1Decomposition {
    std::vector<DecompositionRow> rows;
    double case_re[5] = {0, 0, 0, 0, 0};
    double case_im[5] = {0, 0, 0, 0, 0};
    double total_re = 0.0, total_im = 0.0;
    double theta = 0.0;
};

// Full decomposed evaluation of S1(T): for each k >= 0 whose window
// ((T/2pi)e^{-2pi(k+theta)}, (T/pi)e^{-2pi(k-theta)}) meets [1, floor(T/2pi)],
// the window splits into the five ranges; tail ranges use quadrature with
// first-derivative bounds, edge ranges use quadrature with the second
// bound, and the interior range uses the closed saddle form.
S1Decomposition s1_contributions(double T, const DivisorTable& table, double theta = 0.05,
                                 int threads = 1);

struct S2Result {
    Complex computed;   // sum_{T/2pi < m <= T/pi} d(m) m^{-1/2} integral_{2pim}^{2T} e(f)
    Complex predicted;  // e^{i pi/4} pi sum d(m) over the same range
};

S2Result s2_main(double T, const DivisorTable& table, int threads = 1);

}  // namespace zm
