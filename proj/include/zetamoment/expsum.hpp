#pragma once

#include <vector>

#include "zetamoment/divisor.hpp"
#include "zetamoment/mp.hpp"

namespace zm {

// Query for a divisor-weighted exponential sum sum_{m<=x} d(m) e(eta*m),
// with e(u) = exp(2*pi*i*u). Frequencies are canonicalized into (0,1] by
// 1-periodicity before any phase work, so eta may arrive with any sign or
// size as long as `digits` covers its integer part (see the rule below).
struct WiltonQuery {
    double x;
    Real eta;
    int digits;
};

// Digits needed so every reduced phase eta*m keeps ~20 correct digits; the
// integer digits of x*|eta| are pure overhead that reduction throws away.
int wilton_precision_rule(double x, double abs_eta);

Complex wilton_sum(const WiltonQuery& q, const DivisorTable& table, int threads = 1);

// |D(x,eta) - eta^{-1} D(eta^2 x, -eta^{-1})|, the defect of the reflection
// identity for D(x,eta) = sum d(m) e(eta*m). Requires 0 < eta <= 1 and
// eta^2 x <= 1; the reflected frequency is reduced mod 1 before use.
Real wilton_identity_residual(const WiltonQuery& q, const DivisorTable& table, int threads = 1);

// How many digits sum_{m<=x} d(m) e(-m e^{2 pi k}) needs: the frequency
// e^{2 pi k} carries ~2*pi*k/ln10 integer digits that phase reduction must
// chew through before the ~20 guard digits.
int resonant_required_digits(long k, double x);

// sum_{m<=x} d(m) e(-m e^{2 pi k}) at the internally chosen precision;
// extra_digits adds headroom on top of the rule (stability checks use it).
Complex resonant_divisor_sum(long k, double x, const DivisorTable& table, int extra_digits = 0,
                             int threads = 1);

struct BoundRow {
    long k;
    double x;
    double re;
    double im;
    double abs_value;
    double normalized;  // |sum| / (x^{1/2} * (log x)^{2+K})
};

// Diagnostic table for the conjectural square-root bound on the resonant
// sum; rows keep the grid's order and carry no pass/fail verdict.
std::vector<BoundRow> conditional_bound_report(long k, const std::vector<double>& x_grid,
                                               double K, const DivisorTable& table,
                                               int threads = 1);

}  // namespace zm
