#pragma once

#include "zetamoment/divisor.hpp"
#include "zetamoment/mp.hpp"

namespace zm {

inline constexpr int kZetaReferenceDigitsCap = 100;

// log Gamma(z), continuous along the computation path but only defined up to
// 2*pi*i branch jumps; every consumer here exponentiates it.
Complex lgamma_complex(const Complex& z, int digits);

// chi(s) = 2^s pi^{s-1} sin(pi*s/2) Gamma(1-s), the factor in
// zeta(s) = chi(s) zeta(1-s). Exact product formula, with reflection
// chi(s) = 1/chi(1-s) near the right-half-plane integers where the product
// degenerates.
Complex chi(const Complex& s);

// Stirling-regime form (t/2pi)^{1/2-sigma-it} e^{i(t+pi/4)} for t >= 1
// (conjugated for t <= -1), with the 1+O(1/t) factor dropped. Opt-in only.
Complex chi_asymptotic(const Complex& s);

// zeta(s) by Euler-Maclaurin with a rigorous truncation bound; the number of
// direct terms is max(50, 2|t|) and Bernoulli corrections are added until the
// remainder bound clears the digit target.
Complex zeta_reference(const Complex& s, int digits);

// Working digits required so the phases t*ln(n) survive reduction mod 1.
int afe_precision_rule(double t);

// 2 Re[ chi(1/2-it) * sum_{n <= t/2pi} d(n) n^{-1/2-it} ], the finite sum the
// functional-equation expansion of zeta^2 leaves on the critical line.
// digits = 0 applies afe_precision_rule; an explicit value below the rule is
// refused rather than silently computed at low precision.
Real zeta_sq_critical_approx(double t, const DivisorTable& table, int digits = 0);

// -sqrt(2) (t/2pi)^{-1/2} Delta(t/2pi): the leading residual term that
// remains after the finite sum above.
Real motohashi_residual(double t, const DivisorTable& table);

}  // namespace zm
