#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

#include "zetamoment/mp.hpp"

namespace zm {

// Certified continued-fraction prefix of e^{pi k}. Quotients are kept only
// up to the largest index that survived recomputation at +20 digits, so
// everything in `quotients` is trustworthy; `certified_upto` equals
// quotients.size() - 1.
struct ContinuedFractionRecord {
    long k = 0;
    int digits_used = 0;
    std::vector<mpz_class> quotients;
    long certified_upto = -1;
};

// Default expansion precision used by the command-line driver for k <= 6;
// yields several thousand certified quotients.
inline constexpr int kDefaultCfDigits = 10000;

// e^{pi k} with error below 10^{-digits} (guard digits cover both pi and
// the exponential's magnitude); k must be nonzero.
Real exp_pi_k(long k, int digits);

// Euclidean expansion of e^{pi k} computed at `digits` and again at
// digits+20; only the agreeing prefix is returned, truncated to n_terms
// quotients, never padded.
ContinuedFractionRecord continued_fraction(long k, long n_terms, int digits);

// Convergents p_i/q_i of the record's quotient prefix in exact integers,
// at most max_count of them. They satisfy p_i q_{i-1} - p_{i-1} q_i =
// (-1)^{i-1} and |value - p_i/q_i| < 1/(q_i q_{i+1}).
std::vector<std::pair<mpz_class, mpz_class>> convergents(
    const ContinuedFractionRecord& record, std::size_t max_count = static_cast<std::size_t>(-1));

// Quotient-growth law: log log a_n < c (n + log|k|) log(n + log|k|).
// Indices with a_n <= e are vacuous (left side nonpositive), as are indices
// with n + log|k| <= 1 (right side nonpositive while the left may not be);
// minimal_c is the supremum of the required constant over the rest.
struct Lemma1Result {
    std::vector<bool> pass;  // one per certified index, evaluated at the given c
    double minimal_c = 0.0;
};

Lemma1Result lemma1_check(const ContinuedFractionRecord& record, double c);

// Irrationality-measure inequality |e^{pi k} - p/q| > exp{-2^72 (log 2k)
// (log p)(log log p)}. The right side underflows every floating format at
// desk scale, so it is reported in log10 with a below-floor flag; pass then
// only needs the left side to be provably positive.
struct WaldschmidtResult {
    Real lhs;
    double rhs_log10 = 0.0;
    bool rhs_below_floor = false;
    bool pass = false;
};

WaldschmidtResult waldschmidt_check(long k, const mpz_class& p, const mpz_class& q);

// Empirical irrationality exponent from denominator growth: the max of
// 1 + log q_{i+1} / log q_i over the certified tail (second half, skipping
// q_i < 2, where the early-index transients have died out).
double irrationality_exponent_estimate(const ContinuedFractionRecord& record);

}  // namespace zm
