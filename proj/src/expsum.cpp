#include "zetamoment/expsum.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "zetamoment/detail/mpfr_scratch.hpp"
#include "zetamoment/errors.hpp"
#include "zetamoment/parallel.hpp"

namespace zm {

namespace {

using detail::Scratch;

// Fixed block size keeps the partial-sum layout independent of the thread
// count; the ordered fold below then gives bit-identical totals.
constexpr std::uint64_t kBlock = 8192;

// Digit budget beyond which resonant frequencies are refused.
constexpr int kResonantDigitCap = 5000;

// Reduce a frequency into (0,1]. frac() is exact at the operand's own
// precision (dropping the integer part only frees mantissa bits), so this
// loses nothing; what the integer part already destroyed when eta was
// built is the caller's precision-rule problem.
Real canonical_frequency(const Real& eta) {
    Real f = frac(eta);
    if (mpfr_zero_p(f.raw())) return Real(1.0, eta.digits());
    return f;
}

// sum_{m<=M} d(m) e(eta_c * m) for a canonical frequency in (0,1]. Each
// phase is reduced mod 1 on the full product, never incrementally.
Complex phase_weighted_sum(std::uint64_t M, const Real& eta_c, int digits,
                           const DivisorTable& table, int threads) {
    Complex total(digits);
    if (M == 0) return total;

    const long w0 = bits_for_digits(digits);
    const long wy = w0 + 24;  // product headroom so mul/floor cost no digits
    const std::uint64_t n_blocks = (M - 1) / kBlock + 1;
    std::vector<Complex> partial(n_blocks, Complex(digits));

    parallel_for_blocks(n_blocks, resolve_threads(threads), [&](std::size_t b) {
        Scratch y(wy), u(wy), th(wy), two_pi(wy);
        Scratch sn(w0), cs(w0), wt(w0), acc_re(w0), acc_im(w0);
        mpfr_const_pi(two_pi, MPFR_RNDN);
        mpfr_mul_2ui(two_pi, two_pi, 1, MPFR_RNDN);
        mpfr_set_zero(acc_re, 1);
        mpfr_set_zero(acc_im, 1);
        const std::uint64_t lo = b * kBlock + 1;
        const std::uint64_t hi = std::min<std::uint64_t>(M, (b + 1) * kBlock);
        for (std::uint64_t m = lo; m <= hi; ++m) {
            mpfr_mul_ui(y, eta_c.raw(), static_cast<unsigned long>(m), MPFR_RNDN);
            mpfr_floor(u, y);
            mpfr_sub(u, y, u, MPFR_RNDN);
            mpfr_mul(th, two_pi, u, MPFR_RNDN);
            mpfr_sin_cos(sn, cs, th, MPFR_RNDN);
            mpfr_set_ui(wt, table.d(m), MPFR_RNDN);
            mpfr_fma(acc_re, wt, cs, acc_re, MPFR_RNDN);
            mpfr_fma(acc_im, wt, sn, acc_im, MPFR_RNDN);
        }
        Complex out(digits);
        mpfr_set(out.real().raw(), acc_re.v, MPFR_RNDN);
        mpfr_set(out.imag().raw(), acc_im.v, MPFR_RNDN);
        partial[b] = std::move(out);
    });

    for (std::uint64_t b = 0; b < n_blocks; ++b) total += partial[b];
    return total;
}

std::uint64_t checked_range(double x, const DivisorTable& table, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw domain_error(std::string(who) + " needs a positive finite range");
    if (x > static_cast<double>(table.limit()))
        throw range_error(std::string(who) + " range exceeds the divisor table");
    return static_cast<std::uint64_t>(std::floor(x));
}

}  // namespace

int wilton_precision_rule(double x, double abs_eta) {
    double scale = std::max(x * abs_eta, 1.0);
    return std::max(kMinDigits, static_cast<int>(std::ceil(std::log10(scale))) + 20);
}

Complex wilton_sum(const WiltonQuery& q, const DivisorTable& table, int threads) {
    std::uint64_t M = checked_range(q.x, table, "wilton_sum");
    const int rule = wilton_precision_rule(q.x, std::abs(q.eta.to_double()));
    if (q.digits < rule)
        throw precision_error("this (x, eta) needs >= " + std::to_string(rule) +
                              " digits, got " + std::to_string(q.digits));
    Real eta_c = canonical_frequency(q.eta);
    return phase_weighted_sum(M, eta_c, q.digits, table, threads);
}

Real wilton_identity_residual(const WiltonQuery& q, const DivisorTable& table, int threads) {
    if (!(q.eta > 0.0) || !(q.eta <= 1.0))
        throw domain_error("reflection identity requires 0 < eta <= 1");
    const long we = bits_for_digits(q.digits) + 24;
    Scratch e2x(we);
    mpfr_mul(e2x, q.eta.raw(), q.eta.raw(), MPFR_RNDN);
    mpfr_mul_d(e2x, e2x, q.x, MPFR_RNDN);
    double eta2x = mpfr_get_d(e2x, MPFR_RNDN);
    if (eta2x > 1.0) throw domain_error("reflection identity requires eta^2 x <= 1");

    Complex direct = wilton_sum(q, table, threads);

    Real inv_eta = Real(1.0, q.digits) / q.eta;
    std::uint64_t M2 = static_cast<std::uint64_t>(std::floor(eta2x));
    Complex reflected(q.digits);
    if (M2 > 0) reflected = phase_weighted_sum(M2, canonical_frequency(-inv_eta),
                                               q.digits, table, threads);
    return abs(direct - inv_eta * reflected);
}

int resonant_required_digits(long k, double x) {
    if (k < 1) throw domain_error("resonant frequency needs k >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("resonant sum needs x > 0");
    double integer_digits = 2.0 * M_PI * static_cast<double>(k) / std::log(10.0);
    double range_digits = std::log10(std::max(x, 1.0));
    return std::max(kMinDigits,
                    static_cast<int>(std::ceil(integer_digits + range_digits)) + 20);
}

Complex resonant_divisor_sum(long k, double x, const DivisorTable& table, int extra_digits,
                             int threads) {
    std::uint64_t M = checked_range(x, table, "resonant_divisor_sum");
    const int digits = resonant_required_digits(k, x) + std::max(extra_digits, 0);
    if (digits > kResonantDigitCap)
        throw precision_error("resonant frequency at k=" + std::to_string(k) + " needs " +
                              std::to_string(digits) + " digits; cap is " +
                              std::to_string(kResonantDigitCap));
    // frequency -e^{2 pi k}, canonicalized
    Real two_pi_k = Real::pi(digits) * (2.0 * static_cast<double>(k));
    Real eta_c = canonical_frequency(-exp(two_pi_k));
    return phase_weighted_sum(M, eta_c, digits, table, threads);
}

std::vector<BoundRow> conditional_bound_report(long k, const std::vector<double>& x_grid,
                                               double K, const DivisorTable& table,
                                               int threads) {
    if (K < 0.0) throw domain_error("bound exponent K must be nonnegative");
    std::vector<BoundRow> rows;
    rows.reserve(x_grid.size());
    for (double x : x_grid) {
        if (!(x > 1.0))
            throw domain_error("normalization x^{1/2} log^{2+K} x needs x > 1");
        Complex s = resonant_divisor_sum(k, x, table, 0, threads);
        double a = abs(s).to_double();
        double denom = std::sqrt(x) * std::pow(std::log(x), 2.0 + K);
        rows.push_back({k, x, s.real().to_double(), s.imag().to_double(), a, a / denom});
    }
    return rows;
}

}  // namespace zm
