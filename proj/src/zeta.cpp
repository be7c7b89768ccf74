#include "zetamoment/zeta.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <mutex>

#include "zetamoment/detail/mpfr_scratch.hpp"

namespace zm {

namespace {

using detail::Scratch;

// Shared tables of ln n, ln n/(2pi) and 1/sqrt(n) at a fixed 448-bit width,
// enough for every precision rule this project reaches (phases below 10^7,
// working precision below ~100 digits). ln is by far the most expensive
// primitive in the inner loops, so these caches carry the whole AFE pipeline.
constexpr long kCacheBits = 448;

class UiFnCache {
public:
    using Fill = void (*)(mpfr_ptr, unsigned long);
    explicit UiFnCache(Fill fill) : fill_(fill) {}

    void ensure(std::uint64_t n) {
        if (ready_.load(std::memory_order_acquire) >= n) return;
        std::lock_guard<std::mutex> lk(grow_);
        std::uint64_t have = ready_.load(std::memory_order_relaxed);
        if (have >= n) return;
        for (std::uint64_t i = have + 1; i <= n; ++i) {
            slots_.emplace_back();
            mpfr_init2(slots_.back().v, kCacheBits);
            fill_(slots_.back().v, static_cast<unsigned long>(i));
        }
        ready_.store(n, std::memory_order_release);
    }

    // Valid only after ensure(n) returned on some thread.
    mpfr_srcptr at(std::uint64_t n) const { return slots_[n - 1].v; }

private:
    struct Slot { mpfr_t v; };
    Fill fill_;
    std::deque<Slot> slots_;
    std::atomic<std::uint64_t> ready_{0};
    std::mutex grow_;
};

void fill_log(mpfr_ptr out, unsigned long n) {
    mpfr_set_ui(out, n, MPFR_RNDN);
    mpfr_log(out, out, MPFR_RNDN);
}

mpfr_srcptr two_pi_cache_bits() {
    static Scratch* tp = [] {
        auto* s = new Scratch(kCacheBits);
        mpfr_const_pi(s->v, MPFR_RNDN);
        mpfr_mul_2ui(s->v, s->v, 1, MPFR_RNDN);
        return s;
    }();
    return tp->v;
}

void fill_log_over_2pi(mpfr_ptr out, unsigned long n) {
    mpfr_set_ui(out, n, MPFR_RNDN);
    mpfr_log(out, out, MPFR_RNDN);
    mpfr_div(out, out, two_pi_cache_bits(), MPFR_RNDN);
}

void fill_rsqrt(mpfr_ptr out, unsigned long n) {
    mpfr_set_ui(out, n, MPFR_RNDN);
    mpfr_rec_sqrt(out, out, MPFR_RNDN);
}

UiFnCache& log_cache() {
    static UiFnCache c(fill_log);
    return c;
}

UiFnCache& log_over_2pi_cache() {
    static UiFnCache c(fill_log_over_2pi);
    return c;
}

UiFnCache& rsqrt_cache() {
    static UiFnCache c(fill_rsqrt);
    return c;
}

Real reprec(const Real& x, int digits) {
    Real r(digits);
    mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Complex reprec(const Complex& z, int digits) {
    return Complex(reprec(z.real(), digits), reprec(z.imag(), digits));
}

double abs2_to(const Complex& z, double re, double im) {
    double dr = z.real().to_double() - re;
    double di = z.imag().to_double() - im;
    return dr * dr + di * di;
}

}  // namespace

Complex lgamma_complex(const Complex& z, int digits) {
    if (digits < kMinDigits) throw precision_error("lgamma below the digit floor");
    const int di = digits + 8;

    double zr = z.real().to_double();
    double zi = z.imag().to_double();
    if (zr < 0.5) {
        // Reflection through Gamma(z)Gamma(1-z) = pi/sin(pi z).
        double nearest = std::round(zr);
        if (nearest <= 0 && std::hypot(zr - nearest, zi) < std::pow(10.0, -digits / 2.0))
            throw domain_error("log-gamma pole at a nonpositive integer");
        Complex zi_ = reprec(z, di);
        Real pi_ = Real::pi(di);
        Complex one(1.0, 0.0, di);
        Complex rhs = lgamma_complex(one - zi_, di);
        Complex sinpz = sin(Complex(pi_ * zi_.real(), pi_ * zi_.imag()));
        Complex lg = Complex(log(pi_), Real(di)) - log(sinpz) - rhs;
        return reprec(lg, digits);
    }

    // Stirling after shifting |z| past the point where the asymptotic series
    // can reach the digit target (terms bottom out near exp(-pi|z|)).
    const double z_min = std::max(16.0, 1.15 * digits);
    long shift = 0;
    if (std::hypot(zr, zi) < z_min)
        shift = static_cast<long>(std::ceil(z_min - zr)) + 1;

    Complex w = reprec(z, di);
    if (shift > 0) w = w + Complex(static_cast<double>(shift), 0.0, di);

    Complex lw = log(w);
    Complex half(0.5, 0.0, di);
    Complex acc = (w - half) * lw - w;
    {
        Real l2pi = log(Real::pi(di) * 2.0);
        acc += Complex(l2pi / 2.0, Real(di));
    }

    // sum B_{2k} / ((2k)(2k-1) w^{2k-1})
    Complex winv = Complex(1.0, 0.0, di) / w;
    Complex winv2 = winv * winv;
    Complex pw = winv;
    const double tol = std::pow(10.0, -(digits + 6));
    bool converged = false;
    for (unsigned k = 1; k <= 400; ++k) {
        Real coef = bernoulli_2k_real(k, di) / static_cast<double>(2 * k * (2 * k - 1));
        Complex term = pw * coef;
        acc += term;
        double tmag = std::sqrt(abs2_to(term, 0.0, 0.0));
        if (tmag < tol * std::max(1.0, std::abs(acc.real().to_double()))) {
            converged = true;
            break;
        }
        pw = pw * winv2;
    }
    if (!converged) throw precision_error("Stirling series failed to reach the digit target");

    for (long j = 0; j < shift; ++j) {
        Complex zj = reprec(z, di) + Complex(static_cast<double>(j), 0.0, di);
        acc -= log(zj);
    }
    return reprec(acc, digits);
}

Complex chi(const Complex& s) {
    const int digits = s.digits();
    const double sig = s.real().to_double();
    const double t = s.imag().to_double();

    if (sig > 0.5 && std::abs(t) < 0.5) {
        double n0 = std::round(sig);
        if (n0 >= 1.0) {
            double dist = std::hypot(sig - n0, t);
            bool odd = std::fmod(n0, 2.0) == 1.0;
            if (odd && dist < std::pow(10.0, -digits / 2.0))
                throw domain_error("chi evaluated too close to a pole (s = 1 or odd integer)");
            if (dist < 0.25) {
                // The direct product degenerates near right-half integers
                // (Gamma pole against a sin zero); go through 1/chi(1-s).
                Complex one(1.0, 0.0, digits);
                return one / chi(one - s);
            }
        }
    }

    const int di = digits + 10;
    Complex si = reprec(s, di);
    Real pi_ = Real::pi(di);
    Real ln2 = log(Real(2.0, di));
    Real lnpi = log(pi_);

    Complex p2 = exp(Complex(si.real() * ln2, si.imag() * ln2));
    Complex sm1 = si - Complex(1.0, 0.0, di);
    Complex ppi = exp(Complex(sm1.real() * lnpi, sm1.imag() * lnpi));
    Complex sn = sin(Complex(si.real() * (pi_ / 2.0), si.imag() * (pi_ / 2.0)));
    Complex g = exp(lgamma_complex(Complex(1.0, 0.0, di) - si, di));
    return reprec(p2 * ppi * sn * g, digits);
}

Complex chi_asymptotic(const Complex& s) {
    const int digits = s.digits();
    const double t = s.imag().to_double();
    if (std::abs(t) < 1.0)
        throw domain_error("asymptotic chi needs |Im s| >= 1");
    if (t < 0) return conj(chi_asymptotic(conj(s)));

    // (t/2pi)^{1/2-sigma} * e(phi/2pi), phi = t - t*log(t/2pi) + pi/4.
    const int di = digits + 12;
    Real pi_ = Real::pi(di);
    Real r = reprec(s.imag(), di) / (pi_ * 2.0);
    Real lnr = log(r);
    Real sig = reprec(s.real(), di);
    Real modulus = exp((0.5 - sig) * lnr);
    Real phi = reprec(s.imag(), di) * (1.0 - lnr) + pi_ / 4.0;
    Real turns = frac(phi / (pi_ * 2.0));
    Complex ph = Complex::unit_phase(turns);
    return reprec(ph * modulus, digits);
}

Complex zeta_reference(const Complex& s, int digits) {
    if (digits < kMinDigits) throw precision_error("zeta_reference below the digit floor");
    if (digits > kZetaReferenceDigitsCap)
        throw resource_error("zeta_reference digits beyond the configured cap");

    const double sig = s.real().to_double();
    const double t = s.imag().to_double();
    if (std::hypot(sig - 1.0, t) < std::pow(10.0, -digits))
        throw domain_error("zeta_reference evaluated too close to s = 1");

    double nd = std::max(50.0, std::ceil(2.0 * std::abs(t)));
    if (nd > static_cast<double>(1 << 22))
        throw resource_error("zeta_reference: |Im s| too large for the term budget");
    const auto N = static_cast<std::uint64_t>(nd);

    log_cache().ensure(N);
    log_over_2pi_cache().ensure(N);
    const bool half_sigma = mpfr_cmp_d(s.real().raw(), 0.5) == 0;
    if (half_sigma) rsqrt_cache().ensure(N);

    const long w = bits_for_digits(digits) + 24;
    Scratch acc_re(w), acc_im(w), r(w), theta(w), sn(w), cs(w), tmp(w);
    Scratch y(kCacheBits);
    mpfr_set_zero(acc_re, 1);
    mpfr_set_zero(acc_im, 1);

    // Direct block: n = 1 .. N-1 at full weight, n = N at half weight.
    for (std::uint64_t n = 1; n <= N; ++n) {
        if (n == 1) {
            mpfr_set_ui(cs, 1, MPFR_RNDN);
            mpfr_set_zero(sn, 1);
            mpfr_set_ui(r, 1, MPFR_RNDN);
        } else {
            mpfr_mul(y, s.imag().raw(), log_over_2pi_cache().at(n), MPFR_RNDN);
            mpfr_floor(tmp, y);
            mpfr_sub(y, y, tmp, MPFR_RNDN);
            mpfr_mul(theta, two_pi_cache_bits(), y, MPFR_RNDN);
            mpfr_sin_cos(sn, cs, theta, MPFR_RNDN);
            if (half_sigma) {
                mpfr_set(r, rsqrt_cache().at(n), MPFR_RNDN);
            } else {
                mpfr_mul(r, s.real().raw(), log_cache().at(n), MPFR_RNDN);
                mpfr_neg(r, r, MPFR_RNDN);
                mpfr_exp(r, r, MPFR_RNDN);
            }
        }
        if (n == N) mpfr_div_2ui(r, r, 1, MPFR_RNDN);
        mpfr_fma(acc_re, r, cs, acc_re, MPFR_RNDN);
        mpfr_mul(tmp, r, sn, MPFR_RNDN);
        mpfr_sub(acc_im, acc_im, tmp, MPFR_RNDN);
    }

    // Euler-Maclaurin tail at a slightly widened precision.
    const int di = digits + 8;
    Complex sC = reprec(s, di);
    Real NR(static_cast<unsigned long>(N), di);
    Real lnN = log(NR);
    Complex Nms = exp(Complex(-(sC.real() * lnN), -(sC.imag() * lnN)));
    Complex tail = (Nms * NR) / (sC - Complex(1.0, 0.0, di));

    Complex poch = sC;                 // s(s+1)...(s+2k-2), grown as k advances
    Complex pw = Nms / NR;             // N^{-s-2k+1}
    Real NR2 = NR * NR;
    double log_poch = std::log(std::hypot(sig, t));  // log |poch|
    const double logN = std::log(static_cast<double>(N));
    const double log_tol = -(digits + 2) * std::log(10.0);
    mpz_class fact;
    bool converged = false;
    for (unsigned k = 1; k <= 300; ++k) {
        mpz_fac_ui(fact.get_mpz_t(), 2 * k);
        mpq_class coef = bernoulli_2k(k) / mpq_class(fact);
        Complex term = (pw * poch) * Real::from_mpq(coef, di);
        tail += term;

        // Rigorous remainder bound: |R_k| <= |B_{2k+2}/(2k+2)!| |(s)_{2k+1}|
        // N^{-sigma-2k-1} |s+2k+1|/(sigma+2k+1), with |B_{2j}|/(2j)! bounded
        // by 3.3 (2pi)^{-2j}; evaluated in log space to dodge overflow.
        double a1 = std::hypot(sig + 2.0 * k - 1.0, t);
        double a2 = std::hypot(sig + 2.0 * k, t);
        double lp_next = log_poch + std::log(a1) + std::log(a2);
        double lbound = std::log(3.3) - (2.0 * k + 2.0) * std::log(2.0 * M_PI) + lp_next
                        - (sig + 2.0 * k + 1.0) * logN
                        + std::log(std::hypot(sig + 2.0 * k + 1.0, t) / (sig + 2.0 * k + 1.0));
        if (lbound < log_tol) {
            converged = true;
            break;
        }
        poch = poch * (sC + Complex(2.0 * k - 1.0, 0.0, di));
        poch = poch * (sC + Complex(2.0 * k, 0.0, di));
        log_poch = lp_next;
        pw = pw / NR2;
    }
    if (!converged)
        throw precision_error("Euler-Maclaurin remainder failed to reach the digit target");

    Real re(digits), im(digits);
    mpfr_set(re.raw(), acc_re.v, MPFR_RNDN);
    mpfr_set(im.raw(), acc_im.v, MPFR_RNDN);
    Complex out = Complex(std::move(re), std::move(im)) + reprec(tail, digits);
    return out;
}

int afe_precision_rule(double t) {
    double scale = std::max(t * std::log(std::max(t, 3.0)), 10.0);
    return std::max(kMinDigits, static_cast<int>(std::ceil(std::log10(scale))) + 20);
}

Real zeta_sq_critical_approx(double t, const DivisorTable& table, int digits) {
    // t arrives as a double, so the t >= 2*pi boundary and the truncation
    // length floor(t/2pi) are both taken in double arithmetic; anything else
    // makes the nominal endpoint t = 2*pi unreachable from the caller's side.
    if (!(t >= 2.0 * M_PI)) throw domain_error("afe needs t >= 2*pi");
    const int rule = afe_precision_rule(t);
    if (digits == 0) digits = rule;
    if (digits < rule)
        throw precision_error("afe at this t needs >= " + std::to_string(rule) +
                              " digits, got " + std::to_string(digits));
    if (digits > 200) throw resource_error("afe digit request beyond the configured cap");

    const auto M = static_cast<std::uint64_t>(std::floor(t / (2.0 * M_PI)));
    if (M > table.limit()) throw range_error("afe truncation length exceeds the divisor table");

    log_over_2pi_cache().ensure(M);
    rsqrt_cache().ensure(M);

    const long w = bits_for_digits(digits);
    Scratch acc_re(w), acc_im(w), wt(w), theta(w), sn(w), cs(w), tmp(w);
    Scratch y(kCacheBits);
    mpfr_set_zero(acc_re, 1);
    mpfr_set_zero(acc_im, 1);

    for (std::uint64_t m = 1; m <= M; ++m) {
        unsigned long dm = table.d(m);
        if (m == 1) {
            mpfr_set_ui(cs, 1, MPFR_RNDN);
            mpfr_set_zero(sn, 1);
            mpfr_set_ui(wt, 1, MPFR_RNDN);
        } else {
            mpfr_mul_d(y, log_over_2pi_cache().at(m), t, MPFR_RNDN);
            mpfr_floor(tmp, y);
            mpfr_sub(y, y, tmp, MPFR_RNDN);
            mpfr_mul(theta, two_pi_cache_bits(), y, MPFR_RNDN);
            mpfr_sin_cos(sn, cs, theta, MPFR_RNDN);
            mpfr_mul_ui(wt, rsqrt_cache().at(m), dm, MPFR_RNDN);
        }
        mpfr_fma(acc_re, wt, cs, acc_re, MPFR_RNDN);
        mpfr_mul(tmp, wt, sn, MPFR_RNDN);
        mpfr_sub(acc_im, acc_im, tmp, MPFR_RNDN);
    }

    Complex S{Real(digits), Real(digits)};
    mpfr_set(S.real().raw(), acc_re.v, MPFR_RNDN);
    mpfr_set(S.imag().raw(), acc_im.v, MPFR_RNDN);

    Complex ch = conj(chi(Complex(Real(0.5, digits), Real(t, digits))));
    Complex prod = ch * S;
    return prod.real() * 2.0;
}

Real motohashi_residual(double t, const DivisorTable& table) {
    if (!(t >= 2.0 * M_PI)) throw domain_error("residual needs t >= 2*pi");
    double xd = t / (2.0 * M_PI);
    Real x(xd, 40);
    Real dlt = delta(xd, table);
    Real root2 = sqrt(Real(2.0, 40));
    return -(root2 * dlt) / sqrt(x);
}

}  // namespace zm
