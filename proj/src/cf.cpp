#include "zetamoment/cf.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "zetamoment/errors.hpp"

namespace zm {

namespace {

constexpr int kCfDigitCap = 20000;

// Euclidean quotients of the exact dyadic rational stored in x, at most
// n_max of them. The expansion of the rational tracks the expansion of the
// underlying irrational only for a prefix; the caller certifies by
// comparing two precisions, so we just emit what the rational gives.
std::vector<mpz_class> euclid_quotients(const Real& x, long n_max) {
    mpz_class num, den;
    mpz_t mant;
    mpz_init(mant);
    mp_exp_t e2 = mpfr_get_z_2exp(mant, x.raw());
    num = mpz_class(mant);
    mpz_clear(mant);
    den = 1;
    if (e2 >= 0)
        num <<= static_cast<unsigned long>(e2);
    else
        den <<= static_cast<unsigned long>(-e2);

    std::vector<mpz_class> out;
    out.reserve(static_cast<std::size_t>(std::min<long>(n_max, 4096)));
    while (static_cast<long>(out.size()) < n_max && den != 0) {
        mpz_class a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        out.push_back(a);
        num = den;
        den = r;
    }
    return out;
}

double mpz_log(const mpz_class& a) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, a.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace

Real exp_pi_k(long k, int digits) {
    if (k == 0) throw domain_error("the exponent pi*k must be nonzero");
    if (digits < kMinDigits) throw precision_error("digit request below the working floor");
    if (digits > kCfDigitCap)
        throw resource_error("digit request beyond the cap of " + std::to_string(kCfDigitCap));
    // guard digits: magnitude of e^{pi k} eats pi*|k|/ln10 leading digits
    int guard = static_cast<int>(std::ceil(M_PI * static_cast<double>(std::labs(k)) /
                                           std::log(10.0))) + 10;
    int work = digits + guard;
    Real value = exp(Real::pi(work) * static_cast<double>(k));
    return value;
}

ContinuedFractionRecord continued_fraction(long k, long n_terms, int digits) {
    if (n_terms < 1) throw domain_error("at least one quotient must be requested");
    Real lo = exp_pi_k(k, digits);
    Real hi = exp_pi_k(k, digits + 20);
    std::vector<mpz_class> qa = euclid_quotients(lo, n_terms);
    std::vector<mpz_class> qb = euclid_quotients(hi, n_terms);

    std::size_t agree = 0;
    std::size_t lim = std::min(qa.size(), qb.size());
    while (agree < lim && qa[agree] == qb[agree]) ++agree;

    ContinuedFractionRecord rec;
    rec.k = k;
    rec.digits_used = digits;
    rec.quotients.assign(qa.begin(), qa.begin() + static_cast<long>(agree));
    rec.certified_upto = static_cast<long>(agree) - 1;
    return rec;
}

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFractionRecord& record,
                                                         std::size_t max_count) {
    std::vector<std::pair<mpz_class, mpz_class>> out;
    std::size_t n = std::min(max_count, record.quotients.size());
    out.reserve(n);
    mpz_class p_prev = 1, q_prev = 0;  // index -1
    mpz_class p_prev2 = 0, q_prev2 = 1;
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class p = record.quotients[i] * p_prev + p_prev2;
        mpz_class q = record.quotients[i] * q_prev + q_prev2;
        out.emplace_back(p, q);
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
    }
    return out;
}

Lemma1Result lemma1_check(const ContinuedFractionRecord& record, double c) {
    if (record.certified_upto < 0)
        throw domain_error("quotient-growth check needs a certified record");
    if (!(c > 0.0)) throw domain_error("the growth constant c must be positive");

    const double logk = std::log(static_cast<double>(std::labs(record.k)));
    Lemma1Result res;
    res.pass.resize(record.quotients.size(), true);
    double needed = 0.0;
    for (std::size_t n = 0; n < record.quotients.size(); ++n) {
        double la = mpz_log(record.quotients[n]);
        if (la <= 1.0) continue;  // log log a_n <= 0: vacuous
        double t = static_cast<double>(n) + logk;
        if (t <= 1.0) continue;  // right side nonpositive: vacuous
        double lhs = std::log(la);
        double rhs_factor = t * std::log(t);
        res.pass[n] = lhs < c * rhs_factor;
        needed = std::max(needed, lhs / rhs_factor);
    }
    res.minimal_c = needed;
    return res;
}

WaldschmidtResult waldschmidt_check(long k, const mpz_class& p, const mpz_class& q) {
    if (k < 1) throw domain_error("the irrationality bound is stated for k >= 1");
    if (p < 3) throw domain_error("log log p needs p >= 3");
    if (q < 1) throw domain_error("the denominator q must be >= 1");

    // enough digits that |e^{pi k} - p/q| is resolved even for a convergent,
    // where it is of order 1/q^2
    std::size_t qd = mpz_sizeinbase(q.get_mpz_t(), 10);
    int digits = static_cast<int>(2 * qd) +
                 static_cast<int>(std::ceil(M_PI * k / std::log(10.0))) + 30;
    digits = std::max(digits, 60);
    Real value = exp_pi_k(k, digits);
    Real ratio = Real::from_mpq(mpq_class(p, q), digits);
    WaldschmidtResult out;
    out.lhs = abs(value - ratio);

    const double log10e = 1.0 / std::log(10.0);
    double exponent = -std::exp2(72.0) * std::log(2.0 * static_cast<double>(k)) *
                      mpz_log(p) * std::log(mpz_log(p));
    out.rhs_log10 = exponent * log10e;
    // smallest magnitude mpfr can even represent is ~10^{-1.4e18}
    out.rhs_below_floor = out.rhs_log10 < -1.0e15;
    if (out.rhs_below_floor) {
        out.pass = out.lhs.sign() > 0;
    } else {
        Real rhs = exp(Real(exponent, digits));
        out.pass = out.lhs > rhs;
    }
    return out;
}

double irrationality_exponent_estimate(const ContinuedFractionRecord& record) {
    if (record.certified_upto < 3)
        throw domain_error("exponent estimate needs at least four certified quotients");
    // denominator logs by the recurrence, without materializing the integers:
    // q_0 = 1, q_1 = a_1, q_i = a_i q_{i-1} + q_{i-2}
    std::size_t n = record.quotients.size();
    std::vector<double> lq(n, 0.0);
    if (n > 1) lq[1] = mpz_log(record.quotients[1]);
    for (std::size_t i = 2; i < n; ++i) {
        double base = mpz_log(record.quotients[i]) + lq[i - 1];
        lq[i] = base + std::log1p(std::exp(lq[i - 2] - base));
    }

    double best = 2.0;  // Dirichlet floor
    std::size_t start = n / 2;
    for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < n; ++i) {
        if (lq[i] < std::log(2.0)) continue;  // q_i < 2: ratio unstable
        best = std::max(best, 1.0 + lq[i + 1] / lq[i]);
    }
    return best;
}

}  // namespace zm
