#include "zetamoment/mp.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <vector>

namespace zm {

long bits_for_digits(int digits) {
    if (digits < kMinDigits)
        throw precision_error("working precision below the 15-digit floor");
    // log2(10) = 3.3219..., rounded up, plus guard bits.
    return static_cast<long>(std::ceil(digits * 3.321928094887362)) + 8;
}

Real::Real(int digits, long prec_bits) : digits_(digits) {
    mpfr_init2(v_, prec_bits);
}

Real::Real() : Real(kMinDigits, bits_for_digits(kMinDigits)) {
    mpfr_set_nan(v_);
}

Real::Real(int digits) : Real(digits, bits_for_digits(digits)) {
    mpfr_set_zero(v_, 1);
}

Real::Real(double v, int digits) : Real(digits, bits_for_digits(digits)) {
    mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(long v, int digits) : Real(digits, bits_for_digits(digits)) {
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(unsigned long v, int digits) : Real(digits, bits_for_digits(digits)) {
    mpfr_set_ui(v_, v, MPFR_RNDN);
}

Real Real::from_string(const std::string& decimal, int digits) {
    Real r(digits);
    if (mpfr_set_str(r.v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
        throw domain_error("unparseable decimal literal: " + decimal);
    return r;
}

Real Real::from_mpz(const mpz_class& z, int digits) {
    Real r(digits);
    mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real Real::from_mpq(const mpq_class& q, int digits) {
    Real r(digits);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::pi(int digits) {
    Real r(digits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real::Real(const Real& o) : Real(o.digits_, mpfr_get_prec(o.v_)) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept : digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        digits_ = o.digits_;
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        digits_ = o.digits_;
    }
    return *this;
}

Real::~Real() {
    mpfr_clear(v_);
}

double Real::to_double() const {
    return mpfr_get_d(v_, MPFR_RNDN);
}

long double Real::to_long_double() const {
    return mpfr_get_ld(v_, MPFR_RNDN);
}

long Real::to_long() const {
    if (!mpfr_fits_slong_p(v_, MPFR_RNDN))
        throw range_error("value does not fit in a machine long");
    return mpfr_get_si(v_, MPFR_RNDN);
}

std::string Real::str(int out_digits) const {
    int n = out_digits > 0 ? out_digits : digits_;
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", n, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

bool Real::is_nan() const { return mpfr_nan_p(v_) != 0; }
bool Real::is_finite() const { return mpfr_number_p(v_) != 0; }
int Real::sign() const { return mpfr_sgn(v_); }

namespace {

// Result precision under the minimum-digits rule.
inline Real result_like(const Real& a, const Real& b) {
    const Real& lo = a.digits() <= b.digits() ? a : b;
    Real r(lo.digits());
    return r;
}

}  // namespace

Real Real::operator-() const {
    Real r(digits_);
    mpfr_neg(r.raw(), v_, MPFR_RNDN);
    return r;
}

#define ZM_REAL_COMPOUND(op, fn)                         \
    Real& Real::operator op(const Real& o) {             \
        if (o.digits_ < digits_) {                       \
            Real r = result_like(*this, o);              \
            fn(r.raw(), v_, o.v_, MPFR_RNDN);            \
            *this = std::move(r);                        \
        } else {                                         \
            fn(v_, v_, o.v_, MPFR_RNDN);                 \
        }                                                \
        return *this;                                    \
    }

ZM_REAL_COMPOUND(+=, mpfr_add)
ZM_REAL_COMPOUND(-=, mpfr_sub)
ZM_REAL_COMPOUND(*=, mpfr_mul)
ZM_REAL_COMPOUND(/=, mpfr_div)
#undef ZM_REAL_COMPOUND

Real& Real::operator+=(double x) { mpfr_add_d(v_, v_, x, MPFR_RNDN); return *this; }
Real& Real::operator-=(double x) { mpfr_sub_d(v_, v_, x, MPFR_RNDN); return *this; }
Real& Real::operator*=(double x) { mpfr_mul_d(v_, v_, x, MPFR_RNDN); return *this; }
Real& Real::operator/=(double x) { mpfr_div_d(v_, v_, x, MPFR_RNDN); return *this; }
Real& Real::operator*=(unsigned long x) { mpfr_mul_ui(v_, v_, x, MPFR_RNDN); return *this; }

#define ZM_REAL_BINOP(op, fn)                            \
    Real operator op(const Real& a, const Real& b) {     \
        Real r = result_like(a, b);                      \
        fn(r.raw(), a.v_, b.v_, MPFR_RNDN);              \
        return r;                                        \
    }

ZM_REAL_BINOP(+, mpfr_add)
ZM_REAL_BINOP(-, mpfr_sub)
ZM_REAL_BINOP(*, mpfr_mul)
ZM_REAL_BINOP(/, mpfr_div)
#undef ZM_REAL_BINOP

Real operator+(const Real& a, double b) { Real r(a); r += b; return r; }
Real operator+(double a, const Real& b) { return b + a; }
Real operator-(const Real& a, double b) { Real r(a); r -= b; return r; }
Real operator-(double a, const Real& b) {
    Real r(b.digits());
    mpfr_d_sub(r.raw(), a, b.v_, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, double b) { Real r(a); r *= b; return r; }
Real operator*(double a, const Real& b) { return b * a; }
Real operator/(const Real& a, double b) { Real r(a); r /= b; return r; }
Real operator/(double a, const Real& b) {
    Real r(b.digits());
    mpfr_d_div(r.raw(), a, b.v_, MPFR_RNDN);
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

#define ZM_REAL_FN1(name, fn)            \
    Real name(const Real& x) {           \
        Real r(x.digits());              \
        fn(r.raw(), x.raw(), MPFR_RNDN); \
        return r;                        \
    }

ZM_REAL_FN1(abs, mpfr_abs)
ZM_REAL_FN1(sqrt, mpfr_sqrt)
ZM_REAL_FN1(log, mpfr_log)
ZM_REAL_FN1(exp, mpfr_exp)
ZM_REAL_FN1(sin, mpfr_sin)
ZM_REAL_FN1(cos, mpfr_cos)
#undef ZM_REAL_FN1

Real floor(const Real& x) {
    Real r(x.digits());
    mpfr_floor(r.raw(), x.raw());
    return r;
}

Real ceil(const Real& x) {
    Real r(x.digits());
    mpfr_ceil(r.raw(), x.raw());
    return r;
}

Real frac(const Real& x) {
    // x - floor(x), always in [0,1); mpfr_frac keeps the sign of x instead.
    Real r(x.digits());
    mpfr_floor(r.raw(), x.raw());
    mpfr_sub(r.raw(), x.raw(), r.raw(), MPFR_RNDN);
    return r;
}

void sin_cos(Real& s, Real& c, const Real& x) {
    s = Real(x.digits());
    c = Real(x.digits());
    mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
}

void sinh_cosh(Real& sh, Real& ch, const Real& x) {
    sh = Real(x.digits());
    ch = Real(x.digits());
    mpfr_sinh_cosh(sh.raw(), ch.raw(), x.raw(), MPFR_RNDN);
}

Real atan2(const Real& y, const Real& x) {
    Real r = result_like(y, x);
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Real pow(const Real& base, const Real& expo) {
    Real r = result_like(base, expo);
    mpfr_pow(r.raw(), base.raw(), expo.raw(), MPFR_RNDN);
    return r;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Complex::Complex() = default;

Complex::Complex(int digits) : re_(digits), im_(digits) {}

Complex::Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

Complex::Complex(double re, double im, int digits) : re_(re, digits), im_(im, digits) {}

Complex Complex::unit_phase(const Real& turns) {
    int d = turns.digits();
    Real angle = Real::pi(d);
    angle *= 2ul;
    angle *= turns;
    Real s(d), c(d);
    sin_cos(s, c, angle);
    return Complex(std::move(c), std::move(s));
}

Complex Complex::from_polar(const Real& modulus, const Real& angle) {
    Real s(angle.digits()), c(angle.digits());
    sin_cos(s, c, angle);
    return Complex(modulus * c, modulus * s);
}

int Complex::digits() const noexcept {
    return re_.digits() <= im_.digits() ? re_.digits() : im_.digits();
}

Complex Complex::operator-() const { return Complex(-re_, -im_); }

Complex& Complex::operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Complex& Complex::operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Complex& Complex::operator*=(const Complex& o) {
    *this = *this * o;
    return *this;
}

Complex operator+(const Complex& a, const Complex& b) {
    return Complex(a.re_ + b.re_, a.im_ + b.im_);
}

Complex operator-(const Complex& a, const Complex& b) {
    return Complex(a.re_ - b.re_, a.im_ - b.im_);
}

Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

Complex operator/(const Complex& a, const Complex& b) {
    Real den = norm(b);
    Complex num = a * conj(b);
    return Complex(num.re_ / den, num.im_ / den);
}

Complex operator*(const Complex& a, const Real& b) {
    return Complex(a.re_ * b, a.im_ * b);
}

Complex operator*(const Real& a, const Complex& b) { return b * a; }

Complex operator*(const Complex& a, double b) {
    return Complex(a.re_ * b, a.im_ * b);
}

Complex operator/(const Complex& a, const Real& b) {
    return Complex(a.re_ / b, a.im_ / b);
}

Complex conj(const Complex& z) { return Complex(z.real(), -z.imag()); }

Real norm(const Complex& z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

Real abs(const Complex& z) { return sqrt(norm(z)); }

Real arg(const Complex& z) { return atan2(z.imag(), z.real()); }

Complex exp(const Complex& z) {
    Real m = exp(z.real());
    Real s(z.imag().digits()), c(z.imag().digits());
    sin_cos(s, c, z.imag());
    return Complex(m * c, m * s);
}

Complex log(const Complex& z) {
    Real lr = log(norm(z));
    lr /= 2.0;
    return Complex(std::move(lr), arg(z));
}

Complex sin(const Complex& z) {
    Real s(z.real().digits()), c(z.real().digits());
    sin_cos(s, c, z.real());
    Real sh(z.imag().digits()), ch(z.imag().digits());
    sinh_cosh(sh, ch, z.imag());
    return Complex(s * ch, c * sh);
}

namespace {

std::mutex g_bernoulli_mutex;
// All Bernoulli numbers B_0, B_1, ... (odd indices past 1 are zero); grown on
// demand by the defining recurrence sum_{j<=m} C(m+1,j) B_j = 0.
std::vector<mpq_class> g_bernoulli;

void grow_bernoulli(unsigned upto) {
    if (g_bernoulli.empty()) {
        g_bernoulli.emplace_back(1);         // B_0
        g_bernoulli.emplace_back(-1, 2);     // B_1
    }
    for (unsigned m = static_cast<unsigned>(g_bernoulli.size()); m <= upto; ++m) {
        if (m % 2 == 1) {
            g_bernoulli.emplace_back(0);
            continue;
        }
        mpq_class acc(0);
        mpz_class binom;
        for (unsigned j = 0; j < m; ++j) {
            if (j > 1 && j % 2 == 1) continue;
            mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
            acc += mpq_class(binom) * g_bernoulli[j];
        }
        acc /= -static_cast<long>(m + 1);
        acc.canonicalize();
        g_bernoulli.push_back(acc);
    }
}

}  // namespace

mpq_class bernoulli_2k(unsigned k) {
    std::lock_guard<std::mutex> lk(g_bernoulli_mutex);
    grow_bernoulli(2 * k);
    return g_bernoulli[2 * k];
}

Real bernoulli_2k_real(unsigned k, int digits) {
    return Real::from_mpq(bernoulli_2k(k), digits);
}

namespace {

constexpr const char* kEulerGamma52 =
    "0.5772156649015328606065120900824024310421593359399236";

// Bessel-series evaluation (I_0/S_0 at argument 2n): an independent route to
// gamma, accurate to roughly 1.7*n decimal digits.
Real euler_gamma_series(int digits) {
    int work = digits + 12;
    unsigned n = static_cast<unsigned>(std::ceil(digits * 2.3026 / 4.0)) + 2;
    Real term(1.0, work), harmonic(work), I0(1.0, work), S0(work);
    Real n2 = Real(static_cast<unsigned long>(n), work);
    n2 *= n2;
    // Series terms peak near e^{2n}; truncate relative to the running I0.
    const double tiny = std::pow(10.0, -(digits + 6));
    for (unsigned k = 1; k < 200 * (n / 4 + 1); ++k) {
        term *= n2;
        term /= static_cast<double>(k) * static_cast<double>(k);
        harmonic += Real(1.0, work) / Real(static_cast<unsigned long>(k), work);
        I0 += term;
        S0 += term * harmonic;
        if (k > 2 * n && term < I0 * tiny) break;
    }
    Real g = S0 / I0 - log(Real(static_cast<unsigned long>(n), work));
    return g;
}

std::once_flag g_gamma_checked;

void check_gamma_literal() {
    Real lit = Real::from_string(kEulerGamma52, 60);
    Real ser = euler_gamma_series(44);
    Real diff = abs(lit - ser);
    if (!(diff < 1e-40)) {
        std::fprintf(stderr, "fatal: stored Euler gamma literal disagrees with series recomputation\n");
        std::abort();
    }
}

}  // namespace

Real euler_gamma(int digits) {
    std::call_once(g_gamma_checked, check_gamma_literal);
    if (digits <= 50)
        return Real::from_string(kEulerGamma52, digits);
    Real g(digits);
    mpfr_const_euler(g.raw(), MPFR_RNDN);
    return g;
}

}  // namespace zm
