#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <string>
#include <utility>

#include "zetamoment/errors.hpp"

namespace zm {

// Every multiprecision value carries at least this many decimal digits.
inline constexpr int kMinDigits = 15;

// Decimal digits -> MPFR precision in bits, with guard bits on top.
long bits_for_digits(int digits);

// Arbitrary-precision real number backed by mpfr_t. A Real knows its own
// working precision in decimal digits; binary operations produce a result
// carrying the minimum of the operand precisions, never silently more.
// Machine doubles and integers mixed into an expression are exact inputs
// and do not lower the precision of the result.
class Real {
public:
    Real();                        // NaN at kMinDigits
    explicit Real(int digits);     // zero
    Real(double v, int digits);
    Real(long v, int digits);
    Real(unsigned long v, int digits);

    static Real from_string(const std::string& decimal, int digits);
    static Real from_mpz(const mpz_class& z, int digits);
    static Real from_mpq(const mpq_class& q, int digits);
    static Real pi(int digits);

    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    int digits() const noexcept { return digits_; }
    mpfr_srcptr raw() const noexcept { return v_; }
    mpfr_ptr raw() noexcept { return v_; }

    double to_double() const;
    long double to_long_double() const;
    long to_long() const;  // nearest integer; throws range_error if unrepresentable
    std::string str(int out_digits = 0) const;

    bool is_nan() const;
    bool is_finite() const;
    int sign() const;  // -1, 0, +1

    Real operator-() const;

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator+=(double x);
    Real& operator-=(double x);
    Real& operator*=(double x);
    Real& operator/=(double x);
    Real& operator*=(unsigned long x);

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator+(const Real& a, double b);
    friend Real operator+(double a, const Real& b);
    friend Real operator-(const Real& a, double b);
    friend Real operator-(double a, const Real& b);
    friend Real operator*(const Real& a, double b);
    friend Real operator*(double a, const Real& b);
    friend Real operator/(const Real& a, double b);
    friend Real operator/(double a, const Real& b);

    friend bool operator<(const Real& a, const Real& b);
    friend bool operator>(const Real& a, const Real& b);
    friend bool operator<=(const Real& a, const Real& b);
    friend bool operator>=(const Real& a, const Real& b);
    friend bool operator==(const Real& a, const Real& b);
    friend bool operator<(const Real& a, double b);
    friend bool operator>(const Real& a, double b);
    friend bool operator<=(const Real& a, double b);
    friend bool operator>=(const Real& a, double b);

private:
    Real(int digits, long prec_bits);  // uninitialised value, explicit precision

    mpfr_t v_;
    int digits_;
};

Real abs(const Real& x);
Real floor(const Real& x);
Real ceil(const Real& x);
Real frac(const Real& x);   // x - floor(x), in [0,1)
Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
void sin_cos(Real& s, Real& c, const Real& x);
void sinh_cosh(Real& sh, Real& ch, const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& base, const Real& expo);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

// Complex value as a pair of Reals sharing the minimum-precision rule.
class Complex {
public:
    Complex();
    explicit Complex(int digits);
    Complex(Real re, Real im);
    Complex(double re, double im, int digits);

    // exp(2*pi*i*turns); pass the fractional part of the phase in turns.
    static Complex unit_phase(const Real& turns);
    static Complex from_polar(const Real& modulus, const Real& angle);

    const Real& real() const noexcept { return re_; }
    const Real& imag() const noexcept { return im_; }
    Real& real() noexcept { return re_; }
    Real& imag() noexcept { return im_; }
    int digits() const noexcept;

    Complex operator-() const;
    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);

    friend Complex operator+(const Complex& a, const Complex& b);
    friend Complex operator-(const Complex& a, const Complex& b);
    friend Complex operator*(const Complex& a, const Complex& b);
    friend Complex operator/(const Complex& a, const Complex& b);
    friend Complex operator*(const Complex& a, const Real& b);
    friend Complex operator*(const Real& a, const Complex& b);
    friend Complex operator*(const Complex& a, double b);
    friend Complex operator/(const Complex& a, const Real& b);

private:
    Real re_, im_;
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex sin(const Complex& z);

// Exact Bernoulli number B_{2k}: B_0 = 1, B_2 = 1/6, B_4 = -1/30, ...
// Computed once by the defining recurrence and cached.
mpq_class bernoulli_2k(unsigned k);
Real bernoulli_2k_real(unsigned k, int digits);

// Euler's constant. Served from a 52-digit stored literal (beyond that,
// recomputed); the first call cross-checks the literal against an
// independent Bessel-series evaluation to 40 digits and aborts on mismatch.
Real euler_gamma(int digits);

}  // namespace zm
