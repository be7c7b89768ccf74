#include "doctest.h"

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <cstdint>

#include "zetamoment/expsum.hpp"

using namespace zm;

namespace {

// Independent low-precision oracle: straight double summation with per-term
// phase reduction. Good to ~10 digits for x up to a few thousand.
std::complex<double> naive_sum(double x, double eta, const DivisorTable& t) {
    std::complex<double> s{0.0, 0.0};
    auto M = static_cast<std::uint64_t>(std::floor(x));
    for (std::uint64_t m = 1; m <= M; ++m) {
        double ph = eta * static_cast<double>(m);
        ph -= std::floor(ph);
        s += static_cast<double>(t.d(m)) *
             std::complex<double>(std::cos(2.0 * M_PI * ph), std::sin(2.0 * M_PI * ph));
    }
    return s;
}

const DivisorTable& table_1e5() {
    static DivisorTable t(100000);
    return t;
}

}  // namespace

TEST_CASE("integer frequency collapses to the plain divisor sum") {
    WiltonQuery q{10.0, Real(1.0, 25), 25};
    Complex s = wilton_sum(q, table_1e5());
    CHECK(s.real().to_double() == 27.0);
    CHECK(s.imag().to_double() == 0.0);
}

TEST_CASE("half-integer frequency alternates signs") {
    WiltonQuery q{10.0, Real(0.5, 25), 25};
    Complex s = wilton_sum(q, table_1e5());
    CHECK(std::abs(s.real().to_double() - 7.0) < 1e-20);
    CHECK(std::abs(s.imag().to_double()) < 1e-20);
}

TEST_CASE("irrational frequency against the double-precision oracle") {
    double x = 1000.0;
    Real eta = sqrt(Real(2.0, 40)) - 1.0;
    WiltonQuery q{x, eta, 30};
    Complex s = wilton_sum(q, table_1e5());
    std::complex<double> n = naive_sum(x, std::sqrt(2.0) - 1.0, table_1e5());
    CHECK(std::abs(s.real().to_double() - n.real()) < 1e-7 * (1.0 + std::abs(n.real())));
    CHECK(std::abs(s.imag().to_double() - n.imag()) < 1e-7 * (1.0 + std::abs(n.imag())));
}

TEST_CASE("shifting the frequency by one changes nothing") {
    Real eta(0.375, 30);  // dyadic, so eta+1 is exact and the check is bitwise
    WiltonQuery a{200.0, eta, 25};
    WiltonQuery b{200.0, eta + 1.0, 25};
    Complex sa = wilton_sum(a, table_1e5());
    Complex sb = wilton_sum(b, table_1e5());
    CHECK(abs(sa - sb).to_double() == 0.0);
}

TEST_CASE("negated frequency conjugates the sum") {
    Real eta(0.37, 30);
    WiltonQuery plus{500.0, eta, 25};
    WiltonQuery minus{500.0, -eta, 25};
    Complex sp = wilton_sum(plus, table_1e5());
    Complex sm = wilton_sum(minus, table_1e5());
    CHECK(abs(conj(sp) - sm).to_double() < 1e-22);
}

TEST_CASE("modulus never beats the coefficient mass") {
    for (double ev : {0.1, 0.37, 0.5001, 0.9, 0.987654321}) {
        WiltonQuery q{500.0, Real(ev, 30), 25};
        double mass = static_cast<double>(table_1e5().prefix(500));
        CHECK(abs(wilton_sum(q, table_1e5())).to_double() <= mass);
    }
}

TEST_CASE("fifteen extra digits do not move the value") {
    double x = 10000.0;
    Real eta = sqrt(Real(2.0, 60)) - 1.0;
    int rule = wilton_precision_rule(x, eta.to_double());
    Complex lo = wilton_sum({x, eta, rule}, table_1e5());
    Complex hi = wilton_sum({x, eta, rule + 15}, table_1e5());
    CHECK(abs(lo - hi).to_double() < 1e-10 * (1.0 + abs(hi).to_double()));
}

TEST_CASE("precision rule is enforced") {
    CHECK_THROWS_AS(wilton_sum({1000.0, Real(0.4142, 30), 15}, table_1e5()), precision_error);
    CHECK_THROWS_AS(wilton_sum({-3.0, Real(0.5, 30), 25}, table_1e5()), domain_error);
    CHECK_THROWS_AS(wilton_sum({2.0e5, Real(0.5, 30), 30}, table_1e5()), range_error);
}

TEST_CASE("thread count cannot change a single bit") {
    Real eta = sqrt(Real(2.0, 40)) - 1.0;
    WiltonQuery q{30000.0, eta, 26};
    Complex one = wilton_sum(q, table_1e5(), 1);
    Complex three = wilton_sum(q, table_1e5(), 3);
    CHECK(abs(one - three).to_double() == 0.0);
}

TEST_CASE("resonant sum with one term has modulus one and the right phase") {
    Complex s = resonant_divisor_sum(1, 1.0, table_1e5());
    CHECK(std::abs(abs(s).to_double() - 1.0) < 1e-20);

    // recompute the phase independently at higher precision
    int d = 60;
    Real freq = exp(Real::pi(d) * 2.0);     // e^{2 pi} = 535.49...
    Real turns = 1.0 - frac(freq);          // canonical form of -e^{2 pi}
    Real c(d), sn(d);
    sin_cos(sn, c, Real::pi(d) * 2.0 * turns);
    CHECK(std::abs(s.real().to_double() - c.to_double()) < 1e-18);
    CHECK(std::abs(s.imag().to_double() - sn.to_double()) < 1e-18);
}

TEST_CASE("resonant sum is stable under fifteen extra digits") {
    Complex lo = resonant_divisor_sum(1, 10000.0, table_1e5(), 0);
    Complex hi = resonant_divisor_sum(1, 10000.0, table_1e5(), 15);
    CHECK(abs(lo - hi).to_double() < 1e-10 * (1.0 + abs(hi).to_double()));
}

TEST_CASE("resonant guards") {
    CHECK_THROWS_AS(resonant_divisor_sum(2000, 100.0, table_1e5()), precision_error);
    CHECK_THROWS_AS(resonant_divisor_sum(0, 100.0, table_1e5()), domain_error);
    CHECK_THROWS_AS(resonant_divisor_sum(1, -5.0, table_1e5()), domain_error);
    CHECK(resonant_required_digits(1, 1.0) >= 22);
}

TEST_CASE("reflection identity residual vanishes at the trivial point") {
    WiltonQuery q{1.0, Real(1.0, 30), 21};
    CHECK(wilton_identity_residual(q, table_1e5()).to_double() == 0.0);
}

TEST_CASE("reflection identity preconditions") {
    CHECK_THROWS_AS(wilton_identity_residual({100.0, Real(1.5, 30), 25}, table_1e5()),
                    domain_error);
    CHECK_THROWS_AS(wilton_identity_residual({100.0, Real(0.5, 30), 25}, table_1e5()),
                    domain_error);
}

TEST_CASE("normalized reflection residual stays bounded in the scaling regime") {
    // eta ~ x^{-1/2} so that the reflected range eta^2 x stays <= 1
    double worst = 0.0;
    struct P { double x, eta; };
    for (P p : {P{1.0e4, 0.01}, P{1.0e5, 1.0 / 316.3}}) {
        Real eta(p.eta, 40);
        int rule = wilton_precision_rule(p.x, p.eta);
        Real r = wilton_identity_residual({p.x, eta, rule}, table_1e5());
        double normalized = r.to_double() / (std::sqrt(p.x) * std::log(p.x));
        CHECK(normalized > 0.0);
        worst = std::max(worst, normalized);
    }
    CHECK(worst < 10.0);
}

TEST_CASE("conditional bound report rows") {
    std::vector<double> grid{100.0, 1000.0, 10000.0};
    auto rows = conditional_bound_report(1, grid, 0.0, table_1e5());
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].k == 1);
        CHECK(rows[i].x == grid[i]);
        CHECK(std::isfinite(rows[i].normalized));
        CHECK(rows[i].normalized > 0.0);
        CHECK(rows[i].abs_value ==
              doctest::Approx(std::hypot(rows[i].re, rows[i].im)).epsilon(1e-12));
    }

    CHECK(conditional_bound_report(1, {}, 0.0, table_1e5()).empty());

    // raising K divides the normalization by exactly log x
    auto k0 = conditional_bound_report(1, {1000.0}, 0.0, table_1e5());
    auto k1 = conditional_bound_report(1, {1000.0}, 1.0, table_1e5());
    CHECK(k0[0].normalized / k1[0].normalized ==
          doctest::Approx(std::log(1000.0)).epsilon(1e-12));

    CHECK_THROWS_AS(conditional_bound_report(1, {0.5}, 0.0, table_1e5()), domain_error);
    CHECK_THROWS_AS(conditional_bound_report(1, {100.0}, -1.0, table_1e5()), domain_error);
}
