#include "zetamoment/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "zetamoment/errors.hpp"
#include "zetamoment/parallel.hpp"

namespace zm {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
constexpr double kQuadratureRangeCap = 1.0e7;
constexpr long kEvalBudget = 60000000;  // integrand evaluations per integral

// 16-point Gauss-Legendre rule on [-1,1], symmetric half stored. Nodes are
// Newton-refined Legendre roots; good to the last long-double bit.
struct GLRule {
    long double x[8];
    long double w[8];
};

GLRule make_gl16() {
    constexpr int n = 16;
    GLRule r{};
    for (int i = 1; i <= n / 2; ++i) {
        long double x = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        long double dp = 0.0L;
        for (int it = 0; it < 64; ++it) {
            long double p0 = 1.0L, p1 = x;
            for (int j = 2; j <= n; ++j) {
                long double p2 = ((2.0L * j - 1.0L) * x * p1 - (j - 1.0L) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            long double dx = p1 / dp;
            x -= dx;
            if (fabsl(dx) < 1e-21L) {
                p0 = 1.0L;
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    long double p2 = ((2.0L * j - 1.0L) * x * p1 - (j - 1.0L) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0L);
                break;
            }
        }
        r.x[i - 1] = x;
        r.w[i - 1] = 2.0L / ((1.0L - x * x) * dp * dp);
    }
    return r;
}

const GLRule& gl16() {
    static const GLRule r = make_gl16();
    return r;
}

// Phase pair in long double. g can reach ~10^8 before the 64-bit mantissa
// stops leaving ~10 good digits after reduction mod 1, far beyond every
// range the cost caps admit.
struct PhaseLD {
    long double two_pi_m;
    long double k;
    long double g(long double x) const {
        return x / kTwoPiL * (logl(x / two_pi_m) - 1.0L) - k * x;
    }
    long double gp(long double x) const { return logl(x / two_pi_m) / kTwoPiL - k; }
};

std::complex<long double> unit_e(long double phase) {
    long double t = phase - floorl(phase);
    long double a = kTwoPiL * t;
    return {cosl(a), sinl(a)};
}

std::complex<long double> gl_panel(const PhaseLD& ph, long double p, long double q,
                                   long* evals) {
    const GLRule& r = gl16();
    long double c = 0.5L * (p + q), h = 0.5L * (q - p);
    std::complex<long double> s{0.0L, 0.0L};
    for (int j = 0; j < 8; ++j) {
        s += r.w[j] * (unit_e(ph.g(c + h * r.x[j])) + unit_e(ph.g(c - h * r.x[j])));
    }
    *evals += 16;
    return h * s;
}

void validate_spec(const OscillatorSpec& spec) {
    if (spec.m < 1) throw domain_error("oscillator frequency index m must be >= 1");
    if (spec.k < 0) throw domain_error("oscillator shift k must be >= 0");
    if (!(spec.a > 0.0)) throw domain_error("oscillator domain must stay in x > 0");
    if (spec.a > spec.b) throw domain_error("oscillator endpoints must satisfy a <= b");
}

std::complex<long double> integrate_ld(const PhaseLD& ph, long double a, long double b,
                                       double abs_err) {
    if (a == b) return {0.0L, 0.0L};
    long evals = 0;
    const long double full = b - a;
    const long double min_width = full * 1e-13L;
    std::complex<long double> acc{0.0L, 0.0L};
    std::vector<std::pair<long double, long double>> stack;
    stack.reserve(128);
    stack.emplace_back(a, b);
    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        long double len = q - p;
        long double mid = 0.5L * (p + q);
        long double span = len * std::max(fabsl(ph.gp(p)), fabsl(ph.gp(q)));
        if (span > 0.125L && len > min_width) {
            if (evals > kEvalBudget)
                throw resource_error("quadrature evaluation budget exhausted");
            stack.emplace_back(mid, q);
            stack.emplace_back(p, mid);
            continue;
        }
        std::complex<long double> whole = gl_panel(ph, p, q, &evals);
        std::complex<long double> halves =
            gl_panel(ph, p, mid, &evals) + gl_panel(ph, mid, q, &evals);
        long double tol = static_cast<long double>(abs_err) * len / full;
        if (std::abs(whole - halves) <= std::max(tol, 1e-18L * len) || len <= min_width) {
            acc += halves;
        } else {
            if (evals > kEvalBudget)
                throw resource_error("quadrature evaluation budget exhausted");
            stack.emplace_back(mid, q);
            stack.emplace_back(p, mid);
        }
    }
    return acc;
}

std::complex<long double> integral_ld(const OscillatorSpec& spec, double abs_err) {
    validate_spec(spec);
    if (spec.b > kQuadratureRangeCap)
        throw resource_error("quadrature range cap is b <= 10^7");
    if (!(abs_err > 0.0)) throw domain_error("quadrature error target must be positive");
    PhaseLD ph{kTwoPiL * static_cast<long double>(spec.m),
               static_cast<long double>(spec.k)};
    return integrate_ld(ph, static_cast<long double>(spec.a),
                        static_cast<long double>(spec.b), abs_err);
}

// Integers in an interval with given endpoint openness; empty when lo > hi.
struct IntRange {
    long lo, hi;
    bool empty() const { return lo > hi; }
};

IntRange integers_in(double lo, bool lo_open, double hi, bool hi_open) {
    double l = lo_open ? std::floor(lo) + 1.0 : std::ceil(lo);
    double h = hi_open ? std::ceil(hi) - 1.0 : std::floor(hi);
    if (l > h + 0.5) return {1, 0};
    return {static_cast<long>(l), static_cast<long>(h)};
}

}  // namespace

std::pair<Real, Real> phase_eval(const OscillatorSpec& spec, double x) {
    validate_spec(spec);
    if (!(x > 0.0)) throw domain_error("phase is defined for x > 0");
    const int d = 30;
    Real xr(x, d);
    Real two_pi_m = Real::pi(d) * (2.0 * static_cast<double>(spec.m));
    Real f = xr / (Real::pi(d) * 2.0) * (log(xr / two_pi_m) - 1.0);
    Real g = f - xr * static_cast<double>(spec.k);
    return {std::move(f), std::move(g)};
}

double saddle_abscissa(long m, long k) {
    return 2.0 * M_PI * static_cast<double>(m) *
           std::exp(2.0 * M_PI * static_cast<double>(k));
}

Complex oscillatory_integral(const OscillatorSpec& spec, double abs_err) {
    std::complex<long double> v = integral_ld(spec, abs_err);
    const int d = 20;
    return Complex(Real(static_cast<double>(v.real()), d),
                   Real(static_cast<double>(v.imag()), d));
}

Complex saddle_point_value(long m, long k) {
    if (m < 1) throw domain_error("saddle value needs m >= 1");
    if (k < 0) throw domain_error("saddle value needs k >= 0");
    double need = 2.0 * M_PI * static_cast<double>(k) / std::log(10.0) +
                  std::log10(static_cast<double>(m)) + 20.0;
    const int digits = std::max(kMinDigits, static_cast<int>(std::ceil(need)));
    if (digits > 5000)
        throw precision_error("resonant phase at k=" + std::to_string(k) + " needs " +
                              std::to_string(digits) + " digits; cap is 5000");
    Real e2pk = exp(Real::pi(digits) * (2.0 * static_cast<double>(k)));
    Real turns = frac(-(e2pk * static_cast<double>(m)));
    Complex phase = Complex::unit_phase(Real(0.125, digits)) * Complex::unit_phase(turns);
    Real amp = Real::pi(digits) * 2.0 * exp(Real::pi(digits) * static_cast<double>(k)) *
               sqrt(Real(static_cast<double>(m), digits));
    if (k == 0) amp = amp / 2.0;  // stationary point on the boundary: half weight
    return phase * amp;
}

DerivativeBounds derivative_test_bounds(const OscillatorSpec& spec, double T) {
    if (!(T > 0.0)) throw domain_error("bounds need T > 0");
    OscillatorSpec window{spec.m, spec.k, T, 2.0 * T, spec.theta};
    validate_spec(window);
    long double x0 = kTwoPiL * static_cast<long double>(spec.m) *
                     expl(kTwoPiL * static_cast<long double>(spec.k));
    DerivativeBounds out{};
    out.second_bound = 16.0 * std::sqrt(M_PI * T);
    if (x0 <= static_cast<long double>(T)) {
        long double lambda = logl(static_cast<long double>(T) / x0) / kTwoPiL;
        out.first_bound = static_cast<double>(4.0L / lambda);  // inf at x0 == T
        out.first_applicable = true;
    } else if (x0 >= 2.0L * static_cast<long double>(T)) {
        long double lambda = logl(x0 / (2.0L * static_cast<long double>(T))) / kTwoPiL;
        out.first_bound = static_cast<double>(4.0L / lambda);
        out.first_applicable = true;
    } else {
        out.first_bound = std::numeric_limits<double>::quiet_NaN();
        out.first_applicable = false;
    }
    out.actual = static_cast<double>(std::abs(integral_ld(window, 1e-8)));
    return out;
}

double truncated_poisson_defect(long m, double T, double theta) {
    if (m < 1) throw domain_error("exchange defect needs m >= 1");
    if (!(T >= 10.0)) throw domain_error("exchange defect needs T >= 10");
    if (static_cast<double>(m) > T / M_PI)
        throw domain_error("exchange defect needs m <= T/pi");
    if (!(theta > 0.0 && theta <= 0.1))
        throw domain_error("window half-width theta must lie in (0, 0.1]");

    PhaseLD ph{kTwoPiL * static_cast<long double>(m), 0.0L};
    std::complex<long double> direct{0.0L, 0.0L};
    long n_lo = static_cast<long>(std::floor(T)) + 1;
    long n_hi = static_cast<long>(std::floor(2.0 * T));
    for (long n = n_lo; n <= n_hi; ++n)
        direct += unit_e(ph.g(static_cast<long double>(n)));  // k=0: g == f

    double lo = std::log(T / (2.0 * M_PI * static_cast<double>(m))) / (2.0 * M_PI) - theta;
    double hi = std::log(T / (M_PI * static_cast<double>(m))) / (2.0 * M_PI) + theta;
    IntRange ks = integers_in(lo, true, hi, true);
    std::complex<long double> exchanged{0.0L, 0.0L};
    for (long k = std::max(ks.lo, 0L); k <= ks.hi; ++k) {
        PhaseLD phk{ph.two_pi_m, static_cast<long double>(k)};
        exchanged += integrate_ld(phk, static_cast<long double>(T),
                                  static_cast<long double>(2.0 * T), 1e-8);
    }
    return static_cast<double>(std::abs(direct - exchanged));
}

const char* range_case_name(RangeCase c) {
    switch (c) {
        case RangeCase::left_tail: return "left_tail";
        case RangeCase::left_edge: return "left_edge";
        case RangeCase::interior: return "interior";
        case RangeCase::right_edge: return "right_edge";
        case RangeCase::right_tail: return "right_tail";
    }
    return "?";
}

S1Decomposition s1_contributions(double T, const DivisorTable& table, double theta,
                                 int threads) {
    if (!(T >= 10.0)) throw domain_error("decomposition needs T >= 10");
    if (T > 3.0e4) throw resource_error("decomposition cost budget is T <= 3*10^4");
    if (!(theta > 0.0 && theta <= 0.1))
        throw domain_error("window half-width theta must lie in (0, 0.1]");
    const long m_cap = static_cast<long>(std::floor(T / (2.0 * M_PI)));
    if (m_cap > static_cast<long>(table.limit()))
        throw range_error("decomposition range exceeds the divisor table");

    S1Decomposition out;
    out.theta = theta;
    const unsigned nthreads = resolve_threads(threads);

    for (long k = 0;; ++k) {
        const double A = T / (2.0 * M_PI) * std::exp(-2.0 * M_PI * static_cast<double>(k));
        const double B = 2.0 * A;
        const double L = T / (2.0 * M_PI) *
                         std::exp(-2.0 * M_PI * (static_cast<double>(k) + theta));
        const double U = T / M_PI *
                         std::exp(-2.0 * M_PI * (static_cast<double>(k) - theta));
        if (U < 1.0) break;  // windows only shrink from here on

        struct CaseDef {
            RangeCase label;
            double lo, hi;
            bool lo_open, hi_open;
        };
        const CaseDef defs[5] = {
            {RangeCase::left_tail, L, A - 1.0, true, false},
            {RangeCase::left_edge, A - 1.0, A + 1.0, true, true},
            {RangeCase::interior, A + 1.0, B - 1.0, false, false},
            {RangeCase::right_edge, B - 1.0, B + 1.0, true, true},
            {RangeCase::right_tail, B + 1.0, U, false, true},
        };

        for (const CaseDef& def : defs) {
            IntRange r = integers_in(std::max(def.lo, L), def.lo_open || def.lo < L,
                                     std::min(def.hi, U), def.hi_open || def.hi > U);
            long ms = std::max({r.lo, 1L, static_cast<long>(std::floor(L)) + 1});
            long me = std::min(r.hi, m_cap);
            if (ms > me) continue;

            DecompositionRow row{};
            row.label = def.label;
            row.k = k;
            row.m_lo = std::max(def.lo, L);
            row.m_hi = std::min(def.hi, U);
            row.m_count = me - ms + 1;

            const std::size_t count = static_cast<std::size_t>(me - ms + 1);
            std::vector<std::complex<double>> slot(count, {0.0, 0.0});
            std::vector<double> bound_slot(count, 0.0);
            const bool interior = def.label == RangeCase::interior;
            const bool edge = def.label == RangeCase::left_edge ||
                              def.label == RangeCase::right_edge;

            parallel_for_blocks(count, nthreads, [&](std::size_t i) {
                const long m = ms + static_cast<long>(i);
                const double coeff = static_cast<double>(table.d(m)) /
                                     std::sqrt(static_cast<double>(m));
                if (interior) {
                    Complex v = saddle_point_value(m, k);
                    slot[i] = coeff * std::complex<double>(v.real().to_double(),
                                                           v.imag().to_double());
                    return;
                }
                OscillatorSpec spec{m, k, T, 2.0 * T, theta};
                std::complex<long double> I = integral_ld(spec, 1e-8);
                slot[i] = coeff * std::complex<double>(static_cast<double>(I.real()),
                                                       static_cast<double>(I.imag()));
                if (edge) {
                    bound_slot[i] = coeff * 16.0 * std::sqrt(M_PI * T);
                } else {
                    long double x0 = kTwoPiL * static_cast<long double>(m) *
                                     expl(kTwoPiL * static_cast<long double>(k));
                    long double lam = def.label == RangeCase::left_tail
                                          ? logl(static_cast<long double>(T) / x0) / kTwoPiL
                                          : logl(x0 / (2.0L * static_cast<long double>(T))) /
                                                kTwoPiL;
                    bound_slot[i] = coeff * static_cast<double>(4.0L / lam);
                }
            });

            std::complex<double> sum{0.0, 0.0};
            double bound_sum = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                sum += slot[i];
                bound_sum += bound_slot[i];
            }
            row.re = sum.real();
            row.im = sum.imag();
            row.actual = std::abs(sum);
            row.bound_applicable = !interior;
            row.bound = interior ? std::numeric_limits<double>::quiet_NaN() : bound_sum;
            out.case_re[static_cast<int>(def.label)] += row.re;
            out.case_im[static_cast<int>(def.label)] += row.im;
            out.total_re += row.re;
            out.total_im += row.im;
            out.rows.push_back(row);
        }
    }
    return out;
}

S2Result s2_main(double T, const DivisorTable& table, int threads) {
    if (!(T >= 10.0)) throw domain_error("main-term scan needs T >= 10");
    if (T > 3.0e4) throw resource_error("main-term cost budget is T <= 3*10^4");
    const long m_lo = static_cast<long>(std::floor(T / (2.0 * M_PI))) + 1;
    const long m_hi = static_cast<long>(std::floor(T / M_PI));
    if (m_hi > static_cast<long>(table.limit()))
        throw range_error("main-term range exceeds the divisor table");

    const std::size_t count = m_hi >= m_lo ? static_cast<std::size_t>(m_hi - m_lo + 1) : 0;
    std::vector<std::complex<double>> slot(count, {0.0, 0.0});
    parallel_for_blocks(count, resolve_threads(threads), [&](std::size_t i) {
        const long m = m_lo + static_cast<long>(i);
        const double a = 2.0 * M_PI * static_cast<double>(m);
        const double b = 2.0 * T;
        if (a >= b) return;  // zero-width tail at m == T/pi
        const double coeff =
            static_cast<double>(table.d(m)) / std::sqrt(static_cast<double>(m));
        std::complex<long double> I = integral_ld({m, 0, a, b, 0.05}, 1e-8);
        slot[i] = coeff * std::complex<double>(static_cast<double>(I.real()),
                                               static_cast<double>(I.imag()));
    });
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t i = 0; i < count; ++i) sum += slot[i];

    const int d = 30;
    unsigned long long mass = 0;
    if (m_hi >= m_lo)
        mass = table.prefix(static_cast<std::uint64_t>(m_hi)) -
               table.prefix(static_cast<std::uint64_t>(m_lo - 1));
    Complex predicted = Complex::unit_phase(Real(0.125, d)) *
                        (Real::pi(d) * Real(static_cast<double>(mass), d));
    return {Complex(Real(sum.real(), 20), Real(sum.imag(), 20)), predicted};
}

}  // namespace zm
