#include "zetamoment/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "zetamoment/errors.hpp"
#include "zetamoment/parallel.hpp"
#include "zetamoment/zeta.hpp"

namespace zm {

namespace {

constexpr std::size_t kNBlock = 64;   // summand indices per work unit
constexpr int kEvalDigits = 20;       // plenty for double-accurate |zeta|^2

double two_gamma_minus_one() {
    static const double v = 2.0 * euler_gamma(30).to_double() - 1.0;
    return v;
}

double zeta_sq_reference(double t) {
    Complex s{Real(0.5, kEvalDigits), Real(t, kEvalDigits)};
    return norm(zeta_reference(s, kEvalDigits)).to_double();
}

// Per-n summand for the discrete moment. The functional-equation path needs
// t >= 2pi, so the first few integers always fall back to the reference
// evaluator regardless of mode.
double discrete_term(long n, MomentMode mode, const DivisorTable& table,
                     const AfeTail& tail) {
    if (mode == MomentMode::afe && n >= 7) {
        double t = static_cast<double>(n);
        double x = t / (2.0 * M_PI);
        double smooth = (tail.c0 + tail.c1 * std::log(x)) / std::sqrt(x);
        return (zeta_sq_critical_approx(t, table) + motohashi_residual(t, table))
                   .to_double() +
               smooth;
    }
    return zeta_sq_reference(static_cast<double>(n));
}

// Fill slots[i] = f(first + i) for i in [0, count) with a fixed block
// decomposition, so the values (and any ordered fold over them) do not
// depend on the thread count.
template <typename F>
void fill_slots(std::vector<double>& slots, long first, unsigned threads, F f) {
    const std::size_t count = slots.size();
    const std::size_t n_blocks = (count + kNBlock - 1) / kNBlock;
    parallel_for_blocks(n_blocks, threads, [&](std::size_t b) {
        const std::size_t lo = b * kNBlock;
        const std::size_t hi = std::min(lo + kNBlock, count);
        for (std::size_t i = lo; i < hi; ++i) {
            slots[i] = f(first + static_cast<long>(i));
        }
    });
}

double fold_prefix(const std::vector<double>& slots, std::size_t count) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < count; ++i) acc += slots[i];
    return static_cast<double>(acc);
}

std::vector<double> discrete_term_table(double T, MomentMode mode,
                                        const DivisorTable& table, int threads,
                                        const AfeTail& tail) {
    if (!(T >= 1.0)) throw domain_error("discrete moment needs T >= 1");
    const double cap =
        mode == MomentMode::reference ? kDiscreteReferenceCapT : kDiscreteAfeCapT;
    if (T > cap) {
        throw resource_error("discrete moment budget exceeded: T > " +
                             std::to_string(cap));
    }
    const long N = static_cast<long>(std::floor(T));
    std::vector<double> slots(static_cast<std::size_t>(N));
    fill_slots(slots, 1, resolve_threads(threads),
               [&](long n) { return discrete_term(n, mode, table, tail); });
    return slots;
}

// Adaptive Simpson with the classic 15x Richardson acceptance; endpoint
// values are reused down the recursion so each refinement costs two
// evaluations.
struct SimpsonCtx {
    std::atomic<long>* evals;
    long budget;
};

double f_eval(SimpsonCtx& ctx, double t) {
    if (ctx.evals->fetch_add(1, std::memory_order_relaxed) >= ctx.budget) {
        throw resource_error("quadrature evaluation budget exceeded");
    }
    return zeta_sq_reference(t);
}

double simpson_rec(SimpsonCtx& ctx, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f_eval(ctx, lm);
    const double frm = f_eval(ctx, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double refined = left + right;
    if (depth <= 0 || std::abs(refined - whole) <= 15.0 * tol) {
        return refined + (refined - whole) / 15.0;
    }
    return simpson_rec(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_panel(SimpsonCtx& ctx, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f_eval(ctx, a);
    const double fm = f_eval(ctx, m);
    const double fb = f_eval(ctx, b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(ctx, a, b, fa, fm, fb, whole, tol, 16);
}

}  // namespace

double discrete_second_moment(double T, MomentMode mode, const DivisorTable& table,
                              int threads, bool include_zero, const AfeTail& tail) {
    std::vector<double> slots = discrete_term_table(T, mode, table, threads, tail);
    long double acc = include_zero ? zeta_sq_reference(0.0) : 0.0;
    for (double v : slots) acc += v;
    return static_cast<double>(acc);
}

double continuous_second_moment(double T, int threads) {
    if (!(T > 0.0)) throw domain_error("continuous moment needs T > 0");
    if (T > kContinuousCapT) {
        throw resource_error("continuous moment budget exceeded: T > " +
                             std::to_string(kContinuousCapT));
    }
    const std::size_t n_panels = static_cast<std::size_t>(std::ceil(T));
    const double tol_total = 1.0e-4 * std::max(T, 1.0);
    const double tol_panel = tol_total / static_cast<double>(n_panels);

    std::atomic<long> evals{0};
    SimpsonCtx ctx{&evals, 8'000'000};

    std::vector<double> panel(n_panels, 0.0);
    parallel_for_blocks(n_panels, resolve_threads(threads), [&](std::size_t j) {
        const double a = static_cast<double>(j);
        const double b = std::min(a + 1.0, T);
        if (b > a) panel[j] = integrate_panel(ctx, a, b, tol_panel);
    });

    long double acc = 0.0L;
    for (double v : panel) acc += v;
    return static_cast<double>(acc);
}

double error_envelope(double T, double C) {
    if (!(C >= 0.0)) throw domain_error("envelope constant must be >= 0");
    if (!(T >= 16.0)) {
        throw domain_error("envelope needs T >= 16 so log log log T > 0");
    }
    const double l1 = std::log(T);
    const double l2 = std::log(l1);
    const double l3 = std::log(l2);
    return T * l1 * std::exp(-C * l2 / l3);
}

Complex first_discrete_moment(const Complex& s0, double delta, long N, int threads) {
    const double sigma = s0.real().to_double();
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw domain_error("first moment needs Re(s0) in (0,1)");
    }
    if (!(delta > 0.0)) throw domain_error("first moment needs delta > 0");
    if (N < 1) throw domain_error("first moment needs N >= 1");
    const double t_max =
        std::abs(s0.imag().to_double()) + delta * static_cast<double>(N - 1);
    if (N > 100000 || t_max > 5.0e4) {
        throw resource_error("first moment budget exceeded (N or N*delta too large)");
    }

    std::vector<double> re(static_cast<std::size_t>(N));
    std::vector<double> im(static_cast<std::size_t>(N));
    const std::size_t n_blocks = (re.size() + kNBlock - 1) / kNBlock;
    parallel_for_blocks(n_blocks, resolve_threads(threads), [&](std::size_t b) {
        const std::size_t lo = b * kNBlock;
        const std::size_t hi = std::min(lo + kNBlock, re.size());
        for (std::size_t i = lo; i < hi; ++i) {
            Complex s = s0 + Complex(0.0, delta * static_cast<double>(i), kEvalDigits);
            Complex z = zeta_reference(s, kEvalDigits);
            re[i] = z.real().to_double();
            im[i] = z.imag().to_double();
        }
    });

    long double ar = 0.0L, ai = 0.0L;
    for (std::size_t i = 0; i < re.size(); ++i) {
        ar += re[i];
        ai += im[i];
    }
    const double inv_n = 1.0 / static_cast<double>(N);
    return Complex(static_cast<double>(ar) * inv_n, static_cast<double>(ai) * inv_n,
                   30);
}

FourthMomentResult fourth_moment_check(double sigma, double d, long T,
                                       const DivisorTable& table, int threads) {
    if (!(sigma > 0.55)) {
        throw domain_error("fourth moment needs sigma > 0.55 for tail control");
    }
    if (!(d > 0.0)) throw domain_error("fourth moment needs d > 0");
    if (T < 1) throw domain_error("fourth moment needs T >= 1");
    const double t_max = d * static_cast<double>(T - 1);
    if (T > 100000 || t_max > 5.0e4) {
        throw resource_error("fourth moment budget exceeded (T or T*d too large)");
    }

    std::vector<double> slots(static_cast<std::size_t>(T));
    fill_slots(slots, 0, resolve_threads(threads), [&](long n) {
        Complex s{Real(sigma, kEvalDigits),
                  Real(d * static_cast<double>(n), kEvalDigits)};
        const double sq = norm(zeta_reference(s, kEvalDigits)).to_double();
        return sq * sq;
    });
    FourthMomentResult out;
    out.empirical = fold_prefix(slots, slots.size());

    // Dirichlet series sum_m d(m)^2 m^{-2 sigma} equals zeta(2s)^4 / zeta(4s);
    // the closed form certifies how much of the tail a finite M still misses.
    const int cd = 30;
    const Real z2 = zeta_reference(Complex{Real(2.0 * sigma, cd), Real(0.0, cd)}, cd)
                        .real();
    const Real z4 = zeta_reference(Complex{Real(4.0 * sigma, cd), Real(0.0, cd)}, cd)
                        .real();
    const double full = ((z2 * z2) * (z2 * z2) / z4).to_double();

    const long m_cap = std::min<long>(10'000'000, static_cast<long>(table.limit()));
    long double partial = 0.0L;
    long m_done = 0;
    long target = 64;
    bool met = false;
    while (m_done < m_cap) {
        const long stop = std::min(target, m_cap);
        for (long m = m_done + 1; m <= stop; ++m) {
            const long double dm = table.d(static_cast<std::uint64_t>(m));
            partial += dm * dm * std::pow(static_cast<long double>(m),
                                          -2.0L * static_cast<long double>(sigma));
        }
        m_done = stop;
        if (full - static_cast<double>(partial) < 1.0e-6 * full) {
            met = true;
            break;
        }
        target *= 2;
    }
    if (met) {
        out.predicted = static_cast<double>(T) * static_cast<double>(partial);
        out.m_terms = m_done;
        out.tail_met = true;
    } else {
        // Tail too slow to certify by direct summation; fall back to the
        // closed form, which is the same series summed exactly.
        out.predicted = static_cast<double>(T) * full;
        out.m_terms = 0;
        out.tail_met = false;
    }
    return out;
}

MomentReport build_report(const std::vector<double>& grid, double c_fit,
                          const DivisorTable& table, int threads,
                          double continuous_max_T, const AfeTail& tail) {
    if (grid.empty()) throw domain_error("report grid must not be empty");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i] < grid[i + 1])) {
            throw domain_error("report grid must be strictly ascending");
        }
    }
    if (!(c_fit >= 0.0)) throw domain_error("envelope constant must be >= 0");

    const double t_top = grid.back();
    std::vector<double> slots =
        discrete_term_table(t_top, MomentMode::afe, table, threads, tail);
    const long n_top = static_cast<long>(slots.size());

    MomentReport rep;
    rep.c_fit = c_fit;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double g2 = two_gamma_minus_one();

    for (double T : grid) {
        if (!(T >= 1.0)) throw domain_error("report grid values need T >= 1");
        MomentRow row;
        row.T = T;
        const std::size_t n = static_cast<std::size_t>(std::floor(T));
        row.discrete = fold_prefix(slots, n);
        row.main1 = T * std::log(T / (2.0 * M_PI));
        row.main2 = g2 * T;
        row.envelope = T >= 16.0 ? error_envelope(T, c_fit) : nan;
        row.residual_discrete = row.discrete - row.main1;
        if (T <= continuous_max_T) {
            row.continuous = continuous_second_moment(T, threads);
            row.residual_continuous = row.continuous - row.main1 - row.main2;
        } else {
            row.continuous = nan;
            row.residual_continuous = nan;
        }
        rep.rows.push_back(row);
    }

    // Re-assemble the largest prefix sum from dyadic blocks (T/2^{j+1}, T/2^j].
    std::vector<long> cuts;  // block upper indices, descending
    for (double x = t_top; static_cast<long>(std::floor(x)) >= 1; x *= 0.5) {
        cuts.push_back(static_cast<long>(std::floor(x)));
    }
    long double total = 0.0L;
    for (std::size_t j = cuts.size(); j-- > 0;) {
        const long lo = (j + 1 < cuts.size()) ? cuts[j + 1] : 0;
        long double block = 0.0L;
        for (long n = lo + 1; n <= cuts[j]; ++n) block += slots[n - 1];
        total += block;
    }
    rep.dyadic_total = static_cast<double>(total);
    rep.dyadic_direct = fold_prefix(slots, static_cast<std::size_t>(n_top));
    rep.dyadic_rel_err =
        std::abs(rep.dyadic_total - rep.dyadic_direct) / std::max(rep.dyadic_direct, 1.0);
    return rep;
}

}  // namespace zm
