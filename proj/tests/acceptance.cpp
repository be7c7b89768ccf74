// Acceptance battery: eleven independent checks over the assembled toolkit,
// one verdict line each.  Usage: acceptance [n ...] runs the listed checks
// (default: all).  Exit status is the number of failed checks.
//
// Constants that bound an inequality come from the committed calibration
// file; tolerances that define a check are pinned here and nowhere else.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zetamoment/cf.hpp"
#include "zetamoment/divisor.hpp"
#include "zetamoment/errors.hpp"
#include "zetamoment/expsum.hpp"
#include "zetamoment/moments.hpp"
#include "zetamoment/mp.hpp"
#include "zetamoment/report_io.hpp"
#include "zetamoment/runconfig.hpp"
#include "zetamoment/saddle.hpp"
#include "zetamoment/zeta.hpp"

namespace {

using zm::Calibration;

const std::vector<double> kMomentGrid = {2000.0, 5000.0, 10000.0};
const std::vector<double> kSaddleGrid = {500.0, 1000.0, 2000.0, 5000.0, 10000.0};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// ---- shared artifacts, computed lazily and cached per thread count ----

struct ReportArtifact {
    zm::MomentReport report;
    std::string csv;
};

struct SaddleArtifact {
    std::string s1_csv;
    std::string s2_csv;
    std::vector<double> s1_abs;    // |S1(T)| per grid point
    std::vector<double> s2_diff;   // |computed - predicted| per grid point
};

struct CfArtifact {
    std::string text;  // canonical serialization of all four records
    std::vector<zm::ContinuedFractionRecord> records;
};

std::vector<std::string> moment_row_cells(const zm::MomentRow& r) {
    using zm::format_double;
    return {format_double(r.T),
            format_double(r.discrete),
            format_double(r.continuous),
            format_double(r.main1),
            format_double(r.main2),
            format_double(r.envelope),
            format_double(r.residual_discrete),
            format_double(r.residual_continuous)};
}

class Context {
  public:
    explicit Context(const Calibration& cal) : cal_(cal), table_(100002) {}

    const Calibration& cal() const { return cal_; }
    const zm::DivisorTable& table() const { return table_; }

    const ReportArtifact& report(int threads) {
        auto it = reports_.find(threads);
        if (it != reports_.end()) return it->second;
        ReportArtifact art;
        const zm::AfeTail tail{cal_.afe_tail_c0, cal_.afe_tail_c1};
        art.report = zm::build_report(kMomentGrid, cal_.c_envelope, table_, threads,
                                      /*continuous_max_T=*/0.0, tail);
        zm::CsvMeta meta{"moment-v1", 0, cal_.version};
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : art.report.rows) cells.push_back(moment_row_cells(r));
        art.csv = zm::render_csv(meta,
                                 {"T", "discrete", "continuous", "main1", "main2",
                                  "envelope", "residual_discrete",
                                  "residual_continuous"},
                                 cells);
        return reports_.emplace(threads, std::move(art)).first->second;
    }

    const SaddleArtifact& saddle(int threads) {
        auto it = saddles_.find(threads);
        if (it != saddles_.end()) return it->second;
        SaddleArtifact art;
        std::vector<std::vector<std::string>> s1_cells, s2_cells;
        for (double T : kSaddleGrid) {
            auto dec = zm::s1_contributions(T, table_, 0.05, threads);
            for (const auto& row : dec.rows) {
                s1_cells.push_back(
                    {zm::format_double(T), zm::range_case_name(row.label),
                     std::to_string(row.k), zm::format_double(row.m_lo),
                     zm::format_double(row.m_hi), std::to_string(row.m_count),
                     zm::format_double(row.re), zm::format_double(row.im),
                     zm::format_double(row.bound), row.bound_applicable ? "1" : "0",
                     zm::format_double(row.actual)});
            }
            art.s1_abs.push_back(std::hypot(dec.total_re, dec.total_im));

            auto s2 = zm::s2_main(T, table_, threads);
            const double cr = s2.computed.real().to_double();
            const double ci = s2.computed.imag().to_double();
            const double pr = s2.predicted.real().to_double();
            const double pi_ = s2.predicted.imag().to_double();
            art.s2_diff.push_back(std::hypot(cr - pr, ci - pi_));
            s2_cells.push_back({zm::format_double(T), zm::format_double(cr),
                                zm::format_double(ci), zm::format_double(pr),
                                zm::format_double(pi_)});
        }
        zm::CsvMeta meta{"saddle-v1", 0, cal_.version};
        art.s1_csv = zm::render_csv(meta,
                                    {"T", "case", "k", "m_lo", "m_hi", "m_count",
                                     "re", "im", "bound", "bound_applicable",
                                     "actual"},
                                    s1_cells);
        art.s2_csv = zm::render_csv(
            meta, {"T", "computed_re", "computed_im", "predicted_re", "predicted_im"},
            s2_cells);
        return saddles_.emplace(threads, std::move(art)).first->second;
    }

    // Rebuilt on every call so repeated runs double as a determinism check.
    CfArtifact cf() {
        CfArtifact art;
        std::ostringstream out;
        for (long k = 1; k <= 4; ++k) {
            auto rec = zm::continued_fraction(k, 500, zm::kDefaultCfDigits);
            out << "k=" << rec.k << " digits=" << rec.digits_used
                << " certified=" << rec.certified_upto << "\n";
            for (const auto& a : rec.quotients) out << a.get_str() << ",";
            out << "\n";
            art.records.push_back(std::move(rec));
        }
        art.text = out.str();
        return art;
    }

  private:
    Calibration cal_;
    zm::DivisorTable table_;
    std::map<int, ReportArtifact> reports_;
    std::map<int, SaddleArtifact> saddles_;
};

// ---- the eleven checks ----

// 1: the assembled discrete moment divided by T log(T/2pi) sits in
// [1, 1 + 3/log T] on {2e3, 5e3, 1e4}, the per-T residual stays in [0, T],
// and the sweep finishes inside ten minutes.
Outcome check_1(Context& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& art = ctx.report(1);
    double worst_slack = 1e9;
    for (const auto& row : art.report.rows) {
        const double ratio = row.discrete / row.main1;
        const double hi = 1.0 + 3.0 / std::log(row.T);
        const double resid = row.residual_discrete / row.T;
        if (!(ratio >= 1.0 && ratio <= hi)) {
            return {false, fmt("ratio %.5f outside [1, %.5f] at T=%.0f", ratio, hi, row.T)};
        }
        if (!(resid >= 0.0 && resid <= 1.0)) {
            return {false, fmt("residual/T %.5f outside [0,1] at T=%.0f", resid, row.T)};
        }
        worst_slack = std::min(worst_slack, hi - ratio);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 600.0) return {false, fmt("sweep took %.1fs > 600s", secs)};
    return {true, fmt("ratio band slack >= %.4f, %.1fs", worst_slack, secs)};
}

// 2: discrete and continuous moments agree to within T at T = 1e3.
Outcome check_2(Context& ctx) {
    const zm::AfeTail tail{ctx.cal().afe_tail_c0, ctx.cal().afe_tail_c1};
    const double d = zm::discrete_second_moment(1000.0, zm::MomentMode::afe,
                                                ctx.table(), 1, false, tail);
    const double c = zm::continuous_second_moment(1000.0, 1);
    const double gap = std::abs(d - c) / 1000.0;
    return {gap <= 1.0, fmt("|discrete-continuous|/T = %.5f (<= 1)", gap)};
}

// 3: the t^{1/4}-scaled pointwise defect of the approximation stays under
// the calibrated ceiling on a 50-point log grid in [50, 5000], and extending
// the same grid to 1e4 raises the maximum by less than 25%.
Outcome check_3(Context& ctx) {
    auto scaled_defect = [&](double t) {
        zm::Complex z = zm::zeta_reference(
            zm::Complex{zm::Real(0.5, 20), zm::Real(t, 20)}, 20);
        const double defect = norm(z).to_double() -
                              zm::zeta_sq_critical_approx(t, ctx.table()).to_double() -
                              zm::motohashi_residual(t, ctx.table()).to_double();
        return std::abs(defect) * std::pow(t, 0.25);
    };
    const double step = std::log(5000.0 / 50.0) / 49.0;
    double m1 = 0.0;
    for (int i = 0; i < 50; ++i) m1 = std::max(m1, scaled_defect(50.0 * std::exp(i * step)));
    double m2 = m1;
    for (int i = 50; 50.0 * std::exp(i * step) <= 10000.0; ++i) {
        m2 = std::max(m2, scaled_defect(50.0 * std::exp(i * step)));
    }
    if (m2 > ctx.cal().afe_defect_ceiling) {
        return {false, fmt("scaled defect %.4f above ceiling %.4f", m2,
                           ctx.cal().afe_defect_ceiling)};
    }
    if (!(m2 < 1.25 * m1)) {
        return {false, fmt("extension grew the max %.4f -> %.4f (>= 25%%)", m1, m2)};
    }
    return {true, fmt("max %.4f within ceiling %.4f, growth %.1f%%", m2,
                      ctx.cal().afe_defect_ceiling, 100.0 * (m2 / m1 - 1.0))};
}

// 4: twenty randomized single-signed-phase configurations satisfy both the
// first-derivative and the second-derivative quadrature bounds.
Outcome check_4(Context&) {
    std::mt19937 gen(20260816u);
    auto u = [&]() { return gen() * 2.3283064365386963e-10; };
    int accepted = 0, tried = 0;
    double worst1 = 0.0, worst2 = 0.0;
    while (accepted < 20 && tried < 1000) {
        ++tried;
        const long k = static_cast<long>(u() * 3.0);
        const double T = 500.0 + u() * 4500.0;
        const double r = (u() < 0.5) ? (0.05 + u() * 0.75) : (2.2 + u() * 17.8);
        const long m = std::max(1L, std::lround(r * T / zm::saddle_abscissa(1, k)));
        const double x0 = zm::saddle_abscissa(m, k);
        if (x0 > 0.9 * T && x0 < 2.2 * T) continue;  // rounding moved it inside
        zm::OscillatorSpec spec{m, k, T, 2.0 * T, 0.05};
        const auto b = zm::derivative_test_bounds(spec, T);
        if (!b.first_applicable) continue;
        ++accepted;
        if (b.actual > b.first_bound) {
            return {false, fmt("first-derivative bound broken: %.4f > %.4f", b.actual,
                               b.first_bound)};
        }
        if (b.actual > b.second_bound) {
            return {false, fmt("second-derivative bound broken: %.4f > %.4f", b.actual,
                               b.second_bound)};
        }
        worst1 = std::max(worst1, b.actual / b.first_bound);
        worst2 = std::max(worst2, b.actual / b.second_bound);
    }
    if (accepted < 20) return {false, fmt("only %d valid configs drawn", accepted)};
    return {true, fmt("20/20; worst first-bound use %.1f%%, second %.2f%%",
                      100.0 * worst1, 100.0 * worst2)};
}

// 5: interior stationary points match the closed form within
// 5 (T/(2T-x0) + T/(x0-T) + 1); the endpoint family matches its halved
// closed form within 5 (T/(2T-2pi m) + 1).
Outcome check_5(Context&) {
    double worst = 0.0;
    for (long m = 1; m <= 5; ++m) {
        for (double rho : {1.3, 1.7}) {
            const double x0 = zm::saddle_abscissa(m, 1);
            const double T = x0 / rho;
            zm::OscillatorSpec spec{m, 1, T, 2.0 * T, 0.05};
            const zm::Complex q = zm::oscillatory_integral(spec);
            const zm::Complex c = zm::saddle_point_value(m, 1);
            const double diff =
                std::hypot(q.real().to_double() - c.real().to_double(),
                           q.imag().to_double() - c.imag().to_double());
            const double bound =
                5.0 * (T / (2.0 * T - x0) + T / (x0 - T) + 1.0);
            if (diff > bound) {
                return {false,
                        fmt("interior m=%.0f: |quadrature-closed| %.3f > %.3f",
                            static_cast<double>(m), diff, bound)};
            }
            worst = std::max(worst, diff / bound);
        }
    }
    for (long m : {100L, 400L, 1000L}) {
        const double T = 1.5 * M_PI * static_cast<double>(m);
        zm::OscillatorSpec spec{m, 0, 2.0 * M_PI * static_cast<double>(m), 2.0 * T,
                                0.05};
        const zm::Complex q = zm::oscillatory_integral(spec);
        const zm::Complex c = zm::saddle_point_value(m, 0);
        const double diff = std::hypot(q.real().to_double() - c.real().to_double(),
                                       q.imag().to_double() - c.imag().to_double());
        const double bound =
            5.0 * (T / (2.0 * T - 2.0 * M_PI * static_cast<double>(m)) + 1.0);
        if (diff > bound) {
            return {false, fmt("endpoint m=%.0f: defect %.3f > %.3f",
                               static_cast<double>(m), diff, bound)};
        }
        worst = std::max(worst, diff / bound);
    }
    return {true, fmt("10 interior + 3 endpoint; worst bound use %.1f%%", 100.0 * worst)};
}

// 6: exchanging the truncated sum for its integral family leaves an
// absolute defect of at most the calibrated ceiling on ten (m, T) cases.
Outcome check_6(Context& ctx) {
    const std::pair<long, double> cases[10] = {
        {1, 300.0}, {1, 600.0}, {1, 1000.0}, {2, 500.0},  {3, 700.0},
        {5, 400.0}, {5, 900.0}, {7, 600.0},  {10, 300.0}, {10, 1000.0}};
    double worst = 0.0;
    for (const auto& [m, T] : cases) {
        const double d = zm::truncated_poisson_defect(m, T, 0.05);
        if (d > ctx.cal().poisson_defect_max) {
            return {false, fmt("defect %.3f above %.1f at m=%.0f", d,
                               ctx.cal().poisson_defect_max, static_cast<double>(m))};
        }
        worst = std::max(worst, d);
    }
    return {true, fmt("worst defect %.3f of allowed %.1f", worst,
                      ctx.cal().poisson_defect_max)};
}

// 7: one calibrated envelope constant covers |S1(T)| across the whole grid,
// the endpoint sum tracks its prediction within the calibrated T^{0.6}
// multiple, and dyadic re-assembly of the discrete moment is exact to 1e-8.
Outcome check_7(Context& ctx) {
    const auto& sad = ctx.saddle(1);
    for (std::size_t i = 0; i < kSaddleGrid.size(); ++i) {
        const double T = kSaddleGrid[i];
        const double env = zm::error_envelope(T, ctx.cal().c_envelope);
        if (sad.s1_abs[i] > env) {
            return {false, fmt("|S1| %.2f above envelope %.2f at T=%.0f",
                               sad.s1_abs[i], env, T)};
        }
        const double s2_cap = ctx.cal().c_s2 * std::pow(T, 0.6);
        if (sad.s2_diff[i] > s2_cap) {
            return {false, fmt("endpoint-sum defect %.2f above %.2f at T=%.0f",
                               sad.s2_diff[i], s2_cap, T)};
        }
    }
    const double rel = ctx.report(1).report.dyadic_rel_err;
    if (!(rel <= 1e-8)) return {false, fmt("dyadic re-assembly off by %.3e", rel)};
    return {true, fmt("envelope and endpoint caps hold on 5 T; dyadic %.1e", rel)};
}

// 8: one calibrated constant bounds the reflection-identity residual over
// sqrt(x) log x for all twelve (x, eta) pairs with eta^2 x <= 1.
Outcome check_8(Context& ctx) {
    double worst = 0.0;
    for (double x : {1.0e3, 1.0e4, 3.0e4, 1.0e5}) {
        for (double r : {0.25, 0.5, 0.99}) {
            const double eta = std::sqrt(r / x);
            const int digits = zm::wilton_precision_rule(x, eta);
            zm::WiltonQuery q{x, zm::Real(eta, digits), digits};
            const double res =
                zm::wilton_identity_residual(q, ctx.table(), 1).to_double();
            const double normalized = res / (std::sqrt(x) * std::log(x));
            if (normalized > ctx.cal().c_wilton) {
                return {false, fmt("normalized residual %.4f above %.4f at x=%.0f",
                                   normalized, ctx.cal().c_wilton, x)};
            }
            worst = std::max(worst, normalized);
        }
    }
    return {true, fmt("12/12 under %.4f; worst %.4f", ctx.cal().c_wilton, worst)};
}

// 9: each of k = 1..4 certifies at least fifty quotients, one global
// quotient-growth constant covers all four, convergent determinants are
// exactly alternating, the irrationality-measure inequality flag-passes on
// the first ten convergents, and the whole battery stays under two minutes.
Outcome check_9(Context& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    auto art = ctx.cf();
    for (const auto& rec : art.records) {
        if (rec.certified_upto < 50) {
            return {false, fmt("k=%.0f certified only %.0f quotients",
                               static_cast<double>(rec.k),
                               static_cast<double>(rec.certified_upto))};
        }
        const auto lemma = zm::lemma1_check(rec, ctx.cal().c_lemma1);
        if (!std::all_of(lemma.pass.begin(), lemma.pass.end(),
                         [](bool b) { return b; })) {
            return {false, fmt("growth law fails at c=%.3f for k=%.0f",
                               ctx.cal().c_lemma1, static_cast<double>(rec.k))};
        }
        const auto conv = zm::convergents(rec);
        for (std::size_t i = 1; i < conv.size(); ++i) {
            mpz_class det = conv[i].first * conv[i - 1].second -
                            conv[i - 1].first * conv[i].second;
            const int expect = (i % 2 == 1) ? 1 : -1;
            if (det != expect) {
                return {false, fmt("determinant %.0f at index %.0f of k=%.0f",
                                   det.get_d(), static_cast<double>(i),
                                   static_cast<double>(rec.k))};
            }
        }
        for (std::size_t i = 0; i < 10 && i < conv.size(); ++i) {
            const auto w = zm::waldschmidt_check(rec.k, conv[i].first, conv[i].second);
            if (!(w.pass && w.rhs_below_floor)) {
                return {false, fmt("measure inequality not flag-passed at i=%.0f, k=%.0f",
                                   static_cast<double>(i), static_cast<double>(rec.k))};
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 120.0) return {false, fmt("battery took %.1fs > 120s", secs)};
    return {true, fmt("4 records, >= 50 certified each, %.1fs", secs)};
}

// 10: the first discrete moment converges to its resonant limit (within 5%
// at N = 2000 and closer than at N = 500), sits within 5% of 1 off
// resonance, and the fourth-moment prediction matches within 5%.
Outcome check_10(Context& ctx) {
    const double delta = 2.0 * M_PI / std::log(2.0);
    const double limit = 1.0 / (1.0 - std::pow(2.0, -0.75));
    const zm::Complex s0{zm::Real(0.75, 30), zm::Real(0.0, 30)};

    const zm::Complex m500 = zm::first_discrete_moment(s0, delta, 500);
    const zm::Complex m2000 = zm::first_discrete_moment(s0, delta, 2000);
    const double dev500 = std::hypot(m500.real().to_double() - limit,
                                     m500.imag().to_double());
    const double dev2000 = std::hypot(m2000.real().to_double() - limit,
                                      m2000.imag().to_double());
    if (dev2000 / limit > 0.05) {
        return {false, fmt("resonant deviation %.4f of limit (> 5%%)", dev2000 / limit)};
    }
    if (!(dev2000 < dev500)) {
        return {false, fmt("no improvement: dev(2000)=%.4f vs dev(500)=%.4f", dev2000,
                           dev500)};
    }

    const zm::Complex off = zm::first_discrete_moment(s0, 1.0, 2000);
    const double dev_off =
        std::hypot(off.real().to_double() - 1.0, off.imag().to_double());
    if (dev_off > 0.05) {
        return {false, fmt("off-resonance deviation %.4f from 1 (> 0.05)", dev_off)};
    }

    const auto fm = zm::fourth_moment_check(2.0, 1.0, 500, ctx.table());
    const double rel = std::abs(fm.empirical - fm.predicted) / fm.predicted;
    if (!fm.tail_met || rel > 0.05) {
        return {false, fmt("fourth moment off by %.4f (tail %s)", rel,
                           fm.tail_met ? 1.0 : 0.0)};
    }
    return {true, fmt("resonant %.2f%%, off-resonance %.2f%%, fourth %.2f%%",
                      100.0 * dev2000 / limit, 100.0 * dev_off, 100.0 * rel)};
}

// 11: the rendered artifacts behind checks 1, 7, and 9 are byte-identical
// when recomputed with eight worker threads (and, for the expansion
// records, when simply recomputed).
Outcome check_11(Context& ctx) {
    if (ctx.report(1).csv != ctx.report(8).csv) {
        return {false, "moment table differs between 1 and 8 threads"};
    }
    const auto& a = ctx.saddle(1);
    const auto& b = ctx.saddle(8);
    if (a.s1_csv != b.s1_csv || a.s2_csv != b.s2_csv) {
        return {false, "decomposition tables differ between 1 and 8 threads"};
    }
    if (ctx.cf().text != ctx.cf().text) {
        return {false, "expansion records differ between repeated runs"};
    }
    return {true, "moment, decomposition, and expansion artifacts byte-stable"};
}

const char* kLabels[11] = {
    "discrete moment ratio and residual bands",
    "discrete vs continuous moment at T=1e3",
    "scaled pointwise defect ceiling and growth",
    "randomized derivative-test bounds",
    "stationary-point closed forms",
    "sum-to-integral exchange defect",
    "error envelope, endpoint sum, dyadic identity",
    "reflection-identity residual battery",
    "certified expansions and growth law",
    "first and fourth moment limits",
    "thread-count byte stability",
};

}  // namespace

int main(int argc, char** argv) {
    Calibration cal;
    try {
        cal = zm::load_calibration(ZM_CALIBRATION_FILE);
    } catch (const std::exception& e) {
        std::printf("cannot load calibration: %s\n", e.what());
        return 11;
    }
    std::printf("calibration version %d from %s\n", cal.version, ZM_CALIBRATION_FILE);

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty()) {
        for (int i = 1; i <= 11; ++i) wanted.push_back(i);
    }

    Context ctx(cal);
    const std::function<Outcome(Context&)> checks[11] = {
        check_1, check_2, check_3, check_4, check_5, check_6,
        check_7, check_8, check_9, check_10, check_11};

    int failures = 0;
    for (int n : wanted) {
        if (n < 1 || n > 11) {
            std::printf("FAIL check %d: no such check\n", n);
            ++failures;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = checks[n - 1](ctx);
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("%s check %d: %s — %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", n,
                    kLabels[n - 1], out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
