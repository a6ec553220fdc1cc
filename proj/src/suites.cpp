#include "tmq/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "tmq/dseries.hpp"
#include "tmq/error.hpp"
#include "tmq/moments.hpp"
#include "tmq/special_values.hpp"
#include "tmq/trace_sums.hpp"

namespace tmq {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

CriterionOutcome outcome(int id, const char* name)
{
    CriterionOutcome c;
    c.id = id;
    c.name = name;
    return c;
}

const Workers& pool(const SuiteOptions& o) { return o.workers ? *o.workers : serial_workers(); }

bool divides_all(const TripleSpec& t, u64 n)
{
    return n % u64(t.a) == 0 && n % u64(t.b) == 0 && n % u64(t.c) == 0;
}

std::vector<u64> smallest_primes_for(const TripleSpec& t, int count)
{
    std::vector<u64> out;
    for (u64 q = 3; int(out.size()) < count; ++q)
        if (is_prime(q) && divides_all(t, q - 1))
            out.push_back(q);
    return out;
}

CriterionOutcome hasse_davenport()
{
    auto c = outcome(1, "hasse-davenport");
    c.tol = 1e-9;
    u64 checks = 0;
    for (u64 q : primes_between(3, 500)) {
        PrimeField F(q);
        GaussTable G(F);
        for (i64 a = 1; a <= 8; ++a) {
            if ((q - 1) % u64(a))
                continue;
            for (i64 t = 0; t < i64(q - 1); ++t) {
                c.measured = std::max(c.measured, check_hasse_davenport(F, G, a, t));
                ++checks;
            }
        }
    }
    c.detail = fmt("%llu (q,a,chi) checks, q <= 499, a <= 8", (unsigned long long)checks);
    return c;
}

CriterionOutcome hyp_identification()
{
    auto c = outcome(2, "hypergeometric-identification");
    c.tol = 1e-8;
    std::ostringstream os;
    for (const auto& t : acceptance_triples()) {
        const auto qs = smallest_primes_for(t, 3);
        for (u64 q : qs) {
            PrimeField F(q);
            GaussTable G(F);
            c.measured =
                std::max(c.measured, prop_identity_max_residual(F, G, t.a, t.b, t.signed_c()));
        }
        os << t.str() << "@" << qs[0] << "," << qs[1] << "," << qs[2] << " ";
    }
    c.detail = os.str() + "all u";
    return c;
}

CriterionOutcome spectral_vs_naive(const SuiteOptions& o)
{
    auto c = outcome(3, "spectral-vs-naive");
    c.tol = 1e-9;
    u64 tables = 0;
    for (u64 q : primes_between(3, 98)) {
        PrimeField F(q);
        GaussTable G(F);
        for (i64 a = 1; a <= 6; ++a)
            for (i64 b = 1; b <= 6; ++b)
                for (i64 cc = 1; cc <= 6; ++cc) {
                    if (!setwise_coprime(a, b, cc))
                        continue;
                    for (i64 s : {1, -1}) {
                        const auto S = k_table_spectral(F, G, a, b, s * cc);
                        const auto N = k_table_naive(F, a, b, s * cc, pool(o));
                        for (u64 u = 1; u < q; ++u)
                            c.measured = std::max(c.measured, std::abs(S.at(u) - N.at(u)));
                        ++tables;
                    }
                }
    }
    const auto t0 = Clock::now();
    PrimeField F(9973);
    const auto big = k_table_spectral(F, 1, 2, -5);
    const double big_s = since(t0);
    c.detail = fmt("%llu tables q <= 97; spectral q=9973 in %.2f s (limit 2 s)",
                   (unsigned long long)tables, big_s);
    c.pass = big_s <= 2.0 && big.values.size() == 9973;
    return c;
}

CriterionOutcome closed_forms()
{
    auto c = outcome(4, "closed-forms");
    c.tol = 1e-9;
    double ind = 0, sol = 0;
    for (u64 q : primes_between(3, 200)) {
        PrimeField F(q);
        for (u64 u = 1; u < q; ++u) {
            for (i64 a = 1; a <= 3; ++a)
                for (i64 cc = 1; cc <= 3; ++cc)
                    ind = std::max(ind, induced_closed_form(F, a, cc, i64(u)).residual);
            for (i64 k = 2; k <= 5; ++k)
                sol = std::max(sol, solvable_closed_form(F, k, i64(u)).residual);
        }
    }
    c.measured = std::max(ind, sol);
    c.detail = fmt("induced a,c <= 3: %.2e; solvable k <= 5: %.2e; q <= 199, all u", ind, sol);
    return c;
}

CriterionOutcome lemma_lists()
{
    auto c = outcome(5, "n-lists");
    c.tol = 0;
    auto render = [](const std::vector<Triple>& v) {
        std::string s;
        for (const auto& t : v) {
            if (!s.empty())
                s += ",";
            s += "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                 std::to_string(t[2]) + ")";
        }
        return s;
    };
    EnumFilter none, even, even_gap, gap6;
    even.parity_even = true;
    even_gap = even;
    even_gap.nonzero_gap = true;
    gap6.rt_gap = 6;
    struct Want {
        i64 n;
        EnumFilter f;
        const char* list;
    };
    const Want wants[] = {
        {1, none, "(1,1,2)"},
        {2, even, "(1,2,1),(1,2,3)"},
        {4, even_gap, "(1,2,5),(1,4,1),(1,4,3),(1,6,3),(2,3,1),(3,4,3)"},
        {8, gap6, "(1,2,9),(1,8,3),(2,7,3),(4,5,3)"},
        {9, gap6, "(1,3,10),(1,9,4),(3,7,4),(5,5,4)"},
    };
    int bad = 0;
    std::string d;
    for (const auto& w : wants) {
        const auto e = enumerate_n_equals(w.n, w.f);
        const std::string got = render(e.sporadic);
        const bool ok = got == w.list && e.beyond_bounds.empty();
        bad += !ok;
        d += "n=" + std::to_string(w.n) + (ok ? " ok " : " MISMATCH[" + got + "] ");
    }
    c.measured = bad;
    c.detail = d;
    return c;
}

CriterionOutcome vanishing_threshold_check(const SuiteOptions& o)
{
    auto c = outcome(6, "vanishing-threshold");
    c.tol = 0;
    auto triples = acceptance_triples();
    triples.push_back(parse_triple("1,1,-1"));
    u64 strict_cells = 0, anchor_cells = 0, nonzero = 0, lattice_bad = 0, lattice_checked = 0;
    for (u64 q : primes_between(3, 500)) {
        PrimeField F(q);
        for (const auto& t : triples)
            for (u64 d = 1; d <= 4; ++d) {
                const double T = vanishing_threshold(q, t, d);
                // every box (L,2L]x(M,2M]x(N,2N] with LMN <= T
                for (u64 L = 1; double(L) <= T; ++L)
                    for (u64 M = 1; double(L * M) <= T; ++M)
                        for (u64 N = 1; double(L * M * N) <= T; ++N) {
                            BoxCountRequest r{q, t, d, L, M, N, o.budget};
                            ++anchor_cells;
                            strict_cells += below_threshold_strict(r);
                            nonzero += count_box(F, r, pool(o)) != 0;
                        }
            }
        for (u64 d = 1; d <= 6; ++d)
            for (u32 xi : mu_d(F, d)) {
                if (xi == 1 || xi == q - 1)
                    continue;
                ++lattice_checked;
                lattice_bad += double(lattice_min(F, xi)) < std::pow(double(q), 1.0 / double(d));
            }
    }
    c.measured = double(nonzero + lattice_bad);
    c.detail = fmt("%llu boxes with LMN <= threshold (%llu also meet 8LMN <= threshold), "
                   "%llu nonzero; %llu lattice minima, %llu below q^{1/d}",
                   (unsigned long long)anchor_cells, (unsigned long long)strict_cells,
                   (unsigned long long)nonzero, (unsigned long long)lattice_checked,
                   (unsigned long long)lattice_bad);
    return c;
}

CriterionOutcome moment_identities()
{
    auto c = outcome(7, "moment-identities");
    double real_max = 0, dmax = 0, m1max = 0, m2max = 0, afemax = 0, m1min = INFINITY;
    u64 instances = 0;
    for (u64 q : {u64(13), u64(31), u64(61)}) {
        PrimeField F(q);
        CentralValues L(F);
        for (const auto& t : acceptance_triples()) {
            for (u64 xi : {u64(1), u64(2), q - 1}) {
                const auto P = moment_parts(F, L, t, xi);
                real_max = std::max({real_max, std::abs(P.M.imag()), std::abs(P.Me.imag()),
                                     std::abs(P.Mo.imag())});
            }
            for (u64 d = 1; d <= 4; ++d)
                dmax = std::max(dmax, d_decomposition_check(F, L, t, d).residual);
            for (u64 xi : {u64(1), u64(2)}) {
                const auto r = afe_moment_check(F, t, xi, default_x(q));
                m1max = std::max(m1max, r.m1_residual);
                m2max = std::max(m2max, r.m2_residual);
                afemax = std::max({afemax, r.residual_e, r.residual_o});
                m1min = std::min({m1min, r.M1e[0], r.M1e[1], r.M1o[0], r.M1o[1]});
                ++instances;
            }
        }
    }
    c.pass = real_max <= 1e-9 && dmax <= 1e-9 && m1max <= 1e-8 && m2max <= 1e-8 &&
             afemax <= 1e-5 && m1min >= 0;
    c.measured = afemax;
    c.tol = 1e-5;
    c.detail = fmt("reality %.1e (1e-9), d-decomp %.1e (1e-9), M1 two-form %.1e (1e-8), "
                   "M2 two-form %.1e (1e-8), AFE rebuild %.1e (1e-5), min M1 %.3g (>= 0), "
                   "%llu AFE instances",
                   real_max, dmax, m1max, m2max, afemax, m1min, (unsigned long long)instances);
    return c;
}

CriterionOutcome per_character_afe()
{
    auto c = outcome(8, "per-character-afe");
    c.tol = 1e-6;
    i64 generic = 0;
    std::string worst;
    for (u64 q : primes_between(3, 102)) {
        PrimeField F(q);
        GaussTable G(F);
        const auto L = l_values(F, 0.5);
        for (const auto& t : acceptance_triples())
            for (double xp : {1.0, 1.5}) {
                const auto s = afe_sweep(F, G, L, t, std::pow(double(q), xp));
                generic += s.generic;
                if (s.max_residual > c.measured) {
                    c.measured = s.max_residual;
                    worst = fmt("q=%llu %s t=%lld X=q^%.1f", (unsigned long long)q,
                                t.str().c_str(), (long long)s.worst_t, xp);
                }
            }
    }
    c.detail = fmt("%lld generic characters; worst at %s", (long long)generic, worst.c_str());
    return c;
}

CriterionOutcome main_terms()
{
    auto c = outcome(9, "main-term-engine");
    c.tol = 1e-6;
    bool ok = true;
    std::ostringstream os;
    os.precision(8);
    for (const auto& t : acceptance_triples()) {
        const auto D = dseries_value(t);
        c.measured = std::max(c.measured, D.tail_bound);
        if (t.negative) {
            ok = ok && D.value > 1;
            os << "D(" << t.str() << ")=" << D.value << " ";
        } else {
            ok = ok && D.value == 1.0 && D.tail_bound == 0.0;
        }
    }
    c.pass = ok && c.measured <= c.tol;
    c.detail = os.str() + "sign + exactly 1";
    return c;
}

CriterionOutcome convergence(const SuiteOptions& o,
                             std::vector<std::pair<std::string, std::string>>* csv)
{
    auto c = outcome(10, "convergence-trend");
    c.tol = 0;
    const auto primes = primes_between(101, 2004);
    bool ok = true;
    std::string d;
    for (const char* ts : {"1,1,1", "1,1,-3"}) {
        const auto st = convergence_study(parse_triple(ts), 1, primes, pool(o));
        ok = ok && st.slope < 0 && st.avg_high < st.avg_low;
        c.measured = std::max(c.measured, st.slope);
        d += fmt("(%s) slope %.3f, mean err [100,200) %.4f -> [1000,2000) %.4f; ", ts, st.slope,
                 st.avg_low, st.avg_high);
        if (csv) {
            std::string name = std::string("convergence_") + ts + ".csv";
            std::replace(name.begin(), name.end(), ',', '_');
            csv->emplace_back(name, st.csv());
        }
    }
    c.detail = d + fmt("%zu primes", primes.size());
    c.pass = ok;
    if (!ok)
        c.detail += "; at q <= 2003 the off-diagonal and dual sums are still O(1), "
                    "so the error is not yet in its decaying regime";
    return c;
}

CriterionOutcome v_properties()
{
    auto c = outcome(11, "v-function");
    const auto grid = default_v_grid();
    bool positive = true;
    double near_one[4], at100 = 0, sigma_gap = 0;
    for (int nu = 0; nu < 4; ++nu) {
        positive = positive && fit_v_constants(nu, grid).positive;
        VEvaluator ev(GammaProfile::with_odd_count(nu));
        near_one[nu] = std::abs(ev(1e-8) - 1);
        at100 = std::max(at100, std::abs(ev(100.0)));
        for (double y : grid)
            if (y >= 1e-2 && y <= 1e3)
                sigma_gap = std::max(sigma_gap, std::abs(ev.contour(y, 1.5) - ev.contour(y, 3.0)));
    }
    const double worst_one = *std::max_element(near_one, near_one + 4);
    c.measured = worst_one;
    c.tol = 1e-3;
    c.pass = positive && worst_one <= 1e-3 && at100 <= 1e-6 && sigma_gap <= 1e-10;
    c.detail = fmt("positive %s; |V(1e-8)-1| by odd count 0..3: %.2e %.2e %.2e %.2e (1e-3); "
                   "max |V(100)| %.1e (1e-6); sigma 1.5 vs 3 on [1e-2,1e3] %.1e (1e-10)",
                   positive ? "yes" : "no", near_one[0], near_one[1], near_one[2], near_one[3],
                   at100, sigma_gap);
    if (near_one[0] > 1e-3)
        c.detail += "; the even profile has V(y)-1 ~ -0.4 y^{1/2} log^2 y, so 1e-3 is out of reach";
    return c;
}

CriterionOutcome conjp_scan(const SuiteOptions& o,
                            std::vector<std::pair<std::string, std::string>>* csv)
{
    auto c = outcome(12, "box-count-scan");
    c.tol = 8;
    const std::vector<TripleSpec> triples{parse_triple("2,2,-3"), parse_triple("1,1,3")};
    bool ok = true;
    u64 rows = 0, viol = 0;
    std::string all;
    for (u64 q : {u64(101), u64(211), u64(401)}) {
        PrimeField F(q);
        const auto rep = conjp_ratio_scan(F, triples, {1, 2}, 1.0 / 38.0, 8.0, pool(o), o.budget);
        ok = ok && rep.pass;
        c.measured = std::max(c.measured, rep.max_factor);
        rows += rep.rows.size();
        viol += rep.threshold_violations;
        std::string s = scan_csv(rep);
        if (!all.empty())
            s = s.substr(s.find('\n') + 1);
        all += s;
    }
    if (csv)
        csv->emplace_back("box_count_scan.csv", all);
    c.pass = ok && c.measured <= c.tol;
    c.detail = fmt("%llu dyadic cells, eta0 = 1/38, fitted factor max %.3f, %llu threshold "
                   "violations",
                   (unsigned long long)rows, c.measured, (unsigned long long)viol);
    return c;
}

CriterionOutcome trend_check()
{
    auto c = outcome(0, "trivial-character-trend");
    std::vector<double> xs;
    for (int k = 0; k <= 8; ++k)
        xs.push_back(std::pow(10.0, 3.0 + k / 4.0));
    const auto f = trivial_character_trend(101, xs);
    c.measured = f.r2;
    c.tol = 0.999;
    c.pass = f.r2 >= 0.999 && f.coef[0] > 0;
    c.detail = fmt("q=101, X in [1e3,1e5]: leading %.5f (expected %.5f), R^2 %.6f", f.coef[0],
                   f.leading_expected, f.r2);
    return c;
}

}  // namespace

bool SuiteOutcome::pass() const
{
    return std::all_of(items.begin(), items.end(), [](const auto& c) { return c.pass; });
}

const std::vector<TripleSpec>& acceptance_triples()
{
    static const std::vector<TripleSpec> v = [] {
        std::vector<TripleSpec> out;
        for (const char* s : {"1,1,1", "1,1,2", "1,1,-3", "1,2,-3", "1,4,-3", "2,3,-1", "1,2,-5"})
            out.push_back(parse_triple(s));
        return out;
    }();
    return v;
}

CriterionOutcome run_criterion(int id, const SuiteOptions& opt,
                               std::vector<std::pair<std::string, std::string>>* csv)
{
    const auto t0 = Clock::now();
    CriterionOutcome c;
    bool by_tol = true;  // pass decided by measured <= tol unless the case sets it
    switch (id) {
    case 1: c = hasse_davenport(); break;
    case 2: c = hyp_identification(); break;
    case 3:
        c = spectral_vs_naive(opt);
        c.pass = c.pass && c.measured <= c.tol;
        by_tol = false;
        break;
    case 4: c = closed_forms(); break;
    case 5: c = lemma_lists(); break;
    case 6: c = vanishing_threshold_check(opt); break;
    case 7: c = moment_identities(); by_tol = false; break;
    case 8: c = per_character_afe(); break;
    case 9: c = main_terms(); by_tol = false; break;
    case 10: c = convergence(opt, csv); by_tol = false; break;
    case 11: c = v_properties(); by_tol = false; break;
    case 12: c = conjp_scan(opt, csv); by_tol = false; break;
    default: fail(Errc::usage, "criteria are numbered 1..12");
    }
    if (by_tol)
        c.pass = c.measured <= c.tol;
    c.seconds = since(t0);
    // runtime limits that are part of the criterion
    const double limit = id == 1 ? 60 : id == 2 ? 120 : id == 5 ? 5 : id == 10 ? 600 : 0;
    if (limit > 0 && c.seconds > limit) {
        c.pass = false;
        c.detail += fmt("; runtime over the %.0f s limit", limit);
    }
    return c;
}

std::vector<std::string> suite_names() { return {"acceptance", "identities", "lists", "scan"}; }

SuiteOutcome run_suite(const std::string& name, const SuiteOptions& opt)
{
    std::vector<int> ids;
    if (name == "acceptance")
        ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    else if (name == "identities")
        ids = {1, 2, 3, 4, 7, 8, 9};
    else if (name == "lists")
        ids = {5};
    else if (name == "scan")
        ids = {6, 12};
    else
        fail(Errc::unknown_suite, "unknown suite '" + name + "'");
    SuiteOutcome s;
    s.name = name;
    for (int id : ids)
        s.items.push_back(run_criterion(id, opt, &s.csv));
    if (name == "identities") {
        const auto t0 = Clock::now();
        s.items.push_back(trend_check());
        s.items.back().seconds = since(t0);
    }
    return s;
}

std::string format_line(const CriterionOutcome& c)
{
    std::string id = c.id ? std::to_string(c.id) : "-";
    return fmt("%s %2s %-30s measured %.3g tol %.3g (%.1f s)  %s", c.pass ? "PASS" : "FAIL",
               id.c_str(), c.name.c_str(), c.measured, c.tol, c.seconds, c.detail.c_str());
}

}  // namespace tmq
