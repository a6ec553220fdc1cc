#include "tmq/moments.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "tmq/boxcount.hpp"
#include "tmq/error.hpp"
#include "tmq/trace_sums.hpp"

namespace tmq {

namespace {

const double kPi = 3.14159265358979323846;

cplx chi(const PrimeField& F, i64 t, u64 x)
{
    return F.eo(u64(floor_mod(t * i64(F.ind(x)), i64(F.order()))));
}

const VTable& table_for(const TripleSpec& t, bool odd)
{
    return v_table(GammaProfile::of(t, odd).odd_count());
}

}  // namespace

cplx CentralValues::triple(const TripleSpec& t, i64 ch) const
{
    const i64 n = i64(L.size());
    return L[floor_mod(t.a * ch, n)] * L[floor_mod(t.b * ch, n)] *
           L[floor_mod(t.signed_c() * ch, n)];
}

MomentParts moment_parts(const PrimeField& F, const CentralValues& L, const TripleSpec& t,
                         u64 xi)
{
    if (xi % F.q() == 0)
        fail(Errc::x_divisible_by_q, "xi must be invertible mod q");
    const i64 n = F.order();
    cplx all = 0, even = 0, odd = 0;
    for (i64 ch = 0; ch < n; ++ch) {
        const cplx v = std::conj(chi(F, ch, xi)) * L.triple(t, ch);
        all += v;
        (ch % 2 == 0 ? even : odd) += v;
    }
    return {all / double(n), 2.0 * even / double(n), 2.0 * odd / double(n)};
}

cplx moment_direct(const PrimeField& F, const CentralValues& L, const TripleSpec& t, u64 xi)
{
    return moment_parts(F, L, t, xi).M;
}

MomentParts moment_parts(const PrimeField& F, const TripleSpec& t, u64 xi)
{
    CentralValues L(F);
    return moment_parts(F, L, t, xi);
}

DCheck d_decomposition_check(const PrimeField& F, const CentralValues& L, const TripleSpec& t,
                             u64 d)
{
    if (d == 0)
        fail(Errc::usage, "d must be >= 1");
    if (!setwise_coprime(t.a, t.b, t.c))
        fail(Errc::not_setwise_coprime, t.str() + " is not setwise coprime");
    const i64 di = i64(d);
    TripleSpec td{t.a * di, t.b * di, t.c * di, t.negative};
    DCheck r;
    r.dprime = std::gcd(d, u64(F.order()));
    r.lhs = moment_direct(F, L, td, 1);
    r.rhs = 0;
    for (u32 xi : mu_d(F, d))
        r.rhs += moment_direct(F, L, t, xi);
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

double default_x(u64 q, double delta) { return std::pow(double(q), 2.0 - delta); }

M1Result m1_sum(const PrimeField& F, const TripleSpec& t, u64 xi, double X, bool parity_odd)
{
    if (!(X > 0))
        fail(Errc::usage, "X must be positive");
    const u64 q = F.q();
    xi %= q;
    if (xi == 0)
        fail(Errc::x_divisible_by_q, "xi must be invertible mod q");
    const VTable& V = table_for(t, parity_odd);
    const u64 K = u64(V.cutoff() * X);
    std::vector<double> w(K + 1);
    std::vector<u64> pa(K + 1), pb(K + 1), pc(K + 1);
    for (u64 k = 1; k <= K; ++k) {
        w[k] = V(double(k) / X) / std::sqrt(double(k));
        pa[k] = powmod(k % q, t.a, q);
        pb[k] = powmod(k % q, t.b, q);
        pc[k] = powmod(k % q, t.c, q);
    }
    M1Result r;
    for (u64 l = 1; l <= K; ++l) {
        if (l % q == 0)
            continue;
        for (u64 m = 1; l * m <= K; ++m) {
            if (m % q == 0)
                continue;
            const u64 lm = pa[l] * pb[m] % q;
            for (u64 n = 1; l * m * n <= K; ++n) {
                if (n % q == 0)
                    continue;
                ++r.terms;
                const bool hit = t.negative ? lm == xi * pc[n] % q : lm * pc[n] % q == xi;
                if (!hit)
                    continue;
                const double v = w[l * m * n];
                r.congruence += v;
                const bool exact = t.negative ? exact_power_equal(l, t.a, m, t.b, n, t.c)
                                              : (l == 1 && m == 1 && n == 1);
                if (exact)
                    r.main += v;
                else
                    r.error += v;
            }
        }
    }

    // character form, one Dirichlet convolution per character
    const i64 nch = F.order();
    const i64 e[3] = {t.a, t.b, t.signed_c()};
    std::vector<cplx> fa(K + 1), fb(K + 1), fc(K + 1), g(K + 1);
    cplx acc = 0;
    for (i64 ch = 0; ch < nch; ++ch) {
        for (u64 k = 1; k <= K; ++k) {
            if (k % q == 0) {
                fa[k] = fb[k] = fc[k] = 0;
                continue;
            }
            const i64 ik = F.ind(k);
            fa[k] = F.eo(u64(floor_mod(e[0] * ch * ik, nch)));
            fb[k] = F.eo(u64(floor_mod(e[1] * ch * ik, nch)));
            fc[k] = F.eo(u64(floor_mod(e[2] * ch * ik, nch)));
        }
        std::fill(g.begin(), g.end(), cplx(0));
        for (u64 l = 1; l <= K; ++l)
            if (fa[l] != cplx(0))
                for (u64 m = 1; l * m <= K; ++m)
                    g[l * m] += fa[l] * fb[m];
        cplx A = 0;
        for (u64 k = 1; k <= K; ++k)
            if (g[k] != cplx(0))
                for (u64 n = 1; k * n <= K; ++n)
                    A += g[k] * fc[n] * w[k * n];
        acc += std::conj(chi(F, ch, xi)) * A;
    }
    r.character = acc / double(nch);
    r.residual = std::abs(r.character - r.congruence);
    return r;
}

M2Result m2_sum(const PrimeField& F, const GaussTable& G, const TripleSpec& t, u64 xi, double Y,
                bool parity_odd)
{
    const u64 q = F.q();
    xi %= q;
    if (xi == 0)
        fail(Errc::x_divisible_by_q, "xi must be invertible mod q");
    const double X = std::pow(double(q), 3) / Y;
    const AfeSums S = afe_sums(F, t, X);
    const int p = parity_odd ? 1 : 0;
    const cplx io = iota(GammaProfile::of(t, parity_odd));
    const i64 n = F.order();

    M2Result r;
    cplx acc = 0;
    for (i64 ch = 0; ch < n; ++ch) {
        const cplx eps = G.epsilon(t.a * ch) * G.epsilon(t.b * ch) * G.epsilon(t.signed_c() * ch);
        acc += eps * std::conj(chi(F, ch, xi)) * S.B[p][ch];
    }
    r.character = io * acc / double(n);

    const TraceTable Kt = k_table_spectral(F, G, t.a, t.b, t.signed_c());
    const VTable& V = table_for(t, parity_odd);
    const u64 K = u64(V.cutoff() * Y);
    std::vector<double> w(K + 1);
    std::vector<u64> pa(K + 1), pb(K + 1), pc(K + 1);
    for (u64 k = 1; k <= K; ++k) {
        w[k] = V(double(k) / Y) / std::sqrt(double(k));
        if (k % q) {
            pa[k] = powmod(k % q, t.a, q);
            pb[k] = powmod(k % q, t.b, q);
            const u64 c = powmod(k % q, t.c, q);
            pc[k] = t.negative ? F.inv(c) : c;
        }
    }
    cplx sum = 0;
    for (u64 l = 1; l <= K; ++l) {
        if (l % q == 0)
            continue;
        for (u64 m = 1; l * m <= K; ++m) {
            if (m % q == 0)
                continue;
            const u64 u0 = xi * pa[l] % q * pb[m] % q;
            for (u64 nn = 1; l * m * nn <= K; ++nn) {
                if (nn % q == 0)
                    continue;
                sum += w[l * m * nn] * Kt.at(i64(u0 * pc[nn] % q));
            }
        }
    }
    r.kform = io * sum / std::sqrt(double(q));
    r.residual = std::abs(r.kform - r.character);
    r.trivial_scale = std::sqrt(Y / double(q));
    return r;
}

AfeMomentCheck afe_moment_check(const PrimeField& F, const TripleSpec& t, u64 xi, double X)
{
    check_x_range(F.q(), X);
    const u64 q = F.q();
    xi %= q;
    if (xi == 0)
        fail(Errc::x_divisible_by_q, "xi must be invertible mod q");
    AfeMomentCheck r;
    r.X = X;
    r.Y = std::pow(double(q), 3) / X;
    CentralValues L(F);
    GaussTable G(F);
    r.direct = moment_parts(F, L, t, xi);

    const u64 xs[2] = {xi, q - xi};
    for (int s = 0; s < 2; ++s) {
        for (int odd = 0; odd < 2; ++odd) {
            const M1Result m1 = m1_sum(F, t, xs[s], X, odd);
            const M2Result m2 = m2_sum(F, G, t, xs[s], r.Y, odd);
            (odd ? r.M1o : r.M1e)[s] = m1.congruence;
            (odd ? r.M2o : r.M2e)[s] = m2.kform;
            r.m1_residual = std::max(r.m1_residual, m1.residual);
            r.m2_residual = std::max(r.m2_residual, m2.residual);
        }
    }

    const AfeSums S = afe_sums(F, t, X);
    const i64 n = F.order();
    r.corr_e = r.corr_o = 0;
    for (i64 ch = 0; ch < n; ++ch) {
        if (is_generic(F, ch, t))
            continue;
        ++r.nongeneric;
        const cplx c = std::conj(chi(F, ch, xi));
        const cplx diff = c * L.triple(t, ch) - c * afe_rhs(S, G, ch);
        (ch % 2 ? r.corr_o : r.corr_e) += 2.0 * diff / double(n);
    }
    r.rebuilt_e = r.M1e[0] + r.M1e[1] + r.M2e[0] + r.M2e[1] + r.corr_e;
    r.rebuilt_o = r.M1o[0] - r.M1o[1] + r.M2o[0] - r.M2o[1] + r.corr_o;
    r.residual_e = std::abs(r.rebuilt_e - r.direct.Me);
    r.residual_o = std::abs(r.rebuilt_o - r.direct.Mo);
    return r;
}

std::string ConvergenceStudy::csv() const
{
    std::ostringstream os;
    os.precision(12);
    os << "q,a,b,c,d,M,D,abs_err\n";
    for (const auto& r : rows)
        os << r.q << ',' << triple.a << ',' << triple.b << ',' << triple.signed_c() << ',' << d
           << ',' << r.M << ',' << D << ',' << r.err << '\n';
    return os.str();
}

ConvergenceStudy convergence_study(const TripleSpec& t, u64 d, const std::vector<u64>& primes,
                                   const Workers& w, u64 max_prime)
{
    if (d == 0)
        fail(Errc::usage, "d must be >= 1");
    for (u64 p : primes)
        if (p > max_prime)
            fail(Errc::budget_exceeded,
                 "prime " + std::to_string(p) + " above the budget " + std::to_string(max_prime));
    ConvergenceStudy st;
    st.triple = t;
    st.d = d;
    st.D = dseries_value(t).value;
    const i64 di = i64(d);
    const TripleSpec td{t.a * di, t.b * di, t.c * di, t.negative};
    st.rows = w.map<ConvergenceRow>(primes.size(), [&](std::size_t i) {
        PrimeField F(primes[i]);
        CentralValues L(F);
        const double M = moment_direct(F, L, td, 1).real();
        return ConvergenceRow{primes[i], M, std::abs(M - st.D)};
    });
    // least squares slope of log err on log q
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0, nl = 0, nh = 0;
    for (const auto& r : st.rows) {
        if (r.err > 0) {
            const double x = std::log(double(r.q)), y = std::log(r.err);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (r.q >= 100 && r.q < 200) {
            st.avg_low += r.err;
            ++nl;
        }
        if (r.q >= 1000 && r.q < 2000) {
            st.avg_high += r.err;
            ++nh;
        }
    }
    if (cnt >= 2)
        st.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    st.avg_low = nl ? st.avg_low / nl : NAN;
    st.avg_high = nh ? st.avg_high / nh : NAN;
    return st;
}

NonvanishingReport nonvanishing_count(const PrimeField& F, const TripleSpec& t)
{
    CentralValues L(F);
    const i64 n = F.order();
    const i64 e[3] = {t.a, t.b, t.signed_c()};
    NonvanishingReport r;
    r.q = F.q();
    double s4[3] = {0, 0, 0};
    cplx total = 0;
    for (i64 ch = 0; ch < n; ++ch) {
        bool nz = true, border = false;
        for (int i = 0; i < 3; ++i) {
            const double a = std::abs(L.L[floor_mod(e[i] * ch, n)]);
            s4[i] += a * a * a * a;
            nz = nz && a > 1e-8;
            border = border || (a > 1e-8 && a <= 1e-6);
        }
        r.count += nz;
        r.borderline += border;
        total += L.triple(t, ch);
    }
    const double lq4 = std::pow(std::log(double(r.q)), 4);
    for (int i = 0; i < 3; ++i) {
        r.fourth[i] = s4[i] / double(n);
        r.C4 = std::max(r.C4, r.fourth[i] / lq4);
    }
    r.holder_bound = std::pow(std::abs(total), 4) / (s4[0] * s4[1] * s4[2]);
    return r;
}

TrendFit trivial_character_trend(u64 q, const std::vector<double>& xs)
{
    if (xs.size() < 3)
        fail(Errc::usage, "need at least three X values");
    const VTable& V = v_table(0);
    TrendFit f;
    f.X = xs;
    const u64 K = u64(V.cutoff() * *std::max_element(xs.begin(), xs.end()));
    std::vector<u32> d2(K + 1, 0), d3(K + 1, 0);
    for (u64 i = 1; i <= K; ++i)
        for (u64 j = i; j <= K; j += i)
            ++d2[j];
    for (u64 i = 1; i <= K; ++i)
        for (u64 j = i; j <= K; j += i)
            d3[j] += d2[j / i];
    const double zq = riemann_zeta(0.5).real() * (1.0 - 1.0 / std::sqrt(double(q)));
    f.constant = zq * zq * zq;
    Eigen::MatrixXd A(xs.size(), 3);
    Eigen::VectorXd b(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double X = xs[i];
        const u64 Kx = u64(V.cutoff() * X);
        double s = 0;
        for (u64 k = 1; k <= Kx; ++k)
            if (k % q)
                s += d3[k] / std::sqrt(double(k)) * V(double(k) / X);
        f.S.push_back(s);
        const double T = std::log(X);
        A(i, 0) = T * T;
        A(i, 1) = T;
        A(i, 2) = 1;
        b(i) = (s - f.constant) / std::sqrt(X);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    for (int i = 0; i < 3; ++i)
        f.coef[i] = c(i);
    const Eigen::VectorXd res = A * c - b;
    const double mean = b.mean();
    const double tot = (b.array() - mean).square().sum();
    f.r2 = tot > 0 ? 1.0 - res.squaredNorm() / tot : 1.0;
    const double g_half = std::exp(log_gamma_profile(GammaProfile{}, 0.5).real());
    const double g_one = std::exp(log_gamma_profile(GammaProfile{}, 1.0).real());
    f.leading_expected = std::pow(1.0 - 1.0 / double(q), 3) * g_one / g_half;
    return f;
}

}  // namespace tmq
