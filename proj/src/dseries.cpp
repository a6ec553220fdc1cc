#include "tmq/dseries.hpp"

#include <cmath>

#include "tmq/error.hpp"
#include "tmq/special_values.hpp"

namespace tmq {

u64 dseries_coeff(i64 a, i64 b, i64 c, i64 k)
{
    if (k < 0)
        return 0;
    u64 count = 0;
    for (i64 g = 0; g <= k; ++g) {
        const i64 r = k - g, rhs = g * c;  // alpha + beta = r, alpha a + beta b = rhs
        if (a == b) {
            if (a * r == rhs)
                count += u64(r + 1);
            continue;
        }
        const i64 num = rhs - b * r;
        if (num % (a - b) != 0)
            continue;
        const i64 alpha = num / (a - b);
        if (alpha >= 0 && alpha <= r)
            ++count;
    }
    return count;
}

std::vector<u64> dseries_coeffs(i64 a, i64 b, i64 c, i64 kmax)
{
    std::vector<u64> out(kmax + 1);
    for (i64 k = 0; k <= kmax; ++k)
        out[k] = dseries_coeff(a, b, c, k);
    return out;
}

std::vector<i64> zeta_exponents(const std::vector<u64>& coeffs, int K)
{
    using i128 = __int128;
    if (int(coeffs.size()) <= K || coeffs[0] != 1)
        fail(Errc::usage, "need c(0) = 1 and coefficients through K");
    // L_n = n [x^n] log F satisfies L_n = n c_n - sum_{j<n} L_j c_{n-j}
    std::vector<i128> L(K + 1, 0);
    const i128 cap = i128(1) << 120;
    for (int n = 1; n <= K; ++n) {
        i128 v = i128(n) * i128(coeffs[n]);
        for (int j = 1; j < n; ++j)
            v -= L[j] * i128(coeffs[n - j]);
        if (v > cap || v < -cap)
            fail(Errc::overflow, "log coefficients too large");
        L[n] = v;
    }
    auto mobius = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                n /= p;
                if (n % p == 0)
                    return 0;
                m = -m;
            }
        return n > 1 ? -m : m;
    };
    std::vector<i64> e(K + 1, 0);
    for (int k = 1; k <= K; ++k) {
        i128 s = 0;
        for (int d = 1; d <= k; ++d)
            if (k % d == 0)
                s += mobius(k / d) * L[d];
        if (s % k != 0)
            fail(Errc::overflow, "non-integral zeta exponent");
        const i128 ek = s / k;
        if (ek > i128(INT64_MAX) || ek < i128(INT64_MIN))
            fail(Errc::overflow, "zeta exponent out of range");
        e[k] = i64(ek);
    }
    return e;
}

namespace {

std::vector<u64> sieve(u64 P)
{
    std::vector<bool> comp(P + 1, false);
    std::vector<u64> out;
    for (u64 i = 2; i <= P; ++i) {
        if (comp[i])
            continue;
        out.push_back(i);
        for (u64 j = i * i; j <= P; j += i)
            comp[j] = true;
    }
    return out;
}

// sum_{k > K} (k+1)^2 x^k, bounded by a geometric tail once the ratio is < 1
double poly_tail(int K, double x)
{
    const double k1 = K + 1;
    const double first = (k1 + 1) * (k1 + 1) * std::pow(x, k1);
    const double ratio = ((k1 + 2) / (k1 + 1)) * ((k1 + 2) / (k1 + 1)) * x;
    if (ratio >= 1)
        return INFINITY;
    return first / (1 - ratio);
}

}  // namespace

DirichletMainTerm dseries_value(const TripleSpec& t, double s, double tol)
{
    DirichletMainTerm D;
    D.triple = t;
    D.s = s;
    if (!t.negative) {
        D.value = 1.0;
        return D;
    }
    if (t.c == t.a || t.c == t.b)
        fail(Errc::induced_triple, "D_{a,b,-c} has a pole at 1/2 when c is a or b");
    if (!(s > 1.0 / 3.0))
        fail(Errc::usage, "D_{a,b,-c}(s) converges for s > 1/3");
    if (!(tol > 0))
        fail(Errc::usage, "tolerance must be positive");

    const int kmax = 800;
    D.coeffs = dseries_coeffs(t.a, t.b, t.c, kmax);
    const double r = 0.1;  // Cauchy radius for the corrected local factor

    // pick K0 and P so that the bound for primes above P is below tol/4
    double global = INFINITY;
    std::vector<i64> e;
    for (int K0 : {24, 32, 40}) {
        e = zeta_exponents(D.coeffs, K0);
        // max |H| on |z| = r, H = F * prod (1 - z^k)^{e_k}
        double M = 0;
        for (int k = 0; k <= kmax; ++k)
            M += double(D.coeffs[k]) * std::pow(r, k);
        M += poly_tail(kmax, r);
        for (int k = 1; k <= K0; ++k) {
            const double rk = std::pow(r, k);
            M *= e[k] >= 0 ? std::pow(1 + rk, double(e[k])) : std::pow(1 - rk, double(e[k]));
        }
        M += 1.0;  // |H - 1| <= |H| + 1 also bounds the coefficients of H - 1
        for (u64 P : {10000ULL, 100000ULL, 1000000ULL}) {
            if (std::pow(double(P), -s) / r >= 0.5)
                continue;
            double sum = 0;
            for (int j = K0 + 1; j < K0 + 400; ++j) {
                const double sj = s * j;
                if (sj <= 1)
                    continue;
                const double term =
                    M * std::exp(-j * std::log(r) + (1 - sj) * std::log(double(P))) / (sj - 1);
                sum += term;
                if (term < 1e-30 * (sum + 1e-300))
                    break;
            }
            const double hmax = M * std::pow(std::pow(double(P), -s) / r, K0 + 1) * 2;
            if (hmax < 0.5 && sum < tol / 4) {
                global = sum / (1 - hmax);
                D.K0 = K0;
                D.P = P;
                break;
            }
        }
        if (D.K0)
            break;
    }
    if (!D.K0)
        fail(Errc::budget_exceeded, "could not reach the requested tolerance");
    D.exponents.assign(e.begin() + 1, e.begin() + D.K0 + 1);

    double logv = 0;
    for (int k = 1; k <= D.K0; ++k)
        if (e[k] != 0)
            logv += double(e[k]) * std::log(riemann_zeta(k * s).real());
    double local_tail = 0;
    for (u64 p : sieve(D.P)) {
        const double x = std::pow(double(p), -s);
        double f = 0, xk = 1;
        int k = 0;
        for (; k <= kmax; ++k, xk *= x) {
            f += double(D.coeffs[k]) * xk;
            if (k > D.K0 && xk * double(k + 1) * double(k + 1) < 1e-22)
                break;
        }
        local_tail += poly_tail(std::min(k, kmax), x);
        double corr = 0;
        xk = 1;
        for (int j = 1; j <= D.K0; ++j) {
            xk *= x;
            if (e[j] != 0)
                corr += double(e[j]) * std::log1p(-xk);
        }
        logv += std::log(f) + corr;
    }
    D.value = std::exp(logv);
    D.tail_bound = D.value * (std::expm1(global + local_tail));
    return D;
}

}  // namespace tmq
