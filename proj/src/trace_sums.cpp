#include "tmq/trace_sums.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "tmq/error.hpp"

namespace tmq {

const char* method_name(TraceMethod m)
{
    return m == TraceMethod::naive ? "naive" : "spectral";
}

double TraceTable::sup_norm() const
{
    double m = 0.0;
    for (u32 u = 1; u < q; ++u)
        m = std::max(m, std::abs(values[u]));
    return m;
}

namespace {

u32 checked_unit(const PrimeField& F, i64 u)
{
    u32 r = F.reduce(u);
    if (r == 0)
        fail(Errc::u_not_invertible, "u must be a unit mod " + std::to_string(F.q()));
    return r;
}

// phi[r] = sum of e_q(z) over z with c * ind(z) = r mod (q-1)
std::vector<cplx> fiber_sums(const PrimeField& F, i64 c)
{
    const u32 n = F.order();
    const u64 ce = F.exponent(c);
    std::vector<cplx> phi(n, cplx(0.0));
    for (u32 z = 1; z < F.q(); ++z)
        phi[ce * F.ind(z) % n] += F.eq(z);
    return phi;
}

}  // namespace

cplx k_sum_naive(const PrimeField& F, i64 a, i64 b, i64 c, i64 u)
{
    const u32 uu = checked_unit(F, u);
    const u32 n = F.order();
    const u32 q = F.q();
    const u64 ae = F.exponent(a), be = F.exponent(b);
    const auto phi = fiber_sums(F, c);
    const u64 iu = F.ind(uu);
    cplx s = 0.0;
    for (u32 x = 1; x < q; ++x) {
        const u64 sx = (iu + n - ae * F.ind(x) % n) % n;
        for (u32 y = 1; y < q; ++y) {
            const u64 r = (sx + n - be * F.ind(y) % n) % n;
            s += F.eq(x + y) * phi[r];
        }
    }
    return s / static_cast<double>(q);
}

TraceTable k_table_naive(const PrimeField& F, i64 a, i64 b, i64 c, const Workers& pool)
{
    const u32 q = F.q();
    const u32 n = F.order();
    const u64 ae = F.exponent(a), be = F.exponent(b), ce = F.exponent(c);

    std::vector<u32> cz(q);
    for (u32 z = 1; z < q; ++z)
        cz[z] = static_cast<u32>(ce * F.ind(z) % n);
    std::vector<cplx> e3(3 * q);
    for (u32 k = 0; k < 3 * q; ++k)
        e3[k] = F.eq(k);

    // fixed block split so the summation order never depends on the pool
    const std::size_t blocks = std::min<std::size_t>(16, q - 1);
    auto partial = pool.map<std::vector<cplx>>(blocks, [&](std::size_t blk) {
        std::vector<cplx> acc(n, cplx(0.0));
        const u32 lo = 1 + static_cast<u32>(blk * (q - 1) / blocks);
        const u32 hi = 1 + static_cast<u32>((blk + 1) * (q - 1) / blocks);
        for (u32 x = lo; x < hi; ++x) {
            const u32 sx = static_cast<u32>(ae * F.ind(x) % n);
            for (u32 y = 1; y < q; ++y) {
                u32 s = static_cast<u32>((sx + be * F.ind(y)) % n);
                const cplx* ep = &e3[x + y];
                for (u32 z = 1; z < q; ++z) {
                    u32 k = s + cz[z];
                    if (k >= n)
                        k -= n;
                    acc[k] += ep[z];
                }
            }
        }
        return acc;
    });

    TraceTable T;
    T.q = q;
    T.a = a;
    T.b = b;
    T.c = c;
    T.method = TraceMethod::naive;
    T.values.assign(q, cplx(0.0));
    for (u32 k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (const auto& p : partial)
            s += p[k];
        T.values[F.gpow(k)] = s / static_cast<double>(q);
    }
    return T;
}

TraceTable k_table_spectral(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c)
{
    const u32 q = F.q();
    const i64 n = F.order();
    std::vector<cplx> spec(n);
    for (i64 t = 0; t < n; ++t)
        spec[t] = G.gauss(-a * t) * G.gauss(-b * t) * G.gauss(-c * t);
    DftPlan(n).apply(spec, +1);

    TraceTable T;
    T.q = q;
    T.a = a;
    T.b = b;
    T.c = c;
    T.method = TraceMethod::spectral;
    T.values.assign(q, cplx(0.0));
    const double scale = 1.0 / (static_cast<double>(q) * static_cast<double>(n));
    for (i64 k = 0; k < n; ++k)
        T.values[F.gpow(k)] = spec[k] * scale;
    return T;
}

TraceTable k_table_spectral(const PrimeField& F, i64 a, i64 b, i64 c)
{
    GaussTable G(F);
    return k_table_spectral(F, G, a, b, c);
}

CharMultiset::CharMultiset(i64 n, std::vector<i64> items) : n_(n), items_(std::move(items))
{
    for (auto& t : items_)
        t = floor_mod(t, n_);
    std::sort(items_.begin(), items_.end());
}

CharMultiset CharMultiset::roots(i64 n, i64 a)
{
    if (a <= 0 || n % a != 0)
        fail(Errc::divisibility_violated, std::to_string(a) + " does not divide " + std::to_string(n));
    std::vector<i64> v;
    for (i64 j = 0; j < a; ++j)
        v.push_back(j * (n / a));
    return CharMultiset(n, v);
}

int CharMultiset::multiplicity(i64 t) const
{
    t = floor_mod(t, n_);
    auto r = std::equal_range(items_.begin(), items_.end(), t);
    return static_cast<int>(r.second - r.first);
}

CharMultiset CharMultiset::operator+(const CharMultiset& o) const
{
    std::vector<i64> v = items_;
    v.insert(v.end(), o.items_.begin(), o.items_.end());
    return CharMultiset(empty() ? o.n_ : n_, v);
}

CharMultiset CharMultiset::meet(const CharMultiset& o) const
{
    std::vector<i64> v;
    std::set_intersection(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                          std::back_inserter(v));
    return CharMultiset(n_, v);
}

CharMultiset CharMultiset::translate(i64 eta) const
{
    std::vector<i64> v = items_;
    for (auto& t : v)
        t += eta;
    return CharMultiset(n_, v);
}

CharMultiset CharMultiset::without(i64 t) const
{
    std::vector<i64> v = items_;
    auto it = std::find(v.begin(), v.end(), floor_mod(t, n_));
    if (it != v.end())
        v.erase(it);
    return CharMultiset(n_, v);
}

std::string CharMultiset::str() const
{
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < items_.size(); ++i)
        os << (i ? "," : "") << items_[i];
    os << "}";
    return os.str();
}

std::vector<cplx> hyp_table(const PrimeField& F, const GaussTable& G, const CharMultiset& rho,
                            const CharMultiset& theta)
{
    const i64 n = F.order();
    const double sign = ((rho.size() + theta.size()) % 2 == 0) ? 1.0 : -1.0;
    std::vector<cplx> spec(n);
    for (i64 s = 0; s < n; ++s) {
        cplx h = sign;
        for (i64 r : rho.items())
            h *= G.gauss(s + r);
        for (i64 th : theta.items()) {
            i64 m = -s - th;
            h *= G.gauss(m) * (floor_mod(m, 2) == 0 ? 1.0 : -1.0);
        }
        spec[s] = h;
    }
    DftPlan(n).apply(spec, -1);
    std::vector<cplx> out(F.q(), cplx(0.0));
    for (i64 k = 0; k < n; ++k)
        out[F.gpow(k)] = spec[k] / static_cast<double>(n);
    return out;
}

cplx hyp_sum(const PrimeField& F, const GaussTable& G, const CharMultiset& rho,
             const CharMultiset& theta, i64 u)
{
    u32 uu = checked_unit(F, u);
    return hyp_table(F, G, rho, theta)[uu];
}

cplx hyp_sum_direct(const PrimeField& F, const CharMultiset& rho, const CharMultiset& theta, i64 u)
{
    const u32 uu = checked_unit(F, u);
    const u32 q = F.q();
    const u64 n = F.order();
    // variables in index form: x_i = g^{i_i}, y_j = g^{j_j}; the constraint is
    // sum i - sum j = ind(u). Each factor is a table over the exponent.
    std::vector<std::vector<cplx>> factor;
    std::vector<int> sgn;
    for (i64 r : rho.items()) {
        std::vector<cplx> f(n);
        for (u64 k = 0; k < n; ++k)
            f[k] = F.eo(static_cast<u64>(r) * k % n) * F.eq(F.gpow(k));
        factor.push_back(f);
        sgn.push_back(+1);
    }
    for (i64 th : theta.items()) {
        std::vector<cplx> f(n);
        for (u64 k = 0; k < n; ++k)
            f[k] = F.eo((n - static_cast<u64>(th) * k % n) % n) * F.eq(q - F.gpow(k));
        factor.push_back(f);
        sgn.push_back(-1);
    }
    const std::size_t m = factor.size();
    if (m == 0)
        return uu == 1 ? cplx(1.0) : cplx(0.0);
    const u64 target = F.ind(uu);
    // the last variable is solved from the constraint
    std::function<cplx(std::size_t, u64, cplx)> rec = [&](std::size_t i, u64 acc, cplx w) -> cplx {
        if (i + 1 == m) {
            // sgn * k + acc = target
            u64 k = sgn[i] > 0 ? (target + n - acc) % n : (acc + n - target) % n;
            return w * factor[i][k];
        }
        cplx s = 0.0;
        for (u64 k = 0; k < n; ++k) {
            u64 nacc = sgn[i] > 0 ? (acc + k) % n : (acc + n - k) % n;
            s += rec(i + 1, nacc, w * factor[i][k]);
        }
        return s;
    };
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sign * rec(0, 0, cplx(1.0));
}

namespace {

// eps_a(psi) = q^{-1/2} prod_{rho^a = 1} eps(psi, rho)^{-1}
cplx eps_a(const PrimeField& F, const GaussTable& G, i64 a)
{
    const i64 n = F.order();
    cplx prod = 1.0;
    for (i64 j = 0; j < a; ++j)
        prod *= G.epsilon(j * (n / a));
    return 1.0 / (std::sqrt(static_cast<double>(F.q())) * prod);
}

}  // namespace

double check_hasse_davenport(const PrimeField& F, const GaussTable& G, i64 a, CharIndex t)
{
    const i64 n = F.order();
    if (a <= 0 || n % a != 0)
        fail(Errc::a_does_not_divide, std::to_string(a) + " does not divide q-1=" + std::to_string(n));
    // left side straight from the definition of eps(psi_a, chi^a)
    const u64 ta = static_cast<u64>(floor_mod(t * a, n));
    cplx lhs = 0.0;
    for (u32 x = 1; x < F.q(); ++x)
        lhs += F.eo(ta * F.ind(x) % n) * F.eq(static_cast<u64>(a) * x);
    lhs /= -std::sqrt(static_cast<double>(F.q()));

    cplx rhs = eps_a(F, G, a);
    for (i64 j = 0; j < a; ++j)
        rhs *= G.epsilon(t + j * (n / a));
    return std::abs(lhs - rhs);
}

namespace {

void require_divides(const PrimeField& F, i64 a, i64 b, i64 c)
{
    const i64 n = F.order();
    for (i64 e : {a, b, std::abs(c)})
        if (e <= 0 || n % e != 0)
            fail(Errc::divisibility_violated,
                 "exponent " + std::to_string(e) + " does not divide q-1=" + std::to_string(n));
}

struct PropSetup {
    u32 f;
    cplx factor;  // (-1)^v eps_abc / q
    double scale; // q^{(3-v)/2}
    CharMultiset rho, theta;
};

PropSetup prop_setup(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c)
{
    require_divides(F, a, b, c);
    const i64 n = F.order();
    const i64 ac = std::abs(c);
    PropSetup s;
    u32 f = F.mul(F.power(a, a), F.power(b, b));
    if (c > 0)
        s.f = F.mul(f, F.power(c, c));
    else
        s.f = F.mul(f, F.inv(F.power(F.reduce(-ac), ac)));
    cplx eps_abc = -eps_a(F, G, a) * eps_a(F, G, b) * eps_a(F, G, ac);
    const i64 v = a + b + ac;
    s.factor = (v % 2 == 0 ? 1.0 : -1.0) * eps_abc / static_cast<double>(F.q());
    s.scale = std::pow(static_cast<double>(F.q()), (3.0 - static_cast<double>(v)) / 2.0);
    CharMultiset ra = CharMultiset::roots(n, a), rb = CharMultiset::roots(n, b),
                 rc = CharMultiset::roots(n, ac);
    if (c > 0) {
        s.rho = ra + rb + rc;
        s.theta = CharMultiset(n, {});
    } else {
        s.rho = ra + rb;
        s.theta = rc;
    }
    return s;
}

}  // namespace

PropCheck check_prop_identity(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c, i64 u)
{
    u32 uu = checked_unit(F, u);
    auto s = prop_setup(F, G, a, b, c);
    PropCheck r;
    r.f = s.f;
    r.lhs = k_sum_naive(F, a, b, c, F.mul(s.f, uu));
    cplx h = hyp_table(F, G, s.rho, s.theta)[uu];
    r.scale = s.scale;
    r.rhs = s.factor * s.scale * h;
    r.residual = std::abs(r.lhs - r.rhs);
    r.literal_residual = std::abs(r.lhs - s.factor * h);
    return r;
}

double prop_identity_max_residual(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c)
{
    auto s = prop_setup(F, G, a, b, c);
    auto K = k_table_naive(F, a, b, c);
    auto H = hyp_table(F, G, s.rho, s.theta);
    double worst = 0.0;
    for (u32 u = 1; u < F.q(); ++u)
        worst = std::max(worst, std::abs(K.at(F.mul(s.f, u)) - s.factor * s.scale * H[u]));
    return worst;
}

InducedForm induced_closed_form(const PrimeField& F, i64 a, i64 c, i64 u)
{
    const u32 uu = checked_unit(F, u);
    const u32 q = F.q();
    // phi[w] = sum_{x^a = w} psi(x)
    std::vector<cplx> phi(q, cplx(0.0));
    for (u32 x = 1; x < q; ++x)
        phi[F.power(x, a)] += F.eq(x);
    cplx s = 0.0;
    for (u32 lam = 1; lam < q; ++lam) {
        double w = (lam == q - 1) ? static_cast<double>(q) - 1.0 : -1.0;
        s += phi[F.mul(uu, F.power(lam, c))] * w;
    }
    InducedForm r;
    r.value = s / static_cast<double>(q);
    r.leading = phi[F.mul(uu, F.power(q - 1, c))];
    r.naive = k_sum_naive(F, a, c, -c, uu);
    r.residual = std::abs(r.value - r.naive);
    return r;
}

SolvableForm solvable_closed_form(const PrimeField& F, i64 k, i64 u)
{
    const u32 uu = checked_unit(F, u);
    const u32 q = F.q();
    if (k < 2)
        fail(Errc::usage, "solvable closed form needs k >= 2");
    SolvableForm r;
    for (u32 x = 0; x < q; ++x) {
        u64 p1 = mulmod(uu, powmod(x, k, q), q);
        u64 p2 = powmod((x + 1) % q, k - 1, q);
        if (k % 2 == 1)
            p2 = (q - p2) % q;
        if ((p1 + p2) % q == 0)
            ++r.roots;
    }
    r.value = static_cast<double>(r.roots) - 1.0 + 1.0 / q;
    r.naive = k_sum_naive(F, 1, k - 1, -k, uu);
    r.residual = std::abs(r.value - r.naive);
    return r;
}

namespace {

double l1(const std::vector<cplx>& v)
{
    double s = 0.0;
    for (auto& x : v)
        s += std::abs(x);
    return s;
}

void finish(SumReport& r, const PrimeField& F, double sup, double coeffs, double boxes)
{
    r.trivial_bound = coeffs * sup;
    r.ratio = r.trivial_bound > 0 ? std::abs(r.value) / r.trivial_bound : 0.0;
    r.box_scale = std::sqrt(boxes) * std::sqrt(static_cast<double>(F.q()));
    r.exponent = std::abs(r.value) > 0
                     ? std::log(r.box_scale / std::abs(r.value)) / std::log(static_cast<double>(F.q()))
                     : INFINITY;
}

}  // namespace

SumReport bilinear_sum(const PrimeField& F, const TraceTable& K, i64 b, i64 c,
                       const std::vector<cplx>& alpha, u64 M, const std::vector<cplx>& beta, u64 N)
{
    SumReport r;
    r.exceeds_modulus = 2 * M >= F.q() || 2 * N >= F.q();
    cplx s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        u64 m = M + 1 + i;
        if (m % F.q() == 0)
            continue;
        u32 mb = F.power(m, b);
        for (std::size_t j = 0; j < beta.size(); ++j) {
            u64 nn = N + 1 + j;
            if (nn % F.q() == 0)
                continue;
            s += alpha[i] * beta[j] * K.at(F.mul(mb, F.power(nn, c)));
        }
    }
    r.value = s;
    finish(r, F, K.sup_norm(), l1(alpha) * l1(beta), double(alpha.size()) * double(beta.size()));
    return r;
}

SumReport trilinear_sum(const PrimeField& F, const TraceTable& K, i64 a, i64 b, i64 c, i64 xi,
                        const std::vector<cplx>& alpha, u64 L, const std::vector<cplx>& beta, u64 M,
                        const std::vector<cplx>& gamma, u64 N)
{
    SumReport r;
    r.exceeds_modulus = 2 * L >= F.q() || 2 * M >= F.q() || 2 * N >= F.q();
    const u32 x0 = checked_unit(F, xi);
    cplx s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        u64 l = L + 1 + i;
        if (l % F.q() == 0)
            continue;
        u32 la = F.mul(x0, F.power(l, a));
        for (std::size_t j = 0; j < beta.size(); ++j) {
            u64 m = M + 1 + j;
            if (m % F.q() == 0)
                continue;
            u32 lm = F.mul(la, F.power(m, b));
            cplx inner = 0.0;
            for (std::size_t k = 0; k < gamma.size(); ++k) {
                u64 nn = N + 1 + k;
                if (nn % F.q() == 0)
                    continue;
                inner += gamma[k] * K.at(F.mul(lm, F.power(nn, c)));
            }
            s += alpha[i] * beta[j] * inner;
        }
    }
    r.value = s;
    finish(r, F, K.sup_norm(), l1(alpha) * l1(beta) * l1(gamma),
           double(alpha.size()) * double(beta.size()) * double(gamma.size()));
    return r;
}

}  // namespace tmq
