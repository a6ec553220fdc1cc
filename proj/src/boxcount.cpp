#include "tmq/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "tmq/error.hpp"

namespace tmq {

Range dyadic(u64 L) { return Range{L + 1, 2 * L}; }

u64 box_work(Range l, Range m, Range n) { return l.size() * n.size() + m.size(); }

namespace {

void add_factors(u64 x, i64 e, std::map<u64, i64>& out)
{
    for (u64 p = 2; p * p <= x; ++p) {
        while (x % p == 0) {
            out[p] += e;
            x /= p;
        }
    }
    if (x > 1)
        out[x] += e;
}

}  // namespace

bool exact_power_equal(u64 l, i64 a, u64 m, i64 b, u64 n, i64 c)
{
    const double lhs = double(a) * std::log(double(l)) + double(b) * std::log(double(m));
    const double rhs = double(c) * std::log(double(n));
    if (std::abs(lhs - rhs) > 1e-7 * (1.0 + std::abs(rhs)))
        return false;
    std::map<u64, i64> f;
    add_factors(l, a, f);
    add_factors(m, b, f);
    add_factors(n, -c, f);
    return std::all_of(f.begin(), f.end(), [](const auto& kv) { return kv.second == 0; });
}

u64 count_ranges(const PrimeField& F, const TripleSpec& t, u64 d, Range lr, Range mr, Range nr,
                 u64 budget, const Workers& w, std::vector<BoxHit>* hits)
{
    if (d == 0)
        fail(Errc::usage, "d must be >= 1");
    if (lr.lo == 0 || mr.lo == 0 || nr.lo == 0)
        fail(Errc::usage, "box ranges start at 1");
    const u64 work = box_work(lr, mr, nr);
    if (work > budget)
        fail(Errc::budget_exceeded, "box needs " + std::to_string(work) +
                                        " work units, budget " + std::to_string(budget));
    if (lr.size() == 0 || mr.size() == 0 || nr.size() == 0)
        return 0;

    const u64 q = F.q();
    const i64 md = i64((q - 1) / std::gcd(d, q - 1));

    // m bucketed by b*ind(m) mod md
    std::vector<u64> start(md + 1, 0);
    std::vector<u32> mkey;
    mkey.reserve(mr.size());
    for (u64 m = mr.lo; m <= mr.hi; ++m) {
        if (m % q == 0)
            continue;
        u32 k = u32(floor_mod(t.b * i64(F.ind(m)), md));
        mkey.push_back(k);
        ++start[k + 1];
    }
    for (i64 k = 0; k < md; ++k)
        start[k + 1] += start[k];
    std::vector<u64> members(mkey.size());
    {
        std::vector<u64> pos(start.begin(), start.end() - 1);
        std::size_t i = 0;
        for (u64 m = mr.lo; m <= mr.hi; ++m) {
            if (m % q == 0)
                continue;
            members[pos[mkey[i++]]++] = m;
        }
    }

    std::vector<std::pair<u64, i64>> lkeys;
    for (u64 l = lr.lo; l <= lr.hi; ++l)
        if (l % q != 0)
            lkeys.emplace_back(l, floor_mod(t.a * i64(F.ind(l)), md));

    const i64 sc = t.signed_c();
    const bool neg = t.negative;
    const bool want_hits = hits != nullptr;
    const u64 nn = nr.size();
    const std::size_t chunks = std::size_t(std::min<u64>(nn, 64));

    struct Part {
        u64 count = 0;
        std::vector<BoxHit> hits;
    };
    auto parts = w.map<Part>(chunks, [&](std::size_t ci) {
        Part p;
        const u64 n0 = nr.lo + nn * ci / chunks, n1 = nr.lo + nn * (ci + 1) / chunks;
        for (u64 n = n0; n < n1; ++n) {
            if (n % q == 0)
                continue;
            const i64 kc = floor_mod(sc * i64(F.ind(n)), md);
            for (const auto& [l, ka] : lkeys) {
                const i64 target = floor_mod(-(ka + kc), md);
                const u64 b0 = start[target], b1 = start[target + 1];
                if (!neg && !want_hits) {
                    p.count += b1 - b0;
                    // l = m = n = 1 is the only rational solution of l^a m^b n^c = 1
                    if (l == 1 && n == 1 && b1 > b0 && members[b0] == 1)
                        --p.count;
                    continue;
                }
                for (u64 i = b0; i < b1; ++i) {
                    const u64 m = members[i];
                    const bool trivial = neg ? exact_power_equal(l, t.a, m, t.b, n, t.c)
                                             : (l == 1 && m == 1 && n == 1);
                    if (trivial)
                        continue;
                    ++p.count;
                    if (want_hits)
                        p.hits.push_back({l, m, n});
                }
            }
        }
        return p;
    });

    u64 total = 0;
    for (auto& p : parts) {
        total += p.count;
        if (want_hits)
            hits->insert(hits->end(), p.hits.begin(), p.hits.end());
    }
    return total;
}

u64 count_box(const PrimeField& F, const BoxCountRequest& req, const Workers& w)
{
    if (req.L == 0 || req.M == 0 || req.N == 0)
        fail(Errc::usage, "L, M, N must be >= 1");
    return count_ranges(F, req.triple, req.d, dyadic(req.L), dyadic(req.M), dyadic(req.N),
                        req.budget, w);
}

u64 count_box(const BoxCountRequest& req, const Workers& w)
{
    PrimeField F(req.q);
    return count_box(F, req, w);
}

double vanishing_threshold(u64 q, const TripleSpec& t, u64 d)
{
    const double mx = double(std::max({t.a, t.b, t.c}));
    return std::pow(double(q), 1.0 / (2.0 * double(d) * mx)) / 6.0;
}

bool below_threshold_strict(const BoxCountRequest& req)
{
    return 8.0 * double(req.L) * double(req.M) * double(req.N) <=
           vanishing_threshold(req.q, req.triple, req.d);
}

bool below_threshold_anchor(const BoxCountRequest& req)
{
    return double(req.L) * double(req.M) * double(req.N) <=
           vanishing_threshold(req.q, req.triple, req.d);
}

u64 lattice_min(const PrimeField& F, u64 xi)
{
    const i64 q = F.q();
    i64 u[2] = {q, 0}, v[2] = {i64(xi % u64(q)), 1};
    auto dot = [](const i64* x, const i64* y) { return x[0] * y[0] + x[1] * y[1]; };
    // Lagrange-Gauss reduction; squares stay below 2^55 for q < 2^27.
    if (dot(u, u) < dot(v, v))
        std::swap(u, v);
    for (;;) {
        const i64 vv = dot(v, v);
        if (vv == 0)
            break;
        const double mu = double(dot(u, v)) / double(vv);
        const i64 k = std::llround(mu);
        u[0] -= k * v[0];
        u[1] -= k * v[1];
        if (dot(u, u) >= vv)
            break;
        std::swap(u, v);
    }
    u64 best = ~u64(0);
    for (i64 i = -3; i <= 3; ++i)
        for (i64 j = -3; j <= 3; ++j) {
            if (i == 0 && j == 0)
                continue;
            const i64 x = i * u[0] + j * v[0], y = i * u[1] + j * v[1];
            best = std::min<u64>(best, u64(std::llabs(x) + std::llabs(y)));
        }
    return best;
}

u64 lattice_min_brute(u64 q, u64 xi)
{
    u64 best = ~u64(0);
    const i64 Q = i64(q);
    for (i64 y = -Q; y <= Q; ++y) {
        const i64 x0 = floor_mod(i64(xi % q) * y, Q);
        for (i64 x : {x0, x0 - Q}) {
            if (x == 0 && y == 0)
                continue;
            best = std::min<u64>(best, u64(std::llabs(x) + std::llabs(y)));
        }
    }
    return best;
}

ScanReport conjp_ratio_scan(const PrimeField& F, const std::vector<TripleSpec>& triples,
                            const std::vector<u64>& ds, double eta0, double cap,
                            const Workers& w, u64 budget)
{
    const u64 q = F.q();
    const double qq = double(q) * double(q);
    std::vector<BoxCountRequest> cells;
    for (const auto& t : triples)
        for (u64 d : ds)
            for (u64 L = 1; double(L) <= qq; L *= 2)
                for (u64 M = 1; double(L) * double(M) <= qq; M *= 2)
                    for (u64 N = 1; double(L) * double(M) * double(N) <= qq; N *= 2)
                        cells.push_back({q, t, d, L, M, N, budget});

    ScanReport rep;
    rep.eta0 = eta0;
    rep.cap = cap;
    rep.rows = w.map<ScanRow>(cells.size(), [&](std::size_t i) {
        const auto& c = cells[i];
        ScanRow r{};
        r.q = q;
        r.triple = c.triple;
        r.d = c.d;
        r.L = c.L;
        r.M = c.M;
        r.N = c.N;
        r.count = count_box(F, c);
        const double lmn = double(c.L) * double(c.M) * double(c.N);
        r.ratio = double(r.count) / std::sqrt(lmn);
        r.rhs = std::sqrt(lmn) / double(q) + std::pow(lmn, -eta0);
        r.factor = r.ratio / r.rhs;
        r.below_threshold = below_threshold_anchor(c);
        r.pass = r.factor <= cap && !(r.below_threshold && r.count > 0);
        return r;
    });
    for (const auto& r : rep.rows) {
        rep.max_factor = std::max(rep.max_factor, r.factor);
        if (r.below_threshold && r.count > 0)
            ++rep.threshold_violations;
        rep.pass = rep.pass && r.pass;
    }
    return rep;
}

std::string scan_csv(const ScanReport& r)
{
    std::ostringstream os;
    os.precision(10);
    os << "q,a,b,c,d,L,M,N,count,ratio,rhs,factor,pass\n";
    for (const auto& x : r.rows)
        os << x.q << ',' << x.triple.a << ',' << x.triple.b << ',' << x.triple.signed_c() << ','
           << x.d << ',' << x.L << ',' << x.M << ',' << x.N << ',' << x.count << ',' << x.ratio
           << ',' << x.rhs << ',' << x.factor << ',' << (x.pass ? 1 : 0) << '\n';
    return os.str();
}

PrimeAverage average_over_primes(const TripleSpec& t, u64 d, u64 Q, u64 L, u64 M, u64 N,
                                 u64 budget, const Workers& w)
{
    if (Q < 3)
        fail(Errc::usage, "Q must be >= 3");
    if (L == 0 || M == 0 || N == 0 || d == 0)
        fail(Errc::usage, "L, M, N, d must be >= 1");
    const auto primes = primes_between(Q, 2 * Q);
    const u64 per = box_work(dyadic(L), dyadic(M), dyadic(N));
    if (per > budget || per * primes.size() > budget)
        fail(Errc::budget_exceeded, "prime average needs " +
                                        std::to_string(per * primes.size()) +
                                        " work units, budget " + std::to_string(budget));

    PrimeAverage out;
    out.Q = Q;
    out.rows = w.map<PrimeAverageRow>(primes.size(), [&](std::size_t i) {
        const u64 q = primes[i];
        PrimeField F(q);
        std::vector<BoxHit> hits;
        PrimeAverageRow row{q, 0, 0.0, true};
        row.count = count_ranges(F, t, d, dyadic(L), dyadic(M), dyadic(N), budget,
                                 serial_workers(), &hits);
        // independent check with plain modular powers
        for (const auto& h : hits) {
            const u64 lm = mulmod(powmod(h.l % q, t.a, q), powmod(h.m % q, t.b, q), q);
            const u64 nc = powmod(h.n % q, t.c, q);
            if (t.negative) {
                const bool cong = powmod(lm, d, q) == powmod(nc, d, q);
                row.divisor_ok = row.divisor_ok && cong &&
                                 !exact_power_equal(h.l, t.a, h.m, t.b, h.n, t.c);
            } else {
                const bool cong = powmod(mulmod(lm, nc, q), d, q) == 1;
                row.divisor_ok = row.divisor_ok && cong && !(h.l == 1 && h.m == 1 && h.n == 1);
            }
        }
        row.ratio = double(row.count) / std::sqrt(double(L) * double(M) * double(N));
        return row;
    });
    double s = 0;
    for (const auto& r : out.rows) {
        s += r.ratio;
        out.divisor_ok = out.divisor_ok && r.divisor_ok;
    }
    out.mean_ratio = out.rows.empty() ? 0.0 : s / double(out.rows.size());
    out.scale = std::sqrt(double(L) * double(M) * double(N)) * std::log(double(Q)) / double(Q);
    out.C = out.mean_ratio / out.scale;
    return out;
}

}  // namespace tmq
