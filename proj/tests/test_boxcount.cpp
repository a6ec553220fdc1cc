#include "doctest.h"

#include <cmath>

#include "tmq/boxcount.hpp"
#include "tmq/error.hpp"

using namespace tmq;

namespace {

using u128 = unsigned __int128;

u128 ipow(u64 x, i64 e)
{
    u128 r = 1;
    for (i64 i = 0; i < e; ++i)
        r *= x;
    return r;
}

// plain triple loop with modular powers; small boxes only
u64 brute(u64 q, TripleSpec t, u64 d, Range lr, Range mr, Range nr)
{
    u64 c = 0;
    for (u64 l = lr.lo; l <= lr.hi; ++l)
        for (u64 m = mr.lo; m <= mr.hi; ++m)
            for (u64 n = nr.lo; n <= nr.hi; ++n) {
                if (l % q == 0 || m % q == 0 || n % q == 0)
                    continue;
                const u64 lm = mulmod(powmod(l, t.a, q), powmod(m, t.b, q), q);
                const u64 nc = powmod(n % q, t.c, q);
                if (t.negative) {
                    if (powmod(lm, d, q) != powmod(nc, d, q))
                        continue;
                    if (ipow(l, t.a) * ipow(m, t.b) == ipow(n, t.c))
                        continue;
                } else {
                    if (powmod(mulmod(lm, nc, q), d, q) != 1)
                        continue;
                    if (l == 1 && m == 1 && n == 1)
                        continue;
                }
                ++c;
            }
    return c;
}

}  // namespace

TEST_CASE("count_box small examples")
{
    PrimeField F17(17);
    BoxCountRequest r{17, parse_triple("1,1,1"), 1, 1, 1, 1};
    CHECK(count_box(F17, r) == 0);

    r.triple = parse_triple("1,1,-1");
    r.L = r.M = r.N = 4;
    CHECK(count_box(F17, r) == brute(17, r.triple, 1, dyadic(4), dyadic(4), dyadic(4)));
    CHECK(count_box(r) == count_box(F17, r));
}

TEST_CASE("count_box agrees with the triple loop")
{
    const char* triples[] = {"1,1,1", "1,1,2", "1,1,-3", "1,2,-3", "2,2,-3", "1,1,-1", "2,3,-1"};
    for (u64 q : {5u, 7u, 13u, 31u}) {
        PrimeField F(q);
        for (const char* ts : triples) {
            const auto t = parse_triple(ts);
            for (u64 d : {1u, 2u, 3u})
                for (u64 L : {1u, 2u, 5u})
                    for (u64 N : {1u, 3u, 8u}) {
                        const u64 M = 4;
                        CAPTURE(q);
                        CAPTURE(ts);
                        CAPTURE(d);
                        CHECK(count_ranges(F, t, d, dyadic(L), dyadic(M), dyadic(N)) ==
                              brute(q, t, d, dyadic(L), dyadic(M), dyadic(N)));
                    }
        }
    }
}

TEST_CASE("ranges containing 1 and q multiples")
{
    PrimeField F(11);
    for (const char* ts : {"1,1,1", "1,2,-1", "2,2,-2"}) {
        const auto t = parse_triple(ts);
        Range r{1, 25};
        CHECK(count_ranges(F, t, 1, r, r, r) == brute(11, t, 1, r, r, r));
    }
}

TEST_CASE("exact equality of powers")
{
    CHECK(exact_power_equal(2, 2, 2, 2, 4, 2));       // 4*4 = 4^2
    CHECK(exact_power_equal(4, 1, 2, 1, 2, 3));       // 8 = 2^3
    CHECK_FALSE(exact_power_equal(3, 1, 3, 1, 2, 3));
    CHECK(exact_power_equal(999983, 3, 1, 1, 999983, 3));
    CHECK_FALSE(exact_power_equal(999983, 3, 2, 1, 999983, 3));
}

TEST_CASE("dyadic box is the sum of its eight half-boxes")
{
    PrimeField F(101);
    for (const char* ts : {"1,1,1", "1,1,-3", "2,2,-3", "1,2,-5"}) {
        const auto t = parse_triple(ts);
        for (u64 d : {1u, 2u, 4u}) {
            const u64 L = 16, M = 32, N = 8;
            auto halves = [](u64 A) {
                return std::array<Range, 2>{Range{A + 1, A + A / 2}, Range{A + A / 2 + 1, 2 * A}};
            };
            u64 sum = 0;
            for (auto lr : halves(L))
                for (auto mr : halves(M))
                    for (auto nr : halves(N))
                        sum += count_ranges(F, t, d, lr, mr, nr);
            CHECK(sum == count_ranges(F, t, d, dyadic(L), dyadic(M), dyadic(N)));
        }
    }
}

TEST_CASE("parallel count matches serial")
{
    PrimeField F(211);
    Workers w(4);
    BoxCountRequest r{211, parse_triple("2,2,-3"), 2, 64, 32, 16};
    CHECK(count_box(F, r, w) == count_box(F, r));
}

TEST_CASE("budget")
{
    PrimeField F(101);
    BoxCountRequest r{101, parse_triple("1,1,1"), 1, 1000, 1, 1000};
    r.budget = 1000;
    CHECK_THROWS_AS(count_box(F, r), Error);
    try {
        count_box(F, r);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::budget_exceeded);
    }
}

TEST_CASE("lattice minimum")
{
    PrimeField F(13);
    CHECK(lattice_min(F, 1) == 2);
    CHECK(lattice_min(F, 12) == 2);
    CHECK(lattice_min(F, 5) == lattice_min_brute(13, 5));
    for (u64 q : {3u, 5u, 7u, 13u, 101u, 499u, 1009u}) {
        PrimeField G(q);
        for (u64 xi = 1; xi < q; ++xi)
            REQUIRE(lattice_min(G, xi) == lattice_min_brute(q, xi));
    }
}

TEST_CASE("lattice minima of roots of unity")
{
    for (u64 q : primes_between(3, 500)) {
        PrimeField F(q);
        for (u64 d = 1; d <= 6; ++d)
            for (u32 xi : mu_d(F, d)) {
                if (xi == 1 || xi == q - 1)
                    continue;
                CHECK(double(lattice_min(F, xi)) >= std::pow(double(q), 1.0 / double(d)));
            }
    }
}

TEST_CASE("thresholds")
{
    BoxCountRequest r{499, parse_triple("1,1,1"), 1, 1, 1, 2};
    CHECK(vanishing_threshold(499, r.triple, 1) == doctest::Approx(std::sqrt(499.0) / 6));
    CHECK(below_threshold_anchor(r));
    CHECK_FALSE(below_threshold_strict(r));
    // the strict form needs q^{1/2} >= 48
    BoxCountRequest big{2309, parse_triple("1,1,1"), 1, 1, 1, 1};
    CHECK(below_threshold_strict(big));
    CHECK(count_box(big) == 0);
}

TEST_CASE("ratio scan")
{
    PrimeField F(101);
    auto rep = conjp_ratio_scan(F, {parse_triple("1,1,1")}, {1});
    CHECK(rep.threshold_violations == 0);
    CHECK(rep.rows.size() > 100);
    for (const auto& r : rep.rows)
        CHECK(double(r.L) * double(r.M) * double(r.N) <= 101.0 * 101.0);
    const auto csv = scan_csv(rep);
    CHECK(csv.rfind("q,a,b,c,d,L,M,N,count,ratio", 0) == 0);
    MESSAGE("max factor (1,1,1) q=101: " << rep.max_factor);
}

TEST_CASE("average over primes")
{
    auto avg = average_over_primes(parse_triple("1,1,-2"), 1, 100, 8, 8, 8);
    CHECK(avg.rows.size() == 21);
    CHECK(avg.divisor_ok);
    CHECK(avg.C > 0);
    MESSAGE("C for (1,1,-2): " << avg.C);

    auto small = average_over_primes(parse_triple("1,1,1"), 1, 3, 2, 2, 2);
    REQUIRE(small.rows.size() == 2);
    CHECK(small.rows[0].q == 3);
    CHECK(small.rows[1].q == 5);

    CHECK_THROWS_AS(average_over_primes(parse_triple("1,1,1"), 1, 100, 100000, 1, 100000),
                    Error);
}
