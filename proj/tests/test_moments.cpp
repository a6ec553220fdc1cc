#include "doctest.h"

#include <cmath>
#include <numeric>

#include "tmq/error.hpp"
#include "tmq/moments.hpp"

using namespace tmq;

namespace {

// mpmath, L(1/2, chi) from Hurwitz zeta at 30 digits; M, M^e, M^o do not
// depend on the choice of generator.
struct MomentRef {
    u64 q;
    const char* triple;
    u64 xi;
    double M, Me, Mo;
};
const MomentRef moment_refs[] = {
    {7, "1,1,1", 1, 0.094885491931062977802, -0.23325616213261960837, 0.42302714599474556397},
    {7, "1,1,1", 3, -0.22739036803990159465, -0.2700409647013124519, -0.18473977137849073739},
    {13, "1,1,-3", 1, 0.23182142193174390764, -0.15791623171153516422, 0.62155907557502297951},
    {13, "1,2,-5", 2, -0.056747182319331446733, -0.11349436463866289347, 0.0},
    {11, "2,3,-1", 5, -0.25574189207341733437, -0.21177217426705840528, -0.29971160987977626347},
};

}  // namespace

TEST_CASE("moments against frozen values")
{
    for (const auto& r : moment_refs) {
        CAPTURE(r.q);
        CAPTURE(r.triple);
        PrimeField F(r.q);
        const auto P = moment_parts(F, parse_triple(r.triple), r.xi);
        CHECK(std::abs(P.M - cplx(r.M)) <= 1e-11);
        CHECK(std::abs(P.Me - cplx(r.Me)) <= 1e-11);
        CHECK(std::abs(P.Mo - cplx(r.Mo)) <= 1e-11);
    }
}

TEST_CASE("moments are real and split by parity")
{
    for (u64 q : {u64(13), u64(31), u64(101)}) {
        PrimeField F(q);
        CentralValues L(F);
        for (const char* ts : {"1,1,1", "1,1,-3", "1,2,-5", "2,2,-3"}) {
            for (u64 xi : {u64(1), u64(2), q - 1}) {
                const auto P = moment_parts(F, L, parse_triple(ts), xi);
                CHECK(std::abs(P.M.imag()) <= 1e-9);
                CHECK(std::abs(P.Me.imag()) <= 1e-9);
                CHECK(std::abs(P.Mo.imag()) <= 1e-9);
                CHECK(std::abs((P.Me + P.Mo) / 2.0 - P.M) <= 1e-12);
            }
        }
    }
    PrimeField F(13);
    CHECK_THROWS_AS(moment_parts(F, parse_triple("1,1,1"), 26), Error);
}

TEST_CASE("d decomposition")
{
    PrimeField F(13);
    CentralValues L(F);
    struct Case {
        const char* t;
        u64 d;
    };
    for (Case c : {Case{"1,1,1", 1}, Case{"1,1,-3", 2}, Case{"1,2,-5", 3}, Case{"1,1,1", 4},
                   Case{"2,3,-1", 6}, Case{"1,1,1", 5}}) {
        CAPTURE(c.t);
        CAPTURE(c.d);
        const auto r = d_decomposition_check(F, L, parse_triple(c.t), c.d);
        CHECK(r.dprime == std::gcd(c.d, u64(12)));
        CHECK(r.residual <= 1e-10);
    }
    CHECK_THROWS_AS(d_decomposition_check(F, L, parse_triple("2,2,-4"), 1), Error);
}

TEST_CASE("first sum, congruence and character forms")
{
    struct Case {
        u64 q;
        const char* t;
        u64 xi;
    };
    for (Case c : {Case{13, "1,1,1", 1}, Case{13, "1,1,-3", 1}, Case{13, "1,1,-3", 5},
                   Case{31, "1,2,-5", 1}, Case{31, "2,3,-1", 7}}) {
        CAPTURE(c.q);
        CAPTURE(c.t);
        PrimeField F(c.q);
        const auto t = parse_triple(c.t);
        for (bool odd : {false, true}) {
            const double X = std::pow(double(c.q), 1.5);
            const auto r = m1_sum(F, t, c.xi, X, odd);
            CHECK(r.residual <= 1e-8);
            CHECK(std::abs(r.character.imag()) <= 1e-8);
            CHECK(r.error >= 0);
            CHECK(std::abs(r.main + r.error - r.congruence) <= 1e-12 * (1 + r.congruence));
            if (c.xi == 1) {
                // l = m = n = 1 contributes V(1/X); for sign + it is the whole main term
                const double v1 = v_table(GammaProfile::of(t, odd).odd_count())(1.0 / X);
                CHECK(r.main >= v1 - 1e-12);
                if (!t.negative)
                    CHECK(r.main == doctest::Approx(v1).epsilon(1e-12));
            } else if (!t.negative) {
                CHECK(r.main == 0.0);
            }
        }
    }
}

TEST_CASE("second sum, K form and character form")
{
    struct Case {
        u64 q;
        const char* t;
        u64 xi;
        double ypow;
    };
    for (Case c : {Case{13, "1,1,1", 1, 1.25}, Case{13, "1,1,-3", 2, 1.5}, Case{31, "1,4,-3", 1, 1.25},
                   Case{31, "1,2,-5", 3, 1.0}}) {
        CAPTURE(c.q);
        CAPTURE(c.t);
        PrimeField F(c.q);
        GaussTable G(F);
        const auto t = parse_triple(c.t);
        for (bool odd : {false, true}) {
            const auto r = m2_sum(F, G, t, c.xi, std::pow(double(c.q), c.ypow), odd);
            CHECK(r.residual <= 1e-8);
            CHECK(r.trivial_scale > 0);
        }
    }
}

TEST_CASE("approximate functional equation rebuilds the moments")
{
    struct Case {
        u64 q;
        const char* t;
        u64 xi;
        double xpow;
    };
    for (Case c : {Case{13, "1,1,1", 1, 1.5}, Case{31, "1,2,-5", 1, 1.5},
                   Case{13, "1,1,-3", 12, 1.5}, Case{13, "1,1,-3", 1, 1.0},
                   Case{17, "2,3,-1", 3, 2.0}}) {
        CAPTURE(c.q);
        CAPTURE(c.t);
        CAPTURE(c.xi);
        PrimeField F(c.q);
        const auto r = afe_moment_check(F, parse_triple(c.t), c.xi, std::pow(double(c.q), c.xpow));
        CHECK(r.residual_e <= 1e-5);
        CHECK(r.residual_o <= 1e-5);
        CHECK(r.m1_residual <= 1e-8);
        CHECK(r.m2_residual <= 1e-8);
    }
    PrimeField F(13);
    CHECK_THROWS_AS(afe_moment_check(F, parse_triple("1,1,1"), 1, 2.0), Error);
}

TEST_CASE("nonvanishing and fourth moments")
{
    PrimeField F(101);
    for (const char* ts : {"1,1,1", "1,1,-3", "1,2,-5"}) {
        CAPTURE(ts);
        const auto r = nonvanishing_count(F, parse_triple(ts));
        CHECK(r.count <= 100);
        CHECK(double(r.count) >= r.holder_bound - 1e-9);
        CHECK(r.holder_bound > 0);
        for (double f : r.fourth)
            CHECK(f > 0);
    }
}

TEST_CASE("convergence study on small primes")
{
    const auto st = convergence_study(parse_triple("1,1,-3"), 1, {101, 103, 107, 109, 113});
    CHECK(st.rows.size() == 5);
    CHECK(st.D == doctest::Approx(5.92807).epsilon(1e-5));
    CHECK(std::isfinite(st.avg_low));
    CHECK(std::isnan(st.avg_high));
    CHECK(st.csv().rfind("q,a,b,c,d,M,D,abs_err\n", 0) == 0);
    const auto plus = convergence_study(parse_triple("1,1,1"), 1, {101, 103});
    CHECK(plus.D == 1.0);
    CHECK_THROWS_AS(convergence_study(parse_triple("1,1,1"), 1, {3001}), Error);
}

TEST_CASE("trivial character trend")
{
    std::vector<double> xs;
    for (int k = 0; k <= 12; ++k)
        xs.push_back(std::pow(10.0, 3.0 + k / 4.0));
    const auto f = trivial_character_trend(101, xs);
    MESSAGE("leading " << f.coef[0] << " expected " << f.leading_expected << " r2 " << f.r2);
    CHECK(f.r2 >= 0.999);
    CHECK(f.coef[0] == doctest::Approx(f.leading_expected).epsilon(0.02));
}

TEST_CASE("moments at larger primes")
{
    // Hurwitz values from mpmath, character sums by numpy FFT
    struct Ref {
        u64 q;
        double m111, m113;
    };
    for (Ref r : {Ref{233, 1.6392446780875678, 2.1556446583426365},
                  Ref{1049, 3.3181863843510775, 2.0212660227770685}}) {
        CAPTURE(r.q);
        PrimeField F(r.q);
        CentralValues L(F);
        CHECK(std::abs(moment_direct(F, L, parse_triple("1,1,1"), 1) - cplx(r.m111)) <= 1e-9);
        CHECK(std::abs(moment_direct(F, L, parse_triple("1,1,-3"), 1) - cplx(r.m113)) <= 1e-9);
    }
}
