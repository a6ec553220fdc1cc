#include "doctest.h"

#include <cmath>
#include <random>

#include "tmq/dft.hpp"

using tmq::cplx;

namespace {

std::vector<cplx> naive(const std::vector<cplx>& x, int sign)
{
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += x[j] * tmq::unit_root(sign * static_cast<std::int64_t>((j * k) % n), n);
        out[k] = s;
    }
    return out;
}

double max_err(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST_CASE("unit roots")
{
    CHECK(std::abs(tmq::unit_root(0, 7) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(tmq::unit_root(3, 6) - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(tmq::unit_root(-1, 4) - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(tmq::expi2pi(0.25) - cplx(0, 1)) < 1e-15);
}

TEST_CASE("dft matches the quadratic sum for smooth and rough lengths")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 2u, 3u, 4u, 6u, 12u, 30u, 36u, 96u, 37u, 41u, 106u, 211u, 330u, 1009u}) {
        std::vector<cplx> x(n);
        for (auto& v : x)
            v = cplx(nd(rng), nd(rng));
        tmq::DftPlan plan(n);
        for (int sign : {+1, -1}) {
            auto y = x;
            plan.apply(y, sign);
            CHECK_MESSAGE(max_err(y, naive(x, sign)) < 1e-10 * std::sqrt(double(n)) * 10, "n=" << n);
        }
    }
}

TEST_CASE("bluestein is chosen only for lengths with a large prime factor")
{
    CHECK(tmq::DftPlan(9972).uses_bluestein());  // 2^2 3^2 277
    CHECK(tmq::DftPlan(2 * 277).uses_bluestein());
    CHECK_FALSE(tmq::DftPlan(2 * 3 * 5 * 7 * 11).uses_bluestein());
}

TEST_CASE("forward then backward is n times identity")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ud(-1, 1);
    for (std::size_t n : {100u, 9972u, 4096u, 10006u}) {
        std::vector<cplx> x(n);
        for (auto& v : x)
            v = cplx(ud(rng), ud(rng));
        tmq::DftPlan plan(n);
        auto y = x;
        plan.apply(y, -1);
        plan.apply(y, +1);
        for (auto& v : y)
            v /= double(n);
        CHECK(max_err(x, y) < 1e-12);
    }
}
