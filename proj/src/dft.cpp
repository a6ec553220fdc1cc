#include "tmq/dft.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace tmq {

namespace {

constexpr std::size_t max_small_radix = 31;

std::vector<std::size_t> factorize(std::size_t n)
{
    std::vector<std::size_t> f;
    while (n % 4 == 0) {
        f.push_back(4);
        n /= 4;
    }
    for (std::size_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            f.push_back(p);
            n /= p;
        }
    if (n > 1)
        f.push_back(n);
    return f;
}

std::vector<cplx> root_table(std::size_t n, int sign)
{
    std::vector<cplx> w(n);
    for (std::size_t j = 0; j < n; ++j)
        w[j] = unit_root(sign * static_cast<std::int64_t>(j), static_cast<std::int64_t>(n));
    return w;
}

}  // namespace

cplx unit_root(std::int64_t k, std::int64_t n)
{
    k %= n;
    if (k < 0)
        k += n;
    const long double pi2 = 6.283185307179586476925286766559005768L;
    long double ang = pi2 * static_cast<long double>(k) / static_cast<long double>(n);
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

cplx expi2pi(double x)
{
    x -= std::floor(x);
    const long double pi2 = 6.283185307179586476925286766559005768L;
    long double ang = pi2 * static_cast<long double>(x);
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

void fft_pow2(std::vector<cplx>& a, const std::vector<cplx>& w_half, bool inverse)
{
    const std::size_t m = a.size();
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        std::size_t step = m / len;
        std::size_t half = len / 2;
        for (std::size_t i = 0; i < m; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                cplx w = w_half[k * step];
                if (inverse)
                    w = std::conj(w);
                cplx u = a[i + k];
                cplx v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
    }
}

DftPlan::DftPlan(std::size_t n) : n_(n)
{
    if (n == 0)
        throw std::invalid_argument("DftPlan: zero length");
    factors_ = factorize(n);
    for (auto p : factors_)
        if (p > max_small_radix)
            bluestein_ = true;

    if (!bluestein_) {
        w_pos_ = root_table(n, +1);
        w_neg_ = root_table(n, -1);
        return;
    }

    m_ = 1;
    while (m_ < 2 * n - 1)
        m_ <<= 1;
    w2_.resize(m_ / 2);
    for (std::size_t k = 0; k < m_ / 2; ++k)
        w2_[k] = unit_root(-static_cast<std::int64_t>(k), static_cast<std::int64_t>(m_));

    auto build = [&](int sign, std::vector<cplx>& chirp, std::vector<cplx>& kernel) {
        // chirp[j] = e(sign * j^2 / 2n), with j^2 reduced mod 2n exactly
        const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
        chirp.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t jj = (static_cast<unsigned __int128>(j) * j) % two_n;
            chirp[j] = unit_root(sign * static_cast<std::int64_t>(jj), static_cast<std::int64_t>(two_n));
        }
        kernel.assign(m_, cplx(0.0));
        kernel[0] = std::conj(chirp[0]);
        for (std::size_t j = 1; j < n; ++j) {
            kernel[j] = std::conj(chirp[j]);
            kernel[m_ - j] = std::conj(chirp[j]);
        }
        fft_pow2(kernel, w2_, false);
    };
    build(+1, chirp_pos_, kernel_pos_);
    build(-1, chirp_neg_, kernel_neg_);
}

void DftPlan::mixed(const cplx* in, cplx* out, std::size_t m, std::size_t stride, std::size_t fi,
                    const std::vector<cplx>& w) const
{
    if (m == 1) {
        out[0] = in[0];
        return;
    }
    const std::size_t p = factors_[fi];
    const std::size_t s = m / p;
    for (std::size_t r = 0; r < p; ++r)
        mixed(in + r * stride, out + r * s, s, stride * p, fi + 1, w);

    const std::size_t step = n_ / m;
    const std::size_t pstep = n_ / p;
    std::array<cplx, max_small_radix> tmp;
    for (std::size_t k = 0; k < s; ++k) {
        for (std::size_t r = 0; r < p; ++r)
            tmp[r] = out[r * s + k] * w[(r * k * step) % n_];
        for (std::size_t j = 0; j < p; ++j) {
            cplx acc = tmp[0];
            for (std::size_t r = 1; r < p; ++r)
                acc += tmp[r] * w[((r * j) % p) * pstep];
            out[j * s + k] = acc;
        }
    }
}

void DftPlan::run_bluestein(std::vector<cplx>& data, int sign) const
{
    const auto& chirp = sign > 0 ? chirp_pos_ : chirp_neg_;
    const auto& kernel = sign > 0 ? kernel_pos_ : kernel_neg_;
    std::vector<cplx> a(m_, cplx(0.0));
    for (std::size_t j = 0; j < n_; ++j)
        a[j] = data[j] * chirp[j];
    fft_pow2(a, w2_, false);
    for (std::size_t j = 0; j < m_; ++j)
        a[j] *= kernel[j];
    fft_pow2(a, w2_, true);
    const double scale = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k < n_; ++k)
        data[k] = a[k] * scale * chirp[k];
}

void DftPlan::apply(std::vector<cplx>& data, int sign) const
{
    if (data.size() != n_)
        throw std::invalid_argument("DftPlan: length mismatch");
    if (bluestein_) {
        run_bluestein(data, sign);
        return;
    }
    std::vector<cplx> out(n_);
    mixed(data.data(), out.data(), n_, 1, 0, sign > 0 ? w_pos_ : w_neg_);
    data.swap(out);
}

std::vector<cplx> dft(std::vector<cplx> x, int sign)
{
    DftPlan plan(x.size());
    plan.apply(x, sign);
    return x;
}

}  // namespace tmq
