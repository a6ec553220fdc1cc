#include "tmq/ffield.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "tmq/error.hpp"

namespace tmq {

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp)
            return false;
    }
    return true;
}

std::vector<u64> primes_between(u64 lo, u64 hi)
{
    std::vector<u64> out;
    if (hi <= 2)
        return out;
    std::vector<bool> sieve(hi, true);
    sieve[0] = false;
    if (hi > 1)
        sieve[1] = false;
    for (u64 p = 2; p * p < hi; ++p)
        if (sieve[p])
            for (u64 m = p * p; m < hi; m += p)
                sieve[m] = false;
    for (u64 p = std::max<u64>(lo, 2); p < hi; ++p)
        if (sieve[p])
            out.push_back(p);
    return out;
}

std::vector<u64> distinct_prime_factors(u64 n)
{
    std::vector<u64> f;
    for (u64 p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            f.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    if (n > 1)
        f.push_back(n);
    return f;
}

u64 smallest_primitive_root(u64 q)
{
    if (q == 2)
        return 1;
    auto f = distinct_prime_factors(q - 1);
    for (u64 g = 2; g < q; ++g) {
        bool ok = true;
        for (u64 p : f)
            if (powmod(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        if (ok)
            return g;
    }
    return 0;
}

i64 floor_mod(i64 x, i64 m)
{
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

PrimeField::PrimeField(u64 q)
{
    if (q < 3)
        fail(Errc::too_small, "q must be at least 3, got " + std::to_string(q));
    if (!is_prime(q))
        fail(Errc::not_prime, std::to_string(q) + " is not prime");
    if (q > max_table_modulus)
        fail(Errc::overflow, "q=" + std::to_string(q) + " exceeds table limit");
    q_ = static_cast<u32>(q);
    g_ = static_cast<u32>(smallest_primitive_root(q));
    ind_.assign(q, 0);
    pow_.assign(q - 1, 0);
    u64 x = 1;
    for (u32 k = 0; k + 1 < q_; ++k) {
        pow_[k] = static_cast<u32>(x);
        ind_[x] = k;
        x = x * g_ % q_;
    }
    build_roots();
}

void PrimeField::build_roots()
{
    eq_.resize(q_);
    eo_.resize(q_ - 1);
    for (u32 x = 0; x < q_; ++x)
        eq_[x] = unit_root(x, q_);
    for (u32 k = 0; k + 1 < q_; ++k)
        eo_[k] = unit_root(k, q_ - 1);
}

cplx PrimeField::eq(u64 x) const
{
    return eq_[x % q_];
}

cplx PrimeField::eo(u64 k) const
{
    return eo_[k % (q_ - 1)];
}

u32 PrimeField::inv(u64 x) const
{
    x %= q_;
    if (x == 0)
        fail(Errc::x_divisible_by_q, "0 has no inverse mod " + std::to_string(q_));
    return pow_[(q_ - 1 - ind_[x]) % (q_ - 1)];
}

u32 PrimeField::power(u64 x, i64 e) const
{
    x %= q_;
    if (x == 0) {
        if (e > 0)
            return 0;
        fail(Errc::x_divisible_by_q, "0 raised to a non-positive power");
    }
    u64 k = static_cast<u64>(ind_[x]) * exponent(e) % (q_ - 1);
    return pow_[k];
}

namespace {

void put_u32(std::ostream& os, u32 v)
{
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

bool get_u32(std::istream& is, u32& v)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        return false;
    v = u32(b[0]) | (u32(b[1]) << 8) | (u32(b[2]) << 16) | (u32(b[3]) << 24);
    return true;
}

}  // namespace

void PrimeField::save(const std::string& path) const
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        fail(Errc::io, "cannot write " + path);
    os.write("TMQ1", 4);
    put_u32(os, q_);
    put_u32(os, g_);
    for (u32 x = 1; x < q_; ++x)
        put_u32(os, ind_[x]);
    if (!os)
        fail(Errc::io, "short write to " + path);
}

bool PrimeField::load(const std::string& path, u64 q, PrimeField& out)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return false;
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TMQ1", 4) != 0)
        return false;
    u32 fq = 0, fg = 0;
    if (!get_u32(is, fq) || !get_u32(is, fg) || fq != q)
        return false;
    if (q < 3 || !is_prime(q) || q > max_table_modulus)
        return false;
    if (fg != smallest_primitive_root(q))
        return false;
    PrimeField F;
    F.q_ = fq;
    F.g_ = fg;
    F.ind_.assign(q, 0);
    F.pow_.assign(q - 1, fq);
    for (u32 x = 1; x < fq; ++x) {
        u32 k;
        if (!get_u32(is, k) || k >= fq - 1 || F.pow_[k] != fq)
            return false;
        F.ind_[x] = k;
        F.pow_[k] = x;
    }
    // the file must describe powers of g, not just some bijection
    u64 x = 1;
    for (u32 k = 0; k + 1 < fq; ++k) {
        if (F.pow_[k] != x)
            return false;
        x = x * fg % fq;
    }
    F.build_roots();
    out = std::move(F);
    return true;
}

PrimeField PrimeField::cached(u64 q, const std::string& dir)
{
    if (dir.empty())
        return PrimeField(q);
    std::filesystem::path p = std::filesystem::path(dir) / ("tmq_" + std::to_string(q) + ".bin");
    PrimeField F;
    if (load(p.string(), q, F))
        return F;
    PrimeField built(q);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    built.save(p.string());
    return built;
}

cplx char_value(const PrimeField& F, CharIndex t, i64 x)
{
    i64 r = floor_mod(x, F.q());
    if (r == 0)
        fail(Errc::x_divisible_by_q, "character evaluated at a multiple of q");
    u64 n = F.order();
    u64 k = mulmod(static_cast<u64>(floor_mod(t, n)), F.ind(r), n);
    return F.eo(k);
}

bool char_is_even(const PrimeField& F, CharIndex t)
{
    u64 n = F.order();
    return mulmod(static_cast<u64>(floor_mod(t, n)), F.ind(F.q() - 1), n) == 0;
}

cplx gauss_sum(const PrimeField& F, CharIndex t)
{
    u64 n = F.order();
    u64 tt = static_cast<u64>(floor_mod(t, n));
    cplx s = 0.0;
    for (u32 x = 1; x < F.q(); ++x)
        s += F.eo(mulmod(tt, F.ind(x), n)) * F.eq(x);
    return s;
}

cplx epsilon_factor(const PrimeField& F, CharIndex t)
{
    return gauss_sum(F, t) / std::sqrt(static_cast<double>(F.q()));
}

GaussTable::GaussTable(const PrimeField& F)
    : n_(F.order()), inv_sqrt_q_(1.0 / std::sqrt(static_cast<double>(F.q())))
{
    g_.resize(n_);
    for (i64 k = 0; k < n_; ++k)
        g_[k] = F.eq(F.gpow(k));
    DftPlan(n_).apply(g_, +1);
}

std::vector<u32> mu_d(const PrimeField& F, u64 d)
{
    u64 dd = std::gcd(d, static_cast<u64>(F.order()));
    u64 step = F.order() / dd;
    std::vector<u32> out;
    for (u64 k = 0; k < dd; ++k)
        out.push_back(F.gpow(k * step));
    std::sort(out.begin(), out.end());
    return out;
}

u64 dq(u64 d, u64 q)
{
    u64 g = std::gcd(d, q - 1);
    return d % 2 == 0 ? g : 2 * g;
}

}  // namespace tmq
