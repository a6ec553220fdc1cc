#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmq/dft.hpp"

namespace tmq {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Index t of the character chi_t with chi_t(g) = e(t/(q-1)); any integer is
// accepted and reduced mod q-1.
using CharIndex = i64;

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 b, u64 e, u64 m);
bool is_prime(u64 n);
std::vector<u64> primes_between(u64 lo, u64 hi);  // primes p with lo <= p < hi
std::vector<u64> distinct_prime_factors(u64 n);
u64 smallest_primitive_root(u64 q);
i64 floor_mod(i64 x, i64 m);

class PrimeField {
public:
    // Largest q whose dlog/power tables we are willing to allocate.
    static constexpr u64 max_table_modulus = u64(1) << 27;

    explicit PrimeField(u64 q);

    // Loads "<dir>/tmq_<q>.bin" when present and valid, else builds the
    // tables and writes the file. An empty dir means no caching.
    static PrimeField cached(u64 q, const std::string& dir);

    u32 q() const { return q_; }
    u32 g() const { return g_; }
    u32 order() const { return q_ - 1; }

    u32 ind(u64 x) const { return ind_[x % q_]; }   // x not divisible by q
    u32 gpow(u64 k) const { return pow_[k % (q_ - 1)]; }
    u32 reduce(i64 x) const { return static_cast<u32>(floor_mod(x, q_)); }
    u32 mul(u64 a, u64 b) const { return static_cast<u32>((a % q_) * (b % q_) % q_); }
    u32 inv(u64 x) const;
    u32 power(u64 x, i64 e) const;

    // Exponent e reduced mod q-1 so that z^e = z^c for every z != 0,
    // including negative c.
    u32 exponent(i64 c) const { return static_cast<u32>(floor_mod(c, q_ - 1)); }

    // e(x/q) and e(k/(q-1)).
    cplx eq(u64 x) const;
    cplx eo(u64 k) const;

    const std::vector<u32>& ind_table() const { return ind_; }
    const std::vector<u32>& pow_table() const { return pow_; }

    void save(const std::string& path) const;
    static bool load(const std::string& path, u64 q, PrimeField& out);

private:
    PrimeField() = default;
    void build_roots();

    u32 q_ = 0;
    u32 g_ = 0;
    std::vector<u32> ind_;  // ind_[x] for x in 1..q-1, ind_[0] unused
    std::vector<u32> pow_;  // pow_[k] = g^k
    std::vector<cplx> eq_, eo_;
};

cplx char_value(const PrimeField& F, CharIndex t, i64 x);
bool char_is_even(const PrimeField& F, CharIndex t);

// G(chi_t) = sum_{x != 0} chi_t(x) e_q(x), by direct summation.
cplx gauss_sum(const PrimeField& F, CharIndex t);
cplx epsilon_factor(const PrimeField& F, CharIndex t);

// All q-1 Gauss sums from a single DFT of k -> e_q(g^k).
class GaussTable {
public:
    explicit GaussTable(const PrimeField& F);
    cplx gauss(CharIndex t) const { return g_[static_cast<std::size_t>(floor_mod(t, n_))]; }
    cplx epsilon(CharIndex t) const { return gauss(t) * inv_sqrt_q_; }
    i64 size() const { return n_; }

private:
    i64 n_;
    double inv_sqrt_q_;
    std::vector<cplx> g_;
};

// mu_{(d,q-1)}(F_q), sorted ascending.
std::vector<u32> mu_d(const PrimeField& F, u64 d);

u64 dq(u64 d, u64 q);

}  // namespace tmq
