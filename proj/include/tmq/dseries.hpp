#pragma once

#include <vector>

#include "tmq/ffield.hpp"
#include "tmq/triples.hpp"

namespace tmq {

// c(k) = #{alpha, beta, gamma >= 0 : alpha+beta+gamma = k, alpha a + beta b = gamma c}.
u64 dseries_coeff(i64 a, i64 b, i64 c, i64 k);
std::vector<u64> dseries_coeffs(i64 a, i64 b, i64 c, i64 kmax);  // k = 0..kmax

// Integers e_k (k = 1..K) with sum c(k) x^k = prod_k (1 - x^k)^{-e_k} + O(x^{K+1}).
std::vector<i64> zeta_exponents(const std::vector<u64>& coeffs, int K);

// D_{a,b,-c}(s) = sum_{l^a m^b = n^c} (lmn)^{-s} = prod_p sum_k c(k) p^{-ks}.
struct DirichletMainTerm {
    TripleSpec triple;
    double s = 0.5;
    double value = 1.0;
    double tail_bound = 0.0;     // |D - value| <= tail_bound (plus rounding)
    std::vector<u64> coeffs;     // c(0..)
    std::vector<i64> exponents;  // e_1..e_K0 used in the zeta factorization
    int K0 = 0;
    u64 P = 0;                   // primes <= P handled by exact local factors
};

// Sign + returns exactly 1. Throws InducedTriple when c is a or b (pole at 1/2).
DirichletMainTerm dseries_value(const TripleSpec& t, double s = 0.5, double tol = 1e-6);

}  // namespace tmq
