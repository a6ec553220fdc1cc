#pragma once

#include <string>
#include <vector>

#include "tmq/dseries.hpp"
#include "tmq/ffield.hpp"
#include "tmq/parallel.hpp"
#include "tmq/special_values.hpp"
#include "tmq/triples.hpp"

namespace tmq {

// L-values at 1/2 for every character, t = 0 included.
struct CentralValues {
    explicit CentralValues(const PrimeField& F) : L(l_values(F, 0.5)) {}
    std::vector<cplx> L;
    // L(1/2, chi_t^a) L(1/2, chi_t^b) L(1/2, chi_t^c)
    cplx triple(const TripleSpec& t, i64 ch) const;
};

struct MomentParts {
    cplx M, Me, Mo;
};

// (1/(q-1)) sum_chi conj chi(xi) L L L, and the even/odd parts with 2/(q-1).
MomentParts moment_parts(const PrimeField& F, const CentralValues& L, const TripleSpec& t,
                         u64 xi);
cplx moment_direct(const PrimeField& F, const CentralValues& L, const TripleSpec& t, u64 xi);
MomentParts moment_parts(const PrimeField& F, const TripleSpec& t, u64 xi);

struct DCheck {
    u64 dprime = 1;
    cplx lhs, rhs;
    double residual = 0;
};

// M_{ad,bd,cd}(1) against the sum of M_{a,b,c}(xi) over xi^{d'} = 1.
DCheck d_decomposition_check(const PrimeField& F, const CentralValues& L, const TripleSpec& t,
                             u64 d);

// X = q^{2-delta}, Y = q^3/X.
double default_x(u64 q, double delta = 0.25);

struct M1Result {
    double congruence = 0;  // sum over l^a m^b n^c = xi mod q
    cplx character;         // (1/(q-1)) sum_chi conj chi(xi) sum chi(l^a m^b n^c) ...
    double residual = 0;
    double main = 0;        // terms with l^a m^b n^c = 1 exactly
    double error = 0;       // congruence - main, a sum of positive terms
    u64 terms = 0;
};

// parity_odd selects V_o (odd characters of the triple) instead of V_e.
M1Result m1_sum(const PrimeField& F, const TripleSpec& t, u64 xi, double X, bool parity_odd);

struct M2Result {
    cplx kform;      // (iota/sqrt q) sum (lmn)^{-1/2} K(xi l^a m^b n^c) V(lmn/Y)
    cplx character;  // (iota/(q-1)) sum_chi eps eps eps conj chi(xi) sum conj chi(...)
    double residual = 0;
    double trivial_scale = 0;  // Y^{1/2}/q^{1/2}
};

M2Result m2_sum(const PrimeField& F, const GaussTable& G, const TripleSpec& t, u64 xi,
                double Y, bool parity_odd);

struct AfeMomentCheck {
    double X = 0, Y = 0;
    MomentParts direct;
    double M1e[2] = {0, 0}, M1o[2] = {0, 0};  // [0]: xi, [1]: -xi
    cplx M2e[2], M2o[2];
    cplx corr_e, corr_o;  // exact contribution of the non-generic characters
    cplx rebuilt_e, rebuilt_o;
    double residual_e = 0, residual_o = 0;
    double m1_residual = 0, m2_residual = 0;  // worst two-form disagreement
    int nongeneric = 0;
};

AfeMomentCheck afe_moment_check(const PrimeField& F, const TripleSpec& t, u64 xi, double X);

struct ConvergenceRow {
    u64 q;
    double M, err;
};

struct ConvergenceStudy {
    TripleSpec triple;
    u64 d = 1;
    double D = 1;
    std::vector<ConvergenceRow> rows;
    double slope = 0;  // least squares of log|M - D| on log q
    double avg_low = 0, avg_high = 0;  // mean |M - D| over [100,200) and [1000,2000)
    std::string csv() const;
};

ConvergenceStudy convergence_study(const TripleSpec& t, u64 d, const std::vector<u64>& primes,
                                   const Workers& w = serial_workers(),
                                   u64 max_prime = 2003);

struct NonvanishingReport {
    u64 q = 0;
    u64 count = 0;       // characters with all three |L| > 1e-8
    u64 borderline = 0;  // some |L| in (1e-8, 1e-6]
    double fourth[3] = {0, 0, 0};  // (1/(q-1)) sum |L(1/2, chi^e)|^4
    double holder_bound = 0;       // |sum L L L|^4 / prod sum |L|^4
    double C4 = 0;                 // max fourth moment / (log q)^4
};

NonvanishingReport nonvanishing_count(const PrimeField& F, const TripleSpec& t);

struct TrendFit {
    std::vector<double> X, S;  // S(X) = sum_{(k,q)=1} d3(k) k^{-1/2} V_e(k/X)
    double constant = 0;       // zeta^{(q)}(1/2)^3, removed before fitting
    double coef[3] = {0, 0, 0};  // (S - constant)/X^{1/2} ~ coef[0] T^2 + coef[1] T + coef[2]
    double r2 = 0;
    double leading_expected = 0;  // (1-1/q)^3 gamma(1)/gamma(1/2)
};

TrendFit trivial_character_trend(u64 q, const std::vector<double>& xs);

}  // namespace tmq
