#pragma once

#include <string>
#include <vector>

#include "tmq/ffield.hpp"
#include "tmq/parallel.hpp"
#include "tmq/triples.hpp"

namespace tmq {

constexpr u64 default_work_budget = 1000000000ULL;

// Box (L,2L] x (M,2M] x (N,2N].
struct BoxCountRequest {
    u64 q = 0;
    TripleSpec triple;
    u64 d = 1;
    u64 L = 1, M = 1, N = 1;
    u64 budget = default_work_budget;
};

// Closed integer interval [lo, hi], lo >= 1.
struct Range {
    u64 lo = 1, hi = 0;
    u64 size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

Range dyadic(u64 L);  // (L, 2L]

struct BoxHit {
    u64 l, m, n;
};

// Number of (l,m,n) in the ranges, none divisible by q, with
// (l^a m^b n^{+-c})^d = 1 mod q but l^a m^b n^{+-c} != 1 as a rational.
// Optionally collects the counted triples (in no particular order).
u64 count_ranges(const PrimeField& F, const TripleSpec& t, u64 d, Range l, Range m, Range n,
                 u64 budget = default_work_budget, const Workers& w = serial_workers(),
                 std::vector<BoxHit>* hits = nullptr);

u64 count_box(const PrimeField& F, const BoxCountRequest& req,
              const Workers& w = serial_workers());
u64 count_box(const BoxCountRequest& req, const Workers& w = serial_workers());

// Work units count_ranges would spend; compared against the budget.
u64 box_work(Range l, Range m, Range n);

// l^a m^b == n^c over the integers.
bool exact_power_equal(u64 l, i64 a, u64 m, i64 b, u64 n, i64 c);

// (1/6) q^{1/(2 d max(a,b,|c|))}.
double vanishing_threshold(u64 q, const TripleSpec& t, u64 d);
// 2L*2M*2N <= threshold, and the weaker LMN <= threshold.
bool below_threshold_strict(const BoxCountRequest& req);
bool below_threshold_anchor(const BoxCountRequest& req);

// min |x|+|y| over nonzero (x,y) with x = xi*y mod q.
u64 lattice_min(const PrimeField& F, u64 xi);
u64 lattice_min_brute(u64 q, u64 xi);

struct ScanRow {
    u64 q;
    TripleSpec triple;
    u64 d, L, M, N, count;
    double ratio, rhs, factor;
    bool below_threshold;
    bool pass;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    double eta0 = 1.0 / 38.0;
    double cap = 8.0;
    double max_factor = 0.0;
    u64 threshold_violations = 0;  // nonzero count in a cell under the anchor threshold
    bool pass = true;
};

// Every dyadic L,M,N (powers of two) with LMN <= q^2.
// ratio = count/sqrt(LMN), rhs = sqrt(LMN)/q + (LMN)^{-eta0}, factor = ratio/rhs.
ScanReport conjp_ratio_scan(const PrimeField& F, const std::vector<TripleSpec>& triples,
                            const std::vector<u64>& ds, double eta0 = 1.0 / 38.0,
                            double cap = 8.0, const Workers& w = serial_workers(),
                            u64 budget = default_work_budget);

std::string scan_csv(const ScanReport& r);

struct PrimeAverageRow {
    u64 q, count;
    double ratio;
    bool divisor_ok;
};

struct PrimeAverage {
    u64 Q = 0;
    std::vector<PrimeAverageRow> rows;
    double mean_ratio = 0;
    double scale = 0;  // sqrt(LMN) log Q / Q
    double C = 0;      // mean_ratio / scale
    bool divisor_ok = true;
};

// Primes q in [Q, 2Q), box (L,2L]x(M,2M]x(N,2N]. For sign -, every counted
// triple is checked to give (l^a m^b)^d - n^{cd} a nonzero multiple of q.
PrimeAverage average_over_primes(const TripleSpec& t, u64 d, u64 Q, u64 L, u64 M, u64 N,
                                 u64 budget = default_work_budget,
                                 const Workers& w = serial_workers());

}  // namespace tmq
