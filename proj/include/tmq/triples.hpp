#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmq/ffield.hpp"
#include "tmq/trace_sums.hpp"

namespace tmq {

// (a, b, +c) or (a, b, -c) with a, b, c >= 1.
struct TripleSpec {
    i64 a = 1, b = 1, c = 1;
    bool negative = false;

    i64 signed_c() const { return negative ? -c : c; }
    std::string str() const;  // "a,b,c" or "a,b,-c"
};

// Parses "a,b,c" / "a,b,-c"; throws UsageError on malformed text.
TripleSpec parse_triple(const std::string& text);

struct TripleInvariants {
    i64 r = 0, t = 0, n = 0;
};

enum class TripleClass { galant, oxozonic, sulfatic, induced, solvable };
const char* class_name(TripleClass c);

bool setwise_coprime(i64 a, i64 b, i64 c);

TripleInvariants invariants(i64 a, i64 b, i64 c);
TripleClass classify(const TripleSpec& spec);

using Triple = std::array<i64, 3>;

struct EnumFilter {
    bool parity_even = false;      // keep a+b-c even
    std::optional<i64> rt_gap;     // keep |r-t| equal to this
    bool nonzero_gap = false;      // keep |r-t| != 0
};

struct Enumeration {
    i64 n0 = 0;
    std::vector<Triple> sporadic;   // canonical a <= b, sorted
    bool family = false;            // some (n0, c, c), c > n0, passed the filter
    std::vector<Triple> family_examples;
    std::vector<Triple> beyond_bounds;  // hits outside the proof's bounds
    i64 b_bound = 0, c_bound_slope = 0, search_b = 0, search_c = 0;
};

Enumeration enumerate_n_equals(i64 n0, const EnumFilter& filter);

// rho_{a,b;c} and theta_{a,b;c} as index multisets over F.
std::pair<CharMultiset, CharMultiset> char_multisets(const PrimeField& F, i64 a, i64 b, i64 c);

struct BelyiWitness {
    i64 alpha = 0, beta = 0, d = 0, e = 0;
};

struct InductionFlags {
    std::vector<i64> kummer_divisors;         // d >= 2 with the pair d-Kummer-induced
    std::vector<BelyiWitness> belyi;          // witnesses for (rho, theta)
    std::vector<BelyiWitness> belyi_swapped;  // witnesses for (theta, rho)
    bool kummer() const { return !kummer_divisors.empty(); }
    bool belyi_induced() const { return !belyi.empty(); }
    // (rho, theta) is neither Kummer- nor Belyi-induced
    bool primitive() const { return !kummer() && !belyi_induced(); }
};

// d-Kummer-induced for a single multiset: d | size and eta*rho = rho for
// eta of order d.
bool kummer_induced_by(const CharMultiset& rho, i64 d);
InductionFlags kummer_belyi_flags(const CharMultiset& rho, const CharMultiset& theta);

}  // namespace tmq
