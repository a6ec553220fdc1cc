#pragma once

#include <string>
#include <vector>

#include "tmq/ffield.hpp"
#include "tmq/parallel.hpp"

namespace tmq {

enum class TraceMethod { naive, spectral };
const char* method_name(TraceMethod m);

// u -> K_{a,b,c}(u; q) on F_q^x, c signed. values has length q and
// values[0] is zero so that K can be indexed by residues directly.
struct TraceTable {
    u32 q = 0;
    i64 a = 0, b = 0, c = 0;
    std::vector<cplx> values;
    TraceMethod method = TraceMethod::naive;

    cplx at(u64 u) const { return values[u % q]; }
    double sup_norm() const;
};

cplx k_sum_naive(const PrimeField& F, i64 a, i64 b, i64 c, i64 u);
TraceTable k_table_naive(const PrimeField& F, i64 a, i64 b, i64 c,
                         const Workers& pool = serial_workers());
TraceTable k_table_spectral(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c);
TraceTable k_table_spectral(const PrimeField& F, i64 a, i64 b, i64 c);

// Multiset of character indices mod n = q-1, kept sorted.
class CharMultiset {
public:
    CharMultiset() = default;
    CharMultiset(i64 n, std::vector<i64> items);

    // rho[a] = all characters with rho^a = 1; requires a | n
    static CharMultiset roots(i64 n, i64 a);

    i64 modulus() const { return n_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::vector<i64>& items() const { return items_; }
    int multiplicity(i64 t) const;

    CharMultiset operator+(const CharMultiset& o) const;  // disjoint union
    CharMultiset meet(const CharMultiset& o) const;       // multiset intersection
    CharMultiset translate(i64 eta) const;                // eta * rho
    CharMultiset without(i64 t) const;                    // drop one copy of t
    bool operator==(const CharMultiset& o) const { return n_ == o.n_ && items_ == o.items_; }

    std::string str() const;

private:
    i64 n_ = 1;
    std::vector<i64> items_;
};

// Hyp(u; rho, theta) with the (-1)^{r+t} sign, via its Mellin transform.
std::vector<cplx> hyp_table(const PrimeField& F, const GaussTable& G, const CharMultiset& rho,
                            const CharMultiset& theta);
cplx hyp_sum(const PrimeField& F, const GaussTable& G, const CharMultiset& rho,
             const CharMultiset& theta, i64 u);
// Same sum by enumerating all (x, y) with prod x = u prod y.
cplx hyp_sum_direct(const PrimeField& F, const CharMultiset& rho, const CharMultiset& theta, i64 u);

// |-eps(psi_a, chi_t^a) - eps_a(psi) prod_{rho^a=1} eps(psi, chi_t rho)|
double check_hasse_davenport(const PrimeField& F, const GaussTable& G, i64 a, CharIndex t);

// K(f u) = (-1)^v eps_abc / q * q^{(3-v)/2} * Hyp(u). The extra power of q
// is the normalization under which the identity holds for unnormalized Hyp;
// it is 1 when v = 3.
struct PropCheck {
    u32 f = 0;  // f_+ or f_-
    cplx lhs, rhs;
    double scale = 1.0;             // q^{(3-v)/2}
    double residual = 0.0;          // |lhs - rhs|
    double literal_residual = 0.0;  // same without the scale factor
};
PropCheck check_prop_identity(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c, i64 u);
// Worst residual over every u, using the naive table for K.
double prop_identity_max_residual(const PrimeField& F, const GaussTable& G, i64 a, i64 b, i64 c);

struct InducedForm {
    cplx value;    // closed-form right-hand side
    cplx leading;  // sum_{x^a = u (-1)^c} psi(x)
    cplx naive;    // K_{a,c,-c}(u) by enumeration
    double residual = 0.0;
};
InducedForm induced_closed_form(const PrimeField& F, i64 a, i64 c, i64 u);

struct SolvableForm {
    u32 roots = 0;  // number of roots of u X^k + (-1)^k (X+1)^{k-1} in F_q
    cplx value;     // roots - 1 + 1/q
    cplx naive;     // K_{1,k-1,-k}(u)
    double residual = 0.0;
};
SolvableForm solvable_closed_form(const PrimeField& F, i64 k, i64 u);

struct SumReport {
    cplx value;
    double trivial_bound = 0.0;  // sum |coefficients| * max |K|
    double ratio = 0.0;          // |value| / trivial_bound
    double box_scale = 0.0;      // sqrt(product of box sizes) * sqrt(q)
    double exponent = 0.0;       // eta with |value| = box_scale * q^{-eta}
    bool exceeds_modulus = false;
};

// Coefficient vectors cover (M, 2M] and (N, 2N]: alpha[i] belongs to m = M+1+i.
SumReport bilinear_sum(const PrimeField& F, const TraceTable& K, i64 b, i64 c,
                       const std::vector<cplx>& alpha, u64 M, const std::vector<cplx>& beta, u64 N);
SumReport trilinear_sum(const PrimeField& F, const TraceTable& K, i64 a, i64 b, i64 c, i64 xi,
                        const std::vector<cplx>& alpha, u64 L, const std::vector<cplx>& beta, u64 M,
                        const std::vector<cplx>& gamma, u64 N);

}  // namespace tmq
