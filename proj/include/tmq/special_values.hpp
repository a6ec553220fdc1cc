#pragma once

#include <array>
#include <string>
#include <vector>

#include "tmq/dft.hpp"
#include "tmq/ffield.hpp"
#include "tmq/triples.hpp"

namespace tmq {

// log Gamma(z) on the principal branch (continuous away from the negative axis).
cplx log_gamma(cplx z);

// eta in {+1,-1}^3. V and iota depend only on how many entries are -1.
struct GammaProfile {
    std::array<int, 3> eta{1, 1, 1};

    int odd_count() const;
    bool even() const { return odd_count() == 0; }
    std::string str() const;

    static GammaProfile with_odd_count(int nu);
    // profile of (chi^a(-1), chi^b(-1), chi^c(-1)) for chi of the given parity
    static GammaProfile of(const TripleSpec& t, bool odd_character);
};

cplx iota(const GammaProfile& p);

// log gamma_eta(s), gamma_+(s) = pi^{-s/2} Gamma(s/2), gamma_-(s) = gamma_+(s+1).
cplx log_gamma_profile(const GammaProfile& p, cplx s);

struct VParams {
    double sigma = 1.5;   // abscissa of the right contour
    double T = 60.0;      // |Im u| <= T
    double panel = 0.5;   // width of each 20-point Gauss-Legendre panel
};

// V(y) = 1/(2 pi i) int_(sigma) gamma(1/2+u)/gamma(1/2) y^{-u} du/u.
// For y < 1 the integral is taken on Re u = -1/4 and the residue at u = 0
// added; this keeps y^{-u} of size one near y = 0. For y >= 1 the line
// passes through the saddle point of the integrand (never left of sigma), so
// tiny values keep their relative accuracy; log_value reaches far past the
// double underflow.
class VEvaluator {
public:
    explicit VEvaluator(GammaProfile p, VParams par = {});

    double operator()(double y) const;
    double log_value(double y) const;

    // Plain integral on Re u = sigma > 0 with the configured T and panels.
    double contour(double y, double sigma) const;
    // y V'(y), same contour choices as operator().
    double y_dv(double y) const;

    const GammaProfile& profile() const { return p_; }
    const VParams& params() const { return par_; }

private:
    struct Line {
        double sigma = 0;
        std::vector<double> tau, w;
        std::vector<cplx> g;  // gamma(1/2+u)/gamma(1/2) at u = sigma + i tau
    };
    Line make_line(double sigma, double T) const;
    double line_integral(const Line& L, double y, bool over_u) const;
    double saddle(double y, bool over_u) const;
    double log_scaled(double y, bool over_u, double& sign) const;

    GammaProfile p_;
    VParams par_;
    cplx log_g_half_;
    Line right_, left_;
};

// Piecewise Chebyshev interpolant of V in log y; exact 0 past the cutoff
// where V < 1e-13, direct evaluation below ymin.
class VTable {
public:
    explicit VTable(const VEvaluator& ev, double ymin = 1e-14, double vmin = 1e-13);

    double operator()(double y) const;
    double cutoff() const { return ycut_; }
    const VEvaluator& evaluator() const { return ev_; }

private:
    static constexpr int nodes = 24;
    VEvaluator ev_;
    double x0_, ycut_;
    std::vector<std::array<double, nodes>> coef_;
};

// Shared tables, one per odd count, built on first use.
const VTable& v_table(int odd_count);

// Hurwitz zeta(s, x), x > 0, s != 1; Euler-Maclaurin with shift 50 through B_16.
cplx hurwitz_zeta(cplx s, double x);
cplx riemann_zeta(cplx s);

// L(s, chi_t) for every t in [0, q-1), from one DFT over the Hurwitz values.
// t = 0 gives zeta(s)(1 - q^{-s}).
std::vector<cplx> l_values(const PrimeField& F, cplx s = 0.5);

// L(1/2, chi_t); throws TrivialCharacter for t = 0 mod q-1.
cplx l_central(const PrimeField& F, CharIndex t);
double l_central_trivial(u64 q);

// chi_t^a, chi_t^b, chi_t^{+-c} all nontrivial.
bool is_generic(const PrimeField& F, CharIndex t, const TripleSpec& tr);

struct FeCheck {
    cplx lhs, rhs;
    double residual;  // |lhs - rhs| / max(1, |lhs|)
};

// Lambda(s) = q^{3s/2} gamma_eta(s) L(s,chi^a) L(s,chi^b) L(s,chi^c) against
// iota eps(chi^a) eps(chi^b) eps(chi^c) Lambda(1-s, conjugates).
FeCheck functional_equation_check(const PrimeField& F, CharIndex t, const TripleSpec& tr,
                                  cplx s);

// Both sums of the approximate functional equation, for all characters at
// once. Index [0] uses V_e, [1] uses V_o. Wx/Wy are the histograms over
// j = a ind l + b ind m + c ind n mod q-1 of (lmn)^{-1/2} V(lmn/X) (resp. Y).
struct AfeSums {
    u64 q = 0;
    TripleSpec triple;
    double X = 0, Y = 0;
    std::array<std::vector<double>, 2> Wx, Wy;
    std::array<std::vector<cplx>, 2> A;  // A[p][t] = sum chi_t(l^a m^b n^c) ...V(lmn/X)
    std::array<std::vector<cplx>, 2> B;  // B[p][t] = sum conj chi_t(...) ...V(lmn/Y)
    u64 terms_x = 0, terms_y = 0;
};

void check_x_range(u64 q, double X);
AfeSums afe_sums(const PrimeField& F, const TripleSpec& tr, double X);

// Right-hand side of the AFE for chi_t (valid as an identity for generic t).
cplx afe_rhs(const AfeSums& S, const GaussTable& G, CharIndex t);

struct AfeCheck {
    cplx lhs, rhs;
    double residual;
};

AfeCheck afe_check(const PrimeField& F, CharIndex t, const TripleSpec& tr, double X);

struct AfeSweep {
    double max_residual = 0;
    i64 worst_t = -1;
    i64 generic = 0;
};

// Residual over every generic character, reusing one set of sums.
AfeSweep afe_sweep(const PrimeField& F, const GaussTable& G, const std::vector<cplx>& L,
                   const TripleSpec& tr, double X);

// Fitted constants for the V properties on a log grid.
struct VFits {
    double C_small = 0;     // max |V-1| / y^{0.4}, y <= 1
    double C_deriv = 0;     // max |y V'| (1+y)^5 (direct integral)
    double C_deriv_fd = 0;  // same with central differences in log y
    double C_diff = 0;      // max |V_e - V_o| (1+y)^5 / y^{0.4}
    bool positive = true;
    double min_value = 0;   // smallest V on the grid (may underflow to 0; log checked)
};

VFits fit_v_constants(int odd_count, const std::vector<double>& grid);
std::vector<double> default_v_grid();  // 10^{k/4}, k = -32..12

}  // namespace tmq
