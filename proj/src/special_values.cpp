#include "tmq/special_values.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>

#include "tmq/error.hpp"

namespace tmq {

namespace {

const double kPi = 3.14159265358979323846;

struct GslQuiet {
    GslQuiet() { gsl_set_error_handler_off(); }
};
const GslQuiet gsl_quiet;

}  // namespace

cplx log_gamma(cplx z)
{
    gsl_sf_result lnr, arg;
    gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    return {lnr.val, arg.val};
}

int GammaProfile::odd_count() const
{
    return int(std::count(eta.begin(), eta.end(), -1));
}

std::string GammaProfile::str() const
{
    std::string s = "(";
    for (int i = 0; i < 3; ++i)
        s += (i ? "," : "") + std::string(eta[i] > 0 ? "+1" : "-1");
    return s + ")";
}

GammaProfile GammaProfile::with_odd_count(int nu)
{
    GammaProfile p;
    for (int i = 0; i < 3; ++i)
        p.eta[i] = i < nu ? -1 : 1;
    return p;
}

GammaProfile GammaProfile::of(const TripleSpec& t, bool odd_character)
{
    GammaProfile p;
    if (odd_character) {
        p.eta = {t.a % 2 ? -1 : 1, t.b % 2 ? -1 : 1, t.c % 2 ? -1 : 1};
    }
    return p;
}

cplx iota(const GammaProfile& p)
{
    // i^{(eta-1)/2}: 1 for eta = 1, -i for eta = -1
    static const cplx powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return powers[p.odd_count()];
}

cplx log_gamma_profile(const GammaProfile& p, cplx s)
{
    const double lpi = std::log(kPi);
    cplx out = 0;
    const int nu = p.odd_count();
    if (nu < 3)
        out += double(3 - nu) * (-s / 2.0 * lpi + log_gamma(s / 2.0));
    if (nu > 0) {
        const cplx s1 = s + 1.0;
        out += double(nu) * (-s1 / 2.0 * lpi + log_gamma(s1 / 2.0));
    }
    return out;
}

// ---------------------------------------------------------------- V

VEvaluator::VEvaluator(GammaProfile p, VParams par) : p_(p), par_(par)
{
    if (!(par_.sigma > 0) || !(par_.T > 0) || !(par_.panel > 0))
        fail(Errc::usage, "contour parameters must be positive");
    log_g_half_ = log_gamma_profile(p_, 0.5);
    right_ = make_line(par_.sigma, par_.T);
    left_ = make_line(-0.25, par_.T);
}

VEvaluator::Line VEvaluator::make_line(double sigma, double T) const
{
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    Line L;
    L.sigma = sigma;
    const int panels = int(std::ceil(T / par_.panel - 1e-9));
    const double h = T / panels;
    for (int k = 0; k < panels; ++k) {
        const double mid = (k + 0.5) * h, half = h / 2;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const int reps = xs[i] == 0 ? 1 : 2;
            for (int r = 0; r < reps; ++r) {
                const double x = r ? -xs[i] : xs[i];
                L.tau.push_back(mid + half * x);
                L.w.push_back(half * ws[i]);
            }
        }
    }
    L.g.resize(L.tau.size());
    for (std::size_t i = 0; i < L.tau.size(); ++i) {
        const cplx u(sigma, L.tau[i]);
        L.g[i] = std::exp(log_gamma_profile(p_, 0.5 + u) - log_g_half_);
    }
    return L;
}

double VEvaluator::line_integral(const Line& L, double y, bool over_u) const
{
    const double ly = std::log(y);
    double acc = 0;
    for (std::size_t i = 0; i < L.tau.size(); ++i) {
        const cplx u(L.sigma, L.tau[i]);
        cplx f = L.g[i] * std::exp(-u * ly);
        if (over_u)
            f /= u;
        acc += L.w[i] * f.real();
    }
    return acc / kPi;
}

double VEvaluator::saddle(double y, bool over_u) const
{
    const double ly = std::log(y);
    auto phi = [&](double s) {
        double v = log_gamma_profile(p_, 0.5 + s).real() - s * ly;
        return over_u ? v - std::log(s) : v;
    };
    double lo = 0.01, hi = 50.0 + 20.0 * std::pow(y, 2.0 / 3.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-6 * (1 + hi); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = phi(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = phi(x2);
        }
    }
    return 0.5 * (lo + hi);
}

// log |integral| with the integrand rescaled by its value at the real point
// of the contour; sign receives the sign of the integral.
double VEvaluator::log_scaled(double y, bool over_u, double& sign) const
{
    const double ly = std::log(y);
    const double s = std::max(par_.sigma, saddle(y, over_u));
    const double T = std::max(par_.T, 10.0 * std::sqrt(s) + 20.0);
    auto h = [&](cplx u) {
        cplx v = log_gamma_profile(p_, 0.5 + u) - log_g_half_ - u * ly;
        return over_u ? v - std::log(u) : v;
    };
    const double h0 = h(cplx(s, 0)).real();
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    const int panels = int(std::ceil(T / par_.panel - 1e-9));
    const double step = T / panels;
    double acc = 0;
    for (int k = 0; k < panels; ++k) {
        const double mid = (k + 0.5) * step, half = step / 2;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const int reps = xs[i] == 0 ? 1 : 2;
            for (int r = 0; r < reps; ++r) {
                const double tau = mid + half * (r ? -xs[i] : xs[i]);
                acc += half * ws[i] * std::exp(h(cplx(s, tau)) - h0).real();
            }
        }
    }
    acc /= kPi;
    sign = acc > 0 ? 1.0 : (acc < 0 ? -1.0 : 0.0);
    return h0 + std::log(std::abs(acc));
}

double VEvaluator::operator()(double y) const
{
    if (!(y > 0))
        fail(Errc::non_positive_y, "V(y) needs y > 0");
    if (y < 1)
        return 1.0 + line_integral(left_, y, true);
    double sign;
    const double lv = log_scaled(y, true, sign);
    return sign * std::exp(lv);
}

double VEvaluator::log_value(double y) const
{
    if (!(y > 0))
        fail(Errc::non_positive_y, "V(y) needs y > 0");
    if (y < 1) {
        const double v = 1.0 + line_integral(left_, y, true);
        return v > 0 ? std::log(v) : std::nan("");
    }
    double sign;
    const double lv = log_scaled(y, true, sign);
    return sign > 0 ? lv : std::nan("");
}

double VEvaluator::contour(double y, double sigma) const
{
    if (!(y > 0))
        fail(Errc::non_positive_y, "V(y) needs y > 0");
    if (!(sigma > 0))
        fail(Errc::usage, "contour abscissa must be positive");
    if (sigma == par_.sigma)
        return line_integral(right_, y, true);
    return line_integral(make_line(sigma, par_.T), y, true);
}

double VEvaluator::y_dv(double y) const
{
    if (!(y > 0))
        fail(Errc::non_positive_y, "V(y) needs y > 0");
    // y V'(y) = -1/(2 pi i) int gamma(1/2+u)/gamma(1/2) y^{-u} du, no pole at 0
    if (y < 1)
        return -line_integral(left_, y, false);
    double sign;
    const double lv = log_scaled(y, false, sign);
    return -sign * std::exp(lv);
}

VTable::VTable(const VEvaluator& ev, double ymin, double vmin) : ev_(ev)
{
    x0_ = std::log(ymin);
    double y = 1.0;
    while (ev_(y) >= vmin)
        y *= 1.02;
    ycut_ = y;
    const int panels = int(std::ceil(std::log(ycut_) - x0_));
    coef_.resize(panels);
    for (int p = 0; p < panels; ++p) {
        std::array<double, nodes> f{};
        for (int k = 0; k < nodes; ++k) {
            const double t = std::cos(kPi * (k + 0.5) / nodes);
            f[k] = ev_(std::exp(x0_ + p + 0.5 * (t + 1.0)));
        }
        for (int j = 0; j < nodes; ++j) {
            double s = 0;
            for (int k = 0; k < nodes; ++k)
                s += f[k] * std::cos(kPi * j * (k + 0.5) / nodes);
            coef_[p][j] = (j == 0 ? 1.0 : 2.0) * s / nodes;
        }
    }
}

double VTable::operator()(double y) const
{
    if (!(y > 0))
        fail(Errc::non_positive_y, "V(y) needs y > 0");
    if (y >= ycut_)
        return 0.0;
    const double x = std::log(y) - x0_;
    if (x < 0)
        return ev_(y);
    const std::size_t p = std::min<std::size_t>(std::size_t(x), coef_.size() - 1);
    const double t = 2.0 * (x - double(p)) - 1.0;
    const auto& c = coef_[p];
    double b1 = 0, b2 = 0;
    for (int j = nodes - 1; j >= 1; --j) {
        const double b0 = 2.0 * t * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

const VTable& v_table(int odd_count)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<VTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[odd_count];
    if (!slot)
        slot = std::make_unique<VTable>(VEvaluator(GammaProfile::with_odd_count(odd_count)));
    return *slot;
}

// ---------------------------------------------------------------- L-values

cplx hurwitz_zeta(cplx s, double x)
{
    if (!(x > 0))
        fail(Errc::usage, "Hurwitz zeta needs x > 0");
    if (std::abs(s - 1.0) < 1e-14)
        fail(Errc::usage, "Hurwitz zeta has a pole at s = 1");
    constexpr int N = 50;
    cplx sum = 0;
    for (int k = 0; k < N; ++k)
        sum += std::exp(-s * std::log(x + k));
    const double xn = x + N, lxn = std::log(xn);
    const cplx pw = std::exp(-s * lxn);  // (x+N)^{-s}
    sum += pw * xn / (s - 1.0) + 0.5 * pw;
    // sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) (x+N)^{-s-2j+1}
    cplx rising = s;
    double xp = 1.0 / xn;
    for (int j = 1; j <= 8; ++j) {
        const double coeff = boost::math::bernoulli_b2n<double>(j) /
                             boost::math::factorial<double>(unsigned(2 * j));
        sum += coeff * rising * pw * xp;
        rising *= (s + double(2 * j - 1)) * (s + double(2 * j));
        xp /= xn * xn;
    }
    return sum;
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

std::vector<cplx> l_values(const PrimeField& F, cplx s)
{
    const u64 n = F.order();
    const double q = F.q();
    std::vector<cplx> v(n);
    for (u64 k = 0; k < n; ++k)
        v[k] = hurwitz_zeta(s, double(F.gpow(k)) / q);
    DftPlan(n).apply(v, +1);
    const cplx scale = std::exp(-s * std::log(q));
    for (auto& x : v)
        x *= scale;
    return v;
}

namespace {

cplx l_direct(const PrimeField& F, CharIndex t, cplx s)
{
    const u64 n = F.order();
    const double q = F.q();
    cplx acc = 0;
    for (u64 x = 1; x < F.q(); ++x)
        acc += F.eo(u64(floor_mod(t * i64(F.ind(x)), i64(n)))) * hurwitz_zeta(s, double(x) / q);
    return acc * std::exp(-s * std::log(q));
}

}  // namespace

cplx l_central(const PrimeField& F, CharIndex t)
{
    if (floor_mod(t, F.order()) == 0)
        fail(Errc::trivial_character, "trivial character: use l_central_trivial");
    return l_direct(F, t, 0.5);
}

double l_central_trivial(u64 q)
{
    return riemann_zeta(0.5).real() * (1.0 - 1.0 / std::sqrt(double(q)));
}

bool is_generic(const PrimeField& F, CharIndex t, const TripleSpec& tr)
{
    const i64 n = F.order();
    return floor_mod(tr.a * t, n) != 0 && floor_mod(tr.b * t, n) != 0 &&
           floor_mod(tr.c * t, n) != 0;
}

FeCheck functional_equation_check(const PrimeField& F, CharIndex t, const TripleSpec& tr, cplx s)
{
    if (!is_generic(F, t, tr))
        fail(Errc::non_generic_character,
             "character " + std::to_string(t) + " is not generic for " + tr.str());
    const i64 e[3] = {tr.a, tr.b, tr.signed_c()};
    GammaProfile p;
    for (int i = 0; i < 3; ++i)
        p.eta[i] = char_is_even(F, e[i] * t) ? 1 : -1;
    const double lq = std::log(double(F.q()));
    auto lambda = [&](cplx z, int sgn) {
        cplx v = std::exp(1.5 * z * lq + log_gamma_profile(p, z));
        for (i64 k : e)
            v *= l_direct(F, sgn * k * t, z);
        return v;
    };
    FeCheck r;
    r.lhs = lambda(s, 1);
    cplx root = iota(p);
    for (i64 k : e)
        root *= epsilon_factor(F, k * t);
    r.rhs = root * lambda(1.0 - s, -1);
    r.residual = std::abs(r.lhs - r.rhs) / std::max(1.0, std::abs(r.lhs));
    return r;
}

// ---------------------------------------------------------------- AFE

void check_x_range(u64 q, double X)
{
    const double lo = std::pow(double(q), 0.5) * (1 - 1e-12);
    const double hi = std::pow(double(q), 2.5) * (1 + 1e-12);
    if (!(X >= lo && X <= hi))
        fail(Errc::x_out_of_range, "X must lie in [q^0.5, q^2.5]");
}

namespace {

// Histograms over j of k^{-1/2} V(k/Z), k = lmn <= cut*Z, (lmn,q) = 1.
u64 afe_histogram(const PrimeField& F, const TripleSpec& tr, double Z, const VTable& ve,
                  const VTable& vo, std::vector<double>& We, std::vector<double>& Wo)
{
    const u64 q = F.q();
    const i64 n = F.order();
    const u64 K = u64(std::max(ve.cutoff(), vo.cutoff()) * Z);
    We.assign(n, 0.0);
    Wo.assign(n, 0.0);
    std::vector<double> we(K + 1), wo(K + 1);
    std::vector<i64> ja(K + 1), jb(K + 1), jc(K + 1);
    for (u64 k = 1; k <= K; ++k) {
        const double y = double(k) / Z, r = 1.0 / std::sqrt(double(k));
        we[k] = r * ve(y);
        wo[k] = r * vo(y);
        if (k % q) {
            const i64 ik = F.ind(k);
            ja[k] = floor_mod(tr.a * ik, n);
            jb[k] = floor_mod(tr.b * ik, n);
            jc[k] = floor_mod(tr.signed_c() * ik, n);
        }
    }
    u64 terms = 0;
    for (u64 l = 1; l <= K; ++l) {
        if (l % q == 0)
            continue;
        for (u64 m = 1; l * m <= K; ++m) {
            if (m % q == 0)
                continue;
            const i64 jlm = ja[l] + jb[m];
            const u64 lm = l * m;
            for (u64 nn = 1; lm * nn <= K; ++nn) {
                if (nn % q == 0)
                    continue;
                i64 j = jlm + jc[nn];
                j = j >= n ? (j >= 2 * n ? j - 2 * n : j - n) : j;
                We[j] += we[lm * nn];
                Wo[j] += wo[lm * nn];
                ++terms;
            }
        }
    }
    return terms;
}

}  // namespace

AfeSums afe_sums(const PrimeField& F, const TripleSpec& tr, double X)
{
    check_x_range(F.q(), X);
    AfeSums S;
    S.q = F.q();
    S.triple = tr;
    S.X = X;
    S.Y = std::pow(double(F.q()), 3) / X;
    const int nu = GammaProfile::of(tr, true).odd_count();
    const VTable& ve = v_table(0);
    const VTable& vo = v_table(nu);
    S.terms_x = afe_histogram(F, tr, S.X, ve, vo, S.Wx[0], S.Wx[1]);
    S.terms_y = afe_histogram(F, tr, S.Y, ve, vo, S.Wy[0], S.Wy[1]);
    DftPlan plan(F.order());
    for (int p = 0; p < 2; ++p) {
        S.A[p].assign(S.Wx[p].begin(), S.Wx[p].end());
        plan.apply(S.A[p], +1);
        S.B[p].assign(S.Wy[p].begin(), S.Wy[p].end());
        plan.apply(S.B[p], -1);
    }
    return S;
}

cplx afe_rhs(const AfeSums& S, const GaussTable& G, CharIndex t)
{
    const i64 n = G.size();
    const std::size_t tt = std::size_t(floor_mod(t, n));
    const bool odd = tt % 2 == 1;  // chi_t(-1) = (-1)^t
    const int p = odd ? 1 : 0;
    const cplx root = iota(GammaProfile::of(S.triple, odd)) * G.epsilon(S.triple.a * t) *
                      G.epsilon(S.triple.b * t) * G.epsilon(S.triple.signed_c() * t);
    return S.A[p][tt] + root * S.B[p][tt];
}

AfeCheck afe_check(const PrimeField& F, CharIndex t, const TripleSpec& tr, double X)
{
    check_x_range(F.q(), X);
    if (!is_generic(F, t, tr))
        fail(Errc::non_generic_character,
             "character " + std::to_string(t) + " is not generic for " + tr.str());
    GaussTable G(F);
    const auto S = afe_sums(F, tr, X);
    AfeCheck r;
    r.lhs = l_central(F, tr.a * t) * l_central(F, tr.b * t) * l_central(F, tr.signed_c() * t);
    r.rhs = afe_rhs(S, G, t);
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

AfeSweep afe_sweep(const PrimeField& F, const GaussTable& G, const std::vector<cplx>& L,
                   const TripleSpec& tr, double X)
{
    const auto S = afe_sums(F, tr, X);
    const i64 n = F.order();
    AfeSweep out;
    for (i64 t = 0; t < n; ++t) {
        if (!is_generic(F, t, tr))
            continue;
        ++out.generic;
        const cplx lhs = L[floor_mod(tr.a * t, n)] * L[floor_mod(tr.b * t, n)] *
                         L[floor_mod(tr.signed_c() * t, n)];
        const double r = std::abs(lhs - afe_rhs(S, G, t));
        if (r > out.max_residual) {
            out.max_residual = r;
            out.worst_t = t;
        }
    }
    return out;
}

std::vector<double> default_v_grid()
{
    std::vector<double> g;
    for (int k = -32; k <= 12; ++k)
        g.push_back(std::pow(10.0, k / 4.0));
    return g;
}

VFits fit_v_constants(int odd_count, const std::vector<double>& grid)
{
    VEvaluator v(GammaProfile::with_odd_count(odd_count));
    VEvaluator ve(GammaProfile::with_odd_count(0));
    VFits f;
    f.min_value = 1.0;
    const double h = 1e-3;
    for (double y : grid) {
        const double lv = v.log_value(y);
        if (!std::isfinite(lv) && !(lv == -HUGE_VAL))
            f.positive = false;
        const double val = v(y);
        f.min_value = std::min(f.min_value, val);
        if (y <= 1)
            f.C_small = std::max(f.C_small, std::abs(val - 1.0) / std::pow(y, 0.4));
        const double w = std::pow(1.0 + y, 5);
        f.C_deriv = std::max(f.C_deriv, std::abs(v.y_dv(y)) * w);
        const double fd = (v(y * std::exp(h)) - v(y * std::exp(-h))) / (2 * h);
        f.C_deriv_fd = std::max(f.C_deriv_fd, std::abs(fd) * w);
        f.C_diff = std::max(f.C_diff, std::abs(ve(y) - val) * w / std::pow(y, 0.4));
    }
    return f;
}

}  // namespace tmq
