// tmq: command-line front end for the finite-field sums, box counts,
// L-values and moments.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tmq/boxcount.hpp"
#include "tmq/dseries.hpp"
#include "tmq/error.hpp"
#include "tmq/moments.hpp"
#include "tmq/special_values.hpp"
#include "tmq/suites.hpp"
#include "tmq/trace_sums.hpp"
#include "tmq/triples.hpp"

using json = nlohmann::ordered_json;
using namespace tmq;

namespace {

struct Globals {
    u64 q = 0;
    std::string triple;
    u64 d = 1;
    u64 xi = 1;
    double tol = NAN;
    unsigned workers = 1;
    std::string cache_dir;
    std::string format = "json";
    std::string out;
};

// What a command hands back; the report wrapper adds the rest.
struct Outcome {
    json results = json::object();
    double residual = 0;
    double tol = 0;
    bool pass_override = true;  // extra pass condition beyond residual <= tol
    std::string method;
    std::string csv;  // body for --format csv, when the command has a table
};

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

Globals G;

u64 need_q()
{
    if (G.q == 0)
        fail(Errc::usage, "--q is required");
    if (!is_prime(G.q))
        fail(Errc::not_prime, std::to_string(G.q) + " is not prime");
    return G.q;
}

TripleSpec need_triple()
{
    if (G.triple.empty())
        fail(Errc::usage, "--triple is required");
    return parse_triple(G.triple);
}

PrimeField field()
{
    const u64 q = need_q();
    return G.cache_dir.empty() ? PrimeField(q) : PrimeField::cached(q, G.cache_dir);
}

double tol_or(double dflt) { return std::isnan(G.tol) ? dflt : G.tol; }

json triple_json(const TripleSpec& t) { return json::array({t.a, t.b, t.signed_c()}); }

// "key: value" lines for --format table
void flatten(const json& j, const std::string& prefix, std::ostream& os)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array() && !j.empty() && j.front().is_structured()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

std::string complex_csv(const std::vector<std::pair<u64, cplx>>& rows, const char* key)
{
    std::ostringstream os;
    os.precision(17);
    os << key << ",re,im\n";
    for (const auto& [k, v] : rows)
        os << k << ',' << v.real() << ',' << v.imag() << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-field sums, box counts, central L-values and cubic moments"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();

    if (const char* env = std::getenv("TM_CACHE_DIR"))
        G.cache_dir = env;

    app.add_option("--q", G.q, "prime modulus");
    app.add_option("--triple", G.triple, "exponents a,b,c or a,b,-c");
    app.add_option("--d", G.d, "common multiplier d")->check(CLI::PositiveNumber);
    app.add_option("--xi", G.xi, "twist xi");
    app.add_option("--tol", G.tol, "residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--workers", G.workers, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--cache-dir", G.cache_dir, "dlog cache directory (default $TM_CACHE_DIR)");
    app.add_option("--format", G.format, "json, csv or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--out", G.out, "write the report here instead of stdout");

    std::map<std::string, std::function<Outcome()>> run;
    Workers* W = nullptr;

    // field-info
    {
        auto* s = app.add_subcommand("field-info", "primitive root and factorization of q-1");
        run[s->get_name()] = [] {
            const PrimeField F = field();
            Outcome o;
            json f = json::array();
            for (u64 p : distinct_prime_factors(F.order()))
                f.push_back(p);
            o.results = {{"q", F.q()}, {"g", F.g()}, {"order", F.order()}, {"factors", f},
                         {"cached", !G.cache_dir.empty()}};
            o.method = "smallest primitive root";
            return o;
        };
    }
    // ksum
    {
        auto* s = app.add_subcommand("ksum", "K_{a,b,c}(u; q) by enumeration and by spectral table");
        static i64 u = 1;
        s->add_option("--u", u, "argument u")->required();
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const auto t = need_triple();
            const cplx naive = k_sum_naive(F, t.a, t.b, t.signed_c(), u);
            const cplx spec = k_table_spectral(F, t.a, t.b, t.signed_c()).at(F.reduce(u));
            Outcome o;
            o.results = {{"u", u}, {"naive", cj(naive)}, {"spectral", cj(spec)}};
            o.residual = std::abs(naive - spec);
            o.tol = tol_or(1e-9);
            o.method = "naive+spectral";
            return o;
        };
    }
    // ktable
    {
        auto* s = app.add_subcommand("ktable", "table u -> K(u) for every u");
        static std::string method = "spectral";
        static bool csv = false;
        s->add_option("--method", method)->check(CLI::IsMember({"spectral", "naive", "both"}));
        s->add_flag("--csv", csv, "emit u,re,im rows");
        run[s->get_name()] = [&W] {
            const PrimeField F = field();
            const auto t = need_triple();
            Outcome o;
            TraceTable T;
            if (method == "naive") {
                T = k_table_naive(F, t.a, t.b, t.signed_c(), *W);
            } else {
                T = k_table_spectral(F, t.a, t.b, t.signed_c());
                if (method == "both") {
                    const auto N = k_table_naive(F, t.a, t.b, t.signed_c(), *W);
                    for (u64 u = 1; u < F.q(); ++u)
                        o.residual = std::max(o.residual, std::abs(T.at(u) - N.at(u)));
                }
            }
            std::vector<std::pair<u64, cplx>> rows;
            json vals = json::array();
            for (u64 u = 1; u < F.q(); ++u) {
                rows.emplace_back(u, T.at(u));
                vals.push_back(cj(T.at(u)));
            }
            o.results = {{"values", vals}, {"sup_norm", T.sup_norm()}};
            o.csv = complex_csv(rows, "u");
            if (csv)
                G.format = "csv";
            o.tol = tol_or(1e-9);
            o.method = method;
            return o;
        };
    }
    // hyp
    {
        auto* s = app.add_subcommand("hyp", "hypergeometric sum for the triple and its identification with K");
        static i64 u = 1;
        s->add_option("--u", u)->required();
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const GaussTable Gt(F);
            const auto t = need_triple();
            const auto [rho, theta] = char_multisets(F, t.a, t.b, t.c);
            const cplx mellin = hyp_sum(F, Gt, rho, theta, u);
            const cplx direct = hyp_sum_direct(F, rho, theta, u);
            const auto pc = check_prop_identity(F, Gt, t.a, t.b, t.signed_c(), u);
            Outcome o;
            o.results = {{"u", u},
                         {"rho", rho.str()},
                         {"theta", theta.str()},
                         {"hyp", cj(mellin)},
                         {"hyp_direct", cj(direct)},
                         {"f", pc.f},
                         {"K", cj(pc.lhs)},
                         {"identity_rhs", cj(pc.rhs)},
                         {"scale", pc.scale},
                         {"literal_residual", pc.literal_residual}};
            o.residual = std::max(std::abs(mellin - direct), pc.residual);
            o.tol = tol_or(1e-8);
            o.method = "mellin+direct";
            return o;
        };
    }
    // hd-check
    {
        auto* s = app.add_subcommand("hd-check", "Hasse-Davenport product relation for every character");
        static i64 a = 1;
        s->add_option("--a", a)->required();
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const GaussTable Gt(F);
            Outcome o;
            i64 worst = 0;
            for (i64 t = 0; t < i64(F.order()); ++t) {
                const double r = check_hasse_davenport(F, Gt, a, t);
                if (r > o.residual) {
                    o.residual = r;
                    worst = t;
                }
            }
            o.results = {{"a", a}, {"characters", F.order()}, {"worst_t", worst}};
            o.tol = tol_or(1e-9);
            o.method = "gauss table";
            return o;
        };
    }
    // prop-check
    {
        auto* s = app.add_subcommand("prop-check", "K against the scaled hypergeometric sum, all u");
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const GaussTable Gt(F);
            const auto t = need_triple();
            Outcome o;
            o.residual = prop_identity_max_residual(F, Gt, t.a, t.b, t.signed_c());
            o.results = {{"triple", triple_json(t)}, {"u_checked", F.order()}};
            o.tol = tol_or(1e-8);
            o.method = "naive table vs mellin";
            return o;
        };
    }
    // closed-form
    {
        auto* s = app.add_subcommand("closed-form", "induced K_{a,c,-c} and solvable K_{1,k-1,-k} closed forms");
        static std::string kind = "induced";
        static i64 a = 1, c = 1, k = 2, u = 0;
        s->add_option("--kind", kind)->check(CLI::IsMember({"induced", "solvable"}));
        s->add_option("--a", a);
        s->add_option("--c", c);
        s->add_option("--k", k);
        s->add_option("--u", u, "0 means every u");
        run[s->get_name()] = [] {
            const PrimeField F = field();
            Outcome o;
            json rows = json::array();
            const i64 lo = u ? u : 1, hi = u ? u : i64(F.order());
            for (i64 v = lo; v <= hi; ++v) {
                if (kind == "induced") {
                    const auto r = induced_closed_form(F, a, c, v);
                    o.residual = std::max(o.residual, r.residual);
                    rows.push_back({{"u", v}, {"value", cj(r.value)}, {"leading", cj(r.leading)},
                                    {"naive", cj(r.naive)}});
                } else {
                    const auto r = solvable_closed_form(F, k, v);
                    o.residual = std::max(o.residual, r.residual);
                    rows.push_back({{"u", v}, {"roots", r.roots}, {"value", cj(r.value)},
                                    {"naive", cj(r.naive)}});
                }
            }
            o.results = {{"kind", kind}, {"a", a}, {"c", c}, {"k", k}, {"rows", rows}};
            o.tol = tol_or(1e-9);
            o.method = "closed form vs enumeration";
            return o;
        };
    }
    // trilinear
    {
        auto* s = app.add_subcommand("trilinear", "trilinear sum of K with random unimodular coefficients");
        static u64 L = 8, M = 8, N = 8, seed = 1;
        s->add_option("--L", L);
        s->add_option("--M", M);
        s->add_option("--N", N);
        s->add_option("--seed", seed);
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const auto t = need_triple();
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> ph(0.0, 1.0);
            auto coeffs = [&](u64 n) {
                std::vector<cplx> v(n);
                for (auto& z : v)
                    z = expi2pi(ph(rng));
                return v;
            };
            const auto al = coeffs(L), be = coeffs(M), ga = coeffs(N);
            const auto K = k_table_spectral(F, t.a, t.b, t.signed_c());
            const auto r = trilinear_sum(F, K, t.a, t.b, t.signed_c(), i64(G.xi), al, L, be, M, ga, N);
            Outcome o;
            o.results = {{"value", cj(r.value)},     {"trivial_bound", r.trivial_bound},
                         {"ratio", r.ratio},         {"box_scale", r.box_scale},
                         {"exponent", r.exponent},   {"exceeds_modulus", r.exceeds_modulus}};
            o.method = "spectral table, mt19937_64 phases";
            return o;
        };
    }
    // classify
    {
        auto* s = app.add_subcommand("classify", "class of an exponent triple");
        run[s->get_name()] = [] {
            const auto t = need_triple();
            const auto inv = invariants(t.a, t.b, t.c);
            Outcome o;
            o.results = {{"triple", triple_json(t)},
                         {"class", class_name(classify(t))},
                         {"r", inv.r},
                         {"t", inv.t},
                         {"n", inv.n}};
            o.method = "definition";
            return o;
        };
    }
    // enumerate
    {
        auto* s = app.add_subcommand("enumerate", "triples (a,b,c) with a given n");
        static i64 n = 1;
        static std::string parity;
        static i64 gap = -1;
        static bool nonzero_gap = false;
        s->add_option("--n", n)->required();
        s->add_option("--parity", parity)->check(CLI::IsMember({"", "even"}));
        s->add_option("--rt-gap", gap, "keep |r-t| equal to this");
        s->add_flag("--nonzero-gap", nonzero_gap, "keep |r-t| != 0");
        run[s->get_name()] = [] {
            EnumFilter f;
            f.parity_even = parity == "even";
            if (gap >= 0)
                f.rt_gap = gap;
            f.nonzero_gap = nonzero_gap;
            const auto e = enumerate_n_equals(n, f);
            auto arr = [](const std::vector<Triple>& v) {
                json a = json::array();
                for (const auto& t : v)
                    a.push_back(json::array({t[0], t[1], t[2]}));
                return a;
            };
            Outcome o;
            o.results = {{"n", n},
                         {"sporadic", arr(e.sporadic)},
                         {"family", e.family},
                         {"family_examples", arr(e.family_examples)},
                         {"beyond_bounds", arr(e.beyond_bounds)},
                         {"search_b", e.search_b},
                         {"search_c", e.search_c}};
            std::ostringstream os;
            os << "a,b,c\n";
            for (const auto& t : e.sporadic)
                os << t[0] << ',' << t[1] << ',' << t[2] << '\n';
            o.csv = os.str();
            o.pass_override = e.beyond_bounds.empty();
            o.method = "exhaustive search to the proof bounds";
            return o;
        };
    }
    // count-box
    {
        auto* s = app.add_subcommand("count-box", "count (l,m,n) in (L,2L]x(M,2M]x(N,2N] with (l^a m^b n^c)^d = 1");
        static u64 L = 1, M = 1, N = 1;
        static double budget = double(default_work_budget);
        s->add_option("--L", L);
        s->add_option("--M", M);
        s->add_option("--N", N);
        s->add_option("--budget", budget);
        run[s->get_name()] = [&W] {
            const PrimeField F = field();
            BoxCountRequest r{F.q(), need_triple(), G.d, L, M, N, u64(budget)};
            const u64 cnt = count_box(F, r, *W);
            Outcome o;
            o.results = {{"count", cnt},
                         {"ratio", double(cnt) / std::sqrt(double(L) * double(M) * double(N))},
                         {"threshold", vanishing_threshold(F.q(), r.triple, G.d)},
                         {"below_threshold", below_threshold_anchor(r)},
                         {"work", box_work(dyadic(L), dyadic(M), dyadic(N))}};
            std::ostringstream os;
            os << "q,a,b,c,d,L,M,N,count,ratio\n"
               << F.q() << ',' << r.triple.a << ',' << r.triple.b << ',' << r.triple.signed_c()
               << ',' << G.d << ',' << L << ',' << M << ',' << N << ',' << cnt << ','
               << o.results["ratio"].get<double>() << '\n';
            o.csv = os.str();
            o.method = "bucketed by discrete log";
            return o;
        };
    }
    // conjp-scan
    {
        auto* s = app.add_subcommand("conjp-scan", "dyadic scan of count/sqrt(LMN) against the conjectured shape");
        static std::string grid = "dyadic";
        static u64 qmax = 0, dmax = 2;
        static double eta0 = 1.0 / 38.0, cap = 8, budget = double(default_work_budget);
        static std::vector<std::string> triples;
        s->add_option("--grid", grid)->check(CLI::IsMember({"dyadic"}));
        s->add_option("--qmax", qmax, "scan every prime in [q, qmax]; default just --q");
        s->add_option("--dmax", dmax);
        s->add_option("--eta0", eta0);
        s->add_option("--cap", cap);
        s->add_option("--budget", budget);
        s->add_option("--triples", triples, "several triples; default --triple");
        run[s->get_name()] = [&W] {
            const u64 q0 = need_q();
            std::vector<TripleSpec> ts;
            for (const auto& x : triples)
                ts.push_back(parse_triple(x));
            if (ts.empty())
                ts.push_back(need_triple());
            std::vector<u64> ds;
            for (u64 d = 1; d <= dmax; ++d)
                ds.push_back(d);
            Outcome o;
            bool pass = true;
            double mf = 0;
            u64 rows = 0, viol = 0;
            std::string csv;
            for (u64 q : qmax ? primes_between(q0, qmax + 1) : std::vector<u64>{q0}) {
                PrimeField F(q);
                const auto rep = conjp_ratio_scan(F, ts, ds, eta0, cap, *W, u64(budget));
                pass = pass && rep.pass;
                mf = std::max(mf, rep.max_factor);
                rows += rep.rows.size();
                viol += rep.threshold_violations;
                std::string part = scan_csv(rep);
                csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
            }
            o.results = {{"cells", rows}, {"max_factor", mf}, {"threshold_violations", viol},
                         {"eta0", eta0}};
            o.csv = csv;
            o.residual = mf;
            o.tol = cap;
            o.pass_override = pass;
            o.method = "bucketed box counts";
            return o;
        };
    }
    // avg-primes
    {
        auto* s = app.add_subcommand("avg-primes", "box count averaged over primes in [Q,2Q)");
        static u64 Q = 100, L = 8, M = 8, N = 8;
        static double budget = double(default_work_budget);
        s->add_option("--Q", Q)->required();
        s->add_option("--L", L);
        s->add_option("--M", M);
        s->add_option("--N", N);
        s->add_option("--budget", budget);
        run[s->get_name()] = [&W] {
            const auto a = average_over_primes(need_triple(), G.d, Q, L, M, N, u64(budget), *W);
            Outcome o;
            json rows = json::array();
            std::ostringstream os;
            os << "q,count,ratio\n";
            for (const auto& r : a.rows) {
                rows.push_back({{"q", r.q}, {"count", r.count}, {"ratio", r.ratio}});
                os << r.q << ',' << r.count << ',' << r.ratio << '\n';
            }
            o.results = {{"Q", Q},   {"primes", a.rows.size()}, {"mean_ratio", a.mean_ratio},
                         {"scale", a.scale}, {"C", a.C}, {"divisor_ok", a.divisor_ok},
                         {"rows", rows}};
            o.csv = os.str();
            o.pass_override = a.divisor_ok;
            o.method = "bucketed box counts";
            return o;
        };
    }
    // v-eval
    {
        auto* s = app.add_subcommand("v-eval", "AFE weight V(y) for a gamma profile");
        static std::string profile = "e";
        static int odd = -1;
        static double y = 1;
        s->add_option("--profile", profile, "e (no odd entries) or o (three odd entries)")
            ->check(CLI::IsMember({"e", "o"}));
        s->add_option("--odd-count", odd, "number of odd entries, overrides --profile")
            ->check(CLI::Range(0, 3));
        s->add_option("--y", y)->required()->check(CLI::PositiveNumber);
        run[s->get_name()] = [] {
            const int nu = odd >= 0 ? odd : (profile == "e" ? 0 : 3);
            VEvaluator ev(GammaProfile::with_odd_count(nu));
            const double v = ev(y);
            Outcome o;
            o.results = {{"y", y},
                         {"odd_count", nu},
                         {"V", v},
                         {"log_V", ev.log_value(y)},
                         {"yV'", ev.y_dv(y)},
                         {"sigma", ev.params().sigma},
                         {"T", ev.params().T},
                         {"panel", ev.params().panel}};
            // second contour as a quadrature check where it is meaningful
            if (y >= 1e-2 && y <= 1e3) {
                o.residual = std::abs(ev.contour(y, 1.5) - ev.contour(y, 3.0));
                o.results["sigma_gap"] = o.residual;
            }
            o.tol = tol_or(1e-10);
            o.method = "gauss-legendre on a vertical line";
            return o;
        };
    }
    // lvalue
    {
        auto* s = app.add_subcommand("lvalue", "L(1/2, chi_t)");
        static i64 t = 1;
        static double sre = 0.5;
        s->add_option("--t", t)->required();
        s->add_option("--s", sre, "real point s");
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const auto all = l_values(F, sre);
            const cplx v = all[floor_mod(t, F.order())];
            Outcome o;
            o.results = {{"t", t}, {"s", sre}, {"L", cj(v)}, {"even", char_is_even(F, t)}};
            if (sre == 0.5 && floor_mod(t, F.order()) != 0) {
                const cplx direct = l_central(F, t);
                o.residual = std::abs(direct - v);
                o.results["L_single"] = cj(direct);
            }
            o.tol = tol_or(1e-9);
            o.method = "hurwitz zeta, euler-maclaurin";
            return o;
        };
    }
    // afe-check
    {
        auto* s = app.add_subcommand("afe-check", "approximate functional equation for one character");
        static i64 t = 1;
        static double X = 0, xexp = 1.5;
        s->add_option("--t", t)->required();
        s->add_option("--X", X, "length X; default q^xexp");
        s->add_option("--xexp", xexp);
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const auto tr = need_triple();
            const double x = X > 0 ? X : std::pow(double(F.q()), xexp);
            const auto r = afe_check(F, t, tr, x);
            Outcome o;
            o.results = {{"t", t},
                         {"X", x},
                         {"Y", std::pow(double(F.q()), 3) / x},
                         {"lhs", cj(r.lhs)},
                         {"rhs", cj(r.rhs)},
                         {"profile", GammaProfile::of(tr, !char_is_even(F, t)).str()}};
            o.residual = r.residual;
            o.tol = tol_or(1e-6);
            o.method = "V via chebyshev table";
            return o;
        };
    }
    // moment
    {
        auto* s = app.add_subcommand("moment", "twisted cubic moment and its AFE decomposition");
        static std::string parity;
        static double delta = 0.25;
        static std::string components = "auto";
        s->add_option("--parity", parity, "e or o selects the reported value")
            ->check(CLI::IsMember({"", "e", "o"}));
        s->add_option("--delta", delta, "X = q^{2-delta}");
        s->add_option("--components", components, "auto (q <= 200), yes or no")
            ->check(CLI::IsMember({"auto", "yes", "no"}));
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const auto t = need_triple();
            const CentralValues L(F);
            const i64 di = i64(G.d);
            const TripleSpec td{t.a * di, t.b * di, t.c * di, t.negative};
            const auto P = moment_parts(F, L, td, G.xi);
            Outcome o;
            json r = {{"q", F.q()},
                      {"triple", triple_json(t)},
                      {"d", G.d},
                      {"xi", G.xi},
                      {"M", P.M.real()},
                      {"Me", P.Me.real()},
                      {"Mo", P.Mo.real()}};
            if (!parity.empty())
                r["value"] = parity == "e" ? P.Me.real() : P.Mo.real();
            double reality = std::max({std::abs(P.M.imag()), std::abs(P.Me.imag()),
                                       std::abs(P.Mo.imag())});
            r["imag_max"] = reality;
            o.residual = reality;
            try {
                const auto D = dseries_value(t);
                r["D"] = D.value;
                r["D_tail_bound"] = D.tail_bound;
            } catch (const Error& e) {
                r["D"] = nullptr;
                r["D_note"] = e.what();
            }
            if (G.d > 1 && G.xi == 1 && setwise_coprime(t.a, t.b, t.c)) {
                const auto dc = d_decomposition_check(F, L, t, G.d);
                r["d_decomposition"] = {{"dprime", dc.dprime}, {"residual", dc.residual}};
                o.residual = std::max(o.residual, dc.residual);
            }
            const bool comp = components == "yes" || (components == "auto" && F.q() <= 200);
            if (comp) {
                const auto a = afe_moment_check(F, td, G.xi, default_x(F.q(), delta));
                r["X"] = a.X;
                r["Y"] = a.Y;
                r["M1e"] = {a.M1e[0], a.M1e[1]};
                r["M1o"] = {a.M1o[0], a.M1o[1]};
                r["M2e"] = {cj(a.M2e[0]), cj(a.M2e[1])};
                r["M2o"] = {cj(a.M2o[0]), cj(a.M2o[1])};
                r["corr_e"] = cj(a.corr_e);
                r["corr_o"] = cj(a.corr_o);
                r["nongeneric"] = a.nongeneric;
                r["residuals"] = {{"afe_e", a.residual_e},
                                  {"afe_o", a.residual_o},
                                  {"m1_two_form", a.m1_residual},
                                  {"m2_two_form", a.m2_residual}};
                o.residual = std::max({o.residual, a.residual_e, a.residual_o, a.m1_residual,
                                       a.m2_residual});
                o.pass_override = std::min({a.M1e[0], a.M1e[1], a.M1o[0], a.M1o[1]}) >= 0;
            }
            o.results = r;
            o.tol = tol_or(1e-5);
            o.method = comp ? "direct character sum + AFE decomposition" : "direct character sum";
            return o;
        };
    }
    // dseries
    {
        auto* s = app.add_subcommand("dseries", "main term D_{a,b,-c}(s) with a rigorous tail bound");
        static double sre = 0.5, dtol = 1e-6;
        s->add_option("--s", sre);
        s->add_option("--dtol", dtol, "target tail bound (default --tol or 1e-6)");
        run[s->get_name()] = [] {
            const double want = tol_or(dtol);
            const auto D = dseries_value(need_triple(), sre, want);
            Outcome o;
            json c = json::array();
            for (std::size_t k = 0; k < std::min<std::size_t>(D.coeffs.size(), 25); ++k)
                c.push_back(D.coeffs[k]);
            o.results = {{"triple", triple_json(D.triple)}, {"s", D.s},
                         {"value", D.value},                {"tail_bound", D.tail_bound},
                         {"coeffs", c},                     {"zeta_exponents", D.exponents},
                         {"K0", D.K0},                      {"P", D.P}};
            o.residual = D.tail_bound;
            o.tol = want;
            o.pass_override = !D.triple.negative || D.value > 1;
            o.method = "zeta factorization + euler product";
            return o;
        };
    }
    // converge
    {
        auto* s = app.add_subcommand("converge", "M(q) against D over a range of primes");
        static u64 pmin = 101, pmax = 1009;
        static std::string csvpath;
        s->add_option("--pmin", pmin);
        s->add_option("--pmax", pmax);
        s->add_option("--csv", csvpath, "also write the per-prime table here");
        run[s->get_name()] = [&W] {
            const auto st = convergence_study(need_triple(), G.d, primes_between(pmin, pmax + 1), *W);
            if (!csvpath.empty()) {
                std::ofstream f(csvpath);
                if (!f)
                    fail(Errc::io, "cannot write " + csvpath);
                f << st.csv();
            }
            Outcome o;
            json rows = json::array();
            for (const auto& r : st.rows)
                rows.push_back({{"q", r.q}, {"M", r.M}, {"abs_err", r.err}});
            o.results = {{"D", st.D},
                         {"slope", st.slope},
                         {"avg_err_100_200", std::isnan(st.avg_low) ? json(nullptr) : json(st.avg_low)},
                         {"avg_err_1000_2000", std::isnan(st.avg_high) ? json(nullptr) : json(st.avg_high)},
                         {"rows", rows}};
            o.csv = st.csv();
            o.method = "direct character sums";
            return o;
        };
    }
    // nonvanish
    {
        auto* s = app.add_subcommand("nonvanish", "characters with all three central values nonzero");
        run[s->get_name()] = [] {
            const PrimeField F = field();
            const auto r = nonvanishing_count(F, need_triple());
            Outcome o;
            o.results = {{"q", r.q},
                         {"count", r.count},
                         {"borderline", r.borderline},
                         {"fourth_moments", {r.fourth[0], r.fourth[1], r.fourth[2]}},
                         {"holder_bound", r.holder_bound},
                         {"C4", r.C4},
                         {"threshold", 1e-8}};
            o.pass_override = double(r.count) >= r.holder_bound - 1e-9 && r.count <= F.order();
            o.method = "direct L-values";
            return o;
        };
    }
    // suite
    {
        auto* s = app.add_subcommand("suite", "acceptance, identities, lists or scan");
        static std::string name;
        static double budget = double(default_work_budget);
        static std::string csvdir = ".";
        s->add_option("name", name)->required();
        s->add_option("--budget", budget);
        s->add_option("--csv-dir", csvdir, "where CSV artifacts go");
        run[s->get_name()] = [&W] {
            SuiteOptions so;
            so.workers = W;
            so.budget = u64(budget);
            const auto r = run_suite(name, so);
            Outcome o;
            json items = json::array();
            std::ostringstream table;
            for (const auto& c : r.items) {
                items.push_back({{"id", c.id},
                                 {"name", c.name},
                                 {"pass", c.pass},
                                 {"measured", c.measured},
                                 {"tol", c.tol},
                                 {"seconds", c.seconds},
                                 {"detail", c.detail}});
                std::cerr << format_line(c) << "\n";
            }
            json files = json::array();
            for (const auto& [fname, body] : r.csv) {
                const std::string path = csvdir + "/" + fname;
                std::ofstream f(path);
                if (!f)
                    fail(Errc::io, "cannot write " + path);
                f << body;
                files.push_back(path);
            }
            o.results = {{"suite", name}, {"items", items}, {"csv", files}};
            o.pass_override = r.pass();
            o.method = "suite";
            return o;
        };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto* sub = app.get_subcommands().front();
    Workers workers(G.workers);
    W = &workers;

    // resolved configuration: every option with its value or default
    json config = json::object();
    auto echo = [&config](const CLI::App* a) {
        for (const auto* opt : a->get_options()) {
            if (opt->get_lnames().empty())
                continue;
            const std::string key = opt->get_lnames().front();
            if (key == "help")
                continue;
            if (opt->count() > 0) {
                const auto& res = opt->results();
                config[key] = res.size() == 1 ? json(res.front()) : json(res);
            } else {
                config[key] = opt->get_default_str();
            }
        }
    };
    echo(&app);
    echo(sub);
    if (config.contains("cache-dir"))
        config["cache-dir"] = G.cache_dir;

    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = run.at(sub->get_name())();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.residual <= o.tol && o.pass_override;
    config["tol"] = o.tol;

    json report = {{"schema", "tm/1"},
                   {"command", {{"name", sub->get_name()}, {"config", config}}},
                   {"results", o.results},
                   {"max_abs_residual", o.residual},
                   {"tol", o.tol},
                   {"pass", pass},
                   {"method", o.method},
                   {"wall_ms", ms}};

    std::string text;
    if (G.format == "json") {
        text = report.dump(2) + "\n";
    } else if (G.format == "csv") {
        if (!o.csv.empty()) {
            text = o.csv;
        } else {
            std::ostringstream os;
            flatten(report, "", os);
            text = "key,value\n";
            std::istringstream is(os.str());
            for (std::string line; std::getline(is, line);) {
                const auto p = line.find(": ");
                text += line.substr(0, p) + "," + line.substr(p + 2) + "\n";
            }
        }
    } else {
        std::ostringstream os;
        flatten(report, "", os);
        text = os.str();
    }
    if (G.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(G.out);
        if (!f) {
            std::cerr << "error: Io: cannot write " << G.out << "\n";
            return 2;
        }
        f << text;
    }
    return pass ? 0 : 1;
}
