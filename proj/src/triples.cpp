#include "tmq/triples.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "tmq/error.hpp"

namespace tmq {

std::string TripleSpec::str() const
{
    std::ostringstream os;
    os << a << "," << b << "," << (negative ? "-" : "") << c;
    return os.str();
}

TripleSpec parse_triple(const std::string& text)
{
    std::vector<i64> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            i64 x = std::stoll(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            v.push_back(x);
        } catch (const std::exception&) {
            fail(Errc::usage, "bad triple '" + text + "'");
        }
    }
    if (v.size() != 3 || v[0] <= 0 || v[1] <= 0 || v[2] == 0)
        fail(Errc::usage, "triple must look like a,b,c or a,b,-c with a,b >= 1: '" + text + "'");
    TripleSpec t;
    t.a = v[0];
    t.b = v[1];
    t.c = std::abs(v[2]);
    t.negative = v[2] < 0;
    return t;
}

const char* class_name(TripleClass c)
{
    switch (c) {
    case TripleClass::galant: return "galant";
    case TripleClass::oxozonic: return "oxozonic";
    case TripleClass::sulfatic: return "sulfatic";
    case TripleClass::induced: return "induced";
    case TripleClass::solvable: return "solvable";
    }
    return "?";
}

bool setwise_coprime(i64 a, i64 b, i64 c)
{
    return std::gcd(std::gcd(a, b), c) == 1;
}

TripleInvariants invariants(i64 a, i64 b, i64 c)
{
    if (a < 1 || b < 1 || c < 1)
        fail(Errc::usage, "exponents must be positive");
    if (!setwise_coprime(a, b, c))
        fail(Errc::not_setwise_coprime, std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c));
    TripleInvariants inv;
    inv.r = a + b - std::gcd(a, c) - std::gcd(b, c) + 1;
    inv.t = c - std::gcd(a, c) - std::gcd(b, c) + 1;
    inv.n = std::max(inv.r, inv.t);
    return inv;
}

TripleClass classify(const TripleSpec& s)
{
    auto inv = invariants(s.a, s.b, s.c);
    if (!s.negative)
        return s.a + s.b + s.c == 4 ? TripleClass::oxozonic : TripleClass::galant;
    if (s.c == s.a || s.c == s.b)
        return TripleClass::induced;
    if (s.a + s.b == s.c && s.c >= 2 && s.c <= 4)
        return TripleClass::solvable;
    if ((s.a + s.b + s.c) % 2 == 0 && inv.n == 4) {
        i64 lo = std::min(s.a, s.b), hi = std::max(s.a, s.b);
        if (lo == 1 && hi == 2 && s.c == 5)
            return TripleClass::sulfatic;
        if ((lo == 1 && hi == 4 && s.c == 3) || (lo == 1 && hi == 6 && s.c == 3) ||
            (lo == 2 && hi == 3 && s.c == 1))
            return TripleClass::oxozonic;
    }
    return TripleClass::galant;
}

Enumeration enumerate_n_equals(i64 n0, const EnumFilter& f)
{
    if (n0 < 1)
        fail(Errc::usage, "n0 must be at least 1");
    Enumeration out;
    out.n0 = n0;
    out.b_bound = std::max(n0 + 1, 2 * (n0 - 1));
    out.c_bound_slope = 2;  // c <= n0 + 2b - 1
    const i64 margin = 2;
    out.search_b = out.b_bound + margin;
    i64 gap_c = f.rt_gap ? 5 * n0 - 3 : 0;
    out.search_c = std::max(n0 + 2 * out.search_b - 1, gap_c) + margin;

    for (i64 a = 1; a <= out.search_b; ++a)
        for (i64 b = a; b <= out.search_b; ++b) {
            i64 cmax = std::max(n0 + 2 * b - 1, gap_c) + margin;
            for (i64 c = 1; c <= cmax; ++c) {
                if (!setwise_coprime(a, b, c))
                    continue;
                auto inv = invariants(a, b, c);
                if (inv.n != n0)
                    continue;
                if (f.parity_even && (a + b - c) % 2 != 0)
                    continue;
                i64 gap = std::abs(inv.r - inv.t);
                if (f.rt_gap && gap != *f.rt_gap)
                    continue;
                if (f.nonzero_gap && gap == 0)
                    continue;
                if (a == n0 && b == c) {
                    out.family = true;
                    if (out.family_examples.size() < 4)
                        out.family_examples.push_back({a, b, c});
                    continue;
                }
                Triple t{a, b, c};
                bool outside = b > out.b_bound || c > n0 + 2 * b - 1;
                if (f.rt_gap && *f.rt_gap == 6)
                    outside = outside || b > 2 * (n0 - 1) || c > 5 * n0 - 3;
                if (outside)
                    out.beyond_bounds.push_back(t);
                else
                    out.sporadic.push_back(t);
            }
        }
    std::sort(out.sporadic.begin(), out.sporadic.end());
    return out;
}

std::pair<CharMultiset, CharMultiset> char_multisets(const PrimeField& F, i64 a, i64 b, i64 c)
{
    const i64 n = F.order();
    for (i64 e : {a, b, c})
        if (e <= 0 || n % e != 0)
            fail(Errc::divisibility_violated,
                 "exponent " + std::to_string(e) + " does not divide q-1=" + std::to_string(n));
    const i64 gac = std::gcd(a, c), gbc = std::gcd(b, c);
    // chi_t has rho^m = 1 iff m*t = 0 mod n
    auto killed_by = [n](i64 t, i64 m) { return (m * t) % n == 0; };
    std::vector<i64> rho{0}, theta;
    const auto ra = CharMultiset::roots(n, a), rb = CharMultiset::roots(n, b),
               rc = CharMultiset::roots(n, c);
    for (i64 t : ra.items())
        if (!killed_by(t, gac))
            rho.push_back(t);
    for (i64 t : rb.items())
        if (!killed_by(t, gbc))
            rho.push_back(t);
    for (i64 t : rc.items())
        if (!killed_by(t, gac) && !killed_by(t, gbc))
            theta.push_back(t);
    return {CharMultiset(n, rho), CharMultiset(n, theta)};
}

bool kummer_induced_by(const CharMultiset& rho, i64 d)
{
    const i64 n = rho.modulus();
    if (d < 2 || n % d != 0 || static_cast<i64>(rho.size()) % d != 0)
        return false;
    return rho.translate(n / d) == rho;
}

namespace {

// {lambda : d * lambda = alpha mod n}, empty unless it has exactly d members
std::vector<i64> root_set(i64 n, i64 d, i64 alpha)
{
    std::vector<i64> out;
    if (n % d != 0 || alpha % d != 0)
        return out;
    for (i64 j = 0; j < d; ++j)
        out.push_back(alpha / d + j * (n / d));
    return out;
}

void belyi_search(const CharMultiset& rho, const CharMultiset& theta, std::vector<BelyiWitness>& out)
{
    const i64 n = rho.modulus();
    const i64 r = static_cast<i64>(rho.size());
    if (r < 2 || static_cast<i64>(theta.size()) != r)
        return;
    // theta must be all r-th roots of gamma = alpha * beta
    const i64 gamma = floor_mod(r * theta.items()[0], n);
    if (!(CharMultiset(n, root_set(n, r, gamma)) == theta))
        return;
    std::set<i64> distinct(rho.items().begin(), rho.items().end());
    for (i64 d = 1; d < r; ++d) {
        const i64 e = r - d;
        std::set<i64> tried;
        for (i64 lam : distinct) {
            const i64 alpha = floor_mod(d * lam, n);
            if (!tried.insert(alpha).second)
                continue;
            const i64 beta = floor_mod(gamma - alpha, n);
            if (beta == 0)
                continue;
            auto sa = root_set(n, d, alpha), sb = root_set(n, e, beta);
            if (sa.empty() || sb.empty())
                continue;
            sa.insert(sa.end(), sb.begin(), sb.end());
            if (CharMultiset(n, sa) == rho)
                out.push_back({alpha, beta, d, e});
        }
    }
}

}  // namespace

InductionFlags kummer_belyi_flags(const CharMultiset& rho, const CharMultiset& theta)
{
    InductionFlags f;
    const i64 n = rho.modulus();
    const i64 r = static_cast<i64>(rho.size()), t = static_cast<i64>(theta.size());
    for (i64 d = 2; d <= std::max<i64>(r, 2); ++d) {
        if (r % d != 0 || t % d != 0 || n % d != 0)
            continue;
        bool theta_ok = theta.empty() || kummer_induced_by(theta, d);
        if (kummer_induced_by(rho, d) && theta_ok)
            f.kummer_divisors.push_back(d);
    }
    belyi_search(rho, theta, f.belyi);
    belyi_search(theta, rho, f.belyi_swapped);
    return f;
}

}  // namespace tmq
