#include "cmfield/verify.hpp"

#include "cmfield/errors.hpp"
#include "cmfield/galois.hpp"
#include "cmfield/invariants.hpp"
#include "cmfield/modfunc.hpp"
#include "cmfield/quadforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace cmf {

namespace {

constexpr std::uint64_t kSeed = 0x5eed'c0de'2024ULL;

// Direct q-product at an arbitrary (unreduced) index; shares nothing with siegel_value beyond BigComplex.
BigComplex naive_siegel(const Rational& r1, const Rational& r2, const BigComplex& tau, Bits prec)
{
    const Bits wp = prec + 64;
    const BigReal pi = BigReal::pi(wp);
    const BigComplex two_pi_i(BigReal(0L, wp), pi * 2L);
    const BigComplex t = tau.with_precision(wp);
    const BigComplex q = cexp(two_pi_i * t);
    const BigComplex qz = cexp(two_pi_i * (t * BigReal(r1, wp) + BigComplex(BigReal(r2, wp))));
    const BigComplex qz_inv = BigComplex(1L, wp) / qz;
    const Rational b2 = r1 * r1 - r1 + Rational(1, 6);
    BigComplex lead = cexp(BigComplex(BigReal(0L, wp), pi) * (t * BigReal(b2, wp)));
    lead = -(lead * cexp(BigComplex(BigReal(0L, wp), pi * BigReal(Rational(r2 * (r1 - 1)), wp))));

    const double im = tau.im().to_double();
    const double shift = std::fabs(r1.get_d());
    const long terms = static_cast<long>(static_cast<double>(wp) * std::log(2.0) / (2.0 * M_PI * im) + shift) + 3;
    const BigComplex one(1L, wp);
    BigComplex prod = one - qz, qn = q;
    for (long n = 1; n <= terms; ++n) {
        prod = prod * (one - qn * qz) * (one - qn * qz_inv);
        qn = qn * q;
    }
    return lead * prod;
}

BigComplex mobius(const IntMat2& g, const BigComplex& tau)
{
    const Bits wp = tau.precision();
    auto r = [&](const Integer& x) { return BigComplex(BigReal(x, wp)); };
    return (r(g.a) * tau + r(g.b)) / (r(g.c) * tau + r(g.d));
}

std::string sci(const BigReal& x) { return x.with_precision(64).to_string(4); }

CheckResult translation_check(Bits prec, int cases)
{
    std::mt19937_64 rng(kSeed);
    BigReal worst(0L, 64);
    for (int i = 0; i < cases; ++i) {
        const long den = std::uniform_int_distribution<long>(2, 24)(rng);
        long a = std::uniform_int_distribution<long>(0, den - 1)(rng);
        long b = std::uniform_int_distribution<long>(0, den - 1)(rng);
        if (a == 0 && b == 0) b = 1;
        const long s1 = std::uniform_int_distribution<long>(-3, 3)(rng);
        const long s2 = std::uniform_int_distribution<long>(-3, 3)(rng);
        const double y = std::uniform_real_distribution<double>(0.6, 3.0)(rng);
        const double x = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
        BigComplex tau(BigReal(x, prec), BigReal(y, prec));
        EvalContext ctx = make_context(tau, prec);
        Rational r1 = make_rational(a, den), r2 = make_rational(b, den);
        BigComplex lhs = naive_siegel(r1 + s1, r2 + s2, tau, prec);
        BigComplex rhs = siegel_translation_factor(r1, r2, s1, s2, prec) * siegel_value(SiegelIndex(r1, r2), ctx);
        worst = max(worst, relative_error(lhs, rhs).with_precision(64));
    }
    return {"translation rule g_{r+s} = c(r, s) g_r", worst < BigReal::parse("1e-40", 64),
            std::to_string(cases) + " cases, max relative error " + sci(worst)};
}

CheckResult sl2_check(Bits prec, int cases)
{
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_int_distribution<long> entry(-20, 20);
    BigReal worst(0L, 64);
    for (int i = 0; i < cases;) {
        IntMat2 g{entry(rng), entry(rng), entry(rng), entry(rng)};
        if (g.det() != 1 || abs(g.c) > 7) continue;
        const long den = std::uniform_int_distribution<long>(2, 24)(rng);
        long a = std::uniform_int_distribution<long>(0, den - 1)(rng);
        long b = std::uniform_int_distribution<long>(0, den - 1)(rng);
        if (a == 0 && b == 0) a = 1;
        // Keep Im(tau) and Im(g tau) at least 0.1.
        BigComplex tau(prec);
        if (g.c == 0) {
            tau = BigComplex(BigReal(std::uniform_real_distribution<double>(-0.5, 0.5)(rng), prec),
                             BigReal(std::uniform_real_distribution<double>(0.6, 3.0)(rng), prec));
        } else {
            const double c = g.c.get_d();
            const double ymax = std::min(3.0, 10.0 / (c * c));
            const double y = std::uniform_real_distribution<double>(0.1, ymax)(rng);
            const double span = std::sqrt(std::max(0.0, 10.0 * y / (c * c) - y * y));
            const double delta = std::uniform_real_distribution<double>(-span, span)(rng);
            tau = BigComplex(BigReal(make_rational(Integer(-g.d), g.c), prec) + BigReal(delta, prec), BigReal(std::max(y, 0.1), prec));
        }
        BigComplex gtau = mobius(g, tau.with_precision(prec + 32)).with_precision(prec);
        if (gtau.im().to_double() < 0.1) continue;
        Rational r1 = make_rational(a, den), r2 = make_rational(b, den);
        Rational s1 = r1 * Rational(g.a) + r2 * Rational(g.c);
        Rational s2 = r1 * Rational(g.b) + r2 * Rational(g.d);
        if (s1.get_den() == 1 && s2.get_den() == 1) continue;
        ++i;
        BigComplex lhs = pow(naive_siegel(r1, r2, gtau, prec), 12);
        BigComplex rhs = pow(naive_siegel(s1, s2, tau, prec), 12);
        worst = max(worst, relative_error(lhs, rhs).with_precision(64));
    }
    return {"g_r^12(gamma tau) = g_{r gamma}^12(tau)", worst < BigReal::parse("1e-40", 64),
            std::to_string(cases) + " cases, max relative error " + sci(worst)};
}

CheckResult delta_identity_check(Bits prec, int per_n)
{
    std::mt19937_64 rng(kSeed + 2);
    BigReal worst(0L, 64);
    bool n1_exact = true;
    for (std::int64_t n = 1; n <= 8; ++n) {
        for (int i = 0; i < per_n; ++i) {
            BigComplex tau(BigReal(std::uniform_real_distribution<double>(-0.5, 0.5)(rng), prec),
                           BigReal(std::uniform_real_distribution<double>(0.6, 3.0)(rng), prec));
            EvalContext ctx = make_context(tau, prec);
            BigComplex dq = delta_quotient(n, ctx);
            if (n == 1) {
                n1_exact = n1_exact && dq.re() == BigReal(1L, 64) && dq.im().is_zero();
                continue;
            }
            BigComplex prod(1L, prec);
            for (std::int64_t w = 1; w < n; ++w) prod = prod * pow(naive_siegel(0, make_rational(w, n), tau, prec), 12);
            worst = max(worst, relative_error(prod, dq).with_precision(64));
        }
    }
    return {"prod_w g^12_{(0,w/N)} = N^12 Delta(N tau) / Delta(tau), N <= 8",
            n1_exact && worst < BigReal::parse("1e-40", 64),
            "max relative error " + sci(worst) + (n1_exact ? ", N = 1 exact" : ", N = 1 not exact")};
}

CheckResult frobenius_check(Bits prec, int cases)
{
    std::mt19937_64 rng(kSeed + 3);
    BigReal worst(0L, 64);
    for (int i = 0; i < cases; ++i) {
        AbelianGroupSpec g;
        long order = 1;
        const int factors = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int k = 0; k < factors; ++k) {
            long n = std::uniform_int_distribution<long>(1, 6)(rng);
            if (order * n > 16) break;
            g.orders.push_back(n);
            order *= n;
        }
        if (g.orders.empty()) g.orders.push_back(2);
        std::vector<BigComplex> f;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (long k = 0; k < g.order(); ++k) f.emplace_back(BigReal(u(rng), prec), BigReal(u(rng), prec));
        worst = max(worst, relative_error(frobenius_lhs(g, f), frobenius_rhs(g, f)).with_precision(64));
    }
    return {"Frobenius determinant relation on random groups of order <= 16", worst < BigReal::parse("1e-25", 64),
            std::to_string(cases) + " groups, max relative error " + sci(worst)};
}

std::vector<std::int64_t> fundamental_discriminants(std::int64_t lo, std::int64_t hi)
{
    std::vector<std::int64_t> out;
    for (std::int64_t d = hi; d >= lo; --d)
        if (d != -3 && d != -4 && is_fundamental_discriminant(d)) out.push_back(d);
    return out;
}

CheckResult forms_check()
{
    int bad = 0, total = 0;
    for (std::int64_t d : fundamental_discriminants(-400, -7)) {
        for (const auto& q : reduced_forms(d)) {
            ++total;
            if (!is_reduced(q) || q.discriminant() != d) ++bad;
        }
    }
    const std::vector<std::pair<std::int64_t, std::int64_t>> known{{-7, 1},  {-8, 1},  {-15, 2}, {-20, 2}, {-23, 3},
                                                                   {-43, 1}, {-47, 5}, {-52, 2}, {-71, 7}, {-163, 1}};
    int wrong_h = 0;
    for (auto [d, h] : known)
        if (make_field(d).class_number != h) ++wrong_h;
    return {"reduced forms are reduced, primitive and of the right discriminant", bad == 0 && wrong_h == 0,
            std::to_string(total) + " forms, " + std::to_string(bad) + " bad, " + std::to_string(wrong_h) +
                " class numbers off"};
}

CheckResult conjugate_count_check()
{
    int cases = 0, bad = 0;
    std::string first_bad;
    for (std::int64_t d : fundamental_discriminants(-100, -7)) {
        ImQuadField f = make_field(d);
        for (std::int64_t n = 2; n <= 12; ++n) {
            ++cases;
            auto specs = conjugate_specs(f, n, default_base_family(n));
            auto dd = degree_data(f, n);
            bool ok = Integer(static_cast<long>(specs.size())) == dd.ring_over_k &&
                      Integer(static_cast<long>(w_cosets_ring(f, n).size())) == dd.ring_over_hilbert &&
                      Integer(static_cast<long>(w_group(f, n).size())) == dd.ray_over_hilbert;
            if (!ok && bad++ == 0) first_bad = "d_K = " + std::to_string(d) + ", N = " + std::to_string(n);
        }
    }
    return {"conjugate, coset and W counts match the degree formulas", bad == 0,
            std::to_string(cases) + " (d_K, N) pairs" + (bad ? ", first mismatch at " + first_bad : "")};
}

// Index sets of the 16 conjugates, numerators over 12, first eight at sqrt(-5), the rest at (-1 + sqrt(-5)) / 2.
const std::vector<std::array<int, 4>>& example_table()
{
    static const std::vector<std::array<int, 4>> t{
        {0, 1, 0, 5},  {6, 1, 6, 5},  {3, 2, 3, 10},  {2, 3, 10, 3}, {4, 3, 8, 3},   {3, 4, 3, 8},
        {1, 6, 5, 6},  {1, 0, 5, 0},  {3, 2, 3, 10},  {9, 8, 9, 4},  {9, 7, 9, 11},  {11, 4, 7, 8},
        {1, 2, 5, 10}, {3, 11, 3, 7}, {7, 5, 11, 1},  {1, 5, 5, 1}};
    return t;
}

using IndexKey = std::pair<std::int64_t, std::int64_t>;

// r and -r are identified.
IndexKey sym_key(std::int64_t a, std::int64_t b)
{
    IndexKey x{mod(a, 12), mod(b, 12)}, y{mod(-a, 12), mod(-b, 12)};
    return std::min(x, y);
}

std::vector<std::multiset<IndexKey>> example_sets(bool second_form)
{
    std::vector<std::multiset<IndexKey>> out;
    const auto& t = example_table();
    for (size_t i = second_form ? 8 : 0; i < (second_form ? 16u : 8u); ++i)
        out.push_back({sym_key(t[i][0], t[i][1]), sym_key(t[i][2], t[i][3])});
    std::sort(out.begin(), out.end());
    return out;
}

CheckResult example_conjugates_check()
{
    ImQuadField f = make_field(-20);
    auto specs = conjugate_specs(f, 12, default_base_family(12));
    std::vector<std::multiset<IndexKey>> mine[2];
    for (const auto& s : specs) {
        std::multiset<IndexKey> set;
        for (const auto& [r, e] : s.family.exponents) {
            Rational a = r.r1() * 12L, b = r.r2() * 12L;
            set.insert(sym_key(a.get_num().get_si(), b.get_num().get_si()));
        }
        mine[s.form.a == 1 ? 0 : 1].push_back(set);
    }
    std::sort(mine[0].begin(), mine[0].end());
    std::sort(mine[1].begin(), mine[1].end());
    bool ok = mine[0] == example_sets(false) && mine[1] == example_sets(true);
    return {"conjugate index sets for d_K = -20, N = 12 match the reference table", ok,
            std::to_string(specs.size()) + " conjugates"};
}

CheckResult example_polynomial_check(Bits prec, bool& unit)
{
    ImQuadField f = make_field(-20);
    InvariantReport rep = minimal_polynomial(f, 12, default_base_family(12), std::max<Bits>(prec, 512));
    const auto& ref = reference_polynomial_d20_n12();
    bool ok = rep.polynomial.coeffs.size() == ref.size();
    int mismatches = 0;
    for (size_t k = 0; ok && k < ref.size(); ++k)
        if (rep.polynomial.coeffs[k] != Integer(ref[k])) ++mismatches;
    ok = ok && mismatches == 0 && rep.polynomial.max_residual < rounding_tolerance();
    unit = unit_check(rep.polynomial);
    return {"degree-16 polynomial for d_K = -20, N = 12 reproduced exactly", ok,
            std::to_string(mismatches) + " coefficient mismatches, residual " + sci(rep.polynomial.max_residual)};
}

} // namespace

const std::vector<std::string>& reference_polynomial_d20_n12()
{
    static const std::vector<std::string> c{
        "1",
        "-2550974942476760820051136",
        "238110589893565910129238086200",
        "-2249102100642965467076167124913280",
        "5677583625730635496464554293769775900",
        "-31984181681760551803330979365226550023488",
        "-17410059883612682120508988571419246981752",
        "-9155763998650223557795196487031471321600",
        "167117715935951295057696524156063178310",
        "-464728779160514526974626326247201600",
        "813690304957218006590231416378248",
        "-1478170408753689677872738383488",
        "1635793922011311753339695900",
        "-989798760399582851353280",
        "218685334974106886200",
        "-1597283771136",
        "1"};
    return c;
}

const std::vector<std::string>& verify_suites()
{
    static const std::vector<std::string> s{"identities", "frobenius", "forms", "paper-example", "all"};
    return s;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, Bits prec)
{
    if (std::find(verify_suites().begin(), verify_suites().end(), suite) == verify_suites().end())
        throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
    const bool all = suite == "all";
    const Bits wp = std::max<Bits>(prec, 256);
    std::vector<CheckResult> out;
    if (all || suite == "identities") {
        out.push_back(translation_check(wp, 50));
        out.push_back(sl2_check(wp, 50));
        out.push_back(delta_identity_check(wp, 3));
    }
    if (all || suite == "frobenius") out.push_back(frobenius_check(std::max<Bits>(prec, 128), 50));
    if (all || suite == "forms") {
        out.push_back(forms_check());
        out.push_back(conjugate_count_check());
    }
    if (all || suite == "paper-example") {
        bool unit = false;
        out.push_back(example_conjugates_check());
        out.push_back(example_polynomial_check(prec, unit));
        out.push_back({"constant term is a unit", unit, unit ? "constant term 1" : "constant term not +-1"});
    }
    return out;
}

} // namespace cmf
