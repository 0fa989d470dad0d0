#include "cmfield/errors.hpp"
#include "cmfield/invariants.hpp"
#include "cmfield/verify.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace cmf;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no cmf::Error thrown");
    return ErrorKind::InvalidArgument;
}

IntPolynomial poly(std::initializer_list<long> c)
{
    IntPolynomial p;
    for (long v : c) p.coeffs.emplace_back(v);
    return p;
}

// Reference degree-16 polynomial for d_K = -20, N = 12, low to high.
const std::vector<std::string>& reference_d20()
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

} // namespace

TEST_CASE("default base family")
{
    const IndexFamily f = default_base_family(12);
    CHECK(f.level == 12);
    CHECK(f.exponents.size() == 2);
    for (const auto& [r, e] : f.exponents) CHECK(e == 24);
    CHECK(default_base_family(2).exponents.size() == 1);
    CHECK(default_base_family(7, 2).exponents.begin()->second == 2 * 84);
}

TEST_CASE("unit and square-free checks")
{
    CHECK(!unit_check(poly({-2, 1})));
    CHECK(unit_check(poly({1, 1})));
    CHECK(unit_check(poly({-1, 0, 3, 1})));
    CHECK(is_square_free(poly({-2, 1})));
    CHECK(!is_square_free(poly({1, 2, 1})));    // (X + 1)^2
    CHECK(is_square_free(poly({-1, 0, 1})));
    CHECK(!is_square_free(poly({0, 0, -1, 1})));  // X^2 (X - 1)
}

TEST_CASE("polynomial from a single real root rounds to X - round(v)")
{
    const BigComplex v(BigReal::parse("41.0000000000000000001", 256), BigReal::parse("1e-40", 256));
    const IntPolynomial p = polynomial_from_conjugates({v}, rounding_tolerance());
    CHECK(p.degree() == 1);
    CHECK(p.coeffs[0] == -41);
    CHECK(p.coeffs[1] == 1);
    CHECK(p.max_residual < rounding_tolerance());
}

TEST_CASE("ambiguous rounding is reported")
{
    const BigComplex a(BigReal(0.3, 256), BigReal(0L, 256));
    CHECK(kind_of([&] { polynomial_from_conjugates({a}, rounding_tolerance()); }) == ErrorKind::AmbiguousRounding);
    const BigComplex b(BigReal(2L, 256), BigReal(0.5, 256));
    CHECK(kind_of([&] { polynomial_from_conjugates({b}, rounding_tolerance()); }) == ErrorKind::AmbiguousRounding);
}

TEST_CASE("evaluate")
{
    const IntPolynomial p = poly({-6, 11, -6, 1});
    CHECK(evaluate(p, BigComplex(2L, 128)).is_zero());
    CHECK(relative_error(evaluate(p, BigComplex(4L, 128)), BigComplex(6L, 128)) < pow2(-100, 64));
}

TEST_CASE("ring class invariant matches the direct product and is real")
{
    const auto k = make_field(-43);
    const BigComplex v = ring_class_invariant(k, 2, 256);
    const BigComplex t = theta(k, 256);
    const BigComplex want = pow(oracle::siegel(Rational(0), Rational(1, 2), t, 256), 12);
    CHECK(relative_error(v, want) < pow2(-150, 64));
    CHECK(abs(v.im()) / abs(v) < pow2(-200, 64));
    CHECK(kind_of([&] { ring_class_invariant(k, 3, 256); }) == ErrorKind::ConditionViolated);
    CHECK(kind_of([] { ring_class_invariant(make_field(-20), 12, 256); }) == ErrorKind::ConditionViolated);
}

TEST_CASE("minimal polynomial for d_K = -20, N = 12 reproduces the reference coefficients")
{
    const auto k = make_field(-20);
    const InvariantReport rep = minimal_polynomial(k, 12, default_base_family(12), 512);
    REQUIRE(rep.polynomial.coeffs.size() == reference_d20().size());
    for (size_t i = 0; i < reference_d20().size(); ++i) CHECK(rep.polynomial.coeffs[i] == Integer(reference_d20()[i]));
    CHECK(reference_polynomial_d20_n12() == reference_d20());
    CHECK(rep.polynomial.max_residual < rounding_tolerance());
    CHECK(rep.is_unit);
    CHECK(rep.square_free);
    CHECK(rep.expected_degree == 16);
    CHECK(rep.conjugates.size() == 16);

    // The invariant built from the independent product is a root.
    const BigComplex t = theta(k, 512);
    const BigComplex x = pow(oracle::siegel(Rational(0), Rational(1, 12), t, 512), 24) *
                         pow(oracle::siegel(Rational(0), Rational(5, 12), t, 512), 24);
    CHECK(abs(evaluate(rep.polynomial, x)) / pow(BigComplex(BigReal(1L, 512) + abs(x)), 16).re() <
          pow2(-300, 64));
}

TEST_CASE("minimal polynomial for d_K = -43, N = 2")
{
    const auto k = make_field(-43);
    const InvariantReport rep = minimal_polynomial(k, 2, default_base_family(2), 256);
    const std::vector<Integer> want{4096, Integer("884736768"), 48, 1};
    CHECK(rep.polynomial.coeffs == want);
    CHECK(!rep.is_unit);
    CHECK(rep.square_free);
    const BigComplex x = pow(oracle::siegel(Rational(0), Rational(1, 2), theta(k, 256), 256), 12);
    const BigReal scale = BigReal(884736768L, 256) * pow(BigComplex(BigReal(1L, 256) + abs(x)), 3).re();
    CHECK(abs(evaluate(rep.polynomial, x)) / scale < pow2(-150, 64));
}

TEST_CASE("delta invariant and its consistency with the Siegel product")
{
    for (auto [d, p, l] : {std::tuple{-43L, 3L, 1}, std::tuple{-8L, 3L, 1}, std::tuple{-43L, 2L, 1}}) {
        const auto rep = delta_consistency(make_field(d), p, l, 512);
        CHECK(rep.relative_error < oracle::tol("1e-30"));
    }
    const auto k = make_field(-43);
    const BigComplex t = theta(k, 512);
    const BigComplex want = oracle::delta_quotient(3, t, 512);
    CHECK(relative_error(delta_ring_class_invariant(k, 3, 1, 512), want) < pow2(-300, 64));
    CHECK(kind_of([] { delta_ring_class_invariant(make_field(-8), 3, 1, 256); }) == ErrorKind::SplitPrime);
}

TEST_CASE("Siegel-Ramachandra invariant")
{
    const auto k = make_field(-47);
    const BigComplex t = theta(k, 256);
    for (std::int64_t n : {2, 3, 5}) {
        const BigComplex want = pow(oracle::siegel(Rational(0), Rational(1, n), t, 256), 12 * n);
        CHECK(relative_error(siegel_ramachandra_unit_class(k, n, 256), want) < pow2(-150, 64));
    }
}

TEST_CASE("normal basis certificates at N = 2")
{
    for (auto [d, count] : {std::pair{-43L, 3u}, std::pair{-47L, 5u}, std::pair{-52L, 4u}}) {
        const auto rep = normal_basis_certificate(make_field(d), 2, 256);
        CHECK(rep.magnitudes.size() == count);
        CHECK(rep.ratios.size() == count - 1);
        for (const auto& r : rep.ratios) CHECK(r < BigReal(1L, 64));
        CHECK(rep.margin > BigReal(0L, 64));
        CHECK(rep.exponent.has_value());
    }
    CHECK(kind_of([] { normal_basis_certificate(make_field(-20), 2, 256); }) == ErrorKind::ConditionViolated);
}
