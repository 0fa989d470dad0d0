#include "cmfield/bignum.hpp"
#include "cmfield/errors.hpp"
#include "cmfield/matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

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

} // namespace

TEST_CASE("rationals: frac and floor for negative values")
{
    CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
    CHECK(floor(Rational(-1, 3)) == -1);
    CHECK(frac(Rational(7, 2)) == Rational(1, 2));
    CHECK(floor(Rational(7, 2)) == 3);
    CHECK(frac(Rational(4)) == 0);
    CHECK(make_rational(Integer(6), Integer(-4)) == Rational(-3, 2));
    CHECK(kind_of([] { make_rational(Integer(1), Integer(0)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("BigReal agrees with long double on random arithmetic")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng), y = u(rng);
        if (std::fabs(y) < 1e-3) continue;
        const BigReal a(x, 256), b(y, 256);
        CHECK((a + b).to_double() == doctest::Approx(x + y).epsilon(1e-14));
        CHECK((a * b).to_double() == doctest::Approx(x * y).epsilon(1e-14));
        CHECK((a / b).to_double() == doctest::Approx(x / y).epsilon(1e-14));
    }
}

TEST_CASE("pi to 40 digits")
{
    const std::string s = BigReal::pi(256).to_string(40);
    CHECK(s.rfind("3.14159265358979323846264338327950288419", 0) == 0);
}

TEST_CASE("precision below the floor is raised to 64 bits")
{
    CHECK(BigReal(1L, 8).precision() >= kMinPrecision);
}

TEST_CASE("exp_pi_i is exact at quarter turns")
{
    const BigComplex i = exp_pi_i(Rational(1, 2), 128);
    CHECK(i.re().is_zero());
    CHECK(i.im() == BigReal(1L, 128));
    const BigComplex m1 = exp_pi_i(Rational(7), 128);
    CHECK(m1.re() == BigReal(-1L, 128));
    CHECK(m1.im().is_zero());
}

TEST_CASE("roots of unity: zeta_N^N = 1 and conjugate symmetry")
{
    for (long n = 2; n <= 30; ++n) {
        const BigComplex z = root_of_unity(n, 1, 256);
        const BigReal err = abs(pow(z, n) - BigComplex(1L, 256));
        CHECK(err < pow2(-240, 64));
        CHECK(abs(root_of_unity(n, -1, 256) - conj(z)) < pow2(-250, 64));
    }
}

TEST_CASE("cexp matches exp(a)(cos b + i sin b)")
{
    const BigComplex z(BigReal(0.75, 256), BigReal(-2.5, 256));
    const BigComplex e = cexp(z);
    CHECK(e.re().to_double() == doctest::Approx(std::exp(0.75) * std::cos(-2.5)).epsilon(1e-14));
    CHECK(e.im().to_double() == doctest::Approx(std::exp(0.75) * std::sin(-2.5)).epsilon(1e-14));
}

TEST_CASE("complex pow with negative exponent inverts")
{
    const BigComplex z(BigReal(1.5, 256), BigReal(0.25, 256));
    const BigComplex w = pow(z, -3) * pow(z, 3);
    CHECK(relative_error(w, BigComplex(1L, 256)) < pow2(-240, 64));
}

TEST_CASE("division by zero raises Range")
{
    CHECK(kind_of([] { (void)(BigComplex(1L, 128) / BigComplex(0L, 128)); }) == ErrorKind::Range);
}

TEST_CASE("round_to_integer")
{
    const BigReal tol = BigReal::parse("1e-8", 64);
    SUBCASE("near an integer")
    {
        const auto r = round_to_integer(BigReal::parse("2.99999999999", 256), tol);
        CHECK(r.value == 3);
        CHECK(r.residual < tol);
    }
    SUBCASE("negative")
    {
        CHECK(round_to_integer(BigReal::parse("-41.0000000000001", 256), tol).value == -41);
    }
    SUBCASE("half integer is always ambiguous")
    {
        CHECK(kind_of([&] { round_to_integer(BigReal::parse("2.5", 256), BigReal(1L, 64)); }) ==
              ErrorKind::AmbiguousRounding);
    }
    SUBCASE("residual above tolerance")
    {
        CHECK(kind_of([&] { round_to_integer(BigReal::parse("7.001", 256), tol); }) == ErrorKind::AmbiguousRounding);
    }
    SUBCASE("large values")
    {
        const Integer big("123456789012345678901234567890");
        CHECK(round_to_integer(BigReal(big, 512) + BigReal::parse("1e-30", 512), tol).value == big);
    }
}

TEST_CASE("GLMatModN: canonical sign is idempotent and picks the smaller of M and -M")
{
    std::mt19937_64 rng(5);
    for (std::int64_t n = 2; n <= 30; ++n) {
        std::uniform_int_distribution<std::int64_t> e(-3 * n, 3 * n);
        for (int i = 0; i < 30; ++i) {
            const std::int64_t a = e(rng), b = e(rng), c = e(rng), d = e(rng);
            const GLMatModN m(a, b, c, d, n), neg(-a, -b, -c, -d, n);
            CHECK(m == neg);
            CHECK(GLMatModN(m.a(), m.b(), m.c(), m.d(), n) == m);
            const std::array<std::int64_t, 4> p{mod(a, n), mod(b, n), mod(c, n), mod(d, n)};
            const std::array<std::int64_t, 4> q{mod(-a, n), mod(-b, n), mod(-c, n), mod(-d, n)};
            CHECK(m.entries() == std::min(p, q));
        }
    }
}

TEST_CASE("GLMatModN inverse and power")
{
    const GLMatModN m(1, 5, 3, 2, 12);
    CHECK(m.invertible());
    CHECK(m * m.inverse() == GLMatModN::identity(12));
    CHECK(power(m, 0) == GLMatModN::identity(12));
    CHECK(power(m, 3) == m * m * m);
    CHECK(!GLMatModN(2, 0, 0, 1, 12).invertible());
}

TEST_CASE("modular helpers")
{
    CHECK(mod(-7, 5) == 3);
    CHECK(mod(Integer(-7), 5) == 3);
    CHECK(inverse_mod(3, 7) == 5);
    CHECK(kind_of([] { inverse_mod(4, 8); }) == ErrorKind::InvalidArgument);
    CHECK(gcd64(-12, 18) == 6);
}
