#include "cmfield/errors.hpp"
#include "cmfield/galois.hpp"
#include "cmfield/rayclass.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <set>
#include <tuple>

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

Integer ipow(long b, long e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
    return r;
}

bool divides(const Integer& d, const Integer& v) { return mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t()) != 0; }

// (p, m, l, n)
const std::vector<std::tuple<long, long, long, long>> kHensel{{5, 1, 1, 2}, {5, 1, 1, 3}, {7, 2, 1, 2}};

} // namespace

TEST_CASE("Gamma parameters are validated")
{
    const auto k = make_field(-20);
    CHECK(kind_of([&] { validate(GammaParams{3, 1, k}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { validate(GammaParams{9, 1, k}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { validate(GammaParams{5, 10, k}); }) == ErrorKind::InvalidArgument);
    CHECK_NOTHROW(validate(GammaParams{5, 2, k}));
}

TEST_CASE("Gamma generators for p = 5, m = 1, d_K = -20")
{
    const GammaParams gp{5, 1, make_field(-20)};
    const auto g = gamma_generators(gp);
    CHECK(g.alpha == GLMatModN(6, 0, 0, 6, 25));
    CHECK(g.beta == GLMatModN(1, 0, 5, 1, 25));  // -C pm = -25 = 0 mod 25
    CHECK(power(g.alpha, 5) == GLMatModN::identity(25));
    CHECK(power(g.beta, 5) == GLMatModN::identity(25));
}

TEST_CASE("Gamma has p^2 distinct elements matching the closed form")
{
    for (long d : {-20L, -7L})
        for (long p : {5L, 7L})
            for (long m : {1L, 2L}) {
                const GammaParams gp{p, m, make_field(d)};
                const auto els = gamma_enumeration(gp);
                CHECK(static_cast<long>(els.size()) == p * p);
                CHECK(std::set<GLMatModN>(els.begin(), els.end()).size() == els.size());
                const auto gen = gamma_generators(gp);
                for (long k = 0; k < p; ++k)
                    for (long l = 0; l < p; ++l) {
                        const GLMatModN want = power(gen.alpha, k) * power(gen.beta, l);
                        CHECK(gamma_element(gp, k, l) == want);
                        CHECK(els[static_cast<size_t>(k * p + l)] == want);
                    }
            }
}

TEST_CASE("fixed field labels")
{
    const auto labels = fixed_field_labels(5);
    CHECK(labels.size() == 6);
    CHECK(labels[0] == FixedFieldLabel{0, 1});
    CHECK(labels[1] == FixedFieldLabel{1, 0});
    CHECK(labels[5] == FixedFieldLabel{1, 4});
    CHECK(kind_of([] { fixed_field_solution({2, 1}, GammaParams{5, 1, make_field(-20)}); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("the exponent change tracks the determinant of the acting matrix")
{
    // zeta_{p^2} goes to zeta^{det}; det(alpha^k beta^l) = 1 + (2k - Bl) pm mod p^2.
    for (long d : {-20L, -7L, -43L})
        for (long p : {5L, 7L, 11L})
            for (long m : {1L, 2L, 3L}) {
                if (m % p == 0) continue;
                const GammaParams gp{p, m, make_field(d)};
                for (long k = 0; k < p; ++k)
                    for (long l = 0; l < p; ++l) {
                        const GLMatModN g = gamma_element(gp, k, l);
                        const std::int64_t det = mod(g.a() * g.d() - g.b() * g.c(), p * p);
                        const std::int64_t x_only = gamma_action_exponent({k, l}, Integer(1), Integer(0), gp);
                        // det is unchanged by the sign normalization.
                        CHECK(x_only == mod(det - 1, p * p));
                        const std::int64_t y_only = gamma_action_exponent({k, l}, Integer(0), Integer(1), gp);
                        CHECK(y_only == mod(-6 * p * l, p * p));
                    }
            }
}

TEST_CASE("each fixed-field solution is fixed by its own subgroup only")
{
    for (long d : {-20L, -7L, -43L, -47L})
        for (long p : {5L, 7L, 11L})
            for (long m : {1L, 2L, 3L}) {
                if (m % p == 0) continue;
                const GammaParams gp{p, m, make_field(d)};
                const auto labels = fixed_field_labels(p);
                for (const auto& lab : labels) {
                    const auto sol = fixed_field_solution(lab, gp);
                    CHECK(gamma_action_exponent(lab, sol.x, sol.y, gp) == 0);
                    CHECK(sol.y_mod_p == mod(sol.y, p));
                    int moved = 0;
                    for (const auto& other : labels)
                        if (!(other == lab) && gamma_action_exponent(other, sol.x, sol.y, gp) != 0) ++moved;
                    CHECK(moved >= 1);
                }
            }
}

TEST_CASE("normal-basis values against the independent Siegel product")
{
    const Bits prec = 256;
    for (long d : {-20L, -7L}) {
        const GammaParams gp{5, 1, make_field(d)};
        const BigComplex t = theta(gp.field, prec);
        const BigComplex g = pow(oracle::siegel(Rational(0), Rational(1, 5), t, prec), 12);
        for (const auto& lab : fixed_field_labels(5)) {
            const auto nb = normal_basis_value(lab, gp, prec);
            CHECK(nb.terms == 5);
            const BigComplex z = root_of_unity(25, mod(nb.solution.x, 25), prec) * pow(g, nb.solution.y.get_si());
            BigComplex sum(0L, prec), zs(1L, prec);
            for (int s = 0; s < 5; ++s) {
                sum = sum + zs;
                zs = zs * z;
            }
            CHECK(relative_error(nb.value, sum) < pow2(-150, 64));
        }
        const auto full = normal_basis_value_full(gp, prec);
        CHECK(full.full);
        BigComplex zsum(0L, prec), gsum(0L, prec);
        for (long s = 0; s < 5; ++s) {
            zsum = zsum + root_of_unity(25, s, prec);
            gsum = gsum + pow(g, s);
        }
        CHECK(relative_error(full.value, zsum * gsum) < pow2(-150, 64));
    }
}

TEST_CASE("Hensel parameters are validated")
{
    const auto k = make_field(-20);
    CHECK(kind_of([&] { hensel_beta0({5, 1, 1, 0}, k); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { hensel_beta0({5, 1, 1, 1}, k); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { hensel_beta0({4, 1, 2, 1}, k); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { hensel_beta0({5, 5, 2, 1}, k); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("Hensel lift: root, target congruence, determinant and power steps")
{
    for (long d : {-20L, -7L})
        for (auto [p, m, l, n] : kHensel) {
            const auto k = make_field(d);
            const HenselParams hp{p, m, n, l};
            const HenselResult r = hensel_beta0(hp, k);
            CHECK(r.ok);
            CHECK(r.derivative_unit);
            CHECK(r.root_modulus == ipow(p, 2 * (n - l) - l));
            CHECK(divides(r.root_modulus, hensel_polynomial(hp, k, r.x0)));
            CHECK(r.beta0.det() == 1);
            CHECK(divides(r.target_modulus, r.beta0.a - r.target.a));
            CHECK(divides(r.target_modulus, r.beta0.b - r.target.b));
            CHECK(divides(r.target_modulus, r.beta0.c - r.target.c));
            CHECK(divides(r.target_modulus, r.beta0.d - r.target.d));

            // Exact integer powers, no modular shortcuts.
            CHECK(r.steps.size() == static_cast<size_t>(2 * (n - l) - l + 1));
            for (const auto& st : r.steps) {
                const Integer level = ipow(p, l + st.k) * m;
                const IntMat2 b = power(r.beta0, ipow(p, st.k));
                const bool ident = divides(level, b.a - 1) && divides(level, b.b) && divides(level, b.c) &&
                                   divides(level, b.d - 1);
                CHECK(ident == st.congruent_to_identity);
                CHECK(st.ok);
                CHECK(mod(Integer(b.c / level), p) == st.lower_left_unit);
                CHECK(st.lower_left_unit != 0);
            }
        }
}

TEST_CASE("g(theta) orbit product: ratio is the predicted root of unity")
{
    const Bits prec = 256;
    for (long d : {-20L, -7L})
        for (auto [p, m, l, n] : kHensel) {
            const auto k = make_field(d);
            const HenselParams hp{p, m, n, l};
            const GThetaProduct g = g_theta_product(hp, k, prec);
            const long count = ipow(p, n - 2 * l).get_si();
            const long order = ipow(p, n - l).get_si();
            CHECK(static_cast<long>(g.orbit.size()) == count);
            CHECK(g.root_order == order);

            const HenselResult r = hensel_beta0(hp, k);
            const IntMat2 last = power(r.beta0, Integer(count));
            const Integer den = Integer(order) * m;
            REQUIRE(divides(den, last.c));
            const Integer c = last.c / den;
            CHECK(c == g.c);
            const BigComplex want = root_of_unity(order, mod(-6 * c, order), prec);
            CHECK(abs(g.ratio - want) < oracle::tol("1e-30"));
            CHECK(g.ratio_error < oracle::tol("1e-30"));
            CHECK(g.certified);

            // The orbit is the (0, 1/den) orbit under beta_0 mod den.
            const GLMatModN b(r.beta0, den.get_si());
            SiegelIndex cur = SiegelIndex::from_fraction(0, 1, den.get_si());
            for (long s = 0; s < count; ++s) {
                // GLMatModN stores beta_0 up to sign.
                CHECK((g.orbit[static_cast<size_t>(s)] == cur || g.orbit[static_cast<size_t>(s)] == cur.negated()));
                cur = act_on_index(cur, b);
            }
            if (count == 1) {
                const BigComplex direct = pow(oracle::siegel(Rational(0), make_rational(Integer(1), den), theta(k, prec), prec), 12 * m);
                CHECK(relative_error(g.value, direct) < pow2(-150, 64));
            }
        }
}
