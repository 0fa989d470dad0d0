#include "cmfield/errors.hpp"
#include "cmfield/galois.hpp"
#include "cmfield/invariants.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>
#include <set>

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

std::int64_t det_mod(const GLMatModN& m) { return mod(m.a() * m.d() - m.b() * m.c(), m.modulus()); }

// r and -r give the same g^12 up to sign; compare index sets under that identification.
SiegelIndex sym(const SiegelIndex& r) { return std::min(r, r.negated()); }

std::vector<BigComplex> random_values(std::mt19937_64& rng, long n, Bits prec)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<BigComplex> v;
    for (long i = 0; i < n; ++i) v.emplace_back(BigReal(u(rng), prec), BigReal(u(rng), prec));
    return v;
}

} // namespace

TEST_CASE("w_group for N = 2 by brute force")
{
    for (std::int64_t d : {-20, -43, -47, -15}) {
        const auto k = make_field(d);
        std::set<GLMatModN> brute;
        for (std::int64_t t = 0; t < 2; ++t)
            for (std::int64_t s = 0; s < 2; ++s) {
                const GLMatModN m = w_matrix(k, 2, t, s);
                if (m.invertible()) brute.insert(m);
            }
        const auto w = w_group(k, 2);
        CHECK(w.size() == brute.size());
        for (const auto& e : w) CHECK(brute.count(e.matrix) == 1);
        CHECK(static_cast<Integer>(w.size()) == degree_data(k, 2).ray_over_hilbert);
    }
}

TEST_CASE("W elements have the (t - Bs, -Cs; s, t) shape")
{
    const auto k = make_field(-20);
    for (const auto& e : w_group(k, 12)) {
        CHECK(e.matrix == GLMatModN(e.t - k.b_theta * e.s, -k.c_theta * e.s, e.s, e.t, 12));
        CHECK(e.matrix.invertible());
    }
}

TEST_CASE("coset representatives: counts and identity first")
{
    for (std::int64_t d : {-20, -23, -43, -47, -52}) {
        const auto k = make_field(d);
        for (std::int64_t n = 2; n <= 16; ++n) {
            const auto c = w_cosets_ring(k, n);
            CHECK(static_cast<Integer>(c.size()) == degree_data(k, n).ring_over_hilbert);
            CHECK(c.front().matrix == GLMatModN::identity(n));
        }
    }
    CHECK(w_cosets_ring(make_field(-43), 2).size() == 3);
}

TEST_CASE("cosets for d_K = -20, N = 12 match the reference representatives up to scalars")
{
    const auto k = make_field(-20);
    const std::vector<GLMatModN> reference{{1, 0, 0, 1, 12}, {1, 6, 6, 1, 12}, {2, 9, 3, 2, 12}, {3, 2, 2, 3, 12},
                                           {3, 4, 4, 3, 12}, {4, 9, 3, 4, 12}, {6, 7, 1, 6, 12}, {0, 7, 1, 0, 12}};
    const auto ours = w_cosets_ring(k, 12);
    REQUIRE(ours.size() == reference.size());
    for (const auto& p : reference) {
        int hits = 0;
        for (const auto& o : ours)
            for (std::int64_t t = 1; t < 12; ++t)
                if (std::gcd(t, std::int64_t{12}) == 1 && o.matrix.scaled(t) == p) {
                    ++hits;
                    break;
                }
        CHECK(hits == 1);
    }
}

TEST_CASE("act_on_index examples")
{
    const SiegelIndex r = SiegelIndex::from_fraction(0, 1, 12);
    // Matrices are kept up to sign, so results are compared up to r -> -r.
    CHECK(sym(act_on_index(r, GLMatModN(1, 5, 3, 2, 12))) == sym(SiegelIndex(Rational(1, 4), Rational(1, 6))));
    CHECK(sym(act_on_index(r, GLMatModN(6, 7, 1, 6, 12))) == sym(SiegelIndex(Rational(1, 12), Rational(1, 2))));
    CHECK(act_on_index(r, GLMatModN::identity(12)) == r);
}

TEST_CASE("right action: (r g) h = r (g h)")
{
    std::mt19937_64 rng(31);
    for (std::int64_t n = 2; n <= 24; ++n) {
        std::uniform_int_distribution<std::int64_t> e(0, n - 1);
        auto rand_gl = [&] {
            for (;;) {
                const GLMatModN m(e(rng), e(rng), e(rng), e(rng), n);
                if (m.invertible()) return m;
            }
        };
        for (int i = 0; i < 10; ++i) {
            const GLMatModN g = rand_gl(), h = rand_gl();
            std::int64_t a = e(rng), b = e(rng);
            if (a == 0 && b == 0) b = 1;
            const SiegelIndex r = SiegelIndex::from_fraction(a, b, n);
            CHECK(sym(act_on_index(act_on_index(r, g), h)) == sym(act_on_index(r, g * h)));
        }
    }
}

TEST_CASE("scalars permute the default base family")
{
    for (std::int64_t n = 2; n <= 24; ++n) {
        const IndexFamily base = default_base_family(n);
        std::set<SiegelIndex> want;
        for (const auto& [r, e] : base.exponents) want.insert(sym(r));
        for (std::int64_t t = 1; t < n; ++t) {
            if (std::gcd(t, n) != 1) continue;
            std::set<SiegelIndex> got;
            for (const auto& [r, e] : act_on_family(base, GLMatModN(t, 0, 0, t, n)).exponents) got.insert(sym(r));
            CHECK(got == want);
        }
    }
}

TEST_CASE("conjugate specs for d_K = -20, N = 12")
{
    const auto k = make_field(-20);
    const auto specs = conjugate_specs(k, 12, default_base_family(12));
    CHECK(specs.size() == 16);
    CHECK(specs.front().action == GLMatModN::identity(12));
    CHECK(specs.front().form == ReducedForm{1, 0, 5});
    for (const auto& s : specs) {
        CHECK(s.family.exponents.size() == 2);
        CHECK(s.family.total_exponent() == 48);
        CHECK(modularity_check(s.family).ok);
    }
    IndexFamily bad;
    bad.level = 5;
    bad.add(SiegelIndex::from_fraction(0, 1, 5), 1);
    CHECK(kind_of([&] { conjugate_specs(k, 5, bad); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("conjugate counts equal [H_O : K] for |d_K| <= 100, N <= 12")
{
    for (std::int64_t d = -7; d >= -100; --d) {
        if (!is_fundamental_discriminant(d)) continue;
        const auto k = make_field(d);
        for (std::int64_t n = 2; n <= 12; ++n)
            CHECK(Integer(static_cast<unsigned long>(conjugate_specs(k, n, default_base_family(n)).size())) ==
                  degree_data(k, n).ring_over_k);
    }
}

TEST_CASE("decompose_gl round trip")
{
    std::mt19937_64 rng(32);
    for (std::int64_t n = 2; n <= 24; ++n) {
        std::uniform_int_distribution<std::int64_t> e(0, n - 1);
        for (int i = 0; i < 20; ++i) {
            const GLMatModN g(e(rng), e(rng), e(rng), e(rng), n);
            if (!g.invertible()) continue;
            const auto dec = decompose_gl(g);
            CHECK(det_mod(dec.sl_part) == 1);
            CHECK(GLMatModN(1, 0, 0, dec.d, n) * dec.sl_part == g);
        }
    }
    const auto ex = decompose_gl(GLMatModN(1, 5, 3, 2, 12));
    CHECK(mod(ex.d, 12) == 11);
}

TEST_CASE("sl2_lift: 200 random matrices per level")
{
    std::mt19937_64 rng(33);
    for (std::int64_t n = 2; n <= 24; ++n) {
        std::uniform_int_distribution<std::int64_t> e(0, n - 1);
        int done = 0;
        while (done < 200) {
            const std::int64_t a = e(rng), b = e(rng), c = e(rng);
            // Solve for d when a is a unit, otherwise resample.
            if (std::gcd(a, n) != 1) continue;
            const std::int64_t d = mod(inverse_mod(a, n) * (1 + b * c), n);
            const IntMat2 m{a, b, c, d};
            const IntMat2 l = sl2_lift(m, n);
            CHECK(l.det() == 1);
            CHECK(mod(l.a, n) == a);
            CHECK(mod(l.b, n) == b);
            CHECK(mod(l.c, n) == c);
            CHECK(mod(l.d, n) == d);
            ++done;
        }
        // Matrices with no unit entry in the first row still lift.
        const IntMat2 z = sl2_lift(IntMat2{0, n - 1, 1, 0}, n);
        CHECK(z.det() == 1);
    }
}

TEST_CASE("AbelianGroupSpec indexing")
{
    const AbelianGroupSpec g{{2, 3, 4}};
    CHECK(g.order() == 24);
    for (long i = 0; i < 24; ++i) {
        CHECK(g.index_of(g.element(i)) == i);
        CHECK(g.add(i, g.negate(i)) == 0);
    }
    CHECK(g.element(1) == std::vector<long>{1, 0, 0});
}

TEST_CASE("Frobenius determinant: trivial group and Z/2 closed form")
{
    const Bits prec = 256;
    const std::vector<BigComplex> one{BigComplex(BigReal(3.25, prec), BigReal(-1.5, prec))};
    CHECK(relative_error(frobenius_lhs(AbelianGroupSpec{{1}}, one), one[0]) < pow2(-200, 64));
    CHECK(relative_error(frobenius_rhs(AbelianGroupSpec{{1}}, one), one[0]) < pow2(-200, 64));

    const BigComplex a(BigReal(1.5, prec), BigReal(0.5, prec)), b(BigReal(-0.25, prec), BigReal(2L, prec));
    const std::vector<BigComplex> f{a, b};
    const BigComplex want = (a + b) * (a - b);
    CHECK(relative_error(frobenius_lhs(AbelianGroupSpec{{2}}, f), want) < pow2(-200, 64));
    CHECK(relative_error(frobenius_rhs(AbelianGroupSpec{{2}}, f), want) < pow2(-200, 64));
}

TEST_CASE("Frobenius determinant identity on random groups")
{
    std::mt19937_64 rng(34);
    const std::vector<std::vector<long>> shapes{{3}, {4}, {2, 2}, {5}, {2, 3}, {6}, {2, 4}, {3, 3}, {2, 2, 2}, {7}};
    for (const auto& s : shapes) {
        const AbelianGroupSpec g{s};
        const auto f = random_values(rng, g.order(), 256);
        CHECK(relative_error(frobenius_lhs(g, f), frobenius_rhs(g, f)) < pow2(-256 + 48, 64));
    }
}

TEST_CASE("determinant of a known matrix")
{
    std::vector<BigComplex> m;
    for (long v : {0L, 2L, 1L, 1L, 1L, 0L, 3L, 4L, 5L}) m.emplace_back(v, 128);
    CHECK(relative_error(determinant(m, 3), BigComplex(-9L, 128)) < pow2(-100, 64));
}

TEST_CASE("character sums")
{
    const AbelianGroupSpec g{{2, 3}};
    std::vector<BigComplex> constant(6, BigComplex(2L, 256));
    CHECK(!character_sum_test(g, constant).all_nonzero);

    std::vector<BigComplex> indicator(6, BigComplex(0L, 256));
    indicator[0] = BigComplex(1L, 256);
    const auto rep = character_sum_test(g, indicator);
    CHECK(rep.all_nonzero);
    CHECK(rep.margins.size() == 6);
    for (const auto& m : rep.margins) CHECK(abs(m - BigReal(1L, 256)) < pow2(-200, 64));
}

TEST_CASE("ratio power exponent")
{
    CHECK(ratio_power_exponent({BigReal(1L, 64)}) == 1L);
    CHECK(ratio_power_exponent({BigReal(1L, 64), BigReal(0.3, 64), BigReal(0.1, 64)}) == 1L);
    CHECK(!ratio_power_exponent({BigReal(1L, 64), BigReal(1L, 64)}).has_value());
    CHECK(!ratio_power_exponent({BigReal(1L, 64), BigReal(2L, 64)}).has_value());
    // ratio 1/2, n = 4: (1/2)^m <= 1/4 first at m = 2.
    CHECK(ratio_power_exponent({BigReal(1L, 64), BigReal(0.5, 64), BigReal(0.25, 64), BigReal(0.1, 64)}) == 2L);
    // ratio 0.9, n = 2: 0.9^m <= 0.5 first at m = 7.
    CHECK(ratio_power_exponent({BigReal(10L, 64), BigReal(9L, 64)}) == 7L);
}
